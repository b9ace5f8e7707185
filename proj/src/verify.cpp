#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "thetaforge/registry.hpp"
#include "thetaforge/sampling.hpp"

namespace thetaforge {

namespace {

constexpr double kPoleMargin = 1e-2;
constexpr double kErrorFloor = 1e-30;
constexpr int kMaxDraws = 1000;

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t sub_seed(std::uint64_t seed, const std::string& id, std::uint64_t combo) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(seed >> (8 * i));
    h = fnv1a(h, bytes, 8);
    h = fnv1a(h, id.data(), id.size());
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(combo >> (8 * i));
    return fnv1a(h, bytes, 8);
}

std::vector<std::map<std::string, long>> param_combos(const std::vector<ParamRange>& params) {
    std::vector<std::map<std::string, long>> combos{{}};
    for (const auto& p : params) {
        std::vector<std::map<std::string, long>> next;
        for (const auto& c : combos)
            for (long v = p.lo; v <= p.hi; ++v) {
                if (p.parity == ParamRange::Parity::odd && v % 2 == 0) continue;
                if (p.parity == ParamRange::Parity::even && v % 2 != 0) continue;
                auto d = c;
                d[p.name] = v;
                next.push_back(std::move(d));
            }
        combos = std::move(next);
    }
    std::vector<std::map<std::string, long>> out;
    for (const auto& c : combos) {
        bool keep = true;
        for (const auto& p : params) {
            if (p.exclude_multiples_of.empty()) continue;
            const long m = c.at(p.exclude_multiples_of);
            if (m != 0 && c.at(p.name) % m == 0) keep = false;
        }
        if (keep) out.push_back(c);
    }
    return out;
}

bool degenerate(const DegeneracyGuard& g, const Bindings& b, const ModularPoint& mp) {
    const auto it = b.find(g.var);
    if (it == b.end()) return false;
    const cplx e2iy = std::exp(2.0 * kI * it->second);
    for (long k = -10; k <= 10; ++k) {
        const cplx target = g.mode == DegeneracyGuard::Mode::kronecker ? mp.q_grains(24 * k) : -mp.q_grains(24 * k + 12);
        if (std::abs(e2iy - target) < 1e-6) return true;
    }
    return false;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt(cplx z) { return fmt(z.real()) + (std::signbit(z.imag()) ? "" : "+") + fmt(z.imag()) + "i"; }

struct Sample {
    cplx tau;
    Bindings bindings;
};

std::string describe(const Sample& s) {
    std::string out = "tau=" + fmt(s.tau);
    for (const auto& [k, v] : s.bindings) out += ", " + k + "=" + (v.imag() == 0.0 ? fmt(v.real()) : fmt(v));
    return out;
}

struct Outcome {
    double error = 0.0;
    std::string failure;
};

Outcome evaluate_sample(const IdentityRecord& rec, const Sample& s) {
    Outcome o;
    try {
        const ModularPoint mp = ModularPoint::from_tau(s.tau);
        // long double keeps the n-fold sums, whose terms cancel by several
        // orders of magnitude, clear of double rounding
        const auto l = eval_expr_ld(*rec.lhs, s.bindings, mp);
        const auto r = eval_expr_ld(*rec.rhs, s.bindings, mp);
        const double diff = static_cast<double>(std::abs(l - r));
        switch (rec.error_mode) {
            case ErrorMode::relative:
                o.error = diff / std::max({static_cast<double>(std::abs(l)), static_cast<double>(std::abs(r)), kErrorFloor});
                break;
            case ErrorMode::terms:
                o.error = diff / std::max({term_scale(*rec.lhs, s.bindings, mp), term_scale(*rec.rhs, s.bindings, mp),
                                           kErrorFloor});
                break;
            case ErrorMode::absolute: o.error = diff; break;
        }
        if (!std::isfinite(o.error)) o.failure = "non-finite value";
    } catch (const std::exception& e) {
        o.failure = e.what();
    }
    return o;
}

std::string grain_text(long g) {
    const Rational r(g, kGrainsPerQ);
    if (r.is_integer()) return "q^" + std::to_string(r.num());
    return "q^(" + r.str() + ")";
}

}  // namespace

bool glob_match(const std::string& pattern, const std::string& text) {
    std::size_t p = 0, t = 0, star = std::string::npos, mark = 0;
    while (t < text.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
            ++p;
            ++t;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = t;
        } else if (star != std::string::npos) {
            p = star + 1;
            t = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

VerificationReport verify_numeric(const IdentityRecord& rec, const NumericOptions& opts) {
    VerificationReport rep;
    rep.id = rec.id;
    rep.backend = Backend::numeric;
    rep.seed = opts.seed;
    if (!rec.backends.contains(Backend::numeric)) {
        rep.error = "record has no numeric backend";
        return rep;
    }

    // Draw serially so the points depend only on the seed.
    std::vector<Sample> samples;
    const auto combos = param_combos(rec.params);
    for (std::size_t ci = 0; ci < combos.size(); ++ci) {
        Rng rng(sub_seed(opts.seed, rec.id, ci));
        for (long s = 0; s < opts.samples; ++s) {
            bool accepted = false;
            for (int draw = 0; draw < kMaxDraws && !accepted; ++draw) {
                Sample smp;
                smp.tau = opts.fixed_tau ? *opts.fixed_tau : cplx(rng.uniform(-0.5, 0.5), rng.uniform(0.5, 1.5));
                for (const auto& [k, v] : combos[ci]) smp.bindings[k] = static_cast<double>(v);
                for (const auto& d : rec.vars) {
                    smp.bindings[d.name] = d.kind == VarDomain::Kind::box
                                               ? rng.lattice_point(smp.tau, d.lo0, d.hi0, d.lo1, d.hi1)
                                               : cplx(rng.uniform(d.lo0, d.hi0), rng.uniform(d.lo1, d.hi1));
                }
                try {
                    const ModularPoint mp = ModularPoint::from_tau(smp.tau);
                    if (rec.guard && degenerate(*rec.guard, smp.bindings, mp)) continue;
                    const double dist = std::min(pole_distance(*rec.lhs, smp.bindings, mp),
                                                 pole_distance(*rec.rhs, smp.bindings, mp));
                    if (dist < kPoleMargin) continue;
                } catch (const Error&) {
                    continue;
                }
                samples.push_back(std::move(smp));
                accepted = true;
            }
            if (!accepted) {
                rep.error = "sampler exhausted: no admissible point after " + std::to_string(kMaxDraws) + " draws";
                rep.samples = static_cast<long>(samples.size());
                return rep;
            }
        }
    }

    std::vector<Outcome> outcomes(samples.size());
    const long count = static_cast<long>(samples.size());
    if (opts.parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < count; ++i) outcomes[static_cast<std::size_t>(i)] = evaluate_sample(rec, samples[static_cast<std::size_t>(i)]);
    } else {
        for (long i = 0; i < count; ++i) outcomes[static_cast<std::size_t>(i)] = evaluate_sample(rec, samples[static_cast<std::size_t>(i)]);
    }

    double worst = 0.0;
    std::size_t worst_at = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (!outcomes[i].failure.empty()) {
            rep.error = "evaluation failed: " + outcomes[i].failure;
            rep.witness = describe(samples[i]);
            rep.samples = count;
            return rep;
        }
        if (outcomes[i].error > worst) {
            worst = outcomes[i].error;
            worst_at = i;
        }
    }
    rep.samples = count;
    rep.max_rel_error = worst;
    rep.pass = worst <= opts.tol;
    if (!rep.pass) rep.witness = describe(samples[worst_at]);
    return rep;
}

VerificationReport verify_formal(const IdentityRecord& rec, long order) {
    VerificationReport rep;
    rep.id = rec.id;
    rep.backend = Backend::formal;
    const long q_order = rec.formal_order > 0 ? rec.formal_order : order;
    rep.order = q_order;
    if (!rec.backends.contains(Backend::formal)) {
        rep.error = "record has no formal backend";
        return rep;
    }
    if (!rec.params.empty()) {
        rep.error = "not formal-eligible: integer parameters";
        return rep;
    }
    std::set<std::string> names = free_symbols(*rec.lhs);
    for (const auto& s : free_symbols(*rec.rhs)) names.insert(s);
    const std::vector<std::string> vars(names.begin(), names.end());

    const long through = kGrainsPerQ * q_order + 1;  // exponents up to q^order
    long trunc = through + 2 * kGrainsPerQ;
    try {
        for (int attempt = 0; attempt < 6; ++attempt, trunc += through / 2 + 2 * kGrainsPerQ) {
            const FormalFraction l = compile_formal(*rec.lhs, vars, trunc);
            const FormalFraction r = compile_formal(*rec.rhs, vars, trunc);
            FormalSeries a(vars, 0), b(vars, 0);
            try {
                a = fs_mul(l.num, fs_invert(l.den));
                b = fs_mul(r.num, fs_invert(r.den));
            } catch (const FormalError&) {
                a = fs_mul(l.num, r.den);
                b = fs_mul(r.num, l.den);
            }
            if (std::min(a.truncation_order(), b.truncation_order()) < through) continue;
            const FormalComparison cmp = fs_equal_through(a, b, through);
            rep.pass = cmp.equal;
            if (cmp.first_mismatch) {
                const auto& m = *cmp.first_mismatch;
                rep.first_mismatch = grain_text(m.grain) + ": lhs " + m.lhs.str(vars) + ", rhs " + m.rhs.str(vars);
                rep.witness = "coefficient of " + grain_text(m.grain);
            }
            return rep;
        }
        rep.error = "series lost too much precision to reach the requested order";
    } catch (const Error& e) {
        rep.error = e.what();
    }
    return rep;
}

std::vector<VerificationReport> run_all(const RunConfig& config) {
    std::vector<IdentityRecord> records;
    if (config.builtin) records = builtin_catalog();
    records.insert(records.end(), config.extra.begin(), config.extra.end());
    if (config.negative_controls) {
        auto neg = negative_controls();
        records.insert(records.end(), neg.begin(), neg.end());
    }

    std::vector<VerificationReport> reports;
    for (const auto& rec : records) {
        if (!glob_match(config.filter, rec.id)) continue;
        for (Backend b : rec.backends) {
            if (!config.backends.contains(b)) continue;
            const auto start = std::chrono::steady_clock::now();
            VerificationReport rep;
            if (b == Backend::numeric) {
                NumericOptions o;
                o.samples = config.samples;
                o.tol = config.tol;
                o.seed = config.seed;
                o.fixed_tau = config.fixed_tau;
                o.parallel = config.parallel;
                rep = verify_numeric(rec, o);
            } else {
                rep = verify_formal(rec, config.order);
            }
            rep.seed = config.seed;
            if (config.timing)
                rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            reports.push_back(std::move(rep));
        }
    }
    std::stable_sort(reports.begin(), reports.end(), [](const auto& x, const auto& y) {
        return x.id != y.id ? x.id < y.id : x.backend < y.backend;
    });
    return reports;
}

std::string report_json(const VerificationReport& r) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["backend"] = to_string(r.backend);
    j["pass"] = r.pass;
    auto opt = [](const auto& o) -> nlohmann::ordered_json { return o ? nlohmann::ordered_json(*o) : nullptr; };
    j["max_rel_error"] = (r.max_rel_error && std::isfinite(*r.max_rel_error)) ? nlohmann::ordered_json(*r.max_rel_error)
                                                                             : nlohmann::ordered_json(nullptr);
    j["first_mismatch"] = opt(r.first_mismatch);
    j["samples"] = opt(r.samples);
    j["order"] = opt(r.order);
    j["seed"] = r.seed;
    j["elapsed_ms"] = opt(r.elapsed_ms);
    j["witness"] = opt(r.witness);
    j["error"] = opt(r.error);
    return j.dump();
}

std::string report_text(const VerificationReport& r) {
    std::ostringstream os;
    os << (r.pass ? "PASS " : "FAIL ") << to_string(r.backend) << " " << r.id;
    if (r.max_rel_error) os << "  max_err=" << *r.max_rel_error;
    if (r.samples) os << "  samples=" << *r.samples;
    if (r.order) os << "  order=" << *r.order;
    if (r.elapsed_ms) os << "  ms=" << *r.elapsed_ms;
    if (r.first_mismatch) os << "\n    first mismatch at " << *r.first_mismatch;
    if (r.witness && r.backend == Backend::numeric) os << "\n    witness: " << *r.witness;
    if (r.error) os << "\n    error: " << *r.error;
    return os.str();
}

}  // namespace thetaforge

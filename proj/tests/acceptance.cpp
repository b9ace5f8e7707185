// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "instances.hpp"
#include "oracles.hpp"
#include "thetaforge/decompose.hpp"
#include "thetaforge/functions.hpp"
#include "thetaforge/registry.hpp"

using namespace thetaforge;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... a) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

// 1: every catalog record, numeric, 20 samples, 1e-9, seed 0, under 60 s
Outcome numeric_catalog() {
    RunConfig c;
    c.backends = {Backend::numeric};
    const auto t0 = Clock::now();
    const auto reps = run_all(c);
    const double t = seconds_since(t0);
    std::size_t records = 0, failed = 0;
    std::set<std::string> ids;
    for (const auto& r : builtin_catalog()) ids.insert(r.id);
    for (const auto& r : reps) {
        ++records;
        if (!r.pass) {
            ++failed;
            std::fprintf(stderr, "  numeric failure: %s\n", report_text(r).c_str());
        }
    }
    const bool ok = failed == 0 && records == ids.size() && ids.size() >= 38 && t < 60.0;
    return {ok, fmt("%zu records, %zu failed, %.2f s", records, failed, t)};
}

// 2: formal suite, zero mismatches, under 30 s
Outcome formal_suite() {
    const std::vector<std::string> ids{
        "kiepert-quintuple",   "kiepert-chi5-n",      "kiepert-chi5-square",  "kiepert-chi5-alt-n",
        "kiepert-chi15-alt-n", "kiepert-chi5-chi4-n", "kiepert-mod5-chi3",    "kiepert-mod5-alt-n",
        "kiepert-chi5-half-n", "kiepert-chi15-half-n", "kiepert-chi5-chi4-half", "kiepert-cubic-n-square"};
    std::map<std::string, IdentityRecord> by_id;
    for (auto& r : builtin_catalog()) by_id[r.id] = r;
    const auto t0 = Clock::now();
    std::size_t bad = 0;
    for (const auto& id : ids) {
        const auto it = by_id.find(id);
        if (it == by_id.end()) {
            std::fprintf(stderr, "  missing formal record %s\n", id.c_str());
            ++bad;
            continue;
        }
        const VerificationReport r = verify_formal(it->second, 40);
        const long want = id == "kiepert-quintuple" ? 10 : 40;
        if (!r.pass || r.order.value_or(0) < want) {
            std::fprintf(stderr, "  formal failure: %s\n", report_text(r).c_str());
            ++bad;
        }
    }
    const double t = seconds_since(t0);
    return {bad == 0 && t < 30.0, fmt("%zu records, %zu mismatched, %.2f s", ids.size(), bad, t)};
}

// 3: library against independent oracles
Outcome cross_oracles() {
    std::mt19937_64 g(3);
    double theta_worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const cplx tau = oracle::random_tau(g);
        const cplx z = oracle::random_point(g, tau);
        const ModularPoint mp = nome_from_tau(tau);
        for (int k = 1; k <= 4; ++k)
            theta_worst = std::max(theta_worst, oracle::rel(theta(k, z, mp), theta_product(ThetaKind(k), z, mp)));
    }
    double k_worst = 0.0;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int done = 0; done < 20;) {
        const cplx tau = oracle::random_tau(g);
        const cplx y(oracle::pi * u(g), oracle::pi * tau.imag() * (0.25 + 0.5 * u(g)));
        const cplx z = oracle::random_point(g, tau, 0.05, 0.95);
        if (lattice_distance(z, tau) < 0.05 || lattice_distance(y, tau) < 0.05) continue;
        const cplx lib = 0.5 * kI * kronecker_K(y, z, nome_from_tau(tau));
        k_worst = std::max(k_worst, oracle::rel(lib, oracle::kronecker_bilateral(y, z, tau)));
        ++done;
    }
    double wp_worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const cplx tau = oracle::random_tau(g);
        const cplx z = oracle::random_point(g, tau, 0.1, 0.45);
        wp_worst = std::max(wp_worst, oracle::rel(weierstrass_p(z, nome_from_tau(tau)), oracle::weierstrass_p(z, tau)));
    }
    const bool ok = theta_worst <= 1e-12 && k_worst <= 1e-10 && wp_worst <= 1e-8;
    return {ok, fmt("theta %.2e, K %.2e, wp %.2e", theta_worst, k_worst, wp_worst)};
}

// 4: reconstruction of random instances, 20 points each
Outcome decompositions() {
    std::mt19937_64 g(4);
    double fg_worst = 0.0, sp_worst = 0.0;
    int failures = 0;
    for (int i = 0; i < 50; ++i) {
        const instances::Instance in = instances::make(g, i % 2 == 1);
        try {
            const Decomposition d = decompose_FG([&](cplx z) { return in.F(z); }, [&](cplx z) { return in.G(z); },
                                                 in.zeros, in.f_pattern, in.g_pattern, in.mp);
            fg_worst = std::max(fg_worst, instances::reconstruction_error(in, d, g, 20));
        } catch (const Error& e) {
            std::fprintf(stderr, "  F/G instance %d: %s\n", i, e.what());
            ++failures;
        }
    }
    for (int i = 0; i < 20; ++i) {
        const instances::Instance in = instances::make(g, i % 2 == 1);
        try {
            const Decomposition d =
                decompose_simple_poles([&](cplx z) { return in.f(z); }, in.zeros, in.pattern(), in.mp);
            sp_worst = std::max(sp_worst, instances::reconstruction_error(in, d, g, 20));
        } catch (const Error& e) {
            std::fprintf(stderr, "  simple-pole instance %d: %s\n", i, e.what());
            ++failures;
        }
    }
    const bool ok = failures == 0 && fg_worst <= 1e-9 && sp_worst <= 1e-9;
    return {ok, fmt("50 F/G worst %.2e, 20 simple-pole worst %.2e, %d errors", fg_worst, sp_worst, failures)};
}

// runs every catalog record matching one of the globs numerically
std::pair<bool, std::string> suite(const std::vector<std::string>& globs, long samples, double tol) {
    NumericOptions o;
    o.samples = samples;
    o.tol = tol;
    std::size_t n = 0, bad = 0;
    double worst = 0.0;
    for (const auto& r : builtin_catalog()) {
        bool hit = false;
        for (const auto& p : globs) hit = hit || glob_match(p, r.id);
        if (!hit) continue;
        ++n;
        const VerificationReport rep = verify_numeric(r, o);
        worst = std::max(worst, rep.max_rel_error.value_or(1.0));
        if (!rep.pass) {
            ++bad;
            std::fprintf(stderr, "  %s\n", report_text(rep).c_str());
        }
    }
    return {bad == 0 && n > 0, fmt("%zu records, %zu failed, worst %.2e", n, bad, worst)};
}

// 5: quasi-periodicity, parity, half-periods at 100 points, 1e-10
Outcome symmetry_suites() {
    const auto [ok, d] = suite({"theta?-period-*", "parity-*", "half-period-*"}, 100, 1e-10);
    return {ok, d};
}

// 6: trigonometric limit for n = 1..12, absolute 1e-12
Outcome trig_limits() {
    std::vector<std::string> globs;
    for (int n = 1; n <= 12; ++n) globs.push_back("trig-limit-n" + std::to_string(n));
    const auto [ok, d] = suite(globs, 20, 1e-12);
    return {ok && d.rfind("12 records", 0) == 0, d};
}

// 7: negative controls fail with witnesses on both backends
Outcome negative_controls_fail() {
    std::set<Backend> failed_with_witness;
    std::ostringstream d;
    bool ok = true;
    for (const auto& r : negative_controls()) {
        for (Backend b : r.backends) {
            const VerificationReport rep = b == Backend::numeric ? verify_numeric(r, {}) : verify_formal(r, 40);
            const bool witnessed = !rep.pass && rep.witness && !rep.witness->empty() &&
                                   (b == Backend::numeric ? rep.max_rel_error.value_or(0.0) > 0.0
                                                          : rep.first_mismatch.has_value());
            if (witnessed) failed_with_witness.insert(b);
            else ok = false;
            d << r.id << " " << to_string(b) << (witnessed ? " failed; " : " DID NOT FAIL; ");
        }
    }
    return {ok && failed_with_witness.size() == 2, d.str()};
}

// 8: byte-identical json-lines for the same seed and config
Outcome determinism() {
    auto once = [] {
        RunConfig c;
        c.negative_controls = true;
        std::string s;
        for (const auto& r : run_all(c)) s += report_json(r) + "\n";
        return s;
    };
    const std::string a = once(), b = once();
    return {a == b && !a.empty(), fmt("%zu bytes, %s", a.size(), a == b ? "identical" : "differ")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"catalog numeric verification", numeric_catalog},
        {"formal suite", formal_suite},
        {"cross-oracle checks", cross_oracles},
        {"decomposition reconstruction", decompositions},
        {"quasi-periodicity, parity, half-periods", symmetry_suites},
        {"trigonometric limit n <= 12", trig_limits},
        {"negative controls", negative_controls_fail},
        {"deterministic output", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o{false, ""};
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}

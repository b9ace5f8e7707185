#include "thetaforge/qformal.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace thetaforge {

std::string GaussInt::str() const {
    if (im == 0) return re.get_str();
    if (re == 0) return (im == 1 ? std::string() : im == -1 ? std::string("-") : im.get_str()) + "i";
    mpz_class aim = abs(im);
    return "(" + re.get_str() + (im < 0 ? "-" : "+") + (aim == 1 ? std::string() : aim.get_str()) + "i)";
}

// ---------------------------------------------------------------- LaurentPoly

LaurentPoly LaurentPoly::constant(std::size_t arity, const GaussInt& c) {
    LaurentPoly p(arity);
    p.add_term(Monomial(arity, 0), c);
    return p;
}

LaurentPoly LaurentPoly::monomial(const Monomial& exps, const GaussInt& c) {
    LaurentPoly p(exps.size());
    p.add_term(exps, c);
    return p;
}

std::optional<GaussInt> LaurentPoly::as_constant() const {
    if (terms_.empty()) return GaussInt(0);
    if (terms_.size() != 1) return std::nullopt;
    const auto& [m, c] = *terms_.begin();
    if (std::any_of(m.begin(), m.end(), [](int e) { return e != 0; })) return std::nullopt;
    return c;
}

void LaurentPoly::add_term(const Monomial& exps, const GaussInt& c) {
    if (exps.size() != arity_) throw FormalError("monomial arity mismatch");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(exps, c);
    if (!inserted) {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& other) {
    if (other.arity_ != arity_) throw FormalError("laurent polynomial arity mismatch");
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& other) {
    if (other.arity_ != arity_) throw FormalError("laurent polynomial arity mismatch");
    for (const auto& [m, c] : other.terms_) add_term(m, -c);
    return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.arity_ != b.arity_) throw FormalError("laurent polynomial arity mismatch");
    LaurentPoly out(a.arity_);
    LaurentPoly::Monomial m(a.arity_);
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            for (std::size_t j = 0; j < m.size(); ++j) m[j] = ma[j] + mb[j];
            out.add_term(m, ca * cb);
        }
    }
    return out;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly out(arity_);
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

cplx LaurentPoly::evaluate(const std::vector<cplx>& values) const {
    if (values.size() != arity_) throw FormalError("laurent polynomial evaluation arity mismatch");
    cplx sum = 0.0;
    for (const auto& [m, c] : terms_) {
        cplx v = c.to_complex();
        for (std::size_t j = 0; j < m.size(); ++j) v *= std::pow(values[j], m[j]);
        sum += v;
    }
    return sum;
}

std::string LaurentPoly::str(const std::vector<std::string>& vars) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.str();
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (m[j] == 0) continue;
            os << "*" << (j < vars.size() ? vars[j] : "x" + std::to_string(j));
            if (m[j] != 1) os << "^" << m[j];
        }
    }
    return os.str();
}

// --------------------------------------------------------------- FormalSeries

FormalSeries::FormalSeries(std::vector<std::string> vars, long truncation_order)
    : vars_(std::move(vars)), truncation_(truncation_order) {}

FormalSeries FormalSeries::one(std::vector<std::string> vars, long truncation_order) {
    return constant(std::move(vars), GaussInt(1), truncation_order);
}

FormalSeries FormalSeries::constant(std::vector<std::string> vars, const GaussInt& c, long truncation_order) {
    FormalSeries s(std::move(vars), truncation_order);
    s.add_term(0, LaurentPoly::constant(s.vars_.size(), c));
    return s;
}

FormalSeries FormalSeries::term(std::vector<std::string> vars, long grain, const LaurentPoly& coeff,
                                long truncation_order) {
    FormalSeries s(std::move(vars), truncation_order);
    s.add_term(grain, coeff);
    return s;
}

void FormalSeries::add_term(long grain, const LaurentPoly& c) {
    if (c.arity() != vars_.size()) throw FormalError("coefficient arity does not match series variables");
    if (grain >= truncation_ || c.is_zero()) return;
    auto [it, inserted] = coeffs_.try_emplace(grain, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) coeffs_.erase(it);
    }
}

FormalSeries FormalSeries::shifted(long grains) const {
    FormalSeries out(vars_, truncation_ + grains);
    for (const auto& [e, c] : coeffs_) out.coeffs_.emplace(e + grains, c);
    return out;
}

FormalSeries FormalSeries::scaled(const GaussInt& c) const {
    FormalSeries out(vars_, truncation_);
    const LaurentPoly k = LaurentPoly::constant(vars_.size(), c);
    for (const auto& [e, p] : coeffs_) out.add_term(e, p * k);
    return out;
}

FormalSeries FormalSeries::truncated(long order) const {
    FormalSeries out(vars_, std::min(order, truncation_));
    for (const auto& [e, p] : coeffs_)
        if (e < out.truncation_) out.coeffs_.emplace(e, p);
    return out;
}

std::string FormalSeries::str(std::size_t max_terms) const {
    std::ostringstream os;
    std::size_t n = 0;
    for (const auto& [e, p] : coeffs_) {
        if (n++ == max_terms) {
            os << " + ...";
            break;
        }
        if (n > 1) os << " + ";
        os << "(" << p.str(vars_) << ")*q^(" << e << "/24)";
    }
    if (coeffs_.empty()) os << "0";
    os << " + O(q^(" << truncation_ << "/24))";
    return os.str();
}

// ----------------------------------------------------------------- operations

namespace {

void require_same_vars(const FormalSeries& a, const FormalSeries& b) {
    if (a.vars() != b.vars()) throw FormalError("formal series have different variable sets");
}

long product_truncation(const FormalSeries& a, const FormalSeries& b) {
    return std::min(a.truncation_order() + b.valuation(), b.truncation_order() + a.valuation());
}

}  // namespace

FormalSeries fs_add(const FormalSeries& a, const FormalSeries& b) {
    require_same_vars(a, b);
    FormalSeries out(a.vars(), std::min(a.truncation_order(), b.truncation_order()));
    for (const auto& [e, p] : a.coeffs()) out.add_term(e, p);
    for (const auto& [e, p] : b.coeffs()) out.add_term(e, p);
    return out;
}

FormalSeries fs_sub(const FormalSeries& a, const FormalSeries& b) { return fs_add(a, b.negated()); }

FormalSeries fs_mul_serial(const FormalSeries& a, const FormalSeries& b) {
    require_same_vars(a, b);
    FormalSeries out(a.vars(), product_truncation(a, b));
    const long trunc = out.truncation_order();
    for (const auto& [ea, pa] : a.coeffs()) {
        for (const auto& [eb, pb] : b.coeffs()) {
            if (ea + eb >= trunc) break;
            out.add_term(ea + eb, pa * pb);
        }
    }
    return out;
}

FormalSeries fs_mul(const FormalSeries& a, const FormalSeries& b) {
    require_same_vars(a, b);
    const long trunc = product_truncation(a, b);
    if (a.is_zero() || b.is_zero()) return FormalSeries(a.vars(), trunc);
    if (a.coeffs().size() * b.coeffs().size() < 4096) return fs_mul_serial(a, b);

    const std::vector<std::pair<long, const LaurentPoly*>> av = [&] {
        std::vector<std::pair<long, const LaurentPoly*>> v;
        for (const auto& [e, p] : a.coeffs()) v.emplace_back(e, &p);
        return v;
    }();
    const long b_lo = b.coeffs().begin()->first;
    const long b_hi = b.coeffs().rbegin()->first;
    std::vector<const LaurentPoly*> bdense(static_cast<std::size_t>(b_hi - b_lo + 1), nullptr);
    for (const auto& [e, p] : b.coeffs()) bdense[static_cast<std::size_t>(e - b_lo)] = &p;

    const long lo = a.valuation() + b.valuation();
    const long hi = std::min(trunc, a.coeffs().rbegin()->first + b_hi + 1);
    const long count = std::max(0L, hi - lo);
    std::vector<LaurentPoly> slots(static_cast<std::size_t>(count), LaurentPoly(a.vars().size()));

#pragma omp parallel for schedule(dynamic, 8)
    for (long idx = 0; idx < count; ++idx) {
        const long e = lo + idx;
        LaurentPoly acc(a.vars().size());
        for (const auto& [ea, pa] : av) {
            const long eb = e - ea;
            if (eb < b_lo) break;
            if (eb > b_hi) continue;
            if (const LaurentPoly* pb = bdense[static_cast<std::size_t>(eb - b_lo)]) acc += (*pa) * (*pb);
        }
        slots[static_cast<std::size_t>(idx)] = std::move(acc);
    }

    FormalSeries out(a.vars(), trunc);
    for (long idx = 0; idx < count; ++idx) out.add_term(lo + idx, slots[static_cast<std::size_t>(idx)]);
    return out;
}

FormalSeries fs_pow(const FormalSeries& a, unsigned exponent) {
    // exact 1 (no truncation of its own)
    FormalSeries result = FormalSeries::one(a.vars(), std::numeric_limits<long>::max() / 4);
    FormalSeries base = a;
    while (exponent > 0) {
        if (exponent & 1u) result = fs_mul(result, base);
        exponent >>= 1u;
        if (exponent > 0) base = fs_mul(base, base);
    }
    return result;
}

FormalSeries fs_invert(const FormalSeries& a) {
    if (a.is_zero()) throw FormalError("cannot invert the zero series");
    const long alpha = a.valuation();
    const auto lead = a.coeffs().begin()->second.as_constant();
    if (!lead || !(*lead == GaussInt(1) || *lead == GaussInt(-1)))
        throw FormalError("fs_invert needs a leading coefficient of +1 or -1");
    const GaussInt c = *lead;  // c^{-1} = c
    const std::size_t arity = a.vars().size();
    const long rel_trunc = a.truncation_order() - alpha;

    std::vector<std::pair<long, const LaurentPoly*>> tail;
    for (const auto& [e, p] : a.coeffs())
        if (e > alpha) tail.emplace_back(e - alpha, &p);

    if (tail.empty()) {
        // a monomial, the inverse is exact to the same relative order
        FormalSeries out(a.vars(), rel_trunc - alpha);
        out.add_term(-alpha, LaurentPoly::constant(arity, c));
        return out;
    }
    if (rel_trunc > (1L << 22)) throw FormalError("fs_invert needs a finite truncation order");

    std::vector<LaurentPoly> inv(static_cast<std::size_t>(std::max(0L, rel_trunc)), LaurentPoly(arity));
    const LaurentPoly cpoly = LaurentPoly::constant(arity, c);
    if (rel_trunc > 0) inv[0] = cpoly;
    for (long k = 1; k < rel_trunc; ++k) {
        LaurentPoly acc(arity);
        for (const auto& [j, pj] : tail) {
            if (j > k) break;
            const LaurentPoly& b = inv[static_cast<std::size_t>(k - j)];
            if (!b.is_zero()) acc += (*pj) * b;
        }
        if (!acc.is_zero()) inv[static_cast<std::size_t>(k)] = -(cpoly * acc);
    }
    FormalSeries out(a.vars(), rel_trunc - alpha);
    for (long k = 0; k < rel_trunc; ++k) out.add_term(k - alpha, inv[static_cast<std::size_t>(k)]);
    return out;
}

FormalSeries fs_eta(long scale, long order) {
    if (scale < 1) throw FormalError("fs_eta scale must be positive");
    if (order < 1) throw FormalError("fs_eta order must be >= 1");
    const long trunc = kGrainsPerQ * order;
    // coefficients of prod (1 - q^(24 scale n)) by dense in-place updates
    const long span = trunc - scale;
    std::vector<long> dense(static_cast<std::size_t>(std::max(0L, span)), 0);
    if (span > 0) dense[0] = 1;
    const long step = kGrainsPerQ * scale;
    for (long k = step; k < span; k += step)
        for (long e = span - 1; e >= k; --e) dense[static_cast<std::size_t>(e)] -= dense[static_cast<std::size_t>(e - k)];
    FormalSeries out({}, trunc);
    for (long e = 0; e < span; ++e)
        if (dense[static_cast<std::size_t>(e)] != 0)
            out.add_term(e + scale, LaurentPoly::constant(0, GaussInt(dense[static_cast<std::size_t>(e)])));
    return out;
}

FormalSeries fs_lambert(const LambertSpec& spec, long order, const std::optional<std::string>& z_var) {
    spec.validate();
    if (spec.trig != LambertTrig::none && !z_var) throw FormalError("trigonometric lambert series needs a variable");
    std::vector<std::string> vars;
    if (z_var) vars.push_back(*z_var);
    const std::size_t arity = vars.size();
    const long trunc = kGrainsPerQ * order;
    FormalSeries out(vars, trunc);
    for (long n = 1; kGrainsPerQ * spec.num_exponent * n < trunc; ++n) {
        const long c = spec.coefficient(n);
        if (c == 0) continue;
        LaurentPoly trig(arity);
        switch (spec.trig) {
            case LambertTrig::none: trig = LaurentPoly::constant(arity, GaussInt(c)); break;
            case LambertTrig::sin2n:
                trig.add_term({static_cast<int>(2 * n)}, GaussInt(0, -c));
                trig.add_term({static_cast<int>(-2 * n)}, GaussInt(0, c));
                break;
            case LambertTrig::cos2n:
                trig.add_term({static_cast<int>(2 * n)}, GaussInt(c));
                trig.add_term({static_cast<int>(-2 * n)}, GaussInt(c));
                break;
            case LambertTrig::sin_n:
                trig.add_term({static_cast<int>(n)}, GaussInt(0, -c));
                trig.add_term({static_cast<int>(-n)}, GaussInt(0, c));
                break;
        }
        long sign = 1;
        for (long grain = kGrainsPerQ * spec.num_exponent * n; grain < trunc;
             grain += kGrainsPerQ * spec.den_exponent * n) {
            out.add_term(grain, sign == 1 ? trig : -trig);
            sign *= spec.den_sign;
        }
    }
    return out;
}

FormalSeries fs_theta(ThetaKind kind, const FormalThetaArg& arg, long tau_scale, int deriv, long order,
                      const std::vector<std::string>& vars) {
    if (tau_scale < 1) throw FormalError("formal theta needs a positive integer tau scale");
    if (arg.alphas.size() != vars.size()) throw FormalError("formal theta argument arity mismatch");
    const long trunc = kGrainsPerQ * order;
    const bool half = kind.index() <= 2;  // shift a = 1/2
    const bool alternating = kind.index() == 1 || kind.index() == 4;
    // C = -i for theta1
    const GaussInt prefactor = kind.index() == 1 ? GaussInt(0, -1) : GaussInt(1);

    // m2 = 2(n + a); grain(m2) = 3 s m2^2 + 12 m2 gamma
    auto grain_of = [&](long m2) -> long {
        const Rational g = Rational(3 * tau_scale * m2 * m2) + Rational(12 * m2) * arg.gamma;
        if (!g.is_integer()) throw FormalError("theta shift produces a fractional q^(1/24) exponent");
        return g.num();
    };
    const double center = -2.0 * arg.gamma.value() / static_cast<double>(tau_scale);
    long m2c = static_cast<long>(std::lround(center));
    if (((m2c % 2) != 0) != half) ++m2c;

    FormalSeries out(vars, trunc);
    auto emit = [&](long m2) {
        const long grain = grain_of(m2);
        if (grain >= trunc) return false;
        const long n = half ? (m2 - 1) / 2 : m2 / 2;
        GaussInt c = prefactor;
        if (alternating && (n % 2 != 0)) c = -c;
        // e^{pi i m2 beta} must be a fourth root of unity
        const Rational phase = Rational(m2) * arg.beta * Rational(2);
        if (!phase.is_integer()) throw FormalError("theta shift along pi is not a multiple of pi/4");
        long k = phase.num() % 4;
        if (k < 0) k += 4;
        static const GaussInt units[4] = {GaussInt(1), GaussInt(0, 1), GaussInt(-1), GaussInt(0, -1)};
        c = c * units[k];
        for (int d = 0; d < deriv; ++d) c = c * GaussInt(0, m2);
        LaurentPoly::Monomial mono(vars.size());
        for (std::size_t j = 0; j < vars.size(); ++j) mono[j] = static_cast<int>(m2 * arg.alphas[j]);
        out.add_term(grain, LaurentPoly::monomial(mono, c));
        return true;
    };
    // Walk outward from the vertex of the quadratic until both sides pass the truncation.
    emit(m2c);
    for (long step = 2;; step += 2) {
        const bool up = emit(m2c + step);
        const bool down = emit(m2c - step);
        if (!up && !down) break;
        if (step > 4 * (trunc + 100)) throw FormalError("formal theta enumeration did not terminate");
    }
    return out;
}

FormalSeries fs_theta_x(ThetaKind kind, long z_scale, long tau_scale, long order) {
    FormalThetaArg arg;
    arg.alphas = {z_scale};
    return fs_theta(kind, arg, tau_scale, 0, order, {"x"});
}

LaurentPoly fs_coefficient(const FormalSeries& a, long grain) {
    if (grain >= a.truncation_order()) throw FormalError("coefficient requested beyond the truncation order");
    const auto it = a.coeffs().find(grain);
    return it == a.coeffs().end() ? LaurentPoly(a.vars().size()) : it->second;
}

FormalComparison fs_equal_through(const FormalSeries& a, const FormalSeries& b, long order) {
    require_same_vars(a, b);
    if (order > a.truncation_order() || order > b.truncation_order())
        throw FormalError("comparison order " + std::to_string(order) + " exceeds the shared truncation order " +
                          std::to_string(std::min(a.truncation_order(), b.truncation_order())));
    auto ia = a.coeffs().begin();
    auto ib = b.coeffs().begin();
    const LaurentPoly zero(a.vars().size());
    while (true) {
        const long ea = ia == a.coeffs().end() ? order : ia->first;
        const long eb = ib == b.coeffs().end() ? order : ib->first;
        const long e = std::min(ea, eb);
        if (e >= order) return {};
        const LaurentPoly& pa = ea == e ? ia->second : zero;
        const LaurentPoly& pb = eb == e ? ib->second : zero;
        if (!(pa == pb)) return {false, FormalMismatch{e, pa, pb}};
        if (ea == e) ++ia;
        if (eb == e) ++ib;
    }
}

}  // namespace thetaforge

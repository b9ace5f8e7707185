#include <cmath>
#include <limits>
#include <numbers>

#include "thetaforge/expr.hpp"

namespace thetaforge {

namespace {

double real_scale(const Expr& coeff, const Bindings& b, const ModularPoint& mp) {
    const cplx s = eval_expr(coeff, b, mp);
    if (std::abs(s.imag()) > 1e-12 || !(s.real() > 0.0)) throw DomainError("tau scale must be a positive real number");
    return s.real();
}

ModularPoint scaled_point(const Expr& coeff, const Bindings& b, const ModularPoint& mp) {
    const double s = real_scale(coeff, b, mp);
    return s == 1.0 ? mp : mp.scaled(s);
}

long integer_value(const Expr& e, const Bindings& b, const ModularPoint& mp, const char* what) {
    const cplx v = eval_expr(e, b, mp);
    const double r = std::round(v.real());
    if (std::abs(v.imag()) > 1e-9 || std::abs(v.real() - r) > 1e-9)
        throw DomainError(std::string(what) + " must be an integer");
    return static_cast<long>(r);
}

cplx checked_div(cplx a, cplx b) {
    if (b == 0.0) throw PoleError("division by zero");
    return a / b;
}

cplx eval_func(const std::string& name, cplx x) {
    if (name == "exp_i") return std::exp(kI * x);
    if (name == "exp") return std::exp(x);
    if (name == "sin") return std::sin(x);
    if (name == "cos") return std::cos(x);
    if (name == "tan") return checked_div(std::sin(x), std::cos(x));
    if (name == "cot") return checked_div(std::cos(x), std::sin(x));
    if (name == "csc") return checked_div(1.0, std::sin(x));
    if (name == "sec") return checked_div(1.0, std::cos(x));
    if (name == "sqrt") return std::sqrt(x);
    throw DomainError("unknown function " + name);
}

// Distance of x/pi from the integers, measured in the complex plane.
double trig_zero_distance(cplx x) {
    const cplx t = x / kPi;
    return std::abs(t - std::round(t.real()));
}

double theta_zero_distance(int kind, cplx arg, cplx tau_s) {
    cplx shift = 0.0;
    switch (kind) {
        case 1: break;
        case 2: shift = kPi / 2.0; break;
        case 3: shift = (kPi + kPi * tau_s) / 2.0; break;
        case 4: shift = kPi * tau_s / 2.0; break;
    }
    return lattice_distance(arg - shift, tau_s);
}

// Zeros of a denominator: walk through products, quotients and powers.
double factor_distance(const Expr& e, const Bindings& b, const ModularPoint& mp) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (e.kind) {
        case NodeKind::theta: {
            if (e.deriv != 0) return inf;
            const double s = real_scale(*e.args[1], b, mp);
            return theta_zero_distance(e.index, eval_expr(*e.args[0], b, mp), mp.tau() * s);
        }
        case NodeKind::func: {
            const cplx x = eval_expr(*e.args[0], b, mp);
            if (e.name == "sin") return trig_zero_distance(x);
            if (e.name == "cos") return trig_zero_distance(x - kPi / 2.0);
            return inf;
        }
        case NodeKind::mul: return std::min(factor_distance(*e.args[0], b, mp), factor_distance(*e.args[1], b, mp));
        case NodeKind::div:
        case NodeKind::neg: return factor_distance(*e.args[0], b, mp);
        case NodeKind::pow: return factor_distance(*e.args[0], b, mp);
        default: return inf;
    }
}

}  // namespace

cplx eval_expr(const Expr& e, const Bindings& b, const ModularPoint& mp) {
    auto ev = [&](std::size_t i) { return eval_expr(*e.args[i], b, mp); };
    switch (e.kind) {
        case NodeKind::number: return e.number.value();
        case NodeKind::imag_unit: return kI;
        case NodeKind::pi: return kPi;
        case NodeKind::tau: return mp.tau();
        case NodeKind::symbol: {
            const auto it = b.find(e.name);
            if (it == b.end()) throw DomainError("unbound symbol '" + e.name + "'");
            return it->second;
        }
        case NodeKind::qpow: return std::exp(2.0 * kPi * kI * mp.tau() * ev(0));
        case NodeKind::theta: return theta(e.index, ev(0), scaled_point(*e.args[1], b, mp), e.deriv);
        case NodeKind::eta: return eta(scaled_point(*e.args[0], b, mp));
        case NodeKind::wp: return weierstrass_p(ev(0), scaled_point(*e.args[1], b, mp));
        case NodeKind::eisenstein_a: return eisenstein_a(scaled_point(*e.args[0], b, mp));
        case NodeKind::lambert: return lambert_sum(e.lambert, ev(0), scaled_point(*e.args[1], b, mp));
        case NodeKind::qpinf: return q_pochhammer(ev(0), scaled_point(*e.args[1], b, mp).q(), kInfiniteLength);
        case NodeKind::psi11: return ramanujan_1psi1(ev(0), ev(1), ev(2), scaled_point(*e.args[3], b, mp).q()).lhs;
        case NodeKind::kbilateral: return kronecker_bilateral(ev(0), ev(1), scaled_point(*e.args[2], b, mp));
        case NodeKind::func: return eval_func(e.name, ev(0));
        case NodeKind::add: return ev(0) + ev(1);
        case NodeKind::sub: return ev(0) - ev(1);
        case NodeKind::mul: return ev(0) * ev(1);
        case NodeKind::div: return checked_div(ev(0), ev(1));
        case NodeKind::neg: return -ev(0);
        case NodeKind::pow: {
            const cplx base = ev(0);
            const cplx p = ev(1);
            const double r = std::round(p.real());
            if (p.imag() == 0.0 && p.real() == r && std::abs(r) <= 64) {
                if (r < 0 && base == 0.0) throw PoleError("negative power of zero");
                cplx out = 1.0;
                for (int k = 0; k < std::abs(static_cast<int>(r)); ++k) out *= base;
                return r < 0 ? 1.0 / out : out;
            }
            return std::pow(base, p);
        }
        case NodeKind::sum: {
            const long lo = integer_value(*e.args[0], b, mp, "sum bound");
            const long hi = integer_value(*e.args[1], b, mp, "sum bound");
            Bindings inner = b;
            cplx total = 0.0;
            for (long k = lo; k <= hi; ++k) {
                inner[e.name] = static_cast<double>(k);
                total += eval_expr(*e.args[2], inner, mp);
            }
            return total;
        }
    }
    throw DomainError("unknown expression node");
}

std::complex<long double> eval_expr_ld(const Expr& e, const Bindings& b, const ModularPoint& mp) {
    using lcplx = std::complex<long double>;
    constexpr long double pi = std::numbers::pi_v<long double>;
    const lcplx iL(0.0L, 1.0L);
    auto ev = [&](std::size_t i) { return eval_expr_ld(*e.args[i], b, mp); };
    auto widen = [](cplx v) { return lcplx(v.real(), v.imag()); };
    auto div = [](lcplx a, lcplx d) {
        if (d == 0.0L) throw PoleError("division by zero");
        return a / d;
    };
    const lcplx tau = widen(mp.tau());
    switch (e.kind) {
        case NodeKind::number: {
            const Rational r = e.number;
            return static_cast<long double>(r.num()) / static_cast<long double>(r.den());
        }
        case NodeKind::imag_unit: return iL;
        case NodeKind::pi: return pi;
        case NodeKind::tau: return tau;
        case NodeKind::qpow: return std::exp(2.0L * pi * iL * tau * ev(0));
        case NodeKind::theta: {
            const lcplx s = ev(1);
            if (std::abs(s.imag()) > 1e-12L || !(s.real() > 0.0L)) throw DomainError("tau scale must be a positive real number");
            return theta_ld(ThetaKind(e.index), ev(0), tau * s.real(), e.deriv);
        }
        case NodeKind::func: {
            const lcplx x = ev(0);
            if (e.name == "exp_i") return std::exp(iL * x);
            if (e.name == "exp") return std::exp(x);
            if (e.name == "sin") return std::sin(x);
            if (e.name == "cos") return std::cos(x);
            if (e.name == "tan") return div(std::sin(x), std::cos(x));
            if (e.name == "cot") return div(std::cos(x), std::sin(x));
            if (e.name == "csc") return div(1.0L, std::sin(x));
            if (e.name == "sec") return div(1.0L, std::cos(x));
            if (e.name == "sqrt") return std::sqrt(x);
            throw DomainError("unknown function " + e.name);
        }
        case NodeKind::add: return ev(0) + ev(1);
        case NodeKind::sub: return ev(0) - ev(1);
        case NodeKind::mul: return ev(0) * ev(1);
        case NodeKind::div: return div(ev(0), ev(1));
        case NodeKind::neg: return -ev(0);
        case NodeKind::pow: {
            const lcplx base = ev(0);
            const lcplx p = ev(1);
            const long double r = std::round(p.real());
            if (p.imag() == 0.0L && p.real() == r && std::abs(r) <= 64) {
                if (r < 0 && base == 0.0L) throw PoleError("negative power of zero");
                lcplx out = 1.0L;
                for (int k = 0; k < std::abs(static_cast<int>(r)); ++k) out *= base;
                return r < 0 ? 1.0L / out : out;
            }
            return std::pow(base, p);
        }
        case NodeKind::sum: {
            const long lo = integer_value(*e.args[0], b, mp, "sum bound");
            const long hi = integer_value(*e.args[1], b, mp, "sum bound");
            Bindings inner = b;
            lcplx total = 0.0L;
            for (long k = lo; k <= hi; ++k) {
                inner[e.name] = static_cast<double>(k);
                total += eval_expr_ld(*e.args[2], inner, mp);
            }
            return total;
        }
        default: return widen(eval_expr(e, b, mp));
    }
}

double pole_distance(const Expr& e, const Bindings& b, const ModularPoint& mp) {
    double d = std::numeric_limits<double>::infinity();
    switch (e.kind) {
        case NodeKind::div: d = factor_distance(*e.args[1], b, mp); break;
        case NodeKind::pow:
            if (eval_expr(*e.args[1], b, mp).real() < 0) d = factor_distance(*e.args[0], b, mp);
            break;
        case NodeKind::func:
            if (e.name == "cot" || e.name == "csc") d = trig_zero_distance(eval_expr(*e.args[0], b, mp));
            if (e.name == "tan" || e.name == "sec") d = trig_zero_distance(eval_expr(*e.args[0], b, mp) - kPi / 2.0);
            break;
        case NodeKind::wp: d = lattice_distance(eval_expr(*e.args[0], b, mp), mp.tau() * real_scale(*e.args[1], b, mp)); break;
        case NodeKind::sum: {
            const long lo = integer_value(*e.args[0], b, mp, "sum bound");
            const long hi = integer_value(*e.args[1], b, mp, "sum bound");
            Bindings inner = b;
            for (long k = lo; k <= hi; ++k) {
                inner[e.name] = static_cast<double>(k);
                d = std::min(d, pole_distance(*e.args[2], inner, mp));
            }
            return d;
        }
        default: break;
    }
    for (const auto& a : e.args) d = std::min(d, pole_distance(*a, b, mp));
    return d;
}

double term_scale(const Expr& e, const Bindings& b, const ModularPoint& mp) {
    switch (e.kind) {
        case NodeKind::add:
        case NodeKind::sub: return std::max(term_scale(*e.args[0], b, mp), term_scale(*e.args[1], b, mp));
        case NodeKind::neg: return term_scale(*e.args[0], b, mp);
        case NodeKind::sum: {
            const long lo = integer_value(*e.args[0], b, mp, "sum bound");
            const long hi = integer_value(*e.args[1], b, mp, "sum bound");
            Bindings inner = b;
            double s = 0.0;
            for (long k = lo; k <= hi; ++k) {
                inner[e.name] = static_cast<double>(k);
                s = std::max(s, term_scale(*e.args[2], inner, mp));
            }
            return s;
        }
        default: return std::abs(eval_expr(e, b, mp));
    }
}

}  // namespace thetaforge

#include <algorithm>
#include <limits>

#include "thetaforge/registry.hpp"

namespace thetaforge {

namespace {

constexpr long kExact = std::numeric_limits<long>::max() / 8;

struct Ctx {
    const std::vector<std::string>& vars;
    long trunc;  // grains
    std::map<std::string, Rational> env;

    long q_order() const { return (trunc + kGrainsPerQ - 1) / kGrainsPerQ + 1; }
};

[[noreturn]] void refuse(const std::string& what) { throw FormalError("not formal-eligible: " + what); }

Rational const_rational(const Expr& e, const Ctx& ctx) {
    switch (e.kind) {
        case NodeKind::number: return e.number;
        case NodeKind::symbol: {
            const auto it = ctx.env.find(e.name);
            if (it == ctx.env.end()) refuse("symbol '" + e.name + "' in a constant position");
            return it->second;
        }
        case NodeKind::neg: return -const_rational(*e.args[0], ctx);
        case NodeKind::add: return const_rational(*e.args[0], ctx) + const_rational(*e.args[1], ctx);
        case NodeKind::sub: return const_rational(*e.args[0], ctx) - const_rational(*e.args[1], ctx);
        case NodeKind::mul: return const_rational(*e.args[0], ctx) * const_rational(*e.args[1], ctx);
        case NodeKind::div: {
            const Rational d = const_rational(*e.args[1], ctx);
            if (d == Rational(0)) refuse("division by zero");
            return const_rational(*e.args[0], ctx) / d;
        }
        case NodeKind::pow: {
            const Rational b = const_rational(*e.args[0], ctx);
            const Rational x = const_rational(*e.args[1], ctx);
            if (!x.is_integer() || x.num() < 0 || x.num() > 64) refuse("non-integer power of a constant");
            Rational r(1);
            for (long i = 0; i < x.num(); ++i) r = r * b;
            return r;
        }
        default: refuse("non-rational constant '" + print_expr(e) + "'");
    }
}

// c + pi*P + tau*T + pi*tau*PT + sum_v a_v v
struct Linear {
    std::map<std::string, Rational> v;
    Rational c{0}, pi{0}, tau{0}, pitau{0};

    bool only_c() const { return v.empty() && pi == Rational(0) && tau == Rational(0) && pitau == Rational(0); }
    bool only_pi() const { return v.empty() && c == Rational(0) && tau == Rational(0) && pitau == Rational(0); }
    bool only_tau() const { return v.empty() && c == Rational(0) && pi == Rational(0) && pitau == Rational(0); }

    Linear scaled(Rational s) const {
        Linear r;
        for (const auto& [k, a] : v)
            if (!(a * s == Rational(0))) r.v[k] = a * s;
        r.c = c * s;
        r.pi = pi * s;
        r.tau = tau * s;
        r.pitau = pitau * s;
        return r;
    }
    Linear plus(const Linear& o) const {
        Linear r = *this;
        for (const auto& [k, a] : o.v) {
            r.v[k] = r.v[k] + a;
            if (r.v[k] == Rational(0)) r.v.erase(k);
        }
        r.c = c + o.c;
        r.pi = pi + o.pi;
        r.tau = tau + o.tau;
        r.pitau = pitau + o.pitau;
        return r;
    }
};

Linear linear(const Expr& e, const Ctx& ctx) {
    switch (e.kind) {
        case NodeKind::number: {
            Linear r;
            r.c = e.number;
            return r;
        }
        case NodeKind::pi: {
            Linear r;
            r.pi = 1;
            return r;
        }
        case NodeKind::tau: {
            Linear r;
            r.tau = 1;
            return r;
        }
        case NodeKind::symbol: {
            Linear r;
            if (const auto it = ctx.env.find(e.name); it != ctx.env.end()) {
                r.c = it->second;
            } else if (std::find(ctx.vars.begin(), ctx.vars.end(), e.name) != ctx.vars.end()) {
                r.v[e.name] = 1;
            } else {
                refuse("unbound symbol '" + e.name + "'");
            }
            return r;
        }
        case NodeKind::neg: return linear(*e.args[0], ctx).scaled(-1);
        case NodeKind::add: return linear(*e.args[0], ctx).plus(linear(*e.args[1], ctx));
        case NodeKind::sub: return linear(*e.args[0], ctx).plus(linear(*e.args[1], ctx).scaled(-1));
        case NodeKind::mul: {
            const Linear a = linear(*e.args[0], ctx);
            const Linear b = linear(*e.args[1], ctx);
            if (a.only_c()) return b.scaled(a.c);
            if (b.only_c()) return a.scaled(b.c);
            Linear r;
            if (a.only_pi() && b.only_tau()) r.pitau = a.pi * b.tau;
            else if (a.only_tau() && b.only_pi()) r.pitau = a.tau * b.pi;
            else refuse("non-linear argument '" + print_expr(e) + "'");
            return r;
        }
        case NodeKind::div: {
            const Linear b = linear(*e.args[1], ctx);
            if (!b.only_c() || b.c == Rational(0)) refuse("argument divided by a non-constant");
            return linear(*e.args[0], ctx).scaled(Rational(1) / b.c);
        }
        default: refuse("argument '" + print_expr(e) + "'");
    }
}

FormalSeries embed(const FormalSeries& s, const std::vector<std::string>& vars) {
    std::vector<std::size_t> pos;
    for (const auto& name : s.vars()) {
        const auto it = std::find(vars.begin(), vars.end(), name);
        if (it == vars.end()) throw FormalError("variable '" + name + "' missing from the target list");
        pos.push_back(static_cast<std::size_t>(it - vars.begin()));
    }
    FormalSeries out(vars, s.truncation_order());
    for (const auto& [g, p] : s.coeffs()) {
        LaurentPoly q(vars.size());
        for (const auto& [m, c] : p.terms()) {
            LaurentPoly::Monomial mm(vars.size(), 0);
            for (std::size_t j = 0; j < m.size(); ++j) mm[pos[j]] = m[j];
            q.add_term(mm, c);
        }
        out.add_term(g, q);
    }
    return out;
}

FormalSeries exact_constant(const Ctx& ctx, const GaussInt& c) { return FormalSeries::constant(ctx.vars, c, kExact); }

FormalFraction over_one(FormalSeries num, const Ctx& ctx) { return {std::move(num), exact_constant(ctx, 1)}; }

bool is_exact_one(const FormalSeries& s) {
    if (s.coeffs().size() != 1 || s.coeffs().begin()->first != 0) return false;
    const auto c = s.coeffs().begin()->second.as_constant();
    return c && *c == GaussInt(1);
}

bool same_series(const FormalSeries& a, const FormalSeries& b) {
    return a.truncation_order() == b.truncation_order() && a.coeffs() == b.coeffs();
}

FormalSeries mul(const FormalSeries& a, const FormalSeries& b) {
    if (is_exact_one(a)) return b;
    if (is_exact_one(b)) return a;
    return fs_mul(a, b);
}

FormalFraction add(const FormalFraction& a, const FormalFraction& b, bool subtract) {
    FormalSeries bn = subtract ? b.num.negated() : b.num;
    if (same_series(a.den, b.den)) return {fs_add(a.num, bn), a.den};
    return {fs_add(mul(a.num, b.den), mul(bn, a.den)), mul(a.den, b.den)};
}

long integer_scale(const Expr& coeff, const Ctx& ctx, const char* what) {
    const Rational s = const_rational(coeff, ctx);
    if (!s.is_integer() || s.num() < 1) refuse(std::string(what) + " at a non-integer multiple of tau");
    return s.num();
}

FormalFraction compile(const Expr& e, Ctx& ctx) {
    switch (e.kind) {
        case NodeKind::number:
            return {exact_constant(ctx, GaussInt(e.number.num())), exact_constant(ctx, GaussInt(e.number.den()))};
        case NodeKind::imag_unit: return over_one(exact_constant(ctx, GaussInt(0, 1)), ctx);
        case NodeKind::symbol: {
            const Rational r = const_rational(e, ctx);
            return {exact_constant(ctx, GaussInt(r.num())), exact_constant(ctx, GaussInt(r.den()))};
        }
        case NodeKind::qpow: {
            const Rational r = const_rational(*e.args[0], ctx) * Rational(kGrainsPerQ);
            if (!r.is_integer()) refuse("power of q outside (1/24)Z");
            LaurentPoly one = LaurentPoly::constant(ctx.vars.size(), GaussInt(1));
            return over_one(FormalSeries::term(ctx.vars, r.num(), one, kExact), ctx);
        }
        case NodeKind::eta: {
            const long s = integer_scale(*e.args[0], ctx, "eta");
            return over_one(embed(fs_eta(s, ctx.q_order()), ctx.vars), ctx);
        }
        case NodeKind::theta: {
            const long s = integer_scale(*e.args[1], ctx, "theta");
            const Linear l = linear(*e.args[0], ctx);
            if (!(l.c == Rational(0)) || !(l.tau == Rational(0))) refuse("theta argument with a constant term");
            FormalThetaArg arg;
            for (const auto& name : ctx.vars) {
                const auto it = l.v.find(name);
                const Rational a = it == l.v.end() ? Rational(0) : it->second;
                if (!a.is_integer()) refuse("fractional multiple of a variable");
                arg.alphas.push_back(a.num());
            }
            arg.beta = l.pi;
            arg.gamma = l.pitau;
            return over_one(fs_theta(ThetaKind(e.index), arg, s, e.deriv, ctx.q_order(), ctx.vars), ctx);
        }
        case NodeKind::lambert: {
            const long s = integer_scale(*e.args[1], ctx, "lambert series");
            LambertSpec spec = e.lambert;
            spec.num_exponent *= static_cast<int>(s);
            spec.den_exponent *= static_cast<int>(s);
            if (spec.trig == LambertTrig::none)
                return over_one(embed(fs_lambert(spec, ctx.q_order()), ctx.vars), ctx);
            const Linear l = linear(*e.args[0], ctx);
            if (l.v.size() != 1 || !(l.v.begin()->second == Rational(1)) || !(l.c == Rational(0)) ||
                !(l.pi == Rational(0)) || !(l.tau == Rational(0)) || !(l.pitau == Rational(0)))
                refuse("lambert argument must be a single variable");
            return {embed(fs_lambert(spec, ctx.q_order(), l.v.begin()->first), ctx.vars), exact_constant(ctx, 2)};
        }
        case NodeKind::func: {
            if (e.name != "exp_i") refuse(e.name);
            const Linear l = linear(*e.args[0], ctx);
            if (!(l.c == Rational(0)) || !(l.tau == Rational(0))) refuse("exp_i of a constant");
            LaurentPoly::Monomial m;
            for (const auto& name : ctx.vars) {
                const auto it = l.v.find(name);
                const Rational a = it == l.v.end() ? Rational(0) : it->second;
                if (!a.is_integer()) refuse("fractional multiple of a variable in exp_i");
                m.push_back(static_cast<int>(a.num()));
            }
            const Rational quarter = l.pi * Rational(2);
            const Rational grains = l.pitau * Rational(12);
            if (!quarter.is_integer() || !grains.is_integer()) refuse("exp_i phase outside the fourth roots of unity");
            long k = quarter.num() % 4;
            if (k < 0) k += 4;
            static const GaussInt units[4] = {GaussInt(1), GaussInt(0, 1), GaussInt(-1), GaussInt(0, -1)};
            return over_one(FormalSeries::term(ctx.vars, grains.num(), LaurentPoly::monomial(m, units[k]), kExact), ctx);
        }
        case NodeKind::neg: {
            FormalFraction f = compile(*e.args[0], ctx);
            return {f.num.negated(), f.den};
        }
        case NodeKind::add:
        case NodeKind::sub:
            return add(compile(*e.args[0], ctx), compile(*e.args[1], ctx), e.kind == NodeKind::sub);
        case NodeKind::mul: {
            const FormalFraction a = compile(*e.args[0], ctx);
            const FormalFraction b = compile(*e.args[1], ctx);
            return {mul(a.num, b.num), mul(a.den, b.den)};
        }
        case NodeKind::div: {
            const FormalFraction a = compile(*e.args[0], ctx);
            const FormalFraction b = compile(*e.args[1], ctx);
            if (b.num.is_zero()) refuse("division by zero");
            return {mul(a.num, b.den), mul(a.den, b.num)};
        }
        case NodeKind::pow: {
            const Rational x = const_rational(*e.args[1], ctx);
            if (!x.is_integer() || x.num() > 64 || x.num() < -64) refuse("non-integer power");
            const FormalFraction b = compile(*e.args[0], ctx);
            const unsigned k = static_cast<unsigned>(std::abs(x.num()));
            FormalFraction r{fs_pow(b.num, k), fs_pow(b.den, k)};
            if (x.num() < 0) std::swap(r.num, r.den);
            return r;
        }
        case NodeKind::sum: {
            const Rational lo = const_rational(*e.args[0], ctx);
            const Rational hi = const_rational(*e.args[1], ctx);
            if (!lo.is_integer() || !hi.is_integer()) refuse("sum bounds");
            const auto saved = ctx.env;
            FormalFraction acc = over_one(FormalSeries(ctx.vars, kExact), ctx);
            for (long k = lo.num(); k <= hi.num(); ++k) {
                ctx.env[e.name] = Rational(k);
                acc = add(acc, compile(*e.args[2], ctx), false);
            }
            ctx.env = saved;
            return acc;
        }
        default: refuse("node '" + print_expr(e) + "'");
    }
}

}  // namespace

FormalFraction compile_formal(const Expr& e, const std::vector<std::string>& vars, long truncation_grains) {
    Ctx ctx{vars, truncation_grains, {}};
    FormalFraction f = compile(e, ctx);
    if (f.den.is_zero()) throw FormalError("denominator is identically zero");
    return f;
}

}  // namespace thetaforge

#include <string>
#include <vector>

#include "thetaforge/registry.hpp"

namespace thetaforge {

namespace {

using Kind = VarDomain::Kind;

VarDomain box(const std::string& name, double s0 = 0.0, double s1 = 0.9, double t0 = 0.0, double t1 = 0.9) {
    return {name, Kind::box, s0, s1, t0, t1};
}

// Near the real axis, for Lambert series with trig factors.
VarDomain strip(const std::string& name) { return box(name, 0.0, 0.9, -0.2, 0.2); }

VarDomain rect(const std::string& name, double re0, double re1, double im0, double im1) {
    return {name, Kind::rect, re0, re1, im0, im1};
}

ParamRange range(const std::string& name, long lo, long hi, ParamRange::Parity parity = ParamRange::Parity::any,
                 const std::string& exclude = "") {
    return {name, lo, hi, parity, exclude};
}

ParamRange odd(const std::string& name, long lo, long hi) { return range(name, lo, hi, ParamRange::Parity::odd); }

struct Builder {
    std::vector<IdentityRecord> out;

    IdentityRecord& add(std::string id, std::string lhs, std::string rhs, std::string anchor,
                        std::vector<VarDomain> vars = {}, std::vector<ParamRange> params = {}) {
        IdentityRecord r;
        r.id = std::move(id);
        r.lhs_text = std::move(lhs);
        r.rhs_text = std::move(rhs);
        r.anchor = std::move(anchor);
        r.vars = std::move(vars);
        r.params = std::move(params);
        out.push_back(std::move(r));
        return out.back();
    }
};

IdentityRecord& formal(IdentityRecord& r, long order = 0) {
    r.backends.insert(Backend::formal);
    r.formal_order = order;
    return r;
}

IdentityRecord& guard(IdentityRecord& r, DegeneracyGuard::Mode mode, const std::string& var = "y") {
    r.guard = DegeneracyGuard{mode, var};
    return r;
}

// f(t) = theta1(t+u) theta1(t+v) theta1(t+w) theta1(t+x)
std::string four_fold(const std::string& t) {
    return "theta1(" + t + "+u|tau)*theta1(" + t + "+v|tau)*theta1(" + t + "+w|tau)*theta1(" + t + "+x|tau)";
}

// sum of four Lambert series with signs + - - + over residues 1..4 mod 5
std::string mod5(const std::string& fields, const std::string& tail) {
    const std::string sep = fields.empty() ? "" : ",";
    std::string s;
    const char* signs[] = {"", "-", "-", "+"};
    for (int a = 1; a <= 4; ++a)
        s += std::string(signs[a - 1]) + "lambert{" + fields + sep + "a=" + std::to_string(a) + ",b=5}" + tail;
    return s;
}

void basics(Builder& b) {
    const auto D = DegeneracyGuard::Mode::kronecker;
    b.add("eta-cube", "dtheta1(0|tau)", "2*eta(tau)^3", "derivative of theta1 at the origin");
    b.add("psi11-summation",
          "psi11(exp_i(u), exp_i(v), exp_i(w))",
          "qpinf(q)*qpinf(exp_i(v-u))*qpinf(exp_i(u+w))*qpinf(q*exp_i(-u-w))"
          "/(qpinf(exp_i(v))*qpinf(q*exp_i(-u))*qpinf(exp_i(w))*qpinf(exp_i(v-u-w)))",
          "bilateral 1psi1 summation",
          {rect("u", 0.0, kPi, -0.6, -0.3), rect("v", 0.0, kPi, 0.6, 1.0), rect("w", 0.0, kPi, 0.25, 0.6)});
    b.add("psi11-b-aq",
          "psi11(exp_i(u), q*exp_i(u), exp_i(w))/(1-exp_i(u))",
          "qpinf(q)^2*qpinf(exp_i(u+w))*qpinf(q*exp_i(-u-w))"
          "/(qpinf(exp_i(u))*qpinf(q*exp_i(-u))*qpinf(exp_i(w))*qpinf(q*exp_i(-w)))",
          "1psi1 with b = aq",
          {rect("u", 0.0, kPi, -0.6, -0.3), rect("w", 0.0, kPi, 0.25, 0.6)});
    guard(b.add("kronecker-bilateral", "kbilateral(y; z|tau)",
                "i*dtheta1(0|tau)*theta1(y+z|tau)/(2*theta1(y|tau)*theta1(z|tau))",
                "bilateral series for the Kronecker function", {box("y", 0.0, 0.9, 0.1, 0.9), box("z")}),
          D);
    b.add("kronecker-definition", "K(y; z|tau)", "dtheta1(0|tau)*theta1(z+y|tau)/(theta1(z|tau)*theta1(y|tau))",
          "Kronecker theta function", {box("y"), box("z")});

    // product representations
    b.add("theta1-product", "theta1(z|tau)",
          "2*q^(1/8)*sin(z)*qpinf(q)*qpinf(q*exp_i(2*z))*qpinf(q*exp_i(-2*z))", "infinite product of theta1",
          {box("z")});
    b.add("theta2-product", "theta2(z|tau)",
          "2*q^(1/8)*cos(z)*qpinf(q)*qpinf(-q*exp_i(2*z))*qpinf(-q*exp_i(-2*z))", "infinite product of theta2",
          {box("z")});
    b.add("theta3-product", "theta3(z|tau)",
          "qpinf(q)*qpinf(-q^(1/2)*exp_i(2*z))*qpinf(-q^(1/2)*exp_i(-2*z))", "infinite product of theta3",
          {box("z")});
    b.add("theta4-product", "theta4(z|tau)",
          "qpinf(q)*qpinf(q^(1/2)*exp_i(2*z))*qpinf(q^(1/2)*exp_i(-2*z))", "infinite product of theta4",
          {box("z")});

    // quasi-periods
    const char* pi_sign[] = {"-", "-", "", ""};
    const char* pitau_sign[] = {"-", "", "", "-"};
    for (int k = 1; k <= 4; ++k) {
        const std::string t = "theta" + std::to_string(k);
        b.add(t + "-period-pi", t + "(z|tau)", std::string(pi_sign[k - 1]) + t + "(z+pi|tau)",
              "quasi-periodicity in pi", {box("z")});
        b.add(t + "-period-pitau", t + "(z|tau)",
              std::string(pitau_sign[k - 1]) + "q^(1/2)*exp_i(2*z)*" + t + "(z+pi*tau|tau)",
              "quasi-periodicity in pi tau", {box("z")});
    }
    // half periods
    b.add("half-period-theta1-pi", "theta1(z+pi/2|tau)", "theta2(z|tau)", "half-period shift by pi/2", {box("z")});
    b.add("half-period-theta1-pitau", "theta1(z+pi*tau/2|tau)", "i*q^(-1/8)*exp_i(-z)*theta4(z|tau)",
          "half-period shift by pi tau/2", {box("z")});
    b.add("half-period-theta2-pitau", "theta2(z+pi*tau/2|tau)", "q^(-1/8)*exp_i(-z)*theta3(z|tau)",
          "half-period shift by pi tau/2", {box("z")});
    b.add("half-period-theta3-diagonal", "theta3(z+(pi+pi*tau)/2|tau)", "i*q^(-1/8)*exp_i(-z)*theta1(z|tau)",
          "half-period shift by (pi + pi tau)/2", {box("z")});
    b.add("parity-theta1", "theta1(-z|tau)", "-theta1(z|tau)", "theta1 is odd", {box("z")});
    for (int k = 2; k <= 4; ++k) {
        const std::string t = "theta" + std::to_string(k);
        b.add("parity-" + t, t + "(-z|tau)", t + "(z|tau)", t + " is even", {box("z")});
    }
}

void four_point(Builder& b) {
    const auto D = DegeneracyGuard::Mode::kronecker;
    const std::string Y = "(u+v+w+x)";
    b.add("four-point-product",
          "2*theta1(" + Y + "|tau)*" + four_fold("z") + "/theta1(2*z|tau)",
          four_fold("0") + "*theta1(z+" + Y + "|tau)/theta1(z|tau)" + " - " + four_fold("pi/2") +
              "*theta2(z+" + Y + "|tau)/theta2(z|tau)" + " + q^(1/2)*" + four_fold("(pi+pi*tau)/2") + "*exp_i(" +
              Y + ")*theta3(z+" + Y + "|tau)/theta3(z|tau)" + " - q^(1/2)*" + four_fold("pi*tau/2") + "*exp_i(" +
              Y + ")*theta4(z+" + Y + "|tau)/theta4(z|tau)",
          "four-point interpolation through the zeros of theta1(2z)",
          {box("z"), box("u"), box("v"), box("w"), box("x")});
    auto& v = b.add("vanishing-four-products",
                    "theta1(u|tau)*theta1(v|tau)*theta1(w|tau)*theta1(-(u+v+w)|tau)"
                    "-theta2(u|tau)*theta2(v|tau)*theta2(w|tau)*theta2(-(u+v+w)|tau)"
                    "+theta3(u|tau)*theta3(v|tau)*theta3(w|tau)*theta3(-(u+v+w)|tau)"
                    "-theta4(u|tau)*theta4(v|tau)*theta4(w|tau)*theta4(-(u+v+w)|tau)",
                    "0", "four products with y1 + y2 + y3 + y4 = 0", {box("u"), box("v"), box("w")});
    v.error_mode = ErrorMode::terms;
    guard(b.add("four-point-cubic",
                "theta2(y|tau)*theta2(z+y|tau)*theta2(0|3*tau)/theta2(z|tau)"
                "+theta4(y|tau)*theta4(z+y|tau)*theta4(0|3*tau)/theta4(z|tau)",
                "2*theta1(y|tau)*theta1(z+y|tau)*theta1(3*z|3*tau)/theta1(2*z|tau)"
                "+theta3(y|tau)*theta3(z+y|tau)*theta3(0|3*tau)/theta3(z|tau)",
                "four-point interpolation of theta1(z+y) theta1(3z|3tau)", {box("z"), box("y")}),
          D);
}

void nfold(Builder& b) {
    const auto K = DegeneracyGuard::Mode::kronecker;
    const auto T3 = DegeneracyGuard::Mode::theta3;
    const std::vector<ParamRange> nm{range("n", 2, 6), range("m", -4, 4)};
    const std::vector<ParamRange> odd_nm{odd("n", 1, 9), range("m", -4, 4)};
    const std::vector<VarDomain> zy{box("z"), box("y")};

    guard(b.add("nfold-theta1",
                "exp_i(2*m*z)*n*dtheta1(0|n*tau)*theta1(n*z+m*pi*tau+y|n*tau)*theta1(y|tau)"
                "/(dtheta1(0|tau)*theta1(y+m*pi*tau|n*tau)*theta1(n*z|n*tau))",
                "sum(k,0,n-1,exp_i(2*m*k*pi/n)*theta1(z+y-k*pi/n|tau)/theta1(z-k*pi/n|tau))",
                "n-fold sum over the zeros of theta1(nz|ntau), any integer m", zy, nm),
          K);
    guard(b.add("nfold-theta1-m0",
                "n*dtheta1(0|n*tau)*theta1(n*z+y|n*tau)*theta1(y|tau)"
                "/(dtheta1(0|tau)*theta1(n*z|n*tau)*theta1(y|n*tau))",
                "sum(k,0,n-1,theta1(z+y-k*pi/n|tau)/theta1(z-k*pi/n|tau))", "n-fold sum, m = 0", zy,
                {range("n", 1, 6)}),
          K);
    guard(b.add("nfold-theta2",
                "exp_i(2*m*z)*n*dtheta1(0|n*tau)*theta2(n*z+m*pi*tau+y|n*tau)*theta2(y|tau)"
                "/(dtheta1(0|tau)*theta2(y+m*pi*tau|n*tau)*theta1(n*z|n*tau))",
                "sum(k,0,n-1,exp_i(2*m*k*pi/n)*theta2(z+y-k*pi/n|tau)/theta1(z-k*pi/n|tau))",
                "n-fold sum with y shifted by pi/2", zy, nm),
          K);
    b.add("nfold-logderiv",
          "exp_i(2*m*z)*n*dtheta1(0|n*tau)*theta1(n*z+m*pi*tau|n*tau)/(theta1(m*pi*tau|n*tau)*theta1(n*z|n*tau))",
          "sum(k,0,n-1,exp_i(2*m*k*pi/n)*dtheta1(z-k*pi/n|tau)/theta1(z-k*pi/n|tau))",
          "y-derivative at y = 0 when m is not a multiple of n", {box("z")},
          {range("n", 2, 6), range("m", -4, 4, ParamRange::Parity::any, "n")});
    b.add("nfold-power-odd",
          "n*dtheta1(0|n*tau)*theta1(z+y/n|tau)^n*theta1(y|tau)/(dtheta1(0|tau)*theta1(n*z|n*tau))",
          "sum(k,0,n-1,(-1)^k*theta1(z+y-k*pi/n|tau)*theta1((y+k*pi)/n|tau)^n/theta1(z-k*pi/n|tau))",
          "n-th power of theta1(z + y/n), n odd", zy, {odd("n", 1, 9)});
    auto& v9 = b.add("vanishing-nfold-power", "sum(k,0,n-1,(-1)^k*exp_i(2*k*pi/n)*theta1((k*pi+pi*tau)/n|tau)^n)",
                     "0", "n-th powers at y = pi tau", {}, {odd("n", 3, 9)});
    v9.error_mode = ErrorMode::terms;
    guard(b.add("nfold-theta3-odd",
                "exp_i(2*m*z)*n*dtheta1(0|n*tau)*theta3(y|tau)*theta3(n*z+y+m*pi*tau|n*tau)"
                "/(dtheta1(0|tau)*theta3(y+m*pi*tau|n*tau)*theta1(n*z|n*tau))",
                "sum(k,0,n-1,(-1)^k*exp_i(2*k*m*pi/n)*theta3(z+y-k*pi/n|tau)/theta1(z-k*pi/n|tau))",
                "theta3 n-fold sum, n odd, any integer m", zy, odd_nm),
          T3);
    guard(b.add("nfold-theta4-odd",
                "exp_i(2*m*z)*n*dtheta1(0|n*tau)*theta4(y|tau)*theta4(n*z+y+m*pi*tau|n*tau)"
                "/(dtheta1(0|tau)*theta4(y+m*pi*tau|n*tau)*theta1(n*z|n*tau))",
                "sum(k,0,n-1,(-1)^k*exp_i(2*k*m*pi/n)*theta4(z+y-k*pi/n|tau)/theta1(z-k*pi/n|tau))",
                "theta4 n-fold sum, n odd", zy, odd_nm),
          T3);
    guard(b.add("nfold-theta1-over-theta3",
                "(-1)^(m+(n-1)/2)*n*exp_i(2*m*z)*dtheta1(0|n*tau)*theta3(y|tau)*theta1(n*z+y+m*pi*tau|n*tau)"
                "/(dtheta1(0|tau)*theta3(y+m*pi*tau|n*tau)*theta3(n*z|n*tau))",
                "sum(k,0,n-1,(-1)^k*exp_i(2*k*m*pi/n)*theta1(z+y-k*pi/n|tau)/theta3(z-k*pi/n|tau))",
                "theta3 n-fold sum with z shifted by (pi + pi tau)/2", zy, odd_nm),
          T3);
    guard(b.add("nfold-tau-over-n",
                "dtheta1(0|tau/n)*theta1(z+y/n|tau/n)*theta1(y|tau)"
                "/(dtheta1(0|tau)*theta1(z|tau/n)*theta1(y/n|tau/n))",
                "sum(k,0,n-1,exp_i(-2*k*y/n)*theta1(z+y-k*pi*tau/n|tau)/theta1(z-k*pi*tau/n|tau))",
                "sum over the zeros of theta1(z|tau/n), n odd", zy, {odd("n", 1, 9)}),
          K);
    b.add("nfold-power-tau-over-n",
          "dtheta1(0|tau/n)*theta1(z+y/n|tau)^n*theta1(y|tau)/(dtheta1(0|tau)*theta1(z|tau/n))",
          "sum(k,0,n-1,(-1)^k*theta1((y+k*pi*tau)/n|tau)^n*theta1(z+y-k*pi*tau/n|tau)"
          "/theta1(z-k*pi*tau/n|tau)*q^(k^2/(2*n)))",
          "n-th power over the zeros of theta1(z|tau/n), n odd", zy, {odd("n", 1, 9)});
    auto& v15 = b.add("vanishing-nfold-tau-over-n", "sum(k,0,n-1,(-1)^k*theta1((pi+k*pi*tau)/n|tau)^n*q^(k^2/(2*n)))",
                      "0", "n-th powers at y = pi", {}, {odd("n", 3, 9)});
    v15.error_mode = ErrorMode::terms;

    for (int n = 1; n <= 12; ++n) {
        auto& r = b.add("trig-limit-n" + std::to_string(n), "n*sin(n*z+y)/sin(n*z)",
                        "sum(k,0,n-1,sin(z+y-k*pi/n)/sin(z-k*pi/n))", "trigonometric limit q -> 0",
                        {rect("z", 0.0, kPi, 0.1, 0.5), rect("y", 0.0, kPi, -0.5, 0.5)}, {range("n", n, n)});
        r.error_mode = ErrorMode::absolute;
    }
}

void addition(Builder& b) {
    const std::vector<VarDomain> xyu{box("x"), box("y"), box("u")};
    b.add("addition-wp-ratio",
          "theta1(x|tau)^2*wp(x|tau)/(theta1(x-u|tau)*theta1(x+u|tau))"
          "-theta1(y|tau)^2*wp(y|tau)/(theta1(y-u|tau)*theta1(y+u|tau))",
          "-theta1(u|tau)^2*theta1(x+y|tau)*theta1(x-y|tau)*wp(u|tau)"
          "/(theta1(x-u|tau)*theta1(x+u|tau)*theta1(y-u|tau)*theta1(y+u|tau))",
          "addition formula for theta1^2 wp", xyu);
    b.add("addition-wp-difference", "wp(x|tau)-wp(y|tau)",
          "-dtheta1(0|tau)^2*theta1(x+y|tau)*theta1(x-y|tau)/(theta1(x|tau)^2*theta1(y|tau)^2)",
          "sigma-function addition formula", {box("x"), box("y")});
    const std::vector<VarDomain> xyuvw{box("x"), box("y"), box("u"), box("v"), box("w")};
    b.add("addition-three-term",
          "theta1(x+u+w|tau)*theta1(x-u|tau)*theta1(y+v+w|tau)*theta1(y-v|tau)"
          "-theta1(y+u+w|tau)*theta1(y-u|tau)*theta1(x+v+w|tau)*theta1(x-v|tau)",
          "theta1(x-y|tau)*theta1(x+y+w|tau)*theta1(u+v+w|tau)*theta1(u-v|tau)",
          "three-term addition formula with a shift w", xyuvw);
    b.add("addition-three-term-w0",
          "theta1(x+u|tau)*theta1(x-u|tau)*theta1(y+v|tau)*theta1(y-v|tau)"
          "-theta1(y+u|tau)*theta1(y-u|tau)*theta1(x+v|tau)*theta1(x-v|tau)",
          "theta1(x-y|tau)*theta1(x+y|tau)*theta1(u+v|tau)*theta1(u-v|tau)", "Weierstrass three-term identity",
          {box("x"), box("y"), box("u"), box("v")});
    b.add("addition-theta3-theta4",
          "theta3(y+u+w|tau)*theta3(y-u|tau)*theta4(x+v+w|tau)*theta4(x-v|tau)"
          "-theta3(x+u+w|tau)*theta3(x-u|tau)*theta4(y+v+w|tau)*theta4(y-v|tau)",
          "theta1(x-y|tau)*theta1(x+y+w|tau)*theta2(u+v+w|tau)*theta2(u-v|tau)",
          "three-term formula after half-period shifts of u and v", xyuvw);
    const std::string W = "q^(1/4)*qpinf(q)^2";
    b.add("winquist",
          W + "*theta1(3*y|3*tau)*(exp_i(2*x)*theta1(3*x+pi*tau|3*tau)+exp_i(-2*x)*theta1(3*x-pi*tau|3*tau))-" + W +
              "*theta1(3*x|3*tau)*(exp_i(2*y)*theta1(3*y+pi*tau|3*tau)+exp_i(-2*y)*theta1(3*y-pi*tau|3*tau))",
          "theta1(x|tau)*theta1(y|tau)*theta1(x+y|tau)*theta1(x-y|tau)", "equivalent to Winquist's identity",
          {box("x"), box("y")});
}

void kiepert(Builder& b) {
    const std::vector<VarDomain> z{box("z")};
    const std::vector<VarDomain> zs{strip("z")};

    formal(b.add("kiepert-quintuple",
                 "exp_i(z)*theta4(3*z+pi*tau/2|3*tau)+exp_i(-z)*theta4(3*z-pi*tau/2|3*tau)",
                 "q^(-1/24)*eta(tau)*theta1(2*z|tau)/theta1(z|tau)", "quintuple product identity", z),
           10);
    b.add("kiepert-quintuple-series", "2*sum(j,-30,30,(-1)^j*q^(j*(3*j+1)/2)*cos((6*j+1)*z))",
          "qpinf(q)*theta1(2*z|tau)/theta1(z|tau)", "quintuple product as a cosine series", zs);
    b.add("kiepert-odd-part",
          "exp_i(z)*theta1(z|tau)*theta4(3*z+pi*tau/2|3*tau)-exp_i(-z)*theta1(-z|tau)*theta4(-3*z+pi*tau/2|3*tau)",
          "theta4(pi*tau/2|3*tau)*theta1(2*z|tau)", "f(z) - f(-z) for the quintuple product", z);
    b.add("kiepert-theta4-product", "theta4(pi*tau/2|3*tau)", "qpinf(q)", "theta4 at a third of the period", {});
    b.add("kiepert-logderiv1", "dtheta1(z|tau)/theta1(z|tau)", "cot(z)+4*lambert{trig=sin2n}(z|tau)",
          "trigonometric series for theta1'/theta1", zs);
    b.add("kiepert-logderiv4", "dtheta4(z|tau)/theta4(z|tau)", "4*lambert{b=2,trig=sin2n}(z|tau/2)",
          "trigonometric series for theta4'/theta4", zs);
    b.add("kiepert-chi5-sin", "sin(z)*sin(2*z)/sin(5*z)-lambert{chi=5,trig=sin2n}(z|tau)",
          "eta(5*tau)^2*theta1(z|tau)*theta1(2*z|tau)/(2*eta(tau)*theta1(5*z|5*tau))",
          "Legendre symbol modulo 5 with sin 2nz", zs);
    b.add("kiepert-mod5-sin", mod5("trig=sin2n", "(z|tau)"),
          "eta(tau)^2*theta1(z|5*tau)*theta1(2*z|5*tau)/(2*eta(5*tau)*theta1(z|tau))",
          "q^n - q^2n - q^3n + q^4n over 1 - q^5n with sin 2nz", zs);
    formal(b.add("kiepert-chi5-n", "1-5*lambert{chi=5,weight=1}(tau)", "eta(tau)^5/eta(5*tau)",
                 "eta(tau)^5 / eta(5 tau)", {}));
    formal(b.add("kiepert-chi5-square", mod5("weight=1", "(tau)"), "eta(5*tau)^5/eta(tau)",
                 "eta(5 tau)^5 / eta(tau)", {}));
    b.add("kiepert-chi5-cos", "cos(z)*sin(2*z)/cos(5*z)+lambert{chi=5,twist=alt,trig=sin2n}(z|tau)",
          "eta(5*tau)^2*theta2(z|tau)*theta1(2*z|tau)/(2*eta(tau)*theta2(5*z|5*tau))",
          "shift of the modulo 5 series by pi/2", zs);
    formal(b.add("kiepert-chi5-alt-n", "1+lambert{chi=5,twist=alt,weight=1}(tau)",
                 "eta(tau)*eta(2*tau)^2*eta(5*tau)^3/eta(10*tau)^2", "alternating modulo 5 Lambert series", {}));
    formal(b.add("kiepert-chi15-alt-n", "1+lambert{chi=15,twist=alt}(tau)",
                 "eta(tau)*eta(6*tau)*eta(10*tau)*eta(15*tau)/(eta(2*tau)*eta(30*tau))",
                 "Jacobi symbol modulo 15", {}));
    formal(b.add("kiepert-chi5-chi4-n", "1+lambert{chi=5,twist=chi4}(tau)",
                 "eta(2*tau)*eta(4*tau)*eta(5*tau)*eta(10*tau)/(eta(tau)*eta(20*tau))",
                 "odd terms twisted by the character modulo 4", {}));
    b.add("kiepert-mod5-alt-sin", "-(" + mod5("twist=alt,trig=sin2n", "(z|tau)") + ")",
          "eta(tau)^2*theta2(z|5*tau)*theta1(2*z|5*tau)/(2*eta(5*tau)*theta2(z|tau))",
          "shift of the q^5n series by pi/2", zs);
    formal(b.add("kiepert-mod5-chi3", "-(" + mod5("chi=3,twist=alt", "(tau)") + ")",
                 "eta(2*tau)*eta(3*tau)*eta(5*tau)*eta(30*tau)/(eta(6*tau)*eta(10*tau))",
                 "q^5n series at z = pi/3", {}));
    formal(b.add("kiepert-mod5-alt-n", "-(" + mod5("twist=alt,weight=1", "(tau)") + ")",
                 "eta(tau)^3*eta(5*tau)*eta(10*tau)^2/eta(2*tau)^2", "alternating q^5n series with weight n", {}));
    b.add("kiepert-chi5-half-sin", "lambert{chi=5,a=1,b=2,trig=sin2n}(z|tau)",
          "eta(10*tau)^2*theta4(z|2*tau)*theta1(2*z|2*tau)/(2*eta(2*tau)*theta4(5*z|10*tau))",
          "modulo 5 series over 1 - q^2n with sin 2nz", zs);
    formal(b.add("kiepert-chi5-half-n", "lambert{chi=5,weight=1,a=1,b=2}(tau)",
                 "eta(tau)^2*eta(2*tau)*eta(10*tau)^3/eta(5*tau)^2", "modulo 5 series over 1 - q^2n", {}));
    formal(b.add("kiepert-chi15-half-n", "lambert{chi=15,a=1,b=2}(tau)",
                 "eta(2*tau)*eta(3*tau)*eta(5*tau)*eta(30*tau)/(eta(tau)*eta(15*tau))",
                 "modulo 15 series over 1 - q^2n", {}));
    formal(b.add("kiepert-chi5-chi4-half", "lambert{chi=5,twist=chi4,a=1,b=2}(tau)",
                 "eta(4*tau)^4*eta(10*tau)^2*eta(40*tau)/(eta(2*tau)^2*eta(8*tau)*eta(20*tau)^2)",
                 "odd terms over 1 - q^(4n+2)", {}));
    b.add("kiepert-cubic-sin-square", "sin(z)^3/(3*sin(3*z))-(lambert{chi=3}(tau)-lambert{chi=3,trig=cos2n}(z|tau))/2",
          "theta1(z|tau)^3/(12*theta1(3*z|3*tau))", "Lambert series with sin^2 nz", zs);
    b.add("kiepert-cubic-logderiv", "2*theta1(z|tau)^3/(sqrt(3)*theta1(3*z|3*tau))",
          "-2*dtheta1(pi/3|tau)/theta1(pi/3|tau)+dtheta1(z+pi/3|tau)/theta1(z+pi/3|tau)"
          "-dtheta1(z-pi/3|tau)/theta1(z-pi/3|tau)",
          "decomposition of theta1^3(z)/theta1(3z|3tau)", z);
    b.add("kiepert-cubic-series", "2*theta1(z|tau)^3/(sqrt(3)*theta1(3*z|3*tau))",
          "8*sin(z)^3/(sqrt(3)*sin(3*z))-8*sqrt(3)*(lambert{chi=3}(tau)-lambert{chi=3,trig=cos2n}(z|tau))/2",
          "decomposition expanded as a trigonometric series", zs);
    formal(b.add("kiepert-cubic-n-square", "1-9*lambert{chi=3,weight=2}(tau)", "eta(tau)^9/eta(3*tau)^3",
                 "Carlitz's identity", {}));
    b.add("kiepert-a-definition", "a(tau)", "1+6*lambert{chi=3}(tau)", "cubic Eisenstein series a(tau)", {});
    b.add("kiepert-a-logderiv", "dtheta1(pi/3|tau)/theta1(pi/3|tau)", "a(tau)/sqrt(3)",
          "logarithmic derivative of theta1 at pi/3", {});
    b.add("kiepert-a-decomposition", "2*theta1(z|tau)^3/(sqrt(3)*theta1(3*z|3*tau))",
          "-2*a(tau)/sqrt(3)+dtheta1(z+pi/3|tau)/theta1(z+pi/3|tau)-dtheta1(z-pi/3|tau)/theta1(z-pi/3|tau)",
          "decomposition in terms of a(tau)", z);
    b.add("kiepert-a-shift-plus", "2*theta1(z+pi/3|tau)^3/(sqrt(3)*theta1(3*z|3*tau))",
          "2*a(tau)/sqrt(3)-dtheta1(z-pi/3|tau)/theta1(z-pi/3|tau)+dtheta1(z|tau)/theta1(z|tau)",
          "decomposition shifted by pi/3", z);
    b.add("kiepert-a-shift-minus", "2*theta1(z-pi/3|tau)^3/(sqrt(3)*theta1(3*z|3*tau))",
          "2*a(tau)/sqrt(3)+dtheta1(z+pi/3|tau)/theta1(z+pi/3|tau)-dtheta1(z|tau)/theta1(z|tau)",
          "decomposition shifted by -pi/3", z);
    b.add("kiepert-a-cube-sum", "theta1(z+pi/3|tau)^3+theta1(z-pi/3|tau)^3-theta1(z|tau)^3",
          "3*a(tau)*theta1(3*z|3*tau)", "sum of three cubes", z);
}

void shen(Builder& b) {
    const std::vector<VarDomain> xy{strip("x"), strip("y")};
    const std::vector<VarDomain> xy_half{box("x", 0.0, 0.9, -0.1, 0.1), box("y", 0.0, 0.9, -0.1, 0.1)};
    b.add("shen-cot-pair",
          "cot(x)+cot(y)-4*(lambert{sign=-1,trig=sin2n}(x|tau)+lambert{sign=-1,trig=sin2n}(y|tau))",
          "2*theta3(0|tau)*theta4(0|tau)*theta1(x+y|2*tau)*theta4(x-y|2*tau)/(theta1(x|tau)*theta1(y|tau))",
          "cot x + cot y with q^n/(1 + q^n)", xy);
    b.add("shen-cos-pair",
          "1+2*(lambert{b=2,sign=-1,trig=cos2n}(x|tau/2)+lambert{b=2,sign=-1,trig=cos2n}(y|tau/2))",
          "theta3(0|tau)*theta4(0|tau)*theta4(x+y|2*tau)*theta4(x-y|2*tau)/(theta4(x|tau)*theta4(y|tau))",
          "cos 2nx + cos 2ny with q^(n/2)/(1 + q^n)", xy_half);
    b.add("shen-cos-difference",
          "lambert{b=2,sign=-1,trig=cos2n}(x|tau/2)-lambert{b=2,sign=-1,trig=cos2n}(y|tau/2)",
          "-theta3(0|tau)*theta4(0|tau)*theta1(x+y|2*tau)*theta1(x-y|2*tau)/(2*theta4(x|tau)*theta4(y|tau))",
          "cos 2nx - cos 2ny with q^(n/2)/(1 + q^n)", xy_half);
    b.add("shen-csc-pair",
          "csc(x)+csc(y)+4*(lambert{odd=1,trig=sinn}(x|tau/2)+lambert{odd=1,trig=sinn}(y|tau/2))",
          "theta2(0|tau)*theta3(0|tau)*theta1((x+y)/2|tau/2)*theta2((x-y)/2|tau/2)/(theta1(x|tau)*theta1(y|tau))",
          "csc x + csc y with odd Lambert terms", xy_half);
    b.add("shen-jell12",
          "4*(lambert{odd=1,b=2,trig=sinn}(x|tau/4)+lambert{odd=1,b=2,trig=sinn}(y|tau/4))",
          "theta2(0|tau)*theta3(0|tau)*theta1((x+y)/2|tau/2)*theta2((x-y)/2|tau/2)/(theta4(x|tau)*theta4(y|tau))",
          "the fourth seems to be new", xy_half);
}

}  // namespace

std::vector<IdentityRecord> builtin_catalog() {
    Builder b;
    basics(b);
    four_point(b);
    nfold(b);
    addition(b);
    kiepert(b);
    shen(b);
    for (auto& r : b.out) finalize_record(r);
    return b.out;
}

std::vector<IdentityRecord> negative_controls() {
    Builder b;
    const std::string W = "q^(1/4)*qpinf(q)^2";
    auto& n = b.add("negative-numeric-perturbed",
                    W + "*theta1(3*y|3*tau)*(exp_i(2*x)*theta1(3*x+pi*tau|3*tau)+exp_i(-2*x)*theta1(3*x-pi*tau|3*tau))-" +
                        W + "*theta1(3*x|3*tau)*(exp_i(2*y)*theta1(3*y+pi*tau|3*tau)+exp_i(-2*y)*theta1(3*y-pi*tau|3*tau))",
                    "(1+1/1000000)*theta1(x|tau)*theta1(y|tau)*theta1(x+y|tau)*theta1(x-y|tau)",
                    "winquist with the right side scaled by 1 + 1e-6", {box("x"), box("y")});
    n.negative_control = true;
    auto& f = b.add("negative-formal-eta4", "1-5*lambert{chi=5,weight=1}(tau)", "eta(tau)^4/eta(5*tau)",
                    "eta(tau)^5 / eta(5 tau) with the exponent lowered by one", {});
    f.backends = {Backend::formal};
    f.negative_control = true;
    for (auto& r : b.out) finalize_record(r);
    return b.out;
}

}  // namespace thetaforge

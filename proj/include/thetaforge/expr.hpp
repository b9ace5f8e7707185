#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "thetaforge/functions.hpp"

namespace thetaforge {

enum class NodeKind {
    number,     // rational constant
    imag_unit,  // i
    pi,
    tau,
    symbol,     // variable, integer parameter or summation index
    qpow,       // q^(args[0]); bare q is q^(1)
    theta,      // index = kind, deriv; args = {argument, tau coefficient}
    eta,        // args = {tau coefficient}
    wp,         // args = {argument, tau coefficient}
    eisenstein_a,  // args = {tau coefficient}
    lambert,    // args = {argument, tau coefficient}; argument is 0 without trig
    qpinf,      // (args[0]; q)_inf with q at args[1] * tau
    psi11,      // bilateral sum (a; q)_k/(b; q)_k x^k, args = {a, b, x}
    kbilateral, // sum e^{2kiy}/(1 - q^k e^{2iz}), args = {y, z, tau coefficient}
    func,       // name in {exp_i, exp, sin, cos, tan, cot, csc, sec, sqrt}; args = {argument}
    add,
    sub,
    mul,
    div,
    pow,
    neg,
    sum,        // name = index; args = {lo, hi, body}
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    NodeKind kind = NodeKind::number;
    Rational number{0};
    std::string name;
    int index = 0;
    int deriv = 0;
    LambertSpec lambert;
    std::vector<ExprPtr> args;
};

bool structurally_equal(const Expr& a, const Expr& b);
inline bool structurally_equal(const ExprPtr& a, const ExprPtr& b) { return structurally_equal(*a, *b); }

// Node constructors used by the parser and by code that builds expressions.
ExprPtr make_number(Rational r);
ExprPtr make_symbol(const std::string& name);
ExprPtr make_binary(NodeKind kind, ExprPtr a, ExprPtr b);
ExprPtr make_theta(int kind, ExprPtr arg, ExprPtr tau_coeff, int deriv = 0);

// Names usable as free symbols when no explicit set is given.
const std::set<std::string>& default_symbols();

// Parses the identity DSL. Throws ParseError (with a character position) on
// syntax errors, unknown symbols and non-linear theta arguments.
ExprPtr parse_expr(const std::string& text, const std::set<std::string>& symbols = default_symbols());

// Fully parenthesized text that parses back to a structurally equal tree.
std::string print_expr(const Expr& e);
inline std::string print_expr(const ExprPtr& e) { return print_expr(*e); }

// Free symbols (summation indices excluded).
std::set<std::string> free_symbols(const Expr& e);

using Bindings = std::map<std::string, cplx>;

// Numeric value. Throws PoleError at a vanishing denominator and DomainError
// for an unbound symbol.
cplx eval_expr(const Expr& e, const Bindings& bindings, const ModularPoint& mp);
inline cplx eval_expr(const ExprPtr& e, const Bindings& bindings, const ModularPoint& mp) {
    return eval_expr(*e, bindings, mp);
}

// Smallest reduced distance from any zero of any denominator factor
// (theta, trig, wp and cot/csc arguments) at these bindings; +inf if none.
double pole_distance(const Expr& e, const Bindings& bindings, const ModularPoint& mp);

// eval_expr carried in long double through arithmetic, sums, exp/trig and
// theta; other special functions are evaluated in double and widened.
std::complex<long double> eval_expr_ld(const Expr& e, const Bindings& bindings, const ModularPoint& mp);

// Largest |value| among the top-level additive terms (sums unrolled).
double term_scale(const Expr& e, const Bindings& bindings, const ModularPoint& mp);

}  // namespace thetaforge

#include "thetaforge/expr.hpp"

#include <cctype>
#include <sstream>

namespace thetaforge {

namespace {

const std::set<std::string> kParams = {"n", "m", "k", "j"};

const std::map<std::string, NodeKind> kFixedFunctions = {
    {"eta", NodeKind::eta},       {"wp", NodeKind::wp},         {"a", NodeKind::eisenstein_a},
    {"qpinf", NodeKind::qpinf},   {"psi11", NodeKind::psi11},   {"kbilateral", NodeKind::kbilateral},
};

const std::set<std::string> kUnaryFunctions = {"exp_i", "exp", "sin", "cos", "tan", "cot", "csc", "sec", "sqrt"};

bool is_structural_number(const ExprPtr& e) { return e->kind == NodeKind::number; }

}  // namespace

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind || !(a.number == b.number) || a.name != b.name || a.index != b.index ||
        a.deriv != b.deriv || !(a.lambert == b.lambert) || a.args.size() != b.args.size())
        return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!structurally_equal(*a.args[i], *b.args[i])) return false;
    return true;
}

ExprPtr make_number(Rational r) {
    auto e = std::make_shared<Expr>();
    e->kind = NodeKind::number;
    e->number = r;
    return e;
}

ExprPtr make_symbol(const std::string& name) {
    auto e = std::make_shared<Expr>();
    e->kind = NodeKind::symbol;
    e->name = name;
    return e;
}

namespace {

ExprPtr make_node(NodeKind kind, std::vector<ExprPtr> args) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->args = std::move(args);
    return e;
}

}  // namespace

ExprPtr make_binary(NodeKind kind, ExprPtr a, ExprPtr b) {
    if (kind == NodeKind::div && is_structural_number(a) && is_structural_number(b) && b->number.num() != 0)
        return make_number(a->number / b->number);
    return make_node(kind, {std::move(a), std::move(b)});
}

ExprPtr make_theta(int kind, ExprPtr arg, ExprPtr tau_coeff, int deriv) {
    auto e = std::make_shared<Expr>();
    e->kind = NodeKind::theta;
    e->index = ThetaKind(kind).index();
    e->deriv = deriv;
    e->args = {std::move(arg), std::move(tau_coeff)};
    return e;
}

const std::set<std::string>& default_symbols() {
    static const std::set<std::string> symbols = {"z", "y", "x", "u", "v", "w", "s", "t", "y1", "y2",
                                                  "y3", "y4", "n", "m", "k", "j"};
    return symbols;
}

// ------------------------------------------------------------------- parser

namespace {

enum class Tok { number, ident, punct, end };

struct Token {
    Tok type;
    std::string text;
    std::size_t pos;
};

std::vector<Token> tokenize(const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
            const std::size_t start = i;
            while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) ++i;
            out.push_back({Tok::number, s.substr(start, i - start), start});
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = i;
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
            out.push_back({Tok::ident, s.substr(start, i - start), start});
        } else if (std::string("+-*/^(),|;{}=").find(c) != std::string::npos) {
            out.push_back({Tok::punct, std::string(1, c), i});
            ++i;
        } else {
            throw ParseError(std::string("unexpected character '") + c + "'", i);
        }
    }
    out.push_back({Tok::end, "", s.size()});
    return out;
}

Rational parse_decimal(const std::string& text, std::size_t pos) {
    const auto dot = text.find('.');
    if (text.find('.', dot == std::string::npos ? text.size() : dot + 1) != std::string::npos)
        throw ParseError("malformed number '" + text + "'", pos);
    const std::string whole = dot == std::string::npos ? text : text.substr(0, dot);
    const std::string frac = dot == std::string::npos ? "" : text.substr(dot + 1);
    if (whole.size() + frac.size() > 17) throw ParseError("number has too many digits", pos);
    long den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const long num = std::stol((whole.empty() ? "0" : whole) + frac);
    return Rational(num, den);
}

bool contains_kind(const Expr& e, NodeKind kind) {
    if (e.kind == kind) return true;
    for (const auto& a : e.args)
        if (contains_kind(*a, kind)) return true;
    return false;
}

class Parser {
public:
    Parser(const std::string& text, const std::set<std::string>& symbols) : toks_(tokenize(text)), symbols_(symbols) {}

    ExprPtr parse() {
        ExprPtr e = expr();
        if (peek().type != Tok::end) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
        return e;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }
    bool accept(const std::string& p) {
        if (peek().type == Tok::punct && peek().text == p) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(const std::string& p) {
        if (!accept(p)) throw ParseError("expected '" + p + "'", peek().pos);
    }

    ExprPtr expr() {
        ExprPtr e = term();
        while (true) {
            if (accept("+")) e = make_binary(NodeKind::add, e, term());
            else if (accept("-")) e = make_binary(NodeKind::sub, e, term());
            else return e;
        }
    }

    ExprPtr term() {
        ExprPtr e = unary();
        while (true) {
            if (accept("*")) e = make_binary(NodeKind::mul, e, unary());
            else if (accept("/")) e = make_binary(NodeKind::div, e, unary());
            else return e;
        }
    }

    ExprPtr unary() {
        if (accept("-")) {
            ExprPtr a = unary();
            if (a->kind == NodeKind::number) return make_number(-a->number);
            return make_node(NodeKind::neg, {a});
        }
        if (accept("+")) return unary();
        return power();
    }

    ExprPtr power() {
        ExprPtr base = primary();
        if (accept("^")) return make_binary(NodeKind::pow, base, unary());
        return base;
    }

    // The part after '|': a positive multiple of tau; returns the multiplier.
    ExprPtr tau_coefficient() {
        const std::size_t at = peek().pos;
        ExprPtr s = expr();
        ExprPtr c = coefficient_of_tau(s, at);
        if (contains_kind(*c, NodeKind::tau)) throw ParseError("scale must be a multiple of tau", at);
        for (const auto& name : free_symbols(*c))
            if (!kParams.contains(name) && !indices_.contains(name))
                throw ParseError("scale depends on variable '" + name + "'", at);
        return c;
    }

    static ExprPtr coefficient_of_tau(const ExprPtr& s, std::size_t at) {
        if (s->kind == NodeKind::tau) return make_number(1);
        if (s->kind == NodeKind::mul) {
            const bool left = contains_kind(*s->args[0], NodeKind::tau);
            const bool right = contains_kind(*s->args[1], NodeKind::tau);
            if (left && !right) {
                ExprPtr c = coefficient_of_tau(s->args[0], at);
                return is_one(c) ? s->args[1] : make_binary(NodeKind::mul, c, s->args[1]);
            }
            if (right && !left) {
                ExprPtr c = coefficient_of_tau(s->args[1], at);
                return is_one(c) ? s->args[0] : make_binary(NodeKind::mul, s->args[0], c);
            }
        }
        if (s->kind == NodeKind::div && !contains_kind(*s->args[1], NodeKind::tau))
            return make_binary(NodeKind::div, coefficient_of_tau(s->args[0], at), s->args[1]);
        throw ParseError("expected a positive multiple of tau after '|'", at);
    }

    static bool is_one(const ExprPtr& e) { return e->kind == NodeKind::number && e->number == Rational(1); }

    // Polynomial degree in the non-parameter symbols; 99 for anything else.
    int degree(const Expr& e) const {
        switch (e.kind) {
            case NodeKind::number:
            case NodeKind::imag_unit:
            case NodeKind::pi:
            case NodeKind::tau: return 0;
            case NodeKind::symbol: return (kParams.contains(e.name) || indices_.contains(e.name)) ? 0 : 1;
            case NodeKind::add:
            case NodeKind::sub: return std::max(degree(*e.args[0]), degree(*e.args[1]));
            case NodeKind::neg: return degree(*e.args[0]);
            case NodeKind::mul: return std::min(99, degree(*e.args[0]) + degree(*e.args[1]));
            case NodeKind::div: return degree(*e.args[1]) == 0 ? degree(*e.args[0]) : 99;
            default: {
                int d = 0;
                for (const auto& a : e.args) d = std::max(d, degree(*a));
                return d == 0 ? 0 : 99;
            }
        }
    }

    ExprPtr linear_argument() {
        const std::size_t at = peek().pos;
        ExprPtr a = expr();
        if (degree(*a) > 1) throw ParseError("theta argument is not linear in the variables", at);
        return a;
    }

    ExprPtr primary() {
        const Token t = next();
        if (t.type == Tok::number) return make_number(parse_decimal(t.text, t.pos));
        if (t.type == Tok::punct && t.text == "(") {
            ExprPtr e = expr();
            expect(")");
            return e;
        }
        if (t.type != Tok::ident) throw ParseError(t.type == Tok::end ? "unexpected end of input" : "unexpected '" + t.text + "'", t.pos);
        const std::string& id = t.text;

        if (id == "pi") return make_node(NodeKind::pi, {});
        if (id == "tau") return make_node(NodeKind::tau, {});
        if (id == "i") return make_node(NodeKind::imag_unit, {});
        if (id == "q") {
            if (accept("^")) return make_node(NodeKind::qpow, {unary()});
            return make_node(NodeKind::qpow, {make_number(1)});
        }
        if (int kind = 0, deriv = 0; theta_name(id, kind, deriv)) {
            expect("(");
            ExprPtr arg = linear_argument();
            expect("|");
            ExprPtr c = tau_coefficient();
            expect(")");
            return make_theta(kind, arg, c, deriv);
        }
        if (id == "K" && peek().text == "(") {
            expect("(");
            ExprPtr y = expr();
            expect(";");
            ExprPtr z = expr();
            expect("|");
            ExprPtr c = tau_coefficient();
            expect(")");
            ExprPtr num = make_binary(NodeKind::mul, make_theta(1, make_number(0), c, 1),
                                      make_theta(1, make_binary(NodeKind::add, z, y), c));
            ExprPtr den = make_binary(NodeKind::mul, make_theta(1, z, c), make_theta(1, y, c));
            return make_binary(NodeKind::div, num, den);
        }
        if (id == "lambert") return lambert();
        if (id == "sum" && peek().text == "(") return finite_sum();
        if (auto it = kFixedFunctions.find(id); it != kFixedFunctions.end() && peek().text == "(") {
            expect("(");
            std::vector<ExprPtr> args;
            switch (it->second) {
                case NodeKind::eta:
                case NodeKind::eisenstein_a: args.push_back(tau_coefficient()); break;
                case NodeKind::wp:
                    args.push_back(expr());
                    expect("|");
                    args.push_back(tau_coefficient());
                    break;
                case NodeKind::qpinf:
                    args.push_back(expr());
                    args.push_back(accept("|") ? tau_coefficient() : make_number(1));
                    break;
                case NodeKind::psi11:
                    args.push_back(expr());
                    expect(",");
                    args.push_back(expr());
                    expect(",");
                    args.push_back(expr());
                    args.push_back(accept("|") ? tau_coefficient() : make_number(1));
                    break;
                case NodeKind::kbilateral:
                    args.push_back(expr());
                    expect(";");
                    args.push_back(expr());
                    expect("|");
                    args.push_back(tau_coefficient());
                    break;
                default: break;
            }
            expect(")");
            return make_node(it->second, std::move(args));
        }
        if (kUnaryFunctions.contains(id) && peek().text == "(") {
            expect("(");
            ExprPtr a = expr();
            expect(")");
            auto e = std::make_shared<Expr>();
            e->kind = NodeKind::func;
            e->name = id;
            e->args = {a};
            return e;
        }
        if (symbols_.contains(id) || indices_.contains(id)) return make_symbol(id);
        throw ParseError("unknown symbol '" + id + "'", t.pos);
    }

    static bool theta_name(const std::string& id, int& kind, int& deriv) {
        std::string rest = id;
        deriv = 0;
        if (rest.starts_with("dtheta")) {
            deriv = 1;
            rest = rest.substr(1);
        } else if (rest.size() > 2 && rest[0] == 'd' && std::isdigit(static_cast<unsigned char>(rest[1])) &&
                   rest.substr(2).starts_with("theta")) {
            deriv = rest[1] - '0';
            rest = rest.substr(2);
        }
        if (rest.size() != 6 || !rest.starts_with("theta") || rest[5] < '1' || rest[5] > '4') return false;
        if (deriv > kMaxThetaDerivative) return false;
        kind = rest[5] - '0';
        return true;
    }

    ExprPtr lambert() {
        expect("{");
        LambertSpec spec;
        while (!accept("}")) {
            const Token key = next();
            if (key.type != Tok::ident) throw ParseError("expected a lambert field name", key.pos);
            expect("=");
            const Token val = next();
            auto integer = [&]() -> long {
                if (val.type == Tok::punct && val.text == "-") {
                    const Token v2 = next();
                    if (v2.type != Tok::number) throw ParseError("expected an integer", v2.pos);
                    return -std::stol(v2.text);
                }
                if (val.type != Tok::number) throw ParseError("expected an integer", val.pos);
                return std::stol(val.text);
            };
            if (key.text == "chi") {
                spec.modulus = integer();
                spec.use_jacobi_symbol = spec.modulus > 1;
            } else if (key.text == "coprime") {
                spec.modulus = integer();
                spec.use_jacobi_symbol = false;
            } else if (key.text == "twist") {
                if (val.text == "none") spec.sign_twist = SignTwist::none;
                else if (val.text == "alt") spec.sign_twist = SignTwist::alternating;
                else if (val.text == "chi4") spec.sign_twist = SignTwist::chi4;
                else throw ParseError("unknown twist '" + val.text + "'", val.pos);
            } else if (key.text == "odd") {
                spec.odd_only = integer() != 0;
            } else if (key.text == "weight") {
                spec.weight = static_cast<int>(integer());
            } else if (key.text == "a") {
                spec.num_exponent = static_cast<int>(integer());
            } else if (key.text == "b") {
                spec.den_exponent = static_cast<int>(integer());
            } else if (key.text == "sign") {
                spec.den_sign = static_cast<int>(integer());
            } else if (key.text == "trig") {
                if (val.text == "none") spec.trig = LambertTrig::none;
                else if (val.text == "sin2n") spec.trig = LambertTrig::sin2n;
                else if (val.text == "cos2n") spec.trig = LambertTrig::cos2n;
                else if (val.text == "sinn") spec.trig = LambertTrig::sin_n;
                else throw ParseError("unknown trig factor '" + val.text + "'", val.pos);
            } else {
                throw ParseError("unknown lambert field '" + key.text + "'", key.pos);
            }
            accept(",");
        }
        try {
            spec.validate();
        } catch (const DomainError& e) {
            throw ParseError(e.what(), peek().pos);
        }
        expect("(");
        ExprPtr first = expr();
        ExprPtr arg = make_number(0);
        ExprPtr c;
        if (accept("|")) {
            arg = first;
            c = tau_coefficient();
        } else {
            c = coefficient_of_tau(first, peek().pos);
        }
        expect(")");
        if (spec.trig == LambertTrig::none && !(arg->kind == NodeKind::number && arg->number == Rational(0)))
            throw ParseError("lambert series without a trig factor takes no argument", peek().pos);
        auto e = std::make_shared<Expr>();
        e->kind = NodeKind::lambert;
        e->lambert = spec;
        e->args = {arg, c};
        return e;
    }

    ExprPtr finite_sum() {
        expect("(");
        const Token idx = next();
        if (idx.type != Tok::ident) throw ParseError("expected a summation index", idx.pos);
        expect(",");
        ExprPtr lo = expr();
        expect(",");
        ExprPtr hi = expr();
        expect(",");
        const bool fresh = indices_.insert(idx.text).second;
        ExprPtr body = expr();
        if (fresh) indices_.erase(idx.text);
        expect(")");
        auto e = std::make_shared<Expr>();
        e->kind = NodeKind::sum;
        e->name = idx.text;
        e->args = {lo, hi, body};
        return e;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const std::set<std::string>& symbols_;
    std::set<std::string> indices_;
};

}  // namespace

ExprPtr parse_expr(const std::string& text, const std::set<std::string>& symbols) {
    return Parser(text, symbols).parse();
}

// ------------------------------------------------------------------ printer

namespace {

std::string scale_text(const Expr& c) {
    if (c.kind == NodeKind::number && c.number == Rational(1)) return "tau";
    return print_expr(c) + "*tau";
}

std::string lambert_fields(const LambertSpec& s) {
    std::ostringstream os;
    os << "lambert{" << (s.use_jacobi_symbol || s.modulus == 1 ? "chi=" : "coprime=") << s.modulus
       << ",twist=" << to_string(s.sign_twist) << ",odd=" << (s.odd_only ? 1 : 0) << ",weight=" << s.weight
       << ",a=" << s.num_exponent << ",b=" << s.den_exponent << ",sign=" << s.den_sign
       << ",trig=" << to_string(s.trig) << "}";
    return os.str();
}

}  // namespace

std::string print_expr(const Expr& e) {
    auto p = [](const ExprPtr& a) { return print_expr(*a); };
    switch (e.kind) {
        case NodeKind::number:
            if (e.number.is_integer() && e.number.num() >= 0) return std::to_string(e.number.num());
            return "(" + e.number.str() + ")";
        case NodeKind::imag_unit: return "i";
        case NodeKind::pi: return "pi";
        case NodeKind::tau: return "tau";
        case NodeKind::symbol: return e.name;
        case NodeKind::qpow: return "q^" + (e.args[0]->kind == NodeKind::number ? "(" + p(e.args[0]) + ")" : p(e.args[0]));
        case NodeKind::theta: {
            std::string name = e.deriv == 0 ? "theta" : e.deriv == 1 ? "dtheta" : "d" + std::to_string(e.deriv) + "theta";
            return name + std::to_string(e.index) + "(" + p(e.args[0]) + "|" + scale_text(*e.args[1]) + ")";
        }
        case NodeKind::eta: return "eta(" + scale_text(*e.args[0]) + ")";
        case NodeKind::wp: return "wp(" + p(e.args[0]) + "|" + scale_text(*e.args[1]) + ")";
        case NodeKind::eisenstein_a: return "a(" + scale_text(*e.args[0]) + ")";
        case NodeKind::lambert:
            return lambert_fields(e.lambert) + "(" + p(e.args[0]) + "|" + scale_text(*e.args[1]) + ")";
        case NodeKind::qpinf: return "qpinf(" + p(e.args[0]) + "|" + scale_text(*e.args[1]) + ")";
        case NodeKind::psi11:
            return "psi11(" + p(e.args[0]) + "," + p(e.args[1]) + "," + p(e.args[2]) + "|" + scale_text(*e.args[3]) + ")";
        case NodeKind::kbilateral:
            return "kbilateral(" + p(e.args[0]) + ";" + p(e.args[1]) + "|" + scale_text(*e.args[2]) + ")";
        case NodeKind::func: return e.name + "(" + p(e.args[0]) + ")";
        case NodeKind::add: return "(" + p(e.args[0]) + "+" + p(e.args[1]) + ")";
        case NodeKind::sub: return "(" + p(e.args[0]) + "-" + p(e.args[1]) + ")";
        case NodeKind::mul: return "(" + p(e.args[0]) + "*" + p(e.args[1]) + ")";
        case NodeKind::div: return "(" + p(e.args[0]) + "/" + p(e.args[1]) + ")";
        case NodeKind::pow: return "(" + p(e.args[0]) + "^" + p(e.args[1]) + ")";
        case NodeKind::neg: return "(-" + p(e.args[0]) + ")";
        case NodeKind::sum:
            return "sum(" + e.name + "," + p(e.args[0]) + "," + p(e.args[1]) + "," + p(e.args[2]) + ")";
    }
    return "?";
}

namespace {

void collect_symbols(const Expr& e, std::set<std::string>& bound, std::set<std::string>& out) {
    if (e.kind == NodeKind::symbol) {
        if (!bound.contains(e.name)) out.insert(e.name);
        return;
    }
    if (e.kind == NodeKind::sum) {
        collect_symbols(*e.args[0], bound, out);
        collect_symbols(*e.args[1], bound, out);
        const bool fresh = bound.insert(e.name).second;
        collect_symbols(*e.args[2], bound, out);
        if (fresh) bound.erase(e.name);
        return;
    }
    for (const auto& a : e.args) collect_symbols(*a, bound, out);
}

}  // namespace

std::set<std::string> free_symbols(const Expr& e) {
    std::set<std::string> bound;
    std::set<std::string> out;
    collect_symbols(e, bound, out);
    return out;
}

}  // namespace thetaforge

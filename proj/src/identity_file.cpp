#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "thetaforge/registry.hpp"

namespace thetaforge {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Splits on commas outside parentheses.
std::vector<std::string> split_top(const std::string& s) {
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) parts.push_back(trim(cur));
    return parts;
}

std::vector<std::string> words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> w;
    for (std::string t; in >> t;) w.push_back(t);
    return w;
}

long to_long(const std::string& s) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(s, &used);
    } catch (const std::exception&) {
        throw ParseError("expected an integer, got '" + s + "'", 0);
    }
    if (used != s.size()) throw ParseError("expected an integer, got '" + s + "'", 0);
    return v;
}

double to_double(const std::string& s) {
    const std::string t = trim(s);
    if (t == "pi") return kPi;
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw ParseError("expected a number, got '" + t + "'", 0);
    }
    if (used != t.size()) throw ParseError("expected a number, got '" + t + "'", 0);
    return v;
}

}  // namespace

std::string to_string(Backend b) { return b == Backend::numeric ? "numeric" : "formal"; }

ParamRange parse_param_range(const std::string& text) {
    // <name> [odd|even] in <lo>..<hi> [excluding multiples of <name>]
    const auto w = words(text);
    if (w.size() < 3) throw ParseError("malformed parameter range '" + text + "'", 0);
    ParamRange p;
    p.name = w[0];
    std::size_t i = 1;
    if (w[i] == "odd" || w[i] == "even") {
        p.parity = w[i] == "odd" ? ParamRange::Parity::odd : ParamRange::Parity::even;
        ++i;
    }
    if (i + 1 >= w.size() || w[i] != "in") throw ParseError("expected 'in' in '" + text + "'", 0);
    const std::string& r = w[i + 1];
    const auto dots = r.find("..", 1);
    if (dots == std::string::npos) throw ParseError("expected lo..hi in '" + text + "'", 0);
    p.lo = to_long(r.substr(0, dots));
    p.hi = to_long(r.substr(dots + 2));
    if (p.hi < p.lo) throw ParseError("empty parameter range '" + text + "'", 0);
    i += 2;
    if (i < w.size()) {
        if (w.size() != i + 4 || w[i] != "excluding" || w[i + 1] != "multiples" || w[i + 2] != "of")
            throw ParseError("malformed exclusion in '" + text + "'", 0);
        p.exclude_multiples_of = w[i + 3];
    }
    return p;
}

VarDomain parse_var_domain(const std::string& text) {
    // <name> [in parallelogram | strip | box(s0,s1,t0,t1) | rect(re0,re1,im0,im1)]
    const std::string t = trim(text);
    const auto sp = t.find_first_of(" \t");
    VarDomain d;
    d.name = t.substr(0, sp);
    if (sp == std::string::npos) return d;
    std::string rest = trim(t.substr(sp));
    if (rest.rfind("in", 0) != 0) throw ParseError("expected 'in' after variable in '" + text + "'", 0);
    rest = trim(rest.substr(2));
    if (rest == "parallelogram") return d;
    if (rest == "strip") {
        d.lo1 = -0.2;
        d.hi1 = 0.2;
        return d;
    }
    const auto open = rest.find('(');
    if (open == std::string::npos || rest.back() != ')') throw ParseError("unknown domain '" + rest + "'", 0);
    const std::string kind = trim(rest.substr(0, open));
    if (kind == "box")
        d.kind = VarDomain::Kind::box;
    else if (kind == "rect")
        d.kind = VarDomain::Kind::rect;
    else
        throw ParseError("unknown domain '" + kind + "'", 0);
    const auto nums = split_top(rest.substr(open + 1, rest.size() - open - 2));
    if (nums.size() != 4) throw ParseError("domain needs four bounds in '" + text + "'", 0);
    d.lo0 = to_double(nums[0]);
    d.hi0 = to_double(nums[1]);
    d.lo1 = to_double(nums[2]);
    d.hi1 = to_double(nums[3]);
    if (!(d.lo0 <= d.hi0 && d.lo1 <= d.hi1)) throw ParseError("reversed domain bounds in '" + text + "'", 0);
    return d;
}

void finalize_record(IdentityRecord& rec) {
    std::set<std::string> symbols;
    for (const auto& v : rec.vars) symbols.insert(v.name);
    for (const auto& p : rec.params) symbols.insert(p.name);
    try {
        rec.lhs = parse_expr(rec.lhs_text, symbols);
        rec.rhs = parse_expr(rec.rhs_text, symbols);
    } catch (const ParseError& e) {
        throw ParseError(rec.id + ": " + e.message(), e.position());
    }
    for (const auto& p : rec.params)
        if (!p.exclude_multiples_of.empty() && !symbols.contains(p.exclude_multiples_of))
            throw ParseError(rec.id + ": exclusion refers to unknown parameter '" + p.exclude_multiples_of + "'", 0);
}

std::vector<IdentityRecord> parse_identity_text(const std::string& text) {
    std::vector<IdentityRecord> out;
    IdentityRecord cur;
    bool open = false;
    std::size_t line_no = 0;

    auto flush = [&] {
        if (!open) return;
        if (cur.id.empty() || cur.lhs_text.empty() || cur.rhs_text.empty())
            throw ParseError("record ending at line " + std::to_string(line_no) + " needs id, lhs and rhs", 0);
        finalize_record(cur);
        out.push_back(std::move(cur));
        cur = IdentityRecord{};
        open = false;
    };

    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) {
            flush();
            continue;
        }
        if (t[0] == '#') continue;
        const auto colon = t.find(':');
        if (colon == std::string::npos) throw ParseError("line " + std::to_string(line_no) + ": expected 'key: value'", 0);
        const std::string key = trim(t.substr(0, colon));
        const std::string value = trim(t.substr(colon + 1));
        open = true;
        if (key == "id") {
            if (!cur.id.empty()) {
                throw ParseError("line " + std::to_string(line_no) + ": second id in one record", 0);
            }
            cur.id = value;
        } else if (key == "lhs") {
            cur.lhs_text = value;
        } else if (key == "rhs") {
            cur.rhs_text = value;
        } else if (key == "vars") {
            for (const auto& v : split_top(value)) cur.vars.push_back(parse_var_domain(v));
        } else if (key == "params") {
            for (const auto& p : split_top(value)) cur.params.push_back(parse_param_range(p));
        } else if (key == "backends") {
            cur.backends.clear();
            for (const auto& b : split_top(value)) {
                if (b == "numeric")
                    cur.backends.insert(Backend::numeric);
                else if (b == "formal")
                    cur.backends.insert(Backend::formal);
                else
                    throw ParseError("line " + std::to_string(line_no) + ": unknown backend '" + b + "'", 0);
            }
        } else if (key == "anchor") {
            cur.anchor = value;
        } else if (key == "error") {
            if (value == "relative")
                cur.error_mode = ErrorMode::relative;
            else if (value == "terms")
                cur.error_mode = ErrorMode::terms;
            else if (value == "absolute")
                cur.error_mode = ErrorMode::absolute;
            else
                throw ParseError("line " + std::to_string(line_no) + ": unknown error mode '" + value + "'", 0);
        } else if (key == "order") {
            cur.formal_order = to_long(value);
        } else {
            throw ParseError("line " + std::to_string(line_no) + ": unknown key '" + key + "'", 0);
        }
    }
    flush();
    return out;
}

std::vector<IdentityRecord> load_identity_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open identity file '" + path + "'", 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_identity_text(ss.str());
}

}  // namespace thetaforge

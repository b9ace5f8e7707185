#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "thetaforge/expr.hpp"
#include "thetaforge/qformal.hpp"

namespace thetaforge {

enum class Backend { numeric, formal };
std::string to_string(Backend b);

// Sampling domain of one free variable.
struct VarDomain {
    enum class Kind {
        box,   // s*pi + t*pi*tau with s in [lo0, hi0), t in [lo1, hi1)
        rect,  // re in [lo0, hi0), im in [lo1, hi1)
    };
    std::string name;
    Kind kind = Kind::box;
    double lo0 = 0.0, hi0 = 0.9, lo1 = 0.0, hi1 = 0.9;
};

// Integer parameter range "n odd in 1..9", "m in -4..4 excluding multiples of n".
struct ParamRange {
    enum class Parity { any, odd, even };
    std::string name;
    long lo = 0;
    long hi = 0;
    Parity parity = Parity::any;
    std::string exclude_multiples_of;  // empty: no exclusion
};

enum class ErrorMode {
    relative,  // |l - r| / max(|l|, |r|, 1e-30)
    terms,     // |l - r| / max(largest additive term of either side, 1e-30)
    absolute,  // |l - r|
};

// Excluded values of e^{2iy} for the decomposition modes: q^k (kronecker) or
// -q^(k+1/2) (theta3), |k| <= 10, within 1e-6.
struct DegeneracyGuard {
    enum class Mode { kronecker, theta3 };
    Mode mode = Mode::kronecker;
    std::string var;
};

struct IdentityRecord {
    std::string id;
    std::string lhs_text;
    std::string rhs_text;
    ExprPtr lhs;
    ExprPtr rhs;
    std::vector<VarDomain> vars;
    std::vector<ParamRange> params;
    std::set<Backend> backends{Backend::numeric};
    std::string anchor;
    ErrorMode error_mode = ErrorMode::relative;
    std::optional<DegeneracyGuard> guard;
    long formal_order = 0;  // 0: use the run's order
    bool negative_control = false;
};

// Parses lhs_text / rhs_text and checks that every free symbol is a declared
// variable or parameter. Throws ParseError.
void finalize_record(IdentityRecord& rec);

std::vector<IdentityRecord> builtin_catalog();
// Deliberately broken variants, one per backend.
std::vector<IdentityRecord> negative_controls();

ParamRange parse_param_range(const std::string& text);
VarDomain parse_var_domain(const std::string& text);

// Identity file loader (id:/lhs:/rhs:/vars:/params:/backends:/anchor: blocks
// separated by blank lines). Throws ParseError.
std::vector<IdentityRecord> load_identity_file(const std::string& path);
std::vector<IdentityRecord> parse_identity_text(const std::string& text);

struct VerificationReport {
    std::string id;
    Backend backend = Backend::numeric;
    bool pass = false;
    std::optional<double> max_rel_error;
    std::optional<std::string> first_mismatch;
    std::optional<long> samples;
    std::optional<long> order;
    std::uint64_t seed = 0;
    std::optional<double> elapsed_ms;
    std::optional<std::string> witness;
    std::optional<std::string> error;
};

struct NumericOptions {
    long samples = 20;
    double tol = 1e-9;
    std::uint64_t seed = 0;
    std::optional<cplx> fixed_tau;
    bool parallel = true;  // false: serial reference path
};

VerificationReport verify_numeric(const IdentityRecord& rec, const NumericOptions& opts);
VerificationReport verify_formal(const IdentityRecord& rec, long order);

// A side of an identity as an exact fraction of series.
struct FormalFraction {
    FormalSeries num;
    FormalSeries den;
};

// Compiles to series in the given variables (x_j = e^{i var_j}) valid below
// truncation_grains. Throws FormalError for nodes without an exact expansion.
FormalFraction compile_formal(const Expr& e, const std::vector<std::string>& vars, long truncation_grains);

struct RunConfig {
    std::uint64_t seed = 0;
    long samples = 20;
    double tol = 1e-9;
    long order = 40;
    std::string filter = "*";
    std::set<Backend> backends{Backend::numeric, Backend::formal};
    std::optional<cplx> fixed_tau;
    bool negative_controls = false;
    bool timing = false;
    bool parallel = true;
    std::vector<IdentityRecord> extra;  // appended to the catalog
    bool builtin = true;
};

bool glob_match(const std::string& pattern, const std::string& text);

// Every selected record on every enabled backend it supports, sorted by
// (id, backend).
std::vector<VerificationReport> run_all(const RunConfig& config);

std::string report_json(const VerificationReport& r);
std::string report_text(const VerificationReport& r);

}  // namespace thetaforge

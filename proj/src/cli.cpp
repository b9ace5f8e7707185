#include <cstdio>
#include <iostream>
#include <regex>

#include "CLI11.hpp"

#include "thetaforge/cli.hpp"
#include "thetaforge/registry.hpp"

namespace thetaforge {

cplx parse_complex(const std::string& text) {
    static const std::regex num(R"([+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)");
    static const std::regex imag(R"(([+-]?)((\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)?\*?i)");
    static const std::regex both(R"(([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)([+-])((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\*?i)");
    std::smatch m;
    auto imag_part = [](const std::string& sign, const std::string& mag) {
        const double v = mag.empty() ? 1.0 : std::stod(mag);
        return sign == "-" ? -v : v;
    };
    if (std::regex_match(text, m, num)) return {std::stod(text), 0.0};
    if (std::regex_match(text, m, imag)) return {0.0, imag_part(m[1].str(), m[2].str())};
    if (std::regex_match(text, m, both)) return {std::stod(m[1].str()), imag_part(m[2].str(), m[3].str())};
    throw ParseError("malformed complex number '" + text + "' (expected a+bi)", 0);
}

std::string format_complex(cplx z) {
    char buf[80];
    const double re = z.real() == 0.0 ? 0.0 : z.real();
    const double im = z.imag() == 0.0 ? 0.0 : z.imag();
    std::snprintf(buf, sizeof buf, "%.15g%s%.15gi", re, std::signbit(im) ? "" : "+", im);
    return buf;
}

namespace {

struct Options {
    std::string tau = "i";
    std::uint64_t seed = 0;
    long samples = 20;
    double tol = 1e-9;
    long order = 40;
    std::string filter = "*";
    std::string output = "text";
    std::string identities;
    std::string backend = "all";
    bool negative_controls = false;
    bool timing = false;
    bool serial = false;
    bool no_builtin = false;
    std::string expr;
    std::vector<std::string> bindings;
};

void add_run_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--tau", o.tau, "fix tau (a+bi); by default verify samples tau");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--samples", o.samples, "samples per parameter combination");
    cmd->add_option("--tol", o.tol, "numeric tolerance");
    cmd->add_option("--order", o.order, "formal comparison order in powers of q");
    cmd->add_option("--filter", o.filter, "id glob");
    cmd->add_option("--output", o.output, "text or json-lines")->check(CLI::IsMember({"text", "json-lines"}));
    cmd->add_option("--identities", o.identities, "extra identity file");
    cmd->add_option("--backend", o.backend, "numeric, formal or all")->check(CLI::IsMember({"numeric", "formal", "all"}));
    cmd->add_flag("--negative-controls", o.negative_controls, "include the deliberately broken records");
    cmd->add_flag("--timing", o.timing, "record elapsed_ms (breaks byte-identical output)");
    cmd->add_flag("--serial", o.serial, "use the serial reference evaluation path");
    cmd->add_flag("--no-builtin", o.no_builtin, "skip the built-in catalog");
}

int cmd_eval(const Options& o, std::ostream& out, std::ostream& err) {
    ExprPtr e;
    try {
        e = parse_expr(o.expr);
    } catch (const ParseError& ex) {
        err << "parse error: " << ex.what() << "\n";
        return kExitUsage;
    }
    Bindings b;
    try {
        for (const auto& s : o.bindings) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ParseError("binding '" + s + "' is not name=value", 0);
            b[s.substr(0, eq)] = parse_complex(s.substr(eq + 1));
        }
    } catch (const ParseError& ex) {
        err << "parse error: " << ex.what() << "\n";
        return kExitUsage;
    }
    try {
        const ModularPoint mp = ModularPoint::from_tau(parse_complex(o.tau));
        out << format_complex(eval_expr(e, b, mp)) << "\n";
    } catch (const ParseError& ex) {
        err << "parse error: " << ex.what() << "\n";
        return kExitUsage;
    } catch (const Error& ex) {
        err << "evaluation error: " << ex.what() << "\n";
        return kExitEvaluation;
    }
    return kExitPass;
}

int cmd_verify(const Options& o, bool summary, std::ostream& out, std::ostream& err) {
    if (o.samples < 1 || !(o.tol > 0.0) || o.order < 1) {
        err << "config error: need samples >= 1, tol > 0, order >= 1\n";
        return kExitUsage;
    }
    RunConfig cfg;
    cfg.seed = o.seed;
    cfg.samples = o.samples;
    cfg.tol = o.tol;
    cfg.order = o.order;
    cfg.filter = o.filter;
    cfg.negative_controls = o.negative_controls;
    cfg.timing = o.timing;
    cfg.parallel = !o.serial;
    cfg.builtin = !o.no_builtin;
    if (o.backend == "numeric") cfg.backends = {Backend::numeric};
    if (o.backend == "formal") cfg.backends = {Backend::formal};
    try {
        if (o.tau != "sampled") cfg.fixed_tau = parse_complex(o.tau);
        if (!o.identities.empty()) cfg.extra = load_identity_file(o.identities);
    } catch (const ParseError& ex) {
        err << "config error: " << ex.what() << "\n";
        return kExitUsage;
    }
    const auto reports = run_all(cfg);
    if (reports.empty()) err << "warning: no identities matched filter '" << o.filter << "'\n";
    long failed = 0;
    for (const auto& r : reports) {
        if (!r.pass) ++failed;
        out << (o.output == "json-lines" ? report_json(r) : report_text(r)) << "\n";
    }
    if (summary && o.output == "text")
        out << reports.size() << " checks, " << reports.size() - static_cast<std::size_t>(failed) << " passed, "
            << failed << " failed\n";
    return failed == 0 ? kExitPass : kExitFailure;
}

int cmd_list(const Options& o, std::ostream& out, std::ostream& err) {
    std::vector<IdentityRecord> recs;
    try {
        if (!o.no_builtin) recs = builtin_catalog();
        if (!o.identities.empty()) {
            auto extra = load_identity_file(o.identities);
            recs.insert(recs.end(), extra.begin(), extra.end());
        }
        if (o.negative_controls) {
            auto neg = negative_controls();
            recs.insert(recs.end(), neg.begin(), neg.end());
        }
    } catch (const ParseError& ex) {
        err << "config error: " << ex.what() << "\n";
        return kExitUsage;
    }
    for (const auto& r : recs) {
        if (!glob_match(o.filter, r.id)) continue;
        std::string backends;
        for (Backend b : r.backends) backends += (backends.empty() ? "" : ",") + to_string(b);
        out << r.id << "  [" << backends << "]  " << r.anchor << "\n";
        out << "    " << r.lhs_text << "\n    = " << r.rhs_text << "\n";
    }
    return kExitPass;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"theta_forge: evaluate theta-function expressions and verify identities"};
    app.require_subcommand(1);
    Options o;
    auto* eval = app.add_subcommand("eval", "evaluate an expression");
    eval->add_option("expr", o.expr, "expression")->required();
    eval->add_option("bindings", o.bindings, "name=value pairs");
    eval->add_option("--tau", o.tau, "tau (a+bi)");
    auto* verify = app.add_subcommand("verify", "verify catalog identities");
    auto* list = app.add_subcommand("list", "list catalog identities");
    auto* report = app.add_subcommand("report", "verify and print a summary");
    add_run_flags(verify, o);
    add_run_flags(report, o);
    list->add_option("--filter", o.filter, "id glob");
    list->add_option("--identities", o.identities, "extra identity file");
    list->add_flag("--negative-controls", o.negative_controls, "include negative controls");
    list->add_flag("--no-builtin", o.no_builtin, "skip the built-in catalog");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    if (*eval) return cmd_eval(o, out, err);
    if (*list) return cmd_list(o, out, err);
    const CLI::App* cmd = *verify ? verify : report;
    Options run = o;
    // verify samples tau unless --tau was given
    if (cmd->count("--tau") == 0) run.tau = "sampled";
    if (run.tau != "sampled") {
        try {
            parse_complex(run.tau);
        } catch (const ParseError& ex) {
            err << "config error: " << ex.what() << "\n";
            return kExitUsage;
        }
    }
    return cmd_verify(run, cmd == report, out, err);
}

}  // namespace thetaforge

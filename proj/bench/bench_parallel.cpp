// Compares the OpenMP kernels against their serial references.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <string>

#include "CLI11.hpp"

#include "thetaforge/qformal.hpp"
#include "thetaforge/registry.hpp"

using namespace thetaforge;

namespace {

template <class F>
double time_ms(int repeat, F&& f) {
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < repeat; ++i) f();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count() / repeat;
}

void row(const char* name, double serial, double parallel, bool same) {
    std::printf("%-34s %10.2f %10.2f %8.2fx  %s\n", name, serial, parallel, serial / parallel, same ? "identical" : "DIFFERENT");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs OpenMP timings"};
    int repeat = 3;
    long order = 200;
    long samples = 40;
    app.add_option("--repeat", repeat, "repetitions per measurement");
    app.add_option("--order", order, "series order for the product benchmark");
    app.add_option("--samples", samples, "samples for the numeric benchmark");
    CLI11_PARSE(app, argc, argv);

    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-34s %10s %10s %9s\n", "kernel", "serial ms", "omp ms", "speedup");

    {
        const FormalSeries a = fs_pow(fs_eta(1, order), 3);
        const FormalSeries b = fs_eta(5, order);
        FormalSeries s({}, 0), p({}, 0);
        const double ts = time_ms(repeat, [&] { s = fs_mul_serial(a, b); });
        const double tp = time_ms(repeat, [&] { p = fs_mul(a, b); });
        row("fs_mul eta^3 * eta(5tau)", ts, tp, s.coeffs() == p.coeffs());
    }
    {
        FormalThetaArg arg{{1}, Rational(0), Rational(0)};
        const FormalSeries a = fs_theta(ThetaKind(3), arg, 1, 0, order / 4, {"x"});
        const FormalSeries b = fs_theta(ThetaKind(1), FormalThetaArg{{2}, Rational(0), Rational(0)}, 1, 0, order / 4, {"x"});
        FormalSeries s({"x"}, 0), p({"x"}, 0);
        const double ts = time_ms(repeat, [&] { s = fs_mul_serial(a, b); });
        const double tp = time_ms(repeat, [&] { p = fs_mul(a, b); });
        row("fs_mul theta3(z) * theta1(2z)", ts, tp, s.coeffs() == p.coeffs());
    }
    for (const char* id : {"nfold-theta1", "winquist", "four-point-product"}) {
        IdentityRecord rec;
        for (auto& r : builtin_catalog())
            if (r.id == id) rec = r;
        NumericOptions o;
        o.samples = samples;
        VerificationReport s, p;
        o.parallel = false;
        const double ts = time_ms(repeat, [&] { s = verify_numeric(rec, o); });
        o.parallel = true;
        const double tp = time_ms(repeat, [&] { p = verify_numeric(rec, o); });
        row(("verify_numeric " + std::string(id)).c_str(), ts, tp, s.max_rel_error == p.max_rel_error);
    }
    return 0;
}

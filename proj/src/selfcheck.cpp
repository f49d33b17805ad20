#include "simopn/selfcheck.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>

#include "simopn/analysis.hpp"
#include "simopn/channel.hpp"
#include "simopn/constellation.hpp"
#include "simopn/detectors.hpp"
#include "simopn/quadrature.hpp"
#include "simopn/reference.hpp"

namespace simopn {

namespace {

constexpr double kPi = std::numbers::pi;

std::string format(const char* fmt, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), fmt, a, b);
    return buf;
}

CheckResult check_likelihood_quadrature(std::uint64_t seed) {
    const auto vm = PhaseNoiseModel::von_mises(3.0);
    const PskConstellation qpsk(4);
    double worst = 0.0;
    for (int mode_idx = 0; mode_idx < 2; ++mode_idx) {
        ChannelParams p;
        p.rho = 4.0;
        p.antennas = 2;
        p.mode = mode_idx == 0 ? OperationMode::synchronous
                               : OperationMode::non_synchronous;
        p.phase_model = vm;
        for (int i = 0; i < 4; ++i) {
            RandomStream rng = RandomStream::keyed(seed, 1000 + mode_idx, i);
            const Frame f = simulate_frame(p, qpsk.symbol(i), rng);
            for (int n = 0; n < 4; n += 2) {
                const auto s = qpsk.symbol(n);
                double series, quad;
                if (p.mode == OperationMode::synchronous) {
                    series = loglik_sync(f, s, vm, p.rho);
                    quad = reference::loglik_sync_by_quadrature(f, s, vm,
                                                                p.rho, 1e-10);
                } else {
                    series = loglik_nonsync(f, s, vm, p.rho);
                    quad = reference::loglik_nonsync_by_quadrature(
                        f, s, vm, p.rho, 1e-10);
                }
                const double rel = std::abs(series - quad) /
                                   std::max(1.0, std::abs(quad));
                worst = std::max(worst, rel);
            }
        }
    }
    return {"likelihood-vs-quadrature", worst <= 1e-6,
            format("max relative difference %.3g (limit %.3g)", worst, 1e-6)};
}

CheckResult check_density_normalization() {
    double worst = 0.0;
    for (double kappa : {0.0, 0.5, 5.0, 50.0}) {
        const auto vm = PhaseNoiseModel::von_mises(kappa);
        const double mass = reference::integrate(
            [&](double p) { return vm.pdf(p); }, -kPi, kPi, 1e-12);
        worst = std::max(worst, std::abs(mass - 1.0));
    }
    return {"density-normalization", worst <= 1e-9,
            format("max |mass - 1| = %.3g (limit %.3g)", worst, 1e-9)};
}

CheckResult check_variance_formula(std::uint64_t seed, bool quick) {
    const int N = 4, n = 1;
    const double kappa = 2.0;
    const double a = kPi * n / N;
    const auto vm = PhaseNoiseModel::von_mises(kappa);
    const double r = vm.coefficients()[1];
    const int draws = quick ? 200000 : 1000000;

    RandomStream rng = RandomStream::keyed(seed, 2000, 0);
    double sum2 = 0.0, sum4 = 0.0, sum = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double psi = vm.sample(rng);
        const double x =
            std::sin(a) * std::sin(psi - a) + std::sin(a) * std::sin(a) * r;
        sum += x;
        sum2 += x * x;
        sum4 += x * x * x * x;
    }
    const double mean = sum / draws;
    const double var = sum2 / draws - mean * mean;
    const double m4 = sum4 / draws;
    const double formula = pairwise_stat_variance(N, n, kappa);
    const double se = std::sqrt((m4 - formula * formula) / draws);
    const double dev = std::abs(var - formula);
    return {"pairwise-variance-sampling", dev <= 5.0 * se,
            format("|sampled - closed form| = %.3g, 5 se = %.3g", dev,
                   5.0 * se)};
}

CheckResult check_bound_dominance(std::uint64_t seed, bool quick) {
    const int N = 8, M = 16;
    const double kappa = 2.0;
    const int trials = quick ? 20000 : 100000;
    const auto vm = PhaseNoiseModel::von_mises(kappa);

    RandomStream rng = RandomStream::keyed(seed, 3000, 0);
    Frame f;
    f.x.assign(M, {1.0, 0.0});
    f.y.resize(M);
    int errors = 0;
    for (int t = 0; t < trials; ++t) {
        for (int m = 0; m < M; ++m)
            f.y[m] = std::polar(1.0, vm.sample(rng));
        if (detect_high_snr_nonsync(f, N).decided_index != 0) ++errors;
    }
    const double ser = static_cast<double>(errors) / trials;
    const double se = std::sqrt(std::max(ser * (1.0 - ser), 1e-12) / trials);
    const double bound = union_bound_ser(N, kappa, M);
    return {"union-bound-dominance", ser <= bound + 3.0 * se,
            format("sampled floor %.3g vs bound %.3g", ser, bound)};
}

}  // namespace

std::vector<CheckResult> run_verification(std::uint64_t seed, bool quick) {
    std::vector<CheckResult> out;
    out.push_back(check_likelihood_quadrature(seed));
    out.push_back(check_density_normalization());
    out.push_back(check_variance_formula(seed, quick));
    out.push_back(check_bound_dominance(seed, quick));
    return out;
}

}  // namespace simopn

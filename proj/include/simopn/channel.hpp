#pragma once

#include <complex>
#include <vector>

#include "simopn/phase_noise.hpp"
#include "simopn/rng.hpp"

namespace simopn {

// Whether the receive antennas share one oscillator (synchronous) or each
// runs its own (non_synchronous).
enum class OperationMode { synchronous, non_synchronous };

struct ChannelParams {
    double rho = 1.0;  // SNR per antenna, linear scale
    int antennas = 1;
    OperationMode mode = OperationMode::synchronous;
    PhaseNoiseModel phase_model = PhaseNoiseModel::von_mises(0.0);
};

// One pilot-plus-data observation:
//   x_m = sqrt(rho) e^{j theta_m} + w_m        (pilot slot)
//   y_m = sqrt(rho) s e^{j (theta_m + phi_m)} + z_m   (data slot)
// with w, z i.i.d. CN(0,1), theta_m uniform, and phi_m drawn from the
// phase-noise model. In synchronous mode all antennas share one theta and
// one phi.
struct Frame {
    std::vector<std::complex<double>> x;  // pilot observations
    std::vector<std::complex<double>> y;  // data observations

    // Ground truth kept for diagnostics and tests; detectors never read
    // these fields.
    std::vector<double> truth_theta;
    std::vector<double> truth_phi;
    int truth_symbol = -1;
};

// Draw order is fixed: all noise samples first (w, then z), then the
// carrier phases, then the oscillator phase errors. Paired experiments
// that replay one stream under both modes therefore see identical noise,
// which is what makes mode comparisons low-variance and reproducible.
Frame simulate_frame(const ChannelParams& params, std::complex<double> symbol,
                     RandomStream& rng);

}  // namespace simopn

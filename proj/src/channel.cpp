#include "simopn/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace simopn {

Frame simulate_frame(const ChannelParams& params, std::complex<double> symbol,
                     RandomStream& rng) {
    if (!(params.rho >= 0.0))
        throw std::domain_error("simulate_frame: rho must be >= 0");
    if (params.antennas < 1)
        throw std::invalid_argument("simulate_frame: need at least one antenna");

    const int m_count = params.antennas;
    const bool sync = params.mode == OperationMode::synchronous;
    const double amp = std::sqrt(params.rho);

    Frame f;
    f.x.resize(m_count);
    f.y.resize(m_count);
    f.truth_theta.resize(m_count);
    f.truth_phi.resize(m_count);

    for (int m = 0; m < m_count; ++m) f.x[m] = rng.next_cnormal();
    for (int m = 0; m < m_count; ++m) f.y[m] = rng.next_cnormal();

    if (sync) {
        const double theta = rng.next_angle();
        const double phi = params.phase_model.sample(rng);
        for (int m = 0; m < m_count; ++m) {
            f.truth_theta[m] = theta;
            f.truth_phi[m] = phi;
        }
    } else {
        for (int m = 0; m < m_count; ++m) f.truth_theta[m] = rng.next_angle();
        for (int m = 0; m < m_count; ++m)
            f.truth_phi[m] = params.phase_model.sample(rng);
    }

    for (int m = 0; m < m_count; ++m) {
        f.x[m] += amp * std::polar(1.0, f.truth_theta[m]);
        f.y[m] += amp * symbol * std::polar(1.0, f.truth_theta[m] + f.truth_phi[m]);
    }
    return f;
}

}  // namespace simopn

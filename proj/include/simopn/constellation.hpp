#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace simopn {

// Unit-energy phase-shift-keying alphabet: symbol n is
// exp(j 2 pi n / N) for n = 0..N-1, so symbol 0 is exactly 1.
class PskConstellation {
public:
    explicit PskConstellation(int order) : order_(order) {
        if (order < 2)
            throw std::invalid_argument("PskConstellation: order must be >= 2");
    }

    int size() const { return order_; }

    double phase(int n) const {
        return 2.0 * std::numbers::pi * n / order_;
    }

    std::complex<double> symbol(int n) const {
        if (n == 0) return {1.0, 0.0};
        return std::polar(1.0, phase(n));
    }

private:
    int order_;
};

}  // namespace simopn

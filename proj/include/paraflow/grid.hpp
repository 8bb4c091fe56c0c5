#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>

namespace paraflow {

/// Uniform n-by-n grid on the periodic square [-L, L]^2.
///
/// Samples sit at x_i = -L + 2L*i/n.  Fourier modes are e^{i xi.x} with
/// xi = (pi/L) * m for integer mode numbers m in [-n/2, n/2).  For the
/// standard torus L = pi and xi is an integer vector.
struct Grid {
    int n = 0;
    double half_width = std::numbers::pi;
    double dealias_fraction = 2.0 / 3.0;

    Grid() = default;
    Grid(int n_, double half_width_ = std::numbers::pi,
         double dealias_fraction_ = 2.0 / 3.0)
        : n(n_), half_width(half_width_), dealias_fraction(dealias_fraction_) {
        if (n < 32 || (n & (n - 1)) != 0)
            throw std::invalid_argument("grid size must be a power of two >= 32");
        if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
            throw std::invalid_argument("dealias fraction must lie in (0,1]");
    }

    std::size_t size() const { return static_cast<std::size_t>(n) * n; }

    /// Integer mode number for FFT bin a (standard wrap-around order).
    int mode(int a) const { return a < n / 2 ? a : a - n; }

    /// Physical frequency of FFT bin a along one axis.
    double freq(int a) const {
        return std::numbers::pi / half_width * mode(a);
    }

    double spacing() const { return 2.0 * half_width / n; }

    /// Sample coordinate along one axis.
    double coord(int i) const { return -half_width + spacing() * i; }

    /// Largest retained mode number per axis under the dealias rule.
    int cutoff() const {
        return static_cast<int>(std::floor(dealias_fraction * n / 2));
    }

    /// True if bin (a1, a2) survives dealiasing.
    bool in_band(int a1, int a2) const {
        int c = cutoff();
        return std::abs(mode(a1)) <= c && std::abs(mode(a2)) <= c;
    }

    bool operator==(const Grid& o) const {
        return n == o.n && half_width == o.half_width &&
               dealias_fraction == o.dealias_fraction;
    }
};

inline void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw std::invalid_argument("grid mismatch");
}

}  // namespace paraflow

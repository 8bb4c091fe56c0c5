#include "paraflow/profiles.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace paraflow::profiles {

namespace {

double bump(double t) {
    if (std::abs(t) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - t * t));
}

// 12-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr int kGL = 12;
const double gl_x[kGL] = {
    -0.9815606342467192, -0.9041172563704749, -0.7699026741943047,
    -0.5873179542866175, -0.3678314989981802, -0.1252334085114689,
    0.1252334085114689,  0.3678314989981802,  0.5873179542866175,
    0.7699026741943047,  0.9041172563704749,  0.9815606342467192};
const double gl_w[kGL] = {
    0.0471753363865118, 0.1069393259953184, 0.1600783285433462,
    0.2031674267230659, 0.2334925365383548, 0.2491470458134028,
    0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
    0.1600783285433462, 0.1069393259953184, 0.0471753363865118};

template <class F>
double integrate(F&& f, double a, double b, int panels) {
    double total = 0.0;
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double mid = a + (p + 0.5) * h;
        double acc = 0.0;
        for (int i = 0; i < kGL; ++i) acc += gl_w[i] * f(mid + 0.5 * h * gl_x[i]);
        total += 0.5 * h * acc;
    }
    return total;
}

// Cumulative integral of the bump over [-1, 1], tabulated once for the
// smoothed step.  Hermite interpolation keeps ~1e-13 accuracy.
struct StepTable {
    static constexpr int M = 4096;
    std::vector<double> cum;   // C(t_k) = int_{-1}^{t_k} bump
    std::vector<double> val;   // bump(t_k)
    double norm = 0.0;

    StepTable() : cum(M + 1), val(M + 1) {
        double h = 2.0 / M;
        cum[0] = 0.0;
        val[0] = bump(-1.0);
        for (int k = 1; k <= M; ++k) {
            double a = -1.0 + (k - 1) * h, b = -1.0 + k * h;
            cum[k] = cum[k - 1] + integrate(bump, a, b, 1);
            val[k] = bump(b);
        }
        norm = cum[M];
    }

    // S(t) = 1 - C(t)/C(1); S(-1) = 1, S(1) = 0.
    double eval(double t) const {
        if (t <= -1.0) return 1.0;
        if (t >= 1.0) return 0.0;
        double h = 2.0 / M;
        double u = (t + 1.0) / h;
        int k = std::min(static_cast<int>(u), M - 1);
        double s = u - k;
        double c0 = cum[k], c1 = cum[k + 1];
        double d0 = val[k] * h, d1 = val[k + 1] * h;
        double s2 = s * s, s3 = s2 * s;
        double c = (2 * s3 - 3 * s2 + 1) * c0 + (s3 - 2 * s2 + s) * d0 +
                   (-2 * s3 + 3 * s2) * c1 + (s3 - s2) * d1;
        return 1.0 - c / norm;
    }

    double deriv(double t) const {
        if (t <= -1.0 || t >= 1.0) return 0.0;
        return -bump(t) / norm;
    }
};

const StepTable& step_table() {
    static StepTable tab;
    return tab;
}

// Radial Fourier profile of the cutoff, tabulated with Hermite data.
struct HatTable {
    static constexpr double QMAX = 128.0;
    static constexpr int PER_UNIT = 64;
    std::vector<double> psi, dpsi, d2psi;

    HatTable() {
        int m = static_cast<int>(QMAX) * PER_UNIT;
        psi.resize(m + 1);
        dpsi.resize(m + 1);
        d2psi.resize(m + 1);
        const double two_pi = 2.0 * M_PI;
        for (int k = 0; k <= m; ++k) {
            double q = static_cast<double>(k) / PER_UNIT;
            int panels = std::max(16, static_cast<int>(q / 4.0) + 1);
            psi[k] = two_pi * integrate(
                [&](double r) { return radial_step(r) * std::cyl_bessel_j(0, q * r) * r; },
                0.0, 1.0, panels);
            dpsi[k] = -two_pi * integrate(
                [&](double r) { return radial_step(r) * std::cyl_bessel_j(1, q * r) * r * r; },
                0.0, 1.0, panels);
            // J1'(z) = (J0(z) - J2(z)) / 2
            d2psi[k] = -two_pi * integrate(
                [&](double r) {
                    double z = q * r;
                    double j1p = 0.5 * (std::cyl_bessel_j(0, z) - std::cyl_bessel_j(2, z));
                    return radial_step(r) * j1p * r * r * r;
                },
                0.0, 1.0, panels);
        }
    }

    double hermite(const std::vector<double>& v, const std::vector<double>& dv,
                   double q) const {
        if (q < 0.0) q = -q;
        if (q > QMAX) throw std::out_of_range("theta_hat: q beyond table range");
        double u = q * PER_UNIT;
        int k = std::min(static_cast<int>(u), static_cast<int>(v.size()) - 2);
        double s = u - k;
        double h = 1.0 / PER_UNIT;
        double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * v[k] + (s3 - 2 * s2 + s) * dv[k] * h +
               (-2 * s3 + 3 * s2) * v[k + 1] + (s3 - s2) * dv[k + 1] * h;
    }
};

std::mutex hat_mutex;
const HatTable& hat_table() {
    std::lock_guard<std::mutex> lock(hat_mutex);
    static HatTable tab;
    return tab;
}

}  // namespace

double radial_step(double r) {
    r = std::abs(r);
    if (r <= 0.5) return 1.0;
    if (r >= 1.0) return 0.0;
    return step_table().eval(4.0 * r - 3.0);
}

double radial_step_deriv(double r) {
    double sign = r < 0 ? -1.0 : 1.0;
    r = std::abs(r);
    if (r <= 0.5 || r >= 1.0) return 0.0;
    return sign * 4.0 * step_table().deriv(4.0 * r - 3.0);
}

double annulus(double r) { return radial_step(r / 2.0) - radial_step(r); }

double theta_hat(double q) {
    const auto& t = hat_table();
    return t.hermite(t.psi, t.dpsi, q);
}

double theta_hat_deriv(double q) {
    double sign = q < 0 ? -1.0 : 1.0;
    const auto& t = hat_table();
    return sign * t.hermite(t.dpsi, t.d2psi, q);
}

double theta_hat_qmax() { return HatTable::QMAX; }

}  // namespace paraflow::profiles

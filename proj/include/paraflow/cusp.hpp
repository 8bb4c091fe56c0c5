#pragma once

#include <vector>

#include "paraflow/field.hpp"
#include "paraflow/fitting.hpp"
#include "paraflow/shnirelman.hpp"

namespace paraflow::cusp {

/// Slowly decaying comparison weights for the weighted coefficients
/// a_n = (1+|n|^2)^{s/2} |fhat(n)|:
///   l_n = a_n / R_{|n|}^{1/4} + 1 / (|n| ln(1+|n|)),
/// R_r the tail sum of a^2 over |j| >= r.
class SlowSequence {
  public:
    SlowSequence(const ScalarField& f, double s);

    double a(int m1, int m2) const;
    double l(int m1, int m2) const;
    double tail(double radius) const;  // R_radius
    double l_norm_sq() const;          // sum of l_n^2 over the band
    double s() const { return s_; }
    const Grid& grid() const { return grid_; }

  private:
    Grid grid_;
    double s_;
    std::vector<double> a_, l_;
    std::vector<double> radii_;      // sorted unique radii
    std::vector<double> suffix_;     // tail sums of a^2 from each radius
};

struct HeavyTailDatum {
    ScalarField g;
    double s = 0.0;
    double c = 0.0;        // tail constant of the verified lower bound
    int n0 = 0;            // onset radius
    double min_value = 0.0;        // refined minimum (at the origin)
    std::array<double, 3> hessian{};  // d11, d12, d22 at the minimum
    double lambda1 = 0.0, lambda2 = 0.0;  // Hessian eigenvalues
    double distance = 0.0;  // H^s distance from the seed field
};

struct HeavyTailOptions {
    double eta = -1.0;   // uniqueness bump size; default r/100
    double eps = -1.0;   // convexity term size; default r/100
    int retries = 8;
    double bump_radius = 0.7853981633974483;  // pi/4
    int max_onset_divisor = 4;  // accept n0 <= cutoff / divisor
};

/// Spectral lower-bound check of the constructed tail: returns the minimal
/// onset N0 <= cap for constant c, or -1 if none works.
int verify_tail_bound(const ScalarField& g, double s, double c, int cap);

HeavyTailDatum make_heavy_tail(const ScalarField& f, double r, double s,
                               HeavyTailOptions opt = {});

/// Localized power-law profile H = chi(|x|/rho) * q(x)^alpha with
/// q = l1 x1^2 + l2 x2^2 (cell coordinates).
struct CuspProfile {
    double alpha = 0.3;
    double lambda1 = 1.0, lambda2 = 1.0;
    double cutoff_radius = 1.5707963267948966;  // pi/2
};

ScalarField cusp_field(const Grid& g, const CuspProfile& p);

struct CuspTailFit {
    fitting::LineFit axis1, axis2;     // log|Hhat| vs log n along each axis
    double anisotropy_ratio = 0.0;     // median Hhat(n e1)/Hhat(n e2) in window
    double compensated_spread = 0.0;   // rel. spread of Hhat * q(n)^{1+alpha}
};

CuspTailFit cusp_tail_fit(const Grid& g, const CuspProfile& p, int n_lo, int n_hi);

struct CuspDecomposition {
    ScalarField V;  // (g - m)^alpha
    ScalarField H;
    ScalarField R;
    double reassembly_error = 0.0;           // max |V - H - R| coefficient
    fitting::LineFit v_tail, h_tail, r_tail; // radial coefficient decay fits
    double slope_gap = 0.0;                  // h_tail - r_tail steepness gain
};

/// Splits (g-m)^alpha into the quadratic-form cusp built from the measured
/// Hessian plus a smoother remainder.  Requires 2 alpha < s - 4.
CuspDecomposition cusp_decompose(const HeavyTailDatum& datum, double alpha,
                                 double cutoff_radius = 1.0, int fit_lo = 8,
                                 int fit_hi = -1);

/// Pointwise C^{2 alpha} bound sup_j 2^{2 alpha j} ||Delta_j V||_inf.
double holder_bound(const ScalarField& V, double alpha);

struct FreezingResult {
    fitting::LineFit residual_tail;  // radial decay of (Delta Q - a(0,D)) H
    fitting::LineFit cusp_tail;      // radial decay of H itself
    double slope_gap = 0.0;
    double tail_sup = 0.0;  // largest residual coefficient beyond the window
};

FreezingResult symbol_freezing_residual(const shnirelman::Parametrix& par,
                                        const ScalarField& H, int fit_lo, int fit_hi);

struct TailSweepRow {
    double eps = 0.0;
    double plain = 0.0;      // <g, P_eps V>
    double driving = 0.0;    // <Delta Q g, P_eps V>
    double transport = 0.0;  // <T_{perp-grad g}. grad psi, P_eps V>
};

struct TailSweepResult {
    std::vector<TailSweepRow> rows;
    fitting::LineFit plain_fit, driving_fit, transport_fit;  // |pairing| vs eps
    double parseval_error = 0.0;  // physical quadrature vs spectral sum
};

TailSweepResult tail_bounds_sweep(const HeavyTailDatum& datum, double alpha,
                                  const std::vector<double>& eps_list,
                                  const shnirelman::Parametrix& par);

}  // namespace paraflow::cusp

#pragma once

#include <functional>

#include "paraflow/field.hpp"

namespace paraflow::spectral {

/// Apply a Fourier multiplier m(xi); the symbol receives the physical
/// frequency pair.  Homogeneous symbols must define their own value at 0.
ScalarField multiplier(const ScalarField& f,
                       const std::function<cplx(double, double)>& symbol);

ScalarField derivative(const ScalarField& f, int axis);
VectorField gradient(const ScalarField& f);
/// (-d2 f, d1 f)
VectorField perp_gradient(const ScalarField& f);
ScalarField laplacian(const ScalarField& f);
/// Requires zero mean; the zero mode stays zero.
ScalarField inv_laplacian(const ScalarField& f);
ScalarField divergence(const VectorField& v);
/// d1 v2 - d2 v1
ScalarField curl(const VectorField& v);
/// Riesz transform -i xi_j/|xi|.
ScalarField riesz(const ScalarField& f, int axis);
/// Integer power of the Beurling transform, symbol ((xi1+i xi2)^2/|xi|^2)^k.
ScalarField beurling_pow(const ScalarField& f, int k);

double sobolev_norm(const ScalarField& f, double s);
double l2_norm(const ScalarField& f);
/// Physical L2 inner product computed spectrally: (2L)^2 sum uhat conj(vhat).
double inner_l2(const ScalarField& u, const ScalarField& v);
double sobolev_inner(const ScalarField& u, const ScalarField& v, double s);
/// Physical-space quadrature of the L2 pairing (trapezoid = exact for
/// band-limited data); oracle counterpart of inner_l2.
double inner_l2_physical(const ScalarField& u, const ScalarField& v);
double linf_norm(const ScalarField& f);

/// Pointwise product, dealiased.
ScalarField product(const ScalarField& a, const ScalarField& b);

/// Littlewood-Paley family on a grid.  Block j=0 carries the ball
/// {|xi| <= 2} together with the mean; blocks j >= 1 live on the annuli
/// {2^{j-1} <= |xi| <= 2^{j+1}} via the profile annulus(2^{-j} r).  The
/// partial sums S_j telescope to the sharp-scale cutoff step(2^{-(j+1)} r).
class DyadicFamily {
  public:
    explicit DyadicFamily(const Grid& g);

    int max_index() const { return max_j_; }
    /// Multiplier value of block j at radius r.
    double block_symbol(int j, double r) const;
    /// Multiplier value of S_j at radius r.
    double partial_symbol(int j, double r) const;

    ScalarField block(const ScalarField& f, int j) const;
    ScalarField partial_sum(const ScalarField& f, int j) const;

  private:
    Grid grid_;
    int max_j_;
};

ScalarField dyadic_block(const ScalarField& f, int j);
ScalarField partial_sum(const ScalarField& f, int j);

/// Friedrichs mollifier theta(eps D) and its complement.
ScalarField mollify(const ScalarField& f, double eps);
ScalarField high_pass(const ScalarField& f, double eps);

}  // namespace paraflow::spectral

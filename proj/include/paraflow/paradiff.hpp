#pragma once

#include <functional>

#include "paraflow/field.hpp"

namespace paraflow::paradiff {

/// Bony paraproduct T_a u = sum_{j>=3} S_{j-3}a . Delta_j u, products
/// dealiased.  A constant symbol gives T_c u = c (u - S_2 u): the low
/// blocks j < 3 contribute nothing by construction.
ScalarField paraproduct(const ScalarField& a, const ScalarField& u);

/// L2 adjoint of T_a for real a: v -> sum_{j>=3} Delta_j (S_{j-3}a . v).
ScalarField paraproduct_adjoint(const ScalarField& a, const ScalarField& v);

/// a u - T_a u - T_u a.
ScalarField bony_remainder(const ScalarField& a, const ScalarField& u);

/// R_alg(a, b) u = T_a (T_b u) - T_{ab} u.
ScalarField composition_remainder(const ScalarField& a, const ScalarField& b,
                                  const ScalarField& u);

/// [T_a, m(D)] u = T_a (m(D) u) - m(D) (T_a u).
ScalarField multiplier_commutator(
    const ScalarField& a, const std::function<cplx(double, double)>& symbol,
    const ScalarField& u);

/// Component-wise contractions.
ScalarField paraproduct_dot(const VectorField& a, const VectorField& u);
VectorField paraproduct_mat(const MatrixField& A, const VectorField& y);
VectorField bony_remainder_mat(const MatrixField& A, const VectorField& y);

/// Alinhac paracomposition against chi = Id + displacement:
///   chi* f = f o chi - sum_j T_{(d_j f) o chi} displacement^j.
/// Requires f resolvable (no coefficient mass beyond the dealias band).
ScalarField paracompose(const VectorField& displacement, const ScalarField& f);

struct IdentityResidual {
    VectorField lhs;
    VectorField rhs;
    VectorField r1;
    VectorField r2;
    double defect = 0.0;  // ||lhs - rhs||_L2 / ||lhs||_L2 over the band
};

/// grad(chi* f) = T_{(Dchi)^T} (chi* grad f) + R1 + R2.
IdentityResidual gradient_identity_residual(const VectorField& displacement,
                                            const ScalarField& f);

/// perp-grad(chi* f) = T_{(Dchi)^{-1}} (chi* perp-grad f) + R1' + R2'.
IdentityResidual perp_gradient_identity_residual(const VectorField& displacement,
                                                 const ScalarField& f);

struct OperatorOrderEstimate {
    std::vector<double> probe_frequencies;
    std::vector<double> quotients;  // L2 output/input ratio per probe
    double fitted_order = 0.0;
    double residual = 0.0;  // R^2 of the log-log fit
};

/// Probes an operator with single modes e^{i 2^j dir.x}, j in
/// [j_lo, j_hi], and fits log(L2 quotient) against log(2^j).
OperatorOrderEstimate estimate_order(
    const std::function<ScalarField(const ScalarField&)>& op, const Grid& g,
    int j_lo, int j_hi, int dir1 = 1, int dir2 = 0);

/// Jacobian of chi = Id + displacement (spectral differentiation).
MatrixField jacobian(const VectorField& displacement);
/// Pointwise inverse assuming det = 1 (cofactor rearrangement).
MatrixField inverse_unimodular(const MatrixField& A);
MatrixField transpose(const MatrixField& A);
/// Max-norm deviation of det(Id + D displacement) from 1 on the grid.
double det_defect(const VectorField& displacement);

}  // namespace paraflow::paradiff

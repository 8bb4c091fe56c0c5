#pragma once

#include <vector>

#include "paraflow/euler.hpp"
#include "paraflow/field.hpp"

namespace paraflow::shnirelman {

/// X = T_{(DPhi)^{-1}} Phi under the T_a Id = 0 convention, i.e. the
/// paraproduct acts on the periodic displacement only.
struct ShnirelmanField {
    VectorField X;
    ScalarField curl_part;  // Delta^{-1} curl X potential source
    ScalarField div_part;
    ScalarField curl_X;
    ScalarField div_X;

    /// Max-norm coefficient error of the Helmholtz reassembly.
    double helmholtz_defect() const;
};

ShnirelmanField compute_X(const euler::FlowMap& flow);

/// Parametrix of the paradifferential Laplace-Beltrami operator of a flow:
/// Q = sum_{|k|<=K} T_{m_k} B^k Delta^{-1}, with angular coefficients m_k
/// from the inverse of the principal symbol profile.
struct Parametrix {
    Grid grid;
    int K = 0;                           // truncation order
    std::vector<ScalarField> m;          // m[k + K] holds m_k, complex fields
    MatrixField metric;                  // M = (DPhi)^{-1} (DPhi)^{-T}
    std::array<ScalarField, 3> p;        // angular profile coefficients p_{-1,0,1}
    double min_ellipticity = 0.0;        // min over (x, theta) of the profile

    std::array<double, 3> metric_origin{};  // (M11, M12, M22) at x = 0

    const ScalarField& coeff(int k) const { return m[static_cast<std::size_t>(k + K)]; }

    /// sup_x |m_k| for every |k| <= K.
    std::vector<double> coeff_sup() const;
    /// Pointwise max error of sum_j m_{n-j} p_j - delta_{n0} over |n| <= K-1.
    double convolution_defect() const;
    /// Fitted exponential decay rate of sup|m_k| (log fit over k >= 1).
    double decay_rate(double* r2 = nullptr) const;
};

/// Number of trapezoid angles used for the angular Fourier coefficients.
inline constexpr int kAngularQuadrature = 256;

Parametrix build_parametrix(const euler::FlowMap& flow, double tail_tol = 1e-12);
/// Surrogate with a constant metric (closed-form checks).
Parametrix build_parametrix_constant(const Grid& g, double m11, double m12, double m22,
                                     double tail_tol = 1e-12);

/// Q f = sum_k T_{m_k} B^k Delta^{-1} f  (f zero-mean).
ScalarField apply_Q(const Parametrix& par, const ScalarField& f);
/// div(T_M grad v).
ScalarField apply_para_laplacian(const Parametrix& par, const ScalarField& v);
/// S v = Q(div(T_M grad v)) - v, the parametrix defect operator.
ScalarField apply_S(const Parametrix& par, const ScalarField& v);
/// Delta Q f (zero-mean f).
ScalarField apply_laplacian_Q(const Parametrix& par, const ScalarField& f);
/// Constant-coefficient multiplier |xi|^2 / (xi . M(x0) xi) with the metric
/// frozen at the origin.
ScalarField apply_frozen_symbol(const Parametrix& par, const ScalarField& f);

/// Relative residual of d_t X = perp-grad(Phi* psi) - R_B((DPhi)^{-1}, u o Phi)
/// with d_t X by centered differences of the flow at t-dt, t, t+dt.
struct EvolutionResidual {
    double residual = 0.0;   // L2 of the defect
    double relative = 0.0;   // normalized by the largest term norm
};

EvolutionResidual evolution_residual_stream(const euler::FlowMap& before,
                                            const euler::FlowMap& at,
                                            const euler::FlowMap& after,
                                            const ScalarField& psi,
                                            const VectorField& u, double dt);

/// Relative residual of the closed evolution equation
///   d_t X + perp-grad Q T_{grad w0}.X = perp-grad Q w0 - R,
/// with every piece of R assembled from the same snapshots.
EvolutionResidual evolution_residual_closed(const euler::FlowMap& before,
                                            const euler::FlowMap& at,
                                            const euler::FlowMap& after,
                                            const ScalarField& omega0,
                                            const ScalarField& psi,
                                            const VectorField& u, double dt);

/// Pull-back identity defect:
///   Phi* omega = omega0 - T_{grad w0}.X + R_alg-term.
double pullback_identity_defect(const euler::FlowMap& flow, const ScalarField& omega,
                                const ScalarField& omega0);

struct ProbeSample {
    double t = 0.0;
    double y = 0.0;              // <curl X, P_eps V>
    double driving = 0.0;        // <Delta Q w0, P_eps V>
    double transport = 0.0;      // <T_{grad w0}.perp-grad Delta Q Delta^{-1} curl X, P_eps V>
};

ProbeSample probe_sample(const euler::FlowMap& flow, const Parametrix& par,
                         const ScalarField& omega0, const ScalarField& cusp_field,
                         double eps);

}  // namespace paraflow::shnirelman

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "paraflow/euler.hpp"
#include "paraflow/field.hpp"
#include "paraflow/fitting.hpp"

namespace paraflow::packets {

/// Localized linear-profile perturbation
///   zeta(y) = delta rho^{s-2} theta((y - y0)/rho) v.(y - y0),
/// theta the radial cutoff from the spectral core.
struct LinearPacket {
    std::array<double, 2> center{};     // y0
    std::array<double, 2> direction{};  // v, |v| = 1
    double amplitude = 1.0;             // delta
    double scale = 0.5;                 // rho in (0, 1)
    double s = 2.5;
};

ScalarField zeta_field(const Grid& g, const LinearPacket& p);

/// Closed-form Fourier coefficient
///   i delta rho^{s+1} (2pi)^{-2} e^{-i k.y0} (v.k) Psi'(rho|k|)/|k|.
cplx zeta_fourier(const LinearPacket& p, int k1, int k2);

/// Interaction of the unit packet with u = alpha cos(x1):
///   J = alpha A(rho) v1 sin(y0_1),  A(rho) = 2^s (2pi)^{-2} rho^{s+1} Psi'(rho).
double interaction_formula(double alpha, const LinearPacket& p);
/// The same pairing computed as the H^s inner product of sampled fields.
double interaction_direct(const ScalarField& u, const ScalarField& zeta, double s);

/// True if some k in range with v.k != 0 has |Psi'(rho|k|)| < tol.
bool scale_flagged(double rho, const std::array<double, 2>& v,
                   const std::vector<std::array<int, 2>>& k_range, double tol = 1e-10);
/// Scans a uniform rho grid over (0,1) and returns the flagged scales.
std::vector<double> bad_scale_check(const LinearPacket& p,
                                    const std::vector<std::array<int, 2>>& k_range,
                                    int samples = 2048, double tol = 1e-10);

/// High-frequency sinusoidal packet
///   eta(x) = (r/5) delta^{s-1} theta((x - x0)/delta) sin(mu (x - x0).e / delta).
struct KochPacket {
    std::array<double, 2> center{};
    std::array<double, 2> direction{};  // e, |e| = 1
    double delta = 0.25;
    double mu = 4.0;
    double r = 1.0;
    double s = 2.5;
};

/// Sampled field; throws if mu/delta exceeds a quarter of the dealias cutoff.
ScalarField koch_field(const Grid& g, const KochPacket& p);
/// Same field without the resolvability guard (norm cross-checks).
ScalarField koch_field_unchecked(const Grid& g, const KochPacket& p);

cplx koch_fourier(const KochPacket& p, int k1, int k2);

/// H^nu norm from the closed-form coefficients, summed over the lattice
/// region where the profile transform is non-negligible.
double koch_norm(const KochPacket& p, double nu, double q_reach = 40.0);

struct ScalingFit {
    double nu = 0.0;
    fitting::LineFit fit;  // log norm vs log delta; slope ~ s - nu
};

std::vector<ScalingFit> koch_scaling_fit(const KochPacket& base,
                                         const std::vector<double>& deltas,
                                         const std::vector<double>& nus);

/// eta o phi_lin sampled on the grid for the affine map
/// phi_lin(y) = x0 + A (y - y0).
ScalarField koch_pullback_affine(const Grid& g, const KochPacket& p,
                                 const std::array<double, 4>& A,
                                 const std::array<double, 2>& y0);

struct StretchingResult {
    double t = 0.0;
    std::array<double, 2> x0{};
    std::array<double, 2> direction{};  // argmax unit vector e
    double gain = 1.0;                  // |(DPhi)^{-T} e|
};

/// Largest inverse-transpose-Jacobian stretching over the snapshots.
StretchingResult stretching_search(const std::vector<euler::FlowMap>& snapshots);
/// Same scan on a single flow map.
StretchingResult stretching_at(const euler::FlowMap& flow);

struct AmplificationConfig {
    double delta = 0.25;
    double mu = 4.0;
    double r = 1.0;
    double s = 2.5;
    double T = 1.5;
    double cfl = 0.5;
    double dt_max = 0.02;
};

struct AmplificationReport {
    double gain = 0.0;
    double hs_eta = 0.0;
    double hs_eta_pullback = 0.0;  // ||eta o phi_T||_{H^s}
    double linear_prediction = 0.0;  // gain^s ||eta||_{H^s}
    std::array<double, 4> term_norms{};  // H^s norms of the four pieces
    double ratio = 0.0;  // perturbed growth / unperturbed growth
    KochPacket packet;
};

/// Side-by-side evolution of mollified data with and without the packet;
/// the packet is centered at the stretching argmax of the unperturbed run.
AmplificationReport koch_amplification_experiment(const ScalarField& omega0,
                                                  const AmplificationConfig& cfg);

}  // namespace paraflow::packets

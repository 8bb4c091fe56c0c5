#pragma once

#include <vector>

#include "paraflow/euler.hpp"
#include "paraflow/field.hpp"
#include "paraflow/fitting.hpp"

namespace paraflow::boxflow {

/// Dipole vorticity d_2 F with F a radial bump of the given support radius:
/// compactly supported with exactly zero integral.
ScalarField dipole(const Grid& g, double support_radius, double amplitude);

/// Radial vorticity Delta F for a radial bump; zero integral, and the
/// induced velocity is exactly perp-grad F (a steady differential rotation).
ScalarField radial_vortex(const Grid& g, double support_radius, double amplitude);
/// Angular velocity Omega(r) = F'(r)/r of radial_vortex at radius r.
double radial_vortex_angular_velocity(double support_radius, double amplitude, double r);

/// Radius of the smallest origin-centered disk holding all samples with
/// |omega| > threshold * max|omega|.
double support_radius(const ScalarField& omega, double threshold = 1e-12);

struct ShankarRow {
    double t = 0.0;
    double G = 0.0;          // int dPhi/dt . (Phi - (x.grad)Phi)
    double companion = 0.0;  // 2 ||u0||^2 t
    double lhs_bound = 0.0;  // int |(x.grad) xi|^2
    double rhs_bound = 0.0;  // ||u0||^2 t^2
    double lip = 0.0;
    double support = 0.0;
};

/// Compactly supported data on a big periodic box standing in for the
/// plane; aborts when the support margin is breached.
class BoxRun {
  public:
    BoxRun(ScalarField omega0, double cfl = 0.5);

    const euler::Run& run() const { return run_; }
    double initial_energy_sq() const { return energy0_sq_; }

    /// Advance to T, recording a diagnostics row every `cadence` steps.
    /// Throws if the support leaves |x| <= L/2.
    void advance_to(double T, double dt_max, int cadence = 4);

    const std::vector<ShankarRow>& rows() const { return rows_; }
    ShankarRow diagnostics();

  private:
    void guard() const;

    euler::Run run_;
    double energy0_sq_ = 0.0;
    double support0_ = 0.0;
    std::vector<ShankarRow> rows_;
};

struct FarfieldReport {
    std::vector<double> radii;
    std::vector<double> u_mean;   // mean |u| on each circle
    std::vector<double> du_mean;  // mean |Du| on each circle
    fitting::LineFit u_fit, du_fit;
    double interpolation_constant = 0.0;  // ||u||_inf / (||w||_L1^1/2 ||w||_inf^1/2)
};

/// Requires zero mean and radii clear of the support (>= 2x support radius).
FarfieldReport farfield_decay(const ScalarField& omega, const std::vector<double>& radii,
                              int angles = 64);

}  // namespace paraflow::boxflow

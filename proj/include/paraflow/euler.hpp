#pragma once

#include <optional>

#include "paraflow/field.hpp"

namespace paraflow::euler {

/// div-free velocity from zero-mean vorticity, uhat = -i k-perp / |k|^2 what.
VectorField biot_savart(const ScalarField& omega);

/// -(u . grad omega), dealiased.
ScalarField vorticity_rhs(const ScalarField& omega, const VectorField& u);

struct EulerState {
    double t = 0.0;
    ScalarField omega;
    VectorField u;  // derived from omega

    EulerState() = default;
    EulerState(double time, ScalarField w);
};

/// One RK4 step of the vorticity transport equation.  Throws if dt exceeds
/// the CFL bound cfl * dx / max|u|.
EulerState step(const EulerState& s, double dt, double cfl = 0.5);

double max_speed(const VectorField& u);
double cfl_dt(const EulerState& s, double cfl = 0.5);

/// Forward flow map Phi = Id + displacement with cached spectral Jacobian.
struct FlowMap {
    double t = 0.0;
    VectorField displacement;

    FlowMap() = default;
    explicit FlowMap(const Grid& g) : displacement(g) {}

    MatrixField jacobian() const;
    double det_defect() const;
    /// Grid max of the Jacobian operator norm.
    double lipschitz_norm() const;
    /// Mean of the displacement (stays ~0 for mean-free velocities).
    double mean_drift() const;
};

/// Back-to-labels map phi = Phi^{-1} = Id + displacement, evolved by the
/// transport equation d_t phi + u . grad phi = 0.
struct InverseFlow {
    double t = 0.0;
    VectorField displacement;

    InverseFlow() = default;
    explicit InverseFlow(const Grid& g) : displacement(g) {}

    double lipschitz_norm() const;
};

/// RK4 update of the forward flow, evaluating the three stage velocities
/// off-grid by trigonometric summation.
FlowMap advance_flow(const FlowMap& flow, const VectorField& u_t,
                     const VectorField& u_half, const VectorField& u_full, double dt);

InverseFlow advance_inverse_flow(const InverseFlow& inv, const VectorField& u_t,
                                 const VectorField& u_half, const VectorField& u_full,
                                 double dt);

ScalarField compose_with_inverse(const ScalarField& f, const InverseFlow& inv);

/// Max-norm of Phi o phi - Id.
double roundtrip_defect(const FlowMap& flow, const InverseFlow& inv);

/// Couples the vorticity stepper with flow tracking: each step advances
/// omega by two half steps so the flow RK4 sees the mid-time velocity.
class Run {
  public:
    Run(ScalarField omega0, double cfl = 0.5, bool track_flow = true,
        bool track_inverse = true);

    const EulerState& state() const { return state_; }
    const FlowMap& flow() const { return flow_; }
    const InverseFlow& inverse() const { return inverse_; }
    const ScalarField& omega0() const { return omega0_; }

    /// Advance to time T (may be < current t; then dt runs backwards).
    /// Throws if the resolvability guard trips (enstrophy at the dealias
    /// edge above 1e-8 of the total).
    void advance_to(double T, double dt_max = 1e30);

    /// Single step of prescribed size (respects CFL).
    void step_once(double dt);

    double resolvability_ratio() const;

  private:
    EulerState state_;
    FlowMap flow_;
    InverseFlow inverse_;
    ScalarField omega0_;
    double cfl_;
    bool track_flow_, track_inverse_;
};

}  // namespace paraflow::euler

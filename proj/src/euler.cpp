#include "paraflow/euler.hpp"

#include <cmath>
#include <stdexcept>

#include "paraflow/compose.hpp"
#include "paraflow/spectral_ops.hpp"

namespace paraflow::euler {

VectorField biot_savart(const ScalarField& omega) {
    double scale = std::max(omega.max_coef(), 1e-300);
    if (std::abs(omega.coef()[0]) > 1e-10 * scale)
        throw std::invalid_argument("biot_savart: vorticity must have zero mean");
    VectorField u(omega.grid());
    u[0] = spectral::multiplier(omega, [](double k1, double k2) {
        double r2 = k1 * k1 + k2 * k2;
        return r2 == 0.0 ? cplx(0.0) : cplx(0.0, k2 / r2);
    });
    u[1] = spectral::multiplier(omega, [](double k1, double k2) {
        double r2 = k1 * k1 + k2 * k2;
        return r2 == 0.0 ? cplx(0.0) : cplx(0.0, -k1 / r2);
    });
    return u;
}

ScalarField vorticity_rhs(const ScalarField& omega, const VectorField& u) {
    ScalarField adv = spectral::product(u[0], spectral::derivative(omega, 0)) +
                      spectral::product(u[1], spectral::derivative(omega, 1));
    ScalarField out = -adv;
    out.zero_mean();
    return out;
}

EulerState::EulerState(double time, ScalarField w) : t(time), omega(std::move(w)) {
    omega.dealias();
    u = biot_savart(omega);
}

double max_speed(const VectorField& u) {
    auto u1 = u[0].to_physical();
    auto u2 = u[1].to_physical();
    double m = 0.0;
    for (std::size_t i = 0; i < u1.size(); ++i)
        m = std::max(m, std::hypot(u1[i], u2[i]));
    return m;
}

double cfl_dt(const EulerState& s, double cfl) {
    double speed = max_speed(s.u);
    if (speed == 0.0) return 1e30;
    return cfl * s.omega.grid().spacing() / speed;
}

EulerState step(const EulerState& s, double dt, double cfl) {
    if (std::abs(dt) > cfl_dt(s, cfl) * (1.0 + 1e-12))
        throw std::runtime_error("euler step: CFL violation");
    const ScalarField& w = s.omega;
    ScalarField k1 = vorticity_rhs(w, s.u);
    ScalarField w2 = w + (dt / 2) * k1;
    ScalarField k2 = vorticity_rhs(w2, biot_savart(w2));
    ScalarField w3 = w + (dt / 2) * k2;
    ScalarField k3 = vorticity_rhs(w3, biot_savart(w3));
    ScalarField w4 = w + dt * k3;
    ScalarField k4 = vorticity_rhs(w4, biot_savart(w4));
    ScalarField out = w + (dt / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.dealias();
    return EulerState(s.t + dt, std::move(out));
}

namespace {

MatrixField jac(const VectorField& d) {
    const Grid& g = d.grid();
    MatrixField J(g);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            J(i, j) = spectral::derivative(d[i], j);
            if (i == j) J(i, j).set_mode(0, 0, J(i, j).at_mode(0, 0) + 1.0);
        }
    return J;
}

double max_opnorm(const MatrixField& J) {
    auto a = J(0, 0).to_physical();
    auto b = J(0, 1).to_physical();
    auto c = J(1, 0).to_physical();
    auto d = J(1, 1).to_physical();
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        // Largest singular value of [[a,b],[c,d]].
        double f = a[i] * a[i] + b[i] * b[i] + c[i] * c[i] + d[i] * d[i];
        double det = a[i] * d[i] - b[i] * c[i];
        double disc = std::sqrt(std::max(f * f - 4.0 * det * det, 0.0));
        worst = std::max(worst, std::sqrt(0.5 * (f + disc)));
    }
    return worst;
}

}  // namespace

MatrixField FlowMap::jacobian() const { return jac(displacement); }

double FlowMap::det_defect() const {
    MatrixField J = jac(displacement);
    auto a = J(0, 0).to_physical();
    auto b = J(0, 1).to_physical();
    auto c = J(1, 0).to_physical();
    auto d = J(1, 1).to_physical();
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] * d[i] - b[i] * c[i] - 1.0));
    return worst;
}

double FlowMap::lipschitz_norm() const { return max_opnorm(jac(displacement)); }

double FlowMap::mean_drift() const {
    return std::max(std::abs(displacement[0].mean()), std::abs(displacement[1].mean()));
}

double InverseFlow::lipschitz_norm() const { return max_opnorm(jac(displacement)); }

FlowMap advance_flow(const FlowMap& flow, const VectorField& u_t,
                     const VectorField& u_half, const VectorField& u_full, double dt) {
    const Grid& g = flow.displacement.grid();
    const std::size_t sz = g.size();

    auto d1 = flow.displacement[0].to_physical();
    auto d2 = flow.displacement[1].to_physical();
    std::vector<double> base1(sz), base2(sz);
    for (int i = 0; i < g.n; ++i) {
        double x1 = g.coord(i);
        for (int j = 0; j < g.n; ++j) {
            std::size_t idx = static_cast<std::size_t>(i) * g.n + j;
            base1[idx] = x1 + d1[idx];
            base2[idx] = g.coord(j) + d2[idx];
        }
    }

    auto stage = [&](const VectorField& u, const std::vector<double>& k1v,
                     const std::vector<double>& k2v, double c) {
        std::vector<double> p1(sz), p2(sz);
        for (std::size_t i = 0; i < sz; ++i) {
            p1[i] = base1[i] + c * dt * k1v[i];
            p2[i] = base2[i] + c * dt * k2v[i];
        }
        compose::PointEvaluator ev({&u[0], &u[1]});
        return ev.eval(p1, p2);
    };

    std::vector<double> zero(sz, 0.0);
    auto k1 = stage(u_t, zero, zero, 0.0);
    auto k2 = stage(u_half, k1[0], k1[1], 0.5);
    auto k3 = stage(u_half, k2[0], k2[1], 0.5);
    auto k4 = stage(u_full, k3[0], k3[1], 1.0);

    std::vector<double> n1(sz), n2(sz);
    double reach = 0.0;
    for (std::size_t i = 0; i < sz; ++i) {
        double inc1 = dt / 6 * (k1[0][i] + 2 * k2[0][i] + 2 * k3[0][i] + k4[0][i]);
        double inc2 = dt / 6 * (k1[1][i] + 2 * k2[1][i] + 2 * k3[1][i] + k4[1][i]);
        n1[i] = d1[i] + inc1;
        n2[i] = d2[i] + inc2;
        reach = std::max({reach, std::abs(n1[i]), std::abs(n2[i])});
    }
    if (reach > 2.0 * g.half_width)
        throw std::runtime_error("flow displacement exceeds one period");

    FlowMap out(g);
    out.t = flow.t + dt;
    out.displacement[0] = ScalarField::from_physical(g, n1);
    out.displacement[1] = ScalarField::from_physical(g, n2);
    out.displacement[0].dealias();
    out.displacement[1].dealias();
    return out;
}

namespace {

VectorField inverse_rhs(const VectorField& disp, const VectorField& u) {
    // d_t phi + u . grad phi = 0 with phi = Id + disp:
    // d_t disp = -u - (u . grad) disp.
    VectorField out(disp.grid());
    for (int i = 0; i < 2; ++i) {
        ScalarField adv = spectral::product(u[0], spectral::derivative(disp[i], 0)) +
                          spectral::product(u[1], spectral::derivative(disp[i], 1));
        out[i] = -u[i] - adv;
    }
    return out;
}

}  // namespace

InverseFlow advance_inverse_flow(const InverseFlow& inv, const VectorField& u_t,
                                 const VectorField& u_half, const VectorField& u_full,
                                 double dt) {
    const VectorField& d = inv.displacement;
    VectorField k1 = inverse_rhs(d, u_t);
    VectorField k2 = inverse_rhs(d + (dt / 2) * k1, u_half);
    VectorField k3 = inverse_rhs(d + (dt / 2) * k2, u_half);
    VectorField k4 = inverse_rhs(d + dt * k3, u_full);
    InverseFlow out(d.grid());
    out.t = inv.t + dt;
    out.displacement = d + (dt / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.displacement[0].dealias();
    out.displacement[1].dealias();
    return out;
}

ScalarField compose_with_inverse(const ScalarField& f, const InverseFlow& inv) {
    return compose::pullback(f, inv.displacement);
}

double roundtrip_defect(const FlowMap& flow, const InverseFlow& inv) {
    const Grid& g = flow.displacement.grid();
    // Phi o phi at the grid nodes; the composition Phi(phi(x)) - x should
    // vanish.  Evaluate the forward displacement at phi(x).
    auto p1 = inv.displacement[0].to_physical();
    auto p2 = inv.displacement[1].to_physical();
    std::vector<double> y1(g.size()), y2(g.size());
    for (int i = 0; i < g.n; ++i) {
        double x1 = g.coord(i);
        for (int j = 0; j < g.n; ++j) {
            std::size_t idx = static_cast<std::size_t>(i) * g.n + j;
            y1[idx] = x1 + p1[idx];
            y2[idx] = g.coord(j) + p2[idx];
        }
    }
    compose::PointEvaluator ev({&flow.displacement[0], &flow.displacement[1]});
    auto vals = ev.eval(y1, y2);
    double worst = 0.0;
    for (std::size_t i = 0; i < y1.size(); ++i) {
        std::size_t row = i / g.n, col = i % g.n;
        double e1 = y1[i] + vals[0][i] - g.coord(static_cast<int>(row));
        double e2 = y2[i] + vals[1][i] - g.coord(static_cast<int>(col));
        worst = std::max(worst, std::max(std::abs(e1), std::abs(e2)));
    }
    return worst;
}

Run::Run(ScalarField omega0, double cfl, bool track_flow, bool track_inverse)
    : state_(0.0, omega0),
      flow_(omega0.grid()),
      inverse_(omega0.grid()),
      omega0_(std::move(omega0)),
      cfl_(cfl),
      track_flow_(track_flow),
      track_inverse_(track_inverse) {
    omega0_.dealias();
}

double Run::resolvability_ratio() const {
    const Grid& g = state_.omega.grid();
    const int c = g.cutoff();
    double edge = 0.0, total = 0.0;
    for (int a1 = 0; a1 < g.n; ++a1) {
        for (int a2 = 0; a2 < g.n; ++a2) {
            if (!g.in_band(a1, a2)) continue;
            int m = std::max(std::abs(g.mode(a1)), std::abs(g.mode(a2)));
            double e = std::norm(state_.omega.coef()[static_cast<std::size_t>(a1) * g.n + a2]);
            total += e;
            if (m >= c - 1) edge += e;
        }
    }
    return total > 0.0 ? edge / total : 0.0;
}

void Run::step_once(double dt) {
    EulerState s0 = state_;
    EulerState half = step(s0, dt / 2, cfl_);
    EulerState full = step(half, dt / 2, cfl_);
    if (track_flow_) flow_ = advance_flow(flow_, s0.u, half.u, full.u, dt);
    if (track_inverse_)
        inverse_ = advance_inverse_flow(inverse_, s0.u, half.u, full.u, dt);
    state_ = std::move(full);
}

void Run::advance_to(double T, double dt_max) {
    double dir = T >= state_.t ? 1.0 : -1.0;
    while (std::abs(T - state_.t) > 1e-14) {
        if (resolvability_ratio() > 1e-8)
            throw std::runtime_error(
                "run aborted: enstrophy reached the dealias edge (ratio > 1e-8)");
        double dt = std::min({dt_max, cfl_dt(state_, cfl_), std::abs(T - state_.t)});
        step_once(dir * dt);
    }
}

}  // namespace paraflow::euler

#include "paraflow/boxflow.hpp"

#include <cmath>
#include <stdexcept>

#include "paraflow/compose.hpp"
#include "paraflow/profiles.hpp"
#include "paraflow/spectral_ops.hpp"

namespace paraflow::boxflow {

ScalarField dipole(const Grid& g, double support_radius, double amplitude) {
    if (support_radius > g.half_width / 2)
        throw std::invalid_argument("dipole: support too large for the box");
    ScalarField f = ScalarField::sample(g, [&](double x1, double x2) {
        double r = std::hypot(x1, x2);
        if (r >= support_radius) return 0.0;
        double dstep = profiles::radial_step_deriv(r / support_radius) / support_radius;
        return r == 0.0 ? 0.0 : amplitude * dstep * x2 / r;
    });
    f.zero_mean();  // analytic integral is exactly zero; drop rounding residue
    f.dealias();
    return f;
}

ScalarField radial_vortex(const Grid& g, double support_radius, double amplitude) {
    if (support_radius > g.half_width / 2)
        throw std::invalid_argument("radial_vortex: support too large for the box");
    ScalarField F = ScalarField::sample(g, [&](double x1, double x2) {
        return amplitude * profiles::radial_step(std::hypot(x1, x2) / support_radius);
    });
    ScalarField w = spectral::laplacian(F);
    w.dealias();
    return w;
}

double radial_vortex_angular_velocity(double support_radius, double amplitude,
                                      double r) {
    if (r == 0.0) return 0.0;
    return amplitude * profiles::radial_step_deriv(r / support_radius) /
           (support_radius * r);
}

double support_radius(const ScalarField& omega, double threshold) {
    const Grid& g = omega.grid();
    auto phys = omega.to_physical();
    double peak = 0.0;
    for (double v : phys) peak = std::max(peak, std::abs(v));
    double worst = 0.0;
    for (int i = 0; i < g.n; ++i) {
        for (int j = 0; j < g.n; ++j) {
            if (std::abs(phys[static_cast<std::size_t>(i) * g.n + j]) > threshold * peak)
                worst = std::max(worst, std::hypot(g.coord(i), g.coord(j)));
        }
    }
    return worst;
}

BoxRun::BoxRun(ScalarField omega0, double cfl) : run_(std::move(omega0), cfl) {
    const ScalarField& w = run_.omega0();
    double scale = std::max(w.max_coef(), 1e-300);
    if (std::abs(w.coef()[0]) > 1e-10 * scale)
        throw std::invalid_argument("box run: total vorticity must vanish");
    VectorField u0 = euler::biot_savart(w);
    energy0_sq_ = spectral::inner_l2(u0[0], u0[0]) + spectral::inner_l2(u0[1], u0[1]);
    support0_ = support_radius(w, 1e-10);
    if (support0_ > run_.state().omega.grid().half_width / 2)
        throw std::invalid_argument("box run: initial support exceeds L/2");
}

void BoxRun::guard() const {
    double L = run_.state().omega.grid().half_width;
    if (support_radius(run_.state().omega, 1e-8) > L / 2)
        throw std::runtime_error("box run: support reached |x| = L/2");
}

ShankarRow BoxRun::diagnostics() {
    const Grid& g = run_.state().omega.grid();
    const euler::FlowMap& flow = run_.flow();

    // dPhi/dt = u o Phi at the grid markers.
    auto d1 = flow.displacement[0].to_physical();
    auto d2 = flow.displacement[1].to_physical();
    std::vector<double> y1(g.size()), y2(g.size());
    for (int i = 0; i < g.n; ++i) {
        double x1 = g.coord(i);
        for (int j = 0; j < g.n; ++j) {
            std::size_t idx = static_cast<std::size_t>(i) * g.n + j;
            y1[idx] = x1 + d1[idx];
            y2[idx] = g.coord(j) + d2[idx];
        }
    }
    compose::PointEvaluator ev({&run_.state().u[0], &run_.state().u[1]});
    auto uphi = ev.eval(y1, y2);

    // Y = xi - (x.grad) xi componentwise, xi the displacement.
    std::array<std::vector<double>, 2> Y;
    std::array<std::vector<double>, 2> xgrad;
    for (int comp = 0; comp < 2; ++comp) {
        auto dx1 = spectral::derivative(flow.displacement[comp], 0).to_physical();
        auto dx2 = spectral::derivative(flow.displacement[comp], 1).to_physical();
        const auto& xi = comp == 0 ? d1 : d2;
        Y[comp].resize(g.size());
        xgrad[comp].resize(g.size());
        for (int i = 0; i < g.n; ++i) {
            double x1 = g.coord(i);
            for (int j = 0; j < g.n; ++j) {
                std::size_t idx = static_cast<std::size_t>(i) * g.n + j;
                double xg = x1 * dx1[idx] + g.coord(j) * dx2[idx];
                xgrad[comp][idx] = xg;
                Y[comp][idx] = xi[idx] - xg;
            }
        }
    }

    double h = g.spacing();
    double cell = h * h;
    ShankarRow row;
    row.t = run_.state().t;
    for (std::size_t i = 0; i < g.size(); ++i) {
        row.G += (uphi[0][i] * Y[0][i] + uphi[1][i] * Y[1][i]) * cell;
        row.lhs_bound +=
            (xgrad[0][i] * xgrad[0][i] + xgrad[1][i] * xgrad[1][i]) * cell;
    }
    row.companion = 2.0 * energy0_sq_ * row.t;
    row.rhs_bound = energy0_sq_ * row.t * row.t;
    row.lip = flow.lipschitz_norm();
    row.support = support_radius(run_.state().omega, 1e-8);
    return row;
}

void BoxRun::advance_to(double T, double dt_max, int cadence) {
    rows_.push_back(diagnostics());
    int step = 0;
    while (run_.state().t < T - 1e-14) {
        guard();
        double dt = std::min({dt_max, euler::cfl_dt(run_.state(), 0.5),
                              T - run_.state().t});
        run_.step_once(dt);
        if (++step % cadence == 0 || run_.state().t >= T - 1e-14)
            rows_.push_back(diagnostics());
    }
}

FarfieldReport farfield_decay(const ScalarField& omega,
                              const std::vector<double>& radii, int angles) {
    const Grid& g = omega.grid();
    double scale = std::max(omega.max_coef(), 1e-300);
    if (std::abs(omega.coef()[0]) > 1e-10 * scale)
        throw std::invalid_argument("farfield_decay: vorticity must have zero mean");
    double supp = support_radius(omega, 1e-10);
    for (double r : radii) {
        if (r < 2.0 * supp)
            throw std::invalid_argument("farfield_decay: radius inside 2x support");
        if (r > 0.8 * g.half_width)
            throw std::invalid_argument("farfield_decay: radius breaches box margin");
    }

    VectorField u = euler::biot_savart(omega);
    MatrixField Du(g);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) Du(i, j) = spectral::derivative(u[i], j);

    FarfieldReport rep;
    rep.radii = radii;
    for (double r : radii) {
        std::vector<double> y1(angles), y2(angles);
        for (int a = 0; a < angles; ++a) {
            double th = 2.0 * M_PI * a / angles;
            y1[a] = r * std::cos(th);
            y2[a] = r * std::sin(th);
        }
        compose::PointEvaluator ev(
            {&u[0], &u[1], &Du(0, 0), &Du(0, 1), &Du(1, 0), &Du(1, 1)});
        auto vals = ev.eval(y1, y2);
        double um = 0.0, dum = 0.0;
        for (int a = 0; a < angles; ++a) {
            um += std::hypot(vals[0][a], vals[1][a]);
            dum += std::sqrt(vals[2][a] * vals[2][a] + vals[3][a] * vals[3][a] +
                             vals[4][a] * vals[4][a] + vals[5][a] * vals[5][a]);
        }
        rep.u_mean.push_back(um / angles);
        rep.du_mean.push_back(dum / angles);
    }
    rep.u_fit = fitting::log_log(rep.radii, rep.u_mean);
    rep.du_fit = fitting::log_log(rep.radii, rep.du_mean);

    auto phys = omega.to_physical();
    double h = g.spacing();
    double l1 = 0.0, linf = 0.0;
    for (double v : phys) {
        l1 += std::abs(v) * h * h;
        linf = std::max(linf, std::abs(v));
    }
    double umax = euler::max_speed(u);
    double denom = std::sqrt(l1) * std::sqrt(linf);
    rep.interpolation_constant = denom > 0.0 ? umax / denom : 0.0;
    return rep;
}

}  // namespace paraflow::boxflow

#include <doctest.h>

#include <cmath>

#include "paraflow/euler.hpp"
#include "paraflow/random_fields.hpp"
#include "paraflow/spectral_ops.hpp"

using namespace paraflow;

namespace {

ScalarField cellular(const Grid& g) {
    return ScalarField::sample(g, [](double x1, double x2) {
        return std::cos(x1) + std::cos(x2);
    });
}

ScalarField shear_vorticity(const Grid& g) {
    return ScalarField::sample(g, [](double x1, double) { return std::cos(x1); });
}

}  // namespace

TEST_CASE("biot-savart single modes") {
    Grid g(64);
    ScalarField w1 = shear_vorticity(g);
    VectorField u1 = euler::biot_savart(w1);
    ScalarField sin1 = ScalarField::sample(g, [](double x1, double) { return std::sin(x1); });
    CHECK(u1[0].max_coef() < 1e-14);
    CHECK((u1[1] - sin1).max_coef() < 1e-14);

    ScalarField w2 = ScalarField::sample(g, [](double, double x2) { return std::cos(x2); });
    VectorField u2 = euler::biot_savart(w2);
    ScalarField msin2 =
        ScalarField::sample(g, [](double, double x2) { return -std::sin(x2); });
    CHECK((u2[0] - msin2).max_coef() < 1e-14);
    CHECK(u2[1].max_coef() < 1e-14);

    ScalarField bad(g);
    bad.set_mode(0, 0, cplx(1.0, 0.0));
    CHECK_THROWS(euler::biot_savart(bad));
}

TEST_CASE("biot-savart gains one derivative with symbol bound one") {
    Grid g(128);
    random_fields::Rng rng(1);
    ScalarField w = random_fields::sobolev_field(g, 2.0, rng);
    VectorField u = euler::biot_savart(w);
    double un = std::hypot(spectral::sobolev_norm(u[0], 3.0),
                           spectral::sobolev_norm(u[1], 3.0));
    double wn = spectral::sobolev_norm(w, 2.0);
    CHECK(un / wn <= 1.01);
    // Divergence vanishes exactly in spectrum.
    CHECK(spectral::divergence(u).max_coef() < 1e-15);
}

TEST_CASE("cellular and shear data are stationary") {
    Grid g(64);
    for (auto make : {cellular, shear_vorticity}) {
        euler::Run run(make(g), 0.5, false, false);
        run.advance_to(1.0);
        double drift =
            spectral::l2_norm(run.state().omega - run.omega0());
        CHECK(drift < 1e-8);
    }
}

TEST_CASE("cfl violation rejected") {
    Grid g(64);
    euler::EulerState s(0.0, cellular(g));
    CHECK_THROWS(euler::step(s, 10.0));
}

TEST_CASE("conservation on random data") {
    Grid g(64);
    random_fields::Rng rng(2);
    ScalarField w0 = random_fields::smooth_field(g, 3.0, 1.0, rng);
    w0 *= 1.0 / spectral::l2_norm(w0);
    euler::Run run(w0, 0.5, false, false);
    run.advance_to(1.0);
    double l2_0 = spectral::l2_norm(w0);
    double l2_t = spectral::l2_norm(run.state().omega);
    CHECK(std::abs(l2_t - l2_0) < 1e-8);

    VectorField u0 = euler::biot_savart(w0);
    VectorField ut = run.state().u;
    double e0 = std::hypot(spectral::l2_norm(u0[0]), spectral::l2_norm(u0[1]));
    double et = std::hypot(spectral::l2_norm(ut[0]), spectral::l2_norm(ut[1]));
    CHECK(std::abs(et - e0) < 1e-8);
}

TEST_CASE("flow map of zero velocity stays the identity") {
    Grid g(64);
    euler::FlowMap flow(g);
    VectorField zero(g);
    flow = euler::advance_flow(flow, zero, zero, zero, 0.1);
    CHECK(flow.displacement[0].max_coef() == 0.0);
    CHECK(flow.displacement[1].max_coef() == 0.0);
    CHECK(flow.lipschitz_norm() == doctest::Approx(1.0));
}

TEST_CASE("flow map of the stationary shear matches the closed form") {
    Grid g(128);
    euler::Run run(shear_vorticity(g));
    run.advance_to(1.0, 0.02);
    const auto& d = run.flow().displacement;
    ScalarField expect =
        ScalarField::sample(g, [](double x1, double) { return std::sin(x1); });
    CHECK(spectral::linf_norm(d[0]) < 1e-6);
    CHECK(spectral::linf_norm(d[1] - expect) < 1e-6);

    // Closed-form Lipschitz norm of [[1,0],[t cos x1,1]] at t = 1.
    double t = 1.0;
    double expected = std::sqrt((t * t + 2.0 + t * std::sqrt(t * t + 4.0)) / 2.0);
    CHECK(run.flow().lipschitz_norm() == doctest::Approx(expected).epsilon(1e-5));

    // Inverse flow closed form phi = (x1, x2 - t sin x1).
    const auto& di = run.inverse().displacement;
    CHECK(spectral::linf_norm(di[0]) < 1e-6);
    CHECK(spectral::linf_norm(di[1] + expect) < 1e-6);
}

TEST_CASE("volume preservation and inverse consistency on random data") {
    Grid g(64);
    random_fields::Rng rng(3);
    ScalarField w0 = random_fields::smooth_field(g, 3.0, 1.2, rng);
    w0 *= 0.8 / spectral::linf_norm(w0);
    euler::Run run(w0);
    run.advance_to(0.5, 0.01);

    CHECK(run.flow().det_defect() < 1e-4);
    CHECK(run.flow().mean_drift() < 1e-8);
    CHECK(euler::roundtrip_defect(run.flow(), run.inverse()) < 1e-4);

    // Lagrangian identity omega0 o phi = omega(t).
    ScalarField composed = euler::compose_with_inverse(run.omega0(), run.inverse());
    double rel = spectral::l2_norm(composed - run.state().omega) /
                 spectral::l2_norm(run.omega0());
    CHECK(rel < 1e-3);
}

TEST_CASE("compose with identity inverse returns the field") {
    Grid g(64);
    random_fields::Rng rng(4);
    ScalarField f = random_fields::smooth_field(g, 4.0, 1.0, rng);
    f.dealias();
    euler::InverseFlow inv(g);
    ScalarField c = euler::compose_with_inverse(f, inv);
    CHECK((c - f).max_coef() < 1e-12 * std::max(f.max_coef(), 1e-30));
}

TEST_CASE("resolvability guard trips on spectral pile-up") {
    Grid g(32);
    ScalarField w(g);
    int c = g.cutoff();
    w.set_mode(c, 0, cplx(0.5, 0.0));
    w.set_mode(-c, 0, cplx(0.5, 0.0));
    euler::Run run(w);
    CHECK_THROWS(run.advance_to(0.1));
}

TEST_CASE("backward integration retraces the flow") {
    Grid g(64);
    random_fields::Rng rng(5);
    ScalarField w0 = random_fields::smooth_field(g, 3.0, 1.0, rng);
    w0 *= 0.5 / spectral::linf_norm(w0);
    euler::Run run(w0);
    run.advance_to(0.3, 0.01);
    run.advance_to(0.0, 0.01);
    CHECK(spectral::l2_norm(run.state().omega - run.omega0()) < 1e-6);
    CHECK(spectral::linf_norm(run.flow().displacement[0]) < 1e-5);
    CHECK(spectral::linf_norm(run.flow().displacement[1]) < 1e-5);
}

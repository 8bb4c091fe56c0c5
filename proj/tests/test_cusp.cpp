#include <doctest.h>

#include <cmath>

#include "paraflow/cusp.hpp"
#include "paraflow/euler.hpp"
#include "paraflow/profiles.hpp"
#include "paraflow/random_fields.hpp"
#include "paraflow/spectral_ops.hpp"

using namespace paraflow;

namespace {

euler::FlowMap shear_flow(const Grid& g, double t, double a) {
    euler::FlowMap f(g);
    f.t = t;
    f.displacement[1] =
        ScalarField::sample(g, [&](double x1, double) { return a * t * std::sin(x1); });
    return f;
}

}  // namespace

TEST_CASE("slow sequence of the zero field is the logarithmic floor") {
    Grid g(64);
    ScalarField z(g);
    cusp::SlowSequence seq(z, 3.0);
    for (int m : {1, 2, 5, 11}) {
        double r = m;
        CHECK(seq.l(m, 0) == doctest::Approx(1.0 / (r * std::log(1.0 + r))).epsilon(1e-12));
    }
}

TEST_CASE("slow sequence of a single high mode matches hand computation") {
    Grid g(64);
    double s = 2.0;
    ScalarField f(g);
    f.set_mode(8, 0, cplx(0.25, 0.0));
    f.set_mode(-8, 0, cplx(0.25, 0.0));
    cusp::SlowSequence seq(f, s);

    double a8 = std::pow(1.0 + 64.0, 1.0) * 0.25;
    CHECK(seq.a(8, 0) == doctest::Approx(a8).epsilon(1e-12));
    // Tail at radius 8 holds both conjugate modes.
    CHECK(seq.tail(8.0) == doctest::Approx(2.0 * a8 * a8).epsilon(1e-12));
    // Beyond the mode the tail drops to zero.
    CHECK(seq.tail(8.5) == 0.0);
    double expect = a8 / std::pow(2.0 * a8 * a8, 0.25) + 1.0 / (8.0 * std::log(9.0));
    CHECK(seq.l(8, 0) == doctest::Approx(expect).epsilon(1e-12));
    // Symmetry.
    CHECK(seq.l(-8, 0) == doctest::Approx(seq.l(8, 0)).epsilon(1e-14));
}

TEST_CASE("weighted coefficients are negligible against the slow weights") {
    Grid g(128);
    random_fields::Rng rng(1);
    ScalarField f = random_fields::sobolev_field(g, 3.0, rng);
    cusp::SlowSequence seq(f, 3.0);
    // a_n / l_n should decay towards the band edge.
    double early = 0.0, late = 0.0;
    int c = g.cutoff();
    for (int m = 2; m <= 6; ++m) early = std::max(early, seq.a(m, 0) / seq.l(m, 0));
    for (int m = c - 5; m <= c - 1; ++m) late = std::max(late, seq.a(m, 0) / seq.l(m, 0));
    CHECK(late < early);
}

TEST_CASE("heavy-tail construction from the zero seed") {
    Grid g(128);
    double s = 5.0, r = 1.0;
    ScalarField f(g);
    auto datum = cusp::make_heavy_tail(f, r, s);

    CHECK(datum.g.mean() == 0.0);
    CHECK(datum.n0 >= 1);
    CHECK(datum.lambda1 > 0.0);
    CHECK(datum.lambda2 > 0.0);
    CHECK(datum.distance < r);

    // Tail property re-verified independently.
    int n0 = cusp::verify_tail_bound(datum.g, s, datum.c, g.cutoff() / 4);
    CHECK(n0 >= 1);
    CHECK(n0 <= datum.n0);

    // Finite-difference Hessian oracle at the origin.
    auto phys = datum.g.to_physical();
    auto at = [&](int i, int j) {
        int n = g.n;
        return phys[static_cast<std::size_t>((i % n + n) % n) * n + ((j % n + n) % n)];
    };
    int i0 = g.n / 2, j0 = g.n / 2;
    double h = g.spacing();
    double d11 = (at(i0 + 1, j0) - 2 * at(i0, j0) + at(i0 - 1, j0)) / (h * h);
    double d22 = (at(i0, j0 + 1) - 2 * at(i0, j0) + at(i0, j0 - 1)) / (h * h);
    double d12 = (at(i0 + 1, j0 + 1) - at(i0 + 1, j0 - 1) - at(i0 - 1, j0 + 1) +
                  at(i0 - 1, j0 - 1)) /
                 (4 * h * h);
    CHECK(datum.hessian[0] == doctest::Approx(d11).epsilon(0.05));
    CHECK(datum.hessian[2] == doctest::Approx(d22).epsilon(0.05));
    CHECK(std::abs(datum.hessian[1] - d12) < 0.05 * std::max(1.0, std::abs(d12)));

    // The minimum sits at the origin and is unique on the grid.
    std::size_t origin = static_cast<std::size_t>(g.n / 2) * g.n + g.n / 2;
    for (std::size_t i = 0; i < phys.size(); ++i)
        if (i != origin) CHECK(phys[i] > phys[origin]);
}

TEST_CASE("heavy-tail construction from a random seed") {
    Grid g(128);
    random_fields::Rng rng(3);
    ScalarField f = random_fields::sobolev_field(g, 5.0, rng);
    auto datum = cusp::make_heavy_tail(f, 0.5, 5.0);
    CHECK(datum.distance < 0.5);
    CHECK(datum.lambda1 > 0.0);
    CHECK(cusp::verify_tail_bound(datum.g, 5.0, datum.c, g.cutoff() / 4) >= 1);
}

TEST_CASE("cusp field basics") {
    Grid g(256);
    cusp::CuspProfile p;
    p.alpha = 0.3;
    ScalarField H = cusp::cusp_field(g, p);
    auto phys = H.to_physical();
    std::size_t origin = static_cast<std::size_t>(g.n / 2) * g.n + g.n / 2;
    CHECK(std::abs(phys[origin]) < 1e-12);
    for (double v : phys) CHECK(v > -1e-12);

    cusp::CuspProfile bad = p;
    bad.alpha = 0.5;  // 2 alpha = 1
    CHECK_THROWS(cusp::cusp_field(g, bad));
}

TEST_CASE("cusp tail fit at moderate resolution") {
    Grid g(512);
    cusp::CuspProfile p;
    p.alpha = 0.3;
    auto fit = cusp::cusp_tail_fit(g, p, 12, 64);
    CHECK(fit.axis1.slope == doctest::Approx(-2.6).epsilon(0.06));
    CHECK(fit.axis2.slope == doctest::Approx(-2.6).epsilon(0.06));

    cusp::CuspProfile aniso;
    aniso.alpha = 0.3;
    aniso.lambda1 = 2.0;
    aniso.lambda2 = 0.5;
    auto fa = cusp::cusp_tail_fit(g, aniso, 12, 64);
    double expect = std::pow(aniso.lambda1 / aniso.lambda2, 1.0 + aniso.alpha);
    CHECK(fa.anisotropy_ratio == doctest::Approx(expect).epsilon(0.10));
}

TEST_CASE("decomposition of an exactly quadratic datum") {
    Grid g(256);
    double l1 = 1.0, l2 = 1.5, rho = 0.8;
    cusp::HeavyTailDatum datum;
    datum.s = 6.0;
    datum.min_value = 0.0;
    datum.hessian = {2.0 * l1, 0.0, 2.0 * l2};
    datum.lambda1 = 2.0 * l1;
    datum.lambda2 = 2.0 * l2;
    datum.g = ScalarField::sample(g, [&](double x1, double x2) {
        double q = l1 * x1 * x1 + l2 * x2 * x2;
        double w = profiles::radial_step(std::hypot(x1, x2) / (2.0 * rho));
        return q * w + (1.0 - w) * 3.0;
    });

    auto dec = cusp::cusp_decompose(datum, 0.3, rho);
    CHECK(dec.reassembly_error < 1e-12);
    CHECK(dec.r_tail.slope <= -6.0);
    // Membership exponent of (g-m)^alpha is about 1 + 2 alpha.
    double membership = -dec.v_tail.slope - 1.0;
    CHECK(membership == doctest::Approx(1.0 + 2.0 * 0.3).epsilon(0.15));
    CHECK(dec.slope_gap >= 0.5);

    CHECK_THROWS(cusp::cusp_decompose(datum, 1.5, rho));  // 2a < s-4 violated
    CHECK_THROWS(cusp::cusp_decompose(datum, 1.0, rho));  // 2a integer
}

TEST_CASE("holder bound of the cusp power stays bounded under refinement") {
    cusp::HeavyTailDatum datum;
    double alpha = 0.3;
    std::vector<double> bounds;
    for (int n : {128, 256}) {
        Grid g(n);
        ScalarField f = ScalarField::sample(g, [](double x1, double x2) {
            return 2.0 + std::cos(x1) + std::cos(x2);
        });
        auto phys = f.to_physical();
        std::vector<double> v(phys.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(phys[i], alpha);
        bounds.push_back(cusp::holder_bound(ScalarField::from_physical(g, v), alpha));
    }
    CHECK(bounds[1] < bounds[0] * 1.1 + 1e-9);
}

TEST_CASE("symbol freezing against identity and constant metrics") {
    Grid g(256);
    cusp::CuspProfile p;
    p.alpha = 0.3;
    ScalarField H = cusp::cusp_field(g, p);

    euler::FlowMap ident(g);
    auto par_id = shnirelman::build_parametrix(ident);
    auto fr = cusp::symbol_freezing_residual(par_id, H, 16, g.cutoff() / 2);
    CHECK(fr.tail_sup < 1e-10);

    auto par_const = shnirelman::build_parametrix_constant(g, 2.0, 0.3, 1.0);
    auto fc = cusp::symbol_freezing_residual(par_const, H, 16, g.cutoff() / 2);
    CHECK(fc.tail_sup < 1e-10);
}

TEST_CASE("symbol freezing on a shear flow gains half an order") {
    Grid g(256);
    cusp::CuspProfile p;
    p.alpha = 0.3;
    ScalarField H = cusp::cusp_field(g, p);
    auto par = shnirelman::build_parametrix(shear_flow(g, 1.0, 0.3));
    auto fr = cusp::symbol_freezing_residual(par, H, 8, g.cutoff() / 2);
    CHECK(fr.slope_gap >= 0.5);
}

TEST_CASE("tail sweep on a hard-cutoff seed vanishes beyond the cutoff") {
    Grid g(128);
    // Data supported on |n| <= 4 paired against any V: the high-pass kills
    // everything once 1/(2 eps) >= 4.
    ScalarField gfield(g);
    gfield.set_mode(3, 0, cplx(0.4, 0.0));
    gfield.set_mode(-3, 0, cplx(0.4, 0.0));
    gfield.set_mode(0, 4, cplx(0.2, 0.0));
    gfield.set_mode(0, -4, cplx(0.2, 0.0));
    ScalarField V = ScalarField::sample(g, [](double x1, double x2) {
        return std::pow(2.1 + std::cos(x1) + std::cos(x2), 0.3);
    });
    double eps = 0.125;  // 1/(2 eps) = 4
    ScalarField pv = spectral::high_pass(V, eps);
    CHECK(std::abs(spectral::inner_l2(gfield, pv)) < 1e-14);
}

TEST_CASE("tail sweep brackets on the identity surrogate") {
    Grid g(256);
    double s = 5.0, alpha = 0.3, alpha_p = 0.2;
    ScalarField f(g);
    auto datum = cusp::make_heavy_tail(f, 1.0, s);
    auto par = shnirelman::build_parametrix(euler::FlowMap(g));

    std::vector<double> eps;
    for (int p2 = 2; p2 <= 6; ++p2) eps.push_back(std::ldexp(1.0, -p2));
    auto sweep = cusp::tail_bounds_sweep(datum, alpha, eps, par);

    CHECK(sweep.parseval_error < 1e-10);
    CHECK(sweep.driving_fit.slope >= s + 1.0 + 2.0 * alpha - 0.3);
    CHECK(sweep.driving_fit.slope <= s + 1.0 + 2.0 * alpha_p + 0.3);
    CHECK(sweep.transport_fit.slope >= sweep.driving_fit.slope + 0.5);
}

#include <doctest.h>

#include <cmath>

#include "paraflow/euler.hpp"
#include "paraflow/packets.hpp"
#include "paraflow/profiles.hpp"
#include "paraflow/random_fields.hpp"
#include "paraflow/spectral_ops.hpp"

using namespace paraflow;

namespace {

packets::LinearPacket default_zeta() {
    packets::LinearPacket p;
    p.center = {0.9, -1.3};
    p.direction = {std::sqrt(0.5), std::sqrt(0.5)};
    p.amplitude = 1.0;
    p.scale = 0.37;
    p.s = 2.5;
    return p;
}

}  // namespace

TEST_CASE("zeta coefficient vanishes exactly when v.k = 0") {
    auto p = default_zeta();
    p.direction = {1.0, 0.0};
    CHECK(packets::zeta_fourier(p, 0, 5) == cplx(0.0));
    CHECK(packets::zeta_fourier(p, 0, -3) == cplx(0.0));
}

TEST_CASE("zeta mean matches quadrature") {
    Grid g(128);
    auto p = default_zeta();
    ScalarField z = packets::zeta_field(g, p);
    CHECK(std::abs(packets::zeta_fourier(p, 0, 0)) < 1e-15);
    CHECK(std::abs(z.mean()) < 1e-8);
}

TEST_CASE("zeta closed form agrees with the grid transform") {
    Grid g(256);
    auto p = default_zeta();
    ScalarField z = packets::zeta_field(g, p);
    double peak = z.max_coef();
    double worst = 0.0;
    int reach = g.n / 3;
    for (int k1 = -reach; k1 <= reach; ++k1) {
        for (int k2 = -reach; k2 <= reach; ++k2) {
            cplx grid = z.at_mode(k1, k2);
            cplx closed = packets::zeta_fourier(p, k1, k2);
            worst = std::max(worst, std::abs(grid - closed));
        }
    }
    CHECK(worst < 1e-6 * peak);
}

TEST_CASE("zeta rejects out-of-range scales") {
    Grid g(64);
    auto p = default_zeta();
    p.scale = 1.0;
    CHECK_THROWS(packets::zeta_field(g, p));
}

TEST_CASE("interaction functional against the direct pairing") {
    Grid g(128);
    auto p = default_zeta();
    p.direction = {1.0, 0.0};
    p.center = {M_PI / 2, 0.4};

    CHECK(packets::interaction_formula(0.0, p) == 0.0);

    auto p0 = p;
    p0.center[0] = 0.0;
    CHECK(packets::interaction_formula(1.0, p0) == doctest::Approx(0.0));

    double alpha = 1.0;
    ScalarField u =
        ScalarField::sample(g, [&](double x1, double) { return alpha * std::cos(x1); });
    ScalarField z = packets::zeta_field(g, p);
    double direct = packets::interaction_direct(u, z, p.s);
    double formula = packets::interaction_formula(alpha, p);
    CHECK(std::abs(direct - formula) < 1e-8 * std::max(std::abs(formula), 1e-10));
}

TEST_CASE("bad scales: flagged scales match the profile zeros") {
    auto p = default_zeta();
    p.direction = {1.0, 0.0};

    // Orthogonal range leaves no constraint.
    std::vector<std::array<int, 2>> ortho = {{0, 1}, {0, 2}, {0, -7}};
    CHECK(packets::bad_scale_check(p, ortho).empty());

    // Root-finder oracle: zeros of Psi' on (0, 64).
    std::vector<double> zeros;
    double prev_q = 1e-3, prev_v = profiles::theta_hat_deriv(prev_q);
    for (double q = 2e-3; q <= 64.0; q += 1e-3) {
        double v = profiles::theta_hat_deriv(q);
        if (prev_v * v < 0.0) {
            double lo = prev_q, hi = q;
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                if (profiles::theta_hat_deriv(lo) * profiles::theta_hat_deriv(mid) <= 0.0)
                    hi = mid;
                else
                    lo = mid;
            }
            zeros.push_back(0.5 * (lo + hi));
        }
        prev_q = q;
        prev_v = v;
    }
    REQUIRE(!zeros.empty());

    // Every zero rescaled by an axis frequency must be flagged.
    std::vector<std::array<int, 2>> range;
    for (int k = 1; k <= 64; ++k) range.push_back({k, 0});
    for (double z : zeros) {
        for (int k = 1; k <= 64; ++k) {
            double rho = z / k;
            if (rho > 1e-3 && rho < 1.0 - 1e-3)
                CHECK(packets::scale_flagged(rho, p.direction, range, 1e-10));
        }
    }

    // The default scale stays clear of every flag for |k| <= 64.
    std::vector<std::array<int, 2>> full;
    for (int k1 = -64; k1 <= 64; ++k1)
        for (int k2 = -64; k2 <= 64; ++k2)
            if (std::hypot(static_cast<double>(k1), static_cast<double>(k2)) <= 64.0 &&
                (k1 || k2))
                full.push_back({k1, k2});
    CHECK_FALSE(packets::scale_flagged(0.37, {1.0, 0.0}, full));
}

TEST_CASE("koch packet basics") {
    Grid g(256);
    packets::KochPacket p;
    p.center = {g.coord(110), g.coord(80)};
    p.direction = {1.0, 0.0};
    p.delta = 0.25;
    p.mu = 4.0;
    p.s = 2.5;
    ScalarField eta = packets::koch_field(g, p);
    CHECK(std::abs(eta.mean()) < 1e-10 * spectral::linf_norm(eta));

    packets::KochPacket too_fast = p;
    too_fast.delta = 1.0 / 64;
    CHECK_THROWS(packets::koch_field(g, too_fast));
}

TEST_CASE("koch closed-form coefficients match the grid transform") {
    Grid g(512);
    packets::KochPacket p;
    p.center = {g.coord(300), g.coord(200)};
    p.direction = {0.6, 0.8};
    p.delta = 0.25;
    p.mu = 4.0;
    p.s = 2.5;
    ScalarField eta = packets::koch_field(g, p);
    double peak = eta.max_coef();
    double worst = 0.0;
    for (int k1 = -g.n / 3; k1 <= g.n / 3; k1 += 3) {
        for (int k2 = -g.n / 3; k2 <= g.n / 3; k2 += 3) {
            worst = std::max(worst,
                             std::abs(eta.at_mode(k1, k2) - packets::koch_fourier(p, k1, k2)));
        }
    }
    CHECK(worst < 1e-8 * peak);

    // Closed-form norm against the grid norm.
    double closed = packets::koch_norm(p, 1.0);
    double grid_norm = spectral::sobolev_norm(eta, 1.0);
    CHECK(closed == doctest::Approx(grid_norm).epsilon(1e-5));
}

TEST_CASE("koch scaling exponents") {
    packets::KochPacket base;
    base.center = {0.0, 0.0};
    base.direction = {1.0, 0.0};
    base.mu = 4.0;
    std::vector<double> deltas = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};

    for (double s : {1.5, 2.5, 3.5}) {
        base.s = s;
        auto fits = packets::koch_scaling_fit(base, deltas, {0.0, 1.0});
        CHECK(fits[0].fit.slope == doctest::Approx(s).epsilon(0.05 / s));
        CHECK(fits[1].fit.slope == doctest::Approx(s - 1.0).epsilon(0.05 / (s - 1.0)));

        // H^s norm itself is delta-independent within 5%.
        std::vector<double> hs;
        for (double d : deltas) {
            packets::KochPacket p = base;
            p.delta = d;
            hs.push_back(packets::koch_norm(p, s));
        }
        double lo = *std::min_element(hs.begin(), hs.end());
        double hi = *std::max_element(hs.begin(), hs.end());
        CHECK((hi - lo) / hi < 0.05);
    }
}

TEST_CASE("frozen linear pullback tracks the stretched prediction") {
    Grid g(1024);
    packets::KochPacket p;
    p.center = {0.0, 0.0};
    p.direction = {0.0, 1.0};
    p.delta = 0.125;
    p.mu = 8.0;
    p.s = 2.5;

    // Shear map A = [[1, 0], [1.5, 1]]: A^T e = (1.5, 1) for e = e2.
    std::array<double, 4> A = {1.0, 0.0, 1.5, 1.0};
    double gain = std::hypot(1.5, 1.0);

    ScalarField eta = packets::koch_field(g, p);
    ScalarField pulled = packets::koch_pullback_affine(g, p, A, {0.0, 0.0});
    double measured = spectral::sobolev_norm(pulled, p.s);
    double predicted = std::pow(gain, p.s) * spectral::sobolev_norm(eta, p.s);
    CHECK(measured > predicted / 2.0);
    CHECK(measured < predicted * 2.0);
}

TEST_CASE("stretching search on closed-form flows") {
    Grid g(64);
    euler::FlowMap ident(g);
    auto rid = packets::stretching_at(ident);
    CHECK(rid.gain == doctest::Approx(1.0));

    double t = 1.5;
    euler::FlowMap shear(g);
    shear.t = t;
    shear.displacement[1] =
        ScalarField::sample(g, [&](double x1, double) { return t * std::sin(x1); });
    auto rs = packets::stretching_at(shear);
    double expected = std::sqrt((t * t + 2.0 + t * std::sqrt(t * t + 4.0)) / 2.0);
    CHECK(rs.gain == doctest::Approx(expected).epsilon(1e-4));

    // Direction oracle: brute-force maximization of |(DPhi)^{-T} e| over angles
    // at the argmax point.
    double c = std::cos(rs.x0[0]);
    double best = 0.0;
    std::array<double, 2> bestdir{};
    for (int a = 0; a < 20000; ++a) {
        double th = M_PI * a / 20000.0;
        double e1 = std::cos(th), e2 = std::sin(th);
        // (DPhi)^{-T} = [[1, -t c], [0, 1]].
        double v1 = e1 - t * c * e2;
        double v2 = e2;
        double n = std::hypot(v1, v2);
        if (n > best) {
            best = n;
            bestdir = {e1, e2};
        }
    }
    double dot = std::abs(bestdir[0] * rs.direction[0] + bestdir[1] * rs.direction[1]);
    CHECK(dot == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("stretching over snapshots picks the latest gain of a growing shear") {
    Grid g(64);
    std::vector<euler::FlowMap> snaps;
    for (double t : {0.5, 1.0, 1.5}) {
        euler::FlowMap f(g);
        f.t = t;
        f.displacement[1] =
            ScalarField::sample(g, [&](double x1, double) { return t * std::sin(x1); });
        snaps.push_back(f);
    }
    auto best = packets::stretching_search(snaps);
    CHECK(best.t == doctest::Approx(1.5));
}

TEST_CASE("amplification experiment with a null packet leaves terms empty") {
    Grid g(64);
    ScalarField w0 = ScalarField::sample(g, [](double x1, double) { return std::cos(x1); });
    packets::AmplificationConfig cfg;
    cfg.delta = 0.25;
    cfg.mu = 4.0;
    cfg.r = 0.0;  // null packet
    cfg.s = 2.5;
    cfg.T = 0.25;
    cfg.dt_max = 0.05;
    auto rep = packets::koch_amplification_experiment(w0, cfg);
    CHECK(rep.term_norms[2] < 1e-12);
    CHECK(rep.term_norms[3] < 1e-12);
    CHECK(rep.hs_eta == 0.0);
}

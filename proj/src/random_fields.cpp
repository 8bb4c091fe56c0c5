#include "paraflow/random_fields.hpp"

#include <cmath>

#include "paraflow/spectral_ops.hpp"

namespace paraflow::random_fields {

namespace {

// Fills the band with Hermitian-symmetric coefficients |coef| = mag(|m|),
// random phases.  The zero mode stays empty.
template <class Mag>
ScalarField synth(const Grid& g, Mag&& mag, Rng& rng) {
    ScalarField f(g);
    std::uniform_real_distribution<double> unif(0.0, 2.0 * M_PI);
    const int c = g.cutoff();
    for (int m1 = 0; m1 <= c; ++m1) {
        for (int m2 = -c; m2 <= c; ++m2) {
            // Upper half-plane representative of each conjugate pair.
            if (m1 == 0 && m2 <= 0) continue;
            double r = std::hypot(static_cast<double>(m1), static_cast<double>(m2));
            double phase = unif(rng);
            cplx v = std::polar(mag(r), phase);
            f.set_mode(m1, m2, v);
            f.set_mode(-m1, -m2, std::conj(v));
        }
    }
    return f;
}

}  // namespace

ScalarField smooth_field(const Grid& g, double decay_scale, double amplitude, Rng& rng) {
    return synth(
        g, [&](double r) { return amplitude * std::exp(-r / decay_scale); }, rng);
}

ScalarField holder_field(const Grid& g, double r, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.5, 1.0);
    ScalarField f = synth(
        g, [&](double rad) { return std::pow(std::max(rad, 1.0), -(r + 1.0)) * unif(rng); },
        rng);
    spectral::DyadicFamily lp(g);
    double seminorm = 0.0;
    for (int j = 0; j <= lp.max_index(); ++j) {
        double blk = spectral::linf_norm(lp.block(f, j));
        seminorm = std::max(seminorm, std::pow(2.0, j * r) * blk);
    }
    if (seminorm > 0.0) f *= 1.0 / seminorm;
    return f;
}

ScalarField sobolev_field(const Grid& g, double s, Rng& rng) {
    ScalarField f = synth(
        g, [&](double r) { return std::pow(1.0 + r * r, -(s + 1.0) / 2.0); }, rng);
    double norm = spectral::sobolev_norm(f, s);
    if (norm > 0.0) f *= 1.0 / norm;
    return f;
}

}  // namespace paraflow::random_fields

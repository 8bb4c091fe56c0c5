#include "paraflow/shnirelman.hpp"

#include <cmath>
#include <stdexcept>

#include "paraflow/compose.hpp"
#include "paraflow/fitting.hpp"
#include "paraflow/paradiff.hpp"
#include "paraflow/spectral_ops.hpp"

namespace paraflow::shnirelman {

using paradiff::inverse_unimodular;
using paradiff::jacobian;
using paradiff::paraproduct;

ShnirelmanField compute_X(const euler::FlowMap& flow) {
    const Grid& g = flow.displacement.grid();
    if (flow.det_defect() > 1e-3)
        throw std::invalid_argument("compute_X: Jacobian determinant deviates from 1");
    MatrixField inv = inverse_unimodular(jacobian(flow.displacement));

    ShnirelmanField out;
    out.X = paradiff::paraproduct_mat(inv, flow.displacement);
    out.curl_X = spectral::curl(out.X);
    out.div_X = spectral::divergence(out.X);
    out.curl_part = spectral::inv_laplacian(out.curl_X);
    out.div_part = spectral::inv_laplacian(out.div_X);
    return out;
}

double ShnirelmanField::helmholtz_defect() const {
    VectorField rec = spectral::perp_gradient(curl_part) + spectral::gradient(div_part);
    double num = std::hypot(spectral::l2_norm(rec[0] - X[0]),
                            spectral::l2_norm(rec[1] - X[1]));
    double den = std::hypot(spectral::l2_norm(X[0]), spectral::l2_norm(X[1]));
    return den > 0.0 ? num / den : num;
}

namespace {

ScalarField complex_combine(const ScalarField& re_part, const ScalarField& im_part,
                            cplx re_scale, cplx im_scale) {
    ScalarField out(re_part.grid());
    for (std::size_t i = 0; i < out.coef().size(); ++i)
        out.coef()[i] = re_scale * re_part.coef()[i] + im_scale * im_part.coef()[i];
    return out;
}

struct AngularTables {
    std::vector<double> c2, s2;  // cos(2 theta_q), sin(2 theta_q)
    std::vector<cplx> w;         // e^{-2 i theta_q}
    AngularTables() {
        c2.resize(kAngularQuadrature);
        s2.resize(kAngularQuadrature);
        w.resize(kAngularQuadrature);
        for (int q = 0; q < kAngularQuadrature; ++q) {
            double th = 2.0 * M_PI * q / kAngularQuadrature;
            c2[q] = std::cos(2.0 * th);
            s2[q] = std::sin(2.0 * th);
            w[q] = std::polar(1.0, -2.0 * th);
        }
    }
};

Parametrix assemble(const Grid& g, const MatrixField& metric, double tail_tol) {
    Parametrix par;
    par.grid = g;
    par.metric = metric;

    auto m11 = metric(0, 0).to_physical();
    auto m12 = metric(0, 1).to_physical();
    auto m22 = metric(1, 1).to_physical();
    const std::size_t sz = g.size();

    // Angular profile p(x, theta) = p0 + A cos 2theta + B sin 2theta.
    std::vector<double> p0(sz), A(sz), B(sz);
    double min_ell = 1e300;
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < sz; ++i) {
        p0[i] = 0.5 * (m11[i] + m22[i]);
        A[i] = 0.5 * (m11[i] - m22[i]);
        B[i] = m12[i];
        double R = std::hypot(A[i], B[i]);
        min_ell = std::min(min_ell, p0[i] - R);
        if (p0[i] - R > 0.0)
            worst_ratio = std::max(worst_ratio, R / (p0[i] + std::sqrt(p0[i] * p0[i] - R * R)));
    }
    par.min_ellipticity = min_ell;
    if (min_ell <= 0.0)
        throw std::runtime_error("parametrix: profile loses ellipticity");

    // Truncation sized from the worst-point geometric decay rate, then
    // trimmed by the computed sup norms.
    int K = 8;
    if (worst_ratio > 0.0)
        K = std::min(96, std::max(8, static_cast<int>(std::ceil(
                                          std::log(tail_tol) / std::log(worst_ratio))) +
                                          2));
    par.K = K;

    static const AngularTables tab;
    const int N = kAngularQuadrature;

    std::vector<std::vector<cplx>> mk(static_cast<std::size_t>(K) + 1,
                                      std::vector<cplx>(sz));
    std::vector<double> prof(N);
    std::vector<cplx> acc(static_cast<std::size_t>(K) + 1);
    for (std::size_t i = 0; i < sz; ++i) {
        for (int q = 0; q < N; ++q)
            prof[q] = 1.0 / (p0[i] + A[i] * tab.c2[q] + B[i] * tab.s2[q]);
        for (int k = 0; k <= K; ++k) acc[k] = 0.0;
        for (int q = 0; q < N; ++q) {
            cplx rot(1.0, 0.0);
            double v = prof[q];
            for (int k = 0; k <= K; ++k) {
                acc[k] += v * rot;
                rot *= tab.w[q];
            }
        }
        for (int k = 0; k <= K; ++k) mk[k][i] = acc[k] / static_cast<double>(N);
    }

    par.m.resize(2 * K + 1, ScalarField(g));
    for (int k = 0; k <= K; ++k) {
        ScalarField f = ScalarField::from_physical_complex(g, mk[k]);
        if (k == 0) {
            par.m[K] = f;
        } else {
            // Real profile: m_{-k} = conj(m_k) pointwise.
            std::vector<cplx> conj_samples(sz);
            for (std::size_t i = 0; i < sz; ++i) conj_samples[i] = std::conj(mk[k][i]);
            par.m[K + k] = f;
            par.m[K - k] = ScalarField::from_physical_complex(g, conj_samples);
        }
    }

    // Trim the tail below tolerance.
    auto sup = par.coeff_sup();
    int keep = 0;
    for (int k = 0; k <= K; ++k)
        if (sup[K + k] >= tail_tol) keep = k;
    if (keep < K) {
        std::vector<ScalarField> trimmed(par.m.begin() + (K - keep),
                                         par.m.begin() + (K + keep + 1));
        par.m = std::move(trimmed);
        par.K = keep;
    }

    // Angular coefficients of the profile itself: p_{+-1} = (A -+ iB)/2.
    ScalarField Af(g), Bf(g), P0f(g);
    {
        std::vector<double> tmpA(A.begin(), A.end()), tmpB(B.begin(), B.end()),
            tmpP(p0.begin(), p0.end());
        Af = ScalarField::from_physical(g, tmpA);
        Bf = ScalarField::from_physical(g, tmpB);
        P0f = ScalarField::from_physical(g, tmpP);
    }
    par.p[0] = complex_combine(Af, Bf, cplx(0.5, 0.0), cplx(0.0, 0.5));   // p_{-1}
    par.p[1] = P0f;                                                        // p_0
    par.p[2] = complex_combine(Af, Bf, cplx(0.5, 0.0), cplx(0.0, -0.5));  // p_{+1}

    // Metric frozen at the origin (grid node x = 0).
    std::size_t origin = static_cast<std::size_t>(g.n / 2) * g.n + g.n / 2;
    par.metric_origin = {m11[origin], m12[origin], m22[origin]};
    return par;
}

}  // namespace

Parametrix build_parametrix(const euler::FlowMap& flow, double tail_tol) {
    const Grid& g = flow.displacement.grid();
    MatrixField inv = inverse_unimodular(jacobian(flow.displacement));
    MatrixField metric(g);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            metric(i, j) = spectral::product(inv(i, 0), inv(j, 0)) +
                           spectral::product(inv(i, 1), inv(j, 1));
    return assemble(g, metric, tail_tol);
}

Parametrix build_parametrix_constant(const Grid& g, double m11, double m12, double m22,
                                     double tail_tol) {
    MatrixField metric(g);
    metric(0, 0).set_mode(0, 0, m11);
    metric(0, 1).set_mode(0, 0, m12);
    metric(1, 0).set_mode(0, 0, m12);
    metric(1, 1).set_mode(0, 0, m22);
    return assemble(g, metric, tail_tol);
}

std::vector<double> Parametrix::coeff_sup() const {
    std::vector<double> out;
    out.reserve(m.size());
    for (const auto& f : m) {
        auto phys = f.to_physical_complex();
        double s = 0.0;
        for (const auto& z : phys) s = std::max(s, std::abs(z));
        out.push_back(s);
    }
    return out;
}

double Parametrix::convolution_defect() const {
    const std::size_t sz = grid.size();
    std::vector<std::vector<cplx>> mk_phys(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) mk_phys[i] = m[i].to_physical_complex();
    std::array<std::vector<cplx>, 3> p_phys = {p[0].to_physical_complex(),
                                               p[1].to_physical_complex(),
                                               p[2].to_physical_complex()};
    double worst = 0.0;
    for (int nidx = -(K - 1); nidx <= K - 1; ++nidx) {
        for (std::size_t i = 0; i < sz; ++i) {
            cplx acc(0.0);
            for (int j = -1; j <= 1; ++j) {
                int kk = nidx - j;
                if (kk < -K || kk > K) continue;
                acc += mk_phys[static_cast<std::size_t>(kk + K)][i] *
                       p_phys[static_cast<std::size_t>(j + 1)][i];
            }
            if (nidx == 0) acc -= 1.0;
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

double Parametrix::decay_rate(double* r2) const {
    auto sup = coeff_sup();
    std::vector<double> ks, vals;
    for (int k = 1; k <= K; ++k) {
        double v = sup[static_cast<std::size_t>(K + k)];
        if (v > 0.0) {
            ks.push_back(static_cast<double>(k));
            vals.push_back(std::log(v));
        }
    }
    if (ks.size() < 2) {
        if (r2) *r2 = 1.0;
        return std::numeric_limits<double>::infinity();
    }
    auto fit = fitting::least_squares(ks, vals);
    if (r2) *r2 = fit.r2;
    return -fit.slope;
}

ScalarField apply_Q(const Parametrix& par, const ScalarField& f) {
    double scale = std::max(f.max_coef(), 1e-300);
    if (std::abs(f.coef()[0]) > 1e-10 * scale)
        throw std::invalid_argument("apply_Q: input must have zero mean");
    ScalarField g0 = spectral::inv_laplacian(f);
    ScalarField acc(par.grid);
    for (int k = -par.K; k <= par.K; ++k)
        acc += paraproduct(par.coeff(k), spectral::beurling_pow(g0, k));
    return acc;
}

ScalarField apply_para_laplacian(const Parametrix& par, const ScalarField& v) {
    VectorField grad = spectral::gradient(v);
    VectorField w(par.grid);
    for (int i = 0; i < 2; ++i)
        w[i] = paraproduct(par.metric(i, 0), grad[0]) +
               paraproduct(par.metric(i, 1), grad[1]);
    return spectral::divergence(w);
}

ScalarField apply_S(const Parametrix& par, const ScalarField& v) {
    return apply_Q(par, apply_para_laplacian(par, v)) - v;
}

ScalarField apply_laplacian_Q(const Parametrix& par, const ScalarField& f) {
    return spectral::laplacian(apply_Q(par, f));
}

ScalarField apply_frozen_symbol(const Parametrix& par, const ScalarField& f) {
    const auto mo = par.metric_origin;
    return spectral::multiplier(f, [mo](double k1, double k2) {
        double r2 = k1 * k1 + k2 * k2;
        double quad = mo[0] * k1 * k1 + 2.0 * mo[1] * k1 * k2 + mo[2] * k2 * k2;
        return r2 == 0.0 ? cplx(0.0) : cplx(r2 / quad, 0.0);
    });
}

namespace {

double vec_l2(const VectorField& v) {
    return std::hypot(spectral::l2_norm(v[0]), spectral::l2_norm(v[1]));
}

VectorField centered_dX(const euler::FlowMap& before, const euler::FlowMap& after,
                        double dt) {
    VectorField Xb = compute_X(before).X;
    VectorField Xa = compute_X(after).X;
    return (1.0 / (2.0 * dt)) * (Xa - Xb);
}

}  // namespace

EvolutionResidual evolution_residual_stream(const euler::FlowMap& before,
                                            const euler::FlowMap& at,
                                            const euler::FlowMap& after,
                                            const ScalarField& psi,
                                            const VectorField& u, double dt) {
    VectorField dX = centered_dX(before, after, dt);
    ScalarField para_psi = paradiff::paracompose(at.displacement, psi);
    VectorField main = spectral::perp_gradient(para_psi);

    MatrixField inv = inverse_unimodular(jacobian(at.displacement));
    auto u_pulled = compose::pullback_many({&u[0], &u[1]}, at.displacement);
    VectorField u_comp(u_pulled[0], u_pulled[1]);
    VectorField rb = paradiff::bony_remainder_mat(inv, u_comp);

    VectorField res = dX - main + rb;
    EvolutionResidual out;
    out.residual = vec_l2(res);
    double denom = std::max({vec_l2(dX), vec_l2(main), vec_l2(rb), 1e-300});
    out.relative = out.residual / denom;
    return out;
}

EvolutionResidual evolution_residual_closed(const euler::FlowMap& before,
                                            const euler::FlowMap& at,
                                            const euler::FlowMap& after,
                                            const ScalarField& omega0,
                                            const ScalarField& psi,
                                            const VectorField& u, double dt) {
    const Grid& g = omega0.grid();
    Parametrix par = build_parametrix(at);

    VectorField dX = centered_dX(before, after, dt);
    VectorField X = compute_X(at).X;
    VectorField grad_w0 = spectral::gradient(omega0);

    // Linear propagator and forcing.
    ScalarField tw = paraproduct(grad_w0[0], X[0]) + paraproduct(grad_w0[1], X[1]);
    VectorField prop = spectral::perp_gradient(apply_Q(par, tw));
    VectorField force = spectral::perp_gradient(apply_Q(par, omega0));

    // Remainder pieces, every one assembled from the same snapshots.
    ScalarField para_psi = paradiff::paracompose(at.displacement, psi);
    ScalarField omega = spectral::laplacian(psi);
    ScalarField para_omega = paradiff::paracompose(at.displacement, omega);
    ScalarField r_delta = para_omega - apply_para_laplacian(par, para_psi);
    ScalarField s_term = apply_S(par, para_psi);
    VectorField smooth = spectral::perp_gradient(s_term + apply_Q(par, r_delta));

    MatrixField inv = inverse_unimodular(jacobian(at.displacement));
    auto u_pulled = compose::pullback_many({&u[0], &u[1]}, at.displacement);
    VectorField u_comp(u_pulled[0], u_pulled[1]);
    VectorField rb = paradiff::bony_remainder_mat(inv, u_comp);

    ScalarField ralg(g);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            ralg += paradiff::composition_remainder(grad_w0[i], inv(i, j),
                                                    at.displacement[j]);
    VectorField ralg_term = spectral::perp_gradient(apply_Q(par, ralg));

    VectorField res = dX + prop - force - ralg_term + smooth + rb;
    EvolutionResidual out;
    out.residual = vec_l2(res);
    double denom = std::max({vec_l2(dX), vec_l2(prop), vec_l2(force), 1e-300});
    out.relative = out.residual / denom;
    return out;
}

double pullback_identity_defect(const euler::FlowMap& flow, const ScalarField& omega,
                                const ScalarField& omega0) {
    ScalarField para_omega = paradiff::paracompose(flow.displacement, omega);
    VectorField X = compute_X(flow).X;
    VectorField grad_w0 = spectral::gradient(omega0);
    MatrixField inv = inverse_unimodular(jacobian(flow.displacement));

    ScalarField rhs = omega0 - paraproduct(grad_w0[0], X[0]) -
                      paraproduct(grad_w0[1], X[1]);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            rhs += paradiff::composition_remainder(grad_w0[i], inv(i, j),
                                                   flow.displacement[j]);
    double denom = std::max(spectral::l2_norm(para_omega), 1e-300);
    return spectral::l2_norm(para_omega - rhs) / denom;
}

ProbeSample probe_sample(const euler::FlowMap& flow, const Parametrix& par,
                         const ScalarField& omega0, const ScalarField& cusp_field,
                         double eps) {
    ProbeSample s;
    s.t = flow.t;
    ScalarField pv = spectral::high_pass(cusp_field, eps);
    ScalarField curl_X = compute_X(flow).curl_X;
    s.y = spectral::inner_l2(curl_X, pv);
    s.driving = spectral::inner_l2(apply_laplacian_Q(par, omega0), pv);

    ScalarField sigma = apply_laplacian_Q(par, spectral::inv_laplacian(curl_X));
    VectorField perp = spectral::perp_gradient(sigma);
    VectorField grad_w0 = spectral::gradient(omega0);
    ScalarField transport =
        paraproduct(grad_w0[0], perp[0]) + paraproduct(grad_w0[1], perp[1]);
    s.transport = spectral::inner_l2(transport, pv);
    return s;
}

}  // namespace paraflow::shnirelman

#include "paraflow/cusp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "paraflow/paradiff.hpp"
#include "paraflow/profiles.hpp"
#include "paraflow/spectral_ops.hpp"

namespace paraflow::cusp {

namespace {

bool near_integer_doubled(double alpha) {
    double d = 2.0 * alpha;
    return std::abs(d - std::round(d)) < 1e-9;
}

std::size_t grid_index(const Grid& g, int a1, int a2) {
    return static_cast<std::size_t>(a1) * g.n + a2;
}

}  // namespace

SlowSequence::SlowSequence(const ScalarField& f, double s)
    : grid_(f.grid()), s_(s), a_(f.grid().size(), 0.0), l_(f.grid().size(), 0.0) {
    const Grid& g = grid_;
    std::vector<std::pair<double, double>> by_radius;  // (|n|, a_n^2)
    for (int a1 = 0; a1 < g.n; ++a1) {
        for (int a2 = 0; a2 < g.n; ++a2) {
            if (!g.in_band(a1, a2)) continue;
            int m1 = g.mode(a1), m2 = g.mode(a2);
            if (m1 == 0 && m2 == 0) continue;
            double r2 = static_cast<double>(m1) * m1 + static_cast<double>(m2) * m2;
            double an = std::pow(1.0 + r2, s / 2.0) *
                        std::abs(f.coef()[grid_index(g, a1, a2)]);
            a_[grid_index(g, a1, a2)] = an;
            by_radius.emplace_back(std::sqrt(r2), an * an);
        }
    }
    std::sort(by_radius.begin(), by_radius.end());
    radii_.reserve(by_radius.size());
    suffix_.reserve(by_radius.size());
    double acc = 0.0;
    for (auto it = by_radius.rbegin(); it != by_radius.rend(); ++it) {
        acc += it->second;
        if (radii_.empty() || radii_.back() != it->first) {
            radii_.push_back(it->first);
            suffix_.push_back(acc);
        } else {
            suffix_.back() = acc;
        }
    }
    std::reverse(radii_.begin(), radii_.end());
    std::reverse(suffix_.begin(), suffix_.end());

    for (int a1 = 0; a1 < g.n; ++a1) {
        for (int a2 = 0; a2 < g.n; ++a2) {
            if (!g.in_band(a1, a2)) continue;
            int m1 = g.mode(a1), m2 = g.mode(a2);
            if (m1 == 0 && m2 == 0) continue;
            std::size_t idx = grid_index(g, a1, a2);
            double r = std::hypot(static_cast<double>(m1), static_cast<double>(m2));
            double R = tail(r);
            double first = (a_[idx] > 0.0 && R > 0.0) ? a_[idx] / std::pow(R, 0.25) : 0.0;
            l_[idx] = first + 1.0 / (r * std::log(1.0 + r));
        }
    }
}

double SlowSequence::a(int m1, int m2) const {
    const Grid& g = grid_;
    int a1 = m1 < 0 ? m1 + g.n : m1;
    int a2 = m2 < 0 ? m2 + g.n : m2;
    return a_[grid_index(g, a1, a2)];
}

double SlowSequence::l(int m1, int m2) const {
    const Grid& g = grid_;
    int a1 = m1 < 0 ? m1 + g.n : m1;
    int a2 = m2 < 0 ? m2 + g.n : m2;
    return l_[grid_index(g, a1, a2)];
}

double SlowSequence::tail(double radius) const {
    auto it = std::lower_bound(radii_.begin(), radii_.end(), radius - 1e-12);
    if (it == radii_.end()) return 0.0;
    return suffix_[static_cast<std::size_t>(it - radii_.begin())];
}

double SlowSequence::l_norm_sq() const {
    double acc = 0.0;
    for (double v : l_) acc += v * v;
    return acc;
}

int verify_tail_bound(const ScalarField& g, double s, double c, int cap) {
    const Grid& gr = g.grid();
    const int cut = gr.cutoff();
    // worst[r] = 1 if the bound fails at some mode with |n| in [r, r+1).
    std::vector<char> fails(static_cast<std::size_t>(cut) + 2, 0);
    for (int a1 = 0; a1 < gr.n; ++a1) {
        for (int a2 = 0; a2 < gr.n; ++a2) {
            if (!gr.in_band(a1, a2)) continue;
            int m1 = gr.mode(a1), m2 = gr.mode(a2);
            if (m1 == 0 && m2 == 0) continue;
            double r = std::hypot(static_cast<double>(m1), static_cast<double>(m2));
            if (r > cut) continue;
            double lhs = std::pow(1.0 + r * r, s / 2.0) *
                         g.coef()[grid_index(gr, a1, a2)].real();
            double rhs = c / (r * std::log(1.0 + r));
            if (lhs < rhs) fails[static_cast<std::size_t>(r)] = 1;
        }
    }
    int n0 = -1;
    for (int start = 1; start <= cap; ++start) {
        bool ok = true;
        for (int r = start; r <= cut; ++r)
            if (fails[static_cast<std::size_t>(r)]) { ok = false; break; }
        if (ok) { n0 = start; break; }
    }
    return n0;
}

namespace {

// Quadratic refinement of a grid minimum: one Newton step on the sampled
// 3x3 stencil.  Returns the refined minimum value (never above the grid
// sample).
double refine_min_value(const std::vector<double>& phys, const Grid& g, int i0,
                        int j0) {
    auto at = [&](int i, int j) {
        int ii = (i % g.n + g.n) % g.n, jj = (j % g.n + g.n) % g.n;
        return phys[grid_index(g, ii, jj)];
    };
    double h = g.spacing();
    double f0 = at(i0, j0);
    double fx = (at(i0 + 1, j0) - at(i0 - 1, j0)) / (2 * h);
    double fy = (at(i0, j0 + 1) - at(i0, j0 - 1)) / (2 * h);
    double fxx = (at(i0 + 1, j0) - 2 * f0 + at(i0 - 1, j0)) / (h * h);
    double fyy = (at(i0, j0 + 1) - 2 * f0 + at(i0, j0 - 1)) / (h * h);
    double fxy = (at(i0 + 1, j0 + 1) - at(i0 + 1, j0 - 1) - at(i0 - 1, j0 + 1) +
                  at(i0 - 1, j0 - 1)) /
                 (4 * h * h);
    double det = fxx * fyy - fxy * fxy;
    if (det <= 0.0 || fxx <= 0.0) return f0;
    double dx = -(fyy * fx - fxy * fy) / det;
    double dy = -(fxx * fy - fxy * fx) / det;
    if (std::abs(dx) > h || std::abs(dy) > h) return f0;
    double refined = f0 + 0.5 * (fx * dx + fy * dy);
    return std::min(refined, f0);
}

ScalarField translate_to_origin(const ScalarField& f, int i0, int j0) {
    // g_new(x) = g_old(x + x_min): multiply coefficients by e^{i n . x_min}.
    const Grid& g = f.grid();
    double x1 = g.coord(i0), x2 = g.coord(j0);
    ScalarField out(g);
    for (int a1 = 0; a1 < g.n; ++a1) {
        double k1 = g.freq(a1);
        for (int a2 = 0; a2 < g.n; ++a2) {
            double k2 = g.freq(a2);
            out.coef()[grid_index(g, a1, a2)] =
                f.coef()[grid_index(g, a1, a2)] * std::polar(1.0, k1 * x1 + k2 * x2);
        }
    }
    return out;
}

std::array<double, 3> spectral_hessian_at_origin(const ScalarField& f) {
    const Grid& g = f.grid();
    double d11 = 0.0, d12 = 0.0, d22 = 0.0;
    for (int a1 = 0; a1 < g.n; ++a1) {
        double k1 = g.freq(a1);
        for (int a2 = 0; a2 < g.n; ++a2) {
            if (!g.in_band(a1, a2)) continue;
            double k2 = g.freq(a2);
            cplx c = f.coef()[grid_index(g, a1, a2)];
            d11 += -k1 * k1 * c.real();
            d12 += -k1 * k2 * c.real();
            d22 += -k2 * k2 * c.real();
        }
    }
    return {d11, d12, d22};
}

}  // namespace

HeavyTailDatum make_heavy_tail(const ScalarField& f, double r, double s,
                               HeavyTailOptions opt) {
    if (r <= 0.0) throw std::invalid_argument("make_heavy_tail: r must be positive");
    const Grid& g = f.grid();
    double eta = opt.eta > 0.0 ? opt.eta : r / 100.0;
    double eps = opt.eps > 0.0 ? opt.eps : r / 100.0;

    SlowSequence seq(f, s);
    double lnorm = std::sqrt(seq.l_norm_sq());
    if (lnorm == 0.0) throw std::runtime_error("make_heavy_tail: empty band");

    // g0 = f + (r / 2||l||) l_f with real positive tail coefficients.
    ScalarField g0 = f;
    g0.zero_mean();
    double amp = r / (2.0 * lnorm);
    for (int a1 = 0; a1 < g.n; ++a1) {
        for (int a2 = 0; a2 < g.n; ++a2) {
            if (!g.in_band(a1, a2)) continue;
            int m1 = g.mode(a1), m2 = g.mode(a2);
            if (m1 == 0 && m2 == 0) continue;
            double r2 = static_cast<double>(m1) * m1 + static_cast<double>(m2) * m2;
            double add = amp * seq.l(m1, m2) * std::pow(1.0 + r2, -s / 2.0);
            std::size_t idx = grid_index(g, a1, a2);
            g0.coef()[idx] += add;
        }
    }

    const double c = r / (4.0 * lnorm);
    const int cap = g.cutoff() / opt.max_onset_divisor;

    for (int attempt = 0; attempt <= opt.retries; ++attempt) {
        // Translate the grid argmin to the origin.
        auto phys = g0.to_physical();
        std::size_t imin = 0;
        for (std::size_t i = 1; i < phys.size(); ++i)
            if (phys[i] < phys[imin]) imin = i;
        ScalarField shifted = translate_to_origin(g0, static_cast<int>(imin / g.n),
                                                  static_cast<int>(imin % g.n));

        // Deepen the origin (unique minimum) and fix the Hessian.
        // bump - bump_mean keeps the average at zero while deepening x = 0.
        ScalarField bump = ScalarField::sample(g, [&](double x1, double x2) {
            return profiles::radial_step(std::hypot(x1, x2) / opt.bump_radius);
        });
        bump.zero_mean();
        ScalarField trig = ScalarField::sample(g, [](double x1, double x2) {
            return std::cos(x1) + std::cos(x2);
        });
        trig.zero_mean();
        ScalarField cand = shifted - eta * bump - eps * trig;
        cand.dealias();
        cand.zero_mean();

        // Verify the four properties on the grid.
        int n0 = verify_tail_bound(cand, s, c, cap);

        auto cphys = cand.to_physical();
        std::size_t cmin = 0;
        for (std::size_t i = 1; i < cphys.size(); ++i)
            if (cphys[i] < cphys[cmin]) cmin = i;
        std::size_t origin = grid_index(g, g.n / 2, g.n / 2);
        bool min_at_origin = (cmin == origin);
        double second = 1e300;
        for (std::size_t i = 0; i < cphys.size(); ++i)
            if (i != cmin) second = std::min(second, cphys[i]);
        bool unique = second > cphys[cmin] + 1e-12;

        auto hess = spectral_hessian_at_origin(cand);
        double tr = hess[0] + hess[2];
        double det = hess[0] * hess[2] - hess[1] * hess[1];
        double disc = std::sqrt(std::max(tr * tr / 4.0 - det, 0.0));
        double lam1 = tr / 2.0 - disc, lam2 = tr / 2.0 + disc;
        bool posdef = lam1 > 0.0;

        double dist = spectral::sobolev_norm(cand - f, s);
        bool close = dist < r;

        if (n0 > 0 && min_at_origin && unique && posdef && close) {
            HeavyTailDatum out;
            out.g = std::move(cand);
            out.s = s;
            out.c = c;
            out.n0 = n0;
            out.min_value = refine_min_value(cphys, g, g.n / 2, g.n / 2);
            out.hessian = hess;
            out.lambda1 = lam1;
            out.lambda2 = lam2;
            out.distance = dist;
            return out;
        }
        eta /= 2.0;
        eps /= 2.0;
    }
    throw std::runtime_error(
        "make_heavy_tail: verification failed after the eta/eps schedule");
}

ScalarField cusp_field(const Grid& g, const CuspProfile& p) {
    if (near_integer_doubled(p.alpha))
        throw std::invalid_argument("cusp_field: 2 alpha must not be an integer");
    if (p.cutoff_radius >= g.half_width)
        throw std::invalid_argument("cusp_field: cutoff must fit the fundamental cell");
    return ScalarField::sample(g, [&](double x1, double x2) {
        double rad = std::hypot(x1, x2);
        double chi = profiles::radial_step(rad / p.cutoff_radius);
        if (chi == 0.0) return 0.0;
        double q = p.lambda1 * x1 * x1 + p.lambda2 * x2 * x2;
        return chi * std::pow(q, p.alpha);
    });
}

CuspTailFit cusp_tail_fit(const Grid& g, const CuspProfile& p, int n_lo, int n_hi) {
    ScalarField H = cusp_field(g, p);
    CuspTailFit out;
    std::vector<double> ns, v1, v2, ratios, comp;
    for (int n = n_lo; n <= std::min(n_hi, g.cutoff()); ++n) {
        double h1 = std::abs(H.at_mode(n, 0));
        double h2 = std::abs(H.at_mode(0, n));
        ns.push_back(n);
        v1.push_back(h1);
        v2.push_back(h2);
        if (h2 > 0.0) ratios.push_back(h1 / h2);
    }
    out.axis1 = fitting::log_log(ns, v1);
    out.axis2 = fitting::log_log(ns, v2);
    if (!ratios.empty()) {
        std::sort(ratios.begin(), ratios.end());
        out.anisotropy_ratio = ratios[ratios.size() / 2];
    }

    // Radially averaged compensated coefficients should be flat.
    for (int n = n_lo; n <= std::min(n_hi, g.cutoff()); ++n) {
        double acc = 0.0;
        int cnt = 0;
        for (int m1 = -n; m1 <= n; ++m1) {
            for (int m2 = -n; m2 <= n; ++m2) {
                double rr = std::hypot(static_cast<double>(m1), static_cast<double>(m2));
                if (rr < n || rr >= n + 1) continue;
                double q = static_cast<double>(m1) * m1 / p.lambda1 +
                           static_cast<double>(m2) * m2 / p.lambda2;
                acc += std::abs(H.at_mode(m1, m2)) * std::pow(q, 1.0 + p.alpha);
                ++cnt;
            }
        }
        if (cnt > 0) comp.push_back(acc / cnt);
    }
    if (!comp.empty()) {
        double mean = 0.0;
        for (double v : comp) mean += v;
        mean /= comp.size();
        double spread = 0.0;
        for (double v : comp) spread = std::max(spread, std::abs(v - mean));
        out.compensated_spread = mean != 0.0 ? spread / std::abs(mean) : 0.0;
    }
    return out;
}

double holder_bound(const ScalarField& V, double alpha) {
    spectral::DyadicFamily lp(V.grid());
    double bound = 0.0;
    for (int j = 0; j <= lp.max_index(); ++j) {
        double blk = spectral::linf_norm(lp.block(V, j));
        bound = std::max(bound, std::pow(2.0, 2.0 * alpha * j) * blk);
    }
    return bound;
}

CuspDecomposition cusp_decompose(const HeavyTailDatum& datum, double alpha,
                                 double cutoff_radius, int fit_lo, int fit_hi) {
    if (near_integer_doubled(alpha))
        throw std::invalid_argument("cusp_decompose: 2 alpha must not be an integer");
    if (2.0 * alpha >= datum.s - 4.0)
        throw std::invalid_argument("cusp_decompose: requires 2 alpha < s - 4");
    double det = datum.hessian[0] * datum.hessian[2] - datum.hessian[1] * datum.hessian[1];
    if (det <= 0.0 || datum.hessian[0] <= 0.0)
        throw std::invalid_argument("cusp_decompose: degenerate Hessian");

    const Grid& g = datum.g.grid();
    auto phys = datum.g.to_physical();
    std::vector<double> vphys(phys.size());
    for (std::size_t i = 0; i < phys.size(); ++i)
        vphys[i] = std::pow(std::max(phys[i] - datum.min_value, 0.0), alpha);

    CuspDecomposition out;
    out.V = ScalarField::from_physical(g, vphys);

    // Quadratic form from half the measured Hessian, general orientation.
    const double a11 = 0.5 * datum.hessian[0];
    const double a12 = 0.5 * datum.hessian[1];
    const double a22 = 0.5 * datum.hessian[2];
    out.H = ScalarField::sample(g, [&](double x1, double x2) {
        double rad = std::hypot(x1, x2);
        double chi = profiles::radial_step(rad / cutoff_radius);
        if (chi == 0.0) return 0.0;
        double q = a11 * x1 * x1 + 2.0 * a12 * x1 * x2 + a22 * x2 * x2;
        return chi * std::pow(q, alpha);
    });
    out.R = out.V - out.H;
    out.reassembly_error = (out.V - out.H - out.R).max_coef();

    if (fit_hi < 0) fit_hi = g.cutoff() / 2;
    out.v_tail = fitting::radial_decay_fit(out.V, fit_lo, fit_hi);
    out.h_tail = fitting::radial_decay_fit(out.H, fit_lo, fit_hi);
    out.r_tail = fitting::radial_decay_fit(out.R, fit_lo, fit_hi);
    out.slope_gap = out.h_tail.slope - out.r_tail.slope;
    return out;
}

FreezingResult symbol_freezing_residual(const shnirelman::Parametrix& par,
                                        const ScalarField& H, int fit_lo, int fit_hi) {
    ScalarField h = H;
    h.zero_mean();  // the parametrix chain and a(0,D) both annihilate the mean
    ScalarField lhs = shnirelman::apply_laplacian_Q(par, h);
    ScalarField frozen = shnirelman::apply_frozen_symbol(par, h);
    ScalarField res = lhs - frozen;

    FreezingResult out;
    out.residual_tail = fitting::radial_decay_fit(res, fit_lo, fit_hi);
    out.cusp_tail = fitting::radial_decay_fit(h, fit_lo, fit_hi);
    out.slope_gap = out.cusp_tail.slope - out.residual_tail.slope;
    auto prof = fitting::radial_coef_profile(res);
    for (int r = fit_lo; r < static_cast<int>(prof.size()); ++r)
        out.tail_sup = std::max(out.tail_sup, prof[static_cast<std::size_t>(r)]);
    return out;
}

TailSweepResult tail_bounds_sweep(const HeavyTailDatum& datum, double alpha,
                                  const std::vector<double>& eps_list,
                                  const shnirelman::Parametrix& par) {
    const Grid& g = datum.g.grid();
    auto phys = datum.g.to_physical();
    std::vector<double> vphys(phys.size());
    for (std::size_t i = 0; i < phys.size(); ++i)
        vphys[i] = std::pow(std::max(phys[i] - datum.min_value, 0.0), alpha);
    ScalarField V = ScalarField::from_physical(g, vphys);

    ScalarField gz = datum.g;
    gz.zero_mean();
    ScalarField dqg = shnirelman::apply_laplacian_Q(par, gz);
    ScalarField psi = spectral::inv_laplacian(gz);
    VectorField pgrad = spectral::perp_gradient(gz);
    VectorField gpsi = spectral::gradient(psi);
    ScalarField transport = paradiff::paraproduct(pgrad[0], gpsi[0]) +
                            paradiff::paraproduct(pgrad[1], gpsi[1]);

    TailSweepResult out;
    std::vector<double> eps_v, plain_v, driving_v, transport_v;
    for (double eps : eps_list) {
        ScalarField pv = spectral::high_pass(V, eps);
        TailSweepRow row;
        row.eps = eps;
        row.plain = spectral::inner_l2(gz, pv);
        row.driving = spectral::inner_l2(dqg, pv);
        row.transport = spectral::inner_l2(transport, pv);
        out.rows.push_back(row);
        eps_v.push_back(eps);
        plain_v.push_back(std::abs(row.plain));
        driving_v.push_back(std::abs(row.driving));
        transport_v.push_back(std::abs(row.transport));

        double oracle = spectral::inner_l2_physical(gz, pv);
        double denom = std::max(std::abs(row.plain), 1e-300);
        out.parseval_error =
            std::max(out.parseval_error, std::abs(oracle - row.plain) / denom);
    }
    out.plain_fit = fitting::log_log(eps_v, plain_v);
    out.driving_fit = fitting::log_log(eps_v, driving_v);
    out.transport_fit = fitting::log_log(eps_v, transport_v);
    return out;
}

}  // namespace paraflow::cusp

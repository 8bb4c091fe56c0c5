#include "paraflow/compose.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace paraflow::compose {

namespace {

int worker_count() {
    if (const char* env = std::getenv("PARAFLOW_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace

PointEvaluator::PointEvaluator(std::vector<const ScalarField*> fields,
                               double prune_floor) {
    if (fields.empty()) throw std::invalid_argument("no fields");
    grid_ = fields[0]->grid();
    for (const auto* f : fields) require_same_grid(grid_, f->grid());

    const int n = grid_.n;
    const int kmax = std::min(grid_.cutoff(), n / 2 - 1);

    double global_max = 0.0;
    for (const auto* f : fields) global_max = std::max(global_max, f->max_coef());
    double floor = global_max * prune_floor;

    k1_ = k2_ = 0;
    for (const auto* f : fields) {
        for (int m1 = -kmax; m1 <= kmax; ++m1) {
            for (int m2 = -kmax; m2 <= kmax; ++m2) {
                if (std::abs(f->at_mode(m1, m2)) > floor) {
                    k1_ = std::max(k1_, std::abs(m1));
                    k2_ = std::max(k2_, std::abs(m2));
                }
            }
        }
    }

    const int w = 2 * k2_ + 1;
    packed_.resize(fields.size());
    for (std::size_t fi = 0; fi < fields.size(); ++fi) {
        auto& p = packed_[fi];
        p.re.assign(static_cast<std::size_t>(2 * k1_ + 1) * w, 0.0);
        p.im.assign(p.re.size(), 0.0);
        for (int m1 = -k1_; m1 <= k1_; ++m1) {
            for (int m2 = -k2_; m2 <= k2_; ++m2) {
                cplx c = fields[fi]->at_mode(m1, m2);
                std::size_t idx = static_cast<std::size_t>(m1 + k1_) * w + (m2 + k2_);
                p.re[idx] = c.real();
                p.im[idx] = c.imag();
            }
        }
    }
}

void PointEvaluator::eval_chunk(const std::vector<double>& y1,
                                const std::vector<double>& y2, std::size_t begin,
                                std::size_t end,
                                std::vector<std::vector<double>>& out) const {
    const int w = 2 * k2_ + 1;
    const double base_freq = M_PI / grid_.half_width;
    std::vector<double> e2r(w), e2i(w);
    std::vector<double> e1r(k1_ + 1), e1i(k1_ + 1);

    for (std::size_t p = begin; p < end; ++p) {
        // e^{i xi y} tables along each axis, built by rotation recurrence.
        double a1 = base_freq * y1[p], a2 = base_freq * y2[p];
        double z1r = std::cos(a1), z1i = std::sin(a1);
        double z2r = std::cos(a2), z2i = std::sin(a2);

        e2r[k2_] = 1.0;
        e2i[k2_] = 0.0;
        for (int m = 1; m <= k2_; ++m) {
            double pr = e2r[k2_ + m - 1], pi = e2i[k2_ + m - 1];
            double nr = pr * z2r - pi * z2i;
            double ni = pr * z2i + pi * z2r;
            e2r[k2_ + m] = nr;
            e2i[k2_ + m] = ni;
            e2r[k2_ - m] = nr;
            e2i[k2_ - m] = -ni;
        }
        e1r[0] = 1.0;
        e1i[0] = 0.0;
        for (int m = 1; m <= k1_; ++m) {
            e1r[m] = e1r[m - 1] * z1r - e1i[m - 1] * z1i;
            e1i[m] = e1r[m - 1] * z1i + e1i[m - 1] * z1r;
        }

        for (std::size_t fi = 0; fi < packed_.size(); ++fi) {
            const auto& pk = packed_[fi];
            // Row m1 = 0.
            const double* cr = &pk.re[static_cast<std::size_t>(k1_) * w];
            const double* ci = &pk.im[static_cast<std::size_t>(k1_) * w];
            double accr = 0.0, acci = 0.0;
            for (int j = 0; j < w; ++j) {
                accr += cr[j] * e2r[j] - ci[j] * e2i[j];
                acci += cr[j] * e2i[j] + ci[j] * e2r[j];
            }
            // Rows +-m1 paired so that only conj(e1) is needed for the
            // negative half-plane.
            for (int m1 = 1; m1 <= k1_; ++m1) {
                const double* prr = &pk.re[static_cast<std::size_t>(k1_ + m1) * w];
                const double* pri = &pk.im[static_cast<std::size_t>(k1_ + m1) * w];
                const double* nrr = &pk.re[static_cast<std::size_t>(k1_ - m1) * w];
                const double* nri = &pk.im[static_cast<std::size_t>(k1_ - m1) * w];
                double spr = 0.0, spi = 0.0, snr = 0.0, sni = 0.0;
                for (int j = 0; j < w; ++j) {
                    spr += prr[j] * e2r[j] - pri[j] * e2i[j];
                    spi += prr[j] * e2i[j] + pri[j] * e2r[j];
                    snr += nrr[j] * e2r[j] - nri[j] * e2i[j];
                    sni += nrr[j] * e2i[j] + nri[j] * e2r[j];
                }
                accr += e1r[m1] * (spr + snr) - e1i[m1] * (spi - sni);
                acci += e1r[m1] * (spi + sni) + e1i[m1] * (spr - snr);
            }
            out[fi][p] = accr;
        }
    }
}

std::vector<std::vector<double>> PointEvaluator::eval(
    const std::vector<double>& y1, const std::vector<double>& y2) const {
    if (y1.size() != y2.size()) throw std::invalid_argument("point size mismatch");
    std::vector<std::vector<double>> out(packed_.size(),
                                         std::vector<double>(y1.size(), 0.0));
    const std::size_t count = y1.size();
    int workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(count, 1));
    if (workers <= 1 || count < 1024) {
        eval_chunk(y1, y2, 0, count, out);
        return out;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (count + workers - 1) / workers;
    for (int t = 0; t < workers; ++t) {
        std::size_t b = t * chunk, e = std::min(count, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&, b, e] { eval_chunk(y1, y2, b, e, out); });
    }
    for (auto& th : pool) th.join();
    return out;
}

std::vector<ScalarField> pullback_many(const std::vector<const ScalarField*>& fields,
                                       const VectorField& displacement) {
    const Grid& g = displacement.grid();
    for (const auto* f : fields) require_same_grid(g, f->grid());
    auto d1 = displacement[0].to_physical();
    auto d2 = displacement[1].to_physical();
    std::vector<double> y1(g.size()), y2(g.size());
    for (int i = 0; i < g.n; ++i) {
        double x1 = g.coord(i);
        for (int j = 0; j < g.n; ++j) {
            std::size_t idx = static_cast<std::size_t>(i) * g.n + j;
            y1[idx] = x1 + d1[idx];
            y2[idx] = g.coord(j) + d2[idx];
        }
    }
    PointEvaluator ev(fields);
    auto vals = ev.eval(y1, y2);
    std::vector<ScalarField> out;
    out.reserve(fields.size());
    for (auto& v : vals) {
        ScalarField f = ScalarField::from_physical(g, v);
        f.dealias();
        out.push_back(std::move(f));
    }
    return out;
}

ScalarField pullback(const ScalarField& f, const VectorField& displacement) {
    return pullback_many({&f}, displacement)[0];
}

}  // namespace paraflow::compose

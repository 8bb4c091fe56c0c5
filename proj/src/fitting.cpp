#include "paraflow/fitting.hpp"

#include <cmath>
#include <stdexcept>

namespace paraflow::fitting {

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("least_squares: need >= 2 points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    double det = n * sxx - sx * sx;
    if (det == 0.0) throw std::invalid_argument("least_squares: degenerate abscissae");
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double r = y[i] - (fit.slope * x[i] + fit.intercept);
        ss_res += r * r;
    }
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

LineFit log_log(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (y[i] > 0.0 && x[i] > 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    return least_squares(lx, ly);
}

std::vector<double> radial_coef_profile(const ScalarField& f) {
    const Grid& g = f.grid();
    int shells = g.cutoff() + 1;
    std::vector<double> sum(shells, 0.0);
    std::vector<int> cnt(shells, 0);
    for (int a1 = 0; a1 < g.n; ++a1) {
        for (int a2 = 0; a2 < g.n; ++a2) {
            if (!g.in_band(a1, a2)) continue;
            double r = std::hypot(static_cast<double>(g.mode(a1)),
                                  static_cast<double>(g.mode(a2)));
            int shell = static_cast<int>(r);
            if (shell >= shells) continue;
            sum[shell] += std::abs(f.coef()[static_cast<std::size_t>(a1) * g.n + a2]);
            ++cnt[shell];
        }
    }
    for (int s = 0; s < shells; ++s)
        if (cnt[s] > 0) sum[s] /= cnt[s];
    return sum;
}

LineFit radial_decay_fit(const ScalarField& f, int r_lo, int r_hi) {
    auto prof = radial_coef_profile(f);
    std::vector<double> xs, ys;
    for (int r = r_lo; r <= r_hi && r < static_cast<int>(prof.size()); ++r) {
        xs.push_back(static_cast<double>(r));
        ys.push_back(prof[r]);
    }
    return log_log(xs, ys);
}

}  // namespace paraflow::fitting

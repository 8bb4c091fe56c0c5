#include "paraflow/spectral_ops.hpp"

#include <cmath>
#include <stdexcept>

#include "paraflow/profiles.hpp"

namespace paraflow::spectral {

namespace {

template <class F>
ScalarField apply_symbol(const ScalarField& f, F&& sym) {
    const Grid& g = f.grid();
    ScalarField out(g);
    const int n = g.n;
    for (int a1 = 0; a1 < n; ++a1) {
        double k1 = g.freq(a1);
        for (int a2 = 0; a2 < n; ++a2) {
            std::size_t idx = static_cast<std::size_t>(a1) * n + a2;
            out.coef()[idx] = sym(k1, g.freq(a2)) * f.coef()[idx];
        }
    }
    return out;
}

void require_zero_mean(const ScalarField& f, const char* what) {
    double scale = std::max(f.max_coef(), 1.0);
    if (std::abs(f.coef()[0]) > 1e-10 * scale)
        throw std::invalid_argument(std::string(what) + ": input must have zero mean");
}

}  // namespace

ScalarField multiplier(const ScalarField& f,
                       const std::function<cplx(double, double)>& symbol) {
    return apply_symbol(f, symbol);
}

ScalarField derivative(const ScalarField& f, int axis) {
    return apply_symbol(f, [axis](double k1, double k2) {
        return cplx(0.0, axis == 0 ? k1 : k2);
    });
}

VectorField gradient(const ScalarField& f) {
    return VectorField(derivative(f, 0), derivative(f, 1));
}

VectorField perp_gradient(const ScalarField& f) {
    return VectorField(-derivative(f, 1), derivative(f, 0));
}

ScalarField laplacian(const ScalarField& f) {
    return apply_symbol(f, [](double k1, double k2) {
        return cplx(-(k1 * k1 + k2 * k2), 0.0);
    });
}

ScalarField inv_laplacian(const ScalarField& f) {
    require_zero_mean(f, "inv_laplacian");
    return apply_symbol(f, [](double k1, double k2) {
        double k2n = k1 * k1 + k2 * k2;
        return k2n == 0.0 ? cplx(0.0) : cplx(-1.0 / k2n, 0.0);
    });
}

ScalarField divergence(const VectorField& v) {
    return derivative(v[0], 0) + derivative(v[1], 1);
}

ScalarField curl(const VectorField& v) {
    return derivative(v[1], 0) - derivative(v[0], 1);
}

ScalarField riesz(const ScalarField& f, int axis) {
    return apply_symbol(f, [axis](double k1, double k2) {
        double r = std::hypot(k1, k2);
        if (r == 0.0) return cplx(0.0);
        return cplx(0.0, -(axis == 0 ? k1 : k2) / r);
    });
}

ScalarField beurling_pow(const ScalarField& f, int k) {
    if (k == 0) return f;
    return apply_symbol(f, [k](double k1, double k2) {
        double r2 = k1 * k1 + k2 * k2;
        if (r2 == 0.0) return cplx(0.0);
        cplx unit = cplx(k1, k2) * cplx(k1, k2) / r2;
        cplx base = k > 0 ? unit : std::conj(unit);
        cplx acc(1.0, 0.0);
        for (int i = 0; i < std::abs(k); ++i) acc *= base;
        return acc;
    });
}

double sobolev_norm(const ScalarField& f, double s) {
    const Grid& g = f.grid();
    double acc = 0.0;
    for (int a1 = 0; a1 < g.n; ++a1) {
        double k1 = g.freq(a1);
        for (int a2 = 0; a2 < g.n; ++a2) {
            if (!g.in_band(a1, a2)) continue;
            double k2 = g.freq(a2);
            double w = std::pow(1.0 + k1 * k1 + k2 * k2, s);
            acc += w * std::norm(f.coef()[static_cast<std::size_t>(a1) * g.n + a2]);
        }
    }
    return std::sqrt(acc);
}

double l2_norm(const ScalarField& f) { return sobolev_norm(f, 0.0); }

double sobolev_inner(const ScalarField& u, const ScalarField& v, double s) {
    require_same_grid(u.grid(), v.grid());
    const Grid& g = u.grid();
    double acc = 0.0;
    for (int a1 = 0; a1 < g.n; ++a1) {
        double k1 = g.freq(a1);
        for (int a2 = 0; a2 < g.n; ++a2) {
            if (!g.in_band(a1, a2)) continue;
            double k2 = g.freq(a2);
            double w = std::pow(1.0 + k1 * k1 + k2 * k2, s);
            std::size_t idx = static_cast<std::size_t>(a1) * g.n + a2;
            acc += w * (u.coef()[idx] * std::conj(v.coef()[idx])).real();
        }
    }
    return acc;
}

double inner_l2(const ScalarField& u, const ScalarField& v) {
    require_same_grid(u.grid(), v.grid());
    double area = 4.0 * u.grid().half_width * u.grid().half_width;
    double acc = 0.0;
    for (std::size_t i = 0; i < u.coef().size(); ++i)
        acc += (u.coef()[i] * std::conj(v.coef()[i])).real();
    return area * acc;
}

double inner_l2_physical(const ScalarField& u, const ScalarField& v) {
    require_same_grid(u.grid(), v.grid());
    auto pu = u.to_physical();
    auto pv = v.to_physical();
    double acc = 0.0;
    for (std::size_t i = 0; i < pu.size(); ++i) acc += pu[i] * pv[i];
    double h = u.grid().spacing();
    return acc * h * h;
}

double linf_norm(const ScalarField& f) {
    double m = 0.0;
    for (double x : f.to_physical()) m = std::max(m, std::abs(x));
    return m;
}

ScalarField product(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid(), b.grid());
    auto pa = a.to_physical_complex();
    auto pb = b.to_physical_complex();
    for (std::size_t i = 0; i < pa.size(); ++i) pa[i] *= pb[i];
    ScalarField out = ScalarField::from_physical_complex(a.grid(), pa);
    out.dealias();
    return out;
}

DyadicFamily::DyadicFamily(const Grid& g) : grid_(g) {
    max_j_ = static_cast<int>(std::ceil(std::log2(g.n / 2.0)));
}

double DyadicFamily::block_symbol(int j, double r) const {
    if (j < 0 || j > max_j_) throw std::out_of_range("dyadic block index");
    if (j == 0) return profiles::radial_step(r / 2.0);
    return profiles::annulus(std::ldexp(r, -j));
}

double DyadicFamily::partial_symbol(int j, double r) const {
    if (j < 0 || j > max_j_) throw std::out_of_range("dyadic block index");
    return profiles::radial_step(std::ldexp(r, -(j + 1)));
}

ScalarField DyadicFamily::block(const ScalarField& f, int j) const {
    if (j < 0 || j > max_j_) throw std::out_of_range("dyadic block index");
    return apply_symbol(f, [this, j](double k1, double k2) {
        return cplx(block_symbol(j, std::hypot(k1, k2)), 0.0);
    });
}

ScalarField DyadicFamily::partial_sum(const ScalarField& f, int j) const {
    if (j < 0 || j > max_j_) throw std::out_of_range("dyadic block index");
    return apply_symbol(f, [this, j](double k1, double k2) {
        return cplx(partial_symbol(j, std::hypot(k1, k2)), 0.0);
    });
}

ScalarField dyadic_block(const ScalarField& f, int j) {
    return DyadicFamily(f.grid()).block(f, j);
}

ScalarField partial_sum(const ScalarField& f, int j) {
    return DyadicFamily(f.grid()).partial_sum(f, j);
}

ScalarField mollify(const ScalarField& f, double eps) {
    if (!(eps > 0.0 && eps <= 1.0))
        throw std::invalid_argument("mollify: eps must lie in (0,1]");
    return apply_symbol(f, [eps](double k1, double k2) {
        return cplx(profiles::radial_step(eps * std::hypot(k1, k2)), 0.0);
    });
}

ScalarField high_pass(const ScalarField& f, double eps) {
    return f - mollify(f, eps);
}

}  // namespace paraflow::spectral

#include "paraflow/field.hpp"

#include <algorithm>
#include <cmath>

#include "paraflow/fft.hpp"

namespace paraflow {

namespace {

// Samples sit at x = -L + 2L i/n, so the DFT picks up the alternating-sign
// phase (-1)^{m1+m2} relative to the 0-based FFT convention.
inline double shift_sign(int m1, int m2) {
    return ((m1 + m2) & 1) ? -1.0 : 1.0;
}

}  // namespace

ScalarField::ScalarField(const Grid& g, std::vector<cplx> spectral)
    : grid_(g), coef_(std::move(spectral)) {
    if (coef_.size() != g.size())
        throw std::invalid_argument("spectral size mismatch");
}

ScalarField ScalarField::from_physical_complex(const Grid& g,
                                               const std::vector<cplx>& samples) {
    if (samples.size() != g.size())
        throw std::invalid_argument("sample size mismatch");
    ScalarField f(g);
    f.coef_ = samples;
    fft::forward2d(f.coef_, g.n);
    const double inv = 1.0 / static_cast<double>(g.size());
    for (int a1 = 0; a1 < g.n; ++a1) {
        int m1 = g.mode(a1);
        for (int a2 = 0; a2 < g.n; ++a2) {
            f.coef_[static_cast<std::size_t>(a1) * g.n + a2] *=
                inv * shift_sign(m1, g.mode(a2));
        }
    }
    return f;
}

ScalarField ScalarField::from_physical(const Grid& g, const std::vector<double>& samples) {
    std::vector<cplx> tmp(samples.begin(), samples.end());
    return from_physical_complex(g, tmp);
}

ScalarField ScalarField::sample(const Grid& g,
                                const std::function<double(double, double)>& f) {
    std::vector<double> s(g.size());
    for (int i = 0; i < g.n; ++i) {
        double x1 = g.coord(i);
        for (int j = 0; j < g.n; ++j)
            s[static_cast<std::size_t>(i) * g.n + j] = f(x1, g.coord(j));
    }
    return from_physical(g, s);
}

std::vector<cplx> ScalarField::to_physical_complex() const {
    std::vector<cplx> out(coef_);
    const int n = grid_.n;
    for (int a1 = 0; a1 < n; ++a1) {
        int m1 = grid_.mode(a1);
        for (int a2 = 0; a2 < n; ++a2)
            out[static_cast<std::size_t>(a1) * n + a2] *= shift_sign(m1, grid_.mode(a2));
    }
    fft::backward2d(out, n);
    return out;
}

std::vector<double> ScalarField::to_physical() const {
    auto c = to_physical_complex();
    std::vector<double> out(c.size());
    std::transform(c.begin(), c.end(), out.begin(),
                   [](const cplx& z) { return z.real(); });
    return out;
}

cplx ScalarField::at_mode(int m1, int m2) const {
    const int n = grid_.n;
    int a1 = m1 < 0 ? m1 + n : m1;
    int a2 = m2 < 0 ? m2 + n : m2;
    return coef_[static_cast<std::size_t>(a1) * n + a2];
}

void ScalarField::set_mode(int m1, int m2, cplx v) {
    const int n = grid_.n;
    int a1 = m1 < 0 ? m1 + n : m1;
    int a2 = m2 < 0 ? m2 + n : m2;
    coef_[static_cast<std::size_t>(a1) * n + a2] = v;
}

void ScalarField::dealias() {
    const int n = grid_.n;
    const int c = grid_.cutoff();
    for (int a1 = 0; a1 < n; ++a1) {
        bool kill1 = std::abs(grid_.mode(a1)) > c;
        for (int a2 = 0; a2 < n; ++a2) {
            if (kill1 || std::abs(grid_.mode(a2)) > c)
                coef_[static_cast<std::size_t>(a1) * n + a2] = 0.0;
        }
    }
}

double ScalarField::max_coef() const {
    double m = 0.0;
    for (const auto& z : coef_) m = std::max(m, std::abs(z));
    return m;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] += o.coef_[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] -= o.coef_[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double c) {
    for (auto& z : coef_) z *= c;
    return *this;
}

ScalarField ScalarField::operator-() const {
    ScalarField out(*this);
    for (auto& z : out.coef_) z = -z;
    return out;
}

}  // namespace paraflow

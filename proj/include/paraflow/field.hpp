#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "paraflow/grid.hpp"

namespace paraflow {

using cplx = std::complex<double>;

/// Periodic scalar field stored as Fourier coefficients in FFT bin order
/// (row-major, bin (a1,a2) at index a1*n + a2, axis 1 = row).
///
/// Coefficient normalization: u(x) = sum_xi uhat(xi) e^{i xi.x}, i.e.
/// uhat(xi) = (2L)^{-2} integral of u e^{-i xi.x}.  Real-valued fields have
/// Hermitian-symmetric coefficients; complex probe fields are allowed and
/// every linear operation works on them unchanged.
class ScalarField {
  public:
    ScalarField() = default;
    explicit ScalarField(const Grid& g) : grid_(g), coef_(g.size(), cplx(0.0)) {}
    ScalarField(const Grid& g, std::vector<cplx> spectral);

    static ScalarField from_physical(const Grid& g, const std::vector<double>& samples);
    static ScalarField from_physical_complex(const Grid& g, const std::vector<cplx>& samples);
    /// Sample a function of the cell coordinate (x1, x2) in [-L, L)^2.
    static ScalarField sample(const Grid& g, const std::function<double(double, double)>& f);

    const Grid& grid() const { return grid_; }
    const std::vector<cplx>& coef() const { return coef_; }
    std::vector<cplx>& coef() { return coef_; }
    cplx at_mode(int m1, int m2) const;
    void set_mode(int m1, int m2, cplx v);

    std::vector<double> to_physical() const;
    std::vector<cplx> to_physical_complex() const;

    double mean() const { return coef_.empty() ? 0.0 : coef_[0].real(); }
    void zero_mean() { if (!coef_.empty()) coef_[0] = 0.0; }

    /// Zero every coefficient outside the dealias band.
    void dealias();
    /// Largest |coefficient| magnitude.
    double max_coef() const;

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double c);

    friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
    friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
    friend ScalarField operator*(double c, ScalarField a) { return a *= c; }
    ScalarField operator-() const;

  private:
    Grid grid_;
    std::vector<cplx> coef_;
};

/// Two-component field; index 0 is the x1 (row) component.
struct VectorField {
    std::array<ScalarField, 2> comp;

    VectorField() = default;
    explicit VectorField(const Grid& g) : comp{ScalarField(g), ScalarField(g)} {}
    VectorField(ScalarField a, ScalarField b) : comp{std::move(a), std::move(b)} {}

    const Grid& grid() const { return comp[0].grid(); }
    ScalarField& operator[](int i) { return comp[i]; }
    const ScalarField& operator[](int i) const { return comp[i]; }

    VectorField& operator+=(const VectorField& o) {
        comp[0] += o.comp[0]; comp[1] += o.comp[1]; return *this;
    }
    VectorField& operator-=(const VectorField& o) {
        comp[0] -= o.comp[0]; comp[1] -= o.comp[1]; return *this;
    }
    VectorField& operator*=(double c) { comp[0] *= c; comp[1] *= c; return *this; }
    friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
    friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
    friend VectorField operator*(double c, VectorField a) { return a *= c; }
};

/// 2x2 matrix field, entry (i,j): row i = target, column j = source.
struct MatrixField {
    std::array<ScalarField, 4> entry;

    MatrixField() = default;
    explicit MatrixField(const Grid& g)
        : entry{ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g)} {}

    const Grid& grid() const { return entry[0].grid(); }
    ScalarField& operator()(int i, int j) { return entry[2 * i + j]; }
    const ScalarField& operator()(int i, int j) const { return entry[2 * i + j]; }
};

}  // namespace paraflow

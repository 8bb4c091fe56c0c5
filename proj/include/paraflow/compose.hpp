#pragma once

#include <vector>

#include "paraflow/field.hpp"

namespace paraflow::compose {

/// Evaluates band-limited fields at arbitrary physical points by direct
/// summation of their trigonometric series.  Mode ranges are pruned to the
/// smallest rectangle holding every coefficient above a relative floor, and
/// points are processed in parallel chunks.
///
/// All fields must share one grid.  The result is the real part of the
/// series; inputs are expected to be (numerically) real fields.
class PointEvaluator {
  public:
    explicit PointEvaluator(std::vector<const ScalarField*> fields,
                            double prune_floor = 1e-15);

    /// values[f][p] = field f at point (y1[p], y2[p]).
    std::vector<std::vector<double>> eval(const std::vector<double>& y1,
                                          const std::vector<double>& y2) const;

    int pruned_half_width(int axis) const { return axis == 0 ? k1_ : k2_; }

  private:
    struct Packed {
        std::vector<double> re, im;  // (2*k1_+1) x (2*k2_+1), row-major
    };
    void eval_chunk(const std::vector<double>& y1, const std::vector<double>& y2,
                    std::size_t begin, std::size_t end,
                    std::vector<std::vector<double>>& out) const;

    Grid grid_;
    int k1_ = 0, k2_ = 0;
    std::vector<Packed> packed_;
};

/// f(x + d(x)) sampled at the grid nodes and re-expanded (dealiased).
ScalarField pullback(const ScalarField& f, const VectorField& displacement);

/// Several fields pulled back through the same displacement (shares the
/// per-point exponential tables).
std::vector<ScalarField> pullback_many(const std::vector<const ScalarField*>& fields,
                                       const VectorField& displacement);

}  // namespace paraflow::compose

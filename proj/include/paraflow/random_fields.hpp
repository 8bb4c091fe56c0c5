#pragma once

#include <cstdint>
#include <random>

#include "paraflow/field.hpp"

namespace paraflow::random_fields {

using Rng = std::mt19937_64;

/// Real zero-mean field with |coef(m)| = amplitude * exp(-|m|/decay_scale)
/// and uniformly random phases (Hermitian-symmetrized).
ScalarField smooth_field(const Grid& g, double decay_scale, double amplitude, Rng& rng);

/// Real zero-mean field with per-mode magnitude |m|^-(r+1) and random
/// phases; block sup norms then scale like 2^{-jr}, i.e. a C^r surrogate.
/// Normalized to unit Hoelder seminorm estimate.
ScalarField holder_field(const Grid& g, double r, Rng& rng);

/// Real zero-mean field with |coef(m)| ~ (1+|m|^2)^{-(s+1)/2} (an H^s
/// surrogate with a slowly decaying tail), normalized to unit H^s norm.
ScalarField sobolev_field(const Grid& g, double s, Rng& rng);

}  // namespace paraflow::random_fields

#pragma once

#include <complex>
#include <vector>

namespace paraflow::fft {

/// In-place 2D complex DFT on an n-by-n row-major array, FFTW sign
/// conventions (forward = e^{-i...}), unnormalized.  Plans are cached per
/// size and guarded by a mutex; execution itself is thread-safe.
void forward2d(std::vector<std::complex<double>>& data, int n);
void backward2d(std::vector<std::complex<double>>& data, int n);

}  // namespace paraflow::fft

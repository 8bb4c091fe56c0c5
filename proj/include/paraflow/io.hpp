#pragma once

#include <string>
#include <vector>

#include "paraflow/field.hpp"

namespace paraflow::io {

/// Binary field snapshot, magic "PSHF", u32 version 1, u64 n, then the
/// payload: physical snapshots hold n*n little-endian float64 samples
/// row-major; spectral snapshots hold n*n interleaved (re, im) float64.
void write_physical(const std::string& path, const ScalarField& f);
void write_spectral(const std::string& path, const ScalarField& f);
ScalarField read_physical(const std::string& path, double half_width);
ScalarField read_spectral(const std::string& path, double half_width);

/// Deterministic CSV emitter (%.17g formatting).
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    ~CsvWriter();
    void row(const std::vector<double>& values);

  private:
    struct Impl;
    Impl* impl_;
};

std::string format_double(double v);

}  // namespace paraflow::io

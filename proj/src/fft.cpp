#include "paraflow/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace paraflow::fft {

namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

std::mutex plan_mutex;
std::map<int, PlanPair>& plan_cache() {
    static std::map<int, PlanPair> cache;
    return cache;
}

// FFTW_ESTIMATE keeps planning deterministic and cheap; plans are reused via
// the new-array execute interface.
PlanPair& plans_for(int n) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto& cache = plan_cache();
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<std::complex<double>> scratch(static_cast<std::size_t>(n) * n);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    PlanPair pp;
    pp.fwd = fftw_plan_dft_2d(n, n, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    pp.bwd = fftw_plan_dft_2d(n, n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!pp.fwd || !pp.bwd) throw std::runtime_error("fftw plan creation failed");
    return cache.emplace(n, pp).first->second;
}

}  // namespace

void forward2d(std::vector<std::complex<double>>& data, int n) {
    if (data.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("fft: size mismatch");
    auto& pp = plans_for(n);
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(pp.fwd, p, p);
}

void backward2d(std::vector<std::complex<double>>& data, int n) {
    if (data.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("fft: size mismatch");
    auto& pp = plans_for(n);
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(pp.bwd, p, p);
}

}  // namespace paraflow::fft

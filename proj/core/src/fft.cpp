#include "zeno/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <unordered_map>

namespace zeno::fft {

namespace {

// One in-place plan pair per transform length, created once under a lock.
// FFTW_ESTIMATE keeps plan selection deterministic across runs; UNALIGNED
// lets the plans execute on arbitrary std::vector storage.
struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

std::mutex plan_mutex;
std::unordered_map<std::size_t, PlanPair>& plan_cache() {
    static std::unordered_map<std::size_t, PlanPair> cache;
    return cache;
}

PlanPair get_plans(std::size_t n) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto& cache = plan_cache();
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<cplx> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    PlanPair p;
    p.fwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.bwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(n, p);
    return p;
}

}  // namespace

void forward(cplx* data, std::size_t n) {
    auto p = get_plans(n);
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p.fwd, buf, buf);
}

void inverse(cplx* data, std::size_t n) {
    auto p = get_plans(n);
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p.bwd, buf, buf);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) data[i] *= scale;
}

}  // namespace zeno::fft

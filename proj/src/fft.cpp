#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace ersatz::detail {

namespace {

// FFTW planning is not thread-safe, execution of an existing plan is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [size, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int size) {
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(size); it != plans_.end()) return it->second;
    fftw_complex* scratch = fftw_alloc_complex(static_cast<std::size_t>(size));
    fftw_plan plan = fftw_plan_dft_1d(size, scratch, scratch, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    plans_.emplace(size, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<int, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

void fft_forward(std::span<std::complex<double>> data) {
  if (data.size() <= 1) return;
  fftw_plan plan = plan_cache().get(static_cast<int>(data.size()));
  auto* raw = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, raw, raw);
}

}  // namespace ersatz::detail

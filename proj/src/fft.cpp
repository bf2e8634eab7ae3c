#include "wavemaps/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace wm::fft {
namespace {

struct PlanCache {
  std::mutex mu;
  std::map<std::pair<std::vector<int>, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }

  fftw_plan get(const std::vector<int>& shape, int sign) {
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(shape, sign);
    if (auto it = plans.find(key); it != plans.end()) return it->second;
    std::size_t total = 1;
    for (int n : shape) total *= static_cast<std::size_t>(n);
    // Planning scratch; FFTW_ESTIMATE does not touch the contents.
    auto* scratch = fftw_alloc_complex(total);
    fftw_plan plan =
        fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), scratch,
                      scratch, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (plan == nullptr) throw std::runtime_error("fftw planning failed");
    plans.emplace(key, plan);
    return plan;
  }
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void transform(std::span<cplx> data, const std::vector<int>& shape,
               Direction dir) {
  std::size_t total = 1;
  for (int n : shape) total *= static_cast<std::size_t>(n);
  if (data.size() != total) throw std::invalid_argument("fft: data size does not match shape");
  const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
  fftw_plan plan = cache().get(shape, sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace wm::fft

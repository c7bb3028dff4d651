#include <algorithm>
#include <mutex>
#include <optional>

#include <fftw3.h>

#include "headsim/spectral.hpp"

namespace headsim::spectral {
namespace {

// Planner calls are not thread-safe in FFTW; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes)) {
    if (!ptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  void* ptr;
};

class Plan {
 public:
  explicit Plan(fftw_plan p) : plan_(p) {
    if (!plan_) throw NumericalError("FFTW failed to create a plan");
  }
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<Complex> rfft(std::span<const double> x, std::size_t n) {
  if (n == 0) return {};
  FftwBuffer in(sizeof(double) * n);
  FftwBuffer out(sizeof(fftw_complex) * (n / 2 + 1));
  auto* real = static_cast<double*>(in.ptr);
  auto* cplx = static_cast<fftw_complex*>(out.ptr);
  std::optional<Plan> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.emplace(fftw_plan_dft_r2c_1d(static_cast<int>(n), real, cplx, FFTW_ESTIMATE));
  }
  const std::size_t m = std::min(n, x.size());
  std::copy_n(x.begin(), m, real);
  std::fill(real + m, real + n, 0.0);
  plan->execute();
  std::vector<Complex> result(n / 2 + 1);
  for (std::size_t k = 0; k < result.size(); ++k) result[k] = {cplx[k][0], cplx[k][1]};
  return result;
}

std::vector<double> irfft(std::span<const Complex> spectrum, std::size_t n) {
  if (n == 0) return {};
  if (spectrum.size() != n / 2 + 1) throw DomainError("irfft: spectrum size must be n/2 + 1");
  FftwBuffer in(sizeof(fftw_complex) * (n / 2 + 1));
  FftwBuffer out(sizeof(double) * n);
  auto* cplx = static_cast<fftw_complex*>(in.ptr);
  auto* real = static_cast<double*>(out.ptr);
  std::optional<Plan> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.emplace(fftw_plan_dft_c2r_1d(static_cast<int>(n), cplx, real, FFTW_ESTIMATE));
  }
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    cplx[k][0] = spectrum[k].real();
    cplx[k][1] = spectrum[k].imag();
  }
  plan->execute();
  std::vector<double> result(real, real + n);
  for (auto& v : result) v /= static_cast<double>(n);
  return result;
}

}  // namespace headsim::spectral

#include "fractalq/fft.hpp"

#include "fractalq/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <limits>
#include <memory>
#include <mutex>

namespace fractalq::fft {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

template <typename T>
class AlignedBuffer {
public:
  explicit AlignedBuffer(std::size_t n) : size_(n), data_(static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)))) {
    if (!data_) throw std::bad_alloc();
  }
  ~AlignedBuffer() { fftw_free(data_); }
  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;

  T* data() { return data_; }
  std::size_t size() const { return size_; }

private:
  std::size_t size_;
  T* data_;
};

class Plan {
public:
  explicit Plan(fftw_plan p) : plan_(p) {
    if (!plan_) throw Error("FFTW failed to create a plan");
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

int as_int(std::size_t n) {
  if (n > static_cast<std::size_t>(std::numeric_limits<int>::max())) {
    throw UsageError("transform length too large");
  }
  return static_cast<int>(n);
}

} // namespace

std::vector<cplx> forward_real(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  AlignedBuffer<double> in(n);
  AlignedBuffer<fftw_complex> out(n / 2 + 1);
  std::unique_ptr<Plan> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = std::make_unique<Plan>(
        fftw_plan_dft_r2c_1d(as_int(n), in.data(), out.data(), FFTW_ESTIMATE));
  }
  std::copy(x.begin(), x.end(), in.data());
  plan->execute();
  std::vector<cplx> result(n / 2 + 1);
  for (std::size_t k = 0; k < result.size(); ++k) result[k] = {out.data()[k][0], out.data()[k][1]};
  return result;
}

std::vector<double> inverse_real(std::span<const cplx> half_spectrum, std::size_t n) {
  if (n == 0) return {};
  if (half_spectrum.size() != n / 2 + 1) throw UsageError("half spectrum must hold n/2 + 1 bins");
  AlignedBuffer<fftw_complex> in(n / 2 + 1);
  AlignedBuffer<double> out(n);
  std::unique_ptr<Plan> plan;
  {
    std::lock_guard lock(planner_mutex());
    // c2r destroys its input; plan with the default (may-destroy) flags.
    plan = std::make_unique<Plan>(
        fftw_plan_dft_c2r_1d(as_int(n), in.data(), out.data(), FFTW_ESTIMATE));
  }
  for (std::size_t k = 0; k < half_spectrum.size(); ++k) {
    in.data()[k][0] = half_spectrum[k].real();
    in.data()[k][1] = half_spectrum[k].imag();
  }
  plan->execute();
  return std::vector<double>(out.data(), out.data() + n);
}

std::vector<cplx> forward(std::span<const cplx> x) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  AlignedBuffer<fftw_complex> in(n);
  AlignedBuffer<fftw_complex> out(n);
  std::unique_ptr<Plan> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = std::make_unique<Plan>(
        fftw_plan_dft_1d(as_int(n), in.data(), out.data(), FFTW_FORWARD, FFTW_ESTIMATE));
  }
  for (std::size_t k = 0; k < n; ++k) {
    in.data()[k][0] = x[k].real();
    in.data()[k][1] = x[k].imag();
  }
  plan->execute();
  std::vector<cplx> result(n);
  for (std::size_t k = 0; k < n; ++k) result[k] = {out.data()[k][0], out.data()[k][1]};
  return result;
}

} // namespace fractalq::fft

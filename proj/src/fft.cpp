#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "grushin/errors.hpp"

namespace grushin::detail {

namespace {

// FFTW planning and destruction are not thread safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Plan {
 public:
  Plan(std::span<std::complex<double>> data, std::size_t count, int length, int sign) {
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    const int stride = static_cast<int>(count);
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_many_dft(1, &length, stride, buf, nullptr, stride, 1, buf, nullptr, stride, 1,
                               sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    if (plan_ == nullptr) throw Error("FFTW failed to create a plan");
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_ = nullptr;
};

}  // namespace

void strided_dft(std::span<std::complex<double>> data, std::size_t count, int length, int sign) {
  if (data.size() != count * static_cast<std::size_t>(length)) throw Error("strided_dft: size mismatch");
  if (data.empty()) return;
  Plan plan(data, count, length, sign);
  plan.execute();
}

}  // namespace grushin::detail

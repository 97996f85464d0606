#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace fbl {

using cplx = std::complex<double>;

namespace detail {

/// Pair of 2D real<->complex FFTW plans for one square size. Plans are
/// created with FFTW_UNALIGNED so they can be executed on arbitrary
/// std::vector storage through the new-array interface, which is
/// thread-safe once the plan exists.
class PlanPair {
 public:
  explicit PlanPair(std::size_t n) : n_(n) {
    const int in = static_cast<int>(n);
    std::vector<double> r(n * n);
    std::vector<cplx> c(n * (n / 2 + 1));
    auto* cp = reinterpret_cast<fftw_complex*>(c.data());
    forward_ = fftw_plan_dft_r2c_2d(in, in, r.data(), cp, FFTW_ESTIMATE | FFTW_UNALIGNED);
    backward_ = fftw_plan_dft_c2r_2d(in, in, cp, r.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  ~PlanPair() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  PlanPair(const PlanPair&) = delete;
  PlanPair& operator=(const PlanPair&) = delete;

  fftw_plan forward() const { return forward_; }
  fftw_plan backward() const { return backward_; }

 private:
  std::size_t n_;
  fftw_plan forward_;
  fftw_plan backward_;
};

inline const PlanPair& plans_for(std::size_t n) {
  // The FFTW planner is not re-entrant; only creation is serialized.
  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<PlanPair>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<PlanPair>(n);
  return *slot;
}

}  // namespace detail

/// Forward transform of n x n real samples into normalized half-spectrum
/// coefficients, so that f(x) = sum_k c_k exp(i k.x).
inline std::vector<cplx> forward_fft(std::size_t n, std::span<const double> samples) {
  const auto& p = detail::plans_for(n);
  std::vector<double> in(samples.begin(), samples.end());
  std::vector<cplx> out(n * (n / 2 + 1));
  fftw_execute_dft_r2c(p.forward(), in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(n * n);
  for (auto& c : out) c *= scale;
  return out;
}

/// Inverse of forward_fft; the coefficient input is not modified.
inline std::vector<double> inverse_fft(std::size_t n, std::span<const cplx> coeffs) {
  const auto& p = detail::plans_for(n);
  std::vector<cplx> in(coeffs.begin(), coeffs.end());
  std::vector<double> out(n * n);
  fftw_execute_dft_c2r(p.backward(), reinterpret_cast<fftw_complex*>(in.data()), out.data());
  return out;
}

}  // namespace fbl

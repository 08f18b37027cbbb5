#pragma once

// Sine transform in y on the interior nodes y_j = j pi / (M + 1), j = 1..M.
// Synthesis: f(y_j) = sum_n c_n sin(n y_j). Analysis is its exact inverse
// restricted to n = 1..N.

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <vector>

#include "grushin/errors.hpp"

namespace grushin {

class SineTransform {
 public:
  explicit SineTransform(int m) : m_(m), buf_(static_cast<double*>(fftw_malloc(sizeof(double) * m)), fftw_free) {
    if (m < 1) throw InputError("sine transform length must be positive");
    plan_ = fftw_plan_r2r_1d(m, buf_.get(), buf_.get(), FFTW_RODFT00, FFTW_ESTIMATE);
    if (!plan_) throw NumericalError("FFTW could not create a DST-I plan");
  }
  SineTransform(const SineTransform&) = delete;
  SineTransform& operator=(const SineTransform&) = delete;
  ~SineTransform() { fftw_destroy_plan(plan_); }

  int length() const { return m_; }

  // values[0..M) -> coeffs[0..N) holding c_1..c_N
  void analyze(const double* values, double* coeffs, int n_modes) const {
    if (n_modes > m_) throw InputError("more sine modes than y nodes");
    std::copy(values, values + m_, buf_.get());
    fftw_execute(plan_);
    const double s = 1.0 / (m_ + 1);
    for (int n = 0; n < n_modes; ++n) coeffs[n] = buf_.get()[n] * s;
  }

  // coeffs[0..N) -> values[0..M)
  void synthesize(const double* coeffs, int n_modes, double* values) const {
    if (n_modes > m_) throw InputError("more sine modes than y nodes");
    std::fill(buf_.get(), buf_.get() + m_, 0.0);
    std::copy(coeffs, coeffs + n_modes, buf_.get());
    fftw_execute(plan_);
    for (int j = 0; j < m_; ++j) values[j] = 0.5 * buf_.get()[j];
  }

 private:
  int m_;
  std::unique_ptr<double, decltype(&fftw_free)> buf_;
  fftw_plan plan_ = nullptr;
};

}  // namespace grushin

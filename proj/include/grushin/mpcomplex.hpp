#pragma once

// Minimal complex number over MPFR. Used where polynomial coefficients carry
// enormous cancellation (pole pushing, evaluation of the pushed polynomials).

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <utility>

namespace grushin::mp {

class Complex {
 public:
  explicit Complex(mpfr_prec_t bits) {
    mpfr_init2(re_, bits);
    mpfr_init2(im_, bits);
    mpfr_set_zero(re_, 1);
    mpfr_set_zero(im_, 1);
  }
  Complex(std::complex<double> z, mpfr_prec_t bits) : Complex(bits) { set(z); }
  Complex(const Complex& o) : Complex(mpfr_get_prec(o.re_)) { set(o); }
  Complex& operator=(const Complex& o) {
    if (this != &o) set(o);
    return *this;
  }
  Complex(Complex&& o) noexcept : Complex(mpfr_get_prec(o.re_)) {
    mpfr_swap(re_, o.re_);
    mpfr_swap(im_, o.im_);
  }
  Complex& operator=(Complex&& o) noexcept {
    mpfr_swap(re_, o.re_);
    mpfr_swap(im_, o.im_);
    return *this;
  }
  ~Complex() {
    mpfr_clear(re_);
    mpfr_clear(im_);
  }

  mpfr_prec_t precision() const { return mpfr_get_prec(re_); }

  void set(std::complex<double> z) {
    mpfr_set_d(re_, z.real(), MPFR_RNDN);
    mpfr_set_d(im_, z.imag(), MPFR_RNDN);
  }
  void set(const Complex& o) {
    mpfr_set(re_, o.re_, MPFR_RNDN);
    mpfr_set(im_, o.im_, MPFR_RNDN);
  }
  void set_zero() {
    mpfr_set_zero(re_, 1);
    mpfr_set_zero(im_, 1);
  }
  bool is_zero() const { return mpfr_zero_p(re_) && mpfr_zero_p(im_); }

  std::complex<double> to_double() const {
    return {mpfr_get_d(re_, MPFR_RNDN), mpfr_get_d(im_, MPFR_RNDN)};
  }

  // log2 of max(|re|, |im|); very negative for zero.
  long exponent() const {
    long e = -(1L << 40);
    if (!mpfr_zero_p(re_)) e = std::max(e, static_cast<long>(mpfr_get_exp(re_)));
    if (!mpfr_zero_p(im_)) e = std::max(e, static_cast<long>(mpfr_get_exp(im_)));
    return e;
  }

  // |z| as a double; finite as long as the exponent fits a double.
  double abs_d() const {
    long e = 0;
    double r = mpfr_get_d_2exp(&e, re_, MPFR_RNDN);
    long f = 0;
    double i = mpfr_get_d_2exp(&f, im_, MPFR_RNDN);
    long m = std::max(mpfr_zero_p(re_) ? f : e, mpfr_zero_p(im_) ? e : f);
    double rr = mpfr_zero_p(re_) ? 0.0 : std::ldexp(r, static_cast<int>(e - m));
    double ii = mpfr_zero_p(im_) ? 0.0 : std::ldexp(i, static_cast<int>(f - m));
    return std::ldexp(std::hypot(rr, ii), static_cast<int>(m));
  }

  // log |z| in natural units, robust to huge exponents.
  double log_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    long e = 0;
    double r = mpfr_get_d_2exp(&e, re_, MPFR_RNDN);
    long f = 0;
    double i = mpfr_get_d_2exp(&f, im_, MPFR_RNDN);
    long m = std::max(mpfr_zero_p(re_) ? f : e, mpfr_zero_p(im_) ? e : f);
    double rr = mpfr_zero_p(re_) ? 0.0 : std::ldexp(r, static_cast<int>(e - m));
    double ii = mpfr_zero_p(im_) ? 0.0 : std::ldexp(i, static_cast<int>(f - m));
    return std::log(std::hypot(rr, ii)) + static_cast<double>(m) * std::log(2.0);
  }

  // this += a * b, using scratch t1, t2 (same precision).
  void add_mul(const Complex& a, const Complex& b, mpfr_t t1, mpfr_t t2) {
    mpfr_mul(t1, a.re_, b.re_, MPFR_RNDN);
    mpfr_mul(t2, a.im_, b.im_, MPFR_RNDN);
    mpfr_sub(t1, t1, t2, MPFR_RNDN);
    mpfr_add(re_, re_, t1, MPFR_RNDN);
    mpfr_mul(t1, a.re_, b.im_, MPFR_RNDN);
    mpfr_mul(t2, a.im_, b.re_, MPFR_RNDN);
    mpfr_add(t1, t1, t2, MPFR_RNDN);
    mpfr_add(im_, im_, t1, MPFR_RNDN);
  }

  // this = this * b + c, using scratch t1, t2.
  void mul_add(const Complex& b, const Complex& c, mpfr_t t1, mpfr_t t2) {
    mpfr_mul(t1, re_, b.re_, MPFR_RNDN);
    mpfr_mul(t2, im_, b.im_, MPFR_RNDN);
    mpfr_sub(t1, t1, t2, MPFR_RNDN);
    mpfr_mul(t2, re_, b.im_, MPFR_RNDN);
    mpfr_mul(im_, im_, b.re_, MPFR_RNDN);
    mpfr_add(im_, im_, t2, MPFR_RNDN);
    mpfr_add(im_, im_, c.im_, MPFR_RNDN);
    mpfr_add(re_, t1, c.re_, MPFR_RNDN);
  }

  // this = 1 / b
  void set_reciprocal(const Complex& b, mpfr_t t1, mpfr_t t2) {
    mpfr_sqr(t1, b.re_, MPFR_RNDN);
    mpfr_sqr(t2, b.im_, MPFR_RNDN);
    mpfr_add(t1, t1, t2, MPFR_RNDN);
    mpfr_div(re_, b.re_, t1, MPFR_RNDN);
    mpfr_div(im_, b.im_, t1, MPFR_RNDN);
    mpfr_neg(im_, im_, MPFR_RNDN);
  }

  void negate() {
    mpfr_neg(re_, re_, MPFR_RNDN);
    mpfr_neg(im_, im_, MPFR_RNDN);
  }

  // this *= b, scratch t1, t2.
  void mul(const Complex& b, mpfr_t t1, mpfr_t t2) {
    mpfr_mul(t1, re_, b.re_, MPFR_RNDN);
    mpfr_mul(t2, im_, b.im_, MPFR_RNDN);
    mpfr_mul(im_, im_, b.re_, MPFR_RNDN);
    mpfr_mul(re_, re_, b.im_, MPFR_RNDN);
    mpfr_add(im_, im_, re_, MPFR_RNDN);
    mpfr_sub(re_, t1, t2, MPFR_RNDN);
  }

  // this *= num / den
  void mul_ratio(unsigned long num, unsigned long den) {
    mpfr_mul_ui(re_, re_, num, MPFR_RNDN);
    mpfr_mul_ui(im_, im_, num, MPFR_RNDN);
    mpfr_div_ui(re_, re_, den, MPFR_RNDN);
    mpfr_div_ui(im_, im_, den, MPFR_RNDN);
  }

  void add(const Complex& o) {
    mpfr_add(re_, re_, o.re_, MPFR_RNDN);
    mpfr_add(im_, im_, o.im_, MPFR_RNDN);
  }

  void scale(double s) {
    mpfr_mul_d(re_, re_, s, MPFR_RNDN);
    mpfr_mul_d(im_, im_, s, MPFR_RNDN);
  }

  mpfr_ptr re() { return re_; }
  mpfr_ptr im() { return im_; }
  mpfr_srcptr re() const { return re_; }
  mpfr_srcptr im() const { return im_; }

 private:
  mpfr_t re_;
  mpfr_t im_;
};

// Two scratch registers for the in-place operations above.
class Scratch {
 public:
  explicit Scratch(mpfr_prec_t bits) {
    mpfr_init2(a, bits);
    mpfr_init2(b, bits);
  }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
  ~Scratch() {
    mpfr_clear(a);
    mpfr_clear(b);
  }
  mpfr_t a;
  mpfr_t b;
};

}  // namespace grushin::mp

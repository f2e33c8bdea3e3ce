#pragma once

// Value-semantic wrappers around MPFR floating-point numbers.

#include <gmpxx.h>
#include <mpfr.h>

#include <utility>

namespace ecpp {

class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t precision);
  BigFloat(long value, mpfr_prec_t precision);
  BigFloat(const mpz_class& value, mpfr_prec_t precision);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }
  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  /// Nearest integer (ties away from zero).
  mpz_class round() const;
  /// log2 |x|, or a very negative value for zero.
  double log2_abs() const;
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }

  static BigFloat pi(mpfr_prec_t precision);

  friend BigFloat operator+(const BigFloat& x, const BigFloat& y);
  friend BigFloat operator-(const BigFloat& x, const BigFloat& y);
  friend BigFloat operator*(const BigFloat& x, const BigFloat& y);
  friend BigFloat operator/(const BigFloat& x, const BigFloat& y);
  friend BigFloat operator-(const BigFloat& x);
  friend BigFloat abs(const BigFloat& x);
  friend BigFloat sqrt(const BigFloat& x);
  friend BigFloat exp(const BigFloat& x);
  friend bool operator<(const BigFloat& x, const BigFloat& y) { return mpfr_less_p(x.value_, y.value_) != 0; }

 private:
  mpfr_t value_;
};

class BigComplex {
 public:
  explicit BigComplex(mpfr_prec_t precision) : re_(precision), im_(precision) {}
  BigComplex(BigFloat re, BigFloat im) : re_(std::move(re)), im_(std::move(im)) {}

  const BigFloat& re() const { return re_; }
  const BigFloat& im() const { return im_; }
  mpfr_prec_t precision() const { return re_.precision(); }

  /// |z|^2
  BigFloat norm() const { return re_ * re_ + im_ * im_; }
  BigComplex conj() const { return {re_, -im_}; }

  friend BigComplex operator+(const BigComplex& x, const BigComplex& y) {
    return {x.re_ + y.re_, x.im_ + y.im_};
  }
  friend BigComplex operator-(const BigComplex& x, const BigComplex& y) {
    return {x.re_ - y.re_, x.im_ - y.im_};
  }
  friend BigComplex operator*(const BigComplex& x, const BigComplex& y) {
    return {x.re_ * y.re_ - x.im_ * y.im_, x.re_ * y.im_ + x.im_ * y.re_};
  }
  friend BigComplex operator*(const BigComplex& x, const BigFloat& s) {
    return {x.re_ * s, x.im_ * s};
  }
  friend BigComplex operator/(const BigComplex& x, const BigComplex& y) {
    const BigFloat n = y.norm();
    return {(x.re_ * y.re_ + x.im_ * y.im_) / n, (x.im_ * y.re_ - x.re_ * y.im_) / n};
  }

  /// exp(2 pi i z)
  friend BigComplex exp_2pi_i(const BigComplex& z);

 private:
  BigFloat re_;
  BigFloat im_;
};

}  // namespace ecpp

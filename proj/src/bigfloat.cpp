#include "ecpp/bigfloat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ecpp {
namespace {

mpfr_prec_t wider(const BigFloat& x, const BigFloat& y) { return std::max(x.precision(), y.precision()); }

}  // namespace

BigFloat::BigFloat(mpfr_prec_t precision) {
  mpfr_init2(value_, precision);
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(long value, mpfr_prec_t precision) {
  mpfr_init2(value_, precision);
  mpfr_set_si(value_, value, MPFR_RNDN);
}

BigFloat::BigFloat(const mpz_class& value, mpfr_prec_t precision) {
  mpfr_init2(value_, precision);
  mpfr_set_z(value_, value.get_mpz_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(value_, other.precision());
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

mpz_class BigFloat::round() const {
  mpz_class out;
  mpfr_t tmp;
  mpfr_init2(tmp, precision());
  mpfr_round(tmp, value_);
  mpfr_get_z(out.get_mpz_t(), tmp, MPFR_RNDN);
  mpfr_clear(tmp);
  return out;
}

double BigFloat::log2_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  long exponent = 0;
  const double mantissa = mpfr_get_d_2exp(&exponent, value_, MPFR_RNDN);
  return std::log2(std::abs(mantissa)) + static_cast<double>(exponent);
}

BigFloat BigFloat::pi(mpfr_prec_t precision) {
  BigFloat out(precision);
  mpfr_const_pi(out.value_, MPFR_RNDN);
  return out;
}

BigFloat operator+(const BigFloat& x, const BigFloat& y) {
  BigFloat out(wider(x, y));
  mpfr_add(out.value_, x.value_, y.value_, MPFR_RNDN);
  return out;
}

BigFloat operator-(const BigFloat& x, const BigFloat& y) {
  BigFloat out(wider(x, y));
  mpfr_sub(out.value_, x.value_, y.value_, MPFR_RNDN);
  return out;
}

BigFloat operator*(const BigFloat& x, const BigFloat& y) {
  BigFloat out(wider(x, y));
  mpfr_mul(out.value_, x.value_, y.value_, MPFR_RNDN);
  return out;
}

BigFloat operator/(const BigFloat& x, const BigFloat& y) {
  BigFloat out(wider(x, y));
  mpfr_div(out.value_, x.value_, y.value_, MPFR_RNDN);
  return out;
}

BigFloat operator-(const BigFloat& x) {
  BigFloat out(x.precision());
  mpfr_neg(out.value_, x.value_, MPFR_RNDN);
  return out;
}

BigFloat abs(const BigFloat& x) {
  BigFloat out(x.precision());
  mpfr_abs(out.value_, x.value_, MPFR_RNDN);
  return out;
}

BigFloat sqrt(const BigFloat& x) {
  BigFloat out(x.precision());
  mpfr_sqrt(out.value_, x.value_, MPFR_RNDN);
  return out;
}

BigFloat exp(const BigFloat& x) {
  BigFloat out(x.precision());
  mpfr_exp(out.value_, x.value_, MPFR_RNDN);
  return out;
}

BigComplex exp_2pi_i(const BigComplex& z) {
  const mpfr_prec_t prec = z.precision();
  const BigFloat two_pi = BigFloat::pi(prec) * BigFloat(2, prec);
  const BigFloat modulus = exp(-(two_pi * z.im()));
  const BigFloat angle = two_pi * z.re();
  BigFloat s(prec), c(prec);
  mpfr_sin_cos(s.get(), c.get(), angle.get(), MPFR_RNDN);
  return {modulus * c, modulus * s};
}

}  // namespace ecpp

#include "ecpp/classpoly.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ecpp/errors.hpp"
#include "ecpp/quadratics.hpp"

namespace ecpp {
namespace {

constexpr mpfr_prec_t kInternalGuard = 32;

BigFloat at_precision(const BigFloat& x, mpfr_prec_t precision) {
  BigFloat out(precision);
  mpfr_set(out.get(), x.get(), MPFR_RNDN);
  return out;
}

// prod_{n>=1} (1 - q^n) = 1 + sum_{n>=1} (-1)^n (q^{n(3n-1)/2} + q^{n(3n+1)/2}).
// log2_q bounds log2|q| from above; terms stop once the tail, at most
// 2 |q|^{n(3n-1)/2}, is below 2^-precision.
BigComplex eta_product(const BigComplex& q, double log2_q, mpfr_prec_t precision) {
  BigComplex sum(BigFloat(1, precision), BigFloat(precision));
  BigComplex one(BigFloat(1, precision), BigFloat(precision));
  const BigComplex q_sq = q * q;
  BigComplex q_n = one;      // q^n
  BigComplex q_odd = q;      // q^{2n-1}
  BigComplex upper = one;    // q^{n(3n+1)/2} of the previous n
  for (long n = 1;; ++n) {
    const double e1 = static_cast<double>(n) * static_cast<double>(3 * n - 1) / 2.0;
    if (1.0 + e1 * log2_q < -static_cast<double>(precision)) break;
    q_n = q_n * q;
    const BigComplex lower = upper * q_odd;  // q^{n(3n-1)/2}
    upper = lower * q_n;                     // q^{n(3n+1)/2}
    q_odd = q_odd * q_sq;
    const BigComplex term = lower + upper;
    sum = (n % 2 == 0) ? sum + term : sum - term;
  }
  return sum;
}

BigComplex pow24(const BigComplex& x) {
  const BigComplex x2 = x * x;
  const BigComplex x3 = x2 * x;
  const BigComplex x6 = x3 * x3;
  const BigComplex x12 = x6 * x6;
  return x12 * x12;
}

// Multiplies the real polynomial `poly` (low to high) by `factor`.
std::vector<BigFloat> multiply(const std::vector<BigFloat>& poly, const std::vector<BigFloat>& factor,
                               mpfr_prec_t precision) {
  std::vector<BigFloat> out(poly.size() + factor.size() - 1, BigFloat(precision));
  for (std::size_t i = 0; i < poly.size(); ++i) {
    for (std::size_t k = 0; k < factor.size(); ++k) {
      out[i + k] = out[i + k] + poly[i] * factor[k];
    }
  }
  return out;
}

}  // namespace

BigComplex j_invariant(const BigComplex& tau, mpfr_prec_t precision) {
  const mpfr_prec_t wp = precision + kInternalGuard;
  if (mpfr_sgn(tau.im().get()) <= 0) throw PrecisionExhausted("j_invariant: tau must lie in the upper half-plane");
  const double im = tau.im().to_double();
  // log2|q| = -2 pi Im(tau) / ln 2, shaded towards zero so the bound stays safe.
  const double log2_q = -2.0 * M_PI * im / M_LN2 * (1.0 - 1e-9);
  if (!(log2_q <= -1.0)) throw PrecisionExhausted("j_invariant: |q| >= 1/2, tail bound unavailable");

  const BigComplex z(at_precision(tau.re(), wp), at_precision(tau.im(), wp));
  const BigComplex q = exp_2pi_i(z);
  const BigComplex ratio = eta_product(q * q, 2.0 * log2_q, wp) / eta_product(q, log2_q, wp);
  const BigComplex f = q * pow24(ratio);
  const BigComplex one(BigFloat(1, wp), BigFloat(wp));
  const BigComplex base = f * BigFloat(256, wp) + one;
  return base * base * base / f;
}

unsigned guard_bits(std::int64_t h) { return static_cast<unsigned>(33 + h); }

unsigned precision_for(std::int64_t d) {
  const auto forms = reduced_forms(d);
  double inverse_sum = 0.0;
  for (const auto& f : forms) inverse_sum += 1.0 / static_cast<double>(f.a);
  const double height = M_PI * std::sqrt(static_cast<double>(d)) / M_LN2 * inverse_sum;
  return static_cast<unsigned>(std::ceil(height)) + guard_bits(static_cast<std::int64_t>(forms.size()));
}

ClassPolynomial hilbert_class_poly_at(std::int64_t d, unsigned precision) {
  const auto forms = reduced_forms(d);
  const auto h = static_cast<std::int64_t>(forms.size());
  const mpfr_prec_t wp = std::max<mpfr_prec_t>(precision, 64);
  const BigFloat sqrt_d = sqrt(BigFloat(static_cast<long>(d), wp));
  const double guard = guard_bits(h);

  std::vector<BigFloat> poly{BigFloat(1, wp)};
  for (const auto& f : forms) {
    // (A, -B, C) pairs with (A, B, C) and has the conjugate root.
    if (f.b < 0) continue;
    const BigFloat two_a(2 * f.a, wp);
    const BigComplex tau(BigFloat(-f.b, wp) / two_a, sqrt_d / two_a);
    const BigComplex j = j_invariant(tau, wp);
    if (f.b == 0 || f.b == f.a || f.a == f.c) {
      if (j.im().log2_abs() >= -guard) {
        throw RoundingUncertain("hilbert_class_poly: real root has a large imaginary part");
      }
      poly = multiply(poly, {-j.re(), BigFloat(1, wp)}, wp);
    } else {
      const BigFloat two(2, wp);
      poly = multiply(poly, {j.norm(), -(two * j.re()), BigFloat(1, wp)}, wp);
    }
  }

  ClassPolynomial out;
  out.d = d;
  const BigFloat quarter = BigFloat(1, wp) / BigFloat(4, wp);
  for (const auto& c : poly) {
    // A coefficient this close to the working precision has no fractional
    // bits left to judge the rounding by.
    if (!c.is_zero() && c.log2_abs() > static_cast<double>(wp) - guard / 2) {
      throw RoundingUncertain("hilbert_class_poly: coefficient exceeds the working precision");
    }
    mpz_class rounded = c.round();
    if (!(abs(c - BigFloat(rounded, wp)) < quarter)) {
      throw RoundingUncertain("hilbert_class_poly: coefficient too far from an integer");
    }
    out.coeffs.push_back(std::move(rounded));
  }
  if (out.coeffs.back() != 1 || static_cast<std::int64_t>(out.degree()) != h) {
    throw RoundingUncertain("hilbert_class_poly: result is not monic of degree h");
  }
  return out;
}

ClassPolynomial hilbert_class_poly(std::int64_t d, std::optional<unsigned> start_precision) {
  if (d <= 0 || !is_fundamental(-d)) throw PreconditionViolated("hilbert_class_poly: -D must be fundamental");
  unsigned precision = start_precision.value_or(precision_for(d));
  for (int retry = 0;; ++retry) {
    try {
      return hilbert_class_poly_at(d, precision);
    } catch (const RoundingUncertain&) {
      if (retry == 3) throw;
      precision *= 2;
    }
  }
}

std::string format_class_poly(const ClassPolynomial& poly) {
  std::ostringstream out;
  out << poly.d << '\n' << poly.degree() << '\n';
  for (auto it = poly.coeffs.rbegin(); it != poly.coeffs.rend(); ++it) out << it->get_str() << '\n';
  return out.str();
}

ClassPolynomial parse_class_poly(const std::string& text) {
  std::istringstream in(text);
  ClassPolynomial poly;
  std::size_t h = 0;
  if (!(in >> poly.d >> h)) throw ParseError("class polynomial file: missing header");
  std::vector<mpz_class> high_to_low;
  std::string token;
  while (in >> token) {
    mpz_class c;
    if (c.set_str(token, 10) != 0) throw ParseError("class polynomial file: bad coefficient " + token);
    high_to_low.push_back(std::move(c));
  }
  if (high_to_low.size() != h + 1) throw ParseError("class polynomial file: wrong coefficient count");
  poly.coeffs.assign(high_to_low.rbegin(), high_to_low.rend());
  if (poly.coeffs.back() != 1) throw ParseError("class polynomial file: not monic");
  return poly;
}

std::filesystem::path class_poly_filename(std::int64_t d) {
  return "HD_" + std::to_string(d) + ".txt";
}

ClassPolyCache::ClassPolyCache(std::optional<std::filesystem::path> directory)
    : directory_(std::move(directory)) {}

std::optional<std::filesystem::path> ClassPolyCache::environment_directory() {
  if (const char* dir = std::getenv("ECPP_HD_CACHE"); dir != nullptr && *dir != '\0') {
    return std::filesystem::path(dir);
  }
  return std::nullopt;
}

std::shared_ptr<ClassPolyCache> ClassPolyCache::from_environment() {
  return std::make_shared<ClassPolyCache>(environment_directory());
}

const ClassPolynomial& ClassPolyCache::get(std::int64_t d) {
  std::lock_guard lock(mutex_);
  if (auto it = polys_.find(d); it != polys_.end()) return it->second;

  if (directory_) {
    const auto path = *directory_ / class_poly_filename(d);
    if (std::ifstream in(path); in) {
      std::stringstream buffer;
      buffer << in.rdbuf();
      try {
        auto poly = parse_class_poly(buffer.str());
        if (poly.d == d) return polys_.emplace(d, std::move(poly)).first->second;
      } catch (const ParseError&) {
        // Unreadable cache entries are recomputed and overwritten.
      }
    }
  }

  auto poly = hilbert_class_poly(d);
  ++computed_;
  if (directory_) {
    std::error_code ec;
    std::filesystem::create_directories(*directory_, ec);
    std::ofstream out(*directory_ / class_poly_filename(d));
    if (out) out << format_class_poly(poly);
  }
  return polys_.emplace(d, std::move(poly)).first->second;
}

}  // namespace ecpp

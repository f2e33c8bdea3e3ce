#include "ecpp/polyroot.hpp"

#include <algorithm>
#include <utility>

namespace ecpp {
namespace {

void trim(std::vector<mpz_class>& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

mpz_class invert_or_throw(const mpz_class& a, const mpz_class& n) {
  auto inv = inv_mod(a, n);
  if (auto* f = std::get_if<Factor>(&inv)) throw NonInvertibleElement(f->d);
  return std::get<Residue>(inv).value;
}

using Coeffs = std::vector<mpz_class>;

void trim_coeffs(Coeffs& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

// Writes every coefficient into its own slot of `slot_limbs` 64-bit words and
// reads the result as one integer.
mpz_class pack(const Coeffs& c, std::size_t slot_limbs) {
  std::vector<std::uint64_t> buf(c.size() * slot_limbs, 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::size_t count = 0;
    mpz_export(buf.data() + i * slot_limbs, &count, -1, sizeof(std::uint64_t), 0, 0, c[i].get_mpz_t());
  }
  mpz_class x;
  mpz_import(x.get_mpz_t(), buf.size(), -1, sizeof(std::uint64_t), 0, 0, buf.data());
  return x;
}

Coeffs unpack(const mpz_class& x, std::size_t len, std::size_t slot_limbs, const mpz_class& n) {
  const std::size_t words = mpz_sizeinbase(x.get_mpz_t(), 2) / 64 + 1;
  std::vector<std::uint64_t> buf(std::max(words, len * slot_limbs), 0);
  std::size_t count = 0;
  mpz_export(buf.data(), &count, -1, sizeof(std::uint64_t), 0, 0, x.get_mpz_t());
  Coeffs out(len);
  for (std::size_t i = 0; i < len; ++i) {
    mpz_import(out[i].get_mpz_t(), slot_limbs, -1, sizeof(std::uint64_t), 0, 0, buf.data() + i * slot_limbs);
    mpz_mod(out[i].get_mpz_t(), out[i].get_mpz_t(), n.get_mpz_t());
  }
  return out;
}

// f * g mod N for coefficient vectors with entries in [0, N). Large products
// go through Kronecker substitution so that GMP's subquadratic
// multiplication does the work.
Coeffs poly_product(const Coeffs& f, const Coeffs& g, const mpz_class& n) {
  if (f.empty() || g.empty()) return {};
  const std::size_t len = f.size() + g.size() - 1;
  const std::size_t shorter = std::min(f.size(), g.size());
  if (shorter < 4) {
    Coeffs out(len);
    for (std::size_t i = 0; i < f.size(); ++i) {
      for (std::size_t j = 0; j < g.size(); ++j) {
        mpz_addmul(out[i + j].get_mpz_t(), f[i].get_mpz_t(), g[j].get_mpz_t());
      }
    }
    for (auto& c : out) mpz_mod(c.get_mpz_t(), c.get_mpz_t(), n.get_mpz_t());
    return out;
  }
  const std::size_t slot_bits = 2 * mpz_sizeinbase(n.get_mpz_t(), 2) + 64;
  const std::size_t slot_limbs = (slot_bits + 63) / 64;
  const mpz_class x = pack(f, slot_limbs);
  mpz_class prod;
  if (&f == &g) {
    mpz_mul(prod.get_mpz_t(), x.get_mpz_t(), x.get_mpz_t());
  } else {
    const mpz_class y = pack(g, slot_limbs);
    mpz_mul(prod.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  }
  return unpack(prod, len, slot_limbs, n);
}

// Reduction modulo a fixed monic polynomial m of degree h: the quotient comes
// from the power series inverse of the reversed modulus.
class Reducer {
 public:
  explicit Reducer(const PolyModN& m) : m_(m.coeffs()), n_(m.modulus()), h_(static_cast<std::size_t>(m.degree())) {
    // rev(m) = 1 + r_1 X + ... with r_i = m_{h-i}; inv_ = rev(m)^-1 mod X^h.
    inv_.assign(h_, 0);
    inv_[0] = 1;
    mpz_class acc;
    for (std::size_t k = 1; k < h_; ++k) {
      acc = 0;
      for (std::size_t i = 1; i <= k; ++i) mpz_addmul(acc.get_mpz_t(), m_[h_ - i].get_mpz_t(), inv_[k - i].get_mpz_t());
      mpz_neg(acc.get_mpz_t(), acc.get_mpz_t());
      mpz_mod(inv_[k].get_mpz_t(), acc.get_mpz_t(), n_.get_mpz_t());
    }
  }

  std::size_t degree() const { return h_; }
  const mpz_class& modulus() const { return n_; }

  // f has at most 2h - 1 coefficients.
  Coeffs reduce(Coeffs f) const {
    trim_coeffs(f);
    if (f.size() <= h_) return f;
    const std::size_t k = f.size() - h_;
    Coeffs rf(k);
    for (std::size_t i = 0; i < k; ++i) rf[i] = f[f.size() - 1 - i];
    Coeffs inv(inv_.begin(), inv_.begin() + static_cast<std::ptrdiff_t>(std::min(k, inv_.size())));
    Coeffs qrev = poly_product(rf, inv, n_);
    qrev.resize(k);
    Coeffs q(k);
    for (std::size_t i = 0; i < k; ++i) q[i] = std::move(qrev[k - 1 - i]);
    const Coeffs qm = poly_product(q, m_, n_);
    Coeffs r(h_);
    for (std::size_t i = 0; i < h_; ++i) {
      r[i] = f[i] - (i < qm.size() ? qm[i] : mpz_class(0));
      if (r[i] < 0) r[i] += n_;
    }
    trim_coeffs(r);
    return r;
  }

  // f * (b0 + b1 X) mod m for f already reduced.
  Coeffs mul_linear(const Coeffs& f, const mpz_class& b0, const mpz_class& b1) const {
    Coeffs out(f.size() + 1);
    for (std::size_t i = 0; i < f.size(); ++i) {
      mpz_addmul(out[i + 1].get_mpz_t(), f[i].get_mpz_t(), b1.get_mpz_t());
      mpz_addmul(out[i].get_mpz_t(), f[i].get_mpz_t(), b0.get_mpz_t());
    }
    for (auto& c : out) mpz_mod(c.get_mpz_t(), c.get_mpz_t(), n_.get_mpz_t());
    if (out.size() > h_) {
      // One reduction step: subtract lead * m.
      const mpz_class lead = out[h_];
      for (std::size_t i = 0; i < h_; ++i) {
        mpz_submul(out[i].get_mpz_t(), lead.get_mpz_t(), m_[i].get_mpz_t());
        mpz_mod(out[i].get_mpz_t(), out[i].get_mpz_t(), n_.get_mpz_t());
      }
      out.resize(h_);
    }
    trim_coeffs(out);
    return out;
  }

 private:
  Coeffs m_;
  mpz_class n_;
  std::size_t h_;
  Coeffs inv_;
};

}  // namespace

PolyModN::PolyModN(std::vector<mpz_class> coeffs, mpz_class n) : coeffs_(std::move(coeffs)), n_(std::move(n)) {
  if (n_ < 2) throw PreconditionViolated("PolyModN: modulus must be at least 2");
  for (auto& c : coeffs_) {
    if (c < 0 || c >= n_) c = mod(c, n_);
  }
  trim(coeffs_);
}

PolyModN PolyModN::x(const mpz_class& n) { return PolyModN({0, 1}, n); }

PolyModN PolyModN::constant(const mpz_class& c, const mpz_class& n) { return PolyModN({c}, n); }

mpz_class PolyModN::evaluate(const mpz_class& x) const {
  mpz_class acc = 0;
  const mpz_class xr = mod(x, n_);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = (acc * xr + *it) % n_;
  return acc;
}

PolyModN PolyModN::monic() const {
  if (coeffs_.empty()) return *this;
  const mpz_class inv = invert_or_throw(coeffs_.back(), n_);
  std::vector<mpz_class> out(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] = coeffs_[i] * inv % n_;
  return PolyModN(std::move(out), n_);
}

PolyModN operator+(const PolyModN& f, const PolyModN& g) {
  std::vector<mpz_class> out(std::max(f.coeffs_.size(), g.coeffs_.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = f[i] + g[i];
    if (out[i] >= f.n_) out[i] -= f.n_;
  }
  return PolyModN(std::move(out), f.n_);
}

PolyModN operator-(const PolyModN& f, const PolyModN& g) {
  std::vector<mpz_class> out(std::max(f.coeffs_.size(), g.coeffs_.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = f[i] - g[i];
    if (out[i] < 0) out[i] += f.n_;
  }
  return PolyModN(std::move(out), f.n_);
}

PolyModN operator*(const PolyModN& f, const PolyModN& g) {
  if (f.is_zero() || g.is_zero()) return PolyModN({}, f.n_);
  // Schoolbook product; each output coefficient is accumulated exactly and
  // reduced once.
  const std::size_t nf = f.coeffs_.size();
  const std::size_t ng = g.coeffs_.size();
  std::vector<mpz_class> out(nf + ng - 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    mpz_class acc = 0;
    const std::size_t lo = k >= ng - 1 ? k - (ng - 1) : 0;
    const std::size_t hi = std::min(k, nf - 1);
    for (std::size_t i = lo; i <= hi; ++i) {
      mpz_addmul(acc.get_mpz_t(), f.coeffs_[i].get_mpz_t(), g.coeffs_[k - i].get_mpz_t());
    }
    mpz_mod(out[k].get_mpz_t(), acc.get_mpz_t(), f.n_.get_mpz_t());
  }
  return PolyModN(std::move(out), f.n_);
}

DivMod divmod(const PolyModN& f, const PolyModN& g) {
  if (g.is_zero()) throw PreconditionViolated("divmod: division by the zero polynomial");
  const mpz_class& n = f.modulus();
  const int dg = g.degree();
  std::vector<mpz_class> r = f.coeffs();
  if (f.degree() < dg) return {PolyModN({}, n), f};
  const mpz_class lead_inv = g.coeffs().back() == 1 ? mpz_class(1) : invert_or_throw(g.coeffs().back(), n);
  std::vector<mpz_class> q(static_cast<std::size_t>(f.degree() - dg + 1));
  mpz_class coef;
  for (int i = f.degree(); i >= dg; --i) {
    coef = r[static_cast<std::size_t>(i)] % n;
    if (coef == 0) continue;
    if (lead_inv != 1) coef = coef * lead_inv % n;
    q[static_cast<std::size_t>(i - dg)] = coef;
    for (int k = 0; k <= dg; ++k) {
      mpz_submul(r[static_cast<std::size_t>(i - dg + k)].get_mpz_t(), coef.get_mpz_t(),
                 g.coeffs()[static_cast<std::size_t>(k)].get_mpz_t());
    }
    r[static_cast<std::size_t>(i)] = 0;
  }
  r.resize(static_cast<std::size_t>(dg));
  return {PolyModN(std::move(q), n), PolyModN(std::move(r), n)};
}

PolyModN rem(const PolyModN& f, const PolyModN& g) { return divmod(f, g).remainder; }

PolyModN gcd(const PolyModN& f, const PolyModN& g) {
  PolyModN a = f;
  PolyModN b = g;
  while (!b.is_zero()) {
    PolyModN r = rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

PolyModN poly_powmod(const PolyModN& base, const mpz_class& exp, const PolyModN& modpoly) {
  if (modpoly.degree() < 1) throw PreconditionViolated("poly_powmod: modulus polynomial must have degree >= 1");
  if (exp < 0) throw PreconditionViolated("poly_powmod: negative exponent");
  const mpz_class& n = base.modulus();
  const Reducer red(modpoly.monic());
  const Coeffs b = rem(base, modpoly).coeffs();
  const bool linear = b.size() <= 2;
  Coeffs acc = red.reduce({mpz_class(1)});
  for (long bit = static_cast<long>(mpz_sizeinbase(exp.get_mpz_t(), 2)) - 1; bit >= 0; --bit) {
    acc = red.reduce(poly_product(acc, acc, n));
    if (mpz_tstbit(exp.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) {
      if (linear) {
        acc = red.mul_linear(acc, b.empty() ? mpz_class(0) : b[0], b.size() > 1 ? b[1] : mpz_class(0));
      } else {
        acc = red.reduce(poly_product(acc, b, n));
      }
    }
  }
  return PolyModN(std::move(acc), n);
}

Residue find_root(const PolyModN& h_in, std::uint64_t seed, SplitStats* stats) {
  const mpz_class& n = h_in.modulus();
  try {
    const PolyModN h = h_in.monic();
    if (h.degree() < 1) throw NoRoot("find_root: constant polynomial");
    const PolyModN x = PolyModN::x(n);
    PolyModN g = gcd(poly_powmod(x, n, h) - x, h);
    if (g.degree() < 1) throw NoRoot("find_root: no roots modulo N");

    std::mt19937_64 rng(seed);
    const mpz_class half = (n - 1) / 2;
    const PolyModN one = PolyModN::constant(1, n);
    int rounds = 0;
    while (g.degree() > 1) {
      ++rounds;
      const mpz_class a = random_below(rng, n);
      const PolyModN shifted({a, 1}, n);
      const PolyModN split = gcd(poly_powmod(shifted, half, g) - one, g);
      if (split.degree() < 1 || split.degree() >= g.degree()) continue;
      const PolyModN other = divmod(g, split).quotient.monic();
      g = split.degree() <= other.degree() ? split : other;
    }
    if (stats != nullptr) stats->split_rounds += rounds;
    const mpz_class root = mod(-g[0], n);
    if (h.evaluate(root) != 0) throw CompositeDetected(n, 0, "root of the split factor is not a root of H");
    return Residue(root, n);
  } catch (const NonInvertibleElement& e) {
    throw CompositeDetected(n, e.factor(), "polynomial gcd exposed a factor");
  }
}

}  // namespace ecpp

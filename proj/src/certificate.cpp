#include "ecpp/certificate.hpp"

#include <fstream>
#include <sstream>

#include "ecpp/curve.hpp"
#include "ecpp/errors.hpp"
#include "ecpp/modarith.hpp"

namespace ecpp {
namespace {

constexpr const char* kHeader = "ECPP-CERT 1";

std::string str(const mpz_class& x) { return x.get_str(); }

bool parse_integer(const std::string& text, mpz_class& out) {
  if (text.empty()) return false;
  std::size_t i = text[0] == '-' ? 1 : 0;
  if (i == text.size()) return false;
  for (std::size_t k = i; k < text.size(); ++k) {
    if (text[k] < '0' || text[k] > '9') return false;
  }
  return out.set_str(text, 10) == 0;
}

class LineReader {
 public:
  explicit LineReader(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines_.push_back(line);
    }
    while (!lines_.empty() && lines_.back().empty()) lines_.pop_back();
  }

  bool done() const { return pos_ >= lines_.size(); }
  std::size_t line_number() const { return pos_ + 1; }

  const std::string& next() {
    if (done()) throw ParseError("certificate: unexpected end of input");
    return lines_[pos_++];
  }

  mpz_class field(const std::string& label) {
    const std::size_t at = line_number();
    const std::string& line = next();
    const std::string prefix = label + "=";
    mpz_class value;
    if (line.compare(0, prefix.size(), prefix) != 0 || !parse_integer(line.substr(prefix.size()), value)) {
      throw ParseError("certificate: line " + std::to_string(at) + ": expected " + prefix + "<integer>");
    }
    return value;
  }

 private:
  std::vector<std::string> lines_;
  std::size_t pos_ = 0;
};

}  // namespace

CertStep CertStep::leaf(const mpz_class& n) {
  CertStep s;
  s.kind = StepKind::kLeaf;
  s.n = n;
  return s;
}

Verdict verify_step(const CertStep& s) {
  if (s.kind == StepKind::kLeaf) {
    if (s.n >= kLeafBound) return Verdict::fail("leaf N is not below 2^32");
    if (!is_prime_trial_division(s.n)) return Verdict::fail("leaf N is not prime");
    return Verdict::pass();
  }
  const mpz_class& n = s.n;
  if (n < 5) return Verdict::fail("N too small for a curve step");
  if (mpz_even_p(n.get_mpz_t()) || n % 3 == 0) return Verdict::fail("gcd(N, 6) != 1");
  if (s.d <= 0) return Verdict::fail("D must be positive");
  if (4 * n != s.u * s.u + mpz_class(static_cast<long>(s.d)) * s.v * s.v) return Verdict::fail("4N != U^2 + D V^2");
  if (s.m != n + 1 - s.u) return Verdict::fail("m != N + 1 - U");
  if (s.c < 1 || s.nprime < 2) return Verdict::fail("cofactor or N' out of range");
  if (s.m != s.c * s.nprime) return Verdict::fail("m != c * N'");
  if (!exceeds_quartic_bound(n, s.nprime)) return Verdict::fail("N' <= (N^(1/4) + 1)^2");
  for (const mpz_class* v : {&s.a, &s.b, &s.x, &s.y}) {
    if (*v < 0 || *v >= n) return Verdict::fail("curve data not reduced modulo N");
  }
  mpz_class g;
  const mpz_class disc = mod(4 * s.a * s.a * s.a + 27 * s.b * s.b, n);
  mpz_gcd(g.get_mpz_t(), disc.get_mpz_t(), n.get_mpz_t());
  if (g != 1) return Verdict::fail("gcd(4a^3 + 27b^2, N) != 1");
  const CurveModN e(s.a, s.b, n);
  const ProjPoint p = ProjPoint::affine(s.x, s.y);
  if (!on_curve(p, e)) return Verdict::fail("point is not on the curve");

  PseudoResult q = scalar_mul(s.c, p, e);
  if (auto* f = std::get_if<Factor>(&q)) return Verdict::fail("[c]P exposed the factor " + str(f->d));
  const ProjPoint qp = std::get<ProjPoint>(q);
  if (qp.is_infinity()) return Verdict::fail("[c]P = O");
  PseudoResult r = scalar_mul(s.nprime, qp, e);
  if (auto* f = std::get_if<Factor>(&r)) return Verdict::fail("[N'][c]P exposed the factor " + str(f->d));
  if (!std::get<ProjPoint>(r).is_infinity()) return Verdict::fail("[N'][c]P != O");
  return Verdict::pass();
}

Verdict verify_chain(const Certificate& cert) {
  if (cert.steps.empty()) return Verdict::fail("empty certificate");
  if (cert.steps.back().kind != StepKind::kLeaf) return Verdict::fail("chain does not end in a leaf");
  for (std::size_t i = 0; i < cert.steps.size(); ++i) {
    const CertStep& s = cert.steps[i];
    if (i + 1 < cert.steps.size()) {
      if (s.kind != StepKind::kEcpp) return Verdict::fail("leaf before the end of the chain");
      if (s.nprime != cert.steps[i + 1].n) {
        return Verdict::fail("step " + std::to_string(i) + ": N' does not match the next step's N");
      }
    }
    Verdict v = verify_step(s);
    if (!v) return Verdict::fail("step " + std::to_string(i) + ": " + v.reason);
  }
  return Verdict::pass();
}

std::string serialize(const Certificate& cert) {
  std::ostringstream out;
  out << kHeader << '\n';
  for (const CertStep& s : cert.steps) {
    if (s.kind == StepKind::kLeaf) {
      out << "LEAF\nN=" << str(s.n) << '\n';
      continue;
    }
    out << "STEP\n"
        << "N=" << str(s.n) << '\n'
        << "D=" << s.d << '\n'
        << "U=" << str(s.u) << '\n'
        << "V=" << str(s.v) << '\n'
        << "m=" << str(s.m) << '\n'
        << "c=" << str(s.c) << '\n'
        << "NP=" << str(s.nprime) << '\n'
        << "a=" << str(s.a) << '\n'
        << "b=" << str(s.b) << '\n'
        << "x=" << str(s.x) << '\n'
        << "y=" << str(s.y) << '\n';
  }
  return out.str();
}

Certificate parse_certificate(const std::string& text) {
  LineReader in(text);
  if (in.done()) throw ParseError("certificate: empty input");
  if (in.next() != kHeader) throw ParseError("certificate: missing header line");
  Certificate cert;
  while (!in.done()) {
    const std::size_t at = in.line_number();
    const std::string& tag = in.next();
    if (tag == "LEAF") {
      cert.steps.push_back(CertStep::leaf(in.field("N")));
    } else if (tag == "STEP") {
      CertStep s;
      s.n = in.field("N");
      const mpz_class d = in.field("D");
      if (!d.fits_slong_p()) throw ParseError("certificate: D out of range");
      s.d = d.get_si();
      s.u = in.field("U");
      s.v = in.field("V");
      s.m = in.field("m");
      s.c = in.field("c");
      s.nprime = in.field("NP");
      s.a = in.field("a");
      s.b = in.field("b");
      s.x = in.field("x");
      s.y = in.field("y");
      cert.steps.push_back(std::move(s));
    } else {
      throw ParseError("certificate: line " + std::to_string(at) + ": expected STEP or LEAF");
    }
  }
  if (cert.steps.empty()) throw ParseError("certificate: no steps");
  return cert;
}

Certificate read_certificate_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("certificate: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_certificate(buf.str());
}

void write_certificate_file(const Certificate& cert, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw EcppError("cannot write " + path);
  out << serialize(cert);
  if (!out) throw EcppError("write failed for " + path);
}

}  // namespace ecpp

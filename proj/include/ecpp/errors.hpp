#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace ecpp {

/// Base class of every error raised by the library.
class EcppError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arithmetic evidence that a number is composite. `factor()` is a nontrivial
/// divisor when one was exposed, otherwise zero (e.g. a failed Miller-Rabin
/// round).
class CompositeDetected : public EcppError {
 public:
  CompositeDetected(mpz_class n, mpz_class factor, const std::string& witness);

  const mpz_class& n() const { return n_; }
  const mpz_class& factor() const { return factor_; }
  const std::string& witness() const { return witness_; }

 private:
  mpz_class n_;
  mpz_class factor_;
  std::string witness_;
};

class NonResidue : public EcppError {
 public:
  using EcppError::EcppError;
};

/// Tonelli-Shanks broke one of its invariants; the modulus is not prime.
class AlgorithmFailure : public EcppError {
 public:
  using EcppError::EcppError;
};

class PreconditionViolated : public EcppError {
 public:
  using EcppError::EcppError;
};

class NoRoot : public EcppError {
 public:
  using EcppError::EcppError;
};

class NoPointFound : public EcppError {
 public:
  using EcppError::EcppError;
};

class SingularCurve : public EcppError {
 public:
  SingularCurve(mpz_class divisor, const std::string& what)
      : EcppError(what), divisor_(std::move(divisor)) {}
  /// gcd(4a^3 + 27b^2, N).
  const mpz_class& divisor() const { return divisor_; }

 private:
  mpz_class divisor_;
};

class FullySmooth : public EcppError {
 public:
  using EcppError::EcppError;
};

class PrecisionExhausted : public EcppError {
 public:
  using EcppError::EcppError;
};

class RoundingUncertain : public EcppError {
 public:
  using EcppError::EcppError;
};

class ResourceExhausted : public EcppError {
 public:
  using EcppError::EcppError;
};

class ParseError : public EcppError {
 public:
  using EcppError::EcppError;
};

}  // namespace ecpp

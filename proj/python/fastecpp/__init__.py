"""Elliptic curve primality proving: certificates for large primes."""

from ._core import (
    Certificate,
    CompositeDetected,
    EcppError,
    ParseError,
    ProverConfig,
    ResourceExhausted,
    class_number,
    hilbert_class_poly,
    is_probable_prime,
    parse_certificate,
    prove,
    reduced_forms,
    solve_4n,
    sqrt_mod,
    verify,
)

__all__ = [
    "Certificate",
    "CompositeDetected",
    "EcppError",
    "ParseError",
    "ProverConfig",
    "ResourceExhausted",
    "class_number",
    "hilbert_class_poly",
    "is_probable_prime",
    "parse_certificate",
    "prove",
    "reduced_forms",
    "solve_4n",
    "sqrt_mod",
    "verify",
]

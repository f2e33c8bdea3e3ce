#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <gmpxx.h>

#include <string>

#include "ecpp/certificate.hpp"
#include "ecpp/classpoly.hpp"
#include "ecpp/errors.hpp"
#include "ecpp/modarith.hpp"
#include "ecpp/prover.hpp"
#include "ecpp/quadratics.hpp"

namespace py = pybind11;

// Python int <-> mpz_class through base-16 strings.
namespace pybind11::detail {
template <>
struct type_caster<mpz_class> {
  PYBIND11_TYPE_CASTER(mpz_class, const_name("int"));

  bool load(handle src, bool) {
    if (!src || !PyLong_Check(src.ptr())) return false;
    object text = reinterpret_steal<object>(PyNumber_ToBase(src.ptr(), 16));
    if (!text) {
      PyErr_Clear();
      return false;
    }
    std::string s = text.cast<std::string>();
    bool negative = !s.empty() && s[0] == '-';
    s.erase(0, negative ? 3 : 2);  // strip "0x" / "-0x"
    if (value.set_str(s, 16) != 0) return false;
    if (negative) value = -value;
    return true;
  }

  static handle cast(const mpz_class& v, return_value_policy, handle) {
    return PyLong_FromString(v.get_str(16).c_str(), nullptr, 16);
  }
};
}  // namespace pybind11::detail

namespace {

py::dict step_dict(const ecpp::CertStep& s) {
  py::dict d;
  d["kind"] = s.kind == ecpp::StepKind::kLeaf ? "leaf" : "ecpp";
  d["N"] = s.n;
  if (s.kind == ecpp::StepKind::kLeaf) return d;
  d["D"] = s.d;
  d["U"] = s.u;
  d["V"] = s.v;
  d["m"] = s.m;
  d["c"] = s.c;
  d["NP"] = s.nprime;
  d["a"] = s.a;
  d["b"] = s.b;
  d["x"] = s.x;
  d["y"] = s.y;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Elliptic curve primality proving with certificate verification";

  static py::exception<ecpp::EcppError> base_error(m, "EcppError");
  static py::exception<ecpp::CompositeDetected> composite(m, "CompositeDetected", base_error.ptr());
  static py::exception<ecpp::ParseError> parse_error(m, "ParseError", base_error.ptr());
  static py::exception<ecpp::ResourceExhausted> exhausted(m, "ResourceExhausted", base_error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ecpp::CompositeDetected& e) {
      py::object err = py::reinterpret_borrow<py::object>(composite.ptr())(e.what());
      err.attr("factor") = py::cast(e.factor());
      PyErr_SetObject(composite.ptr(), err.ptr());
    } catch (const ecpp::ParseError& e) {
      parse_error(e.what());
    } catch (const ecpp::ResourceExhausted& e) {
      exhausted(e.what());
    } catch (const ecpp::PreconditionViolated& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const ecpp::EcppError& e) {
      base_error(e.what());
    }
  });

  py::class_<ecpp::ProverConfig>(m, "ProverConfig")
      .def(py::init<>())
      .def_readwrite("d_max", &ecpp::ProverConfig::d_max)
      .def_readwrite("h_max", &ecpp::ProverConfig::h_max)
      .def_readwrite("pool_size_initial", &ecpp::ProverConfig::pool_size_initial)
      .def_readwrite("smooth_bound", &ecpp::ProverConfig::smooth_bound)
      .def_readwrite("delta", &ecpp::ProverConfig::delta)
      .def_readwrite("max_subset_size", &ecpp::ProverConfig::max_subset_size)
      .def_readwrite("prp_rounds", &ecpp::ProverConfig::prp_rounds)
      .def_readwrite("rng_seed", &ecpp::ProverConfig::rng_seed)
      .def_readwrite("strict_2n", &ecpp::ProverConfig::strict_2n)
      .def_readwrite("threads", &ecpp::ProverConfig::threads);

  py::class_<ecpp::Certificate>(m, "Certificate")
      .def_property_readonly("n", [](const ecpp::Certificate& c) { return c.n(); })
      .def_property_readonly("steps",
                             [](const ecpp::Certificate& c) {
                               py::list out;
                               for (const auto& s : c.steps) out.append(step_dict(s));
                               return out;
                             })
      .def("__len__", [](const ecpp::Certificate& c) { return c.steps.size(); })
      .def("serialize", &ecpp::serialize)
      .def("__eq__", [](const ecpp::Certificate& a, const ecpp::Certificate& b) { return a == b; });

  m.def(
      "prove",
      [](const mpz_class& n, const ecpp::ProverConfig& config) {
        py::gil_scoped_release release;
        return ecpp::prove(n, config);
      },
      py::arg("n"), py::arg("config") = ecpp::ProverConfig{},
      "Certificate for n; raises CompositeDetected for composite n.");
  m.def(
      "verify",
      [](const ecpp::Certificate& c) {
        const ecpp::Verdict v = ecpp::verify_chain(c);
        return py::make_tuple(v.ok, v.reason);
      },
      py::arg("certificate"), "(ok, reason) for a certificate chain.");
  m.def("parse_certificate", &ecpp::parse_certificate, py::arg("text"));

  m.def("is_probable_prime", [](const mpz_class& n, int rounds) { return ecpp::is_probable_prime(n, rounds); },
        py::arg("n"), py::arg("rounds") = ecpp::kDefaultPrpRounds);
  m.def("sqrt_mod", [](const mpz_class& a, const mpz_class& p) { return ecpp::sqrt_mod(a, p).value; },
        py::arg("a"), py::arg("p"));
  m.def("class_number", &ecpp::class_number, py::arg("d"));
  m.def(
      "reduced_forms",
      [](std::int64_t d) {
        std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>> out;
        for (const auto& f : ecpp::reduced_forms(d)) out.emplace_back(f.a, f.b, f.c);
        return out;
      },
      py::arg("d"));
  m.def(
      "solve_4n",
      [](std::int64_t d, const mpz_class& n) -> py::object {
        const auto s = ecpp::solve_4n(d, n);
        if (!s) return py::none();
        return py::make_tuple(s->x, s->y);
      },
      py::arg("d"), py::arg("n"), "(U, V) with U^2 + D V^2 = 4N, or None.");
  m.def(
      "hilbert_class_poly", [](std::int64_t d) { return ecpp::hilbert_class_poly(d).coeffs; }, py::arg("d"),
      "Coefficients of H_D from the constant term up.");
}

// pybind11 bindings for the varlex core: spaces, norms, stable moments,
// extension verdicts and MZ-constant estimation.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "varlex/estimator.hpp"
#include "varlex/norms.hpp"
#include "varlex/oracle.hpp"
#include "varlex/serde.hpp"
#include "varlex/stable.hpp"

namespace py = pybind11;
using namespace varlex;

namespace {

Exponent exponent_from_object(const py::object& obj) {
  if (py::isinstance<py::str>(obj)) {
    const std::string s = obj.cast<std::string>();
    if (s == "inf") return Exponent::infinity();
    throw validation_error("exponent string must be \"inf\"");
  }
  return Exponent(obj.cast<double>());
}

py::object exponent_to_object(const Exponent& e) {
  if (e.is_infinite()) return py::str("inf");
  return py::float_(e.value());
}

std::vector<SimpleFunction> family_from_rows(
    const std::vector<std::vector<double>>& rows) {
  std::vector<SimpleFunction> F;
  F.reserve(rows.size());
  for (const auto& r : rows) F.emplace_back(r);
  return F;
}

py::dict verdict_dict(const Verdict& v) {
  py::dict d;
  d["status"] = status_name(v.status);
  d["rule"] = v.rule;
  py::dict I;
  I["lo"] = exponent_to_object(v.interval.lo);
  I["hi"] = exponent_to_object(v.interval.hi);
  I["lo_closed"] = v.interval.lo_closed;
  I["hi_closed"] = v.interval.hi_closed;
  d["interval"] = I;
  if (v.bound)
    d["bound"] = *v.bound;
  else
    d["bound"] = py::none();
  return d;
}

OperatorMatrix make_operator(const std::vector<std::vector<double>>& rows,
                             const SpaceSpec& source, const SpaceSpec& target) {
  OperatorMatrix T;
  T.entries = Matrix(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != T.entries.cols)
      throw validation_error("operator rows have uneven lengths");
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      T.entries.at(i, j) = rows[i][j];
  }
  T.source = source;
  T.target = target;
  T.validate();
  return T;
}

}  // namespace

PYBIND11_MODULE(_varlex, m) {
  m.doc() = "Norms, extension verdicts and Marcinkiewicz-Zygmund constant "
            "estimation on variable-exponent Lebesgue spaces";

  py::register_exception<validation_error>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<domain_error>(m, "DomainError", PyExc_ValueError);

  py::class_<SpaceSpec>(m, "Space")
      .def_static("from_json", &space_from_string, py::arg("text"))
      .def("to_json", &space_to_string)
      .def("cell_count", &SpaceSpec::cell_count)
      .def("finitely_atomic", &SpaceSpec::finitely_atomic)
      .def("non_atomic", &SpaceSpec::non_atomic)
      .def("__repr__", [](const SpaceSpec& s) {
        return "Space(" + space_to_string(s) + ")";
      });

  m.def("conjugate", [](const py::object& e) {
    return exponent_to_object(conjugate(exponent_from_object(e)));
  });

  m.def("summarize", [](const SpaceSpec& s) {
    const ExponentSummary sum = summarize(s);
    py::dict d;
    d["ess_inf"] = exponent_to_object(sum.ess_inf);
    d["ess_sup"] = exponent_to_object(sum.ess_sup);
    d["tilde_defined"] = sum.tilde_defined;
    if (sum.tilde_defined) {
      d["tilde_inf"] = exponent_to_object(sum.tilde_inf);
      d["tilde_sup"] = exponent_to_object(sum.tilde_sup);
    }
    return d;
  });

  m.def("conjugate_space", &conjugate_space);
  m.def(
      "truncate",
      [](const SpaceSpec& s, std::size_t n) { return varlex::truncate(s, n); },
      py::arg("space"), py::arg("n"));

  m.def("interval_ipq", [](const py::object& p, const py::object& q) {
    const IntervalIpq I = interval_ipq(exponent_from_object(p), exponent_from_object(q));
    return py::make_tuple(exponent_to_object(I.lo), exponent_to_object(I.hi),
                          I.lo_closed, I.hi_closed);
  });

  m.def("modular", [](const SpaceSpec& s, const std::vector<double>& f) {
    return modular(s, SimpleFunction(f));
  });

  m.def(
      "luxemburg_norm",
      [](const SpaceSpec& s, const std::vector<double>& f) {
        const NormResult r = luxemburg_norm(s, SimpleFunction(f));
        return py::make_tuple(r.value, r.residual, r.iterations);
      },
      py::arg("space"), py::arg("f"));

  m.def(
      "associate_norm",
      [](const SpaceSpec& s, const std::vector<double>& f, std::uint64_t seed) {
        AssocOptions o;
        o.seed = seed;
        return associate_norm_detailed(s, SimpleFunction(f), o).value;
      },
      py::arg("space"), py::arg("f"), py::arg("seed") = 1);

  m.def(
      "vector_norm",
      [](const SpaceSpec& s, const std::vector<std::vector<double>>& rows,
         const py::object& r) {
        return vector_norm(s, family_from_rows(rows), exponent_from_object(r));
      },
      py::arg("space"), py::arg("F"), py::arg("r"));

  m.def(
      "holder_check",
      [](const SpaceSpec& s, const std::vector<double>& f,
         const std::vector<double>& g) {
        return holder_check(s, SimpleFunction(f), SimpleFunction(g));
      },
      py::arg("space"), py::arg("f"), py::arg("g"));

  m.def("log_gamma", &log_gamma, py::arg("x"));
  m.def(
      "moment_c",
      [](const py::object& r, double p) {
        return moment_c(exponent_from_object(r), p);
      },
      py::arg("r"), py::arg("p"));
  m.def("sample_stable", &sample_stable, py::arg("r"), py::arg("n"), py::arg("seed"));
  m.def(
      "mc_ratio_check",
      [](double r, double p, double q, std::size_t samples, std::uint64_t seed) {
        const McRatio res = mc_ratio_check(r, p, q, samples, seed);
        return py::make_tuple(res.mc_ratio, res.formula_ratio);
      },
      py::arg("r"), py::arg("p"), py::arg("q"), py::arg("samples"), py::arg("seed"));
  m.def(
      "mc_integration_lemma",
      [](double r, double s, const std::vector<double>& a,
         const std::vector<double>& b, std::size_t samples, std::uint64_t seed) {
        const McLemmaRatios res = mc_integration_lemma(r, s, a, b, samples, seed);
        return py::make_tuple(res.lhs_ratio, res.rhs_ratio);
      },
      py::arg("r"), py::arg("s"), py::arg("a"), py::arg("b"), py::arg("samples"),
      py::arg("seed"));

  m.def(
      "decide_constant",
      [](const py::object& q, const py::object& p, const py::object& r) {
        return verdict_dict(decide_constant(exponent_from_object(q),
                                            exponent_from_object(p),
                                            exponent_from_object(r)));
      },
      py::arg("q"), py::arg("p"), py::arg("r"));
  m.def(
      "decide",
      [](const SpaceSpec& source, const SpaceSpec& target, const py::object& r) {
        return verdict_dict(decide(source, target, exponent_from_object(r)));
      },
      py::arg("source"), py::arg("target"), py::arg("r"));

  m.def(
      "op_norm_lower",
      [](const std::vector<std::vector<double>>& rows, const SpaceSpec& source,
         const SpaceSpec& target, int restarts, int iters, std::uint64_t seed) {
        return op_norm_lower(make_operator(rows, source, target), restarts, iters,
                             seed);
      },
      py::arg("matrix"), py::arg("source"), py::arg("target"),
      py::arg("restarts") = 8, py::arg("iters") = 60, py::arg("seed") = 1);
  m.def(
      "op_norm_upper_certified",
      [](const std::vector<std::vector<double>>& rows, const SpaceSpec& source,
         const SpaceSpec& target) {
        return op_norm_upper_certified(make_operator(rows, source, target));
      },
      py::arg("matrix"), py::arg("source"), py::arg("target"));
  m.def(
      "mz_certified_ratio",
      [](const std::vector<std::vector<double>>& rows, const SpaceSpec& source,
         const SpaceSpec& target, const std::vector<std::vector<double>>& F,
         const py::object& r) {
        return mz_certified_ratio(make_operator(rows, source, target),
                                  family_from_rows(F), exponent_from_object(r));
      },
      py::arg("matrix"), py::arg("source"), py::arg("target"), py::arg("F"),
      py::arg("r"));

  m.def(
      "estimate_k_lower",
      [](const SpaceSpec& source, const SpaceSpec& target, const py::object& r,
         std::size_t N, std::size_t budget, std::uint64_t seed) {
        const MzWitness w =
            estimate_k_lower(source, target, exponent_from_object(r), N, budget, seed);
        py::dict d;
        d["certified"] = w.certified_lower_bound;
        d["optimistic"] = w.optimistic_ratio;
        return d;
      },
      py::arg("source"), py::arg("target"), py::arg("r"), py::arg("N") = 4,
      py::arg("budget") = 50, py::arg("seed") = 1);

  m.def(
      "blowup_experiment",
      [](double q0, double p0, double scale, const std::vector<std::size_t>& ns,
         std::size_t budget, std::uint64_t seed) {
        const auto rows = blowup_experiment(q0, p0, scale, ns, budget, seed);
        py::list out;
        for (const BlowupRow& row : rows) {
          py::dict d;
          d["n"] = row.n;
          d["certified"] = row.certified;
          d["optimistic"] = row.optimistic;
          d["predicted"] = row.predicted;
          out.append(d);
        }
        return out;
      },
      py::arg("q0"), py::arg("p0"), py::arg("scale"), py::arg("n_list"),
      py::arg("budget"), py::arg("seed"));
}

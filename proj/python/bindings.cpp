#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "flexdist/error.hpp"
#include "flexdist/infer.hpp"
#include "flexdist/measures.hpp"
#include "flexdist/sfa.hpp"

namespace py = pybind11;
using namespace flexdist;

namespace {

SymmetricBase base_from(const std::string& name, std::optional<double> nu) {
  if (name == "normal") return SymmetricBase::normal();
  if (name == "logistic") return SymmetricBase::logistic();
  if (name == "t") {
    if (!nu) throw InvalidParameter("base 't' needs nu");
    return SymmetricBase::student_t(*nu);
  }
  throw InvalidParameter("unknown base '" + name + "'");
}

Family family_from(const std::string& name) {
  const auto f = parse_family(name);
  if (!f) throw InvalidParameter("unknown family '" + name + "'");
  return *f;
}

py::dict fit_dict(const FitResult& r) {
  py::dict params;
  for (const auto& [k, v] : r.parameters()) params[py::str(k)] = v;
  py::dict d;
  d["family"] = std::string(family_name(r.family));
  d["parameters"] = params;
  d["loglik"] = r.loglik;
  d["aic"] = r.aic;
  d["bic"] = r.bic;
  d["n"] = r.n;
  d["free_parameters"] = r.free_parameters;
  d["converged"] = r.converged;
  d["iterations"] = r.iterations;
  d["boundary_flag"] = r.boundary_flag;
  return d;
}

FitConfig config_from(std::uint64_t seed, int restarts) {
  FitConfig c;
  c.seed = seed;
  c.restarts = restarts;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Flexible univariate distributions: densities, sampling, fitting and tests.";

  py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_RuntimeError);
  py::register_exception<Unsupported>(m, "Unsupported", PyExc_NotImplementedError);

  py::class_<Distribution>(m, "Distribution")
      .def("pdf", &Distribution::pdf, py::arg("x"))
      .def("log_pdf", &Distribution::log_pdf, py::arg("x"))
      .def("cdf", &Distribution::cdf, py::arg("x"))
      .def("quantile", &Distribution::quantile, py::arg("p"))
      .def("mode", &Distribution::mode)
      .def("has_density", &Distribution::has_density)
      .def("tail_index", &Distribution::tail_index)
      .def(
          "sample",
          [](const Distribution& d, std::size_t n, std::uint64_t seed) {
            Rng rng(seed);
            return d.sample(n, rng);
          },
          py::arg("n"), py::arg("seed") = 20140101)
      .def("__repr__", &Distribution::describe);

  m.def(
      "normal", [](double mu, double sigma) { return Distribution(SymmetricParams{SymmetricBase::normal(), LocationScale(mu, sigma)}); },
      py::arg("mu") = 0.0, py::arg("sigma") = 1.0);
  m.def(
      "student_t",
      [](double nu, double mu, double sigma) {
        return Distribution(SymmetricParams{SymmetricBase::student_t(nu), LocationScale(mu, sigma)});
      },
      py::arg("nu"), py::arg("mu") = 0.0, py::arg("sigma") = 1.0);
  m.def(
      "logistic",
      [](double mu, double sigma) { return Distribution(SymmetricParams{SymmetricBase::logistic(), LocationScale(mu, sigma)}); },
      py::arg("mu") = 0.0, py::arg("sigma") = 1.0);
  m.def(
      "skew_normal", [](double delta, double mu, double sigma) { return Distribution(SkewSymParams::skew_normal(mu, sigma, delta)); },
      py::arg("delta"), py::arg("mu") = 0.0, py::arg("sigma") = 1.0);
  m.def(
      "skew_t",
      [](double nu, double delta, double mu, double sigma) { return Distribution(SkewSymParams::skew_t(mu, sigma, nu, delta)); },
      py::arg("nu"), py::arg("delta"), py::arg("mu") = 0.0, py::arg("sigma") = 1.0);
  m.def(
      "sas",
      [](double delta, double eta, double mu, double sigma, const std::string& base, std::optional<double> nu) {
        return Distribution(TransformParams{base_from(base, nu), LocationScale(mu, sigma), Transformation::sas(delta, eta)});
      },
      py::arg("delta"), py::arg("eta"), py::arg("mu") = 0.0, py::arg("sigma") = 1.0, py::arg("base") = "normal",
      py::arg("nu") = py::none());
  m.def(
      "gh",
      [](double g, double h, double mu, double sigma, const std::string& base, std::optional<double> nu) {
        return Distribution(TransformParams{base_from(base, nu), LocationScale(mu, sigma), Transformation::gh(g, h)});
      },
      py::arg("g"), py::arg("h"), py::arg("mu") = 0.0, py::arg("sigma") = 1.0, py::arg("base") = "normal",
      py::arg("nu") = py::none());
  m.def(
      "k_transform",
      [](double eta, double mu, double sigma, const std::string& base, std::optional<double> nu) {
        return Distribution(TransformParams{base_from(base, nu), LocationScale(mu, sigma), Transformation::k(eta)});
      },
      py::arg("eta"), py::arg("mu") = 0.0, py::arg("sigma") = 1.0, py::arg("base") = "normal", py::arg("nu") = py::none());
  m.def(
      "two_piece",
      [](const std::string& scaling, double delta, double mu, double sigma, const std::string& base, std::optional<double> nu) {
        if (scaling != "isf" && scaling != "epsilon") throw InvalidParameter("scaling must be 'isf' or 'epsilon'");
        const ScalingScheme scheme = scaling == "isf" ? ScalingScheme::isf(delta) : ScalingScheme::epsilon(delta);
        return Distribution(TwoPieceParams{base_from(base, nu), LocationScale(mu, sigma), scheme});
      },
      py::arg("scaling"), py::arg("delta"), py::arg("mu") = 0.0, py::arg("sigma") = 1.0, py::arg("base") = "normal",
      py::arg("nu") = py::none());
  m.def(
      "scale_transformed",
      [](const std::string& transform, double c, double mu, double sigma, const std::string& base, std::optional<double> nu) {
        ScaleTransform st = ScaleTransform::half();
        if (transform == "hyperbolic") {
          st = ScaleTransform::hyperbolic(c);
        } else if (transform == "arctan") {
          st = ScaleTransform::arctan(c);
        } else if (transform != "half") {
          throw InvalidParameter("transform must be 'half', 'hyperbolic' or 'arctan'");
        }
        return Distribution(ScaleTransformParams{base_from(base, nu), LocationScale(mu, sigma), st});
      },
      py::arg("transform") = "half", py::arg("c") = 0.0, py::arg("mu") = 0.0, py::arg("sigma") = 1.0,
      py::arg("base") = "normal", py::arg("nu") = py::none());

  m.def("ag_skewness", &ag_skewness, py::arg("dist"));
  m.def("quantile_kurtosis", &quantile_kurtosis, py::arg("dist"));
  m.def(
      "moment",
      [](const Distribution& d, int r) {
        const MomentResult mr = moment(d, r);
        return mr.finite ? mr.value : kInfinity;
      },
      py::arg("dist"), py::arg("r"));

  m.def("log_likelihood", &log_likelihood, py::arg("dist"), py::arg("data"));
  m.def("families", [] {
    std::vector<std::string> out;
    for (Family f : likelihood_families()) out.emplace_back(family_name(f));
    return out;
  });
  m.def(
      "fit",
      [](const std::string& family, const std::vector<double>& data, std::uint64_t seed, int restarts) {
        return fit_dict(fit_mle(family_from(family), data, config_from(seed, restarts)));
      },
      py::arg("family"), py::arg("data"), py::arg("seed") = 20140101, py::arg("restarts") = 5);
  m.def(
      "fit_penalized_skew_normal",
      [](const std::vector<double>& data, std::uint64_t seed) {
        return fit_dict(fit_mle_penalized_skew_normal(data, config_from(seed, 5)));
      },
      py::arg("data"), py::arg("seed") = 20140101);
  m.def(
      "fit_gh_quantile",
      [](const std::vector<double>& data) {
        const GhFit g = fit_gh_quantile(data);
        py::dict d;
        d["g"] = g.g;
        d["h"] = g.h;
        d["mu"] = g.mu;
        d["sigma"] = g.sigma;
        return d;
      },
      py::arg("data"));
  m.def(
      "lr_test",
      [](const std::vector<double>& data, const std::string& null_family, const std::string& alt_family, int reps,
         std::uint64_t seed, unsigned threads) {
        LrTestOptions opt;
        opt.replicates = reps;
        opt.seed = seed;
        opt.threads = threads;
        opt.fit.seed = seed;
        TestResult r;
        {
          py::gil_scoped_release release;
          r = lr_test(data, family_from(null_family), family_from(alt_family), opt);
        }
        py::dict d;
        d["statistic"] = r.statistic;
        d["p_value"] = r.p_value;
        d["replicates"] = r.replicates;
        d["null"] = std::string(family_name(r.null_family));
        d["alt"] = std::string(family_name(r.alt_family));
        return d;
      },
      py::arg("data"), py::arg("null"), py::arg("alt"), py::arg("reps") = 500, py::arg("seed") = 20140101,
      py::arg("threads") = 0);
  m.def(
      "sfa_demo",
      [](std::size_t n, double sigma_v, double sigma_u, std::uint64_t seed) {
        Rng rng(seed);
        FitConfig cfg;
        cfg.seed = seed;
        const SfaDemoResult r = sfa_composite_error_demo(n, sigma_v, sigma_u, rng, cfg);
        py::dict d;
        d["sample"] = r.sample;
        d["normal"] = fit_dict(r.normal_fit);
        d["skew_normal"] = fit_dict(r.skew_normal_fit);
        d["lr_statistic"] = r.lr_statistic;
        return d;
      },
      py::arg("n"), py::arg("sigma_v"), py::arg("sigma_u"), py::arg("seed") = 20140101);
}

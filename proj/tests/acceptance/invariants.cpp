// Property checks for every module; run by criterion 9 of the acceptance binary.
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "flexdist/infer.hpp"
#include "flexdist/measures.hpp"
#include "flexdist/numerics.hpp"
#include "stats.hpp"

using namespace flexdist;
using flexdist::testing::ks_distance;
namespace fs = std::filesystem;

namespace {

std::vector<SymmetricBase> bases() {
  return {SymmetricBase::normal(), SymmetricBase::student_t(1.0), SymmetricBase::student_t(2.5),
          SymmetricBase::student_t(30.0), SymmetricBase::logistic()};
}

std::vector<double> grid41() { return flexdist::testing::grid(-8.0, 8.0, 41); }

std::vector<double> draw(const Distribution& d, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return d.sample(n, rng);
}

double shape_of(const FitResult& r, const std::string& name) {
  for (const auto& [k, v] : r.parameters()) {
    if (k == name) return v;
  }
  return std::nan("");
}

struct CliOutcome {
  int code;
  std::string out;
};

CliOutcome cli_run(std::vector<std::string> args) {
  args.insert(args.begin(), "flexdist");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str()};
}

}  // namespace

TEST_SUITE("invariants.base") {
  TEST_CASE("base densities are exactly symmetric") {
    for (const auto& b : bases()) {
      for (double x : grid41()) CHECK(b.pdf(x) == b.pdf(-x));
    }
  }

  TEST_CASE("quantile inverts cdf") {
    const std::vector<double> ps{0.001, 0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 0.999};
    for (const auto& b : bases()) {
      CHECK(b.cdf(0.0) == 0.5);
      for (double p : ps) CHECK(std::abs(b.cdf(b.quantile(p)) - p) < 1e-9);
    }
  }

  TEST_CASE("base samplers agree with cdfs") {
    const double band = 1.95 / std::sqrt(1e5) * 1.5;
    std::uint64_t seed = 100;
    for (const auto& b : bases()) {
      Rng rng(seed++);
      std::vector<double> xs(100000);
      for (double& x : xs) x = b.sample(rng);
      CHECK(ks_distance(xs, [&](double x) { return b.cdf(x); }) < band);
    }
  }

  TEST_CASE("univariate t density from the k-variate form integrates to 1") {
    const MatrixParams one(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1));
    for (double nu : {1.0, 2.0, 5.0}) {
      const double mass = integrate_real_line([&](double x) { return student_pdf_k(std::span(&x, 1), one, nu); });
      CHECK(std::abs(mass - 1.0) < 1e-6);
    }
  }
}

TEST_SUITE("invariants.skewsym") {
  std::vector<SkewingFunction> skewings() {
    return {SkewingFunction::cdf_linear(SymmetricBase::normal()), SkewingFunction::cdf_linear(SymmetricBase::logistic()),
            SkewingFunction::cdf_linear(SymmetricBase::student_t(4.0)), SkewingFunction::student_modulated(3.0)};
  }

  TEST_CASE("every base, skewing function and skewness integrates to 1") {
    for (const auto& b : {SymmetricBase::normal(), SymmetricBase::student_t(3.0), SymmetricBase::logistic()}) {
      for (const auto& pi : skewings()) {
        for (double d : {-3.0, 0.0, 1.5, 5.0}) {
          const SkewSymParams p{b, LocationScale(0.7, 1.8), d, pi};
          const double mass = integrate_real_line([&](double x) { return skew_symmetric_pdf(x, p); }, 0.7, 1e-10);
          CHECK(std::abs(mass - 1.0) < 1e-6);
        }
      }
    }
  }

  TEST_CASE("reflection identity of the skewing function") {
    for (const auto& b : {SymmetricBase::normal(), SymmetricBase::student_t(3.0), SymmetricBase::logistic()}) {
      for (const auto& pi : skewings()) {
        const SkewSymParams p{b, LocationScale(0.7, 1.8), 2.5, pi};
        for (double x : grid41()) {
          const double sym = b.pdf(p.loc.standardize(x)) / p.loc.sigma();
          CHECK(std::abs(skew_symmetric_pdf(x, p) + skew_symmetric_pdf(2 * 0.7 - x, p) - 2 * sym) < 1e-12);
        }
      }
    }
  }

  TEST_CASE("distance to the centre ignores the skewing") {
    const auto half_normal = [](double x) { return x <= 0 ? 0.0 : 2.0 * SymmetricBase::normal().cdf(x) - 1.0; };
    for (double d : {0.0, 1.0, 5.0}) {
      auto xs = draw(SkewSymParams::skew_normal(1.0, 1.0, d), 100000, 500 + static_cast<std::uint64_t>(d));
      for (double& x : xs) x = std::abs(x - 1.0);
      CHECK(ks_distance(xs, half_normal) < flexdist::testing::kKs1 / std::sqrt(1e5));
    }
  }

  TEST_CASE("zero skewness reproduces the base exactly") {
    for (const auto& b : bases()) {
      for (const auto& pi : skewings()) {
        const SkewSymParams p{b, LocationScale(-0.5, 2.0), 0.0, pi};
        for (double x : grid41()) CHECK(skew_symmetric_pdf(x, p) == b.pdf(p.loc.standardize(x)) / 2.0);
      }
    }
  }
}

TEST_SUITE("invariants.transform") {
  TEST_CASE("sinh-arcsinh forward undoes inverse") {
    for (auto [d, e] : {std::pair{0.0, 1.0}, {-1.5, 0.5}, {0.8, 2.0}, {-1.0, 1.0}}) {
      for (double x = -10.0; x <= 10.0; x += 0.05) {
        CHECK(std::abs(sas_forward(sas_inverse(x, d, e), d, e) - x) < 1e-10 * std::max(1.0, std::abs(x)));
      }
    }
  }

  TEST_CASE("transformation density is symmetric iff delta = 0") {
    for (double e : {0.5, 1.0, 2.0}) {
      for (double d : {0.0, 0.3, -1.0}) {
        const TransformParams p{SymmetricBase::normal(), LocationScale(1.0, 1.5), Transformation::sas(d, e)};
        double gap = 0.0;
        for (double x = 0.05; x <= 8.0; x += 0.05) gap = std::max(gap, std::abs(transform_pdf(1.0 + x, p) - transform_pdf(1.0 - x, p)));
        if (d == 0.0) {
          CHECK(gap < 1e-12);
        } else {
          CHECK(gap > 1e-3);
        }
      }
    }
  }

  TEST_CASE("analytic Jacobian matches finite differences") {
    for (auto [d, e] : {std::pair{-0.5, 0.5}, {1.0, 1.5}, {0.0, 3.0}}) {
      for (double x = -6.0; x <= 6.0; x += 0.25) {
        const double h = 1e-6 * std::max(1.0, std::abs(x));
        const double fd = (sas_forward(x + h, d, e) - sas_forward(x - h, d, e)) / (2 * h);
        const double exact = sas_derivative(x, d, e);
        CHECK(std::abs(fd - exact) <= 1e-6 * std::abs(exact));
      }
    }
  }

  TEST_CASE("g-and-h inverse is increasing") {
    for (double g : {0.0, 0.5, -0.5}) {
      for (double h : {0.0, 0.2, 0.5}) {
        double prev = gh_inverse(-10.0, g, h);
        for (double x = -9.99; x <= 10.0; x += 0.01) {
          const double cur = gh_inverse(x, g, h);
          CHECK(cur > prev);
          prev = cur;
        }
      }
    }
  }
}

TEST_SUITE("invariants.twopiece") {
  std::vector<ScalingScheme> schemes() {
    std::vector<ScalingScheme> s;
    for (double d : {0.5, 1.0, 2.0, 5.0}) s.push_back(ScalingScheme::isf(d));
    for (double d : {-0.9, -0.5, 0.0, 0.5, 0.9}) s.push_back(ScalingScheme::epsilon(d));
    return s;
  }

  TEST_CASE("two-piece density is continuous at the location") {
    for (const auto& b : bases()) {
      for (const auto& s : schemes()) {
        const TwoPieceParams p{b, LocationScale(0.3, 1.7), s};
        CHECK(std::abs(two_piece_pdf(std::nextafter(0.3, -1.0), p) - two_piece_pdf(0.3, p)) < 1e-12);
      }
    }
  }

  TEST_CASE("side masses match branch quadrature") {
    for (const auto& b : {SymmetricBase::normal(), SymmetricBase::student_t(3.0), SymmetricBase::logistic()}) {
      for (const auto& s : schemes()) {
        const TwoPieceParams p{b, LocationScale(0.3, 1.7), s};
        const auto m = side_masses(s);
        CHECK(m.left + m.right == 1.0);
        const auto f = [&](double x) { return two_piece_pdf(x, p); };
        CHECK(std::abs(integrate(f, -kInfinity, 0.3, 1e-11) - m.left) < 1e-8);
        CHECK(std::abs(integrate(f, 0.3, kInfinity, 1e-11) - m.right) < 1e-8);
      }
    }
  }

  TEST_CASE("epsilon and ISF scalings describe the same laws") {
    const double d = 0.4;
    const double sigma = 1.3;
    const double d_isf = std::sqrt((1 + d) / (1 - d));
    const TwoPieceParams eps{SymmetricBase::student_t(4.0), LocationScale(0.2, sigma), ScalingScheme::epsilon(d)};
    const TwoPieceParams isf{SymmetricBase::student_t(4.0), LocationScale(0.2, sigma * std::sqrt(1 - d * d)), ScalingScheme::isf(d_isf)};
    for (double x = -6.0; x <= 6.0; x += 0.1) CHECK(std::abs(two_piece_pdf(x, eps) - two_piece_pdf(x, isf)) < 1e-12);
    const auto argmax = [](const TwoPieceParams& p) {
      return golden_section_max([&](double x) { return two_piece_pdf(x, p); }, -5.0, 5.0, 1e-10);
    };
    CHECK(std::abs(argmax(eps) - argmax(isf)) < 1e-6);
  }

  TEST_CASE("two-piece construction keeps the mode at the location") {
    for (const auto& b : bases()) {
      for (const auto& s : schemes()) {
        const TwoPieceParams p{b, LocationScale(0.3, 1.7), s};
        const double m = golden_section_max([&](double x) { return two_piece_pdf(x, p); }, 0.3 - 5 * 1.7, 0.3 + 5 * 1.7, 1e-10);
        CHECK(std::abs(m - 0.3) < 1e-6);
      }
    }
  }

  TEST_CASE("scale-transformed densities integrate to 1") {
    const std::vector<ScaleTransform> maps{
        ScaleTransform::half(),         ScaleTransform::hyperbolic(0.3), ScaleTransform::hyperbolic(-0.45),
        ScaleTransform::arctan(0.2),    ScaleTransform::arctan(-0.3),
        ScaleTransform::custom([](double x) { return 0.5 * x + 0.2 * std::tanh(x) * std::tanh(x); }, "tanh2")};
    for (const auto& b : {SymmetricBase::normal(), SymmetricBase::student_t(3.0), SymmetricBase::logistic()}) {
      for (const auto& st : maps) {
        const ScaleTransformParams p{b, LocationScale(-1.0, 0.8), st};
        CHECK(std::abs(integrate_real_line([&](double x) { return scale_transformed_pdf(x, p); }, -1.0, 1e-10) - 1.0) < 1e-7);
      }
    }
  }
}

TEST_SUITE("invariants.measures") {
  TEST_CASE("two-piece skewness is free of the tail parameter") {
    for (const auto& s : {ScalingScheme::isf(2.0), ScalingScheme::epsilon(0.3)}) {
      const double ref = ag_skewness(TwoPieceParams{SymmetricBase::student_t(2.0), LocationScale(0, 1), s});
      for (double nu : {5.0, 20.0}) {
        CHECK(std::abs(ag_skewness(TwoPieceParams{SymmetricBase::student_t(nu), LocationScale(0, 1), s}) - ref) < 1e-8);
      }
    }
  }

  TEST_CASE("sinh-arcsinh kurtosis grows as eta falls") {
    double prev = 0.0;
    for (double e : {1.5, 1.0, 0.5}) {
      const double k = quantile_kurtosis(TransformParams{SymmetricBase::normal(), LocationScale(0, 1), Transformation::sas(0.0, e)});
      CHECK(k > prev);
      prev = k;
    }
  }

  TEST_CASE("skewness sign conventions") {
    for (double d : {1.5, 2.0, 5.0}) {
      CHECK(ag_skewness(TwoPieceParams{SymmetricBase::normal(), LocationScale(0, 1), ScalingScheme::isf(d)}) > 0.0);
    }
    // Anchor recorded once from quadrature of the left branch: AG = delta for the epsilon scaling.
    const TwoPieceParams eps{SymmetricBase::normal(), LocationScale(0, 1), ScalingScheme::epsilon(0.5)};
    const double left = integrate([&](double x) { return two_piece_pdf(x, eps); }, -kInfinity, 0.0, 1e-12);
    CHECK(std::abs(1.0 - 2.0 * left - 0.5) < 1e-8);
    CHECK(std::abs(ag_skewness(eps) - 0.5) < 1e-8);
  }
}

TEST_SUITE("invariants.infer") {
  TEST_CASE("nested fits never lose likelihood") {
    const std::vector<Distribution> sources{SymmetricParams{SymmetricBase::normal(), LocationScale(0, 1)},
                                            SkewSymParams::skew_normal(1, 2, -3.0),
                                            SymmetricParams{SymmetricBase::student_t(2.5), LocationScale(0, 1)},
                                            TwoPieceParams{SymmetricBase::normal(), LocationScale(0, 1), ScalingScheme::isf(3.0)}};
    const std::vector<std::pair<Family, Family>> pairs{
        {Family::Normal, Family::SkewNormal}, {Family::Normal, Family::SasNormal}, {Family::Normal, Family::IsfNormal},
        {Family::Normal, Family::EpsilonNormal}, {Family::StudentT, Family::SkewT}, {Family::StudentT, Family::IsfT},
        {Family::StudentT, Family::EpsilonT}};
    std::uint64_t seed = 900;
    for (const auto& src : sources) {
      const auto x = draw(src, 150, seed++);
      for (const auto& [null, alt] : pairs) {
        CHECK(2.0 * (fit_mle(alt, x).loglik - fit_mle(null, x).loglik) >= -1e-8);
      }
    }
  }

  TEST_CASE("fits are affine equivariant") {
    const auto x = draw(SkewSymParams::skew_normal(0.5, 1.5, 2.0), 400, 77);
    std::vector<double> y(x.size());
    const double a = 3.5;
    const double b = -12.0;
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = a * x[i] + b;
    for (Family f : {Family::Normal, Family::SkewNormal, Family::IsfNormal, Family::EpsilonNormal, Family::SasNormal}) {
      const FitResult fx = fit_mle(f, x);
      const FitResult fy = fit_mle(f, y);
      CHECK(std::abs(shape_of(fy, "mu") - (a * shape_of(fx, "mu") + b)) < 1e-4 * a);
      CHECK(std::abs(shape_of(fy, "sigma") - a * shape_of(fx, "sigma")) < 1e-4 * a);
      for (const auto& [k, v] : fx.parameters()) {
        if (k != "mu" && k != "sigma") CHECK(std::abs(shape_of(fy, k) - v) < 1e-4);
      }
    }
  }

  TEST_CASE("information criteria identities") {
    const auto x = draw(SymmetricParams{SymmetricBase::logistic(), LocationScale(0, 1)}, 120, 3);
    for (Family f : likelihood_families()) {
      const FitResult r = fit_mle(f, x);
      CHECK(r.aic == 2.0 * r.free_parameters - 2.0 * r.loglik);
      CHECK(r.bic == r.free_parameters * std::log(static_cast<double>(r.n)) - 2.0 * r.loglik);
    }
  }

  TEST_CASE("identical seeds reproduce fits and tests bit for bit") {
    const auto x = draw(SkewSymParams::skew_t(0, 1, 4.0, 1.0), 150, 4);
    for (Family f : likelihood_families()) {
      const FitResult a = fit_mle(f, x);
      const FitResult b = fit_mle(f, x);
      CHECK(a.loglik == b.loglik);
      CHECK(a.parameters() == b.parameters());
      CHECK(a.iterations == b.iterations);
    }
    LrTestOptions opt;
    opt.replicates = 99;
    opt.seed = 5;
    const TestResult t1 = lr_test(x, Family::Normal, Family::SkewNormal, opt);
    const TestResult t2 = lr_test(x, Family::Normal, Family::SkewNormal, opt);
    CHECK(t1.statistic == t2.statistic);
    CHECK(t1.p_value == t2.p_value);
    CHECK(t1.replicates == t2.replicates);
  }
}

TEST_SUITE("invariants.cli") {
  const std::vector<std::pair<std::string, std::vector<std::string>>>& subcommand_flags() {
    static const std::vector<std::pair<std::string, std::vector<std::string>>> table{
        {"curve", {"--family", "--mu", "--sigma", "--delta", "--eta", "--nu", "--g", "--h", "--scaling", "--base",
                   "--transform", "--c", "--x-min", "--x-max", "--points"}},
        {"figures", {"--out-dir"}},
        {"fit", {"--family", "--all", "--criterion", "--seed", "--restarts"}},
        {"test", {"--null", "--alt", "--reps", "--seed", "--threads"}},
        {"sample", {"--family", "--mu", "--sigma", "--delta", "--eta", "--nu", "--g", "--h", "--scaling", "--base", "-n", "--seed"}},
        {"sfa-demo", {"-n", "--sigma-v", "--sigma-u", "--seed"}},
    };
    return table;
  }

  TEST_CASE("help documents every flag and unknown flags are usage errors") {
    const CliOutcome top = cli_run({"--help"});
    CHECK(top.code == 0);
    for (const auto& [cmd, flags] : subcommand_flags()) {
      const CliOutcome h = cli_run({cmd, "--help"});
      CHECK(h.code == 0);
      for (const auto& f : flags) CHECK_MESSAGE(h.out.find(f) != std::string::npos, cmd << " help lacks " << f);
      CHECK(cli_run({cmd, "--no-such-flag"}).code == 2);
    }
  }

  TEST_CASE("numeric output round-trips at 17 significant digits") {
    const CliOutcome c = cli_run({"curve", "--family", "skew-t", "--nu", "3", "--delta", "1.3", "--points", "101"});
    std::istringstream in(c.out);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      for (const std::string& field : {line.substr(0, line.find(',')), line.substr(line.find(',') + 1)}) {
        const double v = std::strtod(field.c_str(), nullptr);
        CHECK(cli::format_double(v) == field);
      }
    }
    const CliOutcome s = cli_run({"sample", "--family", "sas-normal", "--delta", "0.3", "--eta", "0.7", "-n", "50"});
    std::istringstream sin(s.out);
    while (std::getline(sin, line)) CHECK(cli::format_double(std::strtod(line.c_str(), nullptr)) == line);
    const CliOutcome j = cli_run({"sfa-demo", "-n", "300", "--seed", "2"});
    const auto doc = nlohmann::ordered_json::parse(j.out);
    CHECK(nlohmann::ordered_json::parse(doc.dump(2)) == doc);
    CHECK(doc["lr_statistic"].get<double>() == nlohmann::ordered_json::parse(j.out)["lr_statistic"].get<double>());
  }

  TEST_CASE("only the figures subcommand writes files") {
    const fs::path dir = fs::temp_directory_path() / "flexdist_invariant_cwd";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
      std::ofstream(dir / "data.txt") << "1\n2.5\n-0.5\n3\n0.25\n1.75\n-1\n2\n0.5\n1.5\n";
    }
    const fs::path old = fs::current_path();
    fs::current_path(dir);
    const auto listing = [&] {
      std::set<std::string> names;
      for (const auto& e : fs::recursive_directory_iterator(dir)) names.insert(e.path().string());
      return names;
    };
    const auto before = listing();
    cli_run({"curve", "--family", "normal", "--points", "5"});
    cli_run({"sample", "--family", "normal", "-n", "5"});
    cli_run({"fit", "data.txt", "--family", "skew-normal"});
    cli_run({"test", "data.txt", "--alt", "isf-normal", "--reps", "99"});
    cli_run({"sfa-demo", "-n", "200"});
    const auto after = listing();
    cli_run({"figures", "--out-dir", "figs"});
    const bool figures_written = fs::exists(dir / "figs");
    fs::current_path(old);
    CHECK(before == after);
    CHECK(figures_written);
  }
}

#include "flexdist/distribution.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "flexdist/error.hpp"

namespace flexdist {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string loc_text(const LocationScale& loc) { return "mu=" + num(loc.mu()) + ", sigma=" + num(loc.sigma()); }

double transform_tail_index(const TransformParams& p) {
  const double base_tail = p.base.tail_index();
  const double skew = p.tr.skewness();
  const double tail = p.tr.tail();
  switch (p.tr.kind()) {
    case TransformKind::SinhArcsinh:
      // |H^{-1}(x)| grows like |x|^{1/eta}.
      return std::isinf(base_tail) ? kInfinity : base_tail * tail;
    case TransformKind::K:
      return std::isinf(base_tail) ? kInfinity : base_tail / (1.0 + 2.0 * tail);
    case TransformKind::GH:
      if (tail > 0.0) return p.base.kind() == BaseKind::Normal ? 1.0 / tail : 0.0;
      if (skew == 0.0) return base_tail;
      switch (p.base.kind()) {
        case BaseKind::Normal:
          return kInfinity;
        case BaseKind::Logistic:
          return 1.0 / std::abs(skew);
        case BaseKind::StudentT:
          return 0.0;
      }
  }
  return base_tail;
}

}  // namespace

const SymmetricBase& Distribution::base() const {
  return std::visit([](const auto& p) -> const SymmetricBase& { return p.base; }, spec_);
}

const LocationScale& Distribution::location_scale() const {
  return std::visit([](const auto& p) -> const LocationScale& { return p.loc; }, spec_);
}

bool Distribution::has_density() const {
  if (const auto* t = std::get_if<TransformParams>(&spec_)) return t->tr.invertible_density();
  return true;
}

double Distribution::pdf(double x) const {
  return std::visit(Overloaded{
                        [x](const SymmetricParams& p) { return p.base.pdf(p.loc.standardize(x)) / p.loc.sigma(); },
                        [x](const SkewSymParams& p) { return skew_symmetric_pdf(x, p); },
                        [x](const TransformParams& p) { return transform_pdf(x, p); },
                        [x](const TwoPieceParams& p) { return two_piece_pdf(x, p); },
                        [x](const ScaleTransformParams& p) { return scale_transformed_pdf(x, p); },
                    },
                    spec_);
}

double Distribution::log_pdf(double x) const {
  return std::visit(
      Overloaded{
          [x](const SymmetricParams& p) { return p.base.log_pdf(p.loc.standardize(x)) - std::log(p.loc.sigma()); },
          [x](const SkewSymParams& p) { return skew_symmetric_log_pdf(x, p); },
          [x](const TransformParams& p) { return transform_log_pdf(x, p); },
          [x](const TwoPieceParams& p) { return two_piece_log_pdf(x, p); },
          [x](const ScaleTransformParams& p) { return scale_transformed_log_pdf(x, p); },
      },
      spec_);
}

double Distribution::cdf(double x) const {
  return std::visit(Overloaded{
                        [x](const SymmetricParams& p) { return p.base.cdf(p.loc.standardize(x)); },
                        [x](const SkewSymParams& p) { return skew_symmetric_cdf(x, p); },
                        [x](const TransformParams& p) { return transform_cdf(x, p); },
                        [x](const TwoPieceParams& p) { return two_piece_cdf(x, p); },
                        [x](const ScaleTransformParams& p) { return scale_transformed_cdf(x, p); },
                    },
                    spec_);
}

double Distribution::quantile(double prob) const {
  return std::visit(Overloaded{
                        [prob](const SymmetricParams& p) {
                          if (!(prob > 0.0 && prob < 1.0)) {
                            throw InvalidParameter("quantile: probability must lie in (0, 1)");
                          }
                          return p.loc.mu() + p.loc.sigma() * p.base.quantile(prob);
                        },
                        [prob](const SkewSymParams& p) { return skew_symmetric_quantile(prob, p); },
                        [prob](const TransformParams& p) { return transform_quantile(prob, p); },
                        [prob](const TwoPieceParams& p) { return two_piece_quantile(prob, p); },
                        [prob](const ScaleTransformParams& p) { return scale_transformed_quantile(prob, p); },
                    },
                    spec_);
}

double Distribution::mode() const {
  return std::visit(Overloaded{
                        [](const SymmetricParams& p) { return p.loc.mu(); },
                        [](const SkewSymParams& p) { return skew_symmetric_mode(p); },
                        [](const TransformParams& p) { return transform_mode(p); },
                        // Rescaling either side of mu leaves the base's mode at mu.
                        [](const TwoPieceParams& p) { return p.loc.mu(); },
                        [](const ScaleTransformParams& p) { return scale_transformed_mode(p); },
                    },
                    spec_);
}

std::vector<double> Distribution::sample(std::size_t n, Rng& rng) const {
  return std::visit(Overloaded{
                        [&](const SymmetricParams& p) {
                          std::vector<double> out;
                          out.reserve(n);
                          for (std::size_t i = 0; i < n; ++i) {
                            out.push_back(p.loc.mu() + p.loc.sigma() * p.base.sample(rng));
                          }
                          return out;
                        },
                        [&](const SkewSymParams& p) { return sample_skew_symmetric(n, p, rng); },
                        [&](const TransformParams& p) { return sample_transform(n, p, rng); },
                        [&](const TwoPieceParams& p) { return sample_two_piece(n, p, rng); },
                        [&](const ScaleTransformParams& p) { return sample_scale_transformed(n, p, rng); },
                    },
                    spec_);
}

double Distribution::tail_index() const {
  if (const auto* t = std::get_if<TransformParams>(&spec_)) return transform_tail_index(*t);
  return base().tail_index();
}

std::string Distribution::describe() const {
  return std::visit(
      Overloaded{
          [](const SymmetricParams& p) { return p.base.name() + "(" + loc_text(p.loc) + ")"; },
          [](const SkewSymParams& p) {
            const std::string name = p.is_skew_normal() ? "skew-normal" : "skew-" + p.base.name();
            return name + "(" + loc_text(p.loc) + ", delta=" + num(p.delta) + ")";
          },
          [](const TransformParams& p) {
            std::string name;
            switch (p.tr.kind()) {
              case TransformKind::SinhArcsinh:
                return "sas-" + p.base.name() + "(" + loc_text(p.loc) + ", delta=" + num(p.tr.skewness()) +
                       ", eta=" + num(p.tr.tail()) + ")";
              case TransformKind::GH:
                return "gh-" + p.base.name() + "(" + loc_text(p.loc) + ", g=" + num(p.tr.skewness()) +
                       ", h=" + num(p.tr.tail()) + ")";
              case TransformKind::K:
                return "k-" + p.base.name() + "(" + loc_text(p.loc) + ", eta=" + num(p.tr.tail()) + ")";
            }
            return name;
          },
          [](const TwoPieceParams& p) {
            const std::string scheme = p.scheme.kind() == ScalingKind::Isf ? "isf-" : "epsilon-";
            return scheme + p.base.name() + "(" + loc_text(p.loc) + ", delta=" + num(p.scheme.delta()) + ")";
          },
          [](const ScaleTransformParams& p) {
            return "scale-transformed-" + p.base.name() + "(" + loc_text(p.loc) + ", H=" + p.st.name() + ")";
          },
      },
      spec_);
}

}  // namespace flexdist

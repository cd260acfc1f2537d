#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "flexdist/distribution.hpp"

namespace flexdist::cli {

/// Bad input from the user: flags, files, dataset contents. Maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flags shared by `curve` and `sample` naming one distribution.
struct FamilyFlags {
  std::string family;
  std::string base = "normal";
  std::string scaling;
  std::string transform;
  double mu = 0.0;
  double sigma = 1.0;
  std::optional<double> delta;
  std::optional<double> eta;
  std::optional<double> nu;
  std::optional<double> g;
  std::optional<double> h;
  std::optional<double> c;
};

Distribution make_distribution(const FamilyFlags& flags);

/// One value per line; blank lines and lines starting with '#' are skipped.
std::vector<double> parse_dataset(std::istream& in, const std::string& source);
std::vector<double> read_dataset(const std::string& path);

struct FigureCurve {
  std::string file;
  FamilyFlags flags;
};

/// Parameter sets of the three reference density panels, two panels each.
std::vector<FigureCurve> figure_curves();

/// Round-trip decimal text (17 significant digits).
std::string format_double(double x);

void write_curve(std::ostream& out, const Distribution& d, double x_min, double x_max, int points);

/// Runs the command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace flexdist::cli

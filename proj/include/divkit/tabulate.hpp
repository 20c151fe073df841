#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "divkit/estimators.hpp"
#include "divkit/generators.hpp"
#include "divkit/radial.hpp"

namespace divkit {

/// One h_f(u) estimate at a grid point.
struct HfRow {
  double u;
  double h;
  double std_error;
  Method method;
};

/// Empirical table of h_f over a strictly increasing grid of squared
/// Mahalanobis separations.
struct HfTable {
  std::string generator_name;
  std::string family;
  std::vector<HfRow> rows;
};

struct McOptions {
  std::size_t n;
  std::uint64_t seed;
};

/// Tabulates h_f(u) = I_f between the family's unit-scale location pair at
/// separation sqrt(u); the normal family goes through the dimension
/// reduction, so every row is a univariate computation. method: quadrature
/// when mc is empty, Monte Carlo otherwise.
HfTable tabulate_hf(const FGenerator& gen, const RadialDensity& rd,
                    const std::vector<double>& grid,
                    std::optional<McOptions> mc = std::nullopt,
                    int threads = 0);

/// Rational surrogate a u / (u + b) fitted to a table by relative least
/// squares (Gauss-Newton with Levenberg damping, deterministic).
struct RationalFit {
  double a;
  double b;
  double u_min;
  double u_max;
  double max_rel_error;
};
RationalFit fit_rational(const HfTable& table);
/// Largest relative surrogate error over the table rows.
double rational_fit_max_rel_error(double a, double b, const HfTable& table);

/// Monotonicity check: h_{i+1} > h_i - 3 (se_i + se_{i+1}); deterministic
/// tables must increase strictly. slack is the smallest margin seen.
struct MonotonicityReport {
  bool pass;
  long first_violation;  // -1 when none
  double slack;
};
MonotonicityReport monotonicity_report(const HfTable& table);

/// CSV schema: header "u,h,std_error,method", '.' decimal, LF endings.
std::string hf_table_csv(const HfTable& table);
HfTable parse_hf_table_csv(const std::string& text);

/// One-line rendering: a=<...> b=<...> max_rel_error=<...> domain=[<...>,<...>]
std::string format_rational_fit(const RationalFit& fit);

}  // namespace divkit

#pragma once

#include <functional>
#include <vector>

namespace divkit {

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = false;
};

/// Adaptive Gauss-Kronrod (G7, K15) on [a, b]. Splits the worst interval
/// first until the summed error estimate drops below
/// max(abs_tol, rel_floor * |value|) or the interval budget runs out.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a,
                              double b, double abs_tol,
                              double rel_floor = 1e-12,
                              int max_intervals = 20000);

/// Integral over the whole real line. Interior split points bound a finite
/// core handled directly; the two tails are mapped to (0,1) with
/// x = m +- s/(1-s), which also handles heavy (polynomial) tails.
QuadResult integrate_real_line(const std::function<double(double)>& f,
                               std::vector<double> split_points,
                               double abs_tol, double rel_floor = 1e-12);

/// Integral over [a, +inf), same tail map.
QuadResult integrate_half_line(const std::function<double(double)>& f,
                               double a, double abs_tol,
                               double rel_floor = 1e-12);

}  // namespace divkit

#pragma once

#include <functional>
#include <string>

#include "divkit/spd.hpp"

namespace divkit {

/// Scale applied to the Jensen-Shannon closed form so it matches the
/// catalog's js generator, which integrates to twice the half-sum-of-KLs
/// value. Resolved once against the quadrature oracle; see the provenance
/// table in the README. The sharp upper bound for js under this convention
/// is kJsGeneratorScale * log 2.
inline constexpr double kJsGeneratorScale = 2.0;

/// Scale applied to the squared-Hellinger closed form 1 - exp(-u/8) so it
/// matches the generator (sqrt(u) - 1)^2. Oracle-resolved.
inline constexpr double kHellingerScale = 2.0;

/// Closed forms h_f for normal location pairs, as functions of the squared
/// Mahalanobis distance u. Names: kl, h2, chi2:pearson, alpha:<a>, js, tv,
/// chik:<k>.
double hf_normal(const std::string& generator_name, double u);

/// Whether hf_normal accepts this generator name.
bool has_hf_normal(const std::string& generator_name);

/// Order-k chi closed form for normal location pairs:
/// sum_{i=0}^k (-1)^(k-i) C(k,i) exp(i(i-1)u/2), binomials exact up to k=30.
double chi_order_k(int k, double u);

/// I_JS(u) = E_{y ~ N(u/4, u/4)}[log cosh y], the integral term in the
/// Jensen-Shannon closed form u/4 - I_JS(u) (half-KL convention).
/// Equals sqrt(8/(pi u)) e^{-u/8} int_0^inf e^{-2x^2/u} cosh(x) log cosh(x) dx;
/// the expectation form is free of overflow for large u. I_JS(0) = 0.
double i_js_integral(double u);

/// Rao distance between same-covariance normals: sqrt(2) arccosh(1 + u/4).
double fisher_rao_normal(double u);

/// Cauchy location closed forms: (chi2:pearson, d=1) -> u/2,
/// (chi2:pearson, d=3) -> (2/3)u + u^2/8.
double hf_cauchy(const std::string& generator_name, double u, int dim);
bool has_hf_cauchy(const std::string& generator_name, int dim);

/// KL between arbitrary normals, split into its Burg (scale) and
/// Mahalanobis (location) parts:
/// total = 1/2 (tr(S2^{-1} S1) + log det(S2 S1^{-1}) - d)
///       + 1/2 (mu2-mu1)^T S2^{-1} (mu2-mu1).
struct KlDecomposition {
  double total;
  double burg;
  double mahalanobis;
};
KlDecomposition kl_mvn_general(const LocationScaleParam& p1,
                               const LocationScaleParam& p2);

/// A named closed form h_f together with the family it belongs to.
struct HfFunction {
  std::string generator_name;
  std::string family;
  std::function<double(double)> eval;
};
HfFunction make_hf_normal(const std::string& generator_name);

}  // namespace divkit

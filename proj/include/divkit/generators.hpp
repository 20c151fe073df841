#pragma once

#include <functional>
#include <string>

namespace divkit {

/// A divergence generator: convex f on (0, inf) with f(1) = 0, plus its
/// derivative. Odd-order chi generators are not convex and carry the
/// signed_generator flag so property checks can skip convexity for them.
struct FGenerator {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> f_prime;
  bool signed_generator = false;
};

/// Catalog generators. Accepted names: total_variation, squared_hellinger,
/// pearson_chi2, neyman_chi2, kl, reverse_kl, jeffreys, jensen_shannon.
/// For total_variation, f'(1) is defined as 0.
FGenerator builtin_generator(const std::string& name);

/// f_alpha(u) = 4/(1-alpha^2) (u - u^((1+alpha)/2)) for |alpha| != 1;
/// alpha within 1e-9 of -1 (+1) returns the kl (reverse_kl) generator.
FGenerator alpha_generator(double alpha);

/// f(u) = (u-1)^k, k >= 1. Convex only for even k; odd k >= 3 are flagged
/// signed.
FGenerator chi_order_k_generator(int k);

/// CLI vocabulary: kl, rkl, tv, h2, chi2:pearson, chi2:neyman, chik:<k>,
/// alpha:<float>, js, jeffreys.
FGenerator parse_generator(const std::string& cli_name);

}  // namespace divkit

#include "divkit/closed_form.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "divkit/quadrature.hpp"

namespace divkit {

namespace {

double standard_normal_tail(double x) {
  // Q(x) = 1 - Phi(x), via erfc; relative error well under 1e-12 on [0, 8].
  return 0.5 * std::erfc(x * 0.70710678118654752440084436210485);
}

double log_cosh(double y) {
  const double a = std::abs(y);
  return a + std::log1p(std::exp(-2.0 * a)) - 0.6931471805599453094172321214582;
}

double require_nonnegative(double u, const char* what) {
  if (!(u >= 0.0)) throw std::domain_error(std::string(what) + ": u must be >= 0");
  return u;
}

double parse_suffix_double(const std::string& s, const char* what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != s.size()) {
    throw std::invalid_argument(std::string(what) + ": bad parameter '" + s + "'");
  }
  return v;
}

}  // namespace

double chi_order_k(int k, double u) {
  if (k < 1 || k > 30) {
    throw std::domain_error("chi_order_k: k must be in [1, 30]");
  }
  require_nonnegative(u, "chi_order_k");
  // Binomials exactly, in integers: C(30, 15) still fits comfortably.
  std::vector<std::uint64_t> binom(static_cast<std::size_t>(k) + 1);
  binom[0] = 1;
  for (int i = 1; i <= k; ++i) {
    binom[static_cast<std::size_t>(i)] =
        binom[static_cast<std::size_t>(i - 1)] *
        static_cast<std::uint64_t>(k - i + 1) / static_cast<std::uint64_t>(i);
  }
  double sum = 0.0;
  for (int i = 0; i <= k; ++i) {
    const double term = static_cast<double>(binom[static_cast<std::size_t>(i)]) *
                        std::exp(0.5 * i * (i - 1) * u);
    sum += ((k - i) % 2 == 0) ? term : -term;
  }
  return sum;
}

double i_js_integral(double u) {
  require_nonnegative(u, "i_js_integral");
  if (u == 0.0) return 0.0;  // continuity limit
  const double a = 0.25 * u;
  const double sd = std::sqrt(a);
  const double norm = 1.0 / std::sqrt(2.0 * 3.14159265358979323846 * a);
  auto integrand = [a, sd, norm](double y) {
    const double z = (y - a) / sd;
    const double w = norm * std::exp(-0.5 * z * z);
    return w == 0.0 ? 0.0 : w * log_cosh(y);
  };
  // The Gaussian weight confines everything to a +- 42 sd window.
  const QuadResult r = integrate_adaptive(integrand, a - 42.0 * sd,
                                          a + 42.0 * sd, 1e-9);
  if (!r.converged) {
    throw std::runtime_error("i_js_integral: quadrature did not converge");
  }
  return r.value;
}

double fisher_rao_normal(double u) {
  require_nonnegative(u, "fisher_rao_normal");
  const double x = 1.0 + 0.25 * u;
  return std::sqrt(2.0) * std::log(x + std::sqrt(x * x - 1.0));
}

double hf_normal(const std::string& generator_name, double u) {
  require_nonnegative(u, "hf_normal");
  if (generator_name == "kl") return 0.5 * u;
  if (generator_name == "h2") return kHellingerScale * (-std::expm1(-u / 8.0));
  if (generator_name == "chi2:pearson") return chi_order_k(2, u);
  if (generator_name == "js") {
    return kJsGeneratorScale * (0.25 * u - i_js_integral(u));
  }
  if (generator_name == "tv") {
    return 1.0 - 2.0 * standard_normal_tail(0.5 * std::sqrt(u));
  }
  if (generator_name.rfind("alpha:", 0) == 0) {
    const double alpha = parse_suffix_double(generator_name.substr(6), "hf_normal");
    const double c = 1.0 - alpha * alpha;
    if (std::abs(c) < 1e-9) return 0.5 * u;  // KL / reverse KL limits
    return (4.0 / c) * (-std::expm1(-c * u / 8.0));
  }
  if (generator_name.rfind("chik:", 0) == 0) {
    const double k = parse_suffix_double(generator_name.substr(5), "hf_normal");
    if (k < 1.0 || k != std::floor(k)) {
      throw std::invalid_argument("hf_normal: chik order must be an integer >= 1");
    }
    return chi_order_k(static_cast<int>(k), u);
  }
  throw std::invalid_argument("hf_normal: no closed form for '" +
                              generator_name + "'");
}

bool has_hf_normal(const std::string& generator_name) {
  if (generator_name == "kl" || generator_name == "h2" ||
      generator_name == "chi2:pearson" || generator_name == "js" ||
      generator_name == "tv") {
    return true;
  }
  if (generator_name.rfind("alpha:", 0) == 0 ||
      generator_name.rfind("chik:", 0) == 0) {
    try {
      hf_normal(generator_name, 1.0);
      return true;
    } catch (const std::exception&) {
      return false;
    }
  }
  return false;
}

double hf_cauchy(const std::string& generator_name, double u, int dim) {
  require_nonnegative(u, "hf_cauchy");
  if (generator_name == "chi2:pearson" && dim == 1) return 0.5 * u;
  if (generator_name == "chi2:pearson" && dim == 3) {
    return (2.0 / 3.0) * u + u * u / 8.0;
  }
  throw std::invalid_argument("hf_cauchy: no closed form for ('" +
                              generator_name + "', d=" + std::to_string(dim) +
                              ")");
}

bool has_hf_cauchy(const std::string& generator_name, int dim) {
  return generator_name == "chi2:pearson" && (dim == 1 || dim == 3);
}

KlDecomposition kl_mvn_general(const LocationScaleParam& p1,
                               const LocationScaleParam& p2) {
  if (p1.dim() != p2.dim()) {
    throw std::invalid_argument("kl_mvn_general: dimension mismatch");
  }
  const int d = p1.dim();
  const double trace = p2.sigma().solve(p1.sigma().matrix()).trace();
  const double burg = trace + p2.sigma().log_det() - p1.sigma().log_det() - d;
  const double mahal = mahalanobis_sq(p1.location(), p2.location(), p2.sigma());
  return KlDecomposition{0.5 * (burg + mahal), burg, mahal};
}

HfFunction make_hf_normal(const std::string& generator_name) {
  if (!has_hf_normal(generator_name)) {
    throw std::invalid_argument("make_hf_normal: no closed form for '" +
                                generator_name + "'");
  }
  HfFunction h;
  h.generator_name = generator_name;
  h.family = "normal";
  h.eval = [generator_name](double u) { return hf_normal(generator_name, u); };
  return h;
}

}  // namespace divkit

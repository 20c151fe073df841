#include "divkit/generators.hpp"

#include <cmath>
#include <stdexcept>

namespace divkit {

namespace {

double parse_double(const std::string& s, const char* what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(what) + ": bad number '" + s + "'");
  }
  if (pos != s.size()) {
    throw std::invalid_argument(std::string(what) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

FGenerator builtin_generator(const std::string& name) {
  FGenerator g;
  g.name = name;
  if (name == "total_variation") {
    g.f = [](double u) { return 0.5 * std::abs(u - 1.0); };
    g.f_prime = [](double u) { return u > 1.0 ? 0.5 : (u < 1.0 ? -0.5 : 0.0); };
  } else if (name == "squared_hellinger") {
    g.f = [](double u) { const double s = std::sqrt(u) - 1.0; return s * s; };
    g.f_prime = [](double u) { return 1.0 - 1.0 / std::sqrt(u); };
  } else if (name == "pearson_chi2") {
    g.f = [](double u) { return (u - 1.0) * (u - 1.0); };
    g.f_prime = [](double u) { return 2.0 * (u - 1.0); };
  } else if (name == "neyman_chi2") {
    g.f = [](double u) { const double s = 1.0 - u; return s * s / u; };
    g.f_prime = [](double u) { return 1.0 - 1.0 / (u * u); };
  } else if (name == "kl") {
    g.f = [](double u) { return -std::log(u); };
    g.f_prime = [](double u) { return -1.0 / u; };
  } else if (name == "reverse_kl") {
    g.f = [](double u) { return u * std::log(u); };
    g.f_prime = [](double u) { return std::log(u) + 1.0; };
  } else if (name == "jeffreys") {
    g.f = [](double u) { return (u - 1.0) * std::log(u); };
    g.f_prime = [](double u) { return std::log(u) + 1.0 - 1.0 / u; };
  } else if (name == "jensen_shannon") {
    g.f = [](double u) {
      return u * std::log(u) - (1.0 + u) * std::log(0.5 * (1.0 + u));
    };
    g.f_prime = [](double u) { return std::log(2.0 * u / (1.0 + u)); };
  } else {
    throw std::invalid_argument("builtin_generator: unknown name '" + name + "'");
  }
  return g;
}

FGenerator alpha_generator(double alpha) {
  const double one_minus_a2 = 1.0 - alpha * alpha;
  if (std::abs(one_minus_a2) < 1e-9) {
    // Catastrophic cancellation near the endpoints; hand over to the limits.
    return alpha < 0.0 ? builtin_generator("kl") : builtin_generator("reverse_kl");
  }
  FGenerator g;
  g.name = "alpha:" + std::to_string(alpha);
  const double scale = 4.0 / one_minus_a2;
  const double expo = 0.5 * (1.0 + alpha);
  g.f = [scale, expo](double u) { return scale * (u - std::pow(u, expo)); };
  g.f_prime = [scale, expo](double u) {
    return scale * (1.0 - expo * std::pow(u, expo - 1.0));
  };
  return g;
}

FGenerator chi_order_k_generator(int k) {
  if (k < 1) throw std::invalid_argument("chi_order_k_generator: k must be >= 1");
  FGenerator g;
  g.name = "chik:" + std::to_string(k);
  g.f = [k](double u) { return std::pow(u - 1.0, k); };
  g.f_prime = [k](double u) { return k * std::pow(u - 1.0, k - 1); };
  g.signed_generator = (k % 2 == 1 && k >= 3);
  return g;
}

FGenerator parse_generator(const std::string& cli_name) {
  if (cli_name == "kl") return builtin_generator("kl");
  if (cli_name == "rkl") return builtin_generator("reverse_kl");
  if (cli_name == "tv") return builtin_generator("total_variation");
  if (cli_name == "h2") return builtin_generator("squared_hellinger");
  if (cli_name == "js") return builtin_generator("jensen_shannon");
  if (cli_name == "jeffreys") return builtin_generator("jeffreys");
  if (cli_name == "chi2:pearson") return builtin_generator("pearson_chi2");
  if (cli_name == "chi2:neyman") return builtin_generator("neyman_chi2");
  if (cli_name.rfind("chik:", 0) == 0) {
    const double k = parse_double(cli_name.substr(5), "parse_generator");
    if (k < 1.0 || k != std::floor(k)) {
      throw std::invalid_argument("parse_generator: chik order must be an integer >= 1");
    }
    return chi_order_k_generator(static_cast<int>(k));
  }
  if (cli_name.rfind("alpha:", 0) == 0) {
    return alpha_generator(parse_double(cli_name.substr(6), "parse_generator"));
  }
  throw std::invalid_argument("parse_generator: unknown generator '" + cli_name + "'");
}

}  // namespace divkit

// divkit: f-divergences of multivariate location and scale families.
// Batch CLI over the library; all randomness is seeded and runs are
// byte-reproducible for a fixed seed regardless of --threads.

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "divkit/closed_form.hpp"
#include "divkit/estimators.hpp"
#include "divkit/generators.hpp"
#include "divkit/io.hpp"
#include "divkit/radial.hpp"
#include "divkit/spd.hpp"
#include "divkit/spectral.hpp"
#include "divkit/tabulate.hpp"

namespace {

using divkit::Matrix;
using divkit::Vector;

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

struct CliError : std::runtime_error {
  int code;
  std::string token;
  CliError(int c, const std::string& msg)
      : std::runtime_error(msg), code(c),
        token(c == kExitNumeric ? "numeric" : "validation") {}
  CliError(int c, std::string tok, const std::string& msg)
      : std::runtime_error(msg), code(c), token(std::move(tok)) {}
};

void write_output_file(const std::string& path, const std::string& content) {
  try {
    divkit::write_file_atomic(path, content);
  } catch (const std::exception& e) {
    throw CliError(kExitValidation, "io", e.what());
  }
}

std::vector<double> parse_csv_doubles(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CliError(kExitValidation,
                     std::string(what) + ": bad number '" + item + "'");
    }
  }
  if (out.empty()) {
    throw CliError(kExitValidation, std::string(what) + ": empty list");
  }
  return out;
}

Vector parse_vector(const std::string& s, const char* what) {
  const std::vector<double> v = parse_csv_doubles(s, what);
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = v[i];
  }
  return out;
}

// Rows separated by ';' (newlines accepted from files), entries by ','.
divkit::SpdMatrix parse_spd(std::string text, const char* what) {
  for (char& c : text) {
    if (c == '\n' || c == '\r') c = ';';
  }
  std::vector<std::vector<double>> rows;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) {
    if (row.find_first_not_of(" \t") == std::string::npos) continue;
    rows.push_back(parse_csv_doubles(row, what));
  }
  if (rows.empty()) throw CliError(kExitValidation, std::string(what) + ": empty matrix");
  const std::size_t d = rows.size();
  Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    if (rows[i].size() != d) {
      throw CliError(kExitValidation,
                     std::string(what) + ": matrix must be square");
    }
    for (std::size_t j = 0; j < d; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  try {
    return divkit::SpdMatrix(m);
  } catch (const std::exception& e) {
    throw CliError(kExitValidation, std::string(what) + ": " + e.what());
  }
}

void print_estimate(const divkit::DivergenceEstimate& est) {
  std::cout << "value=" << divkit::format_double(est.value)
            << " std_error=" << divkit::format_double(est.std_error)
            << " method=" << divkit::method_name(est.method) << "\n";
}

std::vector<double> parse_grid(const std::string& s) {
  // a:b:n, n points from a to b inclusive.
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) {
    throw CliError(kExitValidation, "grid: expected <start>:<stop>:<count>");
  }
  double a = 0.0, b = 0.0;
  long n = 0;
  try {
    a = std::stod(parts[0]);
    b = std::stod(parts[1]);
    n = std::stol(parts[2]);
  } catch (const std::exception&) {
    throw CliError(kExitValidation, "grid: malformed '" + s + "'");
  }
  if (n < 1 || b < a || a < 0.0) {
    throw CliError(kExitValidation, "grid: need 0 <= start <= stop and count >= 1");
  }
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n));
  if (n == 1) {
    grid.push_back(a);
  } else {
    for (long i = 0; i < n; ++i) {
      grid.push_back(a + (b - a) * static_cast<double>(i) /
                             static_cast<double>(n - 1));
    }
  }
  return grid;
}

struct DivArgs {
  std::string family;
  std::string gen;
  std::string mu1, mu2;
  std::string sigma1, sigma2;
  std::string sigma1_file, sigma2_file;
  std::string method;
  std::size_t n = 1000000;
  std::uint64_t seed = divkit::kDefaultSeed;
};

divkit::SpdMatrix load_sigma(const std::string& inline_text,
                             const std::string& file, const char* what) {
  if (!inline_text.empty() && !file.empty()) {
    throw CliError(kExitValidation,
                   std::string(what) + ": give the matrix inline or as a file, not both");
  }
  if (!file.empty()) {
    try {
      return parse_spd(divkit::read_file(file), what);
    } catch (const CliError&) {
      throw;
    } catch (const std::exception& e) {
      throw CliError(kExitValidation, std::string(what) + ": " + e.what());
    }
  }
  return parse_spd(inline_text, what);
}

int run_div(const DivArgs& args, int threads) {
  const Vector mu1 = parse_vector(args.mu1, "--mu1");
  const Vector mu2 = parse_vector(args.mu2, "--mu2");
  if (mu1.size() != mu2.size()) {
    throw CliError(kExitValidation, "--mu1 and --mu2 must have equal length");
  }
  const int d = static_cast<int>(mu1.size());
  const divkit::SpdMatrix sigma1 = load_sigma(args.sigma1, args.sigma1_file, "--sigma1");
  const divkit::SpdMatrix sigma2 =
      (args.sigma2.empty() && args.sigma2_file.empty())
          ? sigma1
          : load_sigma(args.sigma2, args.sigma2_file, "--sigma2");
  if (sigma1.dim() != d || sigma2.dim() != d) {
    throw CliError(kExitValidation, "scale matrices must match the location dimension");
  }

  divkit::RadialDensity rd = [&] {
    try {
      return divkit::RadialDensity::parse(args.family, d);
    } catch (const std::exception& e) {
      throw CliError(kExitValidation, e.what());
    }
  }();
  divkit::FGenerator gen = [&] {
    try {
      return divkit::parse_generator(args.gen);
    } catch (const std::exception& e) {
      throw CliError(kExitValidation, e.what());
    }
  }();

  const divkit::LocationScaleParam p1(mu1, sigma1);
  const divkit::LocationScaleParam p2(mu2, sigma2);
  const bool same_scale = sigma1.approx_equal(sigma2, 1e-10);

  divkit::DivergenceEstimate est;
  if (args.method == "closed") {
    est.method = divkit::Method::closed;
    if (rd.is_normal()) {
      if (same_scale && divkit::has_hf_normal(args.gen)) {
        est.value = divkit::hf_normal(args.gen, divkit::mahalanobis_sq(mu1, mu2, sigma1));
      } else if (args.gen == "kl") {
        est.value = divkit::kl_mvn_general(p1, p2).total;
      } else if (mu1 == mu2 && args.gen.rfind("alpha:", 0) == 0) {
        const double alpha = std::stod(args.gen.substr(6));
        est.value = std::abs(1.0 - alpha * alpha) < 1e-9
                        ? divkit::spectral_kl(alpha < 0.0
                                                  ? divkit::relative_spectrum(sigma1, sigma2)
                                                  : divkit::relative_spectrum(sigma2, sigma1))
                        : divkit::alpha_div_scale(alpha, sigma1, sigma2);
      } else {
        throw CliError(kExitValidation,
                       "no closed form for this input; available: kl, h2, chi2:pearson, "
                       "alpha:<a>, js, tv, chik:<k> for same-scale normal pairs; kl for "
                       "general normal pairs; alpha:<a> for same-location normal pairs");
      }
    } else if (rd.nu() == 1.0 && same_scale &&
               divkit::has_hf_cauchy(args.gen, d)) {
      est.value = divkit::hf_cauchy(args.gen, divkit::mahalanobis_sq(mu1, mu2, sigma1), d);
    } else {
      throw CliError(kExitValidation,
                     "no closed form for this input; available: chi2:pearson for "
                     "same-scale cauchy pairs in d = 1 or 3");
    }
  } else if (args.method == "quad") {
    if (d == 1) {
      const double s1 = std::sqrt(sigma1.matrix()(0, 0));
      const double s2 = std::sqrt(sigma2.matrix()(0, 0));
      const divkit::RadialDensity rd1 = divkit::RadialDensity::parse(args.family, 1);
      est = divkit::quad_fdiv_1d(gen, divkit::density_1d(rd1, mu1[0], s1),
                                 divkit::density_1d(rd1, mu2[0], s2));
    } else if (rd.is_normal() && same_scale) {
      const divkit::ReducedPair red = divkit::reduce_location(p1, p2);
      const divkit::RadialDensity rd1 = divkit::RadialDensity::normal(1);
      est = divkit::quad_fdiv_1d(gen,
                                 divkit::density_1d(rd1, red.p1.location()[0], 1.0),
                                 divkit::density_1d(rd1, red.p2.location()[0], 1.0));
    } else {
      throw CliError(kExitValidation,
                     "quad supports d = 1 pairs and same-scale normal pairs (reduced)");
    }
  } else if (args.method == "mc") {
    est = divkit::mc_estimate(gen, rd, p1, p2, args.n, args.seed, threads);
  } else {
    throw CliError(kExitValidation, "--method must be closed, quad, or mc");
  }
  print_estimate(est);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"f-divergences between location and scale family densities"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads,
                 "worker cap for Monte Carlo (DIVKIT_THREADS, then hardware)");

  DivArgs div;
  CLI::App* cmd_div = app.add_subcommand("div", "divergence between two family members");
  cmd_div->add_option("--family", div.family, "normal | cauchy | student:<nu>")->required();
  cmd_div->add_option("--gen", div.gen, "generator name")->required();
  cmd_div->add_option("--mu1", div.mu1, "first location, comma separated")->required();
  cmd_div->add_option("--mu2", div.mu2, "second location")->required();
  cmd_div->add_option("--sigma1", div.sigma1, "first scale, rows 'a,b;c,d'");
  cmd_div->add_option("--sigma1-file", div.sigma1_file, "first scale from file");
  cmd_div->add_option("--sigma2", div.sigma2, "second scale (defaults to sigma1)");
  cmd_div->add_option("--sigma2-file", div.sigma2_file, "second scale from file");
  cmd_div->add_option("--method", div.method, "closed | quad | mc")->required();
  cmd_div->add_option("--n", div.n, "Monte Carlo sample count");
  cmd_div->add_option("--seed", div.seed, "Monte Carlo seed");

  std::string ht_gen, ht_family = "normal", ht_grid, ht_method = "quad", ht_out;
  CLI::App* cmd_ht = app.add_subcommand("hf-table", "tabulate h_f over a separation grid");
  cmd_ht->add_option("--gen", ht_gen)->required();
  cmd_ht->add_option("--family", ht_family);
  cmd_ht->add_option("--grid", ht_grid, "<start>:<stop>:<count>")->required();
  cmd_ht->add_option("--method", ht_method, "quad | mc:<n>");
  cmd_ht->add_option("--out", ht_out, "output CSV path")->required();
  std::uint64_t ht_seed = divkit::kDefaultSeed;
  cmd_ht->add_option("--seed", ht_seed);

  std::string fit_in, fit_out;
  CLI::App* cmd_fit = app.add_subcommand("fit-rational", "fit a u/(u+b) to a table");
  cmd_fit->add_option("--in", fit_in, "input CSV (hf-table schema)")->required();
  cmd_fit->add_option("--out", fit_out, "also write the result line here");

  std::string sp_gen, sp_eigs, sp_family = "normal";
  std::size_t sp_n = 1000000;
  std::uint64_t sp_seed = divkit::kDefaultSeed;
  CLI::App* cmd_sp = app.add_subcommand("spectral", "scale divergence from eigenvalues");
  cmd_sp->add_option("--gen", sp_gen)->required();
  cmd_sp->add_option("--eigs", sp_eigs, "relative spectrum, comma separated")->required();
  cmd_sp->add_option("--family", sp_family);
  cmd_sp->add_option("--n", sp_n);
  cmd_sp->add_option("--seed", sp_seed);

  std::string br_gen, br_dims, br_out;
  std::size_t br_n = 1000000;
  std::uint64_t br_seed = divkit::kDefaultSeed;
  CLI::App* cmd_br = app.add_subcommand("bench-reduction",
                                        "time full-dimensional vs reduced estimation");
  cmd_br->add_option("--gen", br_gen)->required();
  cmd_br->add_option("--dims", br_dims, "comma separated dimensions")->required();
  cmd_br->add_option("--n", br_n);
  cmd_br->add_option("--seed", br_seed);
  cmd_br->add_option("--out", br_out, "CSV path (stdout when omitted)");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      throw CliError(kExitValidation, e.what());
    }

    if (cmd_div->parsed()) return run_div(div, threads);

    if (cmd_ht->parsed()) {
      const divkit::FGenerator gen = divkit::parse_generator(ht_gen);
      const divkit::RadialDensity rd = divkit::RadialDensity::parse(ht_family, 1);
      std::optional<divkit::McOptions> mc;
      if (ht_method != "quad") {
        if (ht_method.rfind("mc:", 0) != 0) {
          throw CliError(kExitValidation, "--method must be quad or mc:<n>");
        }
        divkit::McOptions opt;
        try {
          opt.n = std::stoull(ht_method.substr(3));
        } catch (const std::exception&) {
          throw CliError(kExitValidation, "--method mc:<n>: bad sample count");
        }
        opt.seed = ht_seed;
        mc = opt;
      }
      const divkit::HfTable table =
          divkit::tabulate_hf(gen, rd, parse_grid(ht_grid), mc, threads);
      write_output_file(ht_out, divkit::hf_table_csv(table));
      return 0;
    }

    if (cmd_fit->parsed()) {
      divkit::HfTable table;
      try {
        table = divkit::parse_hf_table_csv(divkit::read_file(fit_in));
      } catch (const std::exception& e) {
        throw CliError(kExitValidation, e.what());
      }
      const divkit::RationalFit fit = divkit::fit_rational(table);
      const std::string line = divkit::format_rational_fit(fit);
      std::cout << line << "\n";
      if (!fit_out.empty()) write_output_file(fit_out, line + "\n");
      return 0;
    }

    if (cmd_sp->parsed()) {
      const divkit::Spectrum spectrum = [&] {
        try {
          return divkit::Spectrum(parse_csv_doubles(sp_eigs, "--eigs"));
        } catch (const CliError&) {
          throw;
        } catch (const std::exception& e) {
          throw CliError(kExitValidation, e.what());
        }
      }();
      divkit::DivergenceEstimate est;
      if (sp_gen == "kl") {
        est.value = divkit::spectral_kl(spectrum);
        est.method = divkit::Method::closed;
      } else if (sp_gen.rfind("alpha:", 0) == 0) {
        double alpha = 0.0;
        try {
          alpha = std::stod(sp_gen.substr(6));
        } catch (const std::exception&) {
          throw CliError(kExitValidation, "bad alpha in '" + sp_gen + "'");
        }
        const double c = 1.0 - alpha * alpha;
        if (std::abs(c) < 1e-9) {
          std::vector<double> eigs = spectrum.values();
          if (alpha > 0.0) {
            for (double& v : eigs) v = 1.0 / v;  // reversed direction
          }
          est.value = divkit::spectral_kl(divkit::Spectrum(eigs));
        } else {
          est.value = 4.0 / c *
                      (1.0 - divkit::bhattacharyya_rho_spectral(0.5 * (1.0 - alpha), spectrum));
        }
        est.method = divkit::Method::closed;
      } else {
        const divkit::FGenerator gen = divkit::parse_generator(sp_gen);
        const divkit::RadialDensity rd =
            divkit::RadialDensity::parse(sp_family, spectrum.size());
        est = divkit::spectral_fdiv_generic(gen, rd, spectrum, sp_n, sp_seed, threads);
      }
      print_estimate(est);
      return 0;
    }

    if (cmd_br->parsed()) {
      const divkit::FGenerator gen = divkit::parse_generator(br_gen);
      std::vector<int> dims;
      for (double v : parse_csv_doubles(br_dims, "--dims")) {
        if (v < 1.0 || v != std::floor(v)) {
          throw CliError(kExitValidation, "--dims entries must be positive integers");
        }
        dims.push_back(static_cast<int>(v));
      }
      const auto rows = divkit::tabulate_runtime(gen, dims, br_n, br_seed, threads);
      const std::string csv = divkit::runtime_table_csv(rows);
      if (br_out.empty()) {
        std::cout << csv;
      } else {
        write_output_file(br_out, csv);
      }
      return 0;
    }

    throw CliError(kExitValidation, "no subcommand given");
  } catch (const CliError& e) {
    std::cerr << "error: " << e.token << ": " << e.what() << "\n";
    return e.code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: validation: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "error: validation: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: numeric: " << e.what() << "\n";
    return kExitNumeric;
  }
}

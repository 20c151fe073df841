#include "divkit/tabulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "divkit/io.hpp"

namespace divkit {

namespace {

Method parse_method(const std::string& s) {
  if (s == "mc") return Method::mc;
  if (s == "mc_reduced") return Method::mc_reduced;
  if (s == "quad_1d") return Method::quad_1d;
  if (s == "quad_nd") return Method::quad_nd;
  if (s == "closed") return Method::closed;
  throw std::invalid_argument("parse_hf_table_csv: unknown method '" + s + "'");
}

}  // namespace

HfTable tabulate_hf(const FGenerator& gen, const RadialDensity& rd,
                    const std::vector<double>& grid,
                    std::optional<McOptions> mc, int threads) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0 || (i > 0 && grid[i] <= grid[i - 1])) {
      throw std::invalid_argument(
          "tabulate_hf: grid must be strictly increasing and nonnegative");
    }
  }
  const RadialDensity rd1 =
      rd.is_normal() ? RadialDensity::normal(1) : RadialDensity::student(rd.nu(), 1);

  HfTable table;
  table.generator_name = gen.name;
  table.family = rd.family_name();

  const SpdMatrix unit = SpdMatrix::identity(1);
  Vector zero(1);
  zero << 0.0;
  for (double u : grid) {
    Vector shifted(1);
    shifted << std::sqrt(u);
    const LocationScaleParam a(zero, unit);
    const LocationScaleParam b(shifted, unit);
    HfRow row;
    row.u = u;
    try {
      if (mc.has_value()) {
        const DivergenceEstimate est =
            mc_estimate(gen, rd1, a, b, mc->n, mc->seed, threads);
        row.h = est.value;
        row.std_error = est.std_error;
        row.method = rd.dim() > 1 ? Method::mc_reduced : Method::mc;
      } else {
        const DivergenceEstimate est = quad_fdiv_1d(
            gen, density_1d(rd1, 0.0, 1.0), density_1d(rd1, std::sqrt(u), 1.0));
        row.h = est.value;
        row.std_error = 0.0;
        row.method = Method::quad_1d;
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("tabulate_hf: row u = " + std::to_string(u) +
                               " failed: " + e.what());
    }
    if (!std::isfinite(row.h)) {
      throw std::runtime_error("tabulate_hf: row u = " + std::to_string(u) +
                               " produced a non-finite estimate");
    }
    table.rows.push_back(row);
  }
  return table;
}

double rational_fit_max_rel_error(double a, double b, const HfTable& table) {
  double worst = 0.0;
  for (const HfRow& r : table.rows) {
    if (r.h == 0.0) continue;
    worst = std::max(worst, std::abs((a * r.u / (r.u + b) - r.h) / r.h));
  }
  return worst;
}

RationalFit fit_rational(const HfTable& table) {
  const auto& rows = table.rows;
  if (rows.size() < 4) {
    throw std::invalid_argument("fit_rational: need at least 4 rows");
  }
  double h_min = rows.front().h, h_max = rows.front().h;
  for (const HfRow& r : rows) {
    if (r.u <= 0.0) {
      throw std::invalid_argument("fit_rational: all u must be positive");
    }
    if (!(r.h > 0.0)) {
      throw std::invalid_argument("fit_rational: all h must be positive");
    }
    h_min = std::min(h_min, r.h);
    h_max = std::max(h_max, r.h);
  }
  if (h_max - h_min <= 1e-15 * std::abs(h_max)) {
    throw std::invalid_argument("fit_rational: degenerate table (all h equal)");
  }

  std::vector<double> us(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) us[i] = rows[i].u;
  std::vector<double> sorted_u = us;
  std::sort(sorted_u.begin(), sorted_u.end());
  double a = h_max;
  double b = sorted_u[sorted_u.size() / 2];

  auto sum_sq = [&rows](double aa, double bb) {
    double s = 0.0;
    for (const HfRow& r : rows) {
      const double res = (aa * r.u / (r.u + bb) - r.h) / r.h;
      s += res * res;
    }
    return s;
  };

  double lambda = 1e-3;
  double cost = sum_sq(a, b);
  bool converged = false;
  for (int iter = 0; iter < 200; ++iter) {
    // Normal equations of the relative residuals r_i = (a m_i - h_i)/h_i
    // with m_i = u_i/(u_i+b), dr/da = m_i/h_i, dr/db = -a u_i/(u_i+b)^2/h_i.
    double jaa = 0.0, jab = 0.0, jbb = 0.0, ga = 0.0, gb = 0.0;
    for (const HfRow& r : rows) {
      const double m = r.u / (r.u + b);
      const double res = (a * m - r.h) / r.h;
      const double da = m / r.h;
      const double db = -a * r.u / ((r.u + b) * (r.u + b)) / r.h;
      jaa += da * da;
      jab += da * db;
      jbb += db * db;
      ga += da * res;
      gb += db * res;
    }
    bool stepped = false;
    for (int damp = 0; damp < 40; ++damp) {
      const double daa = jaa * (1.0 + lambda);
      const double dbb = jbb * (1.0 + lambda);
      const double det = daa * dbb - jab * jab;
      if (det <= 0.0) {
        lambda *= 10.0;
        continue;
      }
      const double step_a = -(dbb * ga - jab * gb) / det;
      const double step_b = -(daa * gb - jab * ga) / det;
      const double na = a + step_a;
      const double nb = b + step_b;
      if (na <= 0.0 || nb <= 0.0) {
        lambda *= 10.0;
        continue;
      }
      const double ncost = sum_sq(na, nb);
      if (ncost <= cost) {
        const double rel_step = std::max(std::abs(step_a) / std::abs(na),
                                         std::abs(step_b) / std::abs(nb));
        a = na;
        b = nb;
        cost = ncost;
        lambda = std::max(lambda * 0.25, 1e-12);
        stepped = true;
        if (rel_step < 1e-10) converged = true;
        break;
      }
      lambda *= 10.0;
    }
    if (converged || !stepped) {
      converged = converged || !stepped;  // stalled at a minimum
      break;
    }
  }
  if (!converged) {
    throw std::runtime_error("fit_rational: did not converge in 200 iterations");
  }

  RationalFit fit;
  fit.a = a;
  fit.b = b;
  fit.u_min = *std::min_element(us.begin(), us.end());
  fit.u_max = *std::max_element(us.begin(), us.end());
  fit.max_rel_error = rational_fit_max_rel_error(a, b, table);
  return fit;
}

MonotonicityReport monotonicity_report(const HfTable& table) {
  if (table.rows.size() < 2) {
    throw std::invalid_argument("monotonicity_report: need at least 2 rows");
  }
  MonotonicityReport rep;
  rep.pass = true;
  rep.first_violation = -1;
  rep.slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
    const HfRow& lo = table.rows[i];
    const HfRow& hi = table.rows[i + 1];
    const double band = 3.0 * (lo.std_error + hi.std_error);
    const double margin = hi.h - lo.h + band;
    rep.slack = std::min(rep.slack, margin);
    const bool ok = band > 0.0 ? (margin > 0.0) : (hi.h > lo.h);
    if (!ok && rep.pass) {
      rep.pass = false;
      rep.first_violation = static_cast<long>(i);
    }
  }
  return rep;
}

std::string hf_table_csv(const HfTable& table) {
  std::ostringstream os;
  os << "u,h,std_error,method\n";
  for (const HfRow& r : table.rows) {
    os << format_double(r.u) << ',' << format_double(r.h) << ','
       << format_double(r.std_error) << ',' << method_name(r.method) << '\n';
  }
  return os.str();
}

HfTable parse_hf_table_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "u,h,std_error,method") {
    throw std::invalid_argument(
        "parse_hf_table_csv: expected header 'u,h,std_error,method'");
  }
  HfTable table;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string u, h, se, method;
    if (!std::getline(ls, u, ',') || !std::getline(ls, h, ',') ||
        !std::getline(ls, se, ',') || !std::getline(ls, method)) {
      throw std::invalid_argument("parse_hf_table_csv: malformed line " +
                                  std::to_string(line_no));
    }
    HfRow row;
    try {
      row.u = std::stod(u);
      row.h = std::stod(h);
      row.std_error = std::stod(se);
    } catch (const std::exception&) {
      throw std::invalid_argument("parse_hf_table_csv: bad number on line " +
                                  std::to_string(line_no));
    }
    row.method = parse_method(method);
    table.rows.push_back(row);
  }
  return table;
}

std::string format_rational_fit(const RationalFit& fit) {
  std::ostringstream os;
  os << "a=" << format_double(fit.a) << " b=" << format_double(fit.b)
     << " max_rel_error=" << format_double(fit.max_rel_error) << " domain=["
     << format_double(fit.u_min) << ',' << format_double(fit.u_max) << ']';
  return os.str();
}

}  // namespace divkit

#include "qroi/panel.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "qroi/impact.hpp"
#include "qroi/optim.hpp"
#include "qroi/rng.hpp"

namespace qroi {

namespace {

constexpr std::uint64_t kTagCountryBase = 0xA1;
constexpr std::uint64_t kTagSpendNoise = 0xA2;
constexpr std::uint64_t kTagSiiNoise = 0xA3;
constexpr double kAnchorLifeExpectancy = 79.0;

std::string trim(std::string s) {
  const auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && issp(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && issp(s[i])) ++i;
  return s.substr(i);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool is_missing(const std::string& cell) {
  return cell.empty() || cell == "NA" || cell == "na" || cell == "NaN" || cell == "nan";
}

double parse_double(const std::string& cell, std::size_t line_no, const char* column) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw DataError("unparseable " + std::string(column) + " at line " +
                    std::to_string(line_no) + ": '" + cell + "'");
  }
  return value;
}

int parse_year(const std::string& cell, std::size_t line_no) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw DataError("unparseable year at line " + std::to_string(line_no) + ": '" +
                    cell + "'");
  }
  return value;
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

// (mean LE / 100) * ln(1 + HS_j) regressors of the panel response.
Eigen::VectorXd panel_regressors(const std::vector<PanelRecord>& records) {
  double mean_le = 0.0;
  for (const PanelRecord& r : records) mean_le += r.life_expectancy;
  mean_le /= static_cast<double>(records.size());
  Eigen::VectorXd c(records.size());
  for (std::size_t j = 0; j < records.size(); ++j) {
    c[j] = mean_le / 100.0 * std::log1p(records[j].health_spending);
  }
  return c;
}

}  // namespace

PanelLoadResult load_panel(std::istream& source) {
  std::string line;
  if (!std::getline(source, line)) throw SchemaError("empty input: no header row");
  // Strip a UTF-8 BOM if present.
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  const std::vector<std::string> header = split_csv_line(line);
  const auto column = [&header](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw SchemaError("missing required column: " + name);
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t col_country = column("country");
  const std::size_t col_year = column("year");
  const std::size_t col_spending = column("health_spending");
  const std::size_t col_life = column("life_expectancy");
  const std::size_t needed =
      1 + std::max({col_country, col_year, col_spending, col_life});

  PanelLoadResult result;
  std::size_t line_no = 1;
  while (std::getline(source, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++result.rows_in;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() < needed) {
      throw DataError("too few cells at line " + std::to_string(line_no));
    }
    const std::string& spending_cell = cells[col_spending];
    const std::string& life_cell = cells[col_life];
    if (is_missing(spending_cell) || is_missing(life_cell)) {
      ++result.rows_dropped;
      continue;
    }
    PanelRecord record;
    record.country = cells[col_country];
    record.year = parse_year(cells[col_year], line_no);
    record.health_spending = parse_double(spending_cell, line_no, "health_spending");
    record.life_expectancy = parse_double(life_cell, line_no, "life_expectancy");
    if (record.health_spending <= 0.0) {
      ++result.rows_dropped;
      continue;
    }
    if (record.year < 1900 || record.year > 2100) {
      throw DataError("year out of range at line " + std::to_string(line_no));
    }
    if (!(record.life_expectancy > 0.0 && record.life_expectancy < 120.0)) {
      throw DataError("life_expectancy out of range at line " + std::to_string(line_no));
    }
    record.sii = sii_empirical(record.life_expectancy, record.health_spending);
    result.records.push_back(std::move(record));
  }
  return result;
}

PanelLoadResult load_panel_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open panel file: " + path);
  return load_panel(in);
}

void write_panel_csv(const std::vector<PanelRecord>& records, std::ostream& out) {
  out << "country,year,health_spending,life_expectancy\n";
  for (const PanelRecord& r : records) {
    out << r.country << ',' << r.year << ',' << format_double(r.health_spending) << ','
        << format_double(r.life_expectancy) << '\n';
  }
}

OlsFit fit_ols(const std::vector<PanelRecord>& records) {
  const long n = static_cast<long>(records.size());
  if (n < 2) throw DataError("OLS needs at least 2 records");
  Eigen::VectorXd x(n), y(n);
  for (long i = 0; i < n; ++i) {
    x[i] = std::log1p(records[i].health_spending);
    y[i] = records[i].sii;
  }
  const double mx = x.mean();
  const double my = y.mean();
  const Eigen::ArrayXd dx = x.array() - mx;
  const Eigen::ArrayXd dy = y.array() - my;
  const double sxx = (dx * dx).sum();
  if (!(sxx > 0.0)) throw DataError("degenerate regression: constant ln(1+HS)");

  OlsFit fit;
  fit.slope = (dx * dy).sum() / sxx;
  fit.intercept = my - fit.slope * mx;
  const double ss_tot = (dy * dy).sum();
  const double ss_res = (dy - fit.slope * dx).square().sum();
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.r_squared = std::clamp(fit.r_squared, 0.0, 1.0);
  fit.n_obs = n;
  return fit;
}

double ar1_phi(const Eigen::VectorXd& series) {
  if (series.size() < 2) throw DataError("AR(1) needs at least one lagged pair");
  double num = 0.0;
  double den = 0.0;
  for (Eigen::Index t = 1; t < series.size(); ++t) {
    num += series[t] * series[t - 1];
    den += series[t - 1] * series[t - 1];
  }
  if (!(den > 0.0)) throw DataError("degenerate AR(1) regressor: zero lagged variance");
  return num / den;
}

Ar1Fit fit_ar1(const std::vector<PanelRecord>& records) {
  std::map<std::string, std::vector<std::pair<int, double>>> by_country;
  for (const PanelRecord& r : records) by_country[r.country].emplace_back(r.year, r.sii);

  double weighted_phi = 0.0;
  long total_pairs = 0;
  int countries_used = 0;

  for (auto& [country, rows] : by_country) {
    std::sort(rows.begin(), rows.end());
    // Annual changes over consecutive-year pairs only; gaps break the chain.
    std::vector<std::pair<int, double>> deltas;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].first == rows[i - 1].first + 1) {
        deltas.emplace_back(rows[i].first, rows[i].second - rows[i - 1].second);
      }
    }
    double num = 0.0, den = 0.0;
    long pairs = 0;
    for (std::size_t i = 1; i < deltas.size(); ++i) {
      if (deltas[i].first != deltas[i - 1].first + 1) continue;
      num += deltas[i].second * deltas[i - 1].second;
      den += deltas[i - 1].second * deltas[i - 1].second;
      ++pairs;
    }
    if (pairs == 0 || !(den > 0.0)) continue;
    weighted_phi += static_cast<double>(pairs) * (num / den);
    total_pairs += pairs;
    ++countries_used;
  }

  if (countries_used == 0) {
    throw DataError("AR(1) calibration needs a country with >= 3 consecutive years");
  }
  Ar1Fit fit;
  fit.phi = weighted_phi / static_cast<double>(total_pairs);
  fit.t_hat = std::clamp(1.0 - fit.phi, 0.0, 1.0);
  fit.n_countries_used = countries_used;
  return fit;
}

BehavioralParams calibrate_behavioral(const std::vector<PanelRecord>& records,
                                      const InverseConfig& icfg) {
  icfg.validate();
  if (records.size() < 2) throw DataError("calibration needs at least 2 records");
  const Ar1Fit ar1 = fit_ar1(records);

  const Eigen::VectorXd c = panel_regressors(records);
  if (!((c.array() - c.mean()).square().sum() > 0.0)) {
    throw DataError("degenerate regression: single spending level");
  }
  Eigen::VectorXd sii(records.size());
  for (std::size_t j = 0; j < records.size(); ++j) sii[j] = records[j].sii;

  optim::LeastSquaresProblem problem;
  problem.residuals = [&](const Eigen::VectorXd& x) {
    const double product = x[0] * (1.0 - x[1]);
    Eigen::VectorXd r(c.size() + 2);
    r.head(c.size()) = sii - product * c;
    r[c.size()] = std::sqrt(icfg.beta1) * (x[0] - icfg.prior_lambda);
    r[c.size() + 1] = std::sqrt(icfg.beta2) * (x[1] - icfg.prior_gamma);
    return r;
  };
  problem.jacobian = [&](const Eigen::VectorXd& x) {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(c.size() + 2, 2);
    jac.col(0).head(c.size()) = -(1.0 - x[1]) * c;
    jac.col(1).head(c.size()) = x[0] * c;
    jac(c.size(), 0) = std::sqrt(icfg.beta1);
    jac(c.size() + 1, 1) = std::sqrt(icfg.beta2);
    return jac;
  };

  optim::BoxedLmOptions opts;
  opts.grad_tol = icfg.grad_tol;
  opts.step_tol = icfg.step_tol;
  opts.max_iters = icfg.max_iters;
  const Eigen::VectorXd lower = Eigen::VectorXd::Zero(2);
  const Eigen::VectorXd upper = Eigen::VectorXd::Ones(2);
  const Eigen::Vector2d tie_anchor(icfg.prior_lambda, icfg.prior_gamma);

  bool have_converged = false;
  bool first = true;
  optim::BoxedLmResult best;
  double best_anchor = 0.0;
  for (const Eigen::VectorXd& start : optim::halton_points(icfg.n_starts, 2)) {
    const optim::BoxedLmResult result =
        optim::minimize_box_lm(problem, lower, upper, start, opts);
    bool take = first;
    if (!take) {
      if (have_converged && !result.converged) {
        take = false;
      } else if (result.converged && !have_converged) {
        take = true;
      } else if (result.loss < best.loss - 1e-12) {
        take = true;
      } else if (result.loss <= best.loss + 1e-12) {
        take = (result.x - tie_anchor).norm() < best_anchor;
      }
    }
    if (take) {
      best = result;
      best_anchor = (best.x - tie_anchor).norm();
      have_converged = best.converged;
      first = false;
    }
  }

  BehavioralParams params{best.x[0], best.x[1], ar1.t_hat};
  if (!have_converged) {
    InverseFit carrier;
    carrier.params = params;
    carrier.loss = best.loss;
    carrier.grad_norm = best.grad_norm;
    carrier.iterations = best.iterations;
    throw ConvergenceError("panel calibration did not converge", carrier);
  }
  return params;
}

std::vector<PanelRecord> generate_synthetic_panel(const BehavioralParams& true_params,
                                                  int n_countries, int year_begin,
                                                  int year_end, double noise_sigma,
                                                  std::uint64_t seed) {
  true_params.validate();
  if (n_countries < 1) throw DomainError("n_countries must be >= 1");
  if (year_end < year_begin) throw DomainError("empty year range");
  if (year_begin < 1900 || year_end > 2100) throw DomainError("years must lie in [1900, 2100]");
  if (!(noise_sigma >= 0.0)) throw DomainError("noise_sigma must be >= 0");
  const double product = true_params.lambda * (1.0 - true_params.gamma);
  if (!(product > 0.0)) {
    throw DomainError("generator needs lambda (1 - gamma) > 0 to back-solve life expectancy");
  }

  std::vector<PanelRecord> records;
  records.reserve(static_cast<std::size_t>(n_countries) * (year_end - year_begin + 1));
  for (int c = 0; c < n_countries; ++c) {
    const double base =
        8.0 + rng::normal({seed, kTagCountryBase, static_cast<std::uint64_t>(c)});
    char name[16];
    std::snprintf(name, sizeof(name), "C%03d", c);
    for (int year = year_begin; year <= year_end; ++year) {
      const std::uint64_t j = static_cast<std::uint64_t>(year - year_begin);
      const double log_hs =
          base + 0.03 * static_cast<double>(j) +
          0.15 * rng::normal({seed, kTagSpendNoise, static_cast<std::uint64_t>(c), j});
      const double hs = std::exp(log_hs);
      double sii = product * (kAnchorLifeExpectancy / 100.0) * std::log1p(hs) +
                   noise_sigma * rng::normal({seed, kTagSiiNoise,
                                              static_cast<std::uint64_t>(c), j});
      double le = 100.0 * sii / std::log1p(hs);
      le = std::clamp(le, 0.5, 119.5);

      PanelRecord record;
      record.country = name;
      record.year = year;
      record.health_spending = hs;
      record.life_expectancy = le;
      record.sii = sii_empirical(le, hs);
      records.push_back(std::move(record));
    }
  }
  return records;
}

std::function<double(const BehavioralParams&)> panel_sii_objective(
    const std::vector<PanelRecord>& records) {
  if (records.empty()) throw DataError("panel objective needs records");
  double mean_le = 0.0;
  double mean_ln = 0.0;
  for (const PanelRecord& r : records) {
    mean_le += r.life_expectancy;
    mean_ln += std::log1p(r.health_spending);
  }
  mean_le /= static_cast<double>(records.size());
  mean_ln /= static_cast<double>(records.size());
  const double scale = mean_le / 100.0 * mean_ln;
  return [scale](const BehavioralParams& p) {
    return p.lambda * (1.0 - p.gamma) * scale;
  };
}

}  // namespace qroi

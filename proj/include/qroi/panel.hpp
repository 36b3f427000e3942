#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qroi/inverse.hpp"
#include "qroi/types.hpp"

namespace qroi {

/// One country-year row. `sii` is computed from the other columns by the
/// loader (empirical index formula), never read from the file.
struct PanelRecord {
  std::string country;
  int year = 0;
  double health_spending = 0.0;
  double life_expectancy = 0.0;
  double sii = 0.0;
};

struct PanelLoadResult {
  std::vector<PanelRecord> records;
  std::size_t rows_in = 0;       ///< data rows seen (header excluded)
  std::size_t rows_dropped = 0;  ///< cleaning: spending <= 0 or missing values
};

struct OlsFit {
  double slope = 0.0;      ///< d(sii) / d(ln(1 + health_spending))
  double intercept = 0.0;
  double r_squared = 0.0;
  long n_obs = 0;
};

struct Ar1Fit {
  double phi = 0.0;    ///< pooled AR(1) coefficient of annual sii changes
  double t_hat = 0.0;  ///< clip(1 - phi, 0, 1)
  int n_countries_used = 0;
};

/// Parses CSV with header columns country, year, health_spending,
/// life_expectancy (extra columns ignored). Comma separator, dot decimal,
/// UTF-8; empty or NA cells count as missing. Rows with spending <= 0 or
/// missing values are dropped and counted; non-empty unparseable cells raise
/// a data error naming the line.
PanelLoadResult load_panel(std::istream& source);
PanelLoadResult load_panel_file(const std::string& path);

/// Schema-column serialization; sii is recomputed on load.
void write_panel_csv(const std::vector<PanelRecord>& records, std::ostream& out);

/// Closed-form least squares of sii on ln(1 + health_spending).
OlsFit fit_ols(const std::vector<PanelRecord>& records);

/// No-intercept least squares of x_t on x_{t-1}; needs at least one lagged pair.
double ar1_phi(const Eigen::VectorXd& series);

/// Per-country AR(1) on annual sii changes over consecutive-year pairs,
/// pooled by observation-weighted mean. Needs a country with >= 3
/// consecutive years.
Ar1Fit fit_ar1(const std::vector<PanelRecord>& records);

/// The reduced-form bridge to the structural estimator: T from fit_ar1;
/// (lambda, gamma) minimize the regularized inverse loss of the panel
/// response lambda (1-gamma) (mean life expectancy / 100) ln(1 + HS) against
/// the sii column over [0,1]^2. A reconstruction of the unpublished mapping,
/// identified only up to the product lambda (1-gamma) plus the priors.
BehavioralParams calibrate_behavioral(const std::vector<PanelRecord>& records,
                                      const InverseConfig& icfg);

/// Synthetic panel for recovery tests: per-country lognormal spending with
/// mild drift, sii from the panel response at true_params (anchor life
/// expectancy 79) plus Gaussian noise, and life expectancy back-solved so
/// that sii equals the empirical index of the row exactly. Deterministic
/// given seed. Needs lambda (1-gamma) > 0.
std::vector<PanelRecord> generate_synthetic_panel(const BehavioralParams& true_params,
                                                  int n_countries, int year_begin,
                                                  int year_end, double noise_sigma,
                                                  std::uint64_t seed);

/// Macro objective of a panel: lambda (1-gamma) (mean LE / 100) mean(ln(1+HS)).
/// Constant in T (instantaneous-adaptation regime).
std::function<double(const BehavioralParams&)> panel_sii_objective(
    const std::vector<PanelRecord>& records);

}  // namespace qroi

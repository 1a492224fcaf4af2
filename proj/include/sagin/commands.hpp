#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sagin/attenuation.hpp"
#include "sagin/scenario.hpp"
#include "sagin/validation.hpp"

/// The analyses behind the `sagin` subcommands. Each returns a table whose
/// column order is fixed; rows come out in grid order whatever the thread
/// completion order.
namespace sagin::commands {

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;

  /// Header row plus one record per row; numbers in shortest round-trip
  /// form with '.' as decimal separator regardless of the global locale.
  void write_csv(std::ostream& out) const;
};

enum class SweepScale { linear, db };

/// `start:stop:points[:linear|dB]`, evenly spaced in the chosen scale.
struct Sweep {
  double start;
  double stop;
  int points;
  SweepScale scale;

  static Sweep parse(const std::string& text, SweepScale default_scale);
  /// Grid values as written (dB values stay in dB).
  std::vector<double> grid() const;
  /// Grid values in linear units (dB values converted).
  std::vector<double> linear_values() const;
};

/// theta0 sweep in degrees; default is the scenario's single angle.
/// Columns: theta0_deg, d_rf_simple_km, d_rf_accurate_km, ground_range_km,
/// d_st_km, d_dif_km, theta_e_deg, flat_benchmark_km, path_loss_db,
/// lambda_t_db.
Table geometry(const scenario::Scenario& s, const std::optional<Sweep>& theta0_deg,
               const attenuation::CoefficientTable* table);

/// Time sweep in seconds; default -300:300:61.
/// Columns: t_s, psi_rad, doppler_ratio, doppler_hz_at_fc.
Table doppler(const scenario::Scenario& s, const std::optional<Sweep>& time_s);

enum class PerfAxis { snr, power };

struct PerfOptions {
  /// SNR axis: lambda_t (dB scale by default). Power axis: P_s in dBm, with
  /// lambda_t from the scenario's link budget.
  std::optional<Sweep> sweep;
  PerfAxis axis = PerfAxis::snr;
  /// Optional family of curves: "m", "K" or "M" with its values.
  std::string series;
  std::vector<double> series_values;
  bool monte_carlo = false;
  montecarlo::McConfig mc;
};

/// Columns: series, series_value, x, lambda_t, P_out, R_er, BER_bound,
/// BER_valid, R_GP, then with Monte-Carlo P_out_mc, P_out_se, R_er_mc,
/// R_er_se, mc_trials, mc_seed.
Table perf(const scenario::Scenario& s, const PerfOptions& opts,
           const attenuation::CoefficientTable* table);

/// |h|^2 grid; default 0:4:41 linear. Columns: x, pdf, cdf, cdf_lemma, then
/// with Monte-Carlo ecdf, ecdf_se.
Table fading(const scenario::Scenario& s, const std::optional<Sweep>& x,
             std::optional<montecarlo::McConfig> mc);

validation::Report validate(const scenario::Scenario& s, const validation::ValidationOptions& o);

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidationFailed = 1,
  kExitConfigError = 2,
  kExitNumericalError = 3,
};

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sagin::commands

#include "sagin/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "sagin/error.hpp"
#include "sagin/performance.hpp"

namespace sagin::commands {

namespace {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string csv_field(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return quoted + "\"";
}

/// Evaluates fn(0..n-1) on worker threads, results in index order.
template <typename F>
auto parallel_rows(std::size_t n, F&& fn) {
  using R = decltype(fn(std::size_t{}));
  std::vector<R> out;
  out.reserve(n);
  const std::size_t batch = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t begin = 0; begin < n; begin += batch) {
    std::vector<std::future<R>> jobs;
    for (std::size_t i = begin; i < std::min(n, begin + batch); ++i)
      jobs.push_back(std::async(std::launch::async, [&fn, i] { return fn(i); }));
    for (auto& j : jobs) out.push_back(j.get());
  }
  return out;
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace

std::size_t Table::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

double Table::number(std::size_t row, const std::string& name) const {
  const auto& cell = rows.at(row).at(column(name));
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  return std::get<double>(cell);
}

void Table::write_csv(std::ostream& out) const {
  std::string text;
  for (std::size_t i = 0; i < columns.size(); ++i) text += (i ? "," : "") + columns[i];
  text += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + csv_field(row[i]);
    text += '\n';
  }
  out << text;
}

Sweep Sweep::parse(const std::string& text, SweepScale default_scale) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() < 3 || parts.size() > 4)
    throw ConfigError("--sweep", "expected start:stop:points[:linear|dB], got '" + text + "'");
  const auto number = [&](const std::string& p, auto& value) {
    const auto res = std::from_chars(p.data(), p.data() + p.size(), value);
    if (p.empty() || res.ec != std::errc{} || res.ptr != p.data() + p.size())
      throw ConfigError("--sweep", "malformed number '" + p + "' in '" + text + "'");
  };
  Sweep s{0.0, 0.0, 0, default_scale};
  number(parts[0], s.start);
  number(parts[1], s.stop);
  number(parts[2], s.points);
  if (parts.size() == 4) {
    if (parts[3] == "linear") {
      s.scale = SweepScale::linear;
    } else if (parts[3] == "dB" || parts[3] == "db") {
      s.scale = SweepScale::db;
    } else {
      throw ConfigError("--sweep", "scale must be 'linear' or 'dB', got '" + parts[3] + "'");
    }
  }
  if (s.points < 1) throw ConfigError("--sweep", "points must be >= 1");
  if (s.points > 1 && !(s.stop > s.start))
    throw ConfigError("--sweep", "stop must exceed start");
  return s;
}

std::vector<double> Sweep::grid() const {
  std::vector<double> g;
  for (int i = 0; i < points; ++i)
    g.push_back(points == 1 ? start : start + (stop - start) * i / (points - 1));
  return g;
}

std::vector<double> Sweep::linear_values() const {
  auto g = grid();
  if (scale == SweepScale::db)
    for (double& v : g) v = std::pow(10.0, v / 10.0);
  return g;
}

Table geometry(const scenario::Scenario& s, const std::optional<Sweep>& theta0_deg,
               const attenuation::CoefficientTable* table) {
  const auto angles =
      theta0_deg ? theta0_deg->grid() : std::vector<double>{s.detected_elevation_deg};
  const auto profile = s.profile();
  Table t;
  t.columns = {"theta0_deg",      "d_rf_simple_km", "d_rf_accurate_km", "ground_range_km",
               "d_st_km",         "d_dif_km",       "theta_e_deg",      "flat_benchmark_km",
               "path_loss_db",    "lambda_t_db"};
  t.rows = parallel_rows(angles.size(), [&](std::size_t i) {
    const double deg = angles[i];
    const auto g = s.geometry_at(deg);
    const double simple = refraction::bending_length(profile, g, refraction::BendingModel::simple);
    const double accurate =
        refraction::bending_length(profile, g, refraction::BendingModel::accurate);
    const auto ray = refraction::trace(profile, g, s.bending_model);
    const auto lb = scenario::link_budget(s, table, deg);
    return std::vector<Cell>{deg,
                             simple,
                             accurate,
                             ray.ground_range_km,
                             ray.straight_length_km,
                             ray.excess_km,
                             rad_to_deg(ray.true_elevation_rad),
                             refraction::flat_earth_slant(g),
                             -to_db(lb.factors.path_loss),
                             to_db(lb.lambda_t)};
  });
  return t;
}

Table doppler(const scenario::Scenario& s, const std::optional<Sweep>& time_s) {
  const Sweep sweep = time_s.value_or(Sweep{-300.0, 300.0, 61, SweepScale::linear});
  const auto earth = s.earth();
  const auto sat = s.satellite();
  const auto pass = s.pass();
  const double fc = s.frequency_ghz * 1e9;
  Table t;
  t.columns = {"t_s", "psi_rad", "doppler_ratio", "doppler_hz_at_fc"};
  for (double time : sweep.grid()) {
    // Offsets from the epoch so the grid is symmetric about t0.
    const double at = pass.epoch_s + time;
    const double ratio = kinematics::normalized_doppler(earth, sat, pass, at);
    t.rows.push_back({at, pass.swept_angle(at), ratio, ratio * fc});
  }
  return t;
}

Table perf(const scenario::Scenario& s, const PerfOptions& opts,
           const attenuation::CoefficientTable* table) {
  const Sweep sweep = opts.sweep.value_or(
      opts.axis == PerfAxis::snr ? Sweep{0.0, 40.0, 9, SweepScale::db}
                                 : Sweep{s.transmit_dbm, s.transmit_dbm + 40.0, 9,
                                         SweepScale::db});
  const auto xs = sweep.grid();

  struct Variant {
    std::string label;
    double value;
    scenario::Scenario scen;
  };
  std::vector<Variant> variants;
  if (opts.series.empty()) {
    variants.push_back({"base", 0.0, s});
  } else {
    if (opts.series_values.empty()) throw ConfigError("--series", "no values given");
    for (double v : opts.series_values) {
      scenario::Scenario c = s;
      if (opts.series == "m") {
        if (v != std::floor(v) || v < 1) throw ConfigError("--series", "m values must be integers >= 1");
        c.nakagami_m = static_cast<int>(v);
      } else if (opts.series == "K") {
        if (!(v > 0.0)) throw ConfigError("--series", "K values must be positive");
        // Keep the mean power, move it between LoS and scatter.
        const double mean = s.b0 * 2.0 + s.omega;
        c.b0 = mean / (2.0 * (1.0 + v));
        c.omega = mean * v / (1.0 + v);
      } else if (opts.series == "M") {
        c.qam_order = static_cast<int>(v);
        if (v != std::floor(v) || !performance::is_square_qam(c.qam_order))
          throw ConfigError("--series", "M values must be 4, 16, 64, ...");
      } else {
        throw ConfigError("--series", "series must be m, K or M, got '" + opts.series + "'");
      }
      variants.push_back({opts.series, v, c});
    }
  }

  Table t;
  t.columns = {"series", "series_value", "x", "lambda_t", "P_out", "R_er",
               "BER_bound", "BER_valid", "R_GP"};
  if (opts.monte_carlo) {
    for (const char* c : {"P_out_mc", "P_out_se", "R_er_mc", "R_er_se", "mc_trials", "mc_seed"})
      t.columns.emplace_back(c);
  }
  const std::size_t per = xs.size();
  t.rows = parallel_rows(variants.size() * per, [&](std::size_t idx) {
    const auto& var = variants[idx / per];
    const double x = xs[idx % per];
    double lambda = 0.0;
    if (opts.axis == PerfAxis::snr) {
      lambda = sweep.scale == SweepScale::db ? std::pow(10.0, x / 10.0) : x;
    } else {
      scenario::Scenario c = var.scen;
      c.transmit_dbm = sweep.scale == SweepScale::db ? x : attenuation::watt_to_dbm(x);
      lambda = scenario::link_budget(c, table, c.detected_elevation_deg).lambda_t;
    }
    const auto fading = var.scen.fading();
    const performance::PerformanceInputs in{lambda, fading, var.scen.qam_order,
                                            var.scen.outage_threshold};
    const auto ber = performance::ber_upper_bound(in);
    std::vector<Cell> row{var.label,
                          var.value,
                          x,
                          lambda,
                          performance::outage_probability(in),
                          performance::ergodic_rate(in),
                          ber.value,
                          std::int64_t{ber.within_validity ? 1 : 0},
                          performance::goodput_lower_bound(in)};
    if (opts.monte_carlo) {
      const auto op = montecarlo::estimate_outage(fading, lambda, in.outage_threshold, opts.mc);
      const auto er = montecarlo::estimate_ergodic_rate(fading, lambda, opts.mc);
      row.insert(row.end(), {op.mean, op.std_error, er.mean, er.std_error,
                             std::int64_t{opts.mc.trials},
                             std::to_string(opts.mc.master_seed)});
    }
    return row;
  });
  return t;
}

Table fading(const scenario::Scenario& s, const std::optional<Sweep>& x,
             std::optional<montecarlo::McConfig> mc) {
  const auto xs = x.value_or(Sweep{0.0, 4.0, 41, SweepScale::linear}).linear_values();
  const auto p = s.fading();
  Table t;
  t.columns = {"x", "pdf", "cdf", "cdf_lemma"};
  std::vector<montecarlo::McEstimate> ecdf;
  if (mc) {
    t.columns.emplace_back("ecdf");
    t.columns.emplace_back("ecdf_se");
    ecdf = montecarlo::estimate_power_cdf(p, xs, *mc);
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::vector<Cell> row{xs[i], fading::pdf_power(p, xs[i]), fading::cdf_power(p, xs[i]),
                          fading::cdf_power_lemma(p, xs[i])};
    if (mc) {
      row.emplace_back(ecdf[i].mean);
      row.emplace_back(ecdf[i].std_error);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

validation::Report validate(const scenario::Scenario& s, const validation::ValidationOptions& o) {
  return validation::run(s, o);
}

namespace {

std::vector<double> parse_list(const std::string& text, const std::string& where) {
  std::vector<double> values;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc{} || res.ptr != item.data() + item.size())
      throw ConfigError(where, "malformed number '" + item + "'");
    values.push_back(v);
  }
  return values;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Satellite-to-ground channel model: geometry, Doppler, fading and link performance"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string coefficients_path;
  std::string out_path;
  bool dump_config = false;
  app.add_option("--config", config_path, "Scenario file (defaults to the built-in baseline)");
  app.add_option("--coefficients", coefficients_path,
                 "Rain/cloud coefficient table, overriding the scenario's");
  app.add_option("--out", out_path, "Write CSV here instead of stdout");
  app.add_flag("--dump-config", dump_config, "Print the effective scenario and exit");

  std::string sweep_text;
  bool mc = false;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  std::string series_text;
  std::string axis_text = "snr";

  auto* geometry_cmd = app.add_subcommand("geometry", "Ray geometry per detected elevation");
  geometry_cmd->add_option("--sweep", sweep_text, "theta0 grid in degrees");
  auto* doppler_cmd = app.add_subcommand("doppler", "Normalized Doppler over a pass");
  doppler_cmd->add_option("--sweep", sweep_text, "time offsets from the epoch in seconds");
  auto* perf_cmd = app.add_subcommand("perf", "Outage, ergodic rate, BER bound and goodput");
  perf_cmd->add_option("--sweep", sweep_text, "x grid (lambda_t, or P_s with --axis power)");
  perf_cmd->add_option("--axis", axis_text, "snr or power")->check(CLI::IsMember({"snr", "power"}));
  perf_cmd->add_option("--series", series_text, "curve family, e.g. m=2,3,4,5 or K=0.5,1,4");
  auto* fading_cmd = app.add_subcommand("fading", "PDF/CDF of the power gain");
  fading_cmd->add_option("--sweep", sweep_text, "|h|^2 grid");
  auto* validate_cmd = app.add_subcommand("validate", "Run the oracle suite");
  for (auto* cmd : {perf_cmd, fading_cmd, validate_cmd}) {
    if (cmd != validate_cmd) cmd->add_flag("--mc", mc, "Add Monte-Carlo columns");
    cmd->add_option("--trials", trials, "Monte-Carlo trials");
    cmd->add_option("--seed", seed, "Monte-Carlo master seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    scenario::Scenario s = config_path.empty() ? scenario::Scenario{} : scenario::load(config_path);
    if (!coefficients_path.empty()) {
      s.coefficients = coefficients_path;
      s.base_dir.clear();
    }
    if (trials > 0) s.mc_trials = trials;
    if (validate_cmd->count("--seed") + perf_cmd->count("--seed") + fading_cmd->count("--seed") > 0)
      s.seed = seed;
    s.validate();

    std::ofstream file;
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) throw ConfigError(out_path, "cannot open output file");
    }
    std::ostream& sink = out_path.empty() ? out : file;

    if (dump_config) {
      scenario::dump(sink, s);
      return kExitOk;
    }
    if (app.get_subcommands().empty()) {
      err << app.help();
      return kExitConfigError;
    }

    std::optional<attenuation::CoefficientTable> table;
    if (const auto path = s.coefficient_path(); !path.empty())
      table = attenuation::CoefficientTable::load(path);
    const attenuation::CoefficientTable* table_ptr = table ? &*table : nullptr;

    std::optional<Sweep> sweep;
    const auto parse_sweep = [&](SweepScale scale) {
      if (!sweep_text.empty()) sweep = Sweep::parse(sweep_text, scale);
    };

    if (geometry_cmd->parsed()) {
      parse_sweep(SweepScale::linear);
      geometry(s, sweep, table_ptr).write_csv(sink);
    } else if (doppler_cmd->parsed()) {
      parse_sweep(SweepScale::linear);
      doppler(s, sweep).write_csv(sink);
    } else if (perf_cmd->parsed()) {
      PerfOptions opts;
      opts.axis = axis_text == "power" ? PerfAxis::power : PerfAxis::snr;
      parse_sweep(SweepScale::db);
      opts.sweep = sweep;
      if (!series_text.empty()) {
        const auto eq = series_text.find('=');
        if (eq == std::string::npos)
          throw ConfigError("--series", "expected name=v1,v2,..., got '" + series_text + "'");
        opts.series = series_text.substr(0, eq);
        opts.series_values = parse_list(series_text.substr(eq + 1), "--series");
      }
      opts.monte_carlo = mc;
      opts.mc = s.mc_config();
      perf(s, opts, table_ptr).write_csv(sink);
    } else if (fading_cmd->parsed()) {
      parse_sweep(SweepScale::linear);
      fading(s, sweep, mc ? std::optional(s.mc_config()) : std::nullopt).write_csv(sink);
    } else if (validate_cmd->parsed()) {
      const auto report = validate(s, {s.mc_config(), table_ptr});
      report.write_csv(sink);
      err << report.checks.size() - report.failures() << "/" << report.checks.size()
          << " checks passed\n";
      return report.all_passed() ? kExitOk : kExitValidationFailed;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const NumericalDomainError& e) {
    err << "numerical domain error: " << e.what() << '\n';
    return kExitNumericalError;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::out_of_range& e) {
    err << "out of range: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace sagin::commands

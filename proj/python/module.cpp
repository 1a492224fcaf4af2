#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sagin/commands.hpp"
#include "sagin/error.hpp"
#include "sagin/fading.hpp"
#include "sagin/kinematics.hpp"
#include "sagin/montecarlo.hpp"
#include "sagin/performance.hpp"
#include "sagin/refraction.hpp"
#include "sagin/scenario.hpp"
#include "sagin/validation.hpp"

namespace py = pybind11;
using namespace sagin;

namespace {

refraction::BendingModel bending_model(const std::string& name) {
  if (name == "simple") return refraction::BendingModel::simple;
  if (name == "accurate") return refraction::BendingModel::accurate;
  throw std::invalid_argument("bending model must be 'simple' or 'accurate', got '" + name + "'");
}

refraction::QuadratureRule quadrature_rule(const std::string& name) {
  if (name == "fejer") return refraction::QuadratureRule::fejer;
  if (name == "chebyshev_gauss") return refraction::QuadratureRule::chebyshev_gauss;
  throw std::invalid_argument("quadrature rule must be 'fejer' or 'chebyshev_gauss', got '" + name + "'");
}

py::dict table_dict(const commands::Table& t) {
  py::dict d;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    py::list col;
    for (const auto& row : t.rows) std::visit([&](const auto& v) { col.append(v); }, row[c]);
    d[py::str(t.columns[c])] = col;
  }
  return d;
}

std::optional<commands::Sweep> sweep_arg(const std::optional<std::string>& text, commands::SweepScale scale) {
  if (!text) return std::nullopt;
  return commands::Sweep::parse(*text, scale);
}

montecarlo::McConfig mc_config(std::int64_t trials, std::uint64_t seed, int streams) {
  montecarlo::McConfig c;
  c.trials = trials;
  c.master_seed = seed;
  c.stream_count = streams;
  c.validate();
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Satellite-to-ground channel model: refraction geometry, Doppler, fading and link metrics";

  auto config_error = py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalDomainError>(m, "NumericalDomainError", PyExc_ArithmeticError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  (void)config_error;

  py::class_<fading::ShadowedRicianParams>(m, "ShadowedRicianParams")
      .def(py::init<double, double, int>(), py::arg("b0"), py::arg("omega"), py::arg("m"))
      .def_static("from_k_factor", &fading::ShadowedRicianParams::from_k_factor, py::arg("k"), py::arg("m"))
      .def_property_readonly("b0", &fading::ShadowedRicianParams::half_scatter_power)
      .def_property_readonly("omega", &fading::ShadowedRicianParams::los_power)
      .def_property_readonly("m", &fading::ShadowedRicianParams::nakagami_m)
      .def_property_readonly("rician_k", &fading::ShadowedRicianParams::rician_k)
      .def_property_readonly("k_los", &fading::ShadowedRicianParams::k_los)
      .def_property_readonly("k_sct", &fading::ShadowedRicianParams::k_sct)
      .def_property_readonly("mean_power", &fading::ShadowedRicianParams::mean_power)
      .def("mixture_weight", &fading::ShadowedRicianParams::mixture_weight, py::arg("k"))
      .def("__repr__", [](const fading::ShadowedRicianParams& p) {
        std::ostringstream os;
        os << "ShadowedRicianParams(b0=" << p.half_scatter_power() << ", omega=" << p.los_power()
           << ", m=" << p.nakagami_m() << ")";
        return os.str();
      });

  m.def("pdf_power", &fading::pdf_power, py::arg("params"), py::arg("x"));
  m.def("cdf_power", &fading::cdf_power, py::arg("params"), py::arg("x"));
  m.def("cdf_power_lemma", &fading::cdf_power_lemma, py::arg("params"), py::arg("x"));
  m.def(
      "sample_power",
      [](const fading::ShadowedRicianParams& p, std::size_t n, std::uint64_t seed) {
        auto rng = fading::make_stream(seed, 0);
        fading::PowerSampler draw(p);
        std::vector<double> out(n);
        for (auto& x : out) x = draw(rng);
        return out;
      },
      py::arg("params"), py::arg("n"), py::arg("seed") = 0);

  py::class_<refraction::RefractionProfile>(m, "RefractionProfile")
      .def(py::init([](double n0, double h0, int order, const std::string& rule) {
             auto p = refraction::RefractionProfile::exponential(n0, h0, order).with_rule(quadrature_rule(rule));
             p.validate();
             return p;
           }),
           py::arg("surface_refractivity") = 315.0, py::arg("scale_height_km") = 7.5,
           py::arg("quadrature_order") = 64, py::arg("rule") = "fejer")
      .def_property_readonly("surface_refractivity", &refraction::RefractionProfile::surface_refractivity)
      .def_property_readonly("scale_height_km", &refraction::RefractionProfile::scale_height_km)
      .def_property_readonly("quadrature_order", &refraction::RefractionProfile::quadrature_order)
      .def("refractive_index", [](const refraction::RefractionProfile& p, double h) {
        return refraction::refractive_index(p, h);
      }, py::arg("altitude_km"));

  py::class_<refraction::GeometryScenario>(m, "GeometryScenario")
      .def(py::init([](double elevation_deg, double altitude_km, double radius_km) {
             refraction::GeometryScenario g{radius_km, altitude_km, deg_to_rad(elevation_deg)};
             g.validate();
             return g;
           }),
           py::arg("detected_elevation_deg") = 60.0, py::arg("altitude_km") = 300.0,
           py::arg("earth_radius_km") = kEarthRadiusKm)
      .def_readonly("earth_radius_km", &refraction::GeometryScenario::earth_radius_km)
      .def_readonly("altitude_km", &refraction::GeometryScenario::altitude_km)
      .def_readonly("detected_elevation_rad", &refraction::GeometryScenario::detected_elevation_rad);

  py::class_<refraction::RayPathResult>(m, "RayPath")
      .def_readonly("bending_length_km", &refraction::RayPathResult::bending_length_km)
      .def_readonly("ground_range_km", &refraction::RayPathResult::ground_range_km)
      .def_readonly("straight_length_km", &refraction::RayPathResult::straight_length_km)
      .def_readonly("excess_km", &refraction::RayPathResult::excess_km)
      .def_readonly("true_elevation_rad", &refraction::RayPathResult::true_elevation_rad)
      .def_readonly("detected_elevation_rad", &refraction::RayPathResult::detected_elevation_rad);

  m.def("trace", [](const refraction::RefractionProfile& p, const refraction::GeometryScenario& g,
                    const std::string& model) { return refraction::trace(p, g, bending_model(model)); },
        py::arg("profile"), py::arg("geometry"), py::arg("model") = "accurate");
  m.def("bending_length", [](const refraction::RefractionProfile& p, const refraction::GeometryScenario& g,
                             const std::string& model) {
    return refraction::bending_length(p, g, bending_model(model));
  }, py::arg("profile"), py::arg("geometry"), py::arg("model") = "accurate");
  m.def("ground_range", &refraction::ground_range, py::arg("profile"), py::arg("geometry"));
  m.def("flat_earth_slant", &refraction::flat_earth_slant, py::arg("geometry"));

  m.def("outage_probability", [](double lt, const fading::ShadowedRicianParams& p, double th) {
    return performance::outage_probability({lt, p, 4, th});
  }, py::arg("lambda_t"), py::arg("params"), py::arg("gamma_th") = 0.1);
  m.def("ergodic_rate", [](double lt, const fading::ShadowedRicianParams& p) {
    return performance::ergodic_rate({lt, p});
  }, py::arg("lambda_t"), py::arg("params"));
  m.def("ber_upper_bound", [](double lt, const fading::ShadowedRicianParams& p, int q) {
    const auto b = performance::ber_upper_bound({lt, p, q});
    return py::make_tuple(b.value, b.within_validity);
  }, py::arg("lambda_t"), py::arg("params"), py::arg("qam_order") = 4);
  m.def("goodput_lower_bound", [](double lt, const fading::ShadowedRicianParams& p, int q) {
    return performance::goodput_lower_bound({lt, p, q});
  }, py::arg("lambda_t"), py::arg("params"), py::arg("qam_order") = 4);

  py::class_<montecarlo::McEstimate>(m, "McEstimate")
      .def_readonly("mean", &montecarlo::McEstimate::mean)
      .def_readonly("std_error", &montecarlo::McEstimate::std_error)
      .def_readonly("trials", &montecarlo::McEstimate::trials)
      .def("consistent_with", &montecarlo::McEstimate::consistent_with, py::arg("expected"),
           py::arg("sigma") = 3.0);

  m.def("estimate_outage", [](const fading::ShadowedRicianParams& p, double lt, double th, std::int64_t n,
                              std::uint64_t seed, int streams) {
    return montecarlo::estimate_outage(p, lt, th, mc_config(n, seed, streams));
  }, py::arg("params"), py::arg("lambda_t"), py::arg("gamma_th") = 0.1, py::arg("trials") = 1'000'000,
        py::arg("seed") = 0x5A61, py::arg("streams") = 8, py::call_guard<py::gil_scoped_release>());
  m.def("estimate_ergodic_rate", [](const fading::ShadowedRicianParams& p, double lt, std::int64_t n,
                                    std::uint64_t seed, int streams) {
    return montecarlo::estimate_ergodic_rate(p, lt, mc_config(n, seed, streams));
  }, py::arg("params"), py::arg("lambda_t"), py::arg("trials") = 1'000'000, py::arg("seed") = 0x5A61,
        py::arg("streams") = 8, py::call_guard<py::gil_scoped_release>());

  py::class_<scenario::Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_static("load", &scenario::load, py::arg("path"))
      .def_static("parse", [](const std::string& text) {
        std::istringstream in(text);
        return scenario::parse(in, "<string>");
      }, py::arg("text"))
      .def("dump", [](const scenario::Scenario& s) { return scenario::dump(s); })
      .def("validate", &scenario::Scenario::validate)
      .def("__eq__", [](const scenario::Scenario& a, const scenario::Scenario& b) { return a == b; })
      .def_readwrite("altitude_km", &scenario::Scenario::altitude_km)
      .def_readwrite("detected_elevation_deg", &scenario::Scenario::detected_elevation_deg)
      .def_readwrite("max_elevation_deg", &scenario::Scenario::max_elevation_deg)
      .def_readwrite("surface_refractivity", &scenario::Scenario::surface_refractivity)
      .def_readwrite("scale_height_km", &scenario::Scenario::scale_height_km)
      .def_readwrite("b0", &scenario::Scenario::b0)
      .def_readwrite("omega", &scenario::Scenario::omega)
      .def_readwrite("m", &scenario::Scenario::nakagami_m)
      .def_readwrite("frequency_ghz", &scenario::Scenario::frequency_ghz)
      .def_readwrite("transmit_dbm", &scenario::Scenario::transmit_dbm)
      .def_readwrite("noise_dbm", &scenario::Scenario::noise_dbm)
      .def_readwrite("outage_threshold", &scenario::Scenario::outage_threshold)
      .def_readwrite("qam_order", &scenario::Scenario::qam_order)
      .def_readwrite("mc_trials", &scenario::Scenario::mc_trials)
      .def_readwrite("seed", &scenario::Scenario::seed)
      .def("fading", &scenario::Scenario::fading)
      .def("profile", &scenario::Scenario::profile)
      .def("geometry", &scenario::Scenario::geometry)
      .def("lambda_t", [](const scenario::Scenario& s) {
        return scenario::link_budget(s, nullptr, s.detected_elevation_deg).lambda_t;
      })
      .def("normalized_doppler", [](const scenario::Scenario& s, double t_s) {
        return kinematics::normalized_doppler(s.earth(), s.satellite(), s.pass(), t_s);
      }, py::arg("t_s"));

  m.def("geometry_table", [](const scenario::Scenario& s, std::optional<std::string> sweep) {
    return table_dict(commands::geometry(s, sweep_arg(sweep, commands::SweepScale::linear), nullptr));
  }, py::arg("scenario"), py::arg("sweep") = py::none());
  m.def("doppler_table", [](const scenario::Scenario& s, std::optional<std::string> sweep) {
    return table_dict(commands::doppler(s, sweep_arg(sweep, commands::SweepScale::linear)));
  }, py::arg("scenario"), py::arg("sweep") = py::none());
  m.def("perf_table", [](const scenario::Scenario& s, std::optional<std::string> sweep, const std::string& series,
                         const std::vector<double>& values) {
    commands::PerfOptions o;
    o.sweep = sweep_arg(sweep, commands::SweepScale::db);
    o.series = series;
    o.series_values = values;
    return table_dict(commands::perf(s, o, nullptr));
  }, py::arg("scenario"), py::arg("sweep") = py::none(), py::arg("series") = "",
        py::arg("values") = std::vector<double>{});

  m.def("validate", [](const scenario::Scenario& s, std::int64_t trials) {
    validation::ValidationOptions o{s.mc_config(), nullptr};
    if (trials > 0) o.mc.trials = trials;
    std::optional<attenuation::CoefficientTable> table;
    if (const auto path = s.coefficient_path(); !path.empty()) {
      table = attenuation::CoefficientTable::load(path);
      o.table = &*table;
    }
    py::gil_scoped_release release;
    return validation::run(s, o);
  }, py::arg("scenario"), py::arg("trials") = 0);

  py::class_<validation::CheckResult>(m, "CheckResult")
      .def_readonly("name", &validation::CheckResult::name)
      .def_readonly("expected", &validation::CheckResult::expected)
      .def_readonly("got", &validation::CheckResult::got)
      .def_readonly("tolerance", &validation::CheckResult::tolerance)
      .def_readonly("passed", &validation::CheckResult::passed);
  py::class_<validation::Report>(m, "Report")
      .def_readonly("checks", &validation::Report::checks)
      .def("all_passed", &validation::Report::all_passed)
      .def("failures", &validation::Report::failures);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::vector<std::string> full{"sagin"};
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : full) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = commands::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}

#include "sagin/scenario.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string_view>

#include "sagin/error.hpp"

namespace sagin::scenario {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

template <typename T>
T parse_number(std::string_view text, const std::string& where, const char* what) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != end)
    throw ConfigError(where, "expected " + std::string(what) + ", got '" + std::string(text) + "'");
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) throw ConfigError(where, "value must be finite");
  }
  return value;
}

double parse_double(std::string_view t, const std::string& w) {
  return parse_number<double>(t, w, "a number");
}

template <typename E>
struct EnumNames {
  std::vector<std::pair<E, const char*>> names;

  E parse(std::string_view text, const std::string& where) const {
    std::string options;
    for (const auto& [value, name] : names) {
      if (text == name) return value;
      options += options.empty() ? name : std::string("|") + name;
    }
    throw ConfigError(where, "expected one of " + options + ", got '" + std::string(text) + "'");
  }
  std::string format(E value) const {
    for (const auto& [v, name] : names)
      if (v == value) return name;
    return "?";
  }
};

const EnumNames<kinematics::UserKind> kUserNames{
    {{kinematics::UserKind::terrestrial, "terrestrial"}, {kinematics::UserKind::airborne, "airborne"}}};
const EnumNames<refraction::QuadratureRule> kRuleNames{
    {{refraction::QuadratureRule::fejer, "fejer"},
     {refraction::QuadratureRule::chebyshev_gauss, "chebyshev_gauss"}}};
const EnumNames<refraction::BendingModel> kModelNames{
    {{refraction::BendingModel::accurate, "accurate"}, {refraction::BendingModel::simple, "simple"}}};
const EnumNames<PathDistance> kDistanceNames{{{PathDistance::bending, "bending"},
                                              {PathDistance::straight, "straight"},
                                              {PathDistance::flat, "flat"}}};

struct Field {
  const char* section;
  const char* key;
  std::function<void(Scenario&, std::string_view, const std::string&)> read;
  // nullopt: the field is unset and is not written.
  std::function<std::optional<std::string>(const Scenario&)> write;
};

Field real(const char* sec, const char* key, double Scenario::*member) {
  return {sec, key,
          [member](Scenario& s, std::string_view v, const std::string& w) {
            s.*member = parse_double(v, w);
          },
          [member](const Scenario& s) -> std::optional<std::string> {
            return format_double(s.*member);
          }};
}

Field optional_real(const char* sec, const char* key, std::optional<double> Scenario::*member) {
  return {sec, key,
          [member](Scenario& s, std::string_view v, const std::string& w) {
            s.*member = parse_double(v, w);
          },
          [member](const Scenario& s) -> std::optional<std::string> {
            if (!(s.*member)) return std::nullopt;
            return format_double(*(s.*member));
          }};
}

template <typename I>
Field integer(const char* sec, const char* key, I Scenario::*member) {
  return {sec, key,
          [member](Scenario& s, std::string_view v, const std::string& w) {
            s.*member = parse_number<I>(v, w, "an integer");
          },
          [member](const Scenario& s) -> std::optional<std::string> {
            return std::to_string(s.*member);
          }};
}

template <typename E>
Field enumeration(const char* sec, const char* key, E Scenario::*member,
                  const EnumNames<E>& names) {
  return {sec, key,
          [member, &names](Scenario& s, std::string_view v, const std::string& w) {
            s.*member = names.parse(v, w);
          },
          [member, &names](const Scenario& s) -> std::optional<std::string> {
            return names.format(s.*member);
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(real("geometry", "earth_radius_km", &Scenario::earth_radius_km));
    f.push_back(real("geometry", "earth_rotation_rad_s", &Scenario::earth_rotation_rad_s));
    f.push_back(real("geometry", "altitude_km", &Scenario::altitude_km));
    f.push_back(real("geometry", "detected_elevation_deg", &Scenario::detected_elevation_deg));
    f.push_back(real("geometry", "max_elevation_deg", &Scenario::max_elevation_deg));
    f.push_back(real("geometry", "epoch_s", &Scenario::epoch_s));
    f.push_back(real("geometry", "satellite_speed_km_s", &Scenario::satellite_speed_km_s));
    f.push_back(real("geometry", "inclination_deg", &Scenario::inclination_deg));
    f.push_back(enumeration("geometry", "user", &Scenario::user, kUserNames));
    f.push_back(real("geometry", "latitude_deg", &Scenario::latitude_deg));
    f.push_back(real("geometry", "airborne_speed_km_s", &Scenario::airborne_speed_km_s));
    f.push_back(real("geometry", "heading_deg", &Scenario::heading_deg));

    f.push_back(real("refraction", "surface_refractivity", &Scenario::surface_refractivity));
    f.push_back(real("refraction", "scale_height_km", &Scenario::scale_height_km));
    f.push_back(integer("refraction", "quadrature_order", &Scenario::quadrature_order));
    f.push_back(enumeration("refraction", "quadrature_rule", &Scenario::quadrature_rule, kRuleNames));
    f.push_back(enumeration("refraction", "bending_model", &Scenario::bending_model, kModelNames));

    f.push_back(real("fading", "b0", &Scenario::b0));
    f.push_back(real("fading", "omega", &Scenario::omega));
    f.push_back(integer("fading", "m", &Scenario::nakagami_m));

    f.push_back(real("carrier", "frequency_ghz", &Scenario::frequency_ghz));
    f.push_back(real("carrier", "path_loss_exponent", &Scenario::path_loss_exponent));
    f.push_back(enumeration("carrier", "path_distance", &Scenario::path_distance, kDistanceNames));

    f.push_back(real("power", "transmit_dbm", &Scenario::transmit_dbm));
    f.push_back(real("power", "noise_dbm", &Scenario::noise_dbm));
    f.push_back(optional_real("power", "bandwidth_hz", &Scenario::bandwidth_hz));

    f.push_back(real("weather", "rain_rate_mm_h", &Scenario::rain_rate_mm_h));
    f.push_back(real("weather", "rain_path_km", &Scenario::rain_path_km));
    f.push_back(real("weather", "fog_density_g_m3", &Scenario::fog_density_g_m3));
    f.push_back(real("weather", "fog_path_km", &Scenario::fog_path_km));
    f.push_back({"weather", "cloud_columnar_water",
                 [](Scenario& s, std::string_view v, const std::string& w) {
                   s.cloud_columnar_water.clear();
                   if (v.empty()) return;
                   for (auto item : split(v, ','))
                     s.cloud_columnar_water.push_back(parse_double(item, w));
                 },
                 [](const Scenario& s) -> std::optional<std::string> {
                   std::string out;
                   for (double c : s.cloud_columnar_water)
                     out += (out.empty() ? "" : ", ") + format_double(c);
                   return out;
                 }});
    f.push_back(optional_real("weather", "rain_k", &Scenario::rain_k));
    f.push_back(optional_real("weather", "rain_alpha", &Scenario::rain_alpha));
    f.push_back(optional_real("weather", "liquid_water_k", &Scenario::liquid_water_k));
    f.push_back({"weather", "coefficients",
                 [](Scenario& s, std::string_view v, const std::string&) { s.coefficients = v; },
                 [](const Scenario& s) -> std::optional<std::string> {
                   if (s.coefficients.empty()) return std::nullopt;
                   return s.coefficients;
                 }});

    f.push_back(real("absorption", "path_m", &Scenario::absorption_path_m));
    f.push_back({"absorption", "species",
                 [](Scenario& s, std::string_view v, const std::string& w) {
                   s.absorbers.clear();
                   if (v.empty()) return;
                   for (auto item : split(v, ',')) {
                     const auto parts = split(item, ':');
                     if (parts.size() != 2 || parts[0].empty())
                       throw ConfigError(w, "species entries are name:coefficient_per_m");
                     s.absorbers.push_back({std::string(parts[0]), parse_double(parts[1], w)});
                   }
                 },
                 [](const Scenario& s) -> std::optional<std::string> {
                   std::string out;
                   for (const auto& a : s.absorbers)
                     out += (out.empty() ? "" : ", ") + a.name + ":" +
                            format_double(a.coefficient_per_m);
                   return out;
                 }});

    f.push_back(real("analysis", "outage_threshold", &Scenario::outage_threshold));
    f.push_back(integer("analysis", "qam_order", &Scenario::qam_order));
    f.push_back(integer("analysis", "mc_trials", &Scenario::mc_trials));
    f.push_back(integer("analysis", "seed", &Scenario::seed));
    f.push_back(integer("analysis", "mc_streams", &Scenario::mc_streams));
    return f;
  }();
  return table;
}

void require(bool ok, const std::string& where, const std::string& what) {
  if (!ok) throw ConfigError(where, what);
}

}  // namespace

void Scenario::validate() const {
  const auto check = [](auto&& fn, const char* where) {
    try {
      fn();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where, e.what());
    }
  };
  check([&] { earth().validate(); }, "[geometry]");
  check([&] { satellite().validate(); }, "[geometry]");
  check([&] { user_kinematics().validate(); }, "[geometry]");
  require(detected_elevation_deg > 0.0 && detected_elevation_deg <= 90.0,
          "[geometry] detected_elevation_deg", "must lie in (0, 90]");
  require(max_elevation_deg > 0.0 && max_elevation_deg <= 90.0, "[geometry] max_elevation_deg",
          "must lie in (0, 90]");
  check([&] { profile().validate(); }, "[refraction]");
  check([&] { (void)fading(); }, "[fading]");
  check([&] { carrier().validate(); }, "[carrier]");
  require(std::isfinite(transmit_dbm), "[power] transmit_dbm", "must be finite");
  require(std::isfinite(noise_dbm), "[power] noise_dbm", "must be finite");
  if (bandwidth_hz) require(*bandwidth_hz > 0.0, "[power] bandwidth_hz", "must be positive");
  require(rain_rate_mm_h >= 0.0, "[weather] rain_rate_mm_h", "must be non-negative");
  require(rain_path_km >= 0.0, "[weather] rain_path_km", "must be non-negative");
  require(fog_density_g_m3 >= 0.0, "[weather] fog_density_g_m3", "must be non-negative");
  require(fog_path_km >= 0.0, "[weather] fog_path_km", "must be non-negative");
  for (double c : cloud_columnar_water)
    require(c >= 0.0, "[weather] cloud_columnar_water", "must be non-negative");
  if (rain_k) require(*rain_k >= 0.0, "[weather] rain_k", "must be non-negative");
  if (rain_alpha) require(*rain_alpha >= 0.0, "[weather] rain_alpha", "must be non-negative");
  if (liquid_water_k)
    require(*liquid_water_k >= 0.0, "[weather] liquid_water_k", "must be non-negative");
  check([&] { absorption().validate(); }, "[absorption]");
  require(outage_threshold > 0.0, "[analysis] outage_threshold", "must be positive");
  const int levels = static_cast<int>(std::lround(std::sqrt(static_cast<double>(qam_order))));
  require(qam_order >= 4 && levels * levels == qam_order && (levels & (levels - 1)) == 0,
          "[analysis] qam_order", "must be a square QAM size 4, 16, 64, ...");
  check([&] { mc_config().validate(); }, "[analysis]");
}

kinematics::EarthModel Scenario::earth() const { return {earth_radius_km, earth_rotation_rad_s}; }

kinematics::SatelliteState Scenario::satellite() const {
  return {altitude_km, satellite_speed_km_s, deg_to_rad(inclination_deg)};
}

kinematics::UserKinematics Scenario::user_kinematics() const {
  if (user == kinematics::UserKind::airborne)
    return kinematics::UserKinematics::airborne(airborne_speed_km_s, deg_to_rad(heading_deg));
  return kinematics::UserKinematics::terrestrial(deg_to_rad(latitude_deg));
}

kinematics::PassGeometry Scenario::pass() const {
  const auto e = earth();
  const auto sat = satellite();
  const double v = kinematics::relative_speed(e, sat, user_kinematics());
  return {deg_to_rad(max_elevation_deg), epoch_s,
          kinematics::relative_angular_velocity(e, sat, v)};
}

refraction::RefractionProfile Scenario::profile() const {
  return refraction::RefractionProfile::exponential(surface_refractivity, scale_height_km,
                                                    quadrature_order)
      .with_rule(quadrature_rule);
}

refraction::GeometryScenario Scenario::geometry() const {
  return geometry_at(detected_elevation_deg);
}

refraction::GeometryScenario Scenario::geometry_at(double elevation_deg) const {
  return {earth_radius_km, altitude_km, deg_to_rad(elevation_deg)};
}

fading::ShadowedRicianParams Scenario::fading() const {
  return fading::ShadowedRicianParams(b0, omega, nakagami_m);
}

attenuation::CarrierSpec Scenario::carrier() const {
  attenuation::CarrierSpec c;
  c.frequency_hz = frequency_ghz * 1e9;
  c.path_loss_exponent = path_loss_exponent;
  return c;
}

attenuation::AbsorptionSpec Scenario::absorption() const {
  attenuation::AbsorptionSpec a;
  for (const auto& e : absorbers) a.species.push_back({e.name, e.coefficient_per_m});
  a.path_length_m = absorption_path_m;
  a.frequency_hz = frequency_ghz * 1e9;
  return a;
}

double Scenario::transmit_power_w() const { return attenuation::dbm_to_watt(transmit_dbm); }

double Scenario::noise_power_w() const {
  if (bandwidth_hz)
    return attenuation::dbm_to_watt(attenuation::noise_power_dbm_from_bandwidth(*bandwidth_hz));
  return attenuation::dbm_to_watt(noise_dbm);
}

bool Scenario::needs_coefficient_table() const {
  const bool rain = rain_rate_mm_h > 0.0 && rain_path_km > 0.0 && !(rain_k && rain_alpha);
  const bool fog = fog_density_g_m3 > 0.0 && fog_path_km > 0.0 && !liquid_water_k;
  bool clouds = false;
  for (double c : cloud_columnar_water) clouds = clouds || c > 0.0;
  return rain || fog || (clouds && !liquid_water_k);
}

std::string Scenario::coefficient_path() const {
  if (coefficients.empty()) return {};
  std::filesystem::path p(coefficients);
  if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
  return p.lexically_normal().string();
}

attenuation::WeatherConditions Scenario::weather(
    const attenuation::CoefficientTable* table) const {
  std::optional<attenuation::CoefficientRow> row;
  if (needs_coefficient_table()) {
    if (table == nullptr || table->empty())
      throw ConfigError("[weather] coefficients",
                        "weather terms need a coefficient table or explicit overrides");
    try {
      row = table->at(frequency_ghz);
    } catch (const std::out_of_range& e) {
      throw ConfigError("[weather] coefficients", e.what());
    }
  }
  const auto pick = [&row](const std::optional<double>& override, double attenuation::CoefficientRow::*col) {
    if (override) return *override;
    return row ? (*row).*col : 0.0;
  };
  attenuation::WeatherConditions w;
  w.rain = {pick(rain_k, &attenuation::CoefficientRow::k_r),
            rain_alpha ? *rain_alpha : (row ? row->alpha_r : 1.0), rain_rate_mm_h, rain_path_km};
  const double k_l = pick(liquid_water_k, &attenuation::CoefficientRow::k_l);
  w.fog = {k_l, fog_density_g_m3, fog_path_km};
  for (double lw : cloud_columnar_water) w.clouds.push_back({lw, k_l});
  return w;
}

montecarlo::McConfig Scenario::mc_config() const {
  montecarlo::McConfig c;
  c.trials = mc_trials;
  c.master_seed = seed;
  c.stream_count = mc_streams;
  return c;
}

Scenario parse(std::istream& in, const std::string& source) {
  Scenario s;
  std::map<std::string, const Field*, std::less<>> index;
  std::set<std::string, std::less<>> sections;
  for (const auto& f : fields()) {
    index.emplace(std::string(f.section) + "." + f.key, &f);
    sections.insert(f.section);
  }
  std::set<std::string> seen;
  std::string section;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no);
    std::string_view text(line);
    if (const auto hash = text.find('#'); hash != std::string_view::npos)
      text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError(where, "unterminated section header");
      section = std::string(trim(text.substr(1, text.size() - 2)));
      if (!sections.count(section)) throw ConfigError(where, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where, "expected 'key = value'");
    if (section.empty()) throw ConfigError(where, "key outside of any [section]");
    const std::string key(trim(text.substr(0, eq)));
    const auto value = trim(text.substr(eq + 1));
    const std::string full = section + "." + key;
    const auto it = index.find(full);
    if (it == index.end()) throw ConfigError(where, "unknown key '" + key + "' in [" + section + "]");
    if (!seen.insert(full).second) throw ConfigError(where, "duplicate key '" + key + "'");
    it->second->read(s, value, where + " (" + full + ")");
  }
  s.validate();
  return s;
}

Scenario load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open scenario file");
  Scenario s = parse(in, path);
  s.base_dir = std::filesystem::path(path).parent_path().string();
  return s;
}

void dump(std::ostream& out, const Scenario& s) {
  std::string section;
  for (const auto& f : fields()) {
    const auto value = f.write(s);
    if (!value) continue;
    if (section != f.section) {
      if (!section.empty()) out << '\n';
      section = f.section;
      out << '[' << section << "]\n";
    }
    out << f.key << " = " << *value << '\n';
  }
}

std::string dump(const Scenario& s) {
  std::ostringstream os;
  dump(os, s);
  return os.str();
}

bool operator==(const Scenario& a, const Scenario& b) {
  for (const auto& f : fields())
    if (f.write(a) != f.write(b)) return false;
  return true;
}

LinkBudget link_budget(const Scenario& s, const attenuation::CoefficientTable* table,
                       double detected_elevation_deg) {
  const auto geom = s.geometry_at(detected_elevation_deg);
  const auto ray = refraction::trace(s.profile(), geom, s.bending_model);
  double distance_km = ray.bending_length_km;
  if (s.path_distance == PathDistance::straight) distance_km = ray.straight_length_km;
  if (s.path_distance == PathDistance::flat) distance_km = refraction::flat_earth_slant(geom);

  const auto weather = s.weather(table);
  LinkBudget lb{};
  lb.factors.path_loss = attenuation::path_loss(s.carrier(), distance_km * 1e3);
  lb.factors.absorption = attenuation::molecular_absorption(s.absorption());
  lb.factors.rain = attenuation::rain_factor(weather);
  lb.factors.fog = attenuation::fog_factor(weather);
  lb.factors.clouds = attenuation::clouds_factor(weather, ray.true_elevation_rad);
  lb.slant_range_km = distance_km;
  lb.true_elevation_rad = ray.true_elevation_rad;
  lb.lambda_t =
      attenuation::compose_link_budget(s.transmit_power_w(), s.noise_power_w(), lb.factors);
  return lb;
}

}  // namespace sagin::scenario

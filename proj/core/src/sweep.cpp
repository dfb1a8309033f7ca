#include "aptsense/sweep.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>
#include <thread>

#include "aptsense/constants.hpp"
#include "aptsense/sensing.hpp"
#include "aptsense/spectrum.hpp"
#include "aptsense/stability.hpp"

namespace aptsense {

namespace {

enum class UnitClass { Rate, Power, Length, Count };

struct ParamInfo {
  UnitClass unit_class;
  bool sweepable;
};

const std::map<std::string, ParamInfo>& parameter_table() {
  static const std::map<std::string, ParamInfo> table = {
      {"Gamma", {UnitClass::Rate, false}},
      {"gamma", {UnitClass::Rate, true}},
      {"Delta", {UnitClass::Rate, true}},
      {"Delta_a", {UnitClass::Rate, true}},
      {"g", {UnitClass::Rate, true}},
      {"U_a", {UnitClass::Rate, true}},
      {"U_b1", {UnitClass::Rate, true}},
      {"U_b2", {UnitClass::Rate, false}},
      {"kappa_minus", {UnitClass::Rate, false}},
      {"Omega", {UnitClass::Rate, true}},
      {"power", {UnitClass::Power, true}},
      {"wavelength", {UnitClass::Length, false}},
      {"eta_u_small", {UnitClass::Rate, false}},
      {"eta_u_large", {UnitClass::Rate, false}},
  };
  return table;
}

std::map<std::string, double> default_parameters() {
  using constants::two_pi;
  const double Gamma = two_pi * 1e6;
  std::map<std::string, double> p;
  p["Gamma"] = Gamma;
  p["gamma"] = std::sqrt(2.0) * Gamma;
  p["Delta"] = 0.0;
  p["Delta_a"] = 0.0;
  p["g"] = 0.0;
  p["U_a"] = two_pi * 1e-9;
  p["U_b1"] = 0.0;
  p["U_b2"] = 0.0;
  p["kappa_minus"] = 0.05 * Gamma;
  p["power"] = 8e-6;
  p["wavelength"] = 1550e-9;
  p["eta_u_small"] = two_pi * 1e-7;
  p["eta_u_large"] = two_pi * 1e-6;
  return p;
}

struct RawValue {
  double number = 0.0;
  std::string unit;
  int line = 0;
};

double trim_parse_number(const std::string& s, int line) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ConfigError(line, "malformed number '" + s + "'");
  return v;
}

// Resolves "<number> <unit>" to base units. Rates are stored as angular
// frequencies: an "X Hz"-family quantity becomes 2π·X rad/s; "Gamma" scales
// by the resolved Gamma; "radps" is passed through.
double resolve_value(const RawValue& rv, UnitClass cls, double Gamma) {
  using constants::two_pi;
  static const std::map<std::string, double> rate_units = {
      {"pHz", 1e-12}, {"nHz", 1e-9}, {"uHz", 1e-6}, {"mHz", 1e-3},
      {"Hz", 1.0},    {"kHz", 1e3},  {"MHz", 1e6},  {"GHz", 1e9},
  };
  static const std::map<std::string, double> power_units = {
      {"nW", 1e-9}, {"uW", 1e-6}, {"mW", 1e-3}, {"W", 1.0}};
  static const std::map<std::string, double> length_units = {
      {"nm", 1e-9}, {"um", 1e-6}, {"mm", 1e-3}, {"m", 1.0}};

  switch (cls) {
    case UnitClass::Rate: {
      if (rv.unit == "Gamma") return rv.number * Gamma;
      if (rv.unit == "radps") return rv.number;
      if (auto it = rate_units.find(rv.unit); it != rate_units.end())
        return two_pi * rv.number * it->second;
      throw ConfigError(rv.line, "unknown rate unit '" + rv.unit + "'");
    }
    case UnitClass::Power: {
      if (auto it = power_units.find(rv.unit); it != power_units.end())
        return rv.number * it->second;
      throw ConfigError(rv.line, "unknown power unit '" + rv.unit + "'");
    }
    case UnitClass::Length: {
      if (auto it = length_units.find(rv.unit); it != length_units.end())
        return rv.number * it->second;
      throw ConfigError(rv.line, "unknown length unit '" + rv.unit + "'");
    }
    case UnitClass::Count:
      if (!rv.unit.empty()) throw ConfigError(rv.line, "count takes no unit");
      return rv.number;
  }
  throw ConfigError(rv.line, "unreachable unit class");
}

std::string trim(std::string s) {
  s.erase(0, s.find_first_not_of(" \t\r"));
  s.erase(s.find_last_not_of(" \t\r") + 1);
  return s;
}

const std::vector<std::string>& known_observables() {
  static const std::vector<std::string> v = {"eigenvalues", "ep",        "x",     "y",
                                             "eta",         "stability", "regime"};
  return v;
}

std::string fmt17(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

void parallel_rows(int n_rows, int threads, const std::function<void(int)>& body) {
  if (threads <= 1 || n_rows <= 1) {
    for (int r = 0; r < n_rows; ++r) body(r);
    return;
  }
  std::atomic<int> next{0};
  const int workers = std::min(threads, n_rows);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int r = next.fetch_add(1); r < n_rows; r = next.fetch_add(1)) body(r);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

bool is_sweepable_parameter(const std::string& name) {
  const auto it = parameter_table().find(name);
  return it != parameter_table().end() && it->second.sweepable;
}

SweepSpec parse_config(const std::string& text) {
  std::map<std::string, RawValue> raw_params;
  std::map<std::string, std::map<std::string, std::string>> sections;
  std::map<std::string, std::map<std::string, int>> section_lines;

  std::istringstream is(text);
  std::string line, section = "parameters";
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "parameters" && section != "axis1" && section != "axis2" &&
          section != "output")
        throw ConfigError(lineno, "unknown section '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError(lineno, "empty key or value");
    sections[section][key] = value;
    section_lines[section][key] = lineno;
  }

  // [parameters]
  for (const auto& [key, value] : sections["parameters"]) {
    const auto it = parameter_table().find(key);
    if (it == parameter_table().end())
      throw ConfigError(section_lines["parameters"][key], "unknown parameter '" + key + "'");
    std::istringstream vs(value);
    std::string num, unit;
    vs >> num >> unit;
    std::string extra;
    if (vs >> extra)
      throw ConfigError(section_lines["parameters"][key], "trailing tokens in '" + value + "'");
    RawValue rv;
    rv.line = section_lines["parameters"][key];
    rv.number = trim_parse_number(num, rv.line);
    rv.unit = unit;
    if (unit.empty() && it->second.unit_class != UnitClass::Count)
      throw ConfigError(rv.line, "missing unit for '" + key + "'");
    raw_params[key] = rv;
  }

  SweepSpec spec;
  spec.parameters = default_parameters();
  // Gamma resolves first; everything else may reference it.
  if (auto it = raw_params.find("Gamma"); it != raw_params.end()) {
    if (it->second.unit == "Gamma")
      throw ConfigError(it->second.line, "Gamma cannot be given in units of itself");
    spec.parameters["Gamma"] = resolve_value(it->second, UnitClass::Rate, 0.0);
    // Defaults that scale with Gamma follow it unless explicitly overridden.
    spec.parameters["gamma"] = std::sqrt(2.0) * spec.parameters["Gamma"];
    spec.parameters["kappa_minus"] = 0.05 * spec.parameters["Gamma"];
  }
  const double Gamma = spec.parameters["Gamma"];
  for (const auto& [key, rv] : raw_params) {
    if (key == "Gamma") continue;
    spec.parameters[key] = resolve_value(rv, parameter_table().at(key).unit_class, Gamma);
  }

  // [axis1] / [axis2]
  const auto parse_axis = [&](const std::string& name) -> std::optional<AxisSpec> {
    if (!sections.contains(name)) return std::nullopt;
    auto& sec = sections[name];
    auto& lines = section_lines[name];
    const auto need = [&](const char* key) -> std::string {
      const auto it = sec.find(key);
      if (it == sec.end())
        throw ConfigError(lines.empty() ? 0 : lines.begin()->second,
                          "[" + name + "] missing key '" + key + "'");
      return it->second;
    };
    for (const auto& [k, v] : sec)
      if (k != "param" && k != "min" && k != "max" && k != "points")
        throw ConfigError(lines[k], "unknown axis key '" + k + "'");
    AxisSpec ax;
    ax.param = trim(need("param"));
    const auto pit = parameter_table().find(ax.param);
    if (pit == parameter_table().end() || !pit->second.sweepable)
      throw ConfigError(lines["param"], "'" + ax.param + "' is not a sweepable parameter");
    const auto parse_bound = [&](const char* key) {
      std::istringstream vs(need(key));
      std::string num, unit;
      vs >> num >> unit;
      RawValue rv{trim_parse_number(num, lines[key]), unit, lines[key]};
      if (unit.empty() && pit->second.unit_class != UnitClass::Count)
        throw ConfigError(lines[key], std::string("missing unit for axis ") + key);
      return resolve_value(rv, pit->second.unit_class, Gamma);
    };
    ax.min = parse_bound("min");
    ax.max = parse_bound("max");
    if (!std::isfinite(ax.min) || !std::isfinite(ax.max))
      throw ConfigError(lines["min"], "axis range must be finite");
    const std::string pts = need("points");
    ax.points = static_cast<int>(trim_parse_number(pts, lines["points"]));
    if (ax.points < 2) throw ConfigError(lines["points"], "points must be >= 2");
    return ax;
  };

  const auto ax1 = parse_axis("axis1");
  if (!ax1) throw ConfigError(0, "no sweep axis ([axis1] section required)");
  spec.axis1 = *ax1;
  spec.axis2 = parse_axis("axis2");

  // [output]
  spec.observables = {"x", "stability", "regime"};
  if (sections.contains("output")) {
    auto& sec = sections["output"];
    auto& lines = section_lines["output"];
    for (const auto& [k, v] : sec) {
      if (k == "observables") {
        spec.observables.clear();
        std::istringstream vs(v);
        std::string item;
        while (std::getline(vs, item, ',')) {
          item = trim(item);
          if (item.empty()) continue;
          bool known = false;
          for (const auto& o : known_observables()) known |= (o == item);
          if (!known) throw ConfigError(lines[k], "unknown observable '" + item + "'");
          spec.observables.push_back(item);
        }
        if (spec.observables.empty()) throw ConfigError(lines[k], "empty observable list");
      } else if (k == "path") {
        spec.out_path = v;
      } else if (k == "format") {
        if (v == "csv") spec.format = OutputFormat::Csv;
        else if (v == "json") spec.format = OutputFormat::Json;
        else throw ConfigError(lines[k], "format must be csv or json");
      } else if (k == "seed") {
        spec.seed = static_cast<std::uint64_t>(trim_parse_number(v, lines[k]));
      } else if (k == "threads") {
        spec.threads = static_cast<int>(trim_parse_number(v, lines[k]));
        if (spec.threads < 1) throw ConfigError(lines[k], "threads must be >= 1");
      } else {
        throw ConfigError(lines[k], "unknown output key '" + k + "'");
      }
    }
  }
  return spec;
}

std::string emit_config(const SweepSpec& spec) {
  std::ostringstream os;
  os << "[parameters]\n";
  for (const auto& [key, value] : spec.parameters) {
    const auto cls = parameter_table().at(key).unit_class;
    const char* unit = cls == UnitClass::Rate ? "radps" : cls == UnitClass::Power ? "W" : "m";
    os << key << " = " << fmt17(value) << " " << unit << "\n";
  }
  const auto emit_axis = [&](const char* name, const AxisSpec& ax) {
    const auto cls = parameter_table().at(ax.param).unit_class;
    const char* unit = cls == UnitClass::Rate ? "radps" : cls == UnitClass::Power ? "W" : "m";
    os << "[" << name << "]\n";
    os << "param = " << ax.param << "\n";
    os << "min = " << fmt17(ax.min) << " " << unit << "\n";
    os << "max = " << fmt17(ax.max) << " " << unit << "\n";
    os << "points = " << ax.points << "\n";
  };
  emit_axis("axis1", spec.axis1);
  if (spec.axis2) emit_axis("axis2", *spec.axis2);
  os << "[output]\n";
  os << "observables = ";
  for (size_t k = 0; k < spec.observables.size(); ++k)
    os << (k ? ", " : "") << spec.observables[k];
  os << "\n";
  if (!spec.out_path.empty()) os << "path = " << spec.out_path << "\n";
  os << "format = " << (spec.format == OutputFormat::Csv ? "csv" : "json") << "\n";
  os << "seed = " << spec.seed << "\n";
  os << "threads = " << spec.threads << "\n";
  return os.str();
}

namespace {

struct ScenarioPoint {
  AptConfig apt;  // Gamma-units (Gamma = 1)
  double delta = 0.0;
  double U_a = 0.0, U_b1 = 0.0, U_b2 = 0.0;
  double Omega = 0.0;

  double intensity() const { return Omega * Omega; }

  SystemParams params() const {
    SystemParams p = apt.expand();
    p.Delta_a = -delta;
    p.U_a = U_a;
    p.U_b1 = U_b1;
    p.U_b2 = U_b2;
    p.Omega = Omega;
    return p;
  }
};

ScenarioPoint scenario_from(const std::map<std::string, double>& prm) {
  const double Gamma = prm.at("Gamma");
  ScenarioPoint s;
  s.apt.Gamma = 1.0;
  s.apt.gamma = prm.at("gamma") / Gamma;
  s.apt.Delta = prm.at("Delta") / Gamma;
  s.apt.g = prm.at("g") / Gamma;
  s.delta = prm.at("Delta_a") / Gamma;
  s.U_a = prm.at("U_a") / Gamma;
  s.U_b1 = prm.at("U_b1") / Gamma;
  s.U_b2 = prm.at("U_b2") / Gamma;
  if (prm.contains("Omega") && prm.at("Omega") > 0.0) {
    s.Omega = prm.at("Omega") / Gamma;
  } else {
    s.Omega = drive_amplitude({prm.at("power"), prm.at("wavelength"), prm.at("kappa_minus")}) /
              Gamma;
  }
  return s;
}

struct RowTracker {
  double prev_response = -1.0;
  std::array<double, 3> prev_shift_seed{};
  bool have_seed = false;
  std::array<cxd, 3> prev_lambdas{};
  bool have_lambdas = false;
};

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  SweepResult out;
  const auto& prm = spec.parameters;
  const double Gamma = prm.at("Gamma");

  const bool has2 = spec.axis2.has_value();
  const int n1 = spec.axis1.points;
  const int n2 = has2 ? spec.axis2->points : 1;

  const auto axis_value = [](const AxisSpec& ax, int k) {
    return ax.min + (ax.max - ax.min) * k / (ax.points - 1);
  };
  const auto in_gamma_units = [&](const std::string& name, double v) {
    return parameter_table().at(name).unit_class == UnitClass::Rate ? v / Gamma : v;
  };

  // Header.
  const auto unit_of = [&](const std::string& name) -> std::string {
    return parameter_table().at(name).unit_class == UnitClass::Rate ? "Gamma"
           : parameter_table().at(name).unit_class == UnitClass::Power ? "W" : "m";
  };
  out.header.push_back({spec.axis1.param, unit_of(spec.axis1.param)});
  if (has2) out.header.push_back({spec.axis2->param, unit_of(spec.axis2->param)});
  bool want_eigen = false, want_ep = false, want_x = false, want_y = false, want_eta = false,
       want_stab = false, want_regime = false;
  for (const auto& o : spec.observables) {
    if (o == "eigenvalues") want_eigen = true;
    else if (o == "ep") want_ep = true;
    else if (o == "x") want_x = true;
    else if (o == "y") want_y = true;
    else if (o == "eta") want_eta = true;
    else if (o == "stability") want_stab = true;
    else if (o == "regime") want_regime = true;
  }
  if (want_eigen)
    for (const char* n : {"Re_lambda1", "Re_lambda2", "Re_lambda3", "Im_lambda1",
                          "Im_lambda2", "Im_lambda3"})
      out.header.push_back({n, "Gamma"});
  if (want_ep) out.header.push_back({"Ep", "Gamma^2"});
  if (want_x) out.header.push_back({"x", "1"});
  if (want_y) out.header.push_back({"y", "1"});
  if (want_eta) {
    out.header.push_back({"eta", "1"});
    out.header.push_back({"eta_roots_small", "1"});
    out.header.push_back({"eta_roots_large", "1"});
  }
  if (want_stab) {
    out.header.push_back({"stable", "1"});
    out.header.push_back({"marginal", "1"});
    out.header.push_back({"max_real_part", "Gamma"});
  }
  if (want_regime) {
    out.header.push_back({"root_count", "1"});
    out.header.push_back({"bistable", "1"});
  }

  out.rows.assign(static_cast<size_t>(n1) * static_cast<size_t>(n2), Row{});

  const bool need_response = want_x || want_y || want_stab || want_regime;
  const double nan = std::nan("");

  const auto eval_row = [&](int r2) {
    RowTracker tracker;
    for (int r1 = 0; r1 < n1; ++r1) {
      auto prm_pt = prm;
      prm_pt[spec.axis1.param] = axis_value(spec.axis1, r1);
      if (has2) prm_pt[spec.axis2->param] = axis_value(*spec.axis2, r2);
      const ScenarioPoint sc = scenario_from(prm_pt);

      Row row;
      row.values.push_back(in_gamma_units(spec.axis1.param, prm_pt[spec.axis1.param]));
      if (has2)
        row.values.push_back(in_gamma_units(spec.axis2->param, prm_pt[spec.axis2->param]));

      if (want_eigen) {
        ComplexSpectrum sp = eigenvalues_numeric(build_matrix(sc.params()));
        if (tracker.have_lambdas) sp.lambdas = match_branches(tracker.prev_lambdas, sp.lambdas);
        tracker.prev_lambdas = sp.lambdas;
        tracker.have_lambdas = true;
        for (const auto& l : sp.lambdas) row.values.push_back(l.real());
        for (const auto& l : sp.lambdas) row.values.push_back(l.imag());
      }
      if (want_ep) row.values.push_back(ep_condition(sc.apt));

      double x = nan, y = nan, max_re = nan;
      double stable = nan, marginal = nan, root_count = nan, bistable = nan;
      std::string tag;

      if (need_response) {
        try {
          if (sc.apt.g != 0.0 || sc.U_b2 != 0.0) {
            NonlinearSolveOptions nopt;
            if (tracker.have_seed)
              nopt.seed = tracker.prev_shift_seed;
            const NonlinearResult nr = nonlinear_steady_state(sc.params(), nopt);
            if (!nr.converged) {
              tag = "NONCONVERGED";
            } else {
              const Mat6 J = quadrature_jacobian(
                  sc.params(), {nr.state.beta1, nr.state.alpha, nr.state.beta2});
              const StabilityVerdict v = stability_from_jacobian(J, 1.0);
              tracker.prev_shift_seed = {nr.state.y, nr.state.x, std::norm(nr.state.beta2)};
              tracker.have_seed = true;
              root_count = 1;
              bistable = nan;  // root multiplicity not resolved on this route
              stable = v.stable && !v.marginal ? 1.0 : 0.0;
              marginal = v.marginal ? 1.0 : 0.0;
              max_re = v.max_real_part;
              if (v.marginal) tag = "MARGINAL";
              else if (!v.stable) tag = "UNSTABLE";
              if (stable == 1.0) {
                x = nr.state.x;
                y = nr.state.y;
              }
            }
          } else {
            if (sc.U_b1 != 0.0 && sc.U_a != 0.0)
              throw std::invalid_argument("simultaneous cavity and magnon Kerr not supported");
            BranchSet bs;
            if (sc.U_b1 != 0.0) {
              bs = sc.delta == 0.0
                       ? magnon_branches(sc.apt, sc.U_b1, sc.intensity())
                       : magnon_branches_detuned(sc.apt, sc.delta, sc.U_b1, sc.intensity());
            } else {
              bs = cavity_branches(sc.apt, sc.delta, sc.U_a, sc.intensity());
            }
            bs = classify_branch_stability(std::move(bs), sc.params());
            // Hysteresis tracking: branch continuous in the response from the
            // previous grid point; smallest stable root at the first point.
            const Branch* pick = nullptr;
            if (tracker.prev_response >= 0.0) {
              double bd = std::numeric_limits<double>::infinity();
              for (const auto& b : bs.roots) {
                const double d = std::abs(b.response - tracker.prev_response);
                if (d < bd) {
                  bd = d;
                  pick = &b;
                }
              }
            } else {
              for (const auto& b : bs.roots)
                if (b.stable) {
                  pick = &b;
                  break;
                }
              if (!pick && !bs.roots.empty()) pick = &bs.roots.front();
            }
            if (pick) {
              tracker.prev_response = pick->response;
              root_count = static_cast<double>(bs.roots.size());
              bistable = bs.regime == Regime::BISTABLE ? 1.0 : 0.0;
              const Mat6 J = quadrature_jacobian(
                  sc.params(), {pick->state.beta1, pick->state.alpha, pick->state.beta2});
              const StabilityVerdict v = stability_from_jacobian(J, 1.0);
              stable = pick->stable ? 1.0 : 0.0;
              marginal = pick->marginal ? 1.0 : 0.0;
              max_re = v.max_real_part;
              if (pick->marginal) tag = "MARGINAL";
              else if (!pick->stable) tag = "UNSTABLE";
              else if (bs.regime == Regime::BISTABLE) tag = "BISTABLE";
              if (pick->stable) {
                x = pick->state.x;
                y = pick->state.y;
              }
            }
          }
        } catch (const NearSingularError&) {
          tag = "SINGULAR";
        } catch (const SingularDriveError&) {
          tag = "SINGULAR";
        }
      }

      if (want_x) row.values.push_back(x);
      if (want_y) row.values.push_back(y);
      if (want_eta) {
        try {
          const KerrMode which = sc.U_b1 != 0.0 ? KerrMode::Magnon : KerrMode::Cavity;
          const ResponseRatio rr =
              response_ratio(sc.apt, sc.delta, prm_pt.at("eta_u_small") / Gamma,
                             prm_pt.at("eta_u_large") / Gamma, sc.intensity(), which);
          row.values.push_back(rr.eta);
          row.values.push_back(static_cast<double>(rr.small_tag.root_count));
          row.values.push_back(static_cast<double>(rr.large_tag.root_count));
        } catch (const std::exception&) {
          row.values.push_back(nan);
          row.values.push_back(nan);
          row.values.push_back(nan);
          if (tag.empty()) tag = "SINGULAR";
        }
      }
      if (want_stab) {
        row.values.push_back(stable);
        row.values.push_back(marginal);
        row.values.push_back(max_re);
      }
      if (want_regime) {
        row.values.push_back(root_count);
        row.values.push_back(bistable);
      }
      row.tag = tag;
      out.rows[static_cast<size_t>(r2) * static_cast<size_t>(n1) + static_cast<size_t>(r1)] =
          std::move(row);
    }
  };

  parallel_rows(n2, spec.threads, eval_row);

  out.metadata["tool"] = "aptsense";
  out.metadata["version"] = APTSENSE_VERSION_STRING;
  out.metadata["seed"] = std::to_string(spec.seed);
  out.metadata["threads"] = std::to_string(spec.threads);
  for (const auto& [k, v] : prm) out.metadata["param." + k] = fmt17(v);
  out.metadata["axis1"] = spec.axis1.param + " " + fmt17(spec.axis1.min) + " .. " +
                          fmt17(spec.axis1.max) + " / " + std::to_string(spec.axis1.points);
  if (has2)
    out.metadata["axis2"] = spec.axis2->param + " " + fmt17(spec.axis2->min) + " .. " +
                            fmt17(spec.axis2->max) + " / " + std::to_string(spec.axis2->points);
  return out;
}

}  // namespace aptsense

#include "ccsim/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ccsim {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void parse_fail(const std::string& name, int line, const std::string& what) {
  std::ostringstream os;
  os << name << ":" << line << ": " << what;
  throw std::runtime_error(os.str());
}

double to_num(const std::string& name, int line, const std::string& key,
              const std::string& v) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (trim(v.substr(pos)).empty()) return x;
  } catch (...) {
  }
  parse_fail(name, line, "value of '" + key + "' is not a number: '" + v + "'");
}

}  // namespace

ConfigFile ConfigFile::parse_string(const std::string& text, const std::string& name) {
  ConfigFile cf;
  cf.name_ = name;
  std::istringstream is(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') parse_fail(name, lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) parse_fail(name, lineno, "empty section name");
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      parse_fail(name, lineno, "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) parse_fail(name, lineno, "empty key");
    if (value.empty()) parse_fail(name, lineno, "empty value for key '" + key + "'");
    auto& sec = cf.sections_[section];
    if (sec.count(key))
      parse_fail(name, lineno, "duplicate key '" + key + "' in section [" + section + "]");
    sec[key] = Entry{value, lineno};
  }
  return cf;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_string(buf.str(), path);
}

const ConfigFile::Entry& ConfigFile::require(const std::string& section,
                                             const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end())
    throw std::runtime_error(name_ + ": missing section [" + section + "] (needed for key '" +
                             key + "')");
  auto k = s->second.find(key);
  if (k == s->second.end())
    throw std::runtime_error(name_ + ": missing key '" + key + "' in section [" + section +
                             "]");
  return k->second;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

std::string ConfigFile::get_str(const std::string& section, const std::string& key) const {
  return require(section, key).value;
}

std::string ConfigFile::get_str_or(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
  return has(section, key) ? get_str(section, key) : fallback;
}

double ConfigFile::get_num(const std::string& section, const std::string& key) const {
  const Entry& e = require(section, key);
  return to_num(name_, e.line, key, e.value);
}

double ConfigFile::get_num_or(const std::string& section, const std::string& key,
                              double fallback) const {
  return has(section, key) ? get_num(section, key) : fallback;
}

int64_t ConfigFile::get_int(const std::string& section, const std::string& key) const {
  const Entry& e = require(section, key);
  const double x = to_num(name_, e.line, key, e.value);
  const int64_t i = static_cast<int64_t>(x);
  if (static_cast<double>(i) != x)
    parse_fail(name_, e.line, "value of '" + key + "' must be an integer");
  return i;
}

int64_t ConfigFile::get_int_or(const std::string& section, const std::string& key,
                               int64_t fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

bool ConfigFile::get_bool_or(const std::string& section, const std::string& key,
                             bool fallback) const {
  if (!has(section, key)) return fallback;
  const Entry& e = require(section, key);
  std::string v = e.value;
  std::transform(v.begin(), v.end(), v.begin(), ::tolower);
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  parse_fail(name_, e.line, "value of '" + key + "' is not a boolean: '" + e.value + "'");
}

std::vector<double> ConfigFile::get_num_list(const std::string& section,
                                             const std::string& key) const {
  const Entry& e = require(section, key);
  std::vector<double> out;
  std::string item;
  std::istringstream is(e.value);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (item.empty()) parse_fail(name_, e.line, "empty element in list '" + key + "'");
    out.push_back(to_num(name_, e.line, key, item));
  }
  if (out.empty()) parse_fail(name_, e.line, "empty list for key '" + key + "'");
  return out;
}

std::vector<std::pair<std::string, std::string>> ConfigFile::entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [sec, kv] : sections_)
    for (const auto& [key, e] : kv) out.emplace_back(sec, key);
  return out;
}

int ConfigFile::line_of(const std::string& section, const std::string& key) const {
  return require(section, key).line;
}

namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> allowed = {
      {"experiment", {"mode"}},
      {"grid", {"geometry", "length", "n", "lx", "ly", "nx", "ny", "r0", "r1", "nr", "ntheta"}},
      {"initial", {"scenario", "u_mean", "amp", "width", "v0_level", "mollify"}},
      {"run",
       {"eps", "t_end", "dt_policy", "dt", "safety", "dt_max", "diag_cadence", "cg_tol",
        "keep_fields", "moment_enabled", "moment_p", "moment_delta"}},
      {"sweep", {"eps_list"}},
      {"asymptotics", {"mass_thresholds", "fit_t1_frac", "fit_t2_frac"}},
      {"inequalities",
       {"seeds", "boundary_seeds", "trace_samples", "eta_list", "interval_n",
        "interval_length", "annulus_nr", "annulus_ntheta", "annulus_r0", "annulus_r1"}},
      {"output", {"out", "seed"}},
  };
  return allowed;
}

void validate_keys(const ConfigFile& cf) {
  const auto& allowed = allowed_keys();
  for (const auto& [sec, key] : cf.entries()) {
    auto s = allowed.find(sec);
    if (s == allowed.end()) {
      std::ostringstream os;
      os << cf.name() << ":" << cf.line_of(sec, key) << ": unknown section [" << sec << "]";
      throw std::runtime_error(os.str());
    }
    if (!s->second.count(key)) {
      std::ostringstream os;
      os << cf.name() << ":" << cf.line_of(sec, key) << ": unknown key '" << key
         << "' in section [" << sec << "]";
      throw std::runtime_error(os.str());
    }
  }
}

void load_grid_section(const ConfigFile& cf, ExperimentConfig& cfg) {
  cfg.geometry = cf.get_str("grid", "geometry");
  if (cfg.geometry == "interval") {
    cfg.length = cf.get_num("grid", "length");
    cfg.n0 = static_cast<int>(cf.get_int("grid", "n"));
    cfg.n1 = 1;
  } else if (cfg.geometry == "rectangle") {
    cfg.lx = cf.get_num("grid", "lx");
    cfg.ly = cf.get_num("grid", "ly");
    cfg.n0 = static_cast<int>(cf.get_int("grid", "nx"));
    cfg.n1 = static_cast<int>(cf.get_int("grid", "ny"));
  } else if (cfg.geometry == "annulus") {
    cfg.r0 = cf.get_num("grid", "r0");
    cfg.r1 = cf.get_num("grid", "r1");
    cfg.n0 = static_cast<int>(cf.get_int("grid", "nr"));
    cfg.n1 = static_cast<int>(cf.get_int("grid", "ntheta"));
  } else {
    throw std::runtime_error(cf.name() + ": unknown geometry '" + cfg.geometry +
                             "' (expected interval, rectangle, or annulus)");
  }
}

void load_initial_section(const ConfigFile& cf, ExperimentConfig& cfg) {
  cfg.scenario.name = cf.get_str("initial", "scenario");
  cfg.scenario.u_mean = cf.get_num_or("initial", "u_mean", 1.0);
  cfg.scenario.amp = cf.get_num_or("initial", "amp", 1.0);
  cfg.scenario.width = cf.get_num_or("initial", "width", 0.12);
  cfg.scenario.v0_level = cf.get_num_or("initial", "v0_level", 1.0);
  cfg.scenario.mollify = cf.get_bool_or("initial", "mollify", true);
}

void load_run_section(const ConfigFile& cf, ExperimentConfig& cfg, bool need_t_end,
                      bool force_fixed_dt) {
  cfg.sim.eps = cf.get_num("run", "eps");
  if (need_t_end) cfg.sim.t_end = cf.get_num("run", "t_end");
  const std::string policy = cf.get_str("run", "dt_policy");
  if (policy == "fixed") {
    cfg.sim.dt_policy = DtPolicy::fixed(cf.get_num("run", "dt"));
  } else if (policy == "cfl") {
    if (force_fixed_dt)
      throw std::runtime_error(cf.name() +
                               ": this mode compares runs on a common dt; dt_policy must be "
                               "'fixed'");
    cfg.sim.dt_policy =
        DtPolicy::cfl(cf.get_num("run", "safety"), cf.get_num_or("run", "dt_max", 1.0));
  } else {
    throw std::runtime_error(cf.name() + ": unknown dt_policy '" + policy +
                             "' (expected fixed or cfl)");
  }
  cfg.sim.diag_cadence = static_cast<int>(cf.get_int_or("run", "diag_cadence", 100));
  cfg.sim.cg_tol = cf.get_num_or("run", "cg_tol", 1e-12);
  cfg.keep_fields = cf.get_bool_or("run", "keep_fields", false);
  cfg.sim.moment_enabled = cf.get_bool_or("run", "moment_enabled", false);
  cfg.sim.moment_p = cf.get_num_or("run", "moment_p", 4.0);
  cfg.sim.moment_delta = cf.get_num_or("run", "moment_delta", 0.02);
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
  const ConfigFile cf = ConfigFile::parse_file(path);
  validate_keys(cf);

  ExperimentConfig cfg;
  cfg.config_path = path;
  cfg.mode = cf.get_str("experiment", "mode");
  cfg.out_dir = cf.get_str_or("output", "out", "out");
  cfg.seed = static_cast<uint64_t>(cf.get_int_or("output", "seed", 1));
  if (cf.has("initial", "scenario")) cfg.scenario.seed = cfg.seed;

  if (cfg.mode == "simulate" || cfg.mode == "asymptotics") {
    load_grid_section(cf, cfg);
    load_initial_section(cf, cfg);
    load_run_section(cf, cfg, /*need_t_end=*/true, /*force_fixed_dt=*/false);
  } else if (cfg.mode == "eps_sweep") {
    load_grid_section(cf, cfg);
    load_initial_section(cf, cfg);
    load_run_section(cf, cfg, /*need_t_end=*/true, /*force_fixed_dt=*/true);
    cfg.eps_list = cf.get_num_list("sweep", "eps_list");
    if (cfg.eps_list.size() < 2)
      throw std::runtime_error(cf.name() + ": eps_list needs at least two entries");
    for (size_t i = 0; i + 1 < cfg.eps_list.size(); ++i) {
      if (!(cfg.eps_list[i] > cfg.eps_list[i + 1]))
        throw std::runtime_error(cf.name() + ": eps_list must be strictly decreasing");
    }
    for (double e : cfg.eps_list) {
      if (!(e > 0.0) || !(e < 1.0))
        throw std::runtime_error(cf.name() + ": eps_list entries must lie in (0,1)");
    }
  } else if (cfg.mode == "inequalities") {
    cfg.sim.eps = cf.get_num("run", "eps");
    cfg.ineq_seeds = static_cast<int>(cf.get_int_or("inequalities", "seeds", 200));
    cfg.boundary_seeds =
        static_cast<int>(cf.get_int_or("inequalities", "boundary_seeds", 100));
    cfg.trace_samples =
        static_cast<int>(cf.get_int_or("inequalities", "trace_samples", 500));
    if (cf.has("inequalities", "eta_list"))
      cfg.eta_list = cf.get_num_list("inequalities", "eta_list");
    cfg.interval_n = static_cast<int>(cf.get_int("inequalities", "interval_n"));
    cfg.annulus_nr = static_cast<int>(cf.get_int("inequalities", "annulus_nr"));
    cfg.annulus_ntheta = static_cast<int>(cf.get_int("inequalities", "annulus_ntheta"));
    cfg.ineq_length = cf.get_num_or("inequalities", "interval_length", 1.0);
    cfg.ineq_r0 = cf.get_num_or("inequalities", "annulus_r0", 1.0);
    cfg.ineq_r1 = cf.get_num_or("inequalities", "annulus_r1", 2.0);
  } else {
    throw std::runtime_error(cf.name() + ": unknown mode '" + cfg.mode +
                             "' (expected simulate, eps_sweep, asymptotics, or inequalities)");
  }

  if (cfg.mode == "asymptotics") {
    if (cf.has("asymptotics", "mass_thresholds"))
      cfg.mass_thresholds = cf.get_num_list("asymptotics", "mass_thresholds");
    cfg.fit_t1_frac = cf.get_num_or("asymptotics", "fit_t1_frac", 0.5);
    cfg.fit_t2_frac = cf.get_num_or("asymptotics", "fit_t2_frac", 1.0);
    if (!(cfg.fit_t1_frac > 0.0) || !(cfg.fit_t2_frac > cfg.fit_t1_frac) ||
        cfg.fit_t2_frac > 1.0)
      throw std::runtime_error(cf.name() + ": fit window fractions must satisfy 0 < t1 < t2 <= 1");
  }
  return cfg;
}

Grid build_grid(const ExperimentConfig& cfg) {
  if (cfg.geometry == "interval") return make_interval(cfg.length, cfg.n0);
  if (cfg.geometry == "rectangle") return make_rectangle(cfg.lx, cfg.ly, cfg.n0, cfg.n1);
  if (cfg.geometry == "annulus") return make_annulus(cfg.r0, cfg.r1, cfg.n0, cfg.n1);
  throw std::runtime_error("build_grid: no [grid] section was loaded for mode " + cfg.mode);
}

}  // namespace ccsim

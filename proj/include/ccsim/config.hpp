#pragma once

// Flat sectioned key = value configuration (one nesting level, '#'/';'
// comments). Parsing is strict: unknown sections or keys, missing required
// keys, and malformed numbers are reported with file and line. The
// regularization strength, end time, and grid resolution never default --
// every run states them explicitly.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ccsim/grid.hpp"
#include "ccsim/initial.hpp"
#include "ccsim/solver.hpp"

namespace ccsim {

class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text, const std::string& name);

  bool has(const std::string& section, const std::string& key) const;
  std::string get_str(const std::string& section, const std::string& key) const;
  std::string get_str_or(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_num(const std::string& section, const std::string& key) const;
  double get_num_or(const std::string& section, const std::string& key,
                    double fallback) const;
  int64_t get_int(const std::string& section, const std::string& key) const;
  int64_t get_int_or(const std::string& section, const std::string& key,
                     int64_t fallback) const;
  bool get_bool_or(const std::string& section, const std::string& key,
                   bool fallback) const;
  std::vector<double> get_num_list(const std::string& section,
                                   const std::string& key) const;

  const std::string& name() const { return name_; }
  // All section/key pairs present, for strict validation.
  std::vector<std::pair<std::string, std::string>> entries() const;
  int line_of(const std::string& section, const std::string& key) const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::string name_;
  std::map<std::string, std::map<std::string, Entry>> sections_;

  const Entry& require(const std::string& section, const std::string& key) const;
};

struct ExperimentConfig {
  std::string mode;  // simulate | eps_sweep | asymptotics | inequalities
  std::string config_path;

  // [grid] (absent in inequalities mode)
  std::string geometry;
  double length = 0, lx = 0, ly = 0, r0 = 0, r1 = 0;
  int n0 = 0, n1 = 0;

  // [initial]
  ScenarioSpec scenario;

  // [run]
  SimParams sim;
  bool keep_fields = false;  // also write fields/t<k>.csv at record times

  // [sweep]
  std::vector<double> eps_list;

  // [asymptotics]
  std::vector<double> mass_thresholds = {0.1, 0.01};  // fractions of initial signal mass
  double fit_t1_frac = 0.5, fit_t2_frac = 1.0;        // growth-fit window in t_end units

  // [inequalities]
  int ineq_seeds = 200;
  int boundary_seeds = 100;
  int trace_samples = 500;
  std::vector<double> eta_list = {0.1, 1.0};
  int interval_n = 0;
  int annulus_nr = 0, annulus_ntheta = 0;
  double ineq_r0 = 1.0, ineq_r1 = 2.0, ineq_length = 1.0;

  // [output]
  std::string out_dir = "out";
  uint64_t seed = 1;
};

ExperimentConfig load_experiment_config(const std::string& path);

// Build the grid named by the [grid] section (simulate/sweep/asymptotics).
Grid build_grid(const ExperimentConfig& cfg);

}  // namespace ccsim

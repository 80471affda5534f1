#pragma once

#include <iosfwd>
#include <string>

#include "subwave/stability.hpp"
#include "subwave/topology.hpp"

namespace subwave {

// Run configuration, loaded from a single JSON document (schema v1).
// Defaults reproduce the dilute reference regime: delta = 1e-3,
// d = 12, d' = 42, L = 54, R = 1.
struct RunConfig {
  int schema_version = 1;

  struct Geometry {
    std::string kind = "dimer";  // dimer | point_defect
    int M = 10;                  // dimer: N = 4M+1
    int N = 41;                  // point_defect
    double d = 12.0;
    double d_prime = 42.0;
    double L = 54.0;  // unit cell length; defaults to d + d_prime
    double R = 1.0;
    double R_defect = 0.99;
  } geometry;

  struct Physics {
    double delta = 1e-3;
  } physics;

  struct Solver {
    std::string method = "capacitance";  // capacitance | multipole
    int order_lmax = 0;
    long truncation_M = 10000;
    double tail_tol = 1e-6;
    int grid_n = 64;
    double alpha0 = 0.0;  // 0 = default 0.05 * pi / L
    int scan_points = 200;
    double window_lo = 0.0, window_hi = 0.0;  // 0 = auto from capacitance spectrum
  } solver;

  struct Stability {
    double sigma_pct = 8.0;
    int trials = 100;
    std::uint64_t seed = 1;
    std::string model = "full";  // full | nearest-neighbour | point-defect
  } stability;

  struct Output {
    std::string dir = ".";
  } output;

  void validate() const;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

ChainGeometry geometry_from_config(const RunConfig& cfg);
DimerCell cell_from_config(const RunConfig& cfg);
LatticeSumConfig lattice_config_from(const RunConfig& cfg);
StabilityModel stability_model_from(const RunConfig& cfg);

// Subcommand drivers; out_dir overrides cfg.output.dir when non-empty.
// They write their CSV/JSON products and print a one-line summary to `log`.
void cmd_bands(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);
void cmd_modes(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);
void cmd_stability(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);

struct LatticeSumArgs {
  int lambda = 0;
  int mu = 0;
  double kL = 0.1;
  double alphaL = M_PI;
  long M = 10000;
  double tail_tol = 1e-2;
  bool static_mode = false;  // k = 0: closed-form harmonic sum
  bool as_json = false;
};

void cmd_lattice_sum(const LatticeSumArgs& args, std::ostream& out);

// %.17g, the serialization used by every CSV column.
std::string format_g17(double v);

} // namespace subwave

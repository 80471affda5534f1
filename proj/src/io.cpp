#include "subwave/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "subwave/multipole.hpp"

namespace subwave {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846;

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ValidationError("config: JSON parse failure in " + path + ": " + e.what());
  }
  return j;
}

template <class T>
void read_field(const json& j, const char* section, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const std::exception&) {
    throw ValidationError(std::string("config: field ") + section + "." + key +
                          " has the wrong type");
  }
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << content;
}

fs::path prepare_out_dir(const RunConfig& cfg, const std::string& out_dir) {
  fs::path dir = out_dir.empty() ? fs::path(cfg.output.dir) : fs::path(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec && !fs::exists(dir)) throw Error("cannot create output dir " + dir.string());
  return dir;
}

const char* model_name(StabilityModel m) {
  switch (m) {
    case StabilityModel::Full: return "full";
    case StabilityModel::NearestNeighbour: return "nearest-neighbour";
    case StabilityModel::PointDefect: return "point-defect";
  }
  return "?";
}

json optional_to_json(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

// window clamped away from the Rayleigh anomalies k L = +-alpha L mod 2 pi
bool clamp_window(FrequencyWindow& w, double alphaL, double L, double margin) {
  const double safety = margin + 2e-3;
  for (int n = -2; n <= 2; ++n) {
    for (double a : {alphaL, -alphaL}) {
      const double kl_anom = a + 2.0 * kPi * n;
      if (kl_anom <= 0.0) continue;
      const double lo = w.lo * L, hi = w.hi * L;
      if (kl_anom > lo + safety && kl_anom < hi + safety)
        w.hi = (kl_anom - safety) / L;
      else if (kl_anom >= lo - safety && kl_anom <= lo + safety)
        return false;  // the window floor itself is anomalous
    }
  }
  return w.hi > w.lo;
}

} // namespace

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void RunConfig::validate() const {
  if (schema_version != 1) throw ValidationError("config: schema_version must be 1");
  if (geometry.kind != "dimer" && geometry.kind != "point_defect")
    throw ValidationError("config: geometry.kind must be dimer | point_defect");
  if (!(geometry.d > 0.0)) throw ValidationError("config: geometry.d must be > 0");
  if (!(geometry.d_prime > 0.0))
    throw ValidationError("config: geometry.d_prime must be > 0");
  if (!(geometry.L > 0.0)) throw ValidationError("config: geometry.L must be > 0");
  if (!(geometry.R > 0.0)) throw ValidationError("config: geometry.R must be > 0");
  if (!(geometry.R_defect > 0.0))
    throw ValidationError("config: geometry.R_defect must be > 0");
  if (std::abs(geometry.L - (geometry.d + geometry.d_prime)) >
      1e-9 * std::max(1.0, geometry.L))
    throw ValidationError("config: geometry.L must equal d + d_prime");
  if (geometry.kind == "dimer" && geometry.M < 1)
    throw ValidationError("config: geometry.M must be >= 1");
  if (geometry.kind == "point_defect" && (geometry.N < 3 || geometry.N % 2 == 0))
    throw ValidationError("config: geometry.N must be odd and >= 3");
  if (!(physics.delta > 0.0 && physics.delta < 1.0))
    throw ValidationError("config: physics.delta must lie in (0, 1)");
  if (solver.method != "capacitance" && solver.method != "multipole")
    throw ValidationError("config: solver.method must be capacitance | multipole");
  if (solver.order_lmax < 0)
    throw ValidationError("config: solver.order_lmax must be >= 0");
  if (solver.truncation_M < 1)
    throw ValidationError("config: solver.truncation_M must be >= 1");
  if (!(solver.tail_tol > 0.0))
    throw ValidationError("config: solver.tail_tol must be > 0");
  if (solver.grid_n < 16)
    throw ValidationError("config: solver.grid_n must be >= 16");
  if (solver.grid_n % 2 != 0)
    throw ValidationError("config: solver.grid_n must be even");
  if (solver.scan_points < 8)
    throw ValidationError("config: solver.scan_points must be >= 8");
  if (solver.alpha0 < 0.0 || solver.alpha0 >= kPi / geometry.L)
    throw ValidationError("config: solver.alpha0 must lie in [0, pi/L)");
  if (stability.sigma_pct < 0.0)
    throw ValidationError("config: stability.sigma_pct must be >= 0");
  if (stability.trials < 2)
    throw ValidationError("config: stability.trials must be >= 2");
  if (stability.model != "full" && stability.model != "nearest-neighbour" &&
      stability.model != "point-defect")
    throw ValidationError(
        "config: stability.model must be full | nearest-neighbour | point-defect");
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    throw ValidationError(std::string("config: JSON parse failure: ") + e.what());
  }
  RunConfig cfg;
  read_field(j, "", "schema_version", cfg.schema_version);
  if (j.contains("geometry")) {
    const auto& g = j["geometry"];
    read_field(g, "geometry", "kind", cfg.geometry.kind);
    read_field(g, "geometry", "M", cfg.geometry.M);
    read_field(g, "geometry", "N", cfg.geometry.N);
    read_field(g, "geometry", "d", cfg.geometry.d);
    read_field(g, "geometry", "d_prime", cfg.geometry.d_prime);
    if (g.contains("L"))
      read_field(g, "geometry", "L", cfg.geometry.L);
    else
      cfg.geometry.L = cfg.geometry.d + cfg.geometry.d_prime;
    read_field(g, "geometry", "R", cfg.geometry.R);
    read_field(g, "geometry", "R_defect", cfg.geometry.R_defect);
  }
  if (j.contains("physics"))
    read_field(j["physics"], "physics", "delta", cfg.physics.delta);
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    read_field(s, "solver", "method", cfg.solver.method);
    read_field(s, "solver", "order_lmax", cfg.solver.order_lmax);
    read_field(s, "solver", "truncation_M", cfg.solver.truncation_M);
    read_field(s, "solver", "tail_tol", cfg.solver.tail_tol);
    read_field(s, "solver", "grid_n", cfg.solver.grid_n);
    read_field(s, "solver", "alpha0", cfg.solver.alpha0);
    read_field(s, "solver", "scan_points", cfg.solver.scan_points);
    read_field(s, "solver", "window_lo", cfg.solver.window_lo);
    read_field(s, "solver", "window_hi", cfg.solver.window_hi);
  }
  if (j.contains("stability")) {
    const auto& s = j["stability"];
    read_field(s, "stability", "sigma_pct", cfg.stability.sigma_pct);
    read_field(s, "stability", "trials", cfg.stability.trials);
    read_field(s, "stability", "seed", cfg.stability.seed);
    read_field(s, "stability", "model", cfg.stability.model);
  }
  if (j.contains("output"))
    read_field(j["output"], "output", "dir", cfg.output.dir);
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  return parse_config(load_json_file(path).dump());
}

ChainGeometry geometry_from_config(const RunConfig& cfg) {
  if (cfg.geometry.kind == "dimer")
    return build_dimer_chain(cfg.geometry.M, cfg.geometry.d, cfg.geometry.d_prime,
                             cfg.geometry.R);
  return build_point_defect_chain(cfg.geometry.N, cfg.geometry.d, cfg.geometry.R,
                                  cfg.geometry.R_defect);
}

DimerCell cell_from_config(const RunConfig& cfg) {
  DimerCell c;
  c.d = cfg.geometry.d;
  c.L = cfg.geometry.L;
  c.R = cfg.geometry.R;
  c.validate();
  return c;
}

LatticeSumConfig lattice_config_from(const RunConfig& cfg) {
  LatticeSumConfig l;
  l.truncation_M = cfg.solver.truncation_M;
  l.tail_tol = cfg.solver.tail_tol;
  return l;
}

StabilityModel stability_model_from(const RunConfig& cfg) {
  if (cfg.stability.model == "full") return StabilityModel::Full;
  if (cfg.stability.model == "nearest-neighbour") return StabilityModel::NearestNeighbour;
  return StabilityModel::PointDefect;
}

void cmd_bands(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
  const fs::path dir = prepare_out_dir(cfg, out_dir);
  const DimerCell cell = cell_from_config(cfg);
  const double delta = cfg.physics.delta;
  BandStructure bs = compute_band_structure(cell, delta, cfg.solver.grid_n,
                                            QuasiModel::Full, cfg.solver.order_lmax);

  int refined = 0;
  if (cfg.solver.method == "multipole") {
    const MultipoleBasis basis{cfg.solver.order_lmax};
    const LatticeSumConfig lcfg = lattice_config_from(cfg);
    for (auto& p : bs.points) {
      FrequencyWindow w{0.96 * p.omega1, 1.04 * p.omega2};
      if (!clamp_window(w, std::abs(p.q.alphaL()), cell.L, lcfg.anomaly_margin)) continue;
      try {
        const auto vals = find_characteristic_values(cell, p.q, basis, delta, w, 2, lcfg,
                                                     {cfg.solver.scan_points, 1e-8});
        p.omega1 = vals[0];
        p.omega2 = vals[1];
        ++refined;
      } catch (const Error&) {
        // keep the leading-order values where the solver cannot refine
      }
    }
  }

  std::ostringstream csv;
  csv << "alpha,omega1,omega2,theta_alpha,degenerate_flag\n";
  for (const auto& p : bs.points)
    csv << format_g17(p.q.alpha) << ',' << format_g17(p.omega1) << ','
        << format_g17(p.omega2) << ',' << format_g17(p.theta_alpha) << ','
        << (p.degenerate ? 1 : 0) << '\n';
  write_file(dir / "bands.csv", csv.str());

  const double alpha0 =
      cfg.solver.alpha0 > 0.0 ? cfg.solver.alpha0 : 0.05 * kPi / cell.L;
  const GapReport gap = band_gap_check(bs, alpha0);

  json summary;
  summary["schema_version"] = 1;
  summary["geometry"] = {{"d", cell.d}, {"d_prime", cell.d_prime()}, {"L", cell.L},
                         {"R", cell.R}};
  summary["delta"] = delta;
  summary["grid_n"] = cfg.solver.grid_n;
  summary["method"] = cfg.solver.method;
  summary["order_lmax"] = cfg.solver.order_lmax;
  summary["refined_points"] = refined;
  try {
    const ZakResult z = zak_phase(bs);
    summary["zak_phase"] = z.phase;
    summary["zak_snap_distance"] = z.snap_distance;
    summary["winding_number"] = z.winding;
    summary["net_theta_change"] = z.net_theta_change;
  } catch (const DegenerateError& e) {
    summary["zak_phase"] = nullptr;
    summary["degenerate"] = true;
    summary["degenerate_detail"] = e.what();
  }
  summary["gap"] = {{"alpha0", gap.alpha0},
                    {"max_omega1", gap.max_omega1},
                    {"min_omega2", gap.min_omega2},
                    {"width", gap.gap_width},
                    {"open", gap.has_gap}};
  summary["zone_edge"] = {{"omega1", bs.zone_edge.omega1},
                          {"omega2", bs.zone_edge.omega2},
                          {"degenerate", bs.zone_edge.degenerate}};
  write_file(dir / "bands_summary.json", summary.dump(2) + "\n");
  log << "bands: " << bs.points.size() << " grid points -> " << (dir / "bands.csv").string()
      << ", gap width " << gap.gap_width << "\n";
}

void cmd_modes(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
  const fs::path dir = prepare_out_dir(cfg, out_dir);
  const ChainGeometry geom = geometry_from_config(cfg);
  const double delta = cfg.physics.delta;
  const double vol = sphere_volume(cfg.geometry.R);

  const CapacitanceMatrix C = finite_capacitance(geom, cfg.solver.order_lmax);
  SpectrumReport spec = finite_frequencies(C, delta, vol);

  if (cfg.solver.method == "multipole") {
    const MultipoleBasis basis{cfg.solver.order_lmax};
    FrequencyWindow w{cfg.solver.window_lo, cfg.solver.window_hi};
    if (w.hi <= w.lo) {
      w.lo = 0.9 * spec.freqs(0);
      w.hi = 1.1 * spec.freqs(spec.freqs.size() - 1);
    }
    const auto vals = find_characteristic_values(geom, basis, delta, w, geom.size(),
                                                 {cfg.solver.scan_points, 1e-9});
    for (int j = 0; j < geom.size(); ++j) spec.freqs(j) = vals[j];
  }

  // in-gap flags against the infinite-chain band gap of the underlying cell:
  // dimer chains use (d, L = d + d'); the defect chain's bulk is the equally
  // spaced chain, a degenerate dimer with d = d' = spacing.
  DimerCell bulk;
  bulk.R = cfg.geometry.R;
  if (geom.kind == ChainKind::Dimer) {
    bulk.d = cfg.geometry.d;
    bulk.L = cfg.geometry.d + cfg.geometry.d_prime;
  } else {
    bulk.d = cfg.geometry.d;
    bulk.L = 2.0 * cfg.geometry.d;
  }
  const BandStructure bulk_bs =
      compute_band_structure(bulk, delta, cfg.solver.grid_n, QuasiModel::Full, 0);
  const GapReport bulk_gap = band_gap_check(bulk_bs, 0.05 * kPi / bulk.L);

  const auto in_gap = [&](double f) {
    return bulk_gap.has_gap && f > bulk_gap.max_omega1 && f < bulk_gap.min_omega2;
  };

  std::ostringstream fcsv;
  fcsv << "index,omega,in_gap\n";
  for (int j = 0; j < spec.freqs.size(); ++j)
    fcsv << j << ',' << format_g17(spec.freqs(j)) << ',' << (in_gap(spec.freqs(j)) ? 1 : 0)
         << '\n';
  write_file(dir / "modes.csv", fcsv.str());

  std::ostringstream ecsv;
  ecsv << "mode,resonator,coefficient\n";
  for (int j = 0; j < spec.modes.cols(); ++j)
    for (int i = 0; i < spec.modes.rows(); ++i)
      ecsv << j << ',' << i << ',' << format_g17(spec.modes(i, j)) << '\n';
  write_file(dir / "eigenvectors.csv", ecsv.str());

  // localization report for the most center-localized mode
  int loc = 0;
  double best = -1.0;
  for (int j = 0; j < spec.freqs.size(); ++j) {
    const double w = center_weight(spec, j);
    if (w > best) {
      best = w;
      loc = j;
    }
  }
  const LocalizationMetric lm = localization_metric(spec, loc);
  json lj;
  lj["schema_version"] = 1;
  lj["mode_index"] = lm.mode_index;
  lj["frequency"] = spec.freqs(loc);
  lj["center_weight"] = lm.center_weight;
  lj["decay_ratio"] = lm.decay_ratio;
  lj["in_gap"] = in_gap(spec.freqs(loc));
  lj["bulk_gap"] = {{"max_omega1", bulk_gap.max_omega1},
                    {"min_omega2", bulk_gap.min_omega2},
                    {"width", bulk_gap.gap_width}};
  double nn_dist = std::numeric_limits<double>::infinity();
  for (int j = 0; j < spec.freqs.size(); ++j)
    if (j != loc) nn_dist = std::min(nn_dist, std::abs(spec.freqs(j) - spec.freqs(loc)));
  lj["nearest_frequency_distance"] = nn_dist;
  write_file(dir / "localization.json", lj.dump(2) + "\n");
  write_file(dir / "geometry.txt", serialize_geometry(geom));

  int gap_rows = 0;
  for (int j = 0; j < spec.freqs.size(); ++j)
    if (in_gap(spec.freqs(j))) ++gap_rows;
  log << "modes: " << spec.freqs.size() << " frequencies (" << gap_rows
      << " in gap) -> " << (dir / "modes.csv").string() << "\n";
}

void cmd_stability(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
  const fs::path dir = prepare_out_dir(cfg, out_dir);
  const ChainGeometry geom = geometry_from_config(cfg);
  const StabilityModel model = stability_model_from(cfg);
  if ((model == StabilityModel::PointDefect) != (geom.kind == ChainKind::PointDefect))
    throw ValidationError("config: stability.model point-defect requires "
                          "geometry.kind point_defect (and vice versa)");

  const StabilityReport rep =
      run_stability_experiment(geom, model, cfg.stability.sigma_pct, cfg.stability.trials,
                               cfg.stability.seed, cfg.physics.delta);

  std::ostringstream csv;
  csv << "trial,index,frequency,is_midgap\n";
  for (int t = 0; t < rep.trials; ++t) {
    if (!rep.completed[t]) continue;
    const MidgapClassification mc =  // recover the flagged index per trial
        [&] {
          MidgapClassification m;
          for (int j = 0; j < rep.trial_freqs.cols(); ++j)
            if (rep.midgap_series[t] && rep.trial_freqs(t, j) == *rep.midgap_series[t])
              m.mode_index = j;
          return m;
        }();
    for (int j = 0; j < rep.trial_freqs.cols(); ++j)
      csv << t << ',' << j << ',' << format_g17(rep.trial_freqs(t, j)) << ','
          << ((mc.mode_index && *mc.mode_index == j) ? 1 : 0) << '\n';
  }
  write_file(dir / "stability_trials.csv", csv.str());

  json j;
  j["schema_version"] = 1;
  j["model"] = model_name(rep.model);
  j["trials"] = rep.trials;
  j["sigma_pct"] = rep.sigma_pct;
  j["seed"] = rep.seed;
  j["delta"] = rep.delta;
  j["skipped_trials"] = rep.skipped_trials;
  j["retention_rate"] = rep.retention_rate;
  j["gap"] = {{"lo", rep.gap.lo_bounded ? json(rep.gap.lo) : json(nullptr)},
              {"hi", rep.gap.hi_bounded ? json(rep.gap.hi) : json(nullptr)}};
  j["variance_table"] = {{"upper_band", optional_to_json(rep.var_upper_edge)},
                         {"midgap", optional_to_json(rep.var_midgap)},
                         {"lower_band", optional_to_json(rep.var_lower_edge)}};
  j["var_tracked_mode"] = rep.var_tracked;
  json ref = json::array();
  for (int i = 0; i < rep.reference.freqs.size(); ++i)
    ref.push_back(rep.reference.freqs(i));
  j["reference_frequencies"] = ref;
  json mid = json::array();
  for (int t = 0; t < rep.trials; ++t) mid.push_back(optional_to_json(rep.midgap_series[t]));
  j["midgap_series"] = mid;
  write_file(dir / "stability.json", j.dump(2) + "\n");
  write_file(dir / "geometry.txt", serialize_geometry(geom));

  log << "stability: " << rep.trials << " trials (" << rep.skipped_trials
      << " skipped), retention " << rep.retention_rate << " -> "
      << (dir / "stability.json").string() << "\n";
}

void cmd_lattice_sum(const LatticeSumArgs& args, std::ostream& out) {
  // kL/alphaL fully determine the sum; work in units L = 1.
  const QuasiMomentum q(args.alphaL, 1.0);
  if (args.static_mode) {
    if (std::remainder(args.alphaL, 2.0 * kPi) == 0.0)
      throw Error("lattice-sum: harmonic sum diverges at alpha L = 0");
    const double v = harmonic_quasi_sum(q);
    if (args.as_json) {
      json j;
      j["mode"] = "harmonic";
      j["alphaL"] = args.alphaL;
      j["value"] = v;
      out << j.dump(2) << "\n";
    } else {
      out << "harmonic quasiperiodic sum at alphaL = " << format_g17(args.alphaL)
          << ": " << format_g17(v) << "\n";
    }
    return;
  }
  LatticeSumConfig cfg;
  cfg.truncation_M = args.M;
  cfg.tail_tol = args.tail_tol;
  const LatticeSumResult r =
      helmholtz_lattice_sum_Q(args.lambda, args.mu, args.kL, q, cfg);
  if (args.as_json) {
    json j;
    j["mode"] = "helmholtz";
    j["lambda"] = args.lambda;
    j["mu"] = args.mu;
    j["kL"] = args.kL;
    j["alphaL"] = args.alphaL;
    j["value_re"] = r.value.real();
    j["value_im"] = r.value.imag();
    j["truncation_M"] = r.truncation_M;
    j["tail_bound"] = r.tail_bound;
    out << j.dump(2) << "\n";
  } else {
    out << "Q_" << args.lambda << "^" << args.mu << "(kL = " << format_g17(args.kL)
        << ", alphaL = " << format_g17(args.alphaL) << ") = " << format_g17(r.value.real())
        << (r.value.imag() < 0 ? " - " : " + ") << format_g17(std::abs(r.value.imag()))
        << "i   [M = " << r.truncation_M << ", tail bound " << format_g17(r.tail_bound)
        << "]\n";
  }
}

} // namespace subwave

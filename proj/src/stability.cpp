#include "subwave/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace subwave {

namespace {

constexpr double kPi = 3.14159265358979323846;

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

SpectrumReport spectrum_for(const ChainGeometry& geom, StabilityModel model,
                            double delta, double vol) {
  CapacitanceMatrix C;
  switch (model) {
    case StabilityModel::Full:
    case StabilityModel::PointDefect:
      C = finite_capacitance(geom, 0);
      break;
    case StabilityModel::NearestNeighbour: {
      const double R = geom.prov.R > 0.0 ? geom.prov.R : geom.radii.front();
      C = nearest_neighbour_truncate(
          dilute_finite_capacitance(geom.centers, R, 4.0 * kPi),
          TruncationMode::DiluteConstantDiagonal);
      break;
    }
  }
  return finite_frequencies(C, delta, vol);
}

} // namespace

double pairwise_mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  return pairwise_sum(xs.data(), xs.size()) / double(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  const double mu = pairwise_mean(xs);
  std::vector<double> dev2(n);
  for (std::size_t i = 0; i < n; ++i) dev2[i] = (xs[i] - mu) * (xs[i] - mu);
  return pairwise_sum(dev2.data(), n) / double(n - 1);
}

double center_weight(const SpectrumReport& s, int mode) {
  const int N = static_cast<int>(s.modes.rows());
  const int c = N / 2;
  const double norm2 = s.modes.col(mode).squaredNorm();
  const double w = s.modes(c, mode) * s.modes(c, mode);
  return norm2 > 0.0 ? w / norm2 : 0.0;
}

LocalizationMetric localization_metric(const SpectrumReport& s, int mode) {
  if (mode < 0 || mode >= s.freqs.size())
    throw ValidationError("localization_metric: bad mode index");
  LocalizationMetric m;
  m.mode_index = mode;
  m.center_weight = center_weight(s, mode);
  const int N = static_cast<int>(s.modes.rows());
  const int c = N / 2;
  const auto amp = [&](int k) {
    double a = 0.0;
    if (c - k >= 0) a = std::max(a, std::abs(s.modes(c - k, mode)));
    if (c + k < N) a = std::max(a, std::abs(s.modes(c + k, mode)));
    return a;
  };
  double worst = 0.0;
  for (int k = 0; c + k + 2 < N || c - k - 2 >= 0; k += 2) {
    const double a0 = amp(k), a2 = amp(k + 2);
    if (a0 > 1e-12) worst = std::max(worst, a2 / a0);
    if (c + k + 2 >= N && c - k - 2 < 0) break;
  }
  m.decay_ratio = worst;
  return m;
}

GapInterval reference_gap(const SpectrumReport& s) {
  const int N = static_cast<int>(s.freqs.size());
  if (N < 3) throw ValidationError("reference_gap: need at least 3 modes");
  int loc = 0;
  double best = -1.0;
  for (int j = 0; j < N; ++j) {
    const double w = center_weight(s, j);
    if (w > best) {
      best = w;
      loc = j;
    }
  }
  GapInterval g;
  if (loc == 0) {
    g.lo_bounded = false;
    g.lo = 0.0;
  } else {
    g.lo = s.freqs(loc - 1);
  }
  if (loc == N - 1) {
    g.hi_bounded = false;
    g.hi = 0.0;
  } else {
    g.hi = s.freqs(loc + 1);
  }
  return g;
}

MidgapClassification classify_midgap(const SpectrumReport& s, const GapInterval& gap,
                                     bool tie_break) {
  MidgapClassification r;
  std::vector<int> candidates;
  for (int j = 0; j < s.freqs.size(); ++j)
    if (gap.contains(s.freqs(j))) candidates.push_back(j);
  r.candidate_count = static_cast<int>(candidates.size());
  if (candidates.size() == 1) {
    r.mode_index = candidates[0];
    r.frequency = s.freqs(candidates[0]);
  } else if (candidates.size() > 1 && tie_break) {
    int best = candidates[0];
    for (int j : candidates)
      if (center_weight(s, j) > center_weight(s, best)) best = j;
    r.mode_index = best;
    r.frequency = s.freqs(best);
  }
  return r;
}

StabilityReport run_stability_experiment(const ChainGeometry& base, StabilityModel model,
                                         double sigma_pct, int trials,
                                         std::uint64_t seed, double delta, Exec exec) {
  base.validate();
  if (trials < 2) throw ValidationError("run_stability_experiment: trials >= 2");
  if (sigma_pct < 0.0) throw ValidationError("run_stability_experiment: sigma >= 0");
  if (model == StabilityModel::PointDefect && base.kind != ChainKind::PointDefect)
    throw ValidationError("run_stability_experiment: point-defect model needs a "
                          "point-defect geometry");

  const int N = base.size();
  const double R = base.prov.R > 0.0 ? base.prov.R : base.radii.front();
  const double vol = sphere_volume(R);

  StabilityReport rep;
  rep.model = model;
  rep.trials = trials;
  rep.sigma_pct = sigma_pct;
  rep.seed = seed;
  rep.delta = delta;
  rep.reference = spectrum_for(base, model, delta, vol);
  rep.gap = reference_gap(rep.reference);

  rep.trial_freqs = Eigen::MatrixXd::Zero(trials, N);
  rep.midgap_series.assign(trials, std::nullopt);
  rep.lower_edge_series.assign(trials, std::nullopt);
  rep.upper_edge_series.assign(trials, std::nullopt);
  rep.tracked_series.assign(trials, 0.0);
  rep.trial_seeds.resize(trials);
  rep.completed.assign(trials, 0);
  auto& ok = rep.completed;
  std::vector<int> candidate_counts(trials, 0);

  parallel_for(static_cast<std::size_t>(trials), exec, [&](std::size_t t) {
    const std::uint64_t trial_seed = seed ^ static_cast<std::uint64_t>(t);
    rep.trial_seeds[t] = trial_seed;
    ChainGeometry g;
    try {
      g = perturb_positions(base, sigma_pct, trial_seed);
    } catch (const OverlapError&) {
      return;  // skipped trial, counted below
    }
    const SpectrumReport s = spectrum_for(g, model, delta, vol);
    for (int j = 0; j < N; ++j) rep.trial_freqs(t, j) = s.freqs(j);

    const MidgapClassification mc = classify_midgap(s, rep.gap, /*tie_break=*/true);
    candidate_counts[t] = mc.candidate_count;
    if (mc.frequency) rep.midgap_series[t] = mc.frequency;

    if (rep.gap.lo_bounded) {
      double lo = -1.0;
      for (int j = 0; j < N; ++j)
        if (s.freqs(j) <= rep.gap.lo) lo = std::max(lo, s.freqs(j));
      if (lo >= 0.0) rep.lower_edge_series[t] = lo;
    }
    if (rep.gap.hi_bounded) {
      double hi = std::numeric_limits<double>::infinity();
      for (int j = 0; j < N; ++j)
        if (s.freqs(j) >= rep.gap.hi) hi = std::min(hi, s.freqs(j));
      if (std::isfinite(hi)) rep.upper_edge_series[t] = hi;
    }
    int track = 0;
    double best = -1.0;
    for (int j = 0; j < N; ++j) {
      const double w = center_weight(s, j);
      if (w > best) {
        best = w;
        track = j;
      }
    }
    rep.tracked_series[t] = s.freqs(track);
    ok[t] = 1;
  });

  int skipped = 0;
  int retained = 0;
  std::vector<double> mid, lo, hi, trk;
  for (int t = 0; t < trials; ++t) {
    if (!ok[t]) {
      ++skipped;
      continue;
    }
    if (candidate_counts[t] == 1) ++retained;
    if (rep.midgap_series[t]) mid.push_back(*rep.midgap_series[t]);
    if (rep.lower_edge_series[t]) lo.push_back(*rep.lower_edge_series[t]);
    if (rep.upper_edge_series[t]) hi.push_back(*rep.upper_edge_series[t]);
    trk.push_back(rep.tracked_series[t]);
  }
  rep.skipped_trials = skipped;
  if (skipped > std::max(1, trials / 100))
    throw Error("run_stability_experiment: " + std::to_string(skipped) +
                " skipped trials exceed the 1% budget; configuration is ill-posed");
  const int done = trials - skipped;
  rep.retention_rate = done > 0 ? double(retained) / double(done) : 0.0;
  if (mid.size() >= 2) rep.var_midgap = sample_variance(mid);
  if (lo.size() >= 2) rep.var_lower_edge = sample_variance(lo);
  if (hi.size() >= 2) rep.var_upper_edge = sample_variance(hi);
  rep.var_tracked = sample_variance(trk);
  return rep;
}

std::vector<ModelComparisonRow> compare_models(const std::vector<StabilityReport>& reports) {
  if (reports.empty()) throw ValidationError("compare_models: no reports");
  for (const auto& r : reports) {
    if (r.sigma_pct != reports.front().sigma_pct || r.trials != reports.front().trials)
      throw ValidationError("compare_models: reports must share sigma and trials");
  }
  std::vector<ModelComparisonRow> rows;
  for (const auto& r : reports) {
    ModelComparisonRow row;
    row.model = r.model;
    row.var_midgap = r.var_midgap;
    row.var_lower_edge = r.var_lower_edge;
    row.var_upper_edge = r.var_upper_edge;
    row.var_tracked = r.var_tracked;
    row.retention_rate = r.retention_rate;
    rows.push_back(row);
  }
  return rows;
}

} // namespace subwave

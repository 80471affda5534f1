#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "subwave/capacitance.hpp"
#include "subwave/parallel.hpp"

namespace subwave {

enum class StabilityModel { Full, NearestNeighbour, PointDefect };

// Reference interval protecting the localized mode, taken from the
// unperturbed spectrum: the open interval between the neighbours of the
// max-center-weight mode. For the dimer chain this is exactly the bulk gap.
// A side is unbounded when the localized mode sits at the spectrum end.
struct GapInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_bounded = true;
  bool hi_bounded = true;

  bool contains(double f) const {
    return (!lo_bounded || f > lo) && (!hi_bounded || f < hi);
  }
};

struct MidgapClassification {
  std::optional<int> mode_index;
  std::optional<double> frequency;
  int candidate_count = 0;  // frequencies strictly inside the gap
};

// The unique frequency strictly inside the gap; with tie_break, multiple
// candidates are resolved by eigenvector center weight (candidate_count still
// reports the multiplicity).
MidgapClassification classify_midgap(const SpectrumReport& s, const GapInterval& gap,
                                     bool tie_break = false);

// Builds the reference interval from an unperturbed spectrum.
GapInterval reference_gap(const SpectrumReport& s);

struct LocalizationMetric {
  int mode_index = 0;
  double center_weight = 0.0;  // squared eigenvector mass on the central resonator
  double decay_ratio = 0.0;    // worst per-unit-cell falloff of |v| away from the center
};

LocalizationMetric localization_metric(const SpectrumReport& s, int mode);

double center_weight(const SpectrumReport& s, int mode);

struct StabilityReport {
  StabilityModel model = StabilityModel::Full;
  int trials = 0;
  double sigma_pct = 0.0;
  std::uint64_t seed = 0;
  double delta = 0.0;
  GapInterval gap;
  SpectrumReport reference;

  Eigen::MatrixXd trial_freqs;  // trials x N, ascending per row
  std::vector<std::optional<double>> midgap_series;
  std::vector<std::optional<double>> lower_edge_series;  // largest freq below the gap
  std::vector<std::optional<double>> upper_edge_series;  // smallest freq above the gap
  std::vector<double> tracked_series;  // frequency of the max-center-weight mode

  std::optional<double> var_midgap;
  std::optional<double> var_lower_edge;
  std::optional<double> var_upper_edge;
  double var_tracked = 0.0;
  double retention_rate = 0.0;  // fraction of trials with a unique in-gap frequency
  int skipped_trials = 0;
  std::vector<char> completed;  // per-trial flag (0 = skipped by overlap)
  std::vector<std::uint64_t> trial_seeds;
};

StabilityReport run_stability_experiment(const ChainGeometry& base, StabilityModel model,
                                         double sigma_pct, int trials,
                                         std::uint64_t seed, double delta,
                                         Exec exec = Exec::Parallel);

struct ModelComparisonRow {
  StabilityModel model;
  std::optional<double> var_midgap, var_lower_edge, var_upper_edge;
  double var_tracked = 0.0;
  double retention_rate = 0.0;
};

// Tabulates variance and retention across reports sharing sigma and trials.
std::vector<ModelComparisonRow> compare_models(const std::vector<StabilityReport>& reports);

// Order-independent (pairwise) mean and unbiased sample variance.
double pairwise_mean(const std::vector<double>& xs);
double sample_variance(const std::vector<double>& xs);

} // namespace subwave

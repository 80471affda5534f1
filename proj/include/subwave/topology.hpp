#pragma once

#include <vector>

#include "subwave/capacitance.hpp"
#include "subwave/parallel.hpp"

namespace subwave {

enum class QuasiModel { Full, Dilute };

// Band data over the offset alpha-grid
//   alpha_j L = -pi + (j - 1/2) * 2 pi / grid_n,  j = 1..grid_n  (grid_n even),
// which avoids alpha = 0 and the zone edge; the zone-edge point alpha L = pi
// is computed separately (band inversion and degeneracy live there).
struct BandStructure {
  std::vector<BandPoint> points;
  BandPoint zone_edge;
  int grid_n = 0;
  DimerCell cell;
  double delta = 0.0;
  QuasiModel model = QuasiModel::Full;
  int order = 0;
};

BandStructure compute_band_structure(const DimerCell& cell, double delta, int grid_n,
                                     QuasiModel model = QuasiModel::Full, int order = 0,
                                     Exec exec = Exec::Parallel);

struct UnwrapResult {
  std::vector<double> theta;  // continuous samples over the grid
  double net_change = 0.0;    // [theta]_{Y*} including the periodic closure
  double total_variation = 0.0;
};

// Continuous unwrapping of theta_alpha = arg C_12^alpha over the closed zone.
// Throws DegenerateError if any point (or the zone edge) has C_12 = 0, and
// UnderResolvedError if a step reaches pi/2.
UnwrapResult unwrap_theta(const BandStructure& bs);

struct ZakResult {
  double phase = 0.0;          // snapped to {0, pi}
  double raw_phase = 0.0;      // -(1/2) [theta]_{Y*} reduced mod 2 pi
  double snap_distance = 0.0;  // must be < 0.1 rad
  int winding = 0;             // of the C_12 curve around the origin
  double net_theta_change = 0.0;
};

ZakResult zak_phase(const BandStructure& bs);

struct GapReport {
  double max_omega1 = 0.0;
  double min_omega2 = 0.0;
  double gap_width = 0.0;  // min omega2 - max omega1 over |alpha| > alpha0
  bool has_gap = false;
  double alpha0 = 0.0;
};

GapReport band_gap_check(const BandStructure& bs, double alpha0);

enum class ModeCharacter { Monopole, Dipole, Ambiguous };

struct BandInversionReport {
  ModeCharacter band1_A = ModeCharacter::Ambiguous;
  ModeCharacter band2_A = ModeCharacter::Ambiguous;
  ModeCharacter band1_B = ModeCharacter::Ambiguous;
  ModeCharacter band2_B = ModeCharacter::Ambiguous;
  bool inverted = false;  // classification swaps between the two geometries
};

// Classifies the zone-edge eigenvectors of two cells as monopole
// ((1,1)/sqrt2-like) or dipole ((1,-1)/sqrt2-like) up to a global phase.
BandInversionReport band_inversion_check(const DimerCell& cellA, const DimerCell& cellB,
                                         double delta, QuasiModel model = QuasiModel::Full,
                                         int order = 0);

ModeCharacter classify_zone_edge_vector(const Eigen::Vector2cd& v);

// Winding number of a closed curve (ordered samples) around the origin.
// Throws if the curve comes within 1e-12 of the origin.
int winding_number(const std::vector<Complex>& curve);

} // namespace subwave

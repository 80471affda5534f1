#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "subwave/errors.hpp"

namespace subwave {

enum class ChainKind { Dimer, PointDefect, Custom };

struct PerturbationRecord {
  double sigma_pct = 0.0;
  std::uint64_t seed = 0;
};

// A finite collinear chain of spherical resonators (axial coordinates).
struct ChainGeometry {
  std::vector<double> centers;  // strictly increasing
  std::vector<double> radii;
  ChainKind kind = ChainKind::Custom;

  struct Provenance {
    int N = 0;
    int M = 0;
    double d = 0.0, d_prime = 0.0, R = 0.0, R_defect = 0.0;
    std::optional<PerturbationRecord> perturbation;
  } prov;

  int size() const { return static_cast<int>(centers.size()); }
  double mean_gap() const;
  int center_index() const { return size() / 2; }
  // strictly increasing centers, neighbour gap > R_i + R_{i+1}
  void validate() const;
};

// One unit cell of the infinite dimer chain: two spheres of radius R at
// -d/2 and +d/2, cell length L, so the across-cell separation is d' = L - d.
struct DimerCell {
  double d = 0.0;
  double L = 0.0;
  double R = 0.0;

  double d_prime() const { return L - d; }
  void validate() const;
};

// Symmetric finite dimer chain with N = 4M+1 resonators; the gap sequence is
// d, d', ..., d, d' | d', d, ..., d', d (the alternation is swapped at the
// middle resonator, which has the d' gap on both sides).
ChainGeometry build_dimer_chain(int M, double d, double d_prime, double R);

// Equally spaced chain (spacing d, radius R) whose central resonator has
// radius R_defect.
ChainGeometry build_point_defect_chain(int N, double d, double R, double R_defect);

// Adds i.i.d. Gaussian offsets to the axial centers with
// sigma = sigma_pct/100 * mean neighbour gap. Deterministic given the seed;
// redraws (up to 100 times) if the perturbed chain overlaps.
ChainGeometry perturb_positions(const ChainGeometry& geom, double sigma_pct,
                                std::uint64_t seed);

enum class TruncationMode { DiluteConstantDiagonal, Raw };

struct CapacitanceMatrix;  // capacitance.hpp

CapacitanceMatrix nearest_neighbour_truncate(const CapacitanceMatrix& C,
                                             TruncationMode mode);

struct TranslatedMatrix {
  Eigen::MatrixXd matrix;        // C - mean(diag) I
  double mean_diagonal = 0.0;
  double diagonal_residual = 0.0;  // max |diag(C) - mean|
};

TranslatedMatrix translated_matrix(const CapacitanceMatrix& C);

struct ChiralReport {
  bool is_chiral = false;
  double defect_norm = 0.0;  // ||S Ct S + Ct||_F / ||Ct||_F with S = diag(+1,-1,...)
};

ChiralReport chiral_symmetry_check(const Eigen::MatrixXd& Ct);

// Flat text record, one resonator per line: index center radius.
std::string serialize_geometry(const ChainGeometry& geom);
ChainGeometry parse_geometry(const std::string& text);

} // namespace subwave

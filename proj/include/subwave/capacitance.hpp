#pragma once

#include <optional>

#include <Eigen/Dense>

#include "subwave/chains.hpp"
#include "subwave/lattice.hpp"

namespace subwave {

enum class CapMethod { MultipoleStatic, DiluteAsymptotic, NearestNeighbour };

// Dense capacitance matrix with provenance. Finite chains give a real
// symmetric N x N matrix (stored complex with zero imaginary part);
// quasiperiodic cells give a Hermitian 2 x 2 matrix.
struct CapacitanceMatrix {
  Eigen::MatrixXcd entries;
  std::optional<QuasiMomentum> alpha;
  CapMethod method = CapMethod::MultipoleStatic;
  int order = 0;
  std::optional<double> eps_capB;  // epsilon * Cap_B when built from a dilute form

  bool is_finite() const { return !alpha.has_value(); }
  int size() const { return static_cast<int>(entries.rows()); }
  Eigen::MatrixXd real_entries() const;
};

// Static capacitance of the finite chain. Order 0 solves the monopole system
// A_ii = 1/R_i, A_ij = 1/|z_i - z_j|, C = 4 pi A^{-1}; higher orders extend
// the solve with axial solid-harmonic translations (m = 0 sector).
CapacitanceMatrix finite_capacitance(const ChainGeometry& geom, int order = 0);

// Static quasiperiodic capacitance of the dimer cell (alpha != 0).
CapacitanceMatrix quasi_capacitance(const QuasiMomentum& q, const DimerCell& cell,
                                    int order = 0);

// Dilute asymptotic quasiperiodic capacitance:
//   C11 = eps CapB - (eps CapB)^2/(4 pi) sum_{m != 0} e^{i m aL}/|mL|
//   C12 = -(eps CapB)^2/(4 pi) sum_m e^{i m aL}/|mL + d|
CapacitanceMatrix dilute_quasi_capacitance(const QuasiMomentum& q, double epsilon,
                                           double capB, double d, double L);

// Dilute asymptotic finite capacitance: diagonal eps CapB, off-diagonal
// -(eps CapB)^2 / (4 pi |z_i - z_j|).
CapacitanceMatrix dilute_finite_capacitance(const std::vector<double>& positions,
                                            double epsilon, double capB);

// Leading-order band data at one quasimomentum:
// omega_j = sqrt(delta lambda_j / vol), lambda_{1,2} = C11 -+ |C12|,
// eigenvectors ( -+ e^{i theta}, 1)/sqrt(2) with e^{i theta} = C12/|C12|.
struct BandPoint {
  QuasiMomentum q;
  double omega1 = 0.0, omega2 = 0.0;
  double theta_alpha = 0.0;
  bool degenerate = false;
  Eigen::Vector2cd coeff1, coeff2;
  Complex c12{0.0, 0.0};
  double c11 = 0.0;
};

BandPoint band_point(const QuasiMomentum& q, const CapacitanceMatrix& C, double delta,
                     double vol);

// Finite-chain leading-order spectrum: omega_j = sqrt(delta lambda_j / vol)
// with the capacitance eigenpairs; frequencies ascending, eigenvectors
// orthonormal columns.
struct SpectrumReport {
  Eigen::VectorXd freqs;
  Eigen::MatrixXd modes;  // column j is the coefficient vector of mode j
  double delta = 0.0;
  double vol = 0.0;
};

SpectrumReport finite_frequencies(const CapacitanceMatrix& C, double delta, double vol);

inline double sphere_volume(double R) { return 4.0 * M_PI / 3.0 * R * R * R; }

} // namespace subwave

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "subwave/capacitance.hpp"
#include "subwave/chains.hpp"
#include "subwave/lattice.hpp"
#include "subwave/parallel.hpp"

namespace subwave {

// Truncation order of the multipole basis: (order+1)^2 harmonics per sphere.
struct MultipoleBasis {
  int order_lmax = 0;
  int block_size() const { return (order_lmax + 1) * (order_lmax + 1); }
  int index(int l, int m) const { return l * l + l + m; }
};

enum class SphereSide { Interior, Exterior };

// Radial data of S_D^k on a single sphere:
//   exterior  c j_l(kR) h_l^{(1)}(kr),  interior  c h_l^{(1)}(kR) j_l(kr),
// with c = -i k R^2; the boundary value c j_l(kR) h_l^{(1)}(kR) is shared.
struct SingleLayerCoeff {
  Complex radial_coeff;   // coefficient of h_l (exterior) or j_l (interior)
  Complex boundary_value;
};

SingleLayerCoeff single_layer_sphere_coeff(int l, double k, double R, SphereSide side);

// Discretized single layer with its one-sided normal-derivative companions.
// Row/column index: resonator * block_size + (l^2 + l + m).
struct OperatorMatrix {
  Eigen::MatrixXcd boundary;  // boundary values of S
  Eigen::MatrixXcd grad_int;  // d/dnu S |_-
  Eigen::MatrixXcd grad_ext;  // d/dnu S |_+
  double omega = 0.0;
  std::optional<QuasiMomentum> alpha;
  MultipoleBasis basis;
  int n_resonators = 0;
};

OperatorMatrix assemble_finite_single_layer(const ChainGeometry& geom, double k,
                                            const MultipoleBasis& basis);

OperatorMatrix assemble_quasi_single_layer(const DimerCell& cell, double k,
                                           const QuasiMomentum& q,
                                           const MultipoleBasis& basis,
                                           const LatticeSumConfig& cfg);

// A(omega, delta) = d/dnu S|_- - delta d/dnu S|_+ ; resonances are detected
// as sharp minima of its smallest singular value on the real omega axis.
Eigen::MatrixXcd boundary_operator(const OperatorMatrix& S, double delta);

double smallest_singular_value(const Eigen::MatrixXcd& A);

struct FrequencyWindow {
  double lo = 0.0;
  double hi = 0.0;
};

struct ScanOptions {
  int scan_points = 200;
  double rel_tol = 1e-10;  // golden-section bracket width relative to omega
};

// Characteristic values of the finite-chain boundary operator in the window.
std::vector<double> find_characteristic_values(const ChainGeometry& geom,
                                               const MultipoleBasis& basis, double delta,
                                               FrequencyWindow window, int n_expected,
                                               ScanOptions opts = {},
                                               Exec exec = Exec::Parallel);

// Quasiperiodic version (two per cell expected in the subwavelength regime).
std::vector<double> find_characteristic_values(const DimerCell& cell,
                                               const QuasiMomentum& q,
                                               const MultipoleBasis& basis, double delta,
                                               FrequencyWindow window, int n_expected,
                                               const LatticeSumConfig& cfg,
                                               ScanOptions opts = {},
                                               Exec exec = Exec::Parallel);

} // namespace subwave

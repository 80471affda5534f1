#include "subwave/chains.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "subwave/capacitance.hpp"
#include "subwave/rng.hpp"

namespace subwave {

double ChainGeometry::mean_gap() const {
  if (size() < 2) return 0.0;
  return (centers.back() - centers.front()) / double(size() - 1);
}

void ChainGeometry::validate() const {
  if (centers.size() != radii.size())
    throw ValidationError("ChainGeometry: centers/radii size mismatch");
  if (centers.empty()) throw ValidationError("ChainGeometry: empty");
  for (double r : radii)
    if (!(r > 0.0)) throw ValidationError("ChainGeometry: radii must be positive");
  for (int i = 0; i + 1 < size(); ++i) {
    if (!(centers[i + 1] > centers[i]))
      throw ValidationError("ChainGeometry: centers must be strictly increasing");
    const double gap = centers[i + 1] - centers[i];
    if (!(gap > radii[i] + radii[i + 1]))
      throw OverlapError("ChainGeometry: resonators " + std::to_string(i) + " and " +
                         std::to_string(i + 1) + " overlap (gap " + std::to_string(gap) +
                         ")");
  }
}

void DimerCell::validate() const {
  if (!(L > 0.0) || !(d > 0.0) || !(d < L)) throw ValidationError("DimerCell: 0 < d < L");
  if (!(R > 0.0)) throw ValidationError("DimerCell: R > 0");
  if (!(d > 2.0 * R) || !(d_prime() > 2.0 * R))
    throw OverlapError("DimerCell: separations must exceed 2R");
}

ChainGeometry build_dimer_chain(int M, double d, double d_prime, double R) {
  if (M < 1) throw ValidationError("build_dimer_chain: require M >= 1");
  if (!(R > 0.0)) throw ValidationError("build_dimer_chain: R > 0");
  if (!(d > 2.0 * R) || !(d_prime > 2.0 * R))
    throw OverlapError("build_dimer_chain: separations must exceed 2R");

  const int N = 4 * M + 1;
  ChainGeometry g;
  g.kind = ChainKind::Dimer;
  g.centers.resize(N);
  g.radii.assign(N, R);
  const int c = 2 * M;
  g.centers[c] = 0.0;
  // rightward gaps read d', d, d', d, ...; left side mirrored
  double z = 0.0;
  for (int j = 1; j <= 2 * M; ++j) {
    z += (j % 2 == 1) ? d_prime : d;
    g.centers[c + j] = z;
    g.centers[c - j] = -z;
  }
  g.prov.N = N;
  g.prov.M = M;
  g.prov.d = d;
  g.prov.d_prime = d_prime;
  g.prov.R = R;
  g.validate();
  return g;
}

ChainGeometry build_point_defect_chain(int N, double d, double R, double R_defect) {
  if (N < 3 || N % 2 == 0)
    throw ValidationError("build_point_defect_chain: N must be odd and >= 3");
  if (!(R > 0.0) || !(R_defect > 0.0))
    throw ValidationError("build_point_defect_chain: radii must be positive");
  if (!(d > 2.0 * std::max(R, R_defect)))
    throw OverlapError("build_point_defect_chain: spacing must exceed 2 max(R, R_d)");

  ChainGeometry g;
  g.kind = ChainKind::PointDefect;
  const int h = N / 2;
  g.centers.resize(N);
  g.radii.assign(N, R);
  for (int j = 0; j < N; ++j) g.centers[j] = (j - h) * d;
  g.radii[h] = R_defect;
  g.prov.N = N;
  g.prov.d = d;
  g.prov.R = R;
  g.prov.R_defect = R_defect;
  g.validate();
  return g;
}

ChainGeometry perturb_positions(const ChainGeometry& geom, double sigma_pct,
                                std::uint64_t seed) {
  if (sigma_pct < 0.0) throw ValidationError("perturb_positions: sigma_pct >= 0");
  ChainGeometry out = geom;
  out.prov.perturbation = PerturbationRecord{sigma_pct, seed};
  if (sigma_pct == 0.0) return out;

  const double sigma = sigma_pct / 100.0 * geom.mean_gap();
  GaussianSampler gauss(seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    for (int i = 0; i < geom.size(); ++i)
      out.centers[i] = geom.centers[i] + sigma * gauss();
    try {
      out.validate();
      return out;
    } catch (const Error&) {
      // overlapping draw; try again with fresh Gaussians
    }
  }
  throw OverlapError("perturb_positions: no non-overlapping draw in 100 attempts (sigma " +
                     std::to_string(sigma_pct) + "%)");
}

CapacitanceMatrix nearest_neighbour_truncate(const CapacitanceMatrix& C,
                                             TruncationMode mode) {
  if (!C.is_finite())
    throw ValidationError("nearest_neighbour_truncate: finite matrices only");
  const int n = C.size();
  CapacitanceMatrix out = C;
  out.method = CapMethod::NearestNeighbour;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(i - j) > 1) out.entries(i, j) = 0.0;
  if (mode == TruncationMode::DiluteConstantDiagonal) {
    double diag;
    if (C.eps_capB.has_value()) {
      diag = *C.eps_capB;
    } else {
      diag = C.entries.real().diagonal().mean();
    }
    for (int i = 0; i < n; ++i) out.entries(i, i) = diag;
    out.eps_capB = diag;
  }
  return out;
}

TranslatedMatrix translated_matrix(const CapacitanceMatrix& C) {
  if (!C.is_finite()) throw ValidationError("translated_matrix: finite matrices only");
  TranslatedMatrix t;
  const Eigen::MatrixXd real = C.real_entries();
  t.mean_diagonal = real.diagonal().mean();
  t.matrix = real - t.mean_diagonal * Eigen::MatrixXd::Identity(real.rows(), real.cols());
  t.diagonal_residual = t.matrix.diagonal().cwiseAbs().maxCoeff();
  return t;
}

ChiralReport chiral_symmetry_check(const Eigen::MatrixXd& Ct) {
  const int n = static_cast<int>(Ct.rows());
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) s(i) = (i % 2 == 0) ? 1.0 : -1.0;
  const Eigen::MatrixXd conj = s.asDiagonal() * Ct * s.asDiagonal();
  ChiralReport r;
  const double denom = Ct.norm();
  r.defect_norm = denom > 0.0 ? (conj + Ct).norm() / denom : 0.0;
  r.is_chiral = r.defect_norm < 1e-10;
  return r;
}

std::string serialize_geometry(const ChainGeometry& geom) {
  std::ostringstream os;
  os << "# subwave geometry v1\n";
  for (int i = 0; i < geom.size(); ++i) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d %.17g %.17g\n", i, geom.centers[i],
                  geom.radii[i]);
    os << buf;
  }
  return os.str();
}

ChainGeometry parse_geometry(const std::string& text) {
  ChainGeometry g;
  g.kind = ChainKind::Custom;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    int idx;
    double z, r;
    if (std::sscanf(line.c_str(), "%d %lg %lg", &idx, &z, &r) != 3)
      throw ValidationError("parse_geometry: bad record: " + line);
    g.centers.push_back(z);
    g.radii.push_back(r);
  }
  g.prov.N = g.size();
  g.validate();
  return g;
}

} // namespace subwave

#include "subwave/capacitance.hpp"

#include <cmath>

namespace subwave {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFourPi = 4.0 * kPi;

double y_norm(int l) { return std::sqrt((2.0 * l + 1.0) / kFourPi); }

double binom(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b *= double(n - k + i) / double(i);
  return b;
}

// Axial translation of the irregular solid harmonic r^{-(ls+1)} P_ls into
// regular harmonics r'^{lo} P_lo about a center displaced by b along the
// polar axis: coefficient binom(ls+lo, ls) / |b|^{ls+lo+1} with sign
// (-1)^{lo} for b > 0 and (-1)^{ls} for b < 0.
double axial_static_translation(int ls, int lo, double b) {
  const double t = std::abs(b);
  const int sign_pow = (b > 0.0) ? lo : ls;
  const double s = (sign_pow % 2 == 0) ? 1.0 : -1.0;
  return s * binom(ls + lo, ls) / std::pow(t, ls + lo + 1);
}

// Column-block entry of the static potential-matching system: the Y_lo
// coefficient on sphere `obs` of the field of a Y_ls surface density on
// sphere `src` (distinct spheres), per unit density coefficient.
double static_cross_entry(double R_src, double R_obs, int ls, int lo, double b) {
  return -std::pow(R_src, ls + 2) * y_norm(ls) * axial_static_translation(ls, lo, b) *
         std::pow(R_obs, lo) / ((2.0 * ls + 1.0) * y_norm(lo));
}

} // namespace

Eigen::MatrixXd CapacitanceMatrix::real_entries() const {
  return entries.real();
}

CapacitanceMatrix finite_capacitance(const ChainGeometry& geom, int order) {
  geom.validate();
  if (order < 0) throw ValidationError("finite_capacitance: order >= 0");
  const int N = geom.size();
  const int nl = order + 1;
  const int dim = N * nl;

  // Self term: S[Y_l](boundary) = -R/(2l+1) Y_l; cross terms via axial
  // solid-harmonic translations (m = 0 sector only, the data is monopolar).
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < N; ++i)
    for (int l = 0; l < nl; ++l)
      M(i * nl + l, i * nl + l) = -geom.radii[i] / (2.0 * l + 1.0);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      const double b = geom.centers[i] - geom.centers[j];
      for (int lo = 0; lo < nl; ++lo)
        for (int ls = 0; ls < nl; ++ls)
          M(i * nl + lo, j * nl + ls) =
              static_cross_entry(geom.radii[j], geom.radii[i], ls, lo, b);
    }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
  Eigen::MatrixXd C(N, N);
  const double sq4pi = std::sqrt(kFourPi);
  for (int j = 0; j < N; ++j) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
    rhs(j * nl) = sq4pi;
    const Eigen::VectorXd x = lu.solve(rhs);
    for (int i = 0; i < N; ++i)
      C(i, j) = -geom.radii[i] * geom.radii[i] * sq4pi * x(i * nl);
  }
  C = 0.5 * (C + C.transpose()).eval();

  CapacitanceMatrix out;
  out.entries = C.cast<Complex>();
  out.method = CapMethod::MultipoleStatic;
  out.order = order;
  return out;
}

CapacitanceMatrix quasi_capacitance(const QuasiMomentum& q, const DimerCell& cell,
                                    int order) {
  cell.validate();
  if (order < 0) throw ValidationError("quasi_capacitance: order >= 0");
  if (q.is_zero())
    throw ValidationError("quasi_capacitance: static quasiperiodic system is "
                          "singular at alpha = 0");
  const double L = q.L;
  if (std::abs(L - cell.L) > 1e-12 * cell.L)
    throw ValidationError("quasi_capacitance: quasimomentum period != cell length");
  const double R = cell.R;
  const double d = cell.d;
  const Complex z = std::exp(Complex(0.0, q.alphaL()));

  const int nl = order + 1;
  const int dim = 2 * nl;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(dim, dim);

  // lattice image sums per total power s = ls + lo + 1
  std::vector<Complex> li_z(2 * nl), li_zc(2 * nl), pos(2 * nl), neg(2 * nl);
  for (int s = 1; s <= 2 * nl - 1; ++s) {
    li_z[s] = polylog(s, z);
    li_zc[s] = polylog(s, std::conj(z));
    dimer_sum_split(q, d, s, pos[s], neg[s]);
  }

  for (int i = 0; i < 2; ++i)
    for (int lo = 0; lo < nl; ++lo)
      for (int j = 0; j < 2; ++j)
        for (int ls = 0; ls < nl; ++ls) {
          const int s = ls + lo + 1;
          const double so = (lo % 2 == 0) ? 1.0 : -1.0;
          const double ss = (ls % 2 == 0) ? 1.0 : -1.0;
          Complex factor;  // sum over images of sign^... / dist^s, times L^s
          if (i == j) {
            factor = ss * li_z[s] + so * li_zc[s];
          } else if (i == 0) {  // source sphere 2 seen from sphere 1
            factor = ss * pos[s] + so * neg[s];
          } else {  // source sphere 1 seen from sphere 2
            factor = so * std::conj(pos[s]) + ss * std::conj(neg[s]);
          }
          const double pref = -std::pow(R, ls + 2) * y_norm(ls) * binom(ls + lo, ls) *
                              std::pow(R, lo) /
                              ((2.0 * ls + 1.0) * y_norm(lo) * std::pow(L, s));
          M(i * nl + lo, j * nl + ls) = pref * factor;
          if (i == j && lo == ls)
            M(i * nl + lo, j * nl + ls) += -R / (2.0 * lo + 1.0);
        }

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
  Eigen::MatrixXcd C(2, 2);
  const double sq4pi = std::sqrt(kFourPi);
  for (int j = 0; j < 2; ++j) {
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dim);
    rhs(j * nl) = sq4pi;
    const Eigen::VectorXcd x = lu.solve(rhs);
    for (int i = 0; i < 2; ++i) C(i, j) = -R * R * sq4pi * x(i * nl);
  }
  C = (0.5 * (C + C.adjoint())).eval();

  CapacitanceMatrix out;
  out.entries = C;
  out.alpha = q;
  out.method = CapMethod::MultipoleStatic;
  out.order = order;
  return out;
}

CapacitanceMatrix dilute_quasi_capacitance(const QuasiMomentum& q, double epsilon,
                                           double capB, double d, double L) {
  if (!(epsilon > 0.0) || !(capB > 0.0))
    throw ValidationError("dilute_quasi_capacitance: epsilon, CapB > 0");
  if (!(d > 0.0 && d < L)) throw ValidationError("dilute_quasi_capacitance: 0 < d < L");
  if (q.is_zero())
    throw ValidationError("dilute_quasi_capacitance: C11 diverges at alpha = 0");
  const double ec = epsilon * capB;
  const double c11 = ec - ec * ec / kFourPi * harmonic_quasi_sum(q) / L;
  const Complex c12 = -ec * ec / (kFourPi * L) * dimer_sum_f(q, d);

  CapacitanceMatrix out;
  out.entries.resize(2, 2);
  out.entries << Complex(c11, 0.0), c12, std::conj(c12), Complex(c11, 0.0);
  out.alpha = q;
  out.method = CapMethod::DiluteAsymptotic;
  out.eps_capB = ec;
  return out;
}

CapacitanceMatrix dilute_finite_capacitance(const std::vector<double>& positions,
                                            double epsilon, double capB) {
  if (!(epsilon > 0.0) || !(capB > 0.0))
    throw ValidationError("dilute_finite_capacitance: epsilon, CapB > 0");
  const int N = static_cast<int>(positions.size());
  const double ec = epsilon * capB;
  Eigen::MatrixXd C(N, N);
  for (int i = 0; i < N; ++i) {
    C(i, i) = ec;
    for (int j = i + 1; j < N; ++j) {
      const double dist = std::abs(positions[i] - positions[j]);
      if (dist == 0.0)
        throw ValidationError("dilute_finite_capacitance: coincident positions");
      C(i, j) = C(j, i) = -ec * ec / (kFourPi * dist);
    }
  }
  CapacitanceMatrix out;
  out.entries = C.cast<Complex>();
  out.method = CapMethod::DiluteAsymptotic;
  out.eps_capB = ec;
  return out;
}

BandPoint band_point(const QuasiMomentum& q, const CapacitanceMatrix& C, double delta,
                     double vol) {
  if (C.size() != 2 || C.is_finite())
    throw ValidationError("band_point: needs a quasiperiodic 2x2 matrix");
  if (!(delta > 0.0) || !(vol > 0.0))
    throw ValidationError("band_point: delta, vol > 0");
  BandPoint p;
  p.q = q;
  const double c11 = C.entries(0, 0).real();
  const Complex c12 = C.entries(0, 1);
  p.c11 = c11;
  p.c12 = c12;
  const double a12 = std::abs(c12);
  p.degenerate = a12 < 1e-10 * std::abs(c11);
  const double l1 = c11 - a12, l2 = c11 + a12;
  p.omega1 = std::sqrt(std::max(0.0, delta * l1 / vol));
  p.omega2 = std::sqrt(std::max(0.0, delta * l2 / vol));
  if (!p.degenerate) {
    double th = std::arg(c12);
    if (th < 0.0) th += 2.0 * kPi;
    p.theta_alpha = th;
    const Complex e = c12 / a12;
    p.coeff1 << -e / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    p.coeff2 << e / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  } else {
    p.theta_alpha = 0.0;
    p.coeff1 << 1.0, 0.0;
    p.coeff2 << 0.0, 1.0;
  }
  return p;
}

SpectrumReport finite_frequencies(const CapacitanceMatrix& C, double delta, double vol) {
  if (!C.is_finite()) throw ValidationError("finite_frequencies: finite matrices only");
  if (!(delta > 0.0) || !(vol > 0.0))
    throw ValidationError("finite_frequencies: delta, vol > 0");
  const Eigen::MatrixXd A = C.real_entries();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  SpectrumReport r;
  r.delta = delta;
  r.vol = vol;
  const int N = C.size();
  r.freqs.resize(N);
  for (int j = 0; j < N; ++j)
    r.freqs(j) = std::sqrt(std::max(0.0, delta * es.eigenvalues()(j) / vol));
  r.modes = es.eigenvectors();
  return r;
}

} // namespace subwave

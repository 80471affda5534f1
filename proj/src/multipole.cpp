#include "subwave/multipole.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "subwave/specfun.hpp"

namespace subwave {

namespace {

constexpr double kPi = 3.14159265358979323846;

Complex layer_c(double k, double R) { return Complex(0.0, -k * R * R); }

// Per-sphere diagonal data at one (l): boundary value and one-sided radial
// derivatives of (SingleLayer_multipole).
struct DiagData {
  Complex boundary, grad_int, grad_ext;
};

DiagData sphere_diag(int l, double k, double R) {
  const Complex c = layer_c(k, R);
  const double x = k * R;
  const double j = sph_bessel_j(l, x);
  const Complex h = sph_hankel_h1(l, x);
  const double jd = sph_bessel_j_deriv(l, x);
  const Complex hd = sph_hankel_h1_deriv(l, x);
  DiagData d;
  d.boundary = c * j * h;
  d.grad_int = c * h * k * jd;
  d.grad_ext = c * j * k * hd;
  return d;
}

// Writes a translated (source sphere -> observation sphere) block:
// T(l,m -> l',m) are the expansion coefficients of the incoming field; the
// boundary/gradient rows weight them with j_{l'}(kR_obs) and k j'_{l'}(kR_obs).
void add_translated_block(OperatorMatrix& S, int i_obs, int j_src, double k,
                          double R_obs, const MultipoleBasis& basis,
                          const std::vector<Eigen::MatrixXcd>& T_per_m,
                          const std::vector<Complex>& src_pref) {
  const int bs = basis.block_size();
  const int p = basis.order_lmax;
  for (int m = -p; m <= p; ++m) {
    const Eigen::MatrixXcd& T = T_per_m[m + p];
    for (int l = std::abs(m); l <= p; ++l)
      for (int lp = std::abs(m); lp <= p; ++lp) {
        const int row = i_obs * bs + basis.index(lp, m);
        const int col = j_src * bs + basis.index(l, m);
        const Complex v = src_pref[l] * T(l, lp);
        S.boundary(row, col) += v * sph_bessel_j(lp, k * R_obs);
        const Complex g = v * k * sph_bessel_j_deriv(lp, k * R_obs);
        S.grad_int(row, col) += g;
        S.grad_ext(row, col) += g;
      }
  }
}

// Direct axial translation coefficients for all (l -> l') at fixed m.
std::vector<Eigen::MatrixXcd> axial_translation_tables(int p, int, double k, double b,
                                                       TranslationKind kind) {
  std::vector<Eigen::MatrixXcd> T(2 * p + 1);
  for (int m = -p; m <= p; ++m) {
    Eigen::MatrixXcd& t = T[m + p] = Eigen::MatrixXcd::Zero(p + 1, p + 1);
    for (int l = std::abs(m); l <= p; ++l)
      for (int lp = std::abs(m); lp <= p; ++lp)
        t(l, lp) = translation_coeff_A(l, m, lp, m, k, b, kind);
  }
  return T;
}

// Lattice-summed axial translation coefficients for the quasiperiodic case.
std::vector<Eigen::MatrixXcd> lattice_translation_tables(int p, double k,
                                                         const QuasiMomentum& q,
                                                         double offset,
                                                         const LatticeSumConfig& cfg) {
  const auto g = lattice_image_sums(2 * p, k, q, offset, cfg);
  std::vector<Eigen::MatrixXcd> T(2 * p + 1);
  for (int m = -p; m <= p; ++m) {
    Eigen::MatrixXcd& t = T[m + p] = Eigen::MatrixXcd::Zero(p + 1, p + 1);
    for (int l = std::abs(m); l <= p; ++l)
      for (int lp = std::abs(m); lp <= p; ++lp) {
        Complex a{0.0, 0.0};
        for (int lam = std::abs(l - lp); lam <= l + lp; ++lam) {
          if ((l + lp + lam) % 2 != 0) continue;
          const Complex c = translation_coeff_C(l, m, lp, m, lam, 0);
          if (c == Complex{0.0, 0.0}) continue;
          const double n_lam = std::sqrt((2.0 * lam + 1.0) / (4.0 * kPi));
          a += n_lam * c * g[lam].value;  // image-side signs live in g
        }
        t(l, lp) = a;
      }
  }
  return T;
}

double golden_section(const std::function<double(double)>& f, double a, double b,
                      double rel_tol) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > rel_tol * 0.5 * (a + b)) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

std::vector<double> scan_for_minima(const std::function<double(double)>& objective,
                                    FrequencyWindow window, int n_expected,
                                    const ScanOptions& opts, Exec exec) {
  if (!(window.lo > 0.0 && window.hi > window.lo))
    throw ValidationError("find_characteristic_values: need 0 < lo < hi");
  const int n = std::max(opts.scan_points, 8);
  std::vector<double> omega(n), val(n);
  for (int i = 0; i < n; ++i)
    omega[i] = window.lo + (window.hi - window.lo) * double(i) / double(n - 1);
  parallel_for(static_cast<std::size_t>(n), exec,
               [&](std::size_t i) { val[i] = objective(omega[i]); });

  struct Minimum {
    double omega;
    double value;
  };
  std::vector<Minimum> minima;
  for (int i = 1; i + 1 < n; ++i) {
    if (val[i] <= val[i - 1] && val[i] <= val[i + 1] &&
        (val[i] < val[i - 1] || val[i] < val[i + 1])) {
      const double w = golden_section(objective, omega[i - 1], omega[i + 1], opts.rel_tol);
      minima.push_back({w, objective(w)});
    }
  }
  std::sort(minima.begin(), minima.end(),
            [](const Minimum& a, const Minimum& b) { return a.omega < b.omega; });
  // merge refinements that collapsed to the same point
  std::vector<Minimum> merged;
  for (const auto& m : minima) {
    if (!merged.empty() && std::abs(m.omega - merged.back().omega) <
                               1e-8 * (window.hi - window.lo)) {
      if (m.value < merged.back().value) merged.back() = m;
    } else {
      merged.push_back(m);
    }
  }
  if (static_cast<int>(merged.size()) < n_expected) {
    std::vector<double> found;
    for (const auto& m : merged) found.push_back(m.omega);
    throw ShortfallError("find_characteristic_values: expected " +
                             std::to_string(n_expected) + " minima, found " +
                             std::to_string(merged.size()),
                         found);
  }
  if (static_cast<int>(merged.size()) > n_expected) {
    std::sort(merged.begin(), merged.end(),
              [](const Minimum& a, const Minimum& b) { return a.value < b.value; });
    merged.resize(n_expected);
    std::sort(merged.begin(), merged.end(),
              [](const Minimum& a, const Minimum& b) { return a.omega < b.omega; });
  }
  std::vector<double> out;
  for (const auto& m : merged) out.push_back(m.omega);
  return out;
}

} // namespace

SingleLayerCoeff single_layer_sphere_coeff(int l, double k, double R, SphereSide side) {
  if (!(k > 0.0) || !(R > 0.0))
    throw ValidationError("single_layer_sphere_coeff: k, R > 0");
  const Complex c = layer_c(k, R);
  const double j = sph_bessel_j(l, k * R);
  const Complex h = sph_hankel_h1(l, k * R);
  SingleLayerCoeff out;
  out.boundary_value = c * j * h;
  out.radial_coeff = (side == SphereSide::Exterior) ? c * j : c * h;
  return out;
}

OperatorMatrix assemble_finite_single_layer(const ChainGeometry& geom, double k,
                                            const MultipoleBasis& basis) {
  geom.validate();
  if (!(k > 0.0)) throw ValidationError("assemble_finite_single_layer: k > 0");
  const int N = geom.size();
  const int bs = basis.block_size();
  const int p = basis.order_lmax;
  OperatorMatrix S;
  S.omega = k;
  S.basis = basis;
  S.n_resonators = N;
  S.boundary = Eigen::MatrixXcd::Zero(N * bs, N * bs);
  S.grad_int = S.boundary;
  S.grad_ext = S.boundary;

  for (int i = 0; i < N; ++i)
    for (int l = 0; l <= p; ++l) {
      const DiagData d = sphere_diag(l, k, geom.radii[i]);
      for (int m = -l; m <= l; ++m) {
        const int idx = i * bs + basis.index(l, m);
        S.boundary(idx, idx) = d.boundary;
        S.grad_int(idx, idx) = d.grad_int;
        S.grad_ext(idx, idx) = d.grad_ext;
      }
    }

  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      const double b = geom.centers[i] - geom.centers[j];
      const auto T = axial_translation_tables(p, p, k, b, TranslationKind::Outgoing);
      std::vector<Complex> src_pref(p + 1);
      for (int l = 0; l <= p; ++l)
        src_pref[l] = layer_c(k, geom.radii[j]) * sph_bessel_j(l, k * geom.radii[j]);
      add_translated_block(S, i, j, k, geom.radii[i], basis, T, src_pref);
    }
  return S;
}

OperatorMatrix assemble_quasi_single_layer(const DimerCell& cell, double k,
                                           const QuasiMomentum& q,
                                           const MultipoleBasis& basis,
                                           const LatticeSumConfig& cfg) {
  cell.validate();
  if (!(k > 0.0)) throw ValidationError("assemble_quasi_single_layer: k > 0");
  if (q.is_zero()) throw ValidationError("assemble_quasi_single_layer: alpha != 0");
  const int bs = basis.block_size();
  const int p = basis.order_lmax;
  OperatorMatrix S;
  S.omega = k;
  S.alpha = q;
  S.basis = basis;
  S.n_resonators = 2;
  S.boundary = Eigen::MatrixXcd::Zero(2 * bs, 2 * bs);
  S.grad_int = S.boundary;
  S.grad_ext = S.boundary;

  const double R = cell.R;
  std::vector<Complex> src_pref(p + 1);
  for (int l = 0; l <= p; ++l) src_pref[l] = layer_c(k, R) * sph_bessel_j(l, k * R);

  for (int i = 0; i < 2; ++i)
    for (int l = 0; l <= p; ++l) {
      const DiagData d = sphere_diag(l, k, R);
      for (int m = -l; m <= l; ++m) {
        const int idx = i * bs + basis.index(l, m);
        S.boundary(idx, idx) = d.boundary;
        S.grad_int(idx, idx) = d.grad_int;
        S.grad_ext(idx, idx) = d.grad_ext;
      }
    }

  // self-coupling through the lattice images
  const auto T_self = lattice_translation_tables(p, k, q, 0.0, cfg);
  add_translated_block(S, 0, 0, k, R, basis, T_self, src_pref);
  add_translated_block(S, 1, 1, k, R, basis, T_self, src_pref);

  // cross-resonator terms: same-cell translation plus lattice images
  for (int i = 0; i < 2; ++i) {
    const int j = 1 - i;
    const double offset = (i == 0) ? -cell.d : cell.d;  // z_i - z_j
    auto T = axial_translation_tables(p, p, k, offset, TranslationKind::Outgoing);
    const auto T_lat = lattice_translation_tables(p, k, q, offset, cfg);
    for (int m = -p; m <= p; ++m) T[m + p] += T_lat[m + p];
    add_translated_block(S, i, j, k, R, basis, T, src_pref);
  }
  return S;
}

Eigen::MatrixXcd boundary_operator(const OperatorMatrix& S, double delta) {
  return S.grad_int - delta * S.grad_ext;
}

double smallest_singular_value(const Eigen::MatrixXcd& A) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

std::vector<double> find_characteristic_values(const ChainGeometry& geom,
                                               const MultipoleBasis& basis, double delta,
                                               FrequencyWindow window, int n_expected,
                                               ScanOptions opts, Exec exec) {
  const auto objective = [&](double w) {
    return smallest_singular_value(
        boundary_operator(assemble_finite_single_layer(geom, w, basis), delta));
  };
  return scan_for_minima(objective, window, n_expected, opts, exec);
}

std::vector<double> find_characteristic_values(const DimerCell& cell,
                                               const QuasiMomentum& q,
                                               const MultipoleBasis& basis, double delta,
                                               FrequencyWindow window, int n_expected,
                                               const LatticeSumConfig& cfg,
                                               ScanOptions opts, Exec exec) {
  const auto objective = [&](double w) {
    return smallest_singular_value(
        boundary_operator(assemble_quasi_single_layer(cell, w, q, basis, cfg), delta));
  };
  return scan_for_minima(objective, window, n_expected, opts, exec);
}

} // namespace subwave

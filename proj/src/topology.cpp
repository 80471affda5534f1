#include "subwave/topology.hpp"

#include <cmath>
#include <limits>

namespace subwave {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_pm_pi(double x) {
  double r = std::remainder(x, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

BandPoint band_point_at(const DimerCell& cell, double alphaL, double delta,
                        QuasiModel model, int order) {
  const QuasiMomentum q(alphaL / cell.L, cell.L);
  CapacitanceMatrix C;
  if (model == QuasiModel::Full) {
    C = quasi_capacitance(q, cell, order);
  } else {
    // unit ball rescaled by R: Cap_B = 4 pi, epsilon = R
    C = dilute_quasi_capacitance(q, cell.R, 4.0 * kPi, cell.d, cell.L);
  }
  return band_point(q, C, delta, sphere_volume(cell.R));
}

} // namespace

BandStructure compute_band_structure(const DimerCell& cell, double delta, int grid_n,
                                     QuasiModel model, int order, Exec exec) {
  cell.validate();
  if (grid_n < 16) throw ValidationError("compute_band_structure: grid_n >= 16");
  if (grid_n % 2 != 0)
    throw ValidationError("compute_band_structure: grid_n must be even so the "
                          "offset grid avoids alpha = 0");
  if (!(delta > 0.0 && delta < 1.0))
    throw ValidationError("compute_band_structure: delta in (0,1)");

  BandStructure bs;
  bs.grid_n = grid_n;
  bs.cell = cell;
  bs.delta = delta;
  bs.model = model;
  bs.order = order;
  bs.points.resize(grid_n);
  const double h = 2.0 * kPi / grid_n;
  parallel_for(static_cast<std::size_t>(grid_n), exec, [&](std::size_t j) {
    const double aL = -kPi + (double(j) + 0.5) * h;
    bs.points[j] = band_point_at(cell, aL, delta, model, order);
  });
  bs.zone_edge = band_point_at(cell, kPi, delta, model, order);
  return bs;
}

UnwrapResult unwrap_theta(const BandStructure& bs) {
  if (bs.points.empty()) throw ValidationError("unwrap_theta: empty band structure");
  for (const auto& p : bs.points)
    if (p.degenerate)
      throw DegenerateError("unwrap_theta: C_12 = 0 at alpha L = " +
                            std::to_string(p.q.alphaL()));
  if (bs.zone_edge.degenerate)
    throw DegenerateError("unwrap_theta: C_12 = 0 at the zone edge alpha L = pi "
                          "(alpha = " +
                          std::to_string(bs.zone_edge.q.alpha) + ")");

  UnwrapResult r;
  const int n = static_cast<int>(bs.points.size());
  r.theta.resize(n);
  r.theta[0] = bs.points[0].theta_alpha;
  for (int j = 1; j < n; ++j) {
    const double step =
        wrap_pm_pi(bs.points[j].theta_alpha - bs.points[j - 1].theta_alpha);
    if (std::abs(step) >= kPi / 2.0)
      throw UnderResolvedError("unwrap_theta: phase step " + std::to_string(step) +
                               " at alpha L = " +
                               std::to_string(bs.points[j].q.alphaL()) +
                               "; refine the grid");
    r.theta[j] = r.theta[j - 1] + step;
    r.total_variation += std::abs(step);
  }
  // periodic closure back to the first point (C_12 is 2 pi / L periodic)
  const double closure =
      wrap_pm_pi(bs.points[0].theta_alpha - bs.points[n - 1].theta_alpha);
  if (std::abs(closure) >= kPi / 2.0)
    throw UnderResolvedError("unwrap_theta: phase step across the zone edge "
                             "too large; refine the grid");
  r.total_variation += std::abs(closure);
  r.net_change = r.theta[n - 1] + closure - r.theta[0];
  return r;
}

ZakResult zak_phase(const BandStructure& bs) {
  const UnwrapResult u = unwrap_theta(bs);
  ZakResult z;
  z.net_theta_change = u.net_change;
  z.winding = static_cast<int>(std::lround(u.net_change / (2.0 * kPi)));
  double phase = -0.5 * u.net_change;
  phase = phase - 2.0 * kPi * std::floor(phase / (2.0 * kPi));  // into [0, 2 pi)
  z.raw_phase = phase;
  const double d0 = std::min(phase, 2.0 * kPi - phase);
  const double dpi = std::abs(phase - kPi);
  z.phase = (d0 <= dpi) ? 0.0 : kPi;
  z.snap_distance = std::min(d0, dpi);
  if (z.snap_distance >= 0.1)
    throw Error("zak_phase: ambiguous value " + std::to_string(phase) +
                " (snap distance " + std::to_string(z.snap_distance) + ")");
  return z;
}

GapReport band_gap_check(const BandStructure& bs, double alpha0) {
  if (!(alpha0 > 0.0 && alpha0 < kPi / bs.cell.L))
    throw ValidationError("band_gap_check: alpha0 strictly inside the zone");
  GapReport g;
  g.alpha0 = alpha0;
  bool any = false;
  g.max_omega1 = -std::numeric_limits<double>::infinity();
  g.min_omega2 = std::numeric_limits<double>::infinity();
  for (const auto& p : bs.points) {
    if (std::abs(p.q.alpha) <= alpha0) continue;
    any = true;
    g.max_omega1 = std::max(g.max_omega1, p.omega1);
    g.min_omega2 = std::min(g.min_omega2, p.omega2);
  }
  if (!any) throw ValidationError("band_gap_check: no grid points with |alpha| > alpha0");
  // the zone edge itself is the extreme |alpha| sample
  g.max_omega1 = std::max(g.max_omega1, bs.zone_edge.omega1);
  g.min_omega2 = std::min(g.min_omega2, bs.zone_edge.omega2);
  g.gap_width = g.min_omega2 - g.max_omega1;
  g.has_gap = g.gap_width > 0.0;
  return g;
}

ModeCharacter classify_zone_edge_vector(const Eigen::Vector2cd& v) {
  // distance to the pattern up to a global phase: sqrt(2 - 2 |<v, p>|)
  const auto dist_to = [&](const Eigen::Vector2cd& p) {
    const double ip = std::abs((p.adjoint() * v)(0, 0));
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * ip));
  };
  Eigen::Vector2cd mono, di;
  mono << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  di << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  const double dm = dist_to(mono), dd = dist_to(di);
  if (dm < 0.1 && dm < dd) return ModeCharacter::Monopole;
  if (dd < 0.1 && dd < dm) return ModeCharacter::Dipole;
  return ModeCharacter::Ambiguous;
}

BandInversionReport band_inversion_check(const DimerCell& cellA, const DimerCell& cellB,
                                         double delta, QuasiModel model, int order) {
  const BandPoint a = band_point_at(cellA, kPi, delta, model, order);
  const BandPoint b = band_point_at(cellB, kPi, delta, model, order);
  if (a.degenerate || b.degenerate)
    throw DegenerateError("band_inversion_check: degenerate zone-edge point");
  BandInversionReport r;
  r.band1_A = classify_zone_edge_vector(a.coeff1);
  r.band2_A = classify_zone_edge_vector(a.coeff2);
  r.band1_B = classify_zone_edge_vector(b.coeff1);
  r.band2_B = classify_zone_edge_vector(b.coeff2);
  if (r.band1_A == ModeCharacter::Ambiguous || r.band2_A == ModeCharacter::Ambiguous ||
      r.band1_B == ModeCharacter::Ambiguous || r.band2_B == ModeCharacter::Ambiguous)
    throw Error("band_inversion_check: classification ambiguous");
  r.inverted = (r.band1_A != r.band1_B) && (r.band2_A != r.band2_B) &&
               (r.band1_A != r.band2_A) && (r.band1_B != r.band2_B);
  return r;
}

int winding_number(const std::vector<Complex>& curve) {
  if (curve.size() < 3) throw ValidationError("winding_number: need >= 3 samples");
  for (const auto& c : curve)
    if (std::abs(c) < 1e-12)
      throw Error("winding_number: curve within 1e-12 of the origin");
  double total = 0.0;
  const int n = static_cast<int>(curve.size());
  for (int j = 0; j < n; ++j) {
    const Complex a = curve[j];
    const Complex b = curve[(j + 1) % n];
    total += std::arg(b / a);
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

} // namespace subwave

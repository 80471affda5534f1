#include "subwave/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace subwave {

namespace {

constexpr double kPi = 3.14159265358979323846;

double j0_closed(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }
double j1_closed(double x) {
  if (x == 0.0) return 0.0;
  return std::sin(x) / (x * x) - std::cos(x) / x;
}

// i^n for possibly negative n.
Complex ipow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// log(n!) table, sized for 3j symbols up to j ~ 60.
const double* log_fact_table() {
  static const std::array<double, 260> table = [] {
    std::array<double, 260> t{};
    t[0] = 0.0;
    for (std::size_t n = 1; n < t.size(); ++n) t[n] = t[n - 1] + std::log(double(n));
    return t;
  }();
  return table.data();
}

double lfact(int n) { return log_fact_table()[n]; }

} // namespace

std::vector<double> sph_bessel_j_all(int lmax, double x) {
  if (lmax < 0) throw ValidationError("sph_bessel_j_all: lmax < 0");
  if (x < 0.0) throw ValidationError("sph_bessel_j: x < 0");
  std::vector<double> j(lmax + 1, 0.0);
  if (x == 0.0) {
    j[0] = 1.0;
    return j;
  }
  if (x > lmax + 2.0) {
    // upward recurrence, stable in the oscillatory region x > l
    j[0] = j0_closed(x);
    if (lmax >= 1) j[1] = j1_closed(x);
    for (int l = 1; l < lmax; ++l) j[l + 1] = (2 * l + 1) / x * j[l] - j[l - 1];
    return j;
  }
  // Miller downward recurrence from a padded start order, normalized against
  // whichever of j_0, j_1 is better conditioned.
  const int start = lmax + 16 + static_cast<int>(std::ceil(std::sqrt(40.0 * (lmax + 1))));
  double jp = 0.0;         // j_{n+1}
  double jc = 1e-300;      // j_n (arbitrary scale)
  std::vector<double> tmp(start + 1, 0.0);
  for (int n = start; n >= 0; --n) {
    if (n <= lmax) tmp[n] = jc;
    const double jm = (2 * n + 1) / x * jc - jp;
    jp = jc;
    jc = jm;
    if (std::abs(jc) > 1e280) {  // rescale to avoid overflow
      const double s = 1e-280;
      jc *= s;
      jp *= s;
      for (int i = std::min(n, lmax + 1); i <= lmax; ++i) tmp[i] *= s;
    }
  }
  // jc now holds the unnormalized j_{-1}; tmp holds unnormalized j_0..j_lmax.
  const double j0 = j0_closed(x), j1 = j1_closed(x);
  const double unnorm_j1 = lmax >= 1 ? tmp[1] : (tmp[0] / x - jc);
  const double scale = std::abs(j0) >= std::abs(j1) ? j0 / tmp[0] : j1 / unnorm_j1;
  for (int l = 0; l <= lmax; ++l) j[l] = tmp[l] * scale;
  return j;
}

double sph_bessel_j(int l, double x) { return sph_bessel_j_all(l, x)[l]; }

double sph_bessel_y(int l, double x) {
  if (l < 0) throw ValidationError("sph_bessel_y: l < 0");
  if (x <= 0.0) throw ValidationError("sph_bessel_y: require x > 0");
  double ym = -std::cos(x) / x;
  if (l == 0) return ym;
  double yc = -std::cos(x) / (x * x) - std::sin(x) / x;
  for (int n = 1; n < l; ++n) {
    const double yp = (2 * n + 1) / x * yc - ym;
    ym = yc;
    yc = yp;
  }
  return yc;
}

Complex sph_hankel_h1(int l, double x) {
  if (x <= 0.0) throw ValidationError("sph_hankel_h1: singular at x <= 0");
  return {sph_bessel_j(l, x), sph_bessel_y(l, x)};
}

std::vector<Complex> sph_hankel_h1_all(int lmax, double x) {
  if (x <= 0.0) throw ValidationError("sph_hankel_h1: singular at x <= 0");
  const std::vector<double> j = sph_bessel_j_all(lmax, x);
  std::vector<Complex> h(lmax + 1);
  double ym = -std::cos(x) / x;
  double yc = lmax >= 1 ? -std::cos(x) / (x * x) - std::sin(x) / x : 0.0;
  h[0] = {j[0], ym};
  if (lmax >= 1) h[1] = {j[1], yc};
  for (int n = 1; n < lmax; ++n) {
    const double yp = (2 * n + 1) / x * yc - ym;
    ym = yc;
    yc = yp;
    h[n + 1] = {j[n + 1], yc};
  }
  return h;
}

double sph_bessel_j_deriv(int l, double x) {
  if (l == 0) {
    if (x == 0.0) return 0.0;
    return -sph_bessel_j(1, x);
  }
  if (x == 0.0) return l == 1 ? 1.0 / 3.0 : 0.0;
  const auto j = sph_bessel_j_all(l, x);
  return j[l - 1] - (l + 1) / x * j[l];
}

Complex sph_hankel_h1_deriv(int l, double x) {
  if (x <= 0.0) throw ValidationError("sph_hankel_h1_deriv: x <= 0");
  if (l == 0) return -sph_hankel_h1(1, x);
  const auto h = sph_hankel_h1_all(l, x);
  return h[l - 1] - double(l + 1) / x * h[l];
}

double normalized_legendre(int l, int m, double ct) {
  if (m < 0 || m > l) throw ValidationError("normalized_legendre: require 0 <= m <= l");
  const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
  // P~_m^m with Condon-Shortley phase folded in
  double pmm = std::sqrt(1.0 / (4.0 * kPi));
  for (int k = 1; k <= m; ++k)
    pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * st;
  if (l == m) return pmm;
  double pm1 = std::sqrt(2.0 * m + 3.0) * ct * pmm;
  if (l == m + 1) return pm1;
  double p = 0.0;
  for (int n = m + 2; n <= l; ++n) {
    const double a =
        std::sqrt((2.0 * n - 1.0) * (2.0 * n + 1.0) / (double(n - m) * double(n + m)));
    const double b = std::sqrt((2.0 * n + 1.0) * double(n - 1 - m) * double(n - 1 + m) /
                               (double(n - m) * double(n + m) * (2.0 * n - 3.0)));
    p = a * ct * pm1 - b * pmm;
    pmm = pm1;
    pm1 = p;
  }
  return p;
}

Complex spherical_harmonic(const AngularIndex& idx, double theta, double phi) {
  const int l = idx.l, m = idx.m;
  const int am = std::abs(m);
  const double p = normalized_legendre(l, am, std::cos(theta));
  Complex y = p * std::exp(Complex(0.0, am * phi));
  if (m < 0) y = (am % 2 == 0 ? 1.0 : -1.0) * std::conj(y);
  return y;
}

double wigner3j(int j1, int j2, int j3, int m1, int m2, int m3) {
  if (j1 < 0 || j2 < 0 || j3 < 0) return 0.0;
  if (m1 + m2 + m3 != 0) return 0.0;
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return 0.0;
  if (j3 < std::abs(j1 - j2) || j3 > j1 + j2) return 0.0;

  const double log_delta = lfact(j1 + j2 - j3) + lfact(j1 - j2 + j3) +
                           lfact(-j1 + j2 + j3) - lfact(j1 + j2 + j3 + 1);
  const double log_norm = lfact(j1 + m1) + lfact(j1 - m1) + lfact(j2 + m2) +
                          lfact(j2 - m2) + lfact(j3 + m3) + lfact(j3 - m3);

  const int t_min = std::max({0, j2 - j3 - m1, j1 - j3 + m2});
  const int t_max = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});
  double sum = 0.0;
  for (int t = t_min; t <= t_max; ++t) {
    const double log_den = lfact(t) + lfact(j3 - j2 + t + m1) + lfact(j3 - j1 + t - m2) +
                           lfact(j1 + j2 - j3 - t) + lfact(j1 - t - m1) +
                           lfact(j2 - t + m2);
    const double term = std::exp(0.5 * (log_delta + log_norm) - log_den);
    sum += (t % 2 == 0 ? term : -term);
  }
  const int phase = j1 - j2 - m3;
  return (((phase % 2) + 2) % 2 == 0 ? sum : -sum);
}

Complex translation_coeff_C(int l, int m, int lp, int mp, int lambda, int mu) {
  const double w1 = wigner3j(l, lp, lambda, 0, 0, 0);
  if (w1 == 0.0) return {0.0, 0.0};
  const double w2 = wigner3j(l, lp, lambda, -m, mp, mu);
  if (w2 == 0.0) return {0.0, 0.0};
  const double pref =
      std::sqrt(4.0 * kPi * (2.0 * l + 1.0) * (2.0 * lp + 1.0) * (2.0 * lambda + 1.0));
  const double sign = (std::abs(m) % 2 == 0) ? 1.0 : -1.0;
  return ipow(lp - l + lambda) * (sign * pref * w1 * w2);
}

Complex translation_coeff_A(int l, int m, int lp, int mp, double k, double b_z,
                            TranslationKind kind) {
  if (b_z == 0.0) throw ValidationError("translation_coeff_A: zero displacement");
  if (m != mp) return {0.0, 0.0};
  const double r_b = std::abs(b_z);
  const bool down = b_z < 0.0;  // theta_b = pi
  Complex a{0.0, 0.0};
  const int lo = std::abs(l - lp);
  for (int lambda = lo; lambda <= l + lp; ++lambda) {
    if ((l + lp + lambda) % 2 != 0) continue;  // parity rule of (l l' lambda; 0 0 0)
    const Complex c = translation_coeff_C(l, m, lp, mp, lambda, 0);
    if (c == Complex{0.0, 0.0}) continue;
    const double n_lambda = std::sqrt((2.0 * lambda + 1.0) / (4.0 * kPi));
    const Complex w = (kind == TranslationKind::Outgoing)
                          ? sph_hankel_h1(lambda, k * r_b)
                          : Complex(sph_bessel_j(lambda, k * r_b), 0.0);
    const double dir = (down && lambda % 2 != 0) ? -1.0 : 1.0;
    a += dir * n_lambda * c * w;
  }
  return a;
}

Complex translation_coeff_A(int l, int m, int lp, int mp, double k, double r_b,
                            double theta_b, double phi_b, TranslationKind kind) {
  if (r_b <= 0.0) throw ValidationError("translation_coeff_A: require r_b > 0");
  Complex a{0.0, 0.0};
  const int mu = m - mp;  // second 3j needs -m + m' + mu = 0
  for (int lambda = std::abs(l - lp); lambda <= l + lp; ++lambda) {
    if ((l + lp + lambda) % 2 != 0) continue;
    if (std::abs(mu) > lambda) continue;
    const Complex c = translation_coeff_C(l, m, lp, mp, lambda, mu);
    if (c == Complex{0.0, 0.0}) continue;
    const Complex y = spherical_harmonic(AngularIndex(lambda, mu), theta_b, phi_b);
    const Complex w = (kind == TranslationKind::Outgoing)
                          ? sph_hankel_h1(lambda, k * r_b)
                          : Complex(sph_bessel_j(lambda, k * r_b), 0.0);
    a += c * w * y;
  }
  return a;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
}

} // namespace subwave

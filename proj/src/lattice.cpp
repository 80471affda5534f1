#include "subwave/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "subwave/quadrature.hpp"
#include "subwave/specfun.hpp"

namespace subwave {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// distance of x from the nearest multiple of 2*pi
double dist_mod_2pi(double x) {
  double r = std::remainder(x, kTwoPi);
  return std::abs(r);
}

// binomial-style factor of the closed-form spherical Hankel expansion
double hankel_series_coeff(int lambda, int s) {
  double c = 1.0;
  for (int i = 1; i <= s; ++i) c *= double(lambda + i) / double(i);
  for (int i = 0; i < s; ++i) c *= double(lambda - i);
  // (lambda+s)!/(s!(lambda-s)!) = prod_{i=1..s}(lambda+i)/i * prod_{i=0..s-1}(lambda-i)
  return c;
}

Complex ipow_neg(int n) {
  // (-i)^n
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

} // namespace

QuasiMomentum::QuasiMomentum(double alpha_, double L_) : L(L_) {
  if (!(L > 0.0)) throw ValidationError("QuasiMomentum: require L > 0");
  double t = std::fmod(alpha_ * L + kPi, kTwoPi);
  if (t <= 0.0) t += kTwoPi;
  alpha = (t - kPi) / L;
}

double harmonic_quasi_sum(const QuasiMomentum& q) {
  const double aL = q.alphaL();
  if (dist_mod_2pi(aL) == 0.0)
    throw ValidationError("harmonic_quasi_sum: diverges at alpha = 0");
  return -std::log(2.0 - 2.0 * std::cos(aL));
}

Complex lerch_phi(Complex z, double s, double a) {
  if (!(s > 0.0)) throw ValidationError("lerch_phi: require s > 0");
  if (!(a > 0.0)) throw ValidationError("lerch_phi: require a > 0");
  if (z.imag() == 0.0 && z.real() >= 1.0)
    throw ValidationError("lerch_phi: z on the branch cut [1, inf)");
  const double az = std::abs(z);
  if (az > 1.0 + 1e-14) throw ValidationError("lerch_phi: require |z| <= 1");

  if (az <= 0.99) {
    Complex sum{0.0, 0.0};
    Complex zm{1.0, 0.0};
    for (long m = 0; m < 200000; ++m) {
      const Complex term = zm / std::pow(a + double(m), s);
      sum += term;
      if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum)) && m > 4) break;
      zm *= z;
    }
    return sum;
  }

  // integral representation (Re s > 0, z off the cut)
  const double T = (46.0 + 3.0 * s) / a;
  const auto integrand = [&](double t) -> Complex {
    const double ts = (s == 1.0) ? 1.0 : std::pow(t, s - 1.0);
    return ts * std::exp(-a * t) / (1.0 - z * std::exp(-t));
  };
  const Complex I = integrate_c(integrand, 0.0, T, 1e-15, 1e-13);
  return I / std::tgamma(s);
}

Complex polylog(int s, Complex z) {
  if (z == Complex{0.0, 0.0}) return {0.0, 0.0};
  return z * lerch_phi(z, double(s), 1.0);
}

namespace {

// Two-stage window averaging of the partial sums of an oscillatory series
// sum_{m >= 1} term(m) whose tail oscillates with period 2*pi/phi in m.
// Sums m = 1..M directly, then averages over windows sized to an (approximate)
// integer multiple of the period, twice, which suppresses the O(1/M)
// oscillatory tail to below ~1e-9 for phi >= 0.05.
template <class F>
Complex phase_window_average(const F& term, long M, double phi) {
  const double p = kTwoPi / std::max(1e-6, std::abs(phi));
  long W = std::lround(p * std::ceil(900.0 / p));
  W = std::max<long>(W, 2);
  Complex s{0.0, 0.0};
  for (long m = 1; m <= M; ++m) s += term(m);
  // partial sums T_j = S_{M+j}, j = 0..2W-1
  std::vector<Complex> T(2 * W);
  T[0] = s;
  for (long j = 1; j < 2 * W; ++j) T[j] = T[j - 1] + term(M + j);
  std::vector<Complex> B(W);
  Complex acc{0.0, 0.0};
  for (long j = 0; j < W; ++j) acc += T[j];
  B[0] = acc / double(W);
  for (long j = 1; j < W; ++j) {
    acc += T[j + W - 1] - T[j - 1];
    B[j] = acc / double(W);
  }
  Complex out{0.0, 0.0};
  for (long j = 0; j < W; ++j) out += B[j];
  return out / double(W);
}

} // namespace

Complex dimer_sum_f(const QuasiMomentum& q, double d, DimerSumMethod method) {
  const double L = q.L;
  if (!(d > 0.0 && d < L)) throw ValidationError("dimer_sum_f: require 0 < d < L");
  const double aL = q.alphaL();
  if (dist_mod_2pi(aL) == 0.0)
    throw ValidationError("dimer_sum_f: real part diverges at alpha = 0");
  const double b = d / L;

  switch (method) {
    case DimerSumMethod::Lerch: {
      const Complex z = std::exp(Complex(0.0, aL));
      return lerch_phi(z, 1.0, b) +
             std::conj(z) * lerch_phi(std::conj(z), 1.0, 1.0 - b);
    }
    case DimerSumMethod::Series: {
      const auto term = [&](long m) -> Complex {
        const Complex e = std::exp(Complex(0.0, aL * double(m)));
        return e / (double(m) + b) + std::conj(e) / (double(m) - b);
      };
      return 1.0 / b + phase_window_average(term, 100000, aL);
    }
    case DimerSumMethod::Integral: {
      const double rate = std::min(b, 1.0 - b);
      const double T = 40.0 / rate;
      const Complex eia = std::exp(Complex(0.0, -aL));
      const double ca = std::cos(aL);
      // scaled by e^{-t} to stay finite for large t
      const auto integrand = [&](double t) -> Complex {
        const double num1 = std::exp((b - 1.0) * t) - std::exp(-(b + 1.0) * t);
        const double num2 = std::exp(-b * t) - std::exp((-2.0 + b) * t);
        const double den = 1.0 + std::exp(-2.0 * t) - 2.0 * ca * std::exp(-t);
        if (t == 0.0) return Complex(0.0, 0.0);  // integrand vanishes linearly
        return (eia * (0.5 * num1) + 0.5 * num2) / (0.5 * den);
      };
      return integrate_c(integrand, 0.0, T, 1e-14, 1e-12);
    }
  }
  throw ValidationError("dimer_sum_f: unknown method");
}

double dimer_sum_f_imag(const QuasiMomentum& q, double d) {
  const double L = q.L;
  if (!(d > 0.0 && d < L)) throw ValidationError("dimer_sum_f_imag: require 0 < d < L");
  const double aL = q.alphaL();
  if (dist_mod_2pi(aL) == 0.0 || dist_mod_2pi(aL - kPi) == 0.0) return 0.0;
  const Complex z = std::exp(Complex(0.0, aL));
  const double b = d / L;
  return std::imag(lerch_phi(z, 1.0, b) +
                   std::conj(z) * lerch_phi(std::conj(z), 1.0, 1.0 - b));
}

double dimer_sum_f_dderiv_at_pi(double d, double L) {
  if (!(d > 0.0 && d < L)) throw ValidationError("dimer_sum_f_dderiv: require 0 < d < L");
  const double b = d / L;
  double sum = 0.0;
  for (long m = 1; m < 2000000; ++m) {
    const double t =
        (1.0 / ((m - b) * (m - b)) - 1.0 / ((m + b) * (m + b))) / L;
    const double term = (m % 2 == 0) ? t : -t;
    sum += term;
    if (std::abs(t) < 1e-17 * (1.0 + std::abs(sum)) && m > 8) break;
  }
  return -L / (d * d) + sum;
}

void dimer_sum_split(const QuasiMomentum& q, double d, int s, Complex& pos, Complex& neg) {
  const double L = q.L;
  if (!(d > 0.0 && d < L)) throw ValidationError("dimer_sum_split: require 0 < d < L");
  if (s < 1) throw ValidationError("dimer_sum_split: require s >= 1");
  const double aL = q.alphaL();
  if (dist_mod_2pi(aL) == 0.0)
    throw ValidationError("dimer_sum_split: diverges at alpha = 0 for s = 1");
  const double b = d / L;
  const Complex z = std::exp(Complex(0.0, aL));
  pos = lerch_phi(z, double(s), b);
  neg = std::conj(z) * lerch_phi(std::conj(z), double(s), 1.0 - b);
}

std::vector<LatticeSumResult> lattice_image_sums(int lambda_max, double k,
                                                 const QuasiMomentum& q, double offset,
                                                 const LatticeSumConfig& cfg) {
  cfg.validate();
  if (!(k > 0.0)) throw ValidationError("lattice_image_sums: require k > 0");
  const double L = q.L;
  if (!(std::abs(offset) < L))
    throw ValidationError("lattice_image_sums: require |offset| < L");
  const double aL = q.alphaL();
  const double kL = k * L;
  const double d_plus = dist_mod_2pi(aL + kL);
  const double d_minus = dist_mod_2pi(aL - kL);
  if (d_plus < cfg.anomaly_margin || d_minus < cfg.anomaly_margin)
    throw AnomalyError("lattice_image_sums: alpha*L +- k*L within " +
                       std::to_string(cfg.anomaly_margin) + " of a Rayleigh anomaly");

  const long M = cfg.truncation_M;
  const double a0 = offset / L;
  std::vector<LatticeSumResult> out(lambda_max + 1);
  std::vector<Complex> acc(lambda_max + 1, Complex{0.0, 0.0});

  for (long n = 1; n <= M; ++n) {
    const Complex ep = std::exp(Complex(0.0, aL * double(n)));
    const auto h_right = sph_hankel_h1_all(lambda_max, k * (double(n) * L - offset));
    const auto h_left = sph_hankel_h1_all(lambda_max, k * (double(n) * L + offset));
    for (int lam = 0; lam <= lambda_max; ++lam) {
      const double sgn = (lam % 2 == 0) ? 1.0 : -1.0;  // images to the right: theta = pi
      acc[lam] += sgn * ep * h_right[lam] + std::conj(ep) * h_left[lam];
    }
  }

  // analytic leading-order tail: h_lambda(x) ~ (-i)^{lambda+1} e^{ix}/x
  const Complex w = std::exp(Complex(0.0, aL + kL));
  const Complex v = std::exp(Complex(0.0, kL - aL));
  const Complex tail_right_base = std::exp(Complex(0.0, -k * offset)) / (kL) *
                                  std::pow(w, double(M + 1)) *
                                  lerch_phi(w, 1.0, double(M + 1) - a0);
  const Complex tail_left_base = std::exp(Complex(0.0, k * offset)) / (kL) *
                                 std::pow(v, double(M + 1)) *
                                 lerch_phi(v, 1.0, double(M + 1) + a0);

  for (int lam = 0; lam <= lambda_max; ++lam) {
    const double sgn = (lam % 2 == 0) ? 1.0 : -1.0;
    const Complex pref = ipow_neg(lam + 1);
    acc[lam] += pref * (sgn * tail_right_base + tail_left_base);

    // bound on the dropped O(x^{-2}) corrections of both sides
    double bound = 0.0;
    for (int s = 1; s <= lam; ++s) {
      const double c = hankel_series_coeff(lam, s);
      bound += 2.0 * c / (std::pow(2.0 * kL, s) * kL * double(s) *
                          std::pow(double(std::max<long>(M - 1, 1)), s));
    }
    if (bound > cfg.tail_tol)
      throw TailError("lattice_image_sums: tail bound " + std::to_string(bound) +
                      " exceeds tol " + std::to_string(cfg.tail_tol) +
                      " at M = " + std::to_string(M));
    out[lam].value = acc[lam];
    out[lam].truncation_M = M;
    out[lam].tail_bound = bound;
  }
  return out;
}

LatticeSumResult helmholtz_lattice_sum_Q(int lambda, int mu, double k,
                                         const QuasiMomentum& q,
                                         const LatticeSumConfig& cfg) {
  if (lambda < 0) throw ValidationError("helmholtz_lattice_sum_Q: lambda >= 0");
  if (std::abs(mu) > lambda && mu != 0)
    throw ValidationError("helmholtz_lattice_sum_Q: |mu| <= lambda");
  if (mu != 0) {
    // Y_lambda^mu vanishes on the chain axis
    LatticeSumResult r;
    r.truncation_M = cfg.truncation_M;
    return r;
  }
  const auto g = lattice_image_sums(lambda, k, q, 0.0, cfg);
  LatticeSumResult r = g[lambda];
  const double n_lambda = std::sqrt((2.0 * lambda + 1.0) / (4.0 * kPi));
  r.value *= n_lambda;
  r.tail_bound *= n_lambda;
  return r;
}

} // namespace subwave

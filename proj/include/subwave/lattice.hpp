#pragma once

#include <complex>
#include <vector>

#include "subwave/errors.hpp"

namespace subwave {

using Complex = std::complex<double>;

// Quasimomentum in the first Brillouin zone of an L-periodic chain.
// Construction folds alpha*L into (-pi, pi].
struct QuasiMomentum {
  double alpha = 0.0;
  double L = 1.0;

  QuasiMomentum() = default;
  QuasiMomentum(double alpha_, double L_);

  double alphaL() const { return alpha * L; }
  bool is_zero() const { return alpha == 0.0; }
};

struct LatticeSumConfig {
  long truncation_M = 10000;
  double tail_tol = 1e-6;
  double anomaly_margin = 1e-3;  // min distance of alpha*L +- k*L from 2*pi*Z

  void validate() const {
    if (truncation_M < 1) throw ValidationError("LatticeSumConfig: truncation_M >= 1");
    if (tail_tol <= 0.0) throw ValidationError("LatticeSumConfig: tail_tol > 0");
  }
};

// Closed form of sum_{m != 0} e^{i m alpha L}/|m| = -log(2 - 2 cos(alpha L)).
// Diverges logarithmically at alpha = 0 (rejected).
double harmonic_quasi_sum(const QuasiMomentum& q);

// Lerch transcendent Phi(z, s, a) = sum_{m>=0} z^m / (a+m)^s for s > 0, a > 0,
// z off the branch cut [1, inf). Power series for |z| <= 0.99, integral
// representation otherwise.
Complex lerch_phi(Complex z, double s, double a);

enum class DimerSumMethod { Lerch, Series, Integral };

// f(alpha, d) = sum_m e^{i m alpha L} / |d/L + m|, 0 < d < L, alpha != 0.
Complex dimer_sum_f(const QuasiMomentum& q, double d,
                    DimerSumMethod method = DimerSumMethod::Lerch);

// Im f(alpha, d); the series for the imaginary part converges for all alpha.
double dimer_sum_f_imag(const QuasiMomentum& q, double d);

// d/dd f(alpha, d) at alpha*L = pi:  -L/d^2 + (1/L) sum_{m>=1} (-1)^m
// [ (m - d/L)^{-2} - (m + d/L)^{-2} ].  Strictly negative on 0 < d < L.
double dimer_sum_f_dderiv_at_pi(double d, double L);

// Generalized split sums used by higher-order static translations
// (s = 1 reproduces the two halves of f):
//   positive half  P = L^s sum_{m>=0} e^{i m aL} / (d + m L)^s
//   negative half  N = L^s sum_{m>=1} e^{-i m aL} / (m L - d)^s
void dimer_sum_split(const QuasiMomentum& q, double d, int s, Complex& pos, Complex& neg);

// Polylog on the closed unit disk off [1, inf): Li_s(z) = z Phi(z, s, 1).
Complex polylog(int s, Complex z);

struct LatticeSumResult {
  Complex value{0.0, 0.0};
  long truncation_M = 0;
  double tail_bound = 0.0;  // bound on the neglected remainder
};

// One-dimensional Helmholtz lattice sum
//   Q_lambda^mu = sum_{n != 0} h_lambda^{(1)}(k|n|L) Y_lambda^mu(theta_n, .) e^{i n alpha L},
// with the chain along the polar axis (theta_n in {0, pi}), so Q = 0 for mu != 0.
// Direct sum to M plus the analytic leading-order tail; the reported bound
// covers the neglected O(x^{-2}) Hankel corrections.
LatticeSumResult helmholtz_lattice_sum_Q(int lambda, int mu, double k,
                                         const QuasiMomentum& q,
                                         const LatticeSumConfig& cfg);

// Image sums of axial Hankel translations with a source offset o in (-L, L):
//   G_lambda(o) = sum_{n != 0} e^{i n alpha L} s_n^lambda h_lambda^{(1)}(k |o - nL|),
// where s_n = sign(o - nL). Returns lambda = 0..lambda_max. This is the
// building block for quasiperiodic operator assembly (o = 0 gives Q up to the
// Y normalization; o = +-d gives the cross-resonator sums).
std::vector<LatticeSumResult> lattice_image_sums(int lambda_max, double k,
                                                 const QuasiMomentum& q, double offset,
                                                 const LatticeSumConfig& cfg);

} // namespace subwave

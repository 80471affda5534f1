#pragma once

#include <complex>
#include <vector>

#include "subwave/errors.hpp"

namespace subwave {

using Complex = std::complex<double>;

// Degree/order pair for spherical harmonics, |m| <= l enforced.
struct AngularIndex {
  int l;
  int m;
  AngularIndex(int l_, int m_) : l(l_), m(m_) {
    if (l < 0 || std::abs(m) > l)
      throw ValidationError("AngularIndex: require l >= 0 and |m| <= l");
  }
};

// Spherical Bessel function of the first kind j_l(x), x >= 0.
// Upward recurrence for x > l, Miller-style downward recurrence otherwise.
double sph_bessel_j(int l, double x);

// Spherical Bessel function of the second kind y_l(x), x > 0 (upward recurrence).
double sph_bessel_y(int l, double x);

// Spherical Hankel function of the first kind h_l^{(1)} = j_l + i y_l, x > 0.
Complex sph_hankel_h1(int l, double x);

// Derivatives with respect to the argument.
double sph_bessel_j_deriv(int l, double x);
Complex sph_hankel_h1_deriv(int l, double x);

// j_l(x) for l = 0..lmax in one pass.
std::vector<double> sph_bessel_j_all(int lmax, double x);
std::vector<Complex> sph_hankel_h1_all(int lmax, double x);

// Orthonormal spherical harmonic Y_l^m(theta, phi), Condon-Shortley phase.
Complex spherical_harmonic(const AngularIndex& idx, double theta, double phi);

// Normalized associated Legendre P~_l^m(cos theta) for m >= 0, such that
// Y_l^m = P~_l^m(cos theta) e^{i m phi}.
double normalized_legendre(int l, int m, double costheta);

// Wigner 3j symbol (j1 j2 j3; m1 m2 m3). Returns 0 whenever a selection rule
// fails. Racah single-sum formula with log-factorial accumulation; intended
// domain j <= 40.
double wigner3j(int j1, int j2, int j3, int m1, int m2, int m3);

// Gaunt-type coefficient of the translation addition theorem,
//   C(l,m,l',m',lambda,mu) = i^{l'-l+lambda} (-1)^m sqrt(4pi(2l+1)(2l'+1)(2lambda+1))
//                            * (l l' lambda; 0 0 0) (l l' lambda; -m m' mu).
Complex translation_coeff_C(int l, int m, int lp, int mp, int lambda, int mu);

// Radial weight of the translation series: Hankel-weighted translates an
// outgoing wave h_l Y_l^m into regular waves (valid r' < |b|); the regular
// kind translates j_l Y_l^m into regular waves (entire).
enum class TranslationKind { Outgoing, Regular };

// Axial translation coefficient A_{l'm}^{lm} for a displacement b_z along the
// polar axis (b_z = new origin minus old origin, signed). Zero when m != m'.
// The finite lambda sum terminates at lambda = l + l' by the triangle rule.
Complex translation_coeff_A(int l, int m, int lp, int mp, double k, double b_z,
                            TranslationKind kind);

// General-direction variant, b given in spherical coordinates.
Complex translation_coeff_A(int l, int m, int lp, int mp, double k, double r_b,
                            double theta_b, double phi_b, TranslationKind kind);

// Gauss-Legendre nodes/weights on [-1, 1] (used for sphere quadrature).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace subwave

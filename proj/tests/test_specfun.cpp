#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <cmath>
#include <complex>
#include <random>

#include "subwave/specfun.hpp"

using namespace subwave;
using Complex = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Independent power-series oracle: j_l(x) = sum_k (-1)^k x^{2k+l} / (2^k k! (2l+2k+1)!!).
double bessel_series_oracle(int l, double x) {
  double dfact = 1.0;  // (2l+1)!!
  for (int i = 1; i <= l; ++i) dfact *= 2.0 * i + 1.0;
  double term = std::pow(x, l) / dfact;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -x * x / (2.0 * k * (2.0 * (l + k) + 1.0));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// Exact-rational Wigner 3j oracle: returns sign and the squared value as a
// rational number (the Racah sum is rational; the prefactor under the square
// root is rational as well).
using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::rational<BigInt>;

BigInt factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

bool wigner3j_exact_squared(int j1, int j2, int j3, int m1, int m2, int m3, int& sign,
                            Rat& squared) {
  sign = 0;
  squared = Rat(0);
  if (m1 + m2 + m3 != 0) return false;
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return false;
  if (j3 < std::abs(j1 - j2) || j3 > j1 + j2) return false;
  const Rat delta(factorial(j1 + j2 - j3) * factorial(j1 - j2 + j3) *
                      factorial(-j1 + j2 + j3),
                  factorial(j1 + j2 + j3 + 1));
  const Rat norm(factorial(j1 + m1) * factorial(j1 - m1) * factorial(j2 + m2) *
                     factorial(j2 - m2) * factorial(j3 + m3) * factorial(j3 - m3),
                 BigInt(1));
  Rat sum(0);
  const int t_min = std::max({0, j2 - j3 - m1, j1 - j3 + m2});
  const int t_max = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});
  for (int t = t_min; t <= t_max; ++t) {
    Rat term(BigInt(1), factorial(t) * factorial(j3 - j2 + t + m1) *
                            factorial(j3 - j1 + t - m2) * factorial(j1 + j2 - j3 - t) *
                            factorial(j1 - t - m1) * factorial(j2 - t + m2));
    sum += (t % 2 == 0) ? term : -term;
  }
  const int phase = ((j1 - j2 - m3) % 2 + 2) % 2 == 0 ? 1 : -1;
  const int s = sum > Rat(0) ? 1 : (sum < Rat(0) ? -1 : 0);
  sign = phase * s;
  squared = delta * norm * sum * sum;
  return sign != 0;
}

double rat_to_double(const Rat& r) {
  return static_cast<double>(boost::multiprecision::cpp_rational(r.numerator(),
                                                                 r.denominator()));
}

} // namespace

TEST_CASE("spherical bessel j: closed forms and series oracle") {
  CHECK(sph_bessel_j(0, 1.0) == doctest::Approx(std::sin(1.0)).epsilon(1e-14));
  CHECK(sph_bessel_j(1, 0.0) == 0.0);
  CHECK(sph_bessel_j(0, 0.0) == 1.0);
  // frozen from the series oracle: j_2(1) = (3 - 1) sin 1 - 3 cos 1
  CHECK(sph_bessel_j(2, 1.0) == doctest::Approx(0.062035052011373861).epsilon(1e-13));
  CHECK(sph_bessel_j(2, 1.0) ==
        doctest::Approx(bessel_series_oracle(2, 1.0)).epsilon(1e-14));
  for (int l : {0, 1, 2, 5, 9, 14, 20})
    for (double x : {0.05, 0.4, 1.0, 3.0, 7.5, 19.0}) {
      const double ref = bessel_series_oracle(l, x);
      if (std::abs(ref) > 1e-280)
        CHECK(sph_bessel_j(l, x) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("spherical hankel h1: closed form, recurrence and decay") {
  const Complex h0 = sph_hankel_h1(0, 1.0);
  CHECK(h0.real() == doctest::Approx(std::sin(1.0)).epsilon(1e-14));
  CHECK(h0.imag() == doctest::Approx(-std::cos(1.0)).epsilon(1e-14));
  // closed form h_1(x) = -e^{ix}(1/x + i/x^2) at x = 2
  const Complex h1 = sph_hankel_h1(1, 2.0);
  const Complex closed = -std::exp(Complex(0.0, 2.0)) * Complex(1.0 / 2.0, 1.0 / 4.0);
  CHECK(std::abs(h1 - closed) < 1e-14);
  // upward recurrence h_{l+1} = (2l+1)/x h_l - h_{l-1} seeded by closed forms
  Complex hm = Complex(std::sin(2.0), -std::cos(2.0)) / 2.0;  // h_0(2)
  Complex hc = closed;
  for (int l = 1; l <= 7; ++l) {
    const Complex hp = (2.0 * l + 1.0) / 2.0 * hc - hm;
    hm = hc;
    hc = hp;
    CHECK(std::abs(sph_hankel_h1(l + 1, 2.0) - hc) < 1e-11 * std::abs(hc));
  }
  // |h_0(x)| ~ 1/x for large x
  CHECK(std::abs(sph_hankel_h1(0, 1000.0)) == doctest::Approx(1e-3).epsilon(0.01));
  CHECK_THROWS_AS(sph_hankel_h1(0, 0.0), ValidationError);
  CHECK_THROWS_AS(sph_hankel_h1(0, -1.0), ValidationError);
}

TEST_CASE("cross-product identity j_{l-1} y_l - j_l y_{l-1} = -1/x^2") {
  for (int l = 1; l <= 20; ++l)
    for (double x : {0.1, 1.0, 10.0}) {
      const double lhs = sph_bessel_j(l - 1, x) * sph_bessel_y(l, x) -
                         sph_bessel_j(l, x) * sph_bessel_y(l - 1, x);
      CHECK(lhs == doctest::Approx(-1.0 / (x * x)).epsilon(1e-10));
    }
}

TEST_CASE("spherical harmonics: fixed values") {
  CHECK(spherical_harmonic({0, 0}, 0.7, 1.3).real() ==
        doctest::Approx(0.28209479177387814).epsilon(1e-14));
  CHECK(spherical_harmonic({1, 0}, 0.0, 0.0).real() ==
        doctest::Approx(0.48860251190291992).epsilon(1e-14));
  // Y_2^1(pi/3, pi/4) = -sqrt(15/8pi) sin cos e^{i pi/4}
  const Complex y = spherical_harmonic({2, 1}, kPi / 3.0, kPi / 4.0);
  const double mag = std::sqrt(15.0 / (8.0 * kPi)) * std::sin(kPi / 3.0) *
                     std::cos(kPi / 3.0);
  const Complex expect = -mag * std::exp(Complex(0.0, kPi / 4.0));
  CHECK(std::abs(y - expect) < 1e-14);
  CHECK_THROWS_AS(AngularIndex(1, 2), ValidationError);
}

TEST_CASE("spherical harmonics: orthonormality by quadrature up to l = 8") {
  std::vector<double> nodes, weights;
  gauss_legendre(24, nodes, weights);
  const int nphi = 40;
  for (int l = 0; l <= 8; ++l)
    for (int lp = l; lp <= 8; ++lp)
      for (int m = -std::min(l, 3); m <= std::min(l, 3); ++m)
        for (int mp = -std::min(lp, 3); mp <= std::min(lp, 3); ++mp) {
          Complex acc{0.0, 0.0};
          for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double theta = std::acos(nodes[i]);
            for (int k = 0; k < nphi; ++k) {
              const double phi = 2.0 * kPi * k / nphi;
              acc += weights[i] * (2.0 * kPi / nphi) *
                     spherical_harmonic({l, m}, theta, phi) *
                     std::conj(spherical_harmonic({lp, mp}, theta, phi));
            }
          }
          const double expect = (l == lp && m == mp) ? 1.0 : 0.0;
          CHECK(std::abs(acc - expect) < 1e-9);
        }
}

TEST_CASE("wigner 3j: fixed values and selection rules") {
  CHECK(wigner3j(0, 0, 0, 0, 0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(wigner3j(1, 1, 0, 0, 0, 0) ==
        doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-13));
  CHECK(wigner3j(1, 1, 1, 0, 0, 0) == 0.0);
  CHECK(wigner3j(1, 1, 3, 0, 0, 0) == 0.0);   // triangle violated
  CHECK(wigner3j(2, 1, 1, 1, 0, 0) == 0.0);   // m-sum violated
}

TEST_CASE("wigner 3j: exact-rational oracle and permutation symmetry, j <= 5") {
  for (int j1 = 0; j1 <= 5; ++j1)
    for (int j2 = 0; j2 <= 5; ++j2)
      for (int j3 = std::abs(j1 - j2); j3 <= std::min(5, j1 + j2); ++j3)
        for (int m1 = -j1; m1 <= j1; ++m1)
          for (int m2 = -j2; m2 <= j2; ++m2) {
            const int m3 = -m1 - m2;
            if (std::abs(m3) > j3) continue;
            const double w = wigner3j(j1, j2, j3, m1, m2, m3);
            CHECK(std::abs(w) <= 1.0 + 1e-12);
            int sign;
            Rat sq;
            if (wigner3j_exact_squared(j1, j2, j3, m1, m2, m3, sign, sq)) {
              const double exact = sign * std::sqrt(rat_to_double(sq));
              CHECK(w == doctest::Approx(exact).epsilon(1e-12));
            } else {
              CHECK(std::abs(w) < 1e-13);
            }
            // even permutation invariance, odd permutation phase
            const double even = wigner3j(j2, j3, j1, m2, m3, m1);
            const double odd = wigner3j(j2, j1, j3, m2, m1, m3);
            const double ph = ((j1 + j2 + j3) % 2 == 0) ? 1.0 : -1.0;
            CHECK(even == doctest::Approx(w).epsilon(1e-11).scale(1.0));
            CHECK(odd == doctest::Approx(ph * w).epsilon(1e-11).scale(1.0));
          }
}

TEST_CASE("translation coefficient C") {
  // C(0,0,0,0,0,0) = sqrt(4 pi)
  const Complex c = translation_coeff_C(0, 0, 0, 0, 0, 0);
  CHECK(c.real() == doctest::Approx(std::sqrt(4.0 * kPi)).epsilon(1e-13));
  CHECK(c.imag() == doctest::Approx(0.0));
  // selection: mu must equal m - m'
  CHECK(std::abs(translation_coeff_C(1, 1, 1, 0, 2, 0)) == 0.0);
  // C(1,0,1,0,lambda,0) against the rational 3j oracle
  for (int lam : {0, 2}) {
    const Complex v = translation_coeff_C(1, 0, 1, 0, lam, 0);
    const double w1 = wigner3j(1, 1, lam, 0, 0, 0);
    const double pref = std::sqrt(4.0 * kPi * 3.0 * 3.0 * (2.0 * lam + 1.0));
    CHECK(std::abs(v - Complex(pref * w1 * w1, 0.0) *
                           std::pow(Complex(0.0, 1.0), lam)) < 1e-12);
  }
}

TEST_CASE("translation coefficient A: m mismatch vanishes on the axis") {
  CHECK(std::abs(translation_coeff_A(2, 1, 2, 0, 0.7, 3.0, TranslationKind::Outgoing)) ==
        0.0);
  CHECK(std::abs(translation_coeff_A(1, -1, 1, 1, 0.7, -3.0, TranslationKind::Regular)) ==
        0.0);
}

TEST_CASE("addition theorem roundtrip: h_l Y_l^m re-expanded about a shifted origin") {
  // h_l(k|x|) Y_l^m(x) = sum_{l'} A^{lm}_{l'm} j_{l'}(k r') Y_{l'}^m(x'),  x = x' + b
  const double k = 0.9;
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int l = 0; l <= 3; ++l)
    for (int m = -l; m <= l; ++m) {
      const double bz = 2.5;  // b along +z in the source frame
      for (int trial = 0; trial < 5; ++trial) {
        // observation point near the shifted origin, r' < |b|
        const double rp = 0.2 + 0.5 * u(rng);
        const double th = kPi * u(rng);
        const double ph = 2.0 * kPi * u(rng);
        const double xs = rp * std::sin(th) * std::cos(ph);
        const double ys = rp * std::sin(th) * std::sin(ph);
        const double zs = rp * std::cos(th) + bz;  // source-frame coordinates
        const double r = std::sqrt(xs * xs + ys * ys + zs * zs);
        const double theta = std::acos(zs / r);
        const double phi = std::atan2(ys, xs);
        const Complex lhs =
            sph_hankel_h1(l, k * r) * spherical_harmonic({l, m}, theta, phi);
        Complex rhs{0.0, 0.0};
        for (int lp = std::abs(m); lp <= 25; ++lp)
          rhs += translation_coeff_A(l, m, lp, m, k, bz, TranslationKind::Outgoing) *
                 sph_bessel_j(lp, k * rp) * spherical_harmonic({lp, m}, th, ph);
        CHECK(std::abs(lhs - rhs) < 1e-8);
      }
    }
}

TEST_CASE("addition theorem: regular-regular variant and negative displacement") {
  const double k = 1.3;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int l = 0; l <= 2; ++l) {
    const int m = std::min(l, 1);
    const double bz = -1.8;
    for (int trial = 0; trial < 4; ++trial) {
      const double rp = 0.3 + 1.2 * u(rng);  // regular expansion is entire
      const double th = kPi * u(rng);
      const double ph = 2.0 * kPi * u(rng);
      const double xs = rp * std::sin(th) * std::cos(ph);
      const double ys = rp * std::sin(th) * std::sin(ph);
      const double zs = rp * std::cos(th) + bz;
      const double r = std::sqrt(xs * xs + ys * ys + zs * zs);
      const double theta = r > 0 ? std::acos(zs / r) : 0.0;
      const double phi = std::atan2(ys, xs);
      const Complex lhs = sph_bessel_j(l, k * r) * spherical_harmonic({l, m}, theta, phi);
      Complex rhs{0.0, 0.0};
      for (int lp = std::abs(m); lp <= 30; ++lp)
        rhs += translation_coeff_A(l, m, lp, m, k, bz, TranslationKind::Regular) *
               sph_bessel_j(lp, k * rp) * spherical_harmonic({lp, m}, th, ph);
      CHECK(std::abs(lhs - rhs) < 1e-8);
    }
  }
}

TEST_CASE("translation coefficient A: general-direction form matches the axial one") {
  const double k = 0.8;
  for (int l = 0; l <= 2; ++l)
    for (int lp = 0; lp <= 2; ++lp) {
      const Complex axial =
          translation_coeff_A(l, 0, lp, 0, k, 2.2, TranslationKind::Outgoing);
      const Complex general =
          translation_coeff_A(l, 0, lp, 0, k, 2.2, 0.0, 0.0, TranslationKind::Outgoing);
      CHECK(std::abs(axial - general) < 1e-12);
      const Complex axial_dn =
          translation_coeff_A(l, 0, lp, 0, k, -2.2, TranslationKind::Outgoing);
      const Complex general_dn =
          translation_coeff_A(l, 0, lp, 0, k, 2.2, kPi, 0.0, TranslationKind::Outgoing);
      CHECK(std::abs(axial_dn - general_dn) < 1e-12);
    }
}

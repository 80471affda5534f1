#pragma once

#include <cmath>
#include <complex>

namespace subwave {

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights (positive half; node 7 is 0).
inline constexpr double kK15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kK15Weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class T, class F>
void gk15(const F& f, double a, double b, T& kronrod, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kK15Nodes[i]);
    fv[14 - i] = f(c + h * kK15Nodes[i]);
  }
  fv[7] = f(c);
  T resk = kK15Weights[7] * fv[7];
  T resg = kG7Weights[3] * fv[7];
  for (int i = 0; i < 7; ++i) resk += kK15Weights[i] * (fv[i] + fv[14 - i]);
  for (int i = 0; i < 4; ++i) {
    const int j = 2 * i + 1;
    if (j < 7) resg += kG7Weights[i] * (fv[j] + fv[14 - j]);
  }
  kronrod = resk * h;
  err = std::abs((resk - resg) * h);
}

template <class T, class F>
T adaptive(const F& f, double a, double b, double abs_tol, double rel_tol, int depth) {
  T whole;
  double err;
  gk15<T>(f, a, b, whole, err);
  if (err <= abs_tol || err <= rel_tol * std::abs(whole) || depth >= 52) return whole;
  const double c = 0.5 * (a + b);
  return adaptive<T>(f, a, c, 0.5 * abs_tol, rel_tol, depth + 1) +
         adaptive<T>(f, c, b, 0.5 * abs_tol, rel_tol, depth + 1);
}

} // namespace detail

// Adaptive Gauss-Kronrod (G7/K15) on [a,b].
template <class F>
double integrate(const F& f, double a, double b, double abs_tol = 1e-13,
                 double rel_tol = 1e-12) {
  return detail::adaptive<double>(f, a, b, abs_tol, rel_tol, 0);
}

template <class F>
std::complex<double> integrate_c(const F& f, double a, double b, double abs_tol = 1e-13,
                                 double rel_tol = 1e-12) {
  return detail::adaptive<std::complex<double>>(f, a, b, abs_tol, rel_tol, 0);
}

} // namespace subwave

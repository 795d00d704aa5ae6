#ifndef QUINTIC_JET_HPP
#define QUINTIC_JET_HPP

#include <array>
#include <cmath>
#include <cstddef>

namespace quintic {

/// Truncated Taylor series of order 5 at a point: coefficient k stores
/// f^(k)/k!.  Used to propagate derivatives through compositions such as
/// exp(a*phi(x)) where phi involves the smooth cutoff.
struct Jet5 {
  static constexpr int order = 5;
  std::array<double, order + 1> c{};

  static Jet5 constant(double v) {
    Jet5 j;
    j.c[0] = v;
    return j;
  }
  /// The identity function x evaluated at x0.
  static Jet5 variable(double x0) {
    Jet5 j;
    j.c[0] = x0;
    j.c[1] = 1.0;
    return j;
  }

  double value() const { return c[0]; }
  /// k-th derivative (not Taylor coefficient).
  double deriv(int k) const {
    static constexpr double fact[] = {1, 1, 2, 6, 24, 120};
    return c[static_cast<std::size_t>(k)] * fact[k];
  }

  Jet5 operator-() const {
    Jet5 r;
    for (int k = 0; k <= order; ++k) r.c[k] = -c[k];
    return r;
  }
  friend Jet5 operator+(const Jet5& a, const Jet5& b) {
    Jet5 r;
    for (int k = 0; k <= order; ++k) r.c[k] = a.c[k] + b.c[k];
    return r;
  }
  friend Jet5 operator-(const Jet5& a, const Jet5& b) {
    Jet5 r;
    for (int k = 0; k <= order; ++k) r.c[k] = a.c[k] - b.c[k];
    return r;
  }
  friend Jet5 operator*(const Jet5& a, const Jet5& b) {
    Jet5 r;
    for (int k = 0; k <= order; ++k)
      for (int j = 0; j <= k; ++j) r.c[k] += a.c[j] * b.c[k - j];
    return r;
  }
  friend Jet5 operator*(double s, const Jet5& a) {
    Jet5 r;
    for (int k = 0; k <= order; ++k) r.c[k] = s * a.c[k];
    return r;
  }
  friend Jet5 operator*(const Jet5& a, double s) { return s * a; }
  friend Jet5 operator+(const Jet5& a, double s) {
    Jet5 r = a;
    r.c[0] += s;
    return r;
  }
  friend Jet5 operator+(double s, const Jet5& a) { return a + s; }
  friend Jet5 operator-(const Jet5& a, double s) { return a + (-s); }
  friend Jet5 operator-(double s, const Jet5& a) { return (-a) + s; }

  /// a/b with b.value() != 0.
  friend Jet5 operator/(const Jet5& a, const Jet5& b) {
    Jet5 q;
    const double inv = 1.0 / b.c[0];
    for (int k = 0; k <= order; ++k) {
      double acc = a.c[k];
      for (int j = 1; j <= k; ++j) acc -= b.c[j] * q.c[k - j];
      q.c[k] = acc * inv;
    }
    return q;
  }
};

inline Jet5 exp(const Jet5& u) {
  Jet5 e;
  e.c[0] = std::exp(u.c[0]);
  for (int k = 1; k <= Jet5::order; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += j * u.c[j] * e.c[k - j];
    e.c[k] = acc / k;
  }
  return e;
}

/// x^alpha expanded at x0 > 0 (binomial series, exact coefficients).
inline Jet5 pow_at(double x0, double alpha) {
  Jet5 p;
  double binom = 1.0;  // alpha choose k
  double xp = std::pow(x0, alpha);
  for (int k = 0; k <= Jet5::order; ++k) {
    p.c[k] = binom * xp;
    binom *= (alpha - k) / (k + 1);
    xp /= x0;
  }
  return p;
}

/// Integer power x^n expanded at x0 (valid for any x0).
inline Jet5 ipow_at(double x0, int n) {
  Jet5 p = Jet5::constant(1.0);
  Jet5 x = Jet5::variable(x0);
  for (int i = 0; i < n; ++i) p = p * x;
  return p;
}

}  // namespace quintic

#endif  // QUINTIC_JET_HPP

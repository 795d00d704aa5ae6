#include "quintic/weights.hpp"

#include <cmath>

namespace quintic {

namespace {
constexpr double kFivePow5 = 3125.0;
constexpr double kFourPow5 = 1024.0;

double young_coeff(double epsilon) { return 25.0 / (4.0 * (5.0 - epsilon)); }
}  // namespace

double k_of_epsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in [0,1)");
  return kFivePow5 / kFourPow5 * (1.5 + young_coeff(epsilon));
}

DecayLaw DecayLaw::for_epsilon(double a0, double epsilon) {
  if (!(a0 > 0.0)) throw std::invalid_argument("a0 must be positive");
  return DecayLaw{a0, 4.0 * k_of_epsilon(epsilon)};
}

double DecayLaw::at(double t) const {
  return a0 / std::pow(1.0 + kappa * a0 * a0 * a0 * a0 * t, 0.25);
}

double DecayLaw::rate(double t) const {
  const double a = at(t);
  return -0.25 * kappa * a * a * a * a * a;
}

double decay_a(const DecayLaw& law, double t) {
  if (t < 0.0) throw std::invalid_argument("t must be nonnegative");
  return law.at(t);
}

void WeightParams::validate() const {
  if (!(a0 > 0.0)) throw std::invalid_argument("a0 must be positive");
  if (!(epsilon >= 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in [0,1)");
  if (n < 1) throw std::invalid_argument("N must be a positive integer");
}

// ---------------------------------------------------------------------------
// SmoothCutoff
// ---------------------------------------------------------------------------

namespace {

// exp(-1/s) as a jet in s; identically zero for s <= 0.
Jet5 bump_jet(double s) {
  if (s <= 0.0) return Jet5{};
  // Taylor coefficients of -1/s at s: -(-1)^k / s^(k+1).
  Jet5 m;
  double p = -1.0 / s;
  for (int k = 0; k <= Jet5::order; ++k) {
    m.c[k] = p;
    p *= -1.0 / s;
  }
  return exp(m);
}

}  // namespace

Jet5 SmoothCutoff::eval(double x) const {
  // Transition on [1/2, 3/4]; s is the normalized coordinate in [0,1].
  const double s = (x - 0.5) * 4.0;
  if (s <= 0.0) return Jet5{};
  if (s >= 1.0) return Jet5::constant(1.0);
  Jet5 sj = bump_jet(s);
  Jet5 tj = bump_jet(1.0 - s);
  // flip the inner derivative signs of tj: d/ds f(1-s)
  for (int k = 1; k <= Jet5::order; k += 2) tj.c[k] = -tj.c[k];
  Jet5 eta = sj / (sj + tj);
  // rescale derivatives from s back to x (factor 4 per order)
  double scale = 1.0;
  for (int k = 0; k <= Jet5::order; ++k) {
    eta.c[k] *= scale;
    scale *= 4.0;
  }
  return eta;
}

// ---------------------------------------------------------------------------
// BridgePolynomial
// ---------------------------------------------------------------------------

BridgePolynomial::BridgePolynomial(int n_, double a_) : n(n_), a(a_) {
  const double nd = static_cast<double>(n_);
  const double q = std::pow(nd, 0.25);
  pow_[0] = q;                 // N^(1/4)
  pow_[1] = q * q;             // N^(1/2)
  pow_[2] = q * q * q;         // N^(3/4)
  pow_[3] = nd;                // N
  pow_[4] = 1.0 / q;           // N^(-1/4)
  pow_[5] = 1.0 / (q * q);     // N^(-1/2)
  pow_[6] = 1.0 / (q * q * q); // N^(-3/4)
  pow_[7] = nd * q;            // N^(5/4)

  const double a2 = a * a, a3 = a2 * a, a4 = a3 * a;
  const double nm34 = pow_[6];
  const double nm74 = nm34 / nd;         // N^(-7/4)
  const double nm32 = pow_[5] / nd;      // N^(-6/4)
  const double nm114 = nm74 / nd;        // N^(-11/4)

  b_[0] = 1.0;
  b_[1] = 1.25 * a * pow_[0];
  b_[2] = 5.0 / 16.0 * (5.0 * a2 * pow_[1] + a * nm34) / 2.0;
  b_[3] = 5.0 / 64.0 * (25.0 * a3 * pow_[2] + 15.0 * a2 * pow_[5] - 3.0 * a * nm74) / 6.0;
  b_[4] = 5.0 / 256.0 *
          (125.0 * a4 * nd + 150.0 * a3 * pow_[4] - 45.0 * a2 * nm32 +
           21.0 * a * nm114) /
          24.0;

  s_[0] = 0.0;
  s_[1] = 1.25 * pow_[0];
  s_[2] = 5.0 / 16.0 * (10.0 * a * pow_[1] + nm34) / 2.0;
  s_[3] = 5.0 / 64.0 * (75.0 * a2 * pow_[2] + 30.0 * a * pow_[5] - 3.0 * nm74) / 6.0;
  s_[4] = 5.0 / 256.0 *
          (500.0 * a3 * nd + 450.0 * a2 * pow_[4] - 90.0 * a * nm32 +
           21.0 * nm114) /
          24.0;
}

double BridgePolynomial::c(int k) const {
  return b_[k] * std::exp(a * pow_[7]);
}

double BridgePolynomial::braced(double d) const {
  return b_[0] + d * (b_[1] + d * (b_[2] + d * (b_[3] + d * b_[4])));
}

double BridgePolynomial::braced_deriv(double d, int j) const {
  switch (j) {
    case 0: return braced(d);
    case 1: return b_[1] + d * (2.0 * b_[2] + d * (3.0 * b_[3] + d * 4.0 * b_[4]));
    case 2: return 2.0 * b_[2] + d * (6.0 * b_[3] + d * 12.0 * b_[4]);
    case 3: return 6.0 * b_[3] + d * 24.0 * b_[4];
    case 4: return 24.0 * b_[4];
    default: return 0.0;
  }
}

double BridgePolynomial::s_poly(double d) const {
  return d * (s_[1] + d * (s_[2] + d * (s_[3] + d * s_[4])));
}

double BridgePolynomial::r_poly(double d) const {
  const double nd = static_cast<double>(n);
  const double nm34 = pow_[6];
  const double nm74 = nm34 / nd;
  const double nm32 = pow_[5] / nd;
  const double nm114 = nm74 / nd;
  const double a2 = a * a, a3 = a2 * a;
  const double r4 =
      5.0 / 256.0 * (150.0 * a3 * pow_[4] - 45.0 * a2 * nm32 + 21.0 * a * nm114) / 24.0;
  const double r3 = -5.0 / 64.0 * 0.5 * a * nm74;
  const double r2 = 5.0 / 16.0 * 0.5 * a * nm34;
  return d * d * (r2 + d * (r3 + d * r4));
}

double BridgePolynomial::r_poly_dx(double d) const {
  const double nd = static_cast<double>(n);
  const double nm34 = pow_[6];
  const double nm74 = nm34 / nd;
  const double nm32 = pow_[5] / nd;
  const double nm114 = nm74 / nd;
  const double a2 = a * a, a3 = a2 * a;
  const double r4 =
      5.0 / 256.0 * (150.0 * a3 * pow_[4] - 45.0 * a2 * nm32 + 21.0 * a * nm114) / 24.0;
  const double r3 = -5.0 / 64.0 * 0.5 * a * nm74;
  const double r2 = 5.0 / 16.0 * 0.5 * a * nm34;
  return d * (2.0 * r2 + d * (3.0 * r3 + d * 4.0 * r4));
}

double BridgePolynomial::r_poly_da(double d) const {
  const double nd = static_cast<double>(n);
  const double nm34 = pow_[6];
  const double nm74 = nm34 / nd;
  const double nm32 = pow_[5] / nd;
  const double nm114 = nm74 / nd;
  const double a2 = a * a;
  const double r4 =
      5.0 / 256.0 * (450.0 * a2 * pow_[4] - 90.0 * a * nm32 + 21.0 * nm114) / 24.0;
  const double r3 = -5.0 / 64.0 * 0.5 * nm74;
  const double r2 = 5.0 / 16.0 * 0.5 * nm34;
  return d * d * (r2 + d * (r3 + d * r4));
}

double BridgePolynomial::bracket_r(double d) const {
  const double nd = static_cast<double>(n);
  const double nm34 = pow_[6];
  const double nm74 = nm34 / nd;
  const double nm32 = pow_[5] / nd;
  const double nm114 = nm74 / nd;
  const double a2 = a * a, a3 = a2 * a;
  return (a3 * pow_[4] + a2 * nm32 + a * nm114) * d * d * d * d +
         a * nm74 * d * d * d + a * nm34 * d * d;
}

double BridgePolynomial::bracket_r_dx(double d) const {
  const double nd = static_cast<double>(n);
  const double nm34 = pow_[6];
  const double nm74 = nm34 / nd;
  const double nm32 = pow_[5] / nd;
  const double nm114 = nm74 / nd;
  const double a2 = a * a, a3 = a2 * a;
  return (a3 * pow_[4] + a2 * nm32 + a * nm114) * d * d * d + a * nm74 * d * d +
         a * nm34 * d;
}

double BridgePolynomial::bracket_r_da(double d) const {
  const double nd = static_cast<double>(n);
  const double nm34 = pow_[6];
  const double nm74 = nm34 / nd;
  const double nm32 = pow_[5] / nd;
  const double nm114 = nm74 / nd;
  const double a2 = a * a;
  return (a2 * pow_[4] + a * nm32 + nm114) * d * d * d * d + nm74 * d * d * d +
         nm34 * d * d;
}

double BridgePolynomial::bracket_p(double d) const {
  const double nd = static_cast<double>(n);
  const double nm34 = pow_[6];
  const double nm74 = nm34 / nd;
  const double nm32 = pow_[5] / nd;
  const double nm114 = nm74 / nd;
  const double a2 = a * a, a3 = a2 * a, a4 = a3 * a;
  return 1.0 + a * pow_[0] * d + (a2 * pow_[1] + a * nm34) * d * d / 2.0 +
         (a3 * pow_[2] + a2 * pow_[5] + a * nm74) * d * d * d / 6.0 +
         (a4 * nd + a3 * pow_[4] + a2 * nm32 + a * nm114) * d * d * d * d / 24.0;
}

double BridgePolynomial::bracket_p_dx(double d) const {
  const double nd = static_cast<double>(n);
  const double a2 = a * a, a3 = a2 * a, a4 = a3 * a;
  return 1.25 * a * pow_[0] + 25.0 / 16.0 * a2 * pow_[1] * d +
         125.0 / 64.0 * a3 * pow_[2] / 2.0 * d * d +
         625.0 / 256.0 * a4 * nd / 6.0 * d * d * d;
}

double BridgePolynomial::bracket_s(double d) const {
  const double nd = static_cast<double>(n);
  const double nm34 = pow_[6];
  const double nm74 = nm34 / nd;
  const double nm32 = pow_[5] / nd;
  const double nm114 = nm74 / nd;
  const double a2 = a * a, a3 = a2 * a;
  return pow_[0] * d + (a * pow_[1] + nm34) * d * d / 2.0 +
         (a2 * pow_[2] + a * pow_[5] + a * nm74) * d * d * d / 6.0 +
         (a3 * nd + a2 * pow_[4] + a * nm32 + a * nm114) * d * d * d * d / 24.0;
}

// ---------------------------------------------------------------------------
// PiecewiseWeight
// ---------------------------------------------------------------------------

PiecewiseWeight::PiecewiseWeight(const WeightParams& params)
    : params_(params), law_(DecayLaw::for_epsilon(params.a0, params.epsilon)) {
  params_.validate();
}

PiecewiseWeight::Region PiecewiseWeight::region_of(double x, Side side) const {
  const double n = static_cast<double>(params_.n);
  if (x < 0.0) return kConstant;
  if (x == 0.0) return side == Side::Right ? kCutoff : kConstant;
  if (x < 1.0) return kCutoff;
  if (x == 1.0) return side == Side::Right ? kCore : kCutoff;
  if (x < n) return kCore;
  if (x == n) return side == Side::Right ? kBridge : kCore;
  return kBridge;
}

Jet5 PiecewiseWeight::varphi_jet(double x) const {
  // (1 - eta) x+^5 + eta x^(5/4) on (0,1]
  Jet5 eta = eta_.eval(x);
  Jet5 x5 = ipow_at(x, 5);
  Jet5 x54 = pow_at(x, 1.25);
  return (Jet5::constant(1.0) - eta) * x5 + eta * x54;
}

double PiecewiseWeight::log_value(double x, double t) const {
  if (t < 0.0) throw std::invalid_argument("t must be nonnegative");
  const double a = law_.at(t);
  switch (region_of(x, Side::Auto)) {
    case kConstant: return 0.0;
    case kCutoff: return a * varphi_jet(x).value();
    case kCore: return a * std::pow(x, 1.25);
    case kBridge: {
      BridgePolynomial bp(params_.n, a);
      return std::log(bp.braced(x - params_.n)) + a * std::pow(params_.n, 1.25);
    }
  }
  return 0.0;
}

double PiecewiseWeight::value(double x, double t) const {
  return std::exp(log_value(x, t));
}

double PiecewiseWeight::deriv_ratio(double x, double t, int j, Side side) const {
  if (j < 0 || j > 5) throw std::invalid_argument("derivative order must be 0..5");
  if (t < 0.0) throw std::invalid_argument("t must be nonnegative");
  if (j == 0) return 1.0;
  const double a = law_.at(t);
  switch (region_of(x, side)) {
    case kConstant:
      return 0.0;
    case kCutoff: {
      Jet5 phi = exp(a * varphi_jet(x));
      return phi.deriv(j) / phi.value();
    }
    case kCore: {
      const double x14 = std::pow(x, 0.25);
      const double x54 = x14 * x;
      const double a2 = a * a, a3 = a2 * a, a4 = a3 * a, a5 = a4 * a;
      switch (j) {
        case 1: return 1.25 * a * x14;
        case 2: return 5.0 / 16.0 * (5.0 * a2 * x14 * x14 + a / (x14 * x14 * x14));
        case 3:
          return 5.0 / 64.0 *
                 (25.0 * a3 * x14 * x14 * x14 + 15.0 * a2 / (x14 * x14) -
                  3.0 * a / (x * x14 * x14 * x14));
        case 4:
          return 5.0 / 256.0 *
                 (125.0 * a4 * x + 150.0 * a3 / x14 - 45.0 * a2 / (x * x14 * x14) +
                  21.0 * a / (x * x * x14 * x14 * x14));
        case 5:
          return 5.0 / 1024.0 *
                 (625.0 * a5 * x54 + 1250.0 * a4 - 375.0 * a3 / x54 +
                  375.0 * a2 / (x54 * x54) - 231.0 * a / (x54 * x54 * x54));
      }
      return 0.0;
    }
    case kBridge: {
      if (j == 5) return 0.0;
      BridgePolynomial bp(params_.n, a);
      const double d = x - params_.n;
      return bp.braced_deriv(d, j) / bp.braced(d);
    }
  }
  return 0.0;
}

double PiecewiseWeight::deriv(double x, double t, int j, Side side) const {
  return deriv_ratio(x, t, j, side) * value(x, t);
}

double PiecewiseWeight::time_ratio(double x, double t, Side side) const {
  if (t < 0.0) throw std::invalid_argument("t must be nonnegative");
  const double a = law_.at(t);
  const double da = law_.rate(t);
  switch (region_of(x, side)) {
    case kConstant:
      return 0.0;
    case kCutoff:
      return da * varphi_jet(x).value();
    case kCore:
      return da * std::pow(x, 1.25);
    case kBridge: {
      BridgePolynomial bp(params_.n, a);
      const double d = x - params_.n;
      return da * (bp.s_poly(d) / bp.braced(d) + std::pow(params_.n, 1.25));
    }
  }
  return 0.0;
}

double PiecewiseWeight::time_deriv(double x, double t, Side side) const {
  return time_ratio(x, t, side) * value(x, t);
}

BridgePolynomial PiecewiseWeight::bridge(double t) const {
  return BridgePolynomial(params_.n, law_.at(t));
}

// ---------------------------------------------------------------------------
// PiecewiseWeight::Slice
// ---------------------------------------------------------------------------

PiecewiseWeight::Slice::Slice(const PiecewiseWeight& w, double t)
    : w_(&w),
      a_(w.law_.at(t)),
      da_(w.law_.rate(t)),
      n54_(std::pow(w.params_.n, 1.25)),
      bp_(w.params_.n, w.law_.at(t)) {
  if (t < 0.0) throw std::invalid_argument("t must be nonnegative");
}

WeightRatios PiecewiseWeight::Slice::ratios(double x) const {
  WeightRatios r{};
  r.g[0] = 1.0;
  if (x <= 0.0) return r;
  if (x <= 1.0) {
    Jet5 vp = w_->varphi_jet(x);
    Jet5 phi = exp(a_ * vp);
    const double inv = 1.0 / phi.value();
    for (int j = 1; j <= 5; ++j) r.g[j] = phi.deriv(j) * inv;
    r.time = da_ * vp.value();
    return r;
  }
  if (x <= w_->params_.n) {
    const double a = a_;
    const double x14 = std::pow(x, 0.25);
    const double x12 = x14 * x14, x34 = x12 * x14, x54 = x14 * x;
    const double a2 = a * a, a3 = a2 * a, a4 = a3 * a, a5 = a4 * a;
    r.g[1] = 1.25 * a * x14;
    r.g[2] = 5.0 / 16.0 * (5.0 * a2 * x12 + a / x34);
    r.g[3] = 5.0 / 64.0 * (25.0 * a3 * x34 + 15.0 * a2 / x12 - 3.0 * a / (x * x34));
    r.g[4] = 5.0 / 256.0 * (125.0 * a4 * x + 150.0 * a3 / x14 -
                            45.0 * a2 / (x * x12) + 21.0 * a / (x * x * x34));
    r.g[5] = 5.0 / 1024.0 * (625.0 * a5 * x54 + 1250.0 * a4 - 375.0 * a3 / x54 +
                             375.0 * a2 / (x54 * x54) -
                             231.0 * a / (x54 * x54 * x54));
    r.time = da_ * x54;
    return r;
  }
  const double d = x - w_->params_.n;
  const double B = bp_.braced(d);
  const double inv = 1.0 / B;
  for (int j = 1; j <= 4; ++j) r.g[j] = bp_.braced_deriv(d, j) * inv;
  r.g[5] = 0.0;
  r.time = da_ * (bp_.s_poly(d) * inv + n54_);
  return r;
}

double PiecewiseWeight::Slice::log_value(double x) const {
  if (x <= 0.0) return 0.0;
  if (x <= 1.0) return a_ * w_->varphi_jet(x).value();
  if (x <= w_->params_.n) return a_ * std::pow(x, 1.25);
  return std::log(bp_.braced(x - w_->params_.n)) + a_ * n54_;
}

double phi_eval(const PiecewiseWeight& w, double x, double t, int j) {
  return w.deriv(x, t, j);
}

double phi_time_derivative(const PiecewiseWeight& w, double x, double t) {
  return w.time_deriv(x, t);
}

int n0_threshold(double a0, double c) {
  if (!(a0 > 0.0) || !(c > 0.0))
    throw std::invalid_argument("a0 and c must be positive");
  const double n0 = std::pow(c, 0.8) * std::pow(a0, -0.8);
  return static_cast<int>(std::floor(n0)) + 1;
}

// ---------------------------------------------------------------------------
// KatoWeight
// ---------------------------------------------------------------------------

namespace {

// phi_delta as a jet; split at x = 0 so neither branch exponentiates a
// positive argument.
Jet5 kato_jet(double beta, double delta, double x) {
  if (beta * x <= 0.0) {
    // z = e^{beta x} <= 1; phi = z / (1 + delta z)
    Jet5 z;
    double p = std::exp(beta * x);
    double fact = 1.0;
    for (int k = 0; k <= Jet5::order; ++k) {
      z.c[k] = p / fact;
      p *= beta;
      fact *= (k + 1);
    }
    return z / (Jet5::constant(1.0) + delta * z);
  }
  // w = e^{-beta x} < 1; phi = 1 / (w + delta)
  Jet5 w;
  double p = std::exp(-beta * x);
  double fact = 1.0;
  for (int k = 0; k <= Jet5::order; ++k) {
    w.c[k] = p / fact;
    p *= -beta;
    fact *= (k + 1);
  }
  return Jet5::constant(1.0) / (w + Jet5::constant(delta));
}

}  // namespace

double KatoWeight::value(double x) const { return kato_jet(beta, delta, x).value(); }

double KatoWeight::deriv(double x, int j) const {
  if (j < 0 || j > 5) throw std::invalid_argument("derivative order must be 0..5");
  return kato_jet(beta, delta, x).deriv(j);
}

Jet5 KatoWeight::jet(double x) const { return kato_jet(beta, delta, x); }

double KatoWeight::envelope(double x) const {
  if (beta * x <= 0.0) {
    const double z = std::exp(beta * x);
    const double den = 1.0 + delta * z;
    return z / (den * den);
  }
  const double w = std::exp(-beta * x);
  const double den = w + delta;
  return w / (den * den);
}

double KatoWeight::ratio3_1(double x) const {
  // (d^3 phi)^2 / d phi = beta^5 z (1 - 4 dz + (dz)^2)^2 / (1 + dz)^6
  const double b5 = beta * beta * beta * beta * beta;
  if (beta * x <= 0.0) {
    const double z = std::exp(beta * x);
    const double dz = delta * z;
    const double num = 1.0 - 4.0 * dz + dz * dz;
    const double den = 1.0 + dz;
    const double den2 = den * den;
    return b5 * z * num * num / (den2 * den2 * den2);
  }
  const double w = std::exp(-beta * x);
  const double num = w * w - 4.0 * delta * w + delta * delta;
  const double den = w + delta;
  const double den2 = den * den;
  return b5 * w * num * num / (den2 * den2 * den2);
}

double kato_eval(const KatoWeight& kw, double x, int j) { return kw.deriv(x, j); }

double kato_ratio(const KatoWeight& kw, double x) { return kw.ratio3_1(x); }

// ---------------------------------------------------------------------------
// MasterCoeffs
// ---------------------------------------------------------------------------

MasterCoeffs master_coeffs(double epsilon) {
  const double q = young_coeff(epsilon);
  const double f = 5.0 / kFourPow5;
  MasterCoeffs m;
  m.k = kFivePow5 / kFourPow5 * (1.5 + q);
  m.c4 = f * (1.5 * 1250.0 + q * 750.0);
  m.c3 = f * (1.5 * -375.0 + q * 75.0);
  m.c2 = f * (1.5 * 375.0 + q * -90.0);
  m.c1 = f * (1.5 * -231.0 + q * 9.0);
  return m;
}

}  // namespace quintic

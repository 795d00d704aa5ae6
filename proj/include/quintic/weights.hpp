#ifndef QUINTIC_WEIGHTS_HPP
#define QUINTIC_WEIGHTS_HPP

#include <stdexcept>

#include "quintic/jet.hpp"

namespace quintic {

// ---------------------------------------------------------------------------
// Decay law a(t) = a0 / (1 + kappa a0^4 t)^(1/4), solving a' = -k a^5 with
// kappa = 4k.  k depends on the energy-split parameter epsilon.
// ---------------------------------------------------------------------------

/// k(eps) = (5^5/4^5) (3/2 + 25/(4(5-eps))), strictly increasing on [0,1).
double k_of_epsilon(double epsilon);

struct DecayLaw {
  double a0;     ///< initial decay parameter, > 0
  double kappa;  ///< coefficient of a0^4 t inside the fourth root, = 4 k(eps)

  static DecayLaw for_epsilon(double a0, double epsilon);

  double at(double t) const;    ///< a(t)
  double rate(double t) const;  ///< a'(t) = -(kappa/4) a(t)^5
};

/// a(t) with precondition t >= 0.
double decay_a(const DecayLaw& law, double t);

// ---------------------------------------------------------------------------
// Weight family phi_N
// ---------------------------------------------------------------------------

struct WeightParams {
  double a0;       ///< > 0
  double epsilon;  ///< in [0,1)
  int n;           ///< matching point of the bridge polynomial, >= 1

  void validate() const;
};

/// Which one-sided value to take at a region boundary.  Auto resolves to the
/// left region, which gives the common value for derivative orders <= 4 and
/// the left value for order 5.
enum class Side { Auto, Left, Right };

/// Smooth nondecreasing C^inf cutoff, 0 for x <= 1/2 and 1 for x >= 3/4,
/// built from the normalized exp(-1/s) bump.
struct SmoothCutoff {
  Jet5 eval(double x) const;
};

/// Quartic bridge polynomial P_N(x,t) = B(x-N) e^{a N^(5/4)} where B is the
/// fourth-order Taylor polynomial of e^{a((x-N+N)^(5/4) - N^(5/4))} at x = N.
/// All polynomial pieces are expressed relative to e^{a N^(5/4)} so that the
/// certifier can work at any parameter scale without overflow.
struct BridgePolynomial {
  int n;
  double a;

  BridgePolynomial(int n_, double a_);

  /// Taylor coefficients of P_N at x = N including the e^{a N^(5/4)} factor;
  /// c0 = e^{a N^(5/4)}.
  double c(int k) const;
  /// Coefficient of (x-N)^k in B (no exponential factor).
  double b(int k) const { return b_[k]; }

  double braced(double d) const;                ///< B(d), d = x - N
  double braced_deriv(double d, int j) const;   ///< d^j/dx^j B
  double s_poly(double d) const;                ///< S_N = dB/da
  double r_poly(double d) const;                ///< R_N of the lower-order terms
  double r_poly_dx(double d) const;
  double r_poly_da(double d) const;             ///< (d/dt R_N)/a'(t)

  // Comparison brackets of the bridge estimates; the certifier fits the
  // universal constant c as the infimum of LHS/bracket over a sweep.
  double bracket_r(double d) const;        ///< for R_N
  double bracket_r_dx(double d) const;     ///< for dR_N/dx
  double bracket_r_da(double d) const;     ///< for dR_N/da
  double bracket_p(double d) const;        ///< for P_N / e^{a N^(5/4)}
  double bracket_p_dx(double d) const;     ///< for dP_N/dx / e^{a N^(5/4)}
  double bracket_s(double d) const;        ///< for S_N

 private:
  double b_[5];
  double s_[5];   // dB/da coefficients
  double pow_[8]; // cached powers of n
};

/// All x-derivative ratios d^j phi / phi plus the time ratio at one point.
struct WeightRatios {
  double g[6];  ///< g[j] = d^j/dx^j phi_N / phi_N, g[0] = 1
  double time;  ///< d/dt phi_N / phi_N
};

/// The weight phi_N(x,t): 1 on (-inf,0], exp(a(t) phi(x)) on [0,1],
/// exp(a(t) x^(5/4)) on [1,N], and the bridge polynomial on [N,inf).
/// Value and first four x-derivatives are continuous at x = 1 and x = N; the
/// fifth x-derivative jumps at x = N.  Evaluation is pure and thread-safe.
class PiecewiseWeight {
 public:
  PiecewiseWeight(const WeightParams& params);

  const WeightParams& params() const { return params_; }
  const DecayLaw& law() const { return law_; }
  int matching_point() const { return params_.n; }

  double value(double x, double t) const;
  double log_value(double x, double t) const;

  /// d^j/dx^j phi_N divided by phi_N.  Polynomial-sized for all admissible
  /// (x,t), hence safe where phi_N itself would overflow.
  double deriv_ratio(double x, double t, int j, Side side = Side::Auto) const;
  /// d^j/dx^j phi_N (may overflow where phi_N does).
  double deriv(double x, double t, int j, Side side = Side::Auto) const;

  /// d/dt phi_N divided by phi_N; nonpositive.
  double time_ratio(double x, double t, Side side = Side::Auto) const;
  double time_deriv(double x, double t, Side side = Side::Auto) const;

  BridgePolynomial bridge(double t) const;

  /// Fixed-t evaluator caching the decay state and bridge coefficients; the
  /// certifier sweeps call this in the hot loop.
  class Slice {
   public:
    Slice(const PiecewiseWeight& w, double t);

    WeightRatios ratios(double x) const;
    double log_value(double x) const;
    double a() const { return a_; }
    double a_rate() const { return da_; }
    const BridgePolynomial& bridge() const { return bp_; }

   private:
    const PiecewiseWeight* w_;
    double a_, da_, n54_;
    BridgePolynomial bp_;
  };
  Slice at_time(double t) const { return Slice(*this, t); }

 private:
  enum Region { kConstant, kCutoff, kCore, kBridge };
  Region region_of(double x, Side side) const;
  Jet5 varphi_jet(double x) const;  ///< (1-eta) x+^5 + eta x^(5/4) on (0,1]

  WeightParams params_;
  DecayLaw law_;
  SmoothCutoff eta_;
};

/// d^j/dx^j phi_N(x,t); j in 0..5, t >= 0.
double phi_eval(const PiecewiseWeight& w, double x, double t, int j);
/// d/dt phi_N(x,t).
double phi_time_derivative(const PiecewiseWeight& w, double x, double t);

/// Least integer N exceeding c^(4/5) a0^(-4/5); for N >= N0 the initial
/// dominance phi_N(x,0) <= e^{a0 x+^(5/4)} holds.
int n0_threshold(double a0, double c);

// ---------------------------------------------------------------------------
// Saturated exponential weight phi_delta = e^{beta x} / (1 + delta e^{beta x})
// ---------------------------------------------------------------------------

struct KatoWeight {
  double beta;   ///< > 0
  double delta;  ///< in (0,1)

  double value(double x) const;
  /// d^j/dx^j phi_delta, j in 0..5.
  double deriv(double x, int j) const;
  /// Value and all derivatives at once.
  Jet5 jet(double x) const;
  /// (d^3 phi_delta)^2 / (d phi_delta), evaluated in cancellation-free form.
  double ratio3_1(double x) const;
  /// e^{beta x} / (1 + delta e^{beta x})^2, the envelope of the derivative
  /// bounds; overflow-safe for all x.
  double envelope(double x) const;
};

double kato_eval(const KatoWeight& kw, double x, int j);
double kato_ratio(const KatoWeight& kw, double x);

// ---------------------------------------------------------------------------
// Coefficient identities of the core-region reduction
// ---------------------------------------------------------------------------

/// Coefficients of (d/dt + (3/2) d^5/dx^5 + q (d^3)^2/d) phi_N / phi_N on
/// [1,N] with q = 25/(4(5-eps)):
///   (a' + k a^5) x^(5/4) + c4 a^4 + c3 a^3 x^(-5/4) + c2 a^2 x^(-10/4)
///                        + c1 a x^(-15/4).
struct MasterCoeffs {
  double k;   // > 1
  double c4;  // > 0
  double c3;  // < 0
  double c2;  // > 0
  double c1;  // < 0
};

MasterCoeffs master_coeffs(double epsilon);

}  // namespace quintic

#endif  // QUINTIC_WEIGHTS_HPP

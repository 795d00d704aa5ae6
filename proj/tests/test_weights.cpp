#include <cmath>
#include <vector>

#include "doctest.h"
#include "quintic/weights.hpp"

using namespace quintic;

namespace {

// RK4 integration of a' = -k a^5, the independent oracle for the closed form.
double rk4_decay(double a0, double k, double t_end, int steps) {
  double a = a0;
  const double h = t_end / steps;
  auto f = [k](double v) { return -k * v * v * v * v * v; };
  for (int i = 0; i < steps; ++i) {
    const double k1 = f(a);
    const double k2 = f(a + 0.5 * h * k1);
    const double k3 = f(a + 0.5 * h * k2);
    const double k4 = f(a + h * k3);
    a += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return a;
}

}  // namespace

TEST_CASE("k(eps): exact rational values and monotonicity") {
  // k(0) = (5^5/4^5)(3/2 + 5/4) = 34375/4096, exact in binary arithmetic
  CHECK(k_of_epsilon(0.0) == 34375.0 / 4096.0);
  // kappa(0) = 4 k(0) = 11 * 5^5 / 4^5
  CHECK(4.0 * k_of_epsilon(0.0) == 11.0 * 3125.0 / 1024.0);
  CHECK(4.0 * k_of_epsilon(0.0) * 1024.0 == 34375.0);

  // eps = 0.5: (5^5/4^5)(3/2 + 25/18) = 3125*52/(1024*18)
  CHECK(k_of_epsilon(0.5) ==
        doctest::Approx(3125.0 * 52.0 / (1024.0 * 18.0)).epsilon(1e-15));

  double prev = k_of_epsilon(0.0);
  for (double eps : {0.01, 0.1, 0.3, 0.6, 0.9}) {
    const double k = k_of_epsilon(eps);
    CHECK(k > prev);
    prev = k;
  }
  CHECK(k_of_epsilon(0.0) > 1.0);

  CHECK_THROWS_AS(k_of_epsilon(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(k_of_epsilon(1.0), std::invalid_argument);
}

TEST_CASE("decay law: identities and ODE oracle") {
  DecayLaw law = DecayLaw::for_epsilon(1.0, 0.0);
  CHECK(decay_a(law, 0.0) == 1.0);

  // (1 + 15)^(1/4) = 2 regardless of kappa
  DecayLaw arbitrary{1.0, 7.3};
  CHECK(decay_a(arbitrary, 15.0 / 7.3) == doctest::Approx(0.5).epsilon(1e-14));

  // closed form vs RK4 oracle at t = 1 (a0 = 1, eps = 0)
  const double k0 = k_of_epsilon(0.0);
  const double closed = decay_a(law, 1.0);
  CHECK(closed ==
        doctest::Approx(1.0 / std::pow(1.0 + 34375.0 / 1024.0, 0.25)).epsilon(1e-15));
  CHECK(closed == doctest::Approx(rk4_decay(1.0, k0, 1.0, 4000)).epsilon(1e-10));

  // 1e-8 relative agreement over [0, 10] for several a0
  for (double a0 : {0.5, 1.0, 2.0}) {
    DecayLaw l = DecayLaw::for_epsilon(a0, 0.01);
    const double k = k_of_epsilon(0.01);
    for (double t : {0.1, 1.0, 5.0, 10.0}) {
      const double oracle = rk4_decay(a0, k, t, 20000);
      CHECK(decay_a(l, t) == doctest::Approx(oracle).epsilon(1e-8));
    }
  }

  CHECK_THROWS_AS(decay_a(law, -0.5), std::invalid_argument);

  // |a'(t) + k a^5| < 1e-8 via centered differences on the closed form
  for (double t : {0.0, 0.3, 1.0, 4.0}) {
    const double h = 1e-5;
    const double tm = std::max(t - h, 0.0);
    const double fd = (law.at(t + h) - law.at(tm)) / (t + h - tm);
    const double a = law.at(0.5 * (t + h + tm));
    CHECK(std::abs(fd + k0 * std::pow(a, 5)) < 1e-8);
    CHECK(law.rate(t) == doctest::Approx(-k0 * std::pow(law.at(t), 5)).epsilon(1e-14));
  }
}

TEST_CASE("phi_N: region values and derivative formulas") {
  PiecewiseWeight w({1.0, 0.0, 10});

  // constant region
  CHECK(phi_eval(w, -3.0, 0.7, 0) == 1.0);
  CHECK(phi_eval(w, -3.0, 0.7, 1) == 0.0);
  CHECK(phi_time_derivative(w, -0.2, 0.4) == 0.0);

  // core region at t = 0: d/dx phi = (5/4) a x^(1/4) phi
  const double expect1 = 1.25 * std::pow(4.0, 0.25) * std::exp(std::pow(4.0, 1.25));
  CHECK(phi_eval(w, 4.0, 0.0, 1) == doctest::Approx(expect1).epsilon(1e-13));

  // matching at x = N from both sides
  const double t = 0.25;
  const double a = w.law().at(t);
  const double vN = std::exp(a * std::pow(10.0, 1.25));
  CHECK(w.value(10.0, t) == doctest::Approx(vN).epsilon(1e-13));
  BridgePolynomial bp = w.bridge(t);
  CHECK(bp.braced(0.0) == 1.0);
  CHECK(bp.c(0) == doctest::Approx(vN).epsilon(1e-13));

  // time derivative in the core region
  const double k0 = k_of_epsilon(0.0);
  const double expect_t =
      -k0 * 1.0 * std::pow(2.0, 1.25) * std::exp(std::pow(2.0, 1.25));
  CHECK(phi_time_derivative(w, 2.0, 0.0) == doctest::Approx(expect_t).epsilon(1e-13));

  // centered finite difference in t at x = N + 1
  const double h = 1e-5;
  const double fd = (w.value(11.0, 0.5 + h) - w.value(11.0, 0.5 - h)) / (2.0 * h);
  CHECK(phi_time_derivative(w, 11.0, 0.5) == doctest::Approx(fd).epsilon(1e-6));
  CHECK(phi_time_derivative(w, 11.0, 0.5) <= 0.0);

  CHECK_THROWS_AS(phi_eval(w, 1.0, -1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(w.deriv_ratio(1.0, 0.0, 6), std::invalid_argument);
  CHECK_THROWS_AS(PiecewiseWeight({-1.0, 0.0, 5}), std::invalid_argument);
  CHECK_THROWS_AS(PiecewiseWeight({1.0, 0.0, 0}), std::invalid_argument);
}

TEST_CASE("phi_N: cutoff-region jet agrees with closed forms where eta = 1") {
  // on [3/4, 1] the cutoff has saturated, so phi = exp(a x^(5/4)) and the
  // jet-based evaluation must match the core-region formulas
  PiecewiseWeight w({0.7, 0.01, 5});
  const double t = 0.3;
  const double a = w.law().at(t);
  const double x = 0.9;
  const double x14 = std::pow(x, 0.25);
  const double g1 = 1.25 * a * x14;
  const double g2 = 5.0 / 16.0 * (5.0 * a * a * x14 * x14 + a / (x14 * x14 * x14));
  CHECK(w.deriv_ratio(x, t, 1) == doctest::Approx(g1).epsilon(1e-12));
  CHECK(w.deriv_ratio(x, t, 2) == doctest::Approx(g2).epsilon(1e-12));
  const double g5 = w.deriv_ratio(x, t, 5);
  const double a5 = std::pow(a, 5);
  const double x54 = std::pow(x, 1.25);
  const double g5_expect =
      5.0 / 1024.0 *
      (625.0 * a5 * x54 + 1250.0 * std::pow(a, 4) - 375.0 * std::pow(a, 3) / x54 +
       375.0 * a * a / (x54 * x54) - 231.0 * a / (x54 * x54 * x54));
  CHECK(g5 == doctest::Approx(g5_expect).epsilon(1e-10));

  // finite-difference check inside the transition zone
  const double xm = 0.6, hh = 1e-6;
  const double fd = (w.value(xm + hh, t) - w.value(xm - hh, t)) / (2.0 * hh);
  CHECK(w.deriv(xm, t, 1) == doctest::Approx(fd).epsilon(1e-7));
}

TEST_CASE("phi_N: C4 matching and fifth-derivative jump") {
  for (double a0 : {0.5, 2.0})
    for (int n : {5, 20}) {
      PiecewiseWeight w({a0, 0.0, n});
      for (double t : {0.0, 0.5}) {
        for (double xb : {1.0, static_cast<double>(n)}) {
          for (int j = 1; j <= 4; ++j) {
            const double gl = w.deriv_ratio(xb, t, j, Side::Left);
            const double gr = w.deriv_ratio(xb, t, j, Side::Right);
            CHECK(gl == doctest::Approx(gr).epsilon(1e-9));
          }
        }
        const double nb = static_cast<double>(n);
        CHECK(w.deriv_ratio(nb, t, 5, Side::Left) > 0.0);
        CHECK(w.deriv_ratio(nb, t, 5, Side::Right) == 0.0);
        // Auto takes the left value at the jump
        CHECK(w.deriv_ratio(nb, t, 5) == w.deriv_ratio(nb, t, 5, Side::Left));
      }
    }
}

TEST_CASE("phi_N: core-region reduction matches the coefficient identities") {
  // On [1,N]: (d_t + 3/2 d^5 + q (d^3)^2/d) phi / phi has a vanishing x^(5/4)
  // coefficient and the remaining polynomial in x^(-5/4) has fixed signs.
  for (double eps : {0.0, 0.1}) {
    PiecewiseWeight w({1.0, eps, 10});
    const MasterCoeffs mc = master_coeffs(eps);
    CHECK(mc.k == doctest::Approx(k_of_epsilon(eps)).epsilon(1e-15));
    CHECK(mc.c4 > 0.0);
    CHECK(mc.c3 < 0.0);
    CHECK(mc.c2 > 0.0);
    CHECK(mc.c1 < 0.0);
    const double q = 25.0 / (4.0 * (5.0 - eps));
    for (double t : {0.0, 0.4})
      for (double x : {1.5, 3.0, 7.0}) {
        const double a = w.law().at(t);
        const double L = w.time_ratio(x, t) + 1.5 * w.deriv_ratio(x, t, 5) +
                         q * std::pow(w.deriv_ratio(x, t, 3), 2) /
                             w.deriv_ratio(x, t, 1);
        const double xm = std::pow(x, -1.25);
        const double expect = mc.c4 * std::pow(a, 4) + mc.c3 * std::pow(a, 3) * xm +
                              mc.c2 * a * a * xm * xm + mc.c1 * a * xm * xm * xm;
        CHECK(L == doctest::Approx(expect).epsilon(1e-10));
      }
  }
}

TEST_CASE("phi_N: (A27)-style ratio identity in the core region") {
  PiecewiseWeight w({1.3, 0.0, 20});
  const double t = 0.15, x = 4.2;
  const double a = w.law().at(t);
  const double g1 = w.deriv_ratio(x, t, 1);
  const double g3 = w.deriv_ratio(x, t, 3);
  const double x54 = std::pow(x, 1.25);
  const double expect =
      5.0 / 1024.0 *
      (625.0 * std::pow(a, 5) * x54 + 750.0 * std::pow(a, 4) +
       75.0 * std::pow(a, 3) / x54 - 90.0 * a * a / (x54 * x54) +
       9.0 * a / (x54 * x54 * x54));
  CHECK(g3 * g3 / g1 == doctest::Approx(expect).epsilon(1e-11));
}

TEST_CASE("bridge polynomial: Taylor coefficients per the matching rule") {
  const int n = 10;
  const double a = 0.8;
  BridgePolynomial bp(n, a);
  const double n14 = std::pow(n, 0.25);
  CHECK(bp.b(1) == doctest::Approx(1.25 * a * n14).epsilon(1e-15));
  CHECK(bp.b(2) == doctest::Approx(5.0 / 16.0 *
                                   (5.0 * a * a * std::sqrt(n) + a * std::pow(n, -0.75)) /
                                   2.0)
                       .epsilon(1e-15));
  CHECK(bp.b(3) ==
        doctest::Approx(5.0 / 64.0 *
                        (25.0 * std::pow(a, 3) * std::pow(n, 0.75) +
                         15.0 * a * a / std::sqrt(n) - 3.0 * a * std::pow(n, -1.75)) /
                        6.0)
            .epsilon(1e-15));
  CHECK(bp.b(4) ==
        doctest::Approx(5.0 / 256.0 *
                        (125.0 * std::pow(a, 4) * n +
                         150.0 * std::pow(a, 3) * std::pow(n, -0.25) -
                         45.0 * a * a * std::pow(n, -1.5) +
                         21.0 * a * std::pow(n, -2.75)) /
                        24.0)
            .epsilon(1e-15));

  // the bridge is the 4th-order Taylor polynomial of exp(a x^(5/4)) at x = N
  for (int j = 0; j <= 4; ++j) {
    Jet5 core = exp(a * pow_at(static_cast<double>(n), 1.25));
    const double lhs = bp.braced_deriv(0.0, j) * std::exp(a * std::pow(n, 1.25));
    CHECK(lhs == doctest::Approx(core.deriv(j)).epsilon(1e-12));
  }

  // S_N = dB/da against a centered difference in a
  const double h = 1e-6;
  for (double d : {0.5, 3.0, 20.0}) {
    const double fd =
        (BridgePolynomial(n, a + h).braced(d) - BridgePolynomial(n, a - h).braced(d)) /
        (2.0 * h);
    CHECK(bp.s_poly(d) == doctest::Approx(fd).epsilon(1e-7));
    const double fdr =
        (BridgePolynomial(n, a + h).r_poly(d) - BridgePolynomial(n, a - h).r_poly(d)) /
        (2.0 * h);
    CHECK(bp.r_poly_da(d) == doctest::Approx(fdr).epsilon(1e-6));
    const double hd = 1e-6 * std::max(1.0, d);
    const double fdx = (bp.r_poly(d + hd) - bp.r_poly(d - hd)) / (2.0 * hd);
    CHECK(bp.r_poly_dx(d) == doctest::Approx(fdx).epsilon(1e-6));
  }

  // R_N is exactly the part of B left out of the pure-power bracket pieces
  for (double d : {0.25, 2.0, 8.0}) {
    const double pure = 1.0 + 1.25 * a * n14 * d +
                        25.0 / 16.0 * a * a * std::sqrt(n) * d * d / 2.0 +
                        125.0 / 64.0 * std::pow(a, 3) * std::pow(n, 0.75) * d * d * d / 6.0 +
                        625.0 / 256.0 * std::pow(a, 4) * n * d * d * d * d / 24.0;
    const double extra = 5.0 / 64.0 * 15.0 * a * a / std::sqrt(n) / 6.0 * d * d * d;
    CHECK(bp.braced(d) == doctest::Approx(pure + extra + bp.r_poly(d)).epsilon(1e-13));
  }
}

TEST_CASE("bridge polynomial: Young-inequality steps hold on a grid") {
  // 5*46 a^2 N^(-6/4) <= 5(149 a^3 N^(-1/4) + 4 a N^(-11/4))
  for (double a = 0.05; a <= 2.0; a += 0.05)
    for (int n : {1, 5, 10, 40}) {
      const double lhs = 230.0 * a * a * std::pow(n, -1.5);
      const double rhs =
          5.0 * (149.0 * std::pow(a, 3) * std::pow(n, -0.25) +
                 4.0 * a * std::pow(n, -2.75));
      CHECK(lhs <= rhs * (1.0 + 1e-12));
    }
  // (1/24) a N^(-7/4) d^3 <= (1/8) a N^(-3/4) d^2 + (80/(4^4 24)) a N^(-11/4) d^4
  for (double d = 0.1; d <= 60.0; d *= 1.7)
    for (int n : {1, 5, 40}) {
      const double a = 0.7;
      const double lhs = a / 24.0 * std::pow(n, -1.75) * d * d * d;
      const double rhs = a / 8.0 * std::pow(n, -0.75) * d * d +
                         80.0 / (256.0 * 24.0) * a * std::pow(n, -2.75) * d * d * d * d;
      CHECK(lhs <= rhs * (1.0 + 1e-12));
    }
}

TEST_CASE("n0_threshold and initial dominance") {
  CHECK(n0_threshold(1.0, 1.0) == 2);
  // monotone decreasing in a0
  CHECK(n0_threshold(0.25, 1.0) >= n0_threshold(0.5, 1.0));
  CHECK(n0_threshold(0.5, 1.0) >= n0_threshold(2.0, 1.0));
  CHECK_THROWS_AS(n0_threshold(-1.0, 1.0), std::invalid_argument);

  // grid-dominance oracle: phi_N(x,0) <= e^{a0 x+^(5/4)} on [N, N+100]
  auto dominates = [](double a0, int n) {
    PiecewiseWeight w({a0, 0.0, n});
    const double n54 = a0 * std::pow(n, 1.25);
    BridgePolynomial bp = w.bridge(0.0);
    for (double d = 0.0; d <= 100.0; d += 0.05) {
      const double log_phi = std::log(bp.braced(d)) + n54;
      const double log_dom = a0 * std::pow(n + d, 1.25);
      if (log_phi > log_dom + 1e-12) return false;
    }
    return true;
  };

  // c from the proof of part (v): the binding absorption constant 462/375
  const double c_paper = 462.0 / 375.0;
  for (double a0 : {0.5, 1.0, 2.0}) {
    const int n0 = n0_threshold(a0, c_paper);
    CHECK(dominates(a0, n0));
    CHECK(dominates(a0, n0 + 3));
    // the sweep-smallest N passing cannot exceed the threshold
    int smallest = -1;
    for (int n = 1; n <= n0; ++n)
      if (dominates(a0, n)) {
        smallest = n;
        break;
      }
    CHECK(smallest >= 1);
    CHECK(smallest <= n0);
  }
}

TEST_CASE("phi_N: quartic growth and pointwise limit in N") {
  PiecewiseWeight w({0.5, 0.0, 5});
  // phi_N / <x+>^4 is bounded as x grows (fixed N, t)
  const double t = 0.2;
  double prev_ratio = 0.0;
  for (double x : {20.0, 100.0, 400.0, 1600.0}) {
    const double ratio = std::exp(w.log_value(x, t) - 2.0 * std::log1p(x * x));
    if (prev_ratio > 0.0) CHECK(ratio <= prev_ratio * 1.01);
    prev_ratio = ratio;
  }

  // for fixed x > 1 the values stabilize at e^{a(t) x^(5/4)} once N > x
  const double x = 7.3;
  const double target = std::exp(w.law().at(t) * std::pow(x, 1.25));
  for (int n : {8, 10, 20, 40}) {
    PiecewiseWeight wn({0.5, 0.0, n});
    CHECK(wn.value(x, t) == doctest::Approx(target).epsilon(1e-14));
  }
  // and for x < 0 the value is already the limit e^{a(t) * 0} = 1
  CHECK(w.value(-4.0, t) == 1.0);
}

TEST_CASE("kato weight: closed forms, bounds, monotonicity, limit") {
  KatoWeight kw{1.0, 0.5};

  // sup = 1/delta approached as x -> +inf
  CHECK(kw.value(800.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(kw.value(800.0) < 2.0);

  // (5.3): 0 <= d phi <= beta phi
  for (double x : {-30.0, -2.0, 0.0, 1.5, 40.0}) {
    const double d1 = kw.deriv(x, 1);
    CHECK(d1 >= 0.0);
    CHECK(d1 <= 1.0 * kw.value(x) * (1.0 + 1e-14));
  }

  // (5.4) at x = 0: beta^2 (1-delta)/(1+delta)^3
  CHECK(kw.deriv(0.0, 2) == doctest::Approx(0.5 / 3.375).epsilon(1e-13));

  // explicit forms of (5.3), (5.4), (5.6)
  for (double x : {-3.0, 0.7, 5.0}) {
    const double e = std::exp(x);
    const double den = 1.0 + 0.5 * e;
    CHECK(kw.deriv(x, 1) == doctest::Approx(e / (den * den)).epsilon(1e-12));
    CHECK(kw.deriv(x, 2) ==
          doctest::Approx(e * (1.0 - 0.5 * e) / std::pow(den, 3)).epsilon(1e-12));
    const double num3 = 1.0 - 4.0 * 0.5 * e + 0.25 * e * e;
    CHECK(kw.deriv(x, 3) == doctest::Approx(e * num3 / std::pow(den, 4)).epsilon(1e-11));
  }

  // ratio (5.9): composition oracle and asymptotics
  KatoWeight kw2{1.0, 0.9};
  for (double x : {-20.0, -5.0, 0.0, 3.0}) {
    const double composed = std::pow(kw2.deriv(x, 3), 2) / kw2.deriv(x, 1);
    CHECK(kw2.ratio3_1(x) == doctest::Approx(composed).epsilon(1e-9));
    CHECK(kw2.ratio3_1(x) >= 0.0);
    CHECK(kw2.ratio3_1(x) <= 4.0 * kw2.envelope(x) * (1.0 + 1e-12));
  }
  // far left the ratio collapses to beta^5 e^{beta x}
  CHECK(kw2.ratio3_1(-20.0) == doctest::Approx(std::exp(-20.0)).epsilon(1e-6));

  // (5.11) and (5.12): monotone in delta, pointwise limit e^{beta x}
  for (double x : {-4.0, 0.0, 2.0}) {
    double prev = 0.0;
    for (double delta : {0.9, 0.5, 0.1, 0.01, 0.001}) {
      const double v = KatoWeight{1.0, delta}.value(x);
      CHECK(v >= prev);
      CHECK(v <= std::exp(x));
      prev = v;
    }
    CHECK(prev == doctest::Approx(std::exp(x)).epsilon(2e-3));
  }

  // nonincreasing in delta pointwise, nondecreasing in x
  CHECK(KatoWeight{0.3, 0.2}.value(1.0) >= KatoWeight{0.3, 0.4}.value(1.0));
  CHECK(kw.value(2.0) >= kw.value(1.0));
}

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "quintic/certifier.hpp"

using namespace quintic;

namespace {

// Small sweep for unit tests; the acceptance suite runs the full grids.
SweepSpec mini_spec() {
  SweepSpec s;
  s.a0_values = {1.0};
  s.epsilon_values = {0.0};
  s.n_values = {5, 10};
  s.x_step = 0.05;
  s.t_step = 0.25;
  return s;
}

}  // namespace

TEST_CASE("certifier: basic sweep passes (positivity, monotonicity, matching)") {
  CertReport r = certify_basic(mini_spec());
  CHECK(r.all_pass());
  CHECK(r.fitted("C4_match") <= 1e-9);
}

TEST_CASE("certifier: master inequality is finite and refinement-stable") {
  SweepSpec spec = mini_spec();
  CertReport r = certify_master_inequality(spec);
  CHECK(r.all_pass());
  CHECK(r.defects.empty());
  const double c0 = r.fitted("A10");
  CHECK(std::isfinite(c0));
  CHECK(c0 > 0.0);

  // independent dense-grid oracle near the reported argmax, at 10x resolution
  const IneqRecord* rec = nullptr;
  for (const auto& rr : r.records)
    if (rr.id == "A10" && rr.n == 10) rec = &rr;
  REQUIRE(rec != nullptr);
  PiecewiseWeight pw({rec->a0, rec->epsilon, rec->n});
  const double q = 25.0 / (4.0 * (5.0 - rec->epsilon));
  double dense_sup = -1e300;
  const double x0 = std::max(spec.x_min, rec->x_star - 1.0);
  for (double x = x0; x <= rec->x_star + 1.0; x += spec.x_step / 10.0) {
    const double g1 = pw.deriv_ratio(x, rec->t_star, 1);
    const double g3 = pw.deriv_ratio(x, rec->t_star, 3);
    const double g5 = pw.deriv_ratio(x, rec->t_star, 5);
    const double tr = pw.time_ratio(x, rec->t_star);
    const double L = g1 == 0.0 ? tr + 1.5 * g5 : tr + 1.5 * g5 + q * g3 * g3 / g1;
    dense_sup = std::max(dense_sup, L);
  }
  CHECK(rec->ratio_sup == doctest::Approx(dense_sup).epsilon(0.05));

  // x <= 0 contributes zero to the master ratio
  CHECK(pw.time_ratio(-2.0, 0.3) == 0.0);
  CHECK(pw.deriv_ratio(-2.0, 0.3, 5) == 0.0);
}

TEST_CASE("certifier: derivative bounds are N-uniform") {
  CertReport r = certify_derivative_bounds(mini_spec());
  CHECK(r.all_pass());
  // j=1 on [1,N]: ratio = (5/4) a x^(1/4) / <x>^(1/4) <= (5/4) a0
  CHECK(r.fitted("A11_j1") <= 1.25 * 1.0 * (1.0 + 1e-9));
  CHECK(r.fitted("A11_j1") > 1.0);  // approached near x = N at t = 0
  for (int j = 2; j <= 5; ++j)
    CHECK(std::isfinite(r.fitted("A11_j" + std::to_string(j))));
}

TEST_CASE("certifier: corollary fit") {
  CertReport r = certify_corollary(mini_spec());
  CHECK(r.all_pass());
  const double c0t = r.fitted("A58");
  CHECK(c0t >= 1.0);  // ratio equals 1 on x <= 0
  CHECK(std::isfinite(c0t));
}

TEST_CASE("certifier: bridge inequalities and fitted universal constant") {
  CertReport r = certify_bridge_inequalities(mini_spec());
  CHECK(r.all_pass());
  CHECK(r.defects.empty());
  CHECK(r.fitted("bridge_c") > 0.0);
  // the d/dx P_N bound holds with constant one
  for (const auto& rec : r.records)
    if (rec.id == "A38") CHECK(rec.ratio_sup >= 1.0 - 1e-9);
}

TEST_CASE("certifier: kato chain") {
  KatoSweepSpec spec;
  CertReport r = certify_kato(spec);
  CHECK(r.all_pass());
  CHECK(r.fitted("K59") <= 4.0);
  CHECK(r.fitted("K53") <= 1.0 + 1e-12);
  CHECK(std::isfinite(r.fitted("K510")));
}

TEST_CASE("certifier: determinism of repeated sweeps") {
  SweepSpec spec = mini_spec();
  spec.check_refinement = false;
  CertReport a = certify_master_inequality(spec);
  CertReport b = certify_master_inequality(spec);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].ratio_sup == b.records[i].ratio_sup);
    CHECK(a.records[i].x_star == b.records[i].x_star);
  }
}

TEST_CASE("certifier: linear-space and ratio-space evaluation agree") {
  // where phi is representable, L/phi computed from raw derivatives matches
  // the ratio-form evaluation to 1e-9 relative
  PiecewiseWeight pw({0.5, 0.0, 5});
  const double q = 25.0 / 20.0;
  for (double t : {0.0, 0.5})
    for (double x : {0.4, 2.0, 6.0, 12.0}) {
      const double phi = pw.value(x, t);
      const double raw = pw.time_deriv(x, t) + 1.5 * pw.deriv(x, t, 5) +
                         q * std::pow(pw.deriv(x, t, 3), 2) / pw.deriv(x, t, 1);
      const double ratio_form =
          pw.time_ratio(x, t) + 1.5 * pw.deriv_ratio(x, t, 5) +
          q * std::pow(pw.deriv_ratio(x, t, 3), 2) / pw.deriv_ratio(x, t, 1);
      CHECK(raw / phi == doctest::Approx(ratio_form).epsilon(1e-9));
    }
}

TEST_CASE("certifier: CSV schema") {
  SweepSpec spec = mini_spec();
  spec.n_values = {5};
  spec.check_refinement = false;
  CertReport r = certify_master_inequality(spec);
  std::ostringstream os;
  write_csv(r, os);
  const std::string text = os.str();
  CHECK(text.rfind("ineq_id,a0,epsilon,N,x_star,t_star,ratio_sup,pass\n", 0) == 0);
  CHECK(text.find("A10,1,0,5,") != std::string::npos);
}

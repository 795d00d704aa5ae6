#ifndef QUINTIC_CERTIFIER_HPP
#define QUINTIC_CERTIFIER_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "quintic/weights.hpp"

namespace quintic {

/// Parameter grids for the Theorem-A certification sweep.  Identical specs
/// produce bitwise-identical reports.
struct SweepSpec {
  std::vector<double> a0_values{0.5, 1.0, 2.0};
  std::vector<double> epsilon_values{0.0, 0.01, 0.1};
  std::vector<int> n_values{5, 10, 20, 40};
  double x_min = -10.0;
  double x_step = 0.01;
  double x_margin = 50.0;  ///< x_max = N + margin, overflow-capped
  double t_max = 1.0;
  double t_step = 0.05;
  double overflow_cap = 600.0;  ///< cap on a0 * x^(5/4)
  bool check_refinement = true; ///< re-run at half step and compare fits
  double refinement_tol = 0.05;

  double x_max(double a0, int n) const;
};

struct IneqRecord {
  std::string id;
  double a0 = 0.0;
  double epsilon = 0.0;
  int n = 0;  ///< 0 marks an aggregate row
  double x_star = 0.0;
  double t_star = 0.0;
  double ratio_sup = 0.0;
  bool pass = false;
};

struct CertReport {
  std::vector<IneqRecord> records;
  std::vector<std::string> defects;

  bool all_pass() const;
  /// Largest fitted ratio among records with the given id prefix.
  double fitted(const std::string& id_prefix) const;
  void append(const CertReport& other);
};

/// Positivity, monotonicity of d/dx, and C^4 matching at x = 1 and x = N
/// (relative tolerance 1e-9); also checks the d^5/dx^5 jump at x = N.
CertReport certify_basic(const SweepSpec& spec);

/// Fits c0 = sup of (d_t phi + 3/2 d_x^5 phi + q (d_x^3 phi)^2/d_x phi)/phi
/// over the sweep; pass iff finite and refinement-stable.
CertReport certify_master_inequality(const SweepSpec& spec);

/// Fits c_j = sup |d_x^j phi| / (<x>^(j/4) phi) for j = 1..5; pass iff finite
/// and uniform across the N sweep (variation < 10%).
CertReport certify_derivative_bounds(const SweepSpec& spec);

/// Fits c0~ = sup phi / (1 + <x> d_x phi); pass iff finite and N-stable.
CertReport certify_corollary(const SweepSpec& spec);

/// Checks the bridge-polynomial lower bounds on x >= N and fits the largest
/// universal constant making all of them hold on the sweep.
CertReport certify_bridge_inequalities(const SweepSpec& spec);

/// All of the above in one report (the weights-check subcommand).
CertReport certify_weights(const SweepSpec& spec);

struct KatoSweepSpec {
  std::vector<double> beta_values{0.2, 0.3, 0.5, 1.0};
  std::vector<double> delta_values{0.9, 0.5, 0.1, 0.01};
  std::vector<double> epsilon_values{0.0, 0.01, 0.1};
  double phase_min = -40.0;  ///< beta*x range
  double phase_max = 40.0;
  double phase_step = 0.05;
  bool check_refinement = true;
  double refinement_tol = 0.05;
};

/// Verifies the saturated-exponential weight chain: derivative envelopes,
/// the (d^3)^2/d^1 ratio bound, the c0 beta^5 majorant, monotonicity in
/// delta, and the pointwise limit to e^{beta x}.
CertReport certify_kato(const KatoSweepSpec& spec);

/// CSV with columns {ineq_id, a0, epsilon, N, x_star, t_star, ratio_sup, pass}.
void write_csv(const CertReport& report, std::ostream& out);

}  // namespace quintic

#endif  // QUINTIC_CERTIFIER_HPP

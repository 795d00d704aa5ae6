#ifndef QUINTIC_SOLVER_HPP
#define QUINTIC_SOLVER_HPP

#include <complex>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

namespace quintic {

using Eigen::ArrayXcd;
using Eigen::ArrayXd;

/// Periodic collocation grid on [-L, L) with M points.
struct Grid {
  double half_width = 100.0;       ///< L
  int m = 4096;                    ///< power of two
  double dealias_fraction = 2.0 / 3.0;

  void validate() const;
  double dx() const { return 2.0 * half_width / m; }
  double k_max() const;            ///< pi M / (2 L)
  ArrayXd nodes() const;           ///< -L + i dx
  ArrayXd wavenumbers() const;     ///< FFT ordering: 0..M/2-1, -M/2..-1 times pi/L
};

/// One monomial coeff * u^pu * u_x^pux * u_xx^puxx.
struct Term {
  int pu = 0, pux = 0, puxx = 0;
  double coeff = 0.0;

  int degree() const { return pu + pux + puxx; }
};

/// P = Q0(u, u_x, u_xx) u_xxx + Q1(u, u_x, u_xx) with deg Q0 >= 1 and
/// deg Q1 >= 2.
struct NonlinearitySpec {
  std::vector<Term> q0;
  std::vector<Term> q1;

  bool empty() const { return q0.empty() && q1.empty(); }
  /// Largest total polynomial degree of any product, counting the u_xxx
  /// factor of the Q0 block.
  int max_degree() const;
  /// Fraction of the spectrum that must be kept for alias-free products of
  /// the maximal degree: 2/(D+1) of the modes.
  double required_dealias_fraction() const;
  void validate() const;
  std::string describe() const;

  static NonlinearitySpec preset(const std::string& name);
  static NonlinearitySpec kdv5();
  static NonlinearitySpec benney1(double c1 = 1.0);
  static NonlinearitySpec benney2();
  static NonlinearitySpec lisher();
  static NonlinearitySpec ivp17(double b1 = 1.0, double b2 = 1.0, double b3 = 1.0);
};

/// Collocation values of u at a fixed time.
struct Field {
  Grid grid;
  ArrayXd values;
  double t = 0.0;
};

Field make_field(const Grid& grid, const std::function<double(double)>& profile,
                 double t = 0.0);

/// Pseudospectral evolution of d_t u = d_x^5 u - P with the linear symbol
/// i k^5 integrated exactly (integrating-factor classical RK4, global order
/// four in dt).  Nonlinear products are evaluated in collocation space and
/// dealiased after every product chain.
class PseudoSpectral {
 public:
  PseudoSpectral(const Grid& grid, const NonlinearitySpec& spec);

  const Grid& grid() const { return grid_; }
  const NonlinearitySpec& spec() const { return spec_; }

  ArrayXcd to_hat(const ArrayXd& u);
  ArrayXd from_hat(const ArrayXcd& uhat);
  /// Spectral derivative of collocation data.
  ArrayXd derivative(const ArrayXd& u, int order);
  /// Collocation values of P(u, u_x, u_xx, u_xxx), dealiased.
  ArrayXd nonlinearity(const ArrayXd& u);

  Field step(const Field& f, double dt);
  void step_hat(ArrayXcd& uhat, double dt);

  using Observer = std::function<void(double t, const ArrayXd& u)>;
  /// Steps to time T (dt adjusted to land exactly), invoking the observer at
  /// t = 0, every observe_every steps, and at T.  Throws on NaN/overflow with
  /// step diagnostics.
  Field evolve(const Field& f0, double T, double dt, int observe_every = 0,
               const Observer& observer = nullptr);

  /// Fraction of the squared mass in the outer 5% of the box on each side --
  /// the wraparound sentinel.
  static double boundary_mass_fraction(const ArrayXd& u);

 private:
  void refresh_factors(double dt);
  void nonlinear_hat(const ArrayXcd& uhat, ArrayXcd& out);

  Grid grid_;
  NonlinearitySpec spec_;
  Eigen::FFT<double> fft_;
  ArrayXd k_;
  ArrayXcd symbol_;  // i k^5
  ArrayXd mask_;
  bool need_ux_ = false, need_uxx_ = false;

  double cached_dt_ = -1.0;
  ArrayXcd e_full_, e_half_;

  // scratch buffers
  ArrayXd u_, ux_, uxx_, uxxx_, p_;
  ArrayXcd work_, n1_, n2_, n3_, n4_, stage_;
};

/// Recommended dt: the smaller of the explicit dispersive CFL for the fastest
/// retained mode and the advective limit of the Q0 block at the dealiasing
/// cutoff.  A documented heuristic, deliberately conservative: the
/// integrating factor integrates the linear symbol exactly, so the dispersive
/// branch only matters as an accuracy guideline.
double stability_limit(const Grid& grid, const NonlinearitySpec& spec,
                       double amplitude);

/// CSV checkpoint: header lines {L, M, t, preset, coefficients} then x,u rows.
void write_checkpoint(const Field& f, const NonlinearitySpec& spec,
                      std::ostream& out);
Field read_checkpoint(std::istream& in);

}  // namespace quintic

#endif  // QUINTIC_SOLVER_HPP

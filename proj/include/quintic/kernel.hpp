#ifndef QUINTIC_KERNEL_HPP
#define QUINTIC_KERNEL_HPP

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

namespace quintic {

/// Fundamental-solution kernel of d_t u = d_x^(2j+1) u at unit time,
///   K_j(x) = (1/pi) Integral_0^inf cos(x xi + xi^(2j+1)) d xi,
/// super-exponentially small for x -> +inf and algebraically decaying,
/// oscillatory for x -> -inf.  j = 1 is the Airy case, j = 2 the quintic one.
/// Direct adaptive oscillatory quadrature plus an integration-by-parts tail.
double kernel_eval(double x, int j = 2);

/// Same value through the rotated contour xi = e^{i pi/(2(2j+1))} s; valid for
/// x >= 0 and used as an independent cross-check of the direct quadrature.
double kernel_eval_contour(double x, int j = 2);

/// Complex contour value whose real part is K_j(x); its modulus is the
/// oscillation-free decay envelope used for the right-tail fit (x >= 0).
std::complex<double> kernel_contour_value(double x, int j = 2);

/// Estimated absolute truncation error of kernel_eval at x (tail remainder).
double kernel_tail_error(double x, int j = 2);

struct KernelTable {
  int j = 2;
  std::vector<double> x;
  std::vector<double> k;
  std::vector<std::string> method;  ///< "quad" or "quad+tail" per sample
  std::vector<double> abs_err;
};

KernelTable tabulate_kernel(double x_min, double x_max, double step, int j = 2);

struct EnvelopeFit {
  double right_exponent = 0.0;  ///< p in |K| ~ C exp(-r x^p); 5/4 for j = 2
  double right_rate = 0.0;      ///< fitted r
  double left_exponent = 0.0;   ///< q in envelope ~ C |x|^(-q); 3/8 for j = 2
  double right_residual = 0.0;  ///< rms log-residual of the right fit
  double left_residual = 0.0;
  int left_maxima = 0;          ///< number of extrema used
  bool ok = false;
  std::string note;
};

/// Least-squares decay-envelope fits.  Right side: free-exponent fit of
/// log|K| ~ A - r x^p on x in [2,8] using the contour envelope.  Left side:
/// log-log fit through the local maxima of |K| on x in [-40,-5].
EnvelopeFit fit_decay_envelope(const KernelTable& table);

/// CSV with columns {x, K, method, abs_err_est}.
void write_csv(const KernelTable& table, std::ostream& out);

}  // namespace quintic

#endif  // QUINTIC_KERNEL_HPP

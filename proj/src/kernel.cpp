#include "quintic/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace quintic {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 15-point Gauss-Legendre rule on [-1,1], generated once by Newton iteration
// on the Legendre recurrence.
struct GaussLegendre15 {
  double node[15];
  double weight[15];

  GaussLegendre15() {
    const int n = 15;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const double dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      node[i] = x;
      weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

const GaussLegendre15& gl15() {
  static const GaussLegendre15 rule;
  return rule;
}

struct Phase {
  double x;
  int p;  // 2j+1

  double theta(double xi) const { return xi * (x + std::pow(xi, p - 1)); }
  double d1(double xi) const { return x + p * std::pow(xi, p - 1); }
  double d2(double xi) const { return p * (p - 1.0) * std::pow(xi, p - 2); }
  double d3(double xi) const {
    return p * (p - 1.0) * (p - 2.0) * std::pow(xi, p - 3);
  }
  double stationary() const {
    return x < 0.0 ? std::pow(-x / p, 1.0 / (p - 1)) : 0.0;
  }
};

void check_args(double x, int j) {
  if (j != 1 && j != 2)
    throw std::invalid_argument("kernel_eval: only j = 1 and j = 2 are supported");
  if (!(x >= -2000.0 && x <= 100.0))
    throw std::domain_error(
        "kernel_eval: x outside the handled window [-2000, 100]");
}

struct QuadResult {
  double value;
  double abs_err;
};

// (1/pi) Integral_0^Xi cos(theta) + analytic tail by two integrations by
// parts; the cutoff completes >= 200 oscillations past the last stationary
// point and is pushed further until the next-order tail term is negligible.
QuadResult kernel_quadrature(double x, int j) {
  const Phase ph{x, 2 * j + 1};
  const double start = ph.stationary();

  double oscillations = 200.0;
  double xi_cut = 0.0, tail_err = 0.0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const double target = ph.theta(start) + oscillations * 2.0 * kPi;
    double c = std::max(start + 1.0, 1.0);
    for (int it = 0; it < 200; ++it) {
      const double next = std::pow(std::max(target - x * c, 1.0), 1.0 / ph.p);
      if (std::abs(next - c) < 1e-12 * c) {
        c = next;
        break;
      }
      c = next;
    }
    xi_cut = c;
    const double t1 = ph.d1(xi_cut), t2 = ph.d2(xi_cut), t3 = ph.d3(xi_cut);
    tail_err = std::abs(t3) / std::pow(t1, 4) + 3.0 * t2 * t2 / std::pow(t1, 5);
    if (tail_err < 1e-11) break;
    oscillations *= 2.0;
  }

  const auto& rule = gl15();
  double acc = 0.0;
  double a = 0.0;
  long panels = 0;
  while (a < xi_cut) {
    const double d1 = std::abs(ph.d1(a));
    double h;
    const double half_pi = 0.5 * kPi;
    double d2 = ph.d2(std::min(a + 0.5, xi_cut));
    if (d2 > 1e-12) {
      h = (-d1 + std::sqrt(d1 * d1 + 2.0 * d2 * half_pi)) / d2;
    } else {
      h = d1 > 1e-12 ? half_pi / d1 : 0.5;
    }
    h = std::min(h, 0.5);
    // second pass with the curvature at the trial endpoint
    d2 = ph.d2(std::min(a + h, xi_cut));
    if (d2 > 1e-12)
      h = std::min(h, (-d1 + std::sqrt(d1 * d1 + 2.0 * d2 * half_pi)) / d2);
    const double b = std::min(a + h, xi_cut);
    const double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
    double panel = 0.0;
    for (int i = 0; i < 15; ++i)
      panel += rule.weight[i] * std::cos(ph.theta(mid + rad * rule.node[i]));
    acc += panel * rad;
    a = b;
    ++panels;
  }

  const double t1 = ph.d1(xi_cut), t2 = ph.d2(xi_cut);
  const double th = ph.theta(xi_cut);
  const double tail = -std::sin(th) / t1 + std::cos(th) * t2 / (t1 * t1 * t1);

  QuadResult r;
  r.value = (acc + tail) / kPi;
  r.abs_err = (tail_err + 1e-16 * panels) / kPi;
  return r;
}

}  // namespace

double kernel_eval(double x, int j) {
  check_args(x, j);
  return kernel_quadrature(x, j).value;
}

double kernel_tail_error(double x, int j) {
  check_args(x, j);
  return kernel_quadrature(x, j).abs_err;
}

std::complex<double> kernel_contour_value(double x, int j) {
  check_args(x, j);
  if (x < 0.0)
    throw std::domain_error("kernel contour evaluation requires x >= 0");
  const int p = 2 * j + 1;
  const double alpha = 0.5 * kPi / p;
  const std::complex<double> dir(std::cos(alpha), std::sin(alpha));
  const std::complex<double> ix_dir = std::complex<double>(0.0, 1.0) * x * dir;

  // |integrand| = exp(-x s sin(alpha) - s^p); truncate at magnitude e^{-45}
  double s_max = std::pow(45.0, 1.0 / p);
  for (int it = 0; it < 100; ++it) {
    const double next = std::pow(std::max(45.0 - x * std::sin(alpha) * s_max, 1.0),
                                 1.0 / p);
    if (std::abs(next - s_max) < 1e-12 * s_max) break;
    s_max = next;
  }
  s_max = std::max(s_max, std::pow(45.0, 1.0 / p));

  const double period = x > 1e-12 ? 2.0 * kPi / (x * std::cos(alpha)) : 1e30;
  const double h = std::min({0.25, period / 6.0, s_max});

  const auto& rule = gl15();
  std::complex<double> acc(0.0, 0.0);
  double a = 0.0;
  while (a < s_max) {
    const double b = std::min(a + h, s_max);
    const double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
    std::complex<double> panel(0.0, 0.0);
    for (int i = 0; i < 15; ++i) {
      const double s = mid + rad * rule.node[i];
      panel += rule.weight[i] * std::exp(ix_dir * s - std::pow(s, p));
    }
    acc += panel * rad;
    a = b;
  }
  return dir * acc / kPi;
}

double kernel_eval_contour(double x, int j) {
  return kernel_contour_value(x, j).real();
}

KernelTable tabulate_kernel(double x_min, double x_max, double step, int j) {
  if (!(step > 0.0) || !(x_max > x_min))
    throw std::invalid_argument("tabulate_kernel: bad range");
  KernelTable table;
  table.j = j;
  const long n = std::lround((x_max - x_min) / step);
  table.x.reserve(n + 1);
  for (long i = 0; i <= n; ++i) {
    const double x = x_min + i * step;
    QuadResult r = kernel_quadrature(x, j);
    table.x.push_back(x);
    table.k.push_back(r.value);
    table.method.push_back("quad+tail");
    table.abs_err.push_back(r.abs_err);
  }
  return table;
}

namespace {

struct LinearFit {
  double intercept, slope, rms;
};

LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double det = n * sxx - sx * sx;
  LinearFit f{};
  f.slope = (n * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / n;
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - f.intercept - f.slope * xs[i];
    sse += r * r;
  }
  f.rms = std::sqrt(sse / n);
  return f;
}

}  // namespace

EnvelopeFit fit_decay_envelope(const KernelTable& table) {
  EnvelopeFit fit;
  if (table.x.empty() || table.x.front() > -40.0 + 1e-9 ||
      table.x.back() < 10.0 - 1e-9) {
    fit.note = "table must span [-40, 10]";
    return fit;
  }

  // Right tail on [2,8]: log|K| ~ A - r x^p with the oscillation-free contour
  // envelope; p scanned, (A, r) solved in closed form.
  {
    std::vector<double> xs, ys;
    for (double x = 2.0; x <= 8.0 + 1e-9; x += 0.05) {
      xs.push_back(x);
      ys.push_back(std::log(std::abs(kernel_contour_value(x, table.j))));
    }
    double best_sse = 1e300, best_p = 0.0, best_r = 0.0;
    const double n = static_cast<double>(xs.size());
    for (double p = 1.0; p <= 1.7 + 1e-12; p += 0.002) {
      double sz = 0, sy = 0, szz = 0, szy = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double z = std::pow(xs[i], p);
        sz += z;
        sy += ys[i];
        szz += z * z;
        szy += z * ys[i];
      }
      const double det = n * szz - sz * sz;
      const double slope = (n * szy - sz * sy) / det;  // = -r
      const double inter = (sy - slope * sz) / n;
      double sse = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - inter - slope * std::pow(xs[i], p);
        sse += r * r;
      }
      if (sse < best_sse) {
        best_sse = sse;
        best_p = p;
        best_r = -slope;
      }
    }
    fit.right_exponent = best_p;
    fit.right_rate = best_r;
    fit.right_residual = std::sqrt(best_sse / n);
  }

  // Left envelope on [-40,-5]: local maxima of |K| with parabolic refinement,
  // then a log-log fit of the envelope against |x|.
  {
    std::vector<double> lx, ly;
    for (std::size_t i = 1; i + 1 < table.x.size(); ++i) {
      if (table.x[i] < -40.0 || table.x[i] > -5.0) continue;
      const double m0 = std::abs(table.k[i - 1]);
      const double m1 = std::abs(table.k[i]);
      const double m2 = std::abs(table.k[i + 1]);
      if (m1 >= m0 && m1 > m2 && m1 > 1e-12) {
        const double denom = m0 - 2.0 * m1 + m2;
        double xm = table.x[i], mm = m1;
        if (denom < -1e-300) {
          const double shift = 0.5 * (m0 - m2) / denom;
          const double h = table.x[i + 1] - table.x[i];
          xm = table.x[i] + shift * h;
          mm = m1 - 0.25 * (m0 - m2) * shift;
        }
        lx.push_back(std::log(-xm));
        ly.push_back(std::log(mm));
      }
    }
    fit.left_maxima = static_cast<int>(lx.size());
    if (lx.size() < 4) {
      fit.note = "too few oscillation maxima on [-40,-5]; refine the table";
      return fit;
    }
    LinearFit lf = fit_line(lx, ly);
    fit.left_exponent = -lf.slope;
    fit.left_residual = lf.rms;
  }

  fit.ok = true;
  return fit;
}

void write_csv(const KernelTable& table, std::ostream& out) {
  out << "x,K,method,abs_err_est\n";
  out.precision(17);
  for (std::size_t i = 0; i < table.x.size(); ++i)
    out << table.x[i] << ',' << table.k[i] << ',' << table.method[i] << ','
        << table.abs_err[i] << '\n';
}

}  // namespace quintic

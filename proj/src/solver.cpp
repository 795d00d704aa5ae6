#include "quintic/solver.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace quintic {

namespace {
constexpr double kPi = 3.14159265358979323846;

bool power_of_two(int m) { return m >= 4 && (m & (m - 1)) == 0; }
}  // namespace

void Grid::validate() const {
  if (!(half_width > 0.0)) throw std::invalid_argument("grid: L must be positive");
  if (!power_of_two(m))
    throw std::invalid_argument("grid: M must be a power of two >= 4");
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
    throw std::invalid_argument("grid: dealias fraction must be in (0,1]");
}

double Grid::k_max() const { return kPi * m / (2.0 * half_width); }

ArrayXd Grid::nodes() const {
  ArrayXd x(m);
  const double h = dx();
  for (int i = 0; i < m; ++i) x[i] = -half_width + i * h;
  return x;
}

ArrayXd Grid::wavenumbers() const {
  ArrayXd k(m);
  const double base = kPi / half_width;
  for (int i = 0; i < m; ++i) k[i] = base * (i < m / 2 ? i : i - m);
  return k;
}

// ---------------------------------------------------------------------------
// NonlinearitySpec
// ---------------------------------------------------------------------------

int NonlinearitySpec::max_degree() const {
  int d = 0;
  for (const auto& t : q0) d = std::max(d, t.degree() + 1);
  for (const auto& t : q1) d = std::max(d, t.degree());
  return d;
}

double NonlinearitySpec::required_dealias_fraction() const {
  const int d = max_degree();
  return d <= 1 ? 1.0 : 2.0 / (d + 1);
}

void NonlinearitySpec::validate() const {
  for (const auto& t : q0)
    if (t.degree() < 1)
      throw std::invalid_argument("Q0 terms must have total degree >= 1");
  for (const auto& t : q1)
    if (t.degree() < 2)
      throw std::invalid_argument("Q1 terms must have total degree >= 2");
}

std::string NonlinearitySpec::describe() const {
  std::ostringstream os;
  auto mono = [&](const Term& t) {
    os << t.coeff;
    if (t.pu) os << " u^" << t.pu;
    if (t.pux) os << " ux^" << t.pux;
    if (t.puxx) os << " uxx^" << t.puxx;
  };
  bool first = true;
  for (const auto& t : q0) {
    if (!first) os << " + ";
    mono(t);
    os << " uxxx";
    first = false;
  }
  for (const auto& t : q1) {
    if (!first) os << " + ";
    mono(t);
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

NonlinearitySpec NonlinearitySpec::kdv5() {
  NonlinearitySpec s;
  s.q0 = {{1, 0, 0, 10.0}};
  s.q1 = {{1, 1, 0, 20.0}, {2, 1, 0, -30.0}};
  return s;
}

NonlinearitySpec NonlinearitySpec::benney1(double c1) {
  NonlinearitySpec s;
  s.q1 = {{1, 1, 0, c1}};
  return s;
}

NonlinearitySpec NonlinearitySpec::benney2() {
  NonlinearitySpec s;
  s.q0 = {{1, 0, 0, 1.0}};
  s.q1 = {{1, 1, 0, 2.0}};
  return s;
}

NonlinearitySpec NonlinearitySpec::lisher() {
  // (u + u^2) u_x + (1 + u)(u_x u_xx + u u_xxx)
  NonlinearitySpec s;
  s.q0 = {{1, 0, 0, 1.0}, {2, 0, 0, 1.0}};
  s.q1 = {{1, 1, 0, 1.0}, {2, 1, 0, 1.0}, {0, 1, 1, 1.0}, {1, 1, 1, 1.0}};
  return s;
}

NonlinearitySpec NonlinearitySpec::ivp17(double b1, double b2, double b3) {
  NonlinearitySpec s;
  if (b1 != 0.0) s.q0 = {{1, 0, 0, b1}};
  if (b2 != 0.0) s.q1.push_back({0, 1, 1, b2});
  if (b3 != 0.0) s.q1.push_back({2, 1, 0, b3});
  return s;
}

NonlinearitySpec NonlinearitySpec::preset(const std::string& name) {
  if (name == "linear" || name == "none") return {};
  if (name == "kdv5") return kdv5();
  if (name == "benney1") return benney1();
  if (name == "benney2") return benney2();
  if (name == "lisher") return lisher();
  if (name == "ivp17") return ivp17();
  throw std::invalid_argument("unknown preset: " + name);
}

Field make_field(const Grid& grid, const std::function<double(double)>& profile,
                 double t) {
  grid.validate();
  Field f;
  f.grid = grid;
  f.t = t;
  f.values.resize(grid.m);
  const double h = grid.dx();
  for (int i = 0; i < grid.m; ++i)
    f.values[i] = profile(-grid.half_width + i * h);
  return f;
}

// ---------------------------------------------------------------------------
// PseudoSpectral
// ---------------------------------------------------------------------------

PseudoSpectral::PseudoSpectral(const Grid& grid, const NonlinearitySpec& spec)
    : grid_(grid), spec_(spec) {
  grid_.validate();
  spec_.validate();
  k_ = grid_.wavenumbers();
  symbol_.resize(grid_.m);
  for (int i = 0; i < grid_.m; ++i) {
    const double k5 = std::pow(k_[i], 5);
    symbol_[i] = std::complex<double>(0.0, k5);
  }
  const double cut = grid_.dealias_fraction * grid_.k_max();
  mask_.resize(grid_.m);
  for (int i = 0; i < grid_.m; ++i) mask_[i] = std::abs(k_[i]) < cut ? 1.0 : 0.0;
  for (const auto& t : spec_.q1) {
    need_ux_ = need_ux_ || t.pux > 0;
    need_uxx_ = need_uxx_ || t.puxx > 0;
  }
  for (const auto& t : spec_.q0) {
    need_ux_ = need_ux_ || t.pux > 0;
    need_uxx_ = need_uxx_ || t.puxx > 0;
  }
  const int m = grid_.m;
  u_.resize(m);
  ux_.resize(m);
  uxx_.resize(m);
  uxxx_.resize(m);
  p_.resize(m);
  work_.resize(m);
  n1_.resize(m);
  n2_.resize(m);
  n3_.resize(m);
  n4_.resize(m);
  stage_.resize(m);
}

ArrayXcd PseudoSpectral::to_hat(const ArrayXd& u) {
  Eigen::VectorXcd out(grid_.m);
  Eigen::VectorXd in = u.matrix();
  fft_.fwd(out, in);
  return out.array();
}

ArrayXd PseudoSpectral::from_hat(const ArrayXcd& uhat) {
  Eigen::VectorXd out(grid_.m);
  Eigen::VectorXcd in = uhat.matrix();
  fft_.inv(out, in);
  return out.array();
}

ArrayXd PseudoSpectral::derivative(const ArrayXd& u, int order) {
  ArrayXcd uhat = to_hat(u);
  for (int i = 0; i < grid_.m; ++i) {
    std::complex<double> ik(0.0, k_[i]);
    std::complex<double> f(1.0, 0.0);
    for (int o = 0; o < order; ++o) f *= ik;
    uhat[i] *= f;
  }
  // the Nyquist mode has no well-defined odd derivative; drop it
  if (order % 2 == 1) uhat[grid_.m / 2] = 0.0;
  return from_hat(uhat);
}

void PseudoSpectral::nonlinear_hat(const ArrayXcd& uhat, ArrayXcd& out) {
  const int m = grid_.m;
  // dealiased collocation values of u and its derivatives
  work_ = uhat * mask_;
  Eigen::VectorXd real_out(m);
  Eigen::VectorXcd cplx_in = work_.matrix();
  fft_.inv(real_out, cplx_in);
  u_ = real_out.array();

  auto deriv_to = [&](int order, ArrayXd& dst) {
    for (int i = 0; i < m; ++i) {
      std::complex<double> ik(0.0, k_[i]);
      std::complex<double> f(1.0, 0.0);
      for (int o = 0; o < order; ++o) f *= ik;
      stage_[i] = work_[i] * f;
    }
    Eigen::VectorXd r(m);
    Eigen::VectorXcd c = stage_.matrix();
    fft_.inv(r, c);
    dst = r.array();
  };
  if (need_ux_) deriv_to(1, ux_);
  if (need_uxx_) deriv_to(2, uxx_);
  if (!spec_.q0.empty()) deriv_to(3, uxxx_);

  p_.setZero();
  auto accumulate = [&](const Term& t, bool with_uxxx) {
    for (int i = 0; i < m; ++i) {
      double v = t.coeff;
      for (int p = 0; p < t.pu; ++p) v *= u_[i];
      for (int p = 0; p < t.pux; ++p) v *= ux_[i];
      for (int p = 0; p < t.puxx; ++p) v *= uxx_[i];
      if (with_uxxx) v *= uxxx_[i];
      p_[i] += v;
    }
  };
  for (const auto& t : spec_.q0) accumulate(t, true);
  for (const auto& t : spec_.q1) accumulate(t, false);

  Eigen::VectorXcd phat(m);
  Eigen::VectorXd pin = p_.matrix();
  fft_.fwd(phat, pin);
  out = -phat.array() * mask_;
}

void PseudoSpectral::refresh_factors(double dt) {
  if (dt == cached_dt_) return;
  e_full_.resize(grid_.m);
  e_half_.resize(grid_.m);
  for (int i = 0; i < grid_.m; ++i) {
    e_half_[i] = std::exp(symbol_[i] * (0.5 * dt));
    e_full_[i] = e_half_[i] * e_half_[i];
  }
  cached_dt_ = dt;
}

void PseudoSpectral::step_hat(ArrayXcd& uhat, double dt) {
  refresh_factors(dt);
  if (spec_.empty()) {
    uhat *= e_full_;
    return;
  }
  nonlinear_hat(uhat, n1_);
  stage_ = e_half_ * (uhat + (0.5 * dt) * n1_);
  nonlinear_hat(stage_, n2_);
  stage_ = e_half_ * uhat + (0.5 * dt) * n2_;
  nonlinear_hat(stage_, n3_);
  stage_ = e_full_ * uhat + dt * (e_half_ * n3_);
  nonlinear_hat(stage_, n4_);
  uhat = e_full_ * uhat +
         (dt / 6.0) * (e_full_ * n1_ + 2.0 * (e_half_ * (n2_ + n3_)) + n4_);
}

Field PseudoSpectral::step(const Field& f, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  ArrayXcd uhat = to_hat(f.values);
  step_hat(uhat, dt);
  Field out;
  out.grid = f.grid;
  out.t = f.t + dt;
  out.values = from_hat(uhat);
  return out;
}

Field PseudoSpectral::evolve(const Field& f0, double T, double dt,
                             int observe_every, const Observer& observer) {
  if (!(T > 0.0) || !(dt > 0.0))
    throw std::invalid_argument("evolve: T and dt must be positive");
  const long n_steps = std::max(1L, std::lround(std::ceil(T / dt - 1e-9)));
  const double h = T / n_steps;
  ArrayXcd uhat = to_hat(f0.values);
  ArrayXd u = f0.values;
  if (observer) observer(f0.t, u);
  for (long s = 1; s <= n_steps; ++s) {
    step_hat(uhat, h);
    const bool sample = observer && ((observe_every > 0 && s % observe_every == 0) ||
                                     s == n_steps);
    if (sample || s == n_steps) {
      u = from_hat(uhat);
      if (!u.allFinite()) {
        std::ostringstream os;
        os << "evolve: NaN/overflow at step " << s << " (t=" << f0.t + s * h
           << ", dt=" << h << ")";
        throw std::runtime_error(os.str());
      }
      if (sample) observer(f0.t + s * h, u);
    }
  }
  Field out;
  out.grid = f0.grid;
  out.t = f0.t + T;
  out.values = u;
  return out;
}

double PseudoSpectral::boundary_mass_fraction(const ArrayXd& u) {
  const int m = static_cast<int>(u.size());
  const int edge = std::max(1, m / 20);
  double edge_mass = 0.0, total = 0.0;
  for (int i = 0; i < m; ++i) {
    const double v = u[i] * u[i];
    total += v;
    if (i < edge || i >= m - edge) edge_mass += v;
  }
  return total > 0.0 ? edge_mass / total : 0.0;
}

double stability_limit(const Grid& grid, const NonlinearitySpec& spec,
                       double amplitude) {
  grid.validate();
  const double kmax = grid.k_max();
  const double dt_dispersive = 2.8 / std::pow(kmax, 5);
  if (spec.empty()) return dt_dispersive;
  double q0_scale = 0.0;
  for (const auto& t : spec.q0)
    q0_scale += std::abs(t.coeff) * std::pow(std::abs(amplitude), t.degree());
  const double kcut = grid.dealias_fraction * kmax;
  const double dt_advective =
      q0_scale > 0.0 ? 2.8 / (q0_scale * kcut * kcut * kcut) : dt_dispersive;
  return std::min(dt_dispersive, dt_advective);
}

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

void write_checkpoint(const Field& f, const NonlinearitySpec& spec,
                      std::ostream& out) {
  out.precision(17);
  out << "# L " << f.grid.half_width << "\n# M " << f.grid.m << "\n# t " << f.t
      << "\n# dealias " << f.grid.dealias_fraction << "\n# P " << spec.describe()
      << "\nx,u\n";
  const double h = f.grid.dx();
  for (int i = 0; i < f.grid.m; ++i)
    out << -f.grid.half_width + i * h << ',' << f.values[i] << '\n';
}

Field read_checkpoint(std::istream& in) {
  Field f;
  std::string line;
  std::vector<double> vals;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string key;
      ls >> key;
      if (key == "L") ls >> f.grid.half_width;
      else if (key == "M") ls >> f.grid.m;
      else if (key == "t") ls >> f.t;
      else if (key == "dealias") ls >> f.grid.dealias_fraction;
      continue;
    }
    if (line == "x,u") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    vals.push_back(std::stod(line.substr(comma + 1)));
  }
  if (static_cast<int>(vals.size()) != f.grid.m)
    throw std::runtime_error("checkpoint: sample count does not match M");
  f.values = Eigen::Map<ArrayXd>(vals.data(), vals.size());
  return f;
}

}  // namespace quintic

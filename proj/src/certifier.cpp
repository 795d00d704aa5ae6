#include "quintic/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace quintic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SupTracker {
  double sup = -kInf;
  double x = 0.0, t = 0.0;
  bool finite = true;

  void update(double v, double x_, double t_) {
    if (!std::isfinite(v)) {
      finite = false;
      return;
    }
    if (v > sup) {
      sup = v;
      x = x_;
      t = t_;
    }
  }
};

struct InfTracker {
  double inf = kInf;
  double x = 0.0, t = 0.0;
  bool finite = true;

  void update(double v, double x_, double t_) {
    if (!std::isfinite(v)) {
      finite = false;
      return;
    }
    if (v < inf) {
      inf = v;
      x = x_;
      t = t_;
    }
  }
};

bool close_rel(double a, double b, double tol) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-30});
  return std::abs(a - b) <= tol * scale;
}

double angle_bracket(double x) { return std::sqrt(1.0 + x * x); }

// Enumerates the sweep points: the base x grid plus a 10x-denser pass over
// the cutoff transition zone, whose derivative peaks are the only sharp
// feature of the weight and must be resolved for refinement-stable fits.
template <typename F>
void for_each_tx(const SweepSpec& spec, double a0, int n, int refine, F&& f) {
  const double ht = spec.t_step / refine;
  const double hx = spec.x_step / refine;
  const double xmax = spec.x_max(a0, n);
  const long nt = std::lround(spec.t_max / ht);
  const long nx = std::lround((xmax - spec.x_min) / hx);
  const double fine_lo = 0.45, fine_hi = 0.80;
  const long nfine = std::lround((fine_hi - fine_lo) / (hx / 10.0));
  for (long it = 0; it <= nt; ++it) {
    const double t = it * ht;
    for (long i = 0; i <= nx; ++i) f(t, spec.x_min + i * hx);
    for (long i = 0; i <= nfine; ++i) f(t, fine_lo + i * (hx / 10.0));
  }
}

}  // namespace

double SweepSpec::x_max(double a0, int n) const {
  const double cap = std::pow(overflow_cap / a0, 0.8);
  return std::min(static_cast<double>(n) + x_margin, cap);
}

bool CertReport::all_pass() const {
  if (!defects.empty()) return false;
  for (const auto& r : records)
    if (!r.pass) return false;
  return !records.empty();
}

double CertReport::fitted(const std::string& id_prefix) const {
  double best = -kInf;
  for (const auto& r : records)
    if (r.id.rfind(id_prefix, 0) == 0) best = std::max(best, r.ratio_sup);
  return best;
}

void CertReport::append(const CertReport& other) {
  records.insert(records.end(), other.records.begin(), other.records.end());
  defects.insert(defects.end(), other.defects.begin(), other.defects.end());
}

// ---------------------------------------------------------------------------
// certify_basic: positivity, monotonicity, C^4 matching, d^5 jump
// ---------------------------------------------------------------------------

CertReport certify_basic(const SweepSpec& spec) {
  CertReport report;
  for (double a0 : spec.a0_values)
    for (double eps : spec.epsilon_values)
      for (int n : spec.n_values) {
        PiecewiseWeight pw({a0, eps, n});
        InfTracker braced_min;
        InfTracker mono_min;
        SupTracker match_err;
        InfTracker jump_min;
        bool log_ok = true;

        double cur_t = -1.0;
        std::optional<PiecewiseWeight::Slice> slice;
        for_each_tx(spec, a0, n, 1, [&](double t, double x) {
          if (t != cur_t) {
            slice.emplace(pw.at_time(t));
            cur_t = t;
            // boundary matching at x = 1 and x = N
            for (double xb : {1.0, static_cast<double>(n)}) {
              const double lvl = pw.log_value(std::nextafter(xb, 0.0), t);
              const double lvr = pw.log_value(std::nextafter(xb, 2.0 * xb + 1.0), t);
              match_err.update(std::abs(lvl - lvr) / std::max(1.0, std::abs(lvl)),
                               xb, t);
              for (int j = 1; j <= 4; ++j) {
                const double gl = pw.deriv_ratio(xb, t, j, Side::Left);
                const double gr = pw.deriv_ratio(xb, t, j, Side::Right);
                const double scale = std::max({std::abs(gl), std::abs(gr), 1e-30});
                match_err.update(std::abs(gl - gr) / scale, xb, t);
              }
            }
            const double nb = static_cast<double>(n);
            const double jl = pw.deriv_ratio(nb, t, 5, Side::Left);
            const double jr = pw.deriv_ratio(nb, t, 5, Side::Right);
            jump_min.update(jl - jr, nb, t);
          }
          const double lv = slice->log_value(x);
          if (!std::isfinite(lv)) log_ok = false;
          WeightRatios r = slice->ratios(x);
          mono_min.update(r.g[1], x, t);
          if (x > n) braced_min.update(slice->bridge().braced(x - n), x, t);
        });

        report.records.push_back({"positivity", a0, eps, n, braced_min.x,
                                  braced_min.t, braced_min.inf,
                                  braced_min.finite && log_ok && braced_min.inf > 0.0});
        report.records.push_back({"monotonicity", a0, eps, n, mono_min.x,
                                  mono_min.t, mono_min.inf,
                                  mono_min.finite && mono_min.inf >= -1e-12});
        report.records.push_back({"C4_match", a0, eps, n, match_err.x, match_err.t,
                                  match_err.sup,
                                  match_err.finite && match_err.sup <= 1e-9});
        report.records.push_back({"jump_x5", a0, eps, n, jump_min.x, jump_min.t,
                                  jump_min.inf, jump_min.finite && jump_min.inf > 0.0});
      }
  return report;
}

// ---------------------------------------------------------------------------
// certify_master_inequality
// ---------------------------------------------------------------------------

namespace {

struct MasterSweep {
  SupTracker sup;
  bool defect = false;
  double defect_x = 0.0, defect_t = 0.0;
};

MasterSweep master_sweep(const SweepSpec& spec, double a0, double eps, int n,
                         int refine) {
  PiecewiseWeight pw({a0, eps, n});
  const double q = 25.0 / (4.0 * (5.0 - eps));
  MasterSweep out;
  double cur_t = -1.0;
  std::optional<PiecewiseWeight::Slice> slice;
  for_each_tx(spec, a0, n, refine, [&](double t, double x) {
    if (t != cur_t) {
      slice.emplace(pw.at_time(t));
      cur_t = t;
    }
    WeightRatios r = slice->ratios(x);
    double L;
    if (r.g[1] == 0.0) {
      if (r.g[3] != 0.0 && !out.defect) {
        out.defect = true;
        out.defect_x = x;
        out.defect_t = t;
      }
      L = r.time + 1.5 * r.g[5];
    } else {
      L = r.time + 1.5 * r.g[5] + q * r.g[3] * r.g[3] / r.g[1];
    }
    out.sup.update(L, x, t);
  });
  return out;
}

}  // namespace

CertReport certify_master_inequality(const SweepSpec& spec) {
  CertReport report;
  for (double a0 : spec.a0_values)
    for (double eps : spec.epsilon_values)
      for (int n : spec.n_values) {
        MasterSweep base = master_sweep(spec, a0, eps, n, 1);
        bool stable = true;
        MasterSweep fine = base;
        if (spec.check_refinement) {
          fine = master_sweep(spec, a0, eps, n, 2);
          stable = close_rel(base.sup.sup, fine.sup.sup, spec.refinement_tol);
        }
        if (base.defect || fine.defect) {
          std::ostringstream os;
          os << "master: d_x phi vanishes with d_x^3 phi != 0 at x=" << base.defect_x
             << " t=" << base.defect_t << " (a0=" << a0 << ", eps=" << eps
             << ", N=" << n << ")";
          report.defects.push_back(os.str());
        }
        report.records.push_back({"A10", a0, eps, n, fine.sup.x, fine.sup.t,
                                  fine.sup.sup,
                                  base.sup.finite && fine.sup.finite && stable &&
                                      !base.defect && !fine.defect});
      }
  return report;
}

// ---------------------------------------------------------------------------
// certify_derivative_bounds
// ---------------------------------------------------------------------------

namespace {

std::array<SupTracker, 6> deriv_sweep(const SweepSpec& spec, double a0, double eps,
                                      int n, int refine) {
  PiecewiseWeight pw({a0, eps, n});
  std::array<SupTracker, 6> sups;
  double cur_t = -1.0;
  std::optional<PiecewiseWeight::Slice> slice;
  for_each_tx(spec, a0, n, refine, [&](double t, double x) {
    if (t != cur_t) {
      slice.emplace(pw.at_time(t));
      cur_t = t;
    }
    WeightRatios r = slice->ratios(x);
    const double b14 = std::pow(angle_bracket(x), 0.25);
    double w = b14;
    for (int j = 1; j <= 5; ++j) {
      sups[j].update(std::abs(r.g[j]) / w, x, t);
      w *= b14;
    }
  });
  return sups;
}

}  // namespace

CertReport certify_derivative_bounds(const SweepSpec& spec) {
  CertReport report;
  for (double a0 : spec.a0_values)
    for (double eps : spec.epsilon_values) {
      // per-N fits, then the N-uniformity aggregate
      std::array<std::vector<double>, 6> per_n;
      for (int n : spec.n_values) {
        auto base = deriv_sweep(spec, a0, eps, n, 1);
        auto fine = base;
        bool stable = true;
        if (spec.check_refinement) {
          fine = deriv_sweep(spec, a0, eps, n, 2);
          for (int j = 1; j <= 5; ++j)
            stable = stable && close_rel(base[j].sup, fine[j].sup, spec.refinement_tol);
        }
        for (int j = 1; j <= 5; ++j) {
          per_n[j].push_back(fine[j].sup);
          report.records.push_back({"A11_j" + std::to_string(j), a0, eps, n,
                                    fine[j].x, fine[j].t, fine[j].sup,
                                    base[j].finite && fine[j].finite && stable});
        }
      }
      for (int j = 1; j <= 5; ++j) {
        const double lo = *std::min_element(per_n[j].begin(), per_n[j].end());
        const double hi = *std::max_element(per_n[j].begin(), per_n[j].end());
        const double var = (hi - lo) / hi;
        report.records.push_back({"A11_j" + std::to_string(j) + "_nvar", a0, eps, 0,
                                  0.0, 0.0, var, var < 0.10});
      }
    }
  return report;
}

// ---------------------------------------------------------------------------
// certify_corollary
// ---------------------------------------------------------------------------

namespace {

SupTracker corollary_sweep(const SweepSpec& spec, double a0, double eps, int n,
                           int refine) {
  PiecewiseWeight pw({a0, eps, n});
  SupTracker sup;
  double cur_t = -1.0;
  std::optional<PiecewiseWeight::Slice> slice;
  for_each_tx(spec, a0, n, refine, [&](double t, double x) {
    if (t != cur_t) {
      slice.emplace(pw.at_time(t));
      cur_t = t;
    }
    WeightRatios r = slice->ratios(x);
    // phi / (1 + <x> d_x phi) = 1 / (1/phi + <x> g1), safe in log space
    const double ratio =
        1.0 / (std::exp(-slice->log_value(x)) + angle_bracket(x) * r.g[1]);
    sup.update(ratio, x, t);
  });
  return sup;
}

}  // namespace

CertReport certify_corollary(const SweepSpec& spec) {
  CertReport report;
  for (double a0 : spec.a0_values)
    for (double eps : spec.epsilon_values) {
      std::vector<double> per_n;
      for (int n : spec.n_values) {
        SupTracker base = corollary_sweep(spec, a0, eps, n, 1);
        SupTracker fine = base;
        bool stable = true;
        if (spec.check_refinement) {
          fine = corollary_sweep(spec, a0, eps, n, 2);
          stable = close_rel(base.sup, fine.sup, spec.refinement_tol);
        }
        per_n.push_back(fine.sup);
        report.records.push_back({"A58", a0, eps, n, fine.x, fine.t, fine.sup,
                                  base.finite && fine.finite && stable});
      }
      const double lo = *std::min_element(per_n.begin(), per_n.end());
      const double hi = *std::max_element(per_n.begin(), per_n.end());
      const double var = (hi - lo) / hi;
      report.records.push_back({"A58_nvar", a0, eps, 0, 0.0, 0.0, var, var < 0.10});
    }
  return report;
}

// ---------------------------------------------------------------------------
// certify_bridge_inequalities
// ---------------------------------------------------------------------------

namespace {

struct BridgeSweep {
  InfTracker r, r_dx, r_da, p, p_dx, s;
  bool witness = false;
  double wx = 0.0, wt = 0.0;

  void note_violation(double v, double x, double t) {
    if (v <= 0.0 && !witness) {
      witness = true;
      wx = x;
      wt = t;
    }
  }
};

BridgeSweep bridge_sweep(const SweepSpec& spec, double a0, double eps, int n,
                         int refine) {
  DecayLaw law = DecayLaw::for_epsilon(a0, eps);
  BridgeSweep out;
  const double ht = spec.t_step / refine;
  const double hx = spec.x_step / refine;
  const double dmax = spec.x_max(a0, n) - n;
  const long nt = std::lround(spec.t_max / ht);
  const long nd = std::lround(dmax / hx);
  for (long it = 0; it <= nt; ++it) {
    const double t = it * ht;
    BridgePolynomial bp(n, law.at(t));
    for (long i = 1; i <= nd; ++i) {
      const double d = i * hx;
      const double x = n + d;
      double v = bp.r_poly(d) / bp.bracket_r(d);
      out.r.update(v, x, t);
      out.note_violation(v, x, t);
      v = bp.r_poly_dx(d) / bp.bracket_r_dx(d);
      out.r_dx.update(v, x, t);
      out.note_violation(v, x, t);
      v = bp.r_poly_da(d) / bp.bracket_r_da(d);
      out.r_da.update(v, x, t);
      out.note_violation(v, x, t);
      v = bp.braced(d) / bp.bracket_p(d);
      out.p.update(v, x, t);
      out.note_violation(v, x, t);
      v = bp.braced_deriv(d, 1) / bp.bracket_p_dx(d);
      out.p_dx.update(v, x, t);
      out.note_violation(v - 1.0 + 1e-9, x, t);
      v = bp.s_poly(d) / bp.bracket_s(d);
      out.s.update(v, x, t);
      out.note_violation(v, x, t);
    }
  }
  return out;
}

void push_bridge_record(CertReport& report, const std::string& id, double a0,
                        double eps, int n, const InfTracker& base,
                        const InfTracker& fine, bool stable, double threshold) {
  report.records.push_back({id, a0, eps, n, fine.x, fine.t, fine.inf,
                            base.finite && fine.finite && stable &&
                                fine.inf > threshold});
}

}  // namespace

CertReport certify_bridge_inequalities(const SweepSpec& spec) {
  CertReport report;
  for (double a0 : spec.a0_values)
    for (double eps : spec.epsilon_values)
      for (int n : spec.n_values) {
        BridgeSweep base = bridge_sweep(spec, a0, eps, n, 1);
        BridgeSweep fine = base;
        bool stable = true;
        if (spec.check_refinement) {
          fine = bridge_sweep(spec, a0, eps, n, 2);
          stable = close_rel(base.r.inf, fine.r.inf, spec.refinement_tol) &&
                   close_rel(base.p.inf, fine.p.inf, spec.refinement_tol) &&
                   close_rel(base.s.inf, fine.s.inf, spec.refinement_tol);
        }
        if (base.witness || fine.witness) {
          std::ostringstream os;
          os << "bridge: negative slack at x=" << base.wx << " t=" << base.wt
             << " (a0=" << a0 << ", eps=" << eps << ", N=" << n << ")";
          report.defects.push_back(os.str());
        }
        push_bridge_record(report, "A34b", a0, eps, n, base.r, fine.r, stable, 0.0);
        push_bridge_record(report, "A35b", a0, eps, n, base.r_dx, fine.r_dx, stable, 0.0);
        push_bridge_record(report, "A36b", a0, eps, n, base.r_da, fine.r_da, stable, 0.0);
        push_bridge_record(report, "A37b", a0, eps, n, base.p, fine.p, stable, 0.0);
        push_bridge_record(report, "A38", a0, eps, n, base.p_dx, fine.p_dx, stable,
                           1.0 - 1e-9);
        push_bridge_record(report, "A40", a0, eps, n, base.s, fine.s, stable, 0.0);
        const double c_fit = std::min({fine.r.inf, fine.r_dx.inf, fine.r_da.inf,
                                       fine.p.inf, fine.s.inf});
        report.records.push_back(
            {"bridge_c", a0, eps, n, 0.0, 0.0, c_fit, c_fit > 0.0});
      }
  return report;
}

CertReport certify_weights(const SweepSpec& spec) {
  CertReport report = certify_basic(spec);
  report.append(certify_master_inequality(spec));
  report.append(certify_derivative_bounds(spec));
  report.append(certify_corollary(spec));
  report.append(certify_bridge_inequalities(spec));
  return report;
}

// ---------------------------------------------------------------------------
// certify_kato
// ---------------------------------------------------------------------------

namespace {

struct KatoSweep {
  SupTracker majorant;          // (3/2 |d5| + q ratio) / (beta^5 phi), worst eps
  std::array<SupTracker, 6> cj; // |dj| / (beta^j env)
  SupTracker first_rel;         // d1 / (beta phi)
  InfTracker first_min;         // d1 >= 0
  SupTracker ratio_bound;       // ratio / (beta^5 env) <= 4
};

KatoSweep kato_sweep(const KatoSweepSpec& spec, double beta, double delta,
                     int refine) {
  KatoWeight kw{beta, delta};
  KatoSweep out;
  const double hu = spec.phase_step / refine;  // phase grid in beta*x
  const long nu = std::lround((spec.phase_max - spec.phase_min) / hu);
  const double eps_max =
      *std::max_element(spec.epsilon_values.begin(), spec.epsilon_values.end());
  const double qmax = 25.0 / (4.0 * (5.0 - eps_max));
  const double b5 = std::pow(beta, 5);
  for (long i = 0; i <= nu; ++i) {
    const double x = (spec.phase_min + i * hu) / beta;
    const Jet5 jet = kw.jet(x);
    const double phi = jet.value();
    const double env = kw.envelope(x);
    const double ratio = kw.ratio3_1(x);
    double bj = beta;
    for (int j = 1; j <= 5; ++j) {
      out.cj[j].update(std::abs(jet.deriv(j)) / (bj * env), x, 0.0);
      bj *= beta;
    }
    const double d1 = jet.deriv(1);
    out.first_rel.update(d1 / (beta * phi), x, 0.0);
    out.first_min.update(d1, x, 0.0);
    out.ratio_bound.update(ratio / (b5 * env), x, 0.0);
    out.majorant.update(
        (1.5 * std::abs(jet.deriv(5)) + qmax * ratio) / (b5 * phi), x, 0.0);
  }
  return out;
}

}  // namespace

CertReport certify_kato(const KatoSweepSpec& spec) {
  CertReport report;
  for (double beta : spec.beta_values) {
    for (double delta : spec.delta_values) {
      KatoSweep base = kato_sweep(spec, beta, delta, 1);
      KatoSweep fine = base;
      bool stable = true;
      if (spec.check_refinement) {
        fine = kato_sweep(spec, beta, delta, 2);
        stable = close_rel(base.majorant.sup, fine.majorant.sup, spec.refinement_tol);
      }
      report.records.push_back({"K510", beta, delta, 0, fine.majorant.x, 0.0,
                                fine.majorant.sup,
                                base.majorant.finite && fine.majorant.finite && stable});
      report.records.push_back({"K53", beta, delta, 0, fine.first_rel.x, 0.0,
                                fine.first_rel.sup,
                                fine.first_rel.sup <= 1.0 + 1e-12 &&
                                    fine.first_min.inf >= 0.0});
      report.records.push_back({"K55", beta, delta, 0, fine.cj[2].x, 0.0,
                                fine.cj[2].sup, fine.cj[2].sup <= 1.0 + 1e-12});
      report.records.push_back({"K57", beta, delta, 0, fine.cj[3].x, 0.0,
                                fine.cj[3].sup, fine.cj[3].sup <= 2.0 + 1e-12});
      report.records.push_back({"K58_j4", beta, delta, 0, fine.cj[4].x, 0.0,
                                fine.cj[4].sup, fine.cj[4].finite});
      report.records.push_back({"K58_j5", beta, delta, 0, fine.cj[5].x, 0.0,
                                fine.cj[5].sup, fine.cj[5].finite});
      report.records.push_back({"K59", beta, delta, 0, fine.ratio_bound.x, 0.0,
                                fine.ratio_bound.sup,
                                fine.ratio_bound.sup <= 4.0 + 1e-12});
    }

    // (5.11): pointwise monotonicity in delta, and (5.12): monotone limit to
    // e^{beta x} at fixed x.
    std::vector<double> deltas = spec.delta_values;
    std::sort(deltas.begin(), deltas.end(), std::greater<double>());
    InfTracker mono;
    const double hu = spec.phase_step;
    const long nu = std::lround((spec.phase_max - spec.phase_min) / hu);
    for (std::size_t k = 0; k + 1 < deltas.size(); ++k) {
      KatoWeight big{beta, deltas[k]}, small{beta, deltas[k + 1]};
      for (long i = 0; i <= nu; ++i) {
        const double x = (spec.phase_min + i * hu) / beta;
        mono.update((small.value(x) - big.value(x)) / small.value(x), x, 0.0);
      }
    }
    report.records.push_back(
        {"K511", beta, 0.0, 0, mono.x, 0.0, mono.inf, mono.inf >= -1e-15});

    bool limit_ok = true;
    double worst_gap = 0.0;
    for (double u : {-5.0, -1.0, 0.0, 1.0, 5.0}) {
      const double x = u / beta;
      double prev = kInf;
      for (double d : deltas) {
        const double gap = 1.0 - KatoWeight{beta, d}.value(x) * std::exp(-u);
        limit_ok = limit_ok && gap >= -1e-14 && gap < prev;
        prev = gap;
      }
      worst_gap = std::max(worst_gap, prev);
    }
    report.records.push_back({"K512", beta, deltas.back(), 0, 0.0, 0.0, worst_gap,
                              limit_ok});
  }
  return report;
}

// ---------------------------------------------------------------------------

void write_csv(const CertReport& report, std::ostream& out) {
  out << "ineq_id,a0,epsilon,N,x_star,t_star,ratio_sup,pass\n";
  out.precision(17);
  for (const auto& r : report.records) {
    out << r.id << ',' << r.a0 << ',' << r.epsilon << ',' << r.n << ','
        << r.x_star << ',' << r.t_star << ',' << r.ratio_sup << ','
        << (r.pass ? 1 : 0) << '\n';
  }
}

}  // namespace quintic

#include "ccsim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ccsim/ops.hpp"
#include "ccsim/parallel.hpp"
#include "ccsim/test_functions.hpp"

namespace ccsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_positive_v(const ScalarField& v, const char* who) {
  const int n = v.grid->ncells();
  for (int k = 0; k < n; ++k) {
    if (!(v[k] > 0.0)) {
      std::ostringstream os;
      os << who << ": nonpositive signal value " << v[k] << " at cell " << k << " (i="
         << k % v.grid->n0 << ", j=" << k / v.grid->n0 << ")";
      throw std::domain_error(os.str());
    }
  }
}

void require_nonnegative_u(const ScalarField& u, const char* who) {
  const int n = u.grid->ncells();
  for (int k = 0; k < n; ++k) {
    if (u[k] < 0.0) {
      std::ostringstream os;
      os << who << ": negative density " << u[k] << " at cell " << k;
      throw std::domain_error(os.str());
    }
  }
}

DissipationTerms dissipation_terms(const ScalarField& u, const ScalarField& v,
                                   double eps, bool strict) {
  const Grid& g = *u.grid;
  const int n = g.ncells();
  DissipationTerms d;

  const std::vector<double> gsq_u = cell_gradsq(u);
  if (strict) {
    const double gmax = std::sqrt(par::max_n(n, [&](int k) {
      return gsq_u[static_cast<size_t>(k)];
    }));
    const double tol = 1e-7 * (1.0 + gmax);
    for (int k = 0; k < n; ++k) {
      if (u[k] <= 0.0 && std::sqrt(gsq_u[static_cast<size_t>(k)]) > tol) {
        std::ostringstream os;
        os << "dissipation_D: density vanishes at cell " << k
           << " but its gradient magnitude " << std::sqrt(gsq_u[static_cast<size_t>(k)])
           << " exceeds tolerance " << tol;
        throw std::domain_error(os.str());
      }
    }
  }
  d.fisher_u = par::sum_n(n, [&](int k) {
    return u[k] > 0.0 ? g.vol[static_cast<size_t>(k)] * gsq_u[static_cast<size_t>(k)] / u[k]
                      : 0.0;
  });

  ScalarField logv(g);
  par::for_n(n, [&](int k) { logv[k] = std::log(v[k]); });
  const HessField hl = hessian(logv);
  d.hess_logv = par::sum_n(n, [&](int k) {
    return g.vol[static_cast<size_t>(k)] * v[k] * hl.frobenius_sq(k);
  });

  const std::vector<double> gsq_v = cell_gradsq(v);
  d.weighted_gradv = 0.5 * par::sum_n(n, [&](int k) {
    return g.vol[static_cast<size_t>(k)] * (u[k] / (1.0 + eps * u[k])) *
           gsq_v[static_cast<size_t>(k)] / v[k];
  });
  return d;
}

// Least squares of y = beta*x + logC.
void linear_fit(const std::vector<double>& x, const std::vector<double>& y,
                double* slope, double* intercept, double* rms) {
  const size_t m = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < m; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = m * sxx - sx * sx;
  *slope = denom != 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
  *intercept = (sy - *slope * sx) / m;
  double r2 = 0;
  for (size_t i = 0; i < m; ++i) {
    const double e = y[i] - (*slope * x[i] + *intercept);
    r2 += e * e;
  }
  *rms = std::sqrt(r2 / m);
}

}  // namespace

double energy_F(const ScalarField& u, const ScalarField& v, double mu) {
  if (!u.grid || u.grid != v.grid)
    throw std::invalid_argument("energy_F: fields must share a grid");
  if (!(mu > 0.0)) throw std::invalid_argument("energy_F: mu must be positive");
  require_positive_v(v, "energy_F");
  require_nonnegative_u(u, "energy_F");
  const Grid& g = *u.grid;
  const int n = g.ncells();
  const double entropy = par::sum_n(n, [&](int k) {
    return u[k] > 0.0 ? g.vol[static_cast<size_t>(k)] * u[k] * std::log(u[k] / mu) : 0.0;
  });
  const std::vector<double> gsq = cell_gradsq(v);
  const double grad_term = 0.5 * par::sum_n(n, [&](int k) {
    return g.vol[static_cast<size_t>(k)] * gsq[static_cast<size_t>(k)] / v[k];
  });
  return entropy + grad_term;
}

DissipationTerms dissipation_D(const ScalarField& u, const ScalarField& v, double eps) {
  if (!u.grid || u.grid != v.grid)
    throw std::invalid_argument("dissipation_D: fields must share a grid");
  require_positive_v(v, "dissipation_D");
  require_nonnegative_u(u, "dissipation_D");
  return dissipation_terms(u, v, eps, /*strict=*/true);
}

double boundary_energy_term(const ScalarField& v) {
  const Grid& g = *v.grid;
  const std::vector<double> dn = boundary_normal_derivative_of_gradsq(v);
  std::vector<double> vals(dn.size());
  for (size_t b = 0; b < dn.size(); ++b) vals[b] = dn[b] / v[g.bfaces[b].cell];
  return 0.5 * boundary_integrate(g, vals);
}

double energy_residual(const SimState& before, const SimState& after, double eps,
                       double mu) {
  const double dt = after.t - before.t;
  if (!(dt > 0.0)) throw std::invalid_argument("energy_residual: states must be ordered in time");
  const double fb = energy_F(before.u, before.v, mu);
  const double fa = energy_F(after.u, after.v, mu);
  const DissipationTerms d = dissipation_D(before.u, before.v, eps);
  const double b = boundary_energy_term(before.v);
  return (fa - fb) / dt + d.total() - b;
}

BalanceReport balance_report(const SimState& s, double eps, double mu,
                             const SimState* prev) {
  const Grid& g = *s.grid;
  const int n = g.ncells();
  BalanceReport r;
  const std::vector<double> gsq_u = cell_gradsq(s.u);
  r.fisher_u = par::sum_n(n, [&](int k) {
    return s.u[k] > 0.0
               ? g.vol[static_cast<size_t>(k)] * gsq_u[static_cast<size_t>(k)] / s.u[k]
               : 0.0;
  });
  const double dev = par::sum_n(n, [&](int k) {
    return g.vol[static_cast<size_t>(k)] * std::abs(s.u[k] - mu);
  });
  r.u_dev_l1_sq = dev * dev;
  const HessField hv = hessian(s.v);
  r.hessv_over_v = par::sum_n(n, [&](int k) {
    return g.vol[static_cast<size_t>(k)] * hv.frobenius_sq(k) / s.v[k];
  });
  const std::vector<double> gsq_v = cell_gradsq(s.v);
  r.weighted_gradv = par::sum_n(n, [&](int k) {
    return g.vol[static_cast<size_t>(k)] * (s.u[k] / (1.0 + eps * s.u[k])) *
           gsq_v[static_cast<size_t>(k)] / s.v[k];
  });
  r.gradv_l1 = par::sum_n(n, [&](int k) {
    return g.vol[static_cast<size_t>(k)] * std::sqrt(gsq_v[static_cast<size_t>(k)]);
  });
  if (prev) {
    const double dt = s.t - prev->t;
    r.dF_dt = dt > 0.0 ? (energy_F(s.u, s.v, mu) - energy_F(prev->u, prev->v, mu)) / dt
                       : kNaN;
  } else {
    r.dF_dt = kNaN;
  }
  return r;
}

GrowthFit growth_fit(const Trajectory& traj, CumQuantity q, double t1, double t2) {
  if (!(t2 > t1)) throw std::invalid_argument("growth_fit: window must satisfy t1 < t2");
  auto value = [&](const DiagRecord& r) {
    switch (q) {
      case CumQuantity::UDevL1: return r.cum_u_dev_l1;
      case CumQuantity::FisherU: return r.cum_fisher_u;
      case CumQuantity::HessVSq: return r.cum_hessv_sq;
      case CumQuantity::WeightedGradV: return r.cum_weighted_gradv;
    }
    return 0.0;
  };
  std::vector<double> lt, lq;
  int in_window = 0;
  for (const DiagRecord& r : traj.records) {
    if (r.t < t1 || r.t > t2) continue;
    ++in_window;
    if (r.t > 0.0 && value(r) > 0.0) {
      lt.push_back(std::log(r.t));
      lq.push_back(std::log(value(r)));
    }
  }
  if (in_window < 10)
    throw std::invalid_argument("growth_fit: fewer than 10 records in the window");
  GrowthFit f;
  f.t1 = t1;
  f.t2 = t2;
  f.samples = static_cast<int>(lt.size());
  if (lt.empty()) {
    f.quantity_zero = true;
    f.beta = 0.0;
    f.logC = kNaN;
    return f;
  }
  linear_fit(lt, lq, &f.beta, &f.logC, &f.residual);
  return f;
}

double moment_delta_gate(double p, double delta) {
  const double a = 2.0 * p + delta * p * (p - 1.0);
  return a * a / (3.0 * p * (p - 1.0)) + p * delta - 2.0;
}

double moment_functional(const ScalarField& u, const ScalarField& v, double p,
                         double delta) {
  if (!(p > 3.0)) throw std::invalid_argument("moment_functional: requires p > 3");
  const double gate = moment_delta_gate(p, delta);
  if (gate > 0.0) {
    std::ostringstream os;
    os << "moment_functional: delta gate violated for p=" << p << ", delta=" << delta
       << " (gate value " << gate << " > 0)";
    throw std::invalid_argument(os.str());
  }
  const double vmax = max_value(v);
  if (!(vmax < 0.5 * delta)) {
    std::ostringstream os;
    os << "moment_functional: requires max v < delta/2 (max v = " << vmax
       << ", delta/2 = " << 0.5 * delta << ")";
    throw std::invalid_argument(os.str());
  }
  require_nonnegative_u(u, "moment_functional");
  const Grid& g = *u.grid;
  return par::sum_n(g.ncells(), [&](int k) {
    return g.vol[static_cast<size_t>(k)] * std::pow(u[k] + 1.0, p) / (delta - v[k]);
  });
}

std::pair<double, double> weak_residual(const Trajectory& traj, const WeakTestFn& phi) {
  if (!traj.grid) throw std::invalid_argument("weak_residual: trajectory has no grid");
  if (traj.snapshots.size() < 2)
    throw std::invalid_argument("weak_residual: trajectory must keep at least two snapshots");
  const Grid& g = *traj.grid;
  const int n = g.ncells();
  const int n0 = g.n0;
  const double eps = traj.eps;
  const bool two = g.dim == 2;

  auto coord = [&](int k, double* a, double* b) {
    *a = g.c0[static_cast<size_t>(k % n0)];
    *b = two ? g.c1[static_cast<size_t>(k / n0)] : 0.0;
  };

  // phi must vanish at the final sample (compact support in time).
  {
    const double tN = traj.snapshots.back().t;
    double m0 = 0, mN = 0;
    for (int k = 0; k < n; ++k) {
      double a, b;
      coord(k, &a, &b);
      m0 = std::max(m0, std::abs(phi.value(traj.snapshots.front().t, a, b)));
      mN = std::max(mN, std::abs(phi.value(tN, a, b)));
    }
    if (mN > 1e-12 * (1.0 + m0))
      throw std::invalid_argument(
          "weak_residual: test function does not vanish at the final sample");
  }

  const size_t ns = traj.snapshots.size();
  std::vector<double> ut_phi(ns), gu_gphi(ns), flux_gphi(ns), vt_phi(ns), gv_gphi(ns),
      cons_phi(ns);
  for (size_t m = 0; m < ns; ++m) {
    const Snapshot& sn = traj.snapshots[m];
    std::vector<double> gu0, gu1, gv0, gv1;
    cell_gradient(sn.u, gu0, gu1);
    cell_gradient(sn.v, gv0, gv1);
    ut_phi[m] = par::sum_n(n, [&](int k) {
      double a, b;
      coord(k, &a, &b);
      return g.vol[static_cast<size_t>(k)] * sn.u[k] * phi.d_t(sn.t, a, b);
    });
    vt_phi[m] = par::sum_n(n, [&](int k) {
      double a, b;
      coord(k, &a, &b);
      return g.vol[static_cast<size_t>(k)] * sn.v[k] * phi.d_t(sn.t, a, b);
    });
    auto grad_dot = [&](const std::vector<double>& f0, const std::vector<double>& f1,
                        int k) {
      double a, b;
      coord(k, &a, &b);
      double s = f0[static_cast<size_t>(k)] * phi.d0(sn.t, a, b);
      if (two) s += f1[static_cast<size_t>(k)] * phi.d1(sn.t, a, b);
      return s;
    };
    gu_gphi[m] = par::sum_n(n, [&](int k) {
      return g.vol[static_cast<size_t>(k)] * grad_dot(gu0, gu1, k);
    });
    gv_gphi[m] = par::sum_n(n, [&](int k) {
      return g.vol[static_cast<size_t>(k)] * grad_dot(gv0, gv1, k);
    });
    flux_gphi[m] = par::sum_n(n, [&](int k) {
      const double u = sn.u[k];
      const double d = 1.0 + eps * u;
      return g.vol[static_cast<size_t>(k)] * (u / (d * d)) * grad_dot(gv0, gv1, k);
    });
    cons_phi[m] = par::sum_n(n, [&](int k) {
      double a, b;
      coord(k, &a, &b);
      const double u = sn.u[k];
      return g.vol[static_cast<size_t>(k)] * (u * sn.v[k] / (1.0 + eps * u)) *
             phi.value(sn.t, a, b);
    });
  }

  auto trapz = [&](const std::vector<double>& f) {
    double s = 0;
    for (size_t m = 0; m + 1 < ns; ++m)
      s += 0.5 * (f[m] + f[m + 1]) * (traj.snapshots[m + 1].t - traj.snapshots[m].t);
    return s;
  };

  double u0_phi0 = 0, v0_phi0 = 0;
  {
    const Snapshot& s0 = traj.snapshots.front();
    u0_phi0 = par::sum_n(n, [&](int k) {
      double a, b;
      coord(k, &a, &b);
      return g.vol[static_cast<size_t>(k)] * s0.u[k] * phi.value(s0.t, a, b);
    });
    v0_phi0 = par::sum_n(n, [&](int k) {
      double a, b;
      coord(k, &a, &b);
      return g.vol[static_cast<size_t>(k)] * s0.v[k] * phi.value(s0.t, a, b);
    });
  }

  const double res_u = -trapz(ut_phi) - u0_phi0 + trapz(gu_gphi) - trapz(flux_gphi);
  const double res_v = -trapz(vt_phi) - v0_phi0 + trapz(gv_gphi) + trapz(cons_phi);
  return {res_u, res_v};
}

ConvergenceReport convergence_report(const Trajectory& traj) {
  if (traj.records.size() < 4)
    throw std::invalid_argument("convergence_report: too few records");
  ConvergenceReport rep;
  rep.thresholds = {1e-1, 1e-2, 1e-3};
  for (const DiagRecord& r : traj.records) {
    rep.t.push_back(r.t);
    rep.u_dev_linf.push_back(r.u_dev_linf);
    rep.v_linf.push_back(r.v_linf);
  }
  const double v0 = rep.v_linf.front();
  double v_final = 0;
  for (size_t i = rep.v_linf.size(); i-- > 0;) {
    if (rep.v_linf[i] > 0.0) {
      v_final = rep.v_linf[i];
      break;
    }
  }
  if (!(v_final < 0.5 * v0))
    throw std::invalid_argument(
        "convergence_report: run too short (max v has not halved)");

  // Exponential-rate fit over the final decade of max v.
  std::vector<double> ft, fy;
  for (size_t i = 0; i < rep.t.size(); ++i) {
    if (rep.v_linf[i] > 0.0 && rep.v_linf[i] <= 10.0 * v_final) {
      ft.push_back(rep.t[i]);
      fy.push_back(std::log(rep.v_linf[i]));
    }
  }
  if (ft.size() < 3) {
    // Degenerate decade (coarse cadence): fall back to the last quarter.
    ft.clear();
    fy.clear();
    const size_t start = rep.t.size() - std::max<size_t>(3, rep.t.size() / 4);
    for (size_t i = start; i < rep.t.size(); ++i) {
      if (rep.v_linf[i] > 0.0) {
        ft.push_back(rep.t[i]);
        fy.push_back(std::log(rep.v_linf[i]));
      }
    }
  }
  double slope = 0, intercept = 0, rms = 0;
  linear_fit(ft, fy, &slope, &intercept, &rms);
  rep.v_rate = -slope;
  rep.rate_t1 = ft.front();
  rep.rate_t2 = ft.back();

  auto first_passage = [&](const std::vector<double>& series, double thr) {
    for (size_t i = 0; i < series.size(); ++i)
      if (series[i] < thr) return rep.t[i];
    return kNaN;
  };
  for (double thr : rep.thresholds) {
    rep.t_pass_u.push_back(first_passage(rep.u_dev_linf, thr));
    rep.t_pass_v.push_back(first_passage(rep.v_linf, thr));
  }
  return rep;
}

double measure_poincare_l1(const Grid& g, int nsamples, uint64_t seed) {
  double worst = 0.0;
  for (int i = 0; i < nsamples; ++i) {
    TestFnKind kind = g.geom == Geometry::Rectangle
                          ? (i % 2 == 0 ? TestFnKind::LowFourierPositive
                                        : TestFnKind::BumpPlusFloor)
                          : static_cast<TestFnKind>(i % 3);
    const ScalarField psi = gen_test_function(seed + static_cast<uint64_t>(i), g, kind);
    const double mean = integrate(psi) / g.volume;
    const int n = g.ncells();
    const double dev = par::sum_n(n, [&](int k) {
      return g.vol[static_cast<size_t>(k)] * std::abs(psi[k] - mean);
    });
    const std::vector<double> gsq = cell_gradsq(psi);
    const double g1 = par::sum_n(n, [&](int k) {
      return g.vol[static_cast<size_t>(k)] * std::sqrt(gsq[static_cast<size_t>(k)]);
    });
    if (g1 > 0.0) worst = std::max(worst, dev / g1);
  }
  return worst;
}

const std::vector<std::string>& diag_columns() {
  static const std::vector<std::string> cols = {
      "step",          "t",
      "dt",            "mass",
      "v_l1",          "v_l2",
      "v_linf",        "energy",
      "diss_fisher_u", "diss_hess_logv",
      "diss_weighted_gradv", "boundary_term",
      "energy_residual", "u_dev_l1",
      "u_dev_linf",    "u_power",
      "gradu_power",   "flux_power",
      "weighted_gradv_sq", "cum_gradv_sq",
      "cum_consumption", "cum_consumed_exact",
      "cum_u_dev_l1",  "cum_fisher_u",
      "cum_hessv_sq",  "cum_weighted_gradv",
      "moment",        "clipped_mass",
      "floored_v_mass"};
  return cols;
}

DiagRecord make_record(const SimState& s, const SimParams& p, double dt_in_effect,
                       const DiagRecord* prev) {
  const Grid& g = *s.grid;
  const int n = g.ncells();
  DiagRecord r;
  r.step = s.step;
  r.t = s.t;
  r.dt = dt_in_effect;
  r.mass = integrate(s.u);
  r.v_l1 = norm_l1(s.v);
  r.v_l2 = norm_l2(s.v);
  r.v_linf = norm_linf(s.v);

  const double mu = p.mu;
  r.u_dev_l1 = par::sum_n(n, [&](int k) {
    return g.vol[static_cast<size_t>(k)] * std::abs(s.u[k] - mu);
  });
  r.u_dev_linf = par::max_n(n, [&](int k) { return std::abs(s.u[k] - mu); });

  const double dim = static_cast<double>(g.dim);
  const double pw_u = (dim + 2.0) / dim;
  const double pw_q = (dim + 2.0) / (dim + 1.0);
  r.u_power = par::sum_n(n, [&](int k) {
    return s.u[k] > 0.0 ? g.vol[static_cast<size_t>(k)] * std::pow(s.u[k], pw_u) : 0.0;
  });
  const std::vector<double> gsq_u = cell_gradsq(s.u);
  r.gradu_power = par::sum_n(n, [&](int k) {
    const double m = std::sqrt(gsq_u[static_cast<size_t>(k)]);
    return m > 0.0 ? g.vol[static_cast<size_t>(k)] * std::pow(m, pw_q) : 0.0;
  });
  const std::vector<double> gsq_v = cell_gradsq(s.v);
  r.flux_power = par::sum_n(n, [&](int k) {
    const double u = s.u[k];
    const double d = 1.0 + p.eps * u;
    const double m = (u / (d * d)) * std::sqrt(gsq_v[static_cast<size_t>(k)]);
    return m > 0.0 ? g.vol[static_cast<size_t>(k)] * std::pow(m, pw_q) : 0.0;
  });
  r.weighted_gradv_sq = par::sum_n(n, [&](int k) {
    return g.vol[static_cast<size_t>(k)] * (s.u[k] / (1.0 + p.eps * s.u[k])) *
           gsq_v[static_cast<size_t>(k)];
  });

  const double vmin = min_value(s.v);
  if (vmin > 0.0) {
    const double entropy_term = par::sum_n(n, [&](int k) {
      return s.u[k] > 0.0
                 ? g.vol[static_cast<size_t>(k)] * s.u[k] * std::log(s.u[k] / mu)
                 : 0.0;
    });
    const double grad_term = 0.5 * par::sum_n(n, [&](int k) {
      return g.vol[static_cast<size_t>(k)] * gsq_v[static_cast<size_t>(k)] / s.v[k];
    });
    r.energy = entropy_term + grad_term;
    const DissipationTerms d = dissipation_terms(s.u, s.v, p.eps, /*strict=*/false);
    r.diss_fisher_u = d.fisher_u;
    r.diss_hess_logv = d.hess_logv;
    r.diss_weighted_gradv = d.weighted_gradv;
    r.boundary_term = boundary_energy_term(s.v);
    r.moment = (p.moment_enabled && r.v_linf < 0.5 * p.moment_delta)
                   ? moment_functional(s.u, s.v, p.moment_p, p.moment_delta)
                   : kNaN;
  } else {
    r.energy = kNaN;
    r.diss_fisher_u = par::sum_n(n, [&](int k) {
      return s.u[k] > 0.0
                 ? g.vol[static_cast<size_t>(k)] * gsq_u[static_cast<size_t>(k)] / s.u[k]
                 : 0.0;
    });
    r.diss_hess_logv = kNaN;
    r.diss_weighted_gradv = kNaN;
    r.boundary_term = kNaN;
    r.moment = kNaN;
  }

  r.cum_gradv_sq = s.cum_gradv_sq;
  r.cum_consumption = s.cum_consumption;
  r.cum_consumed_exact = s.consumed_v_mass;
  r.cum_u_dev_l1 = s.cum_u_dev_l1;
  r.cum_fisher_u = s.cum_fisher_u;
  r.cum_hessv_sq = s.cum_hessv_sq;
  r.cum_weighted_gradv = s.cum_weighted_gradv;
  r.clipped_mass = s.clipped_mass;
  r.floored_v_mass = s.floored_v_mass;

  if (prev && std::isfinite(prev->energy) && std::isfinite(r.energy) &&
      r.t > prev->t) {
    const double d_prev =
        prev->diss_fisher_u + prev->diss_hess_logv + prev->diss_weighted_gradv;
    r.energy_residual =
        (r.energy - prev->energy) / (r.t - prev->t) + d_prev - prev->boundary_term;
  } else {
    r.energy_residual = kNaN;
  }
  return r;
}

}  // namespace ccsim

#include "ccsim/solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ccsim/diagnostics.hpp"
#include "ccsim/io.hpp"
#include "ccsim/linsolve.hpp"
#include "ccsim/ops.hpp"
#include "ccsim/parallel.hpp"

namespace ccsim {

namespace {

[[noreturn]] void fail(const SimState& s, const std::string& what) {
  std::ostringstream os;
  os << "solver: " << what << " (t=" << s.t << ", step=" << s.step << ")";
  throw std::runtime_error(os.str());
}

double chemo_coeff(double u, double eps) {
  const double d = 1.0 + eps * u;
  return u / (d * d);
}

// Pre-step accumulation of the six left-endpoint time integrals.
void accumulate_integrals(SimState& s, double eps, double mu, double dt,
                          const FaceField& gu, const FaceField& gv) {
  const Grid& g = *s.grid;
  const int n0 = g.n0, n1 = g.n1, n = g.ncells();
  const bool two = g.dim == 2;
  auto avg0 = [&](const FaceField& ff, int i, int j) {
    return 0.5 * (ff.f0[static_cast<size_t>(ff.i0(i, j))] +
                  ff.f0[static_cast<size_t>(ff.i0(i + 1, j))]);
  };
  auto avg1 = [&](const FaceField& ff, int i, int j) {
    const int jhi = g.periodic1 ? (j + 1) % n1 : j + 1;
    return 0.5 * (ff.f1[static_cast<size_t>(ff.i1(i, j))] +
                  ff.f1[static_cast<size_t>(ff.i1(i, jhi))]);
  };
  auto gsq_of = [&](const FaceField& ff, int c) {
    const int j = c / n0, i = c % n0;
    const double a = avg0(ff, i, j);
    const double b = two ? avg1(ff, i, j) : 0.0;
    return a * a + b * b;
  };

  s.cum_gradv_sq += dt * par::sum_n(n, [&](int c) {
    return g.vol[static_cast<size_t>(c)] * gsq_of(gv, c);
  });
  s.cum_consumption += dt * par::sum_n(n, [&](int c) {
    const double u = s.u[c];
    return g.vol[static_cast<size_t>(c)] * u * s.v[c] / (1.0 + eps * u);
  });
  s.cum_u_dev_l1 += dt * par::sum_n(n, [&](int c) {
    return g.vol[static_cast<size_t>(c)] * std::abs(s.u[c] - mu);
  });
  s.cum_fisher_u += dt * par::sum_n(n, [&](int c) {
    const double u = s.u[c];
    return u > 0.0 ? g.vol[static_cast<size_t>(c)] * gsq_of(gu, c) / u : 0.0;
  });
  const HessField hv = hessian(s.v);
  s.cum_hessv_sq += dt * par::sum_n(n, [&](int c) {
    return g.vol[static_cast<size_t>(c)] * hv.frobenius_sq(c);
  });
  s.cum_weighted_gradv += dt * par::sum_n(n, [&](int c) {
    const double gsq = gsq_of(gv, c);
    if (gsq == 0.0) return 0.0;
    const double u = s.u[c];
    return g.vol[static_cast<size_t>(c)] * (u / (1.0 + eps * u)) * gsq / s.v[c];
  });
}

FaceField flux_from_gradients(const SimState& s, double eps, const FaceField& gu,
                              const FaceField& gv) {
  const Grid& g = *s.grid;
  FaceField fl(g);
  const int n0 = g.n0, n1 = g.n1;
  // Interior axis-0 faces; boundary faces stay zero.
  par::for_n(n1 * (n0 - 1), [&](int k) {
    const int j = k / (n0 - 1);
    const int i = 1 + k % (n0 - 1);
    const size_t f = static_cast<size_t>(fl.i0(i, j));
    const double gvn = gv.f0[f];
    const int donor = gvn > 0.0 ? g.idx(i - 1, j) : g.idx(i, j);
    fl.f0[f] = gu.f0[f] - chemo_coeff(s.u[donor], eps) * gvn;
  });
  if (g.dim == 2) {
    if (g.periodic1) {
      par::for_n(n0 * n1, [&](int k) {
        const int j = k / n0, i = k % n0;
        const size_t f = static_cast<size_t>(fl.i1(i, j));
        const double gvn = gv.f1[f];
        const int jm = (j + n1 - 1) % n1;
        const int donor = gvn > 0.0 ? g.idx(i, jm) : g.idx(i, j);
        fl.f1[f] = gu.f1[f] - chemo_coeff(s.u[donor], eps) * gvn;
      });
    } else {
      par::for_n(n0 * (n1 - 1), [&](int k) {
        const int j = 1 + k / n0, i = k % n0;
        const size_t f = static_cast<size_t>(fl.i1(i, j));
        const double gvn = gv.f1[f];
        const int donor = gvn > 0.0 ? g.idx(i, j - 1) : g.idx(i, j);
        fl.f1[f] = gu.f1[f] - chemo_coeff(s.u[donor], eps) * gvn;
      });
    }
  }
  return fl;
}

}  // namespace

FaceField flux_u(const SimState& s, double eps) {
  return flux_from_gradients(s, eps, gradient(s.u), gradient(s.v));
}

double cfl_dt(const SimState& s, double eps, const DtPolicy& policy) {
  if (!(policy.safety > 0.0) || policy.safety > 1.0)
    throw std::invalid_argument("cfl_dt: safety must lie in (0,1]");
  const Grid& g = *s.grid;
  const FaceField gv = gradient(s.v);
  const int n0 = g.n0, n1 = g.n1;
  auto vel = [&](double gvn, int donor) {
    const double d = 1.0 + eps * s.u[donor];
    return std::abs(gvn) / (d * d);
  };
  double vmax = par::max_n(n1 * (n0 - 1), [&](int k) {
    const int j = k / (n0 - 1);
    const int i = 1 + k % (n0 - 1);
    const double gvn = gv.f0[static_cast<size_t>(gv.i0(i, j))];
    return vel(gvn, gvn > 0.0 ? g.idx(i - 1, j) : g.idx(i, j));
  });
  if (g.dim == 2) {
    double v1 = 0.0;
    if (g.periodic1) {
      v1 = par::max_n(n0 * n1, [&](int k) {
        const int j = k / n0, i = k % n0;
        const double gvn = gv.f1[static_cast<size_t>(gv.i1(i, j))];
        return vel(gvn, gvn > 0.0 ? g.idx(i, (j + n1 - 1) % n1) : g.idx(i, j));
      });
    } else {
      v1 = par::max_n(n0 * (n1 - 1), [&](int k) {
        const int j = 1 + k / n0, i = k % n0;
        const double gvn = gv.f1[static_cast<size_t>(gv.i1(i, j))];
        return vel(gvn, gvn > 0.0 ? g.idx(i, j - 1) : g.idx(i, j));
      });
    }
    vmax = vmax > v1 ? vmax : v1;
  }
  const double h = g.min_spacing();
  double dt = h * h / (2.0 * g.dim);
  if (vmax > 0.0) {
    const double adv = h / vmax;
    if (adv < dt) dt = adv;
  }
  dt *= policy.safety;
  return dt < policy.dt_max ? dt : policy.dt_max;
}

SimState make_state(const Grid& g, const InitialPair& init) {
  SimState s;
  s.grid = &g;
  s.u = init.u0;
  s.v = init.v0;
  return s;
}

void step(SimState& s, const SimParams& p, double dt) {
  if (!(dt > 0.0)) fail(s, "nonpositive dt");
  const Grid& g = *s.grid;
  const int n = g.ncells();
  const double eps = p.eps;

  const FaceField gu = gradient(s.u);
  const FaceField gv = gradient(s.v);
  accumulate_integrals(s, eps, p.mu, dt, gu, gv);

  // --- u stage: explicit conservative update -------------------------------
  const FaceField fl = flux_from_gradients(s, eps, gu, gv);
  const ScalarField divf = divergence(fl);
  ScalarField unew(g);
  par::for_n(n, [&](int k) { unew[k] = s.u[k] + dt * divf[k]; });

  // Clip at zero; remove the created mass from positive cells proportionally
  // so the total is exactly what the conservative update produced.
  const double mass_neg = par::sum_n(n, [&](int k) {
    return unew[k] < 0.0 ? -g.vol[static_cast<size_t>(k)] * unew[k] : 0.0;
  });
  if (mass_neg > 0.0) {
    const double mass_pos = par::sum_n(n, [&](int k) {
      return unew[k] > 0.0 ? g.vol[static_cast<size_t>(k)] * unew[k] : 0.0;
    });
    if (!(mass_pos > mass_neg)) fail(s, "clipping would exhaust positive mass");
    const double scale = (mass_pos - mass_neg) / mass_pos;
    par::for_n(n, [&](int k) { unew[k] = unew[k] > 0.0 ? unew[k] * scale : 0.0; });
    s.clipped_mass += mass_neg;
  }

  // --- v stage: implicit diffusion, then exact reaction ---------------------
  ScalarField vtil(g);
  const CgResult cg = solve_implicit_diffusion(s.v, dt, vtil, p.cg_tol, p.cg_maxit);
  if (!cg.converged) {
    std::ostringstream os;
    os << "implicit diffusion solve failed to converge (iterations=" << cg.iterations
       << ", rel_residual=" << cg.rel_residual << ")";
    fail(s, os.str());
  }
  // The discrete diffusion conserves signal mass; shift out the solver's
  // residual-level drift so the budget identities telescope exactly.
  const double v_mass_pre = integrate(s.v);
  const double shift = (v_mass_pre - integrate(vtil)) / g.volume;
  par::for_n(n, [&](int k) { vtil[k] += shift; });

  const double vmax_til = max_value(vtil);
  const double vmin_til = min_value(vtil);
  if (vmin_til < 0.0) {
    if (vmin_til < -1e-12 * (vmax_til > 0.0 ? vmax_til : 1.0))
      fail(s, "implicit diffusion produced negative signal beyond tolerance");
    double added = 0.0;
    for (int k = 0; k < n; ++k) {
      if (vtil[k] < 0.0) {
        added += -g.vol[static_cast<size_t>(k)] * vtil[k];
        vtil[k] = 0.0;
      }
    }
    s.floored_v_mass += added;
  }

  ScalarField vnew(g);
  par::for_n(n, [&](int k) {
    const double u = unew[k];
    vnew[k] = vtil[k] * std::exp(-dt * u / (1.0 + eps * u));
  });
  s.consumed_v_mass += integrate(vtil) - integrate(vnew);

  const double umass = par::sum_n(n, [&](int k) {
    return g.vol[static_cast<size_t>(k)] * unew[k];
  });
  const double vmass = integrate(vnew);
  if (!std::isfinite(umass) || !std::isfinite(vmass)) fail(s, "NaN detected after step");

  s.u = std::move(unew);
  s.v = std::move(vnew);
  s.t += dt;
  s.step += 1;
}

Trajectory run(const Grid& g, const InitialPair& init, const SimParams& p,
               SimState* final_state, const RecordHook& hook) {
  if (!(p.eps > 0.0) || !(p.eps < 1.0))
    throw std::invalid_argument("run: eps must lie in (0,1)");
  if (!(p.t_end > 0.0)) throw std::invalid_argument("run: t_end must be positive");
  if (p.diag_cadence < 1) throw std::invalid_argument("run: diag_cadence must be >= 1");
  if (p.dt_policy.kind == DtPolicy::Kind::Fixed && !(p.dt_policy.dt > 0.0))
    throw std::invalid_argument("run: fixed dt must be positive");
  if (p.moment_enabled) {
    const double gate = moment_delta_gate(p.moment_p, p.moment_delta);
    if (gate > 0.0) {
      std::ostringstream os;
      os << "run: moment functional gate violated for p=" << p.moment_p
         << ", delta=" << p.moment_delta << " (gate value " << gate << " > 0)";
      throw std::invalid_argument(os.str());
    }
  }

  SimParams pp = p;
  pp.mu = init.mu;
  SimState s = make_state(g, init);

  Trajectory traj;
  traj.grid = &g;
  traj.eps = p.eps;
  traj.mu = init.mu;

  auto record = [&](double dt_in_effect) {
    const DiagRecord* prev = traj.records.empty() ? nullptr : &traj.records.back();
    DiagRecord r = make_record(s, pp, dt_in_effect, prev);
    traj.records.push_back(r);
    if (pp.keep_snapshots) traj.snapshots.push_back(Snapshot{s.t, s.u, s.v});
    if (hook) hook(s, r);
  };

  record(0.0);
  const double t_tol = 1e-12 * p.t_end;
  while (p.t_end - s.t > t_tol) {
    double dt = p.dt_policy.kind == DtPolicy::Kind::Fixed ? p.dt_policy.dt
                                                          : cfl_dt(s, p.eps, p.dt_policy);
    bool last = false;
    if (s.t + dt >= p.t_end - t_tol) {
      dt = p.t_end - s.t;
      last = true;
    }
    try {
      step(s, pp, dt);
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "run aborted at t=" << s.t << ": " << e.what();
      throw std::runtime_error(os.str());
    }
    if (last || s.step % pp.diag_cadence == 0) record(dt);
  }
  if (final_state) *final_state = s;
  return traj;
}

void save_checkpoint(const std::string& dir, const SimState& s) {
  write_field_binary(dir + "/u.ccf", s.u, s.t);
  write_field_binary(dir + "/v.ccf", s.v, s.t);
  std::vector<std::pair<std::string, double>> row = {
      {"step", static_cast<double>(s.step)},
      {"t", s.t},
      {"cum_gradv_sq", s.cum_gradv_sq},
      {"cum_consumption", s.cum_consumption},
      {"cum_u_dev_l1", s.cum_u_dev_l1},
      {"cum_fisher_u", s.cum_fisher_u},
      {"cum_hessv_sq", s.cum_hessv_sq},
      {"cum_weighted_gradv", s.cum_weighted_gradv},
      {"consumed_v_mass", s.consumed_v_mass},
      {"clipped_mass", s.clipped_mass},
      {"floored_v_mass", s.floored_v_mass},
  };
  write_scalar_csv(dir + "/meta.csv", row);
}

SimState load_checkpoint(const std::string& dir, const Grid& g) {
  SimState s;
  s.grid = &g;
  double tu = 0, tv = 0;
  s.u = read_field_binary(dir + "/u.ccf", g, &tu);
  s.v = read_field_binary(dir + "/v.ccf", g, &tv);
  const auto row = read_scalar_csv(dir + "/meta.csv");
  auto get = [&](const std::string& key) {
    for (const auto& kv : row)
      if (kv.first == key) return kv.second;
    throw std::runtime_error("checkpoint meta.csv missing key: " + key);
  };
  s.step = static_cast<int64_t>(get("step"));
  s.t = get("t");
  if (s.t != tu || s.t != tv)
    throw std::runtime_error("checkpoint time mismatch between meta.csv and field files");
  s.cum_gradv_sq = get("cum_gradv_sq");
  s.cum_consumption = get("cum_consumption");
  s.cum_u_dev_l1 = get("cum_u_dev_l1");
  s.cum_fisher_u = get("cum_fisher_u");
  s.cum_hessv_sq = get("cum_hessv_sq");
  s.cum_weighted_gradv = get("cum_weighted_gradv");
  s.consumed_v_mass = get("consumed_v_mass");
  s.clipped_mass = get("clipped_mass");
  s.floored_v_mass = get("floored_v_mass");
  return s;
}

}  // namespace ccsim

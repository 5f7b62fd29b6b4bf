#include "conefrac/stepper.hpp"

#include <cmath>

#include "conefrac/material.hpp"

namespace conefrac::stepper {

double MuSchedule::mu(int i) const { return mu_init * std::pow(rho, i); }

StepResult solve_step(const assembly::System& sys, int tau,
                      const Eigen::VectorXd& u_in, const Eigen::VectorXd& v_in,
                      const Eigen::VectorXd& d_in, PreprocessCache& cache,
                      SolveFlag flag, const SolverParams& p) {
  const bool preprocess = flag == SolveFlag::kPreprocess;
  const double t_mid = (tau - 0.5) * sys.dt;

  objectives::StepContext ctx;
  ctx.sys = &sys;
  ctx.u_prev = u_in;
  ctx.v_prev = v_in;
  ctx.u_bc = sys.bc.u_bc(t_mid);
  ctx.d = d_in;

  if (cache.h_mu.empty()) cache.h_mu.resize(p.mu.n);
  if (static_cast<int>(cache.h_mu.size()) != p.mu.n)
    throw StepError("preprocess cache sized for a different mu schedule");

  const double mu1 = p.mu.mu(0);
  double R = p.r_init;
  StepResult out;

  // Phase I: find a strictly feasible start.  Warm-started across big-M
  // escalations; only the Mt term changes, so the previous minimizer stays
  // in the barrier domain.
  double big_m = p.big_m_init;
  Eigen::VectorXd xibar(sys.n_dofs() + sys.n_gp() + 1);
  xibar.head(sys.n_dofs()) = u_in;
  xibar.segment(sys.n_dofs(), sys.n_gp()) =
      objectives::optimal_s0(ctx, u_in, mu1,
                             mu1 * std::sqrt(big_m));
  xibar[sys.n_dofs() + sys.n_gp()] =
      objectives::optimal_t(ctx, u_in, mu1, big_m);

  Eigen::VectorXd x, s0;
  bool feasible = false;
  for (int esc = 0; esc <= p.max_escalations; ++esc) {
    objectives::Phase1Objective f1(ctx, mu1, big_m);
    auto res = trustregion::minimize(f1, xibar, cache.h_phase1, R, p.tr);
    xibar = res.xi;
    R = res.R;
    out.diag.phase1_stats = res.stats;

    const Eigen::VectorXd u1 = xibar.head(sys.n_dofs());
    s0 = xibar.segment(sys.n_dofs(), sys.n_gp());
    const double t = xibar[sys.n_dofs() + sys.n_gp()];
    out.diag.phase1_t.push_back(t);
    x = sys.bc.to_free(u1, ctx.u_bc);

    if (objectives::phase2_feasible(ctx, x, s0, p.handoff_margin)) {
      feasible = true;
      if (preprocess) {
        double dummy;
        cache.h_phase1.resize(0, 0);
        Eigen::SparseMatrix<double> H;
        f1.eval(xibar, dummy, nullptr, &H);
        cache.h_phase1 = H;
      }
      break;
    }
    out.diag.phase1_escalations = esc + 1;
    big_m *= p.big_m_factor;
  }
  if (!feasible)
    throw StepError("step " + std::to_string(tau) +
                    ": phase 1 found no feasible start after " +
                    std::to_string(p.max_escalations) + " big-M escalations");

  // Phase II: mu continuation from the projected Phase-I point.
  Eigen::VectorXd xi(x.size() + s0.size());
  xi << x, s0;
  for (int i = 0; i < p.mu.n; ++i) {
    const double mu = p.mu.mu(i);
    const double alpha = preprocess ? mu1 : mu;
    objectives::Phase2Objective f2(ctx, mu, alpha);
    auto res = trustregion::minimize(f2, xi, cache.h_mu[i], R, p.tr);
    xi = res.xi;
    R = res.R;
    out.diag.phase2_stats.push_back(res.stats);
    if (preprocess) {
      double dummy;
      Eigen::SparseMatrix<double> H;
      f2.eval(xi, dummy, nullptr, &H);
      cache.h_mu[i] = H;
    }
  }
  out.diag.final_radius = R;

  const double mu_final = p.mu.mu(p.mu.n - 1);
  objectives::Phase2Objective f_final(ctx, mu_final,
                                      preprocess ? mu1 : mu_final);
  out.reaction = f_final.full_u_gradient(xi, &out.contact_force);
  out.u_mid = f_final.full_u(xi);
  out.s0 = xi.tail(sys.n_gp());
  if (preprocess) cache.last_refresh_step = tau;
  return out;
}

VelocityUpdate velocity_update(const Eigen::VectorXd& u_mid,
                               const Eigen::VectorXd& u_prev,
                               const Eigen::VectorXd& v_prev, double dt) {
  VelocityUpdate out;
  out.u_next = 2.0 * u_mid - u_prev;
  out.v_next = (4.0 / dt) * (u_mid - u_prev) - v_prev;
  return out;
}

std::vector<StepRecord> run(const assembly::System& sys,
                            const Eigen::VectorXd& u0,
                            const Eigen::VectorXd& v0, int n_step,
                            const SolverParams& p,
                            const std::function<void(const StepRecord&)>& on_step) {
  if (u0.size() != sys.n_dofs() || v0.size() != sys.n_dofs())
    throw std::invalid_argument("run: state dimension mismatch");

  Eigen::VectorXd u = u0, v = v0;
  Eigen::VectorXd d = Eigen::VectorXd::Zero(sys.n_gp());
  const Eigen::VectorXd d0 = d;
  const double du_limit = sys.coh.delta_u();

  PreprocessCache cache;
  std::vector<StepRecord> records;
  records.reserve(n_step);

  for (int tau = 1; tau <= n_step; ++tau) {
    if ((tau % 3) == 1) {
      if (p.preprocess_from_current)
        solve_step(sys, tau, u, v, d, cache, SolveFlag::kPreprocess, p);
      else
        solve_step(sys, tau, u0, v0, d0, cache, SolveFlag::kPreprocess, p);
    }

    StepResult st =
        solve_step(sys, tau, u, v, d, cache, SolveFlag::kOrdinary, p);

    StepRecord rec;
    rec.tau = tau;
    rec.time = tau * sys.dt;
    rec.u_mid = st.u_mid;
    rec.delta = assembly::effective_openings(sys, st.u_mid);
    d = material::update_damage(d, rec.delta, du_limit);
    rec.d = d;
    rec.s0 = std::move(st.s0);
    rec.reaction = std::move(st.reaction);
    rec.contact_force = std::move(st.contact_force);
    rec.diag = std::move(st.diag);

    auto next = velocity_update(st.u_mid, u, v, sys.dt);
    u = std::move(next.u_next);
    v = std::move(next.v_next);
    // Prescribed DOFs follow their exact trajectories; the raw update would
    // alternate the velocity around the prescribed rate.
    for (int c : sys.bc.constrained) {
      u[c] = sys.bc.u0[c] + sys.bc.vel[c] * (tau * sys.dt);
      v[c] = sys.bc.vel[c];
    }
    rec.u = u;
    rec.v = v;
    records.push_back(std::move(rec));
    if (on_step) on_step(records.back());
  }
  return records;
}

}  // namespace conefrac::stepper

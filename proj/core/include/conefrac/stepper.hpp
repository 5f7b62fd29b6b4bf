#pragma once

// One implicit time step (Phase-I big-M feasibility loop, then Phase-II mu
// continuation) and the outer time loop with Hessian preprocessing every
// third step, damage updates, and implicit-midpoint velocity updates.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "conefrac/assembly.hpp"
#include "conefrac/objectives.hpp"
#include "conefrac/trustregion.hpp"

namespace conefrac::stepper {

struct StepError : std::runtime_error {
  explicit StepError(const std::string& what) : std::runtime_error(what) {}
};

struct MuSchedule {
  double mu_init = 5e-5;
  double rho = 0.125;
  int n = 6;
  double mu(int i) const;  // i = 0 .. n-1
};

struct SolverParams {
  MuSchedule mu;
  trustregion::TRConfig tr;
  double r_init = 1.0;          // trust radius at the top of each step
  double big_m_init = 64.0;     // Phase-I penalty start
  double big_m_factor = 8.0;    // escalation multiplier
  int max_escalations = 10;     // extra big-M rounds before giving up
  double handoff_margin = 1e-12;
  bool preprocess_from_current = false;  // refresh cache from current state
                                         // instead of the initial conditions
};

// Hessians harvested by the preprocessing pass; they seed the trust-region
// scaling matrix on later steps.  Empty matrices mean "not yet refreshed".
struct PreprocessCache {
  Eigen::SparseMatrix<double> h_phase1;
  std::vector<Eigen::SparseMatrix<double>> h_mu;
  int last_refresh_step = -1;
};

enum class SolveFlag { kOrdinary, kPreprocess };

struct StepDiagnostics {
  int phase1_escalations = 0;      // rounds beyond the first
  std::vector<double> phase1_t;    // converged t per round
  double final_radius = 0.0;
  trustregion::MinimizeStats phase1_stats;               // last round
  std::vector<trustregion::MinimizeStats> phase2_stats;  // per mu
};

struct StepResult {
  Eigen::VectorXd u_mid;          // full midpoint displacement
  Eigen::VectorXd s0;             // converged auxiliary openings
  Eigen::VectorXd reaction;       // grad of f wrt full u at the minimizer
  Eigen::VectorXd contact_force;  // contact-barrier share of the same
  StepDiagnostics diag;
};

// Fig.-style solver for one step.  tau is 1-based; boundary values are
// evaluated at the midpoint time (tau - 1/2)*dt.  Under kPreprocess the
// cache is refreshed (and the displacement result is an artifact of the
// preliminary problem); under kOrdinary the cache is read only.
StepResult solve_step(const assembly::System& sys, int tau,
                      const Eigen::VectorXd& u_in, const Eigen::VectorXd& v_in,
                      const Eigen::VectorXd& d_in, PreprocessCache& cache,
                      SolveFlag flag, const SolverParams& p);

// Implicit-midpoint completion of a step.
struct VelocityUpdate {
  Eigen::VectorXd u_next, v_next;
};
VelocityUpdate velocity_update(const Eigen::VectorXd& u_mid,
                               const Eigen::VectorXd& u_prev,
                               const Eigen::VectorXd& v_prev, double dt);

struct StepRecord {
  int tau = 0;
  double time = 0.0;         // tau * dt
  Eigen::VectorXd u_mid;
  Eigen::VectorXd u, v;      // state after the step
  Eigen::VectorXd d;         // damage after the step
  Eigen::VectorXd delta;     // effective openings at u_mid
  Eigen::VectorXd s0;
  Eigen::VectorXd reaction;
  Eigen::VectorXd contact_force;
  StepDiagnostics diag;
};

// Top loop: preprocess on steps 1, 4, 7, ... from the initial conditions
// (or the current state under p.preprocess_from_current), then the ordinary
// solve, damage update at the midpoint displacement, and velocity update
// with prescribed DOFs pinned to their exact trajectories.  on_step, when
// given, is called after each completed step (progress reporting).
std::vector<StepRecord> run(
    const assembly::System& sys, const Eigen::VectorXd& u0,
    const Eigen::VectorXd& v0, int n_step, const SolverParams& p,
    const std::function<void(const StepRecord&)>& on_step = {});

}  // namespace conefrac::stepper

#pragma once

// Half-step energy bookkeeping: kinetic and strain energy, the split of the
// cohesive potential into recoverable and dissipated shares, and the work
// done through moving boundaries and contact forces.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

#include "conefrac/assembly.hpp"
#include "conefrac/material.hpp"
#include "conefrac/stepper.hpp"

namespace conefrac::energy {

// KE at a half-step, from the two neighboring full-step velocities.
double kinetic_energy(const Eigen::VectorXd& v_a, const Eigen::VectorXd& v_b,
                      const Eigen::SparseMatrix<double>& mass);

// Interface energy split at given openings delta and (pre-update) damage d:
// recoverable = sum w g(delta; d), the potential refunded by unloading to
// the origin; dissipated = sum w sigma_c d^2/(2 delta_u), the wedge between
// the undamaged and damaged loading curves.
struct CohesiveSplit {
  double recoverable = 0.0;
  double dissipated = 0.0;
};
CohesiveSplit cohesive_split(const Eigen::VectorXd& delta,
                             const Eigen::VectorXd& d,
                             const Eigen::VectorXd& w,
                             const material::CohesiveParams& p);

// Work increments over one half-step pair, trapezoidal in the force.
// Boundary work reads the reaction (objective gradient) at constrained DOFs;
// contact work reads the negated contact-barrier gradient over all DOFs.
double boundary_work_increment(const Eigen::VectorXd& f_a,
                               const Eigen::VectorXd& f_b,
                               const Eigen::VectorXd& du,
                               const std::vector<int>& constrained);
double contact_work_increment(const Eigen::VectorXd& fc_a,
                              const Eigen::VectorXd& fc_b,
                              const Eigen::VectorXd& du);

struct LedgerRow {
  int step = 0;
  double time = 0.0;  // half-step time (tau - 1/2) dt
  double ke = 0.0, se = 0.0;
  double fe_rec = 0.0, fe_dis = 0.0;
  double w_bc = 0.0, w_contact = 0.0, w_ext = 0.0;  // cumulative
  double residual = 0.0;  // work in minus energy stored, should hover near 0
};

// One row per solved step.  The time-zero baseline uses the bare elastic
// reaction (no barrier or inertia terms) so a run started at rest begins
// with zero boundary force.
std::vector<LedgerRow> compute_ledger(
    const assembly::System& sys, const Eigen::VectorXd& u0,
    const Eigen::VectorXd& v0, const std::vector<stepper::StepRecord>& records);

// Largest absolute cumulative work in the ledger; scale for residuals.
double peak_work(const std::vector<LedgerRow>& rows);

}  // namespace conefrac::energy

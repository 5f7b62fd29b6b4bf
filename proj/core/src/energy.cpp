#include "conefrac/energy.hpp"

#include <cmath>

namespace conefrac::energy {

double kinetic_energy(const Eigen::VectorXd& v_a, const Eigen::VectorXd& v_b,
                      const Eigen::SparseMatrix<double>& mass) {
  const Eigen::VectorXd v_mid = 0.5 * (v_a + v_b);
  return 0.5 * v_mid.dot(mass * v_mid);
}

CohesiveSplit cohesive_split(const Eigen::VectorXd& delta,
                             const Eigen::VectorXd& d,
                             const Eigen::VectorXd& w,
                             const material::CohesiveParams& p) {
  if (delta.size() != d.size() || delta.size() != w.size())
    throw std::invalid_argument("cohesive_split: size mismatch");
  const double du = p.delta_u();
  CohesiveSplit out;
  for (Eigen::Index i = 0; i < delta.size(); ++i) {
    out.recoverable += w[i] * material::cohesive_g(delta[i], d[i], p);
    out.dissipated += w[i] * p.sigma_c * d[i] * d[i] / (2.0 * du);
  }
  return out;
}

double boundary_work_increment(const Eigen::VectorXd& f_a,
                               const Eigen::VectorXd& f_b,
                               const Eigen::VectorXd& du,
                               const std::vector<int>& constrained) {
  double w = 0.0;
  for (int c : constrained) w += 0.5 * (f_a[c] + f_b[c]) * du[c];
  return w;
}

double contact_work_increment(const Eigen::VectorXd& fc_a,
                              const Eigen::VectorXd& fc_b,
                              const Eigen::VectorXd& du) {
  // The force the barrier exerts on the body is minus its gradient.
  return -0.5 * (fc_a + fc_b).dot(du);
}

std::vector<LedgerRow> compute_ledger(
    const assembly::System& sys, const Eigen::VectorXd& u0,
    const Eigen::VectorXd& v0,
    const std::vector<stepper::StepRecord>& records) {
  std::vector<LedgerRow> rows;
  rows.reserve(records.size());

  // Baselines at time zero.  The time-zero boundary force is the bare
  // elastic static reaction; barrier and inertia terms are excluded because
  // closed interfaces make the barrier gradient unbounded there.
  const double ke0 = 0.5 * v0.dot(sys.mass * v0);
  double se0 = 0.0;
  Eigen::VectorXd f_prev = Eigen::VectorXd::Zero(sys.n_dofs());
  if (!assembly::bulk_energy(sys, u0, se0, &f_prev))
    throw std::runtime_error("compute_ledger: initial state inverted");
  f_prev -= sys.fext;
  const Eigen::VectorXd d_zero = Eigen::VectorXd::Zero(sys.n_gp());
  const double fe_rec0 =
      sys.n_gp() > 0
          ? cohesive_split(assembly::effective_openings(sys, u0), d_zero,
                           sys.face_w, sys.coh)
                .recoverable
          : 0.0;
  Eigen::VectorXd fc_prev = Eigen::VectorXd::Zero(sys.n_dofs());
  Eigen::VectorXd u_prev_mid = u0;
  Eigen::VectorXd v_prev = v0;
  Eigen::VectorXd d_prev = d_zero;

  double w_bc = 0.0, w_contact = 0.0;
  for (const auto& rec : records) {
    LedgerRow row;
    row.step = rec.tau;
    row.time = (rec.tau - 0.5) * sys.dt;

    row.ke = kinetic_energy(v_prev, rec.v, sys.mass);
    if (!assembly::bulk_energy(sys, rec.u_mid, row.se))
      throw std::runtime_error("compute_ledger: inverted midpoint state");

    // Damage lags: the half-step sees the damage from before this step's
    // update, so dissipation registers only after the step completes.
    const auto split = cohesive_split(rec.delta, d_prev, sys.face_w, sys.coh);
    row.fe_rec = split.recoverable;
    row.fe_dis = split.dissipated;

    const Eigen::VectorXd du = rec.u_mid - u_prev_mid;
    w_bc += boundary_work_increment(f_prev, rec.reaction, du,
                                    sys.bc.constrained);
    w_contact += contact_work_increment(fc_prev, rec.contact_force, du);
    row.w_bc = w_bc;
    row.w_contact = w_contact;
    row.w_ext = sys.fext.dot(rec.u_mid - u0);

    row.residual = (row.w_bc + row.w_contact + row.w_ext) -
                   ((row.ke - ke0) + (row.se - se0) +
                    (row.fe_rec - fe_rec0) + row.fe_dis);
    rows.push_back(row);

    u_prev_mid = rec.u_mid;
    v_prev = rec.v;
    d_prev = rec.d;
    f_prev = rec.reaction;
    fc_prev = rec.contact_force;
  }
  return rows;
}

double peak_work(const std::vector<LedgerRow>& rows) {
  double peak = 0.0;
  for (const auto& r : rows)
    peak = std::max(peak, std::abs(r.w_bc + r.w_contact + r.w_ext));
  return peak;
}

}  // namespace conefrac::energy

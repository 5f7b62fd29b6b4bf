#pragma once

// Barrier objectives for one time step.  Phase II minimizes over
// xi = (x, s0): free displacement DOFs plus one auxiliary opening per
// interface Gauss point.  Phase I relaxes the boundary conditions and cone
// feasibility with a single artificial variable t over xibar = (u, s0, t).

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "conefrac/assembly.hpp"
#include "conefrac/trustregion.hpp"

namespace conefrac::objectives {

// Frozen per-step data shared by both phases.
struct StepContext {
  const assembly::System* sys = nullptr;
  Eigen::VectorXd u_prev;  // full displacement entering the step
  Eigen::VectorXd v_prev;  // full velocity entering the step
  Eigen::VectorXd u_bc;    // prescribed full-DOF values at the solve time
  Eigen::VectorXd d;       // damage per interface Gauss point
  bool include_momentum = true;  // static evaluations drop the inertia term
};

// f(xi) = m(x) + b(x) + h_alpha(s0; d) - fext.u
//         + mu*phi_NNO(contact slack)
//         + mu*sum_g zeta_g [phi_SOC(s0_g, c1_g, c2_g) + phi_NNO(c1_g)].
// alpha is normally mu itself; the preprocessing pass pins it to mu_1.
class Phase2Objective final : public trustregion::TrustRegionObjective {
 public:
  Phase2Objective(const StepContext& ctx, double mu, double alpha);

  int dim() const override { return n_x_ + n_gp_; }
  bool eval(const Eigen::VectorXd& xi, double& value, Eigen::VectorXd* grad,
            Eigen::SparseMatrix<double>* hess) const override;

  int n_x() const { return n_x_; }
  int n_gp() const { return n_gp_; }
  double mu() const { return mu_; }
  Eigen::VectorXd full_u(const Eigen::VectorXd& xi) const;

  // Gradient of the same objective with respect to the full displacement
  // vector; the constrained entries are the boundary reaction forces.  If
  // contact_part is given it receives just the contact-barrier share.
  Eigen::VectorXd full_u_gradient(const Eigen::VectorXd& xi,
                                  Eigen::VectorXd* contact_part = nullptr)
      const;

 private:
  const StepContext* ctx_;
  double mu_, alpha_;
  int n_x_, n_gp_;
};

// The feasibility problem: over xibar = (u, s0, t),
// f = m0(u) + b0(u) + h_alpha(s0; d) - fext.u + M t
//     + mu*phi_NNO(contact slack + t) + mu*phi_NNO(t)
//     + mu*phi_NNO(u_c - b_c + t) + mu*phi_NNO(b_c - u_c + t)   (BC rows)
//     + mu*sum_g zeta_g [phi_SOC(s0_g, c_g(u)) + phi_NNO(c1_g + t)]
// with alpha = mu*sqrt(M), keeping the quadratic penalty comparable to Mt.
class Phase1Objective final : public trustregion::TrustRegionObjective {
 public:
  Phase1Objective(const StepContext& ctx, double mu_init, double big_m);

  int dim() const override { return n_u_ + n_gp_ + 1; }
  bool eval(const Eigen::VectorXd& xi, double& value, Eigen::VectorXd* grad,
            Eigen::SparseMatrix<double>* hess) const override;

  int n_u() const { return n_u_; }
  int n_gp() const { return n_gp_; }
  double big_m() const { return big_m_; }

 private:
  const StepContext* ctx_;
  double mu_, big_m_, alpha_;
  int n_u_, n_gp_;
};

// Univariate pieces of the optimal extension xi*(x) / xibar*(u): each s0
// entry is decoupled given the displacements, and in Phase I so is t.
Eigen::VectorXd optimal_s0(const StepContext& ctx, const Eigen::VectorXd& u,
                           double mu, double alpha);
double optimal_t(const StepContext& ctx, const Eigen::VectorXd& u, double mu,
                 double big_m);

// Strict Phase-II feasibility of (x, s0) with an absolute margin on every
// barrier argument (and no inverted element).
bool phase2_feasible(const StepContext& ctx, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& s0, double margin);

}  // namespace conefrac::objectives

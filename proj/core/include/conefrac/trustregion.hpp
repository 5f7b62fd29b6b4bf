#pragma once

// Trust-region Newton minimizer with a gradient ratio test, and the
// More-Sorensen style subproblem solver that tracks the multiplier lambda
// through a safeguarded scalar root find on
//   q(lambda) = 1/R - 1/|N^(1/2) (H + lambda N)^-1 g|.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <stdexcept>
#include <string>
#include <vector>

namespace conefrac::trustregion {

struct TrustRegionError : std::runtime_error {
  explicit TrustRegionError(const std::string& what)
      : std::runtime_error(what) {}
};

// Barrier objective seen by the minimizer.  eval returns false (with value
// +inf) when xi leaves the barrier domain; grad and hess are optional
// outputs, and the Hessian keeps a fixed sparsity pattern across calls.
class TrustRegionObjective {
 public:
  virtual ~TrustRegionObjective() = default;
  virtual int dim() const = 0;
  virtual bool eval(const Eigen::VectorXd& xi, double& value,
                    Eigen::VectorXd* grad,
                    Eigen::SparseMatrix<double>* hess) const = 0;
};

struct TRConfig {
  double tol1 = 1e-8;      // multiplier threshold for "interior" steps
  double tol2 = 1e-8;      // step-norm stop, relative to 1 + |xi|
  double tol3_rel = 1e-12; // bracket collapse: width < tol3_rel*(1+lambda_low)
  double tol4 = 1e-2;      // radius match: |delta|/R
  int max_iter = 200;
  int max_subproblem_iter = 200;
};

struct SubproblemResult {
  Eigen::VectorXd dxi;
  double lambda = 0.0;
  bool hard_case = false;
  int n_factorizations = 0;
};

// One trust-region step: solve min g.d + d'Hd/2 s.t. |d|_N <= R.  N must be
// positive definite.  Returns either an interior Newton step
// (lambda <= tol1, |d|_N <= R) or a boundary step with |d|_N within
// R*(1 +- tol4).
SubproblemResult compute_delta_xi(const Eigen::SparseMatrix<double>& H,
                                  const Eigen::SparseMatrix<double>& N,
                                  const Eigen::VectorXd& g, double R,
                                  const TRConfig& cfg = {});

// q and its analytic derivative at a multiplier where H + lambda N is
// positive definite (throws otherwise).  q is decreasing in lambda: raising
// lambda shortens the step, growing 1/|step| and shrinking q.
std::pair<double, double> q_and_derivative(
    double lambda, const Eigen::SparseMatrix<double>& H,
    const Eigen::SparseMatrix<double>& N, const Eigen::VectorXd& g, double R);

struct MinimizeStats {
  int n_iter = 0;
  int n_accept = 0;
  int n_reject_infeasible = 0;
  int n_reject_ratio = 0;  // rho < 1/8 (and rho_g did not exceed 1 alone)
  int n_reject_grad = 0;   // rho_g > 1 while rho >= 1/8 would have accepted
  int n_radius_grow = 0;
  std::vector<double> accepted_values;  // objective after each accepted step
  double final_lambda = 0.0;
  double final_step_norm = 0.0;
  double final_grad_norm = 0.0;
  double final_value = 0.0;
};

struct MinimizeResult {
  Eigen::VectorXd xi;
  double R = 0.0;
  MinimizeStats stats;
};

// Fig.-style loop: scaling matrix N = Hbar + 1e-3*nu*I with
// nu = |hess f(xi0)|_1 fixed at entry (the shift doubles until N factors);
// radius quartered on infeasible or rejected steps (rho < 1/8 or rho_g > 1),
// halved on weak acceptance (rho < 1/4), doubled on strong agreement
// (rho >= 3/4, lambda > 0, rho_g <= 0.125); terminates when lambda <= tol1
// and |step| <= tol2*(1 + |xi|).  Hbar may be empty (treated as zero).
MinimizeResult minimize(const TrustRegionObjective& f,
                        const Eigen::VectorXd& xi0,
                        const Eigen::SparseMatrix<double>& Hbar, double R_init,
                        const TRConfig& cfg = {});

}  // namespace conefrac::trustregion

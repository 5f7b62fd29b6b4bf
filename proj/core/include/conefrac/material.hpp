#pragma once

// Constitutive models: plane-stress hyperelastic bulk response and the
// initially rigid, linearly softening cohesive law with its irreversible
// damage variable.

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace conefrac::material {

enum class BulkModel {
  kNeoHookean,  // plane-stress Knowles-Sternberg (compressible neo-Hookean)
  kLinear,      // St. Venant small-strain isotropic, plane stress
};

struct BulkParams {
  BulkModel model = BulkModel::kNeoHookean;
  double E = 0.0;    // Young's modulus [Pa]
  double nu = 0.0;   // Poisson ratio
  double rho = 0.0;  // density [kg/m^3]

  double c1() const { return E / (4.0 * (1.0 + nu)); }
  double beta() const { return nu / (1.0 - 2.0 * nu); }
};

struct BulkEval {
  bool inverted = false;  // det F <= 0 (nonlinear model treats as infeasible)
  double value = 0.0;     // energy density [Pa = J/m^3]
  Eigen::Matrix2d dF = Eigen::Matrix2d::Zero();  // dPsi/dF (first PK stress)
  // d2Psi/dF_ij dF_kl stored as 4x4 with row index 2*i+j, column 2*k+l.
  Eigen::Matrix4d d2F = Eigen::Matrix4d::Zero();
};

// Energy density at a deformation gradient.  The nonlinear model is the
// plane-stress reduction of the 3-D compressible neo-Hookean material: with
// C = F^T F and the transverse stretch eliminated at zero transverse stress,
//   Psi(F) = c1 [ tr C + (1 + 1/beta) * det(C)^(-beta/(1+beta)) ] - Psi0,
//   Psi0   = c1 [ 3 + 1/beta ],
// which vanishes with zero gradient at F = I and linearizes to the isotropic
// plane-stress quadratic with c1 = E/(4(1+nu)), beta = nu/(1-2nu).  det C -> 0
// blows the energy up, so inverted elements are automatically repelled.
BulkEval bulk_energy_density(const Eigen::Matrix2d& F, const BulkParams& p,
                             bool want_hessian = true);

struct CohesiveParams {
  double sigma_c = 0.0;   // cohesive strength [Pa]
  double G_c = 0.0;       // fracture energy [Pa m]
  double beta_mix = 1.0;  // mode-mixity weight on sliding

  // Opening at which cohesion is exhausted; the triangular envelope gives
  // G_c = sigma_c * delta_u / 2.
  double delta_u() const { return 2.0 * G_c / sigma_c; }
};

// Cohesive free energy per unit reference length, g(delta; d):
//   q = -sigma_c / (2 delta_u),  l(d) = -2 (delta_u - d) q,
//   g = l(d) delta                          for 0 <= delta <= d,
//     = l(d) delta + q (delta - d)^2        for d <= delta <= delta_u,
//     = l(d) delta_u + q (delta_u - d)^2    for delta > delta_u.
// C^1 in delta, monotone nondecreasing; g'(0;0) = sigma_c and
// g(delta_u; 0) = G_c.  Optional outputs give d g/d delta and d^2 g/d delta^2
// (piecewise constant 0 or 2q).
double cohesive_g(double delta, double d, const CohesiveParams& p,
                  double* dg = nullptr, double* d2g = nullptr);

// Separable interface potential and its quadratically regularized variant.
// Both act on the vector of auxiliary openings s0, one entry per interface
// Gauss point, with quadrature weights w and per-point damage d:
//   h(s0; d)      = sum_i w_i g(s0_i; d_i)
//   h_alpha(s0;d) = h + sum_i 5e5 * alpha * w_i * max(1 - d_i/delta_u, 8e-6)
//                        * s0_i^2.
// The Hessian is diagonal; `hess_diag` holds its entries.
struct SeparableEval {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::VectorXd hess_diag;
};

// Coefficient of the per-point quadratic term in h_alpha; shared with the
// univariate extension solver so both see the same regularized potential.
double h_alpha_coeff(double alpha, double w, double d, double delta_u);

SeparableEval h_potential(const Eigen::VectorXd& s0, const Eigen::VectorXd& d,
                          const Eigen::VectorXd& w, const CohesiveParams& p);

SeparableEval h_alpha(const Eigen::VectorXd& s0, const Eigen::VectorXd& d,
                      const Eigen::VectorXd& w, double alpha,
                      const CohesiveParams& p);

// Irreversible damage update: d_new = min(delta_u, max(d_prev, delta_now)),
// applied entrywise.
Eigen::VectorXd update_damage(const Eigen::VectorXd& d_prev,
                              const Eigen::VectorXd& delta_now,
                              double delta_u);

}  // namespace conefrac::material

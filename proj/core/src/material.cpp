#include "conefrac/material.hpp"

#include <algorithm>
#include <cmath>

namespace conefrac::material {

namespace {

// Linear isotropic plane stress on the symmetric small-strain tensor.
BulkEval linear_eval(const Eigen::Matrix2d& F, const BulkParams& p,
                     bool want_hessian) {
  const double mu = p.E / (2.0 * (1.0 + p.nu));
  const double lam = p.E * p.nu / (1.0 - p.nu * p.nu);  // plane-stress Lame

  Eigen::Matrix2d eps = 0.5 * (F + F.transpose()) - Eigen::Matrix2d::Identity();
  const double tr = eps.trace();

  BulkEval e;
  e.value = mu * (eps * eps).trace() + 0.5 * lam * tr * tr;
  e.dF = 2.0 * mu * eps + lam * tr * Eigen::Matrix2d::Identity();
  if (want_hessian) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) {
            double v = lam * (i == j) * (k == l);
            v += mu * ((i == k) * (j == l) + (i == l) * (j == k));
            e.d2F(2 * i + j, 2 * k + l) = v;
          }
  }
  return e;
}

BulkEval neohookean_eval(const Eigen::Matrix2d& F, const BulkParams& p,
                         bool want_hessian) {
  BulkEval e;
  const double J = F.determinant();
  if (!(J > 0.0)) {
    e.inverted = true;
    e.value = std::numeric_limits<double>::infinity();
    return e;
  }

  const double c1 = p.c1();
  const double beta = p.beta();
  const double a = 1.0 + 1.0 / beta;
  // det(C)^(-beta/(1+beta)) = J^(-kappa) with kappa = 2 beta / (1 + beta),
  // and a * kappa = 2, which is what makes F = I stationary.
  const double kappa = 2.0 * beta / (1.0 + beta);
  const double Jk = std::pow(J, -kappa);

  e.value = c1 * (F.squaredNorm() + a * Jk - (3.0 + 1.0 / beta));

  // Finv^T scaled entries; for 2x2, F^{-T} = adj(F)^T / J.
  Eigen::Matrix2d FinvT;
  FinvT << F(1, 1), -F(1, 0), -F(0, 1), F(0, 0);
  FinvT /= J;

  e.dF = 2.0 * c1 * (F - Jk * FinvT);

  if (want_hessian) {
    // d2Psi/dF_ij dF_kl = 2 c1 [ delta_ik delta_jl
    //   + kappa J^-k (F^-T)_ij (F^-T)_kl + J^-k (F^-T)_il (F^-T)_kj ].
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) {
            double v = (i == k && j == l) ? 1.0 : 0.0;
            v += kappa * Jk * FinvT(i, j) * FinvT(k, l);
            v += Jk * FinvT(i, l) * FinvT(k, j);
            e.d2F(2 * i + j, 2 * k + l) = 2.0 * c1 * v;
          }
  }
  return e;
}

}  // namespace

BulkEval bulk_energy_density(const Eigen::Matrix2d& F, const BulkParams& p,
                             bool want_hessian) {
  if (p.model == BulkModel::kLinear) return linear_eval(F, p, want_hessian);
  return neohookean_eval(F, p, want_hessian);
}

double cohesive_g(double delta, double d, const CohesiveParams& p, double* dg,
                  double* d2g) {
  const double du = p.delta_u();
  const double q = -p.sigma_c / (2.0 * du);
  const double l = -2.0 * (du - d) * q;  // residual strength sigma_c(1 - d/du)

  double g, g1, g2;
  if (delta <= d) {
    g = l * delta;
    g1 = l;
    g2 = 0.0;
  } else if (delta <= du) {
    const double r = delta - d;
    g = l * delta + q * r * r;
    g1 = l + 2.0 * q * r;
    g2 = 2.0 * q;
  } else {
    const double r = du - d;
    g = l * du + q * r * r;
    g1 = 0.0;
    g2 = 0.0;
  }
  if (dg) *dg = g1;
  if (d2g) *d2g = g2;
  return g;
}

namespace {

SeparableEval h_impl(const Eigen::VectorXd& s0, const Eigen::VectorXd& d,
                     const Eigen::VectorXd& w, const CohesiveParams& p,
                     double alpha) {
  const auto n = s0.size();
  if (d.size() != n || w.size() != n)
    throw std::invalid_argument("h_potential: size mismatch");

  const double du = p.delta_u();
  SeparableEval e;
  e.grad.setZero(n);
  e.hess_diag.setZero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double g1, g2;
    e.value += w[i] * cohesive_g(s0[i], d[i], p, &g1, &g2);
    e.grad[i] = w[i] * g1;
    e.hess_diag[i] = w[i] * g2;
    if (alpha > 0.0) {
      const double c = h_alpha_coeff(alpha, w[i], d[i], du);
      e.value += c * s0[i] * s0[i];
      e.grad[i] += 2.0 * c * s0[i];
      e.hess_diag[i] += 2.0 * c;
    }
  }
  return e;
}

}  // namespace

double h_alpha_coeff(double alpha, double w, double d, double delta_u) {
  // Quadratic confinement of the auxiliary openings; floored so fully
  // damaged points are still weakly held.
  return 5.0e5 * alpha * w * std::max(1.0 - d / delta_u, 8.0e-6);
}

SeparableEval h_potential(const Eigen::VectorXd& s0, const Eigen::VectorXd& d,
                          const Eigen::VectorXd& w, const CohesiveParams& p) {
  return h_impl(s0, d, w, p, 0.0);
}

SeparableEval h_alpha(const Eigen::VectorXd& s0, const Eigen::VectorXd& d,
                      const Eigen::VectorXd& w, double alpha,
                      const CohesiveParams& p) {
  if (alpha <= 0.0) throw std::invalid_argument("h_alpha: alpha must be > 0");
  return h_impl(s0, d, w, p, alpha);
}

Eigen::VectorXd update_damage(const Eigen::VectorXd& d_prev,
                              const Eigen::VectorXd& delta_now,
                              double delta_u) {
  if (d_prev.size() != delta_now.size())
    throw std::invalid_argument("update_damage: size mismatch");
  return d_prev.cwiseMax(delta_now).cwiseMin(delta_u);
}

}  // namespace conefrac::material

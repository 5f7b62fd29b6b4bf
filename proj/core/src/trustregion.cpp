#include "conefrac/trustregion.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <limits>

namespace conefrac::trustregion {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double norm1(const Eigen::SparseMatrix<double>& A) {
  double best = 0.0;
  for (int c = 0; c < A.outerSize(); ++c) {
    double col = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, c); it; ++it)
      col += std::abs(it.value());
    best = std::max(best, col);
  }
  return best;
}

Eigen::SparseMatrix<double> identity(int n) {
  Eigen::SparseMatrix<double> I(n, n);
  I.setIdentity();
  return I;
}

// Shared factorization state for one subproblem: the pattern of H + lambda*N
// is the structural union for every lambda, so the symbolic analysis runs
// once.
struct ShiftedSolver {
  const Eigen::SparseMatrix<double>&H, &N;
  Eigen::SparseMatrix<double> G;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
  int n_factorizations = 0;

  ShiftedSolver(const Eigen::SparseMatrix<double>& H_,
                const Eigen::SparseMatrix<double>& N_)
      : H(H_), N(N_) {
    G = H + 0.0 * N;  // union pattern with numeric zeros kept
    llt.analyzePattern(G);
  }

  bool factorize(double lambda) {
    G = H + lambda * N;
    llt.factorize(G);
    ++n_factorizations;
    return llt.info() == Eigen::Success;
  }
};

double model_value(const Eigen::SparseMatrix<double>& H,
                   const Eigen::VectorXd& g, const Eigen::VectorXd& d) {
  return g.dot(d) + 0.5 * d.dot(H.selfadjointView<Eigen::Lower>() * d);
}

// Bracket collapsed onto the boundary multiplier with a (near) singular
// shifted Hessian: complete the short Newton step with the soft
// eigen-direction of (H, N), scaled out to the boundary, and keep whichever
// root of the quadratic gives the lower model value.
SubproblemResult hard_case(ShiftedSolver& s, const Eigen::VectorXd& g,
                           double R, double lambda_high) {
  if (!s.factorize(lambda_high))
    throw TrustRegionError(
        "hard case: shifted Hessian lost definiteness at lambda_high");
  const Eigen::VectorXd dp = s.llt.solve(-g);

  // Inverse iteration on (G, N): converges to the eigenvector of the
  // smallest eigenvalue of N^-1 G, i.e. the most negative curvature
  // direction of H relative to N.
  Eigen::VectorXd v = Eigen::VectorXd::Ones(g.size());
  v /= std::sqrt(v.dot(s.N * v));
  for (int it = 0; it < 30; ++it) {
    v = s.llt.solve(s.N * v);
    const double nn = std::sqrt(v.dot(s.N * v));
    if (!(nn > 0.0) || !std::isfinite(nn)) break;
    v /= nn;
  }

  // |dp + t v|_N = R with |v|_N = 1
  const double b = v.dot(s.N * dp);
  const double c = dp.dot(s.N * dp) - R * R;
  const double disc = std::max(0.0, b * b - c);
  const double t1 = -b + std::sqrt(disc);
  const double t2 = -b - std::sqrt(disc);

  SubproblemResult out;
  out.lambda = lambda_high;
  out.hard_case = true;
  const Eigen::VectorXd d1 = dp + t1 * v, d2 = dp + t2 * v;
  out.dxi = model_value(s.H, g, d1) <= model_value(s.H, g, d2) ? d1 : d2;
  out.n_factorizations = s.n_factorizations;
  return out;
}

}  // namespace

std::pair<double, double> q_and_derivative(
    double lambda, const Eigen::SparseMatrix<double>& H,
    const Eigen::SparseMatrix<double>& N, const Eigen::VectorXd& g, double R) {
  ShiftedSolver s(H, N);
  if (!s.factorize(lambda))
    throw TrustRegionError("q_and_derivative: H + lambda N not SPD");
  const Eigen::VectorXd d = s.llt.solve(-g);
  const Eigen::VectorXd w = N * d;
  const double n = std::sqrt(d.dot(w));
  const double q = 1.0 / R - 1.0 / n;
  const Eigen::VectorXd y = s.llt.solve(w);
  const double qp = -w.dot(y) / (n * n * n);
  return {q, qp};
}

SubproblemResult compute_delta_xi(const Eigen::SparseMatrix<double>& H,
                                  const Eigen::SparseMatrix<double>& N,
                                  const Eigen::VectorXd& g, double R,
                                  const TRConfig& cfg) {
  SubproblemResult out;
  if (g.norm() == 0.0) {
    out.dxi = Eigen::VectorXd::Zero(g.size());
    return out;
  }

  ShiftedSolver s(H, N);
  double lo = 0.0, hi = kInf, lambda = 0.0;

  for (int it = 0; it < cfg.max_subproblem_iter; ++it) {
    if (hi - lo < cfg.tol3_rel * (1.0 + lo)) return hard_case(s, g, R, hi);

    bool posdef = s.factorize(lambda);
    if (posdef) {
      const Eigen::VectorXd d = s.llt.solve(-g);
      const Eigen::VectorXd w = N * d;
      const double n = std::sqrt(d.dot(w));
      const double delta = n - R;
      if (std::abs(delta) / R < cfg.tol4 ||
          (delta <= 0.0 && lambda <= cfg.tol1)) {
        out.dxi = d;
        out.lambda = lambda;
        out.n_factorizations = s.n_factorizations;
        return out;
      }
      if (delta > 0.0)
        lo = lambda;
      else
        hi = lambda;
      const double q = 1.0 / R - 1.0 / n;
      const Eigen::VectorXd y = s.llt.solve(w);
      const double qp = -w.dot(y) / (n * n * n);
      lambda -= q / qp;
    } else {
      lo = std::max(lo, lambda);
    }

    if (!posdef || lambda < lo || lambda > hi) {
      if (hi == kInf && lambda == 0.0)
        lambda = 1.0;
      else if (hi == kInf && lambda > 0.0)
        lambda = 2.0 * lambda;
      else
        lambda = 0.5 * (lo + hi);
    }
  }
  throw TrustRegionError("subproblem failed to converge in " +
                         std::to_string(cfg.max_subproblem_iter) +
                         " factorizations");
}

MinimizeResult minimize(const TrustRegionObjective& f,
                        const Eigen::VectorXd& xi0,
                        const Eigen::SparseMatrix<double>& Hbar, double R_init,
                        const TRConfig& cfg) {
  const int n = f.dim();
  if (xi0.size() != n)
    throw std::invalid_argument("minimize: xi0 dimension mismatch");

  Eigen::VectorXd xi = xi0;
  double fval;
  Eigen::VectorXd grad(n);
  Eigen::SparseMatrix<double> H(n, n);
  grad.setZero();
  if (!f.eval(xi, fval, &grad, &H))
    throw std::invalid_argument("minimize: start point infeasible");

  // Scaling matrix: preconditioning Hessian plus a multiple of the identity
  // sized by the current curvature; the shift doubles until it factors.
  const double nu = norm1(H);
  if (Hbar.rows() != 0 && Hbar.rows() != n)
    throw std::invalid_argument("minimize: preconditioning Hessian size");
  Eigen::SparseMatrix<double> N =
      (Hbar.rows() == n ? Eigen::SparseMatrix<double>(Hbar)
                        : Eigen::SparseMatrix<double>(n, n));
  double shift = 1e-3 * (nu > 0.0 ? nu : 1.0);
  N = N + shift * identity(n);
  {
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> probe(N);
    while (probe.info() != Eigen::Success) {
      N = N + shift * identity(n);
      shift *= 2.0;
      if (!std::isfinite(shift))
        throw TrustRegionError("scaling matrix could not be made SPD");
      probe.compute(N);
    }
  }

  MinimizeResult res;
  res.R = R_init;
  double& R = res.R;
  MinimizeStats& st = res.stats;

  for (int it = 0; it < cfg.max_iter; ++it) {
    ++st.n_iter;
    const SubproblemResult sub = compute_delta_xi(H, N, grad, R, cfg);
    const Eigen::VectorXd xi_test = xi + sub.dxi;

    double f_test;
    Eigen::VectorXd grad_test(n);
    grad_test.setZero();
    const bool feasible = f.eval(xi_test, f_test, &grad_test, nullptr);

    if (!feasible) {
      R /= 4.0;
      ++st.n_reject_infeasible;
    } else {
      const double predicted =
          -(grad.dot(sub.dxi) +
            0.5 * sub.dxi.dot(H.selfadjointView<Eigen::Lower>() * sub.dxi));
      const double rho =
          predicted > 0.0 ? (fval - f_test) / predicted : -kInf;
      const double rho_g =
          (grad_test - grad -
           Eigen::VectorXd(H.selfadjointView<Eigen::Lower>() * sub.dxi))
              .norm() /
          (grad.norm() + grad_test.norm());

      if (rho < 0.125 || rho_g > 1.0) {
        R /= 4.0;
        if (rho_g > 1.0 && rho >= 0.125)
          ++st.n_reject_grad;
        else
          ++st.n_reject_ratio;
      } else {
        if (rho < 0.25) {
          R /= 2.0;
        } else if (rho >= 0.75 && sub.lambda > 0.0 && rho_g <= 0.125) {
          R *= 2.0;
          ++st.n_radius_grow;
        }
        xi = xi_test;
        fval = f_test;
        grad = grad_test;
        double dummy;
        f.eval(xi, dummy, nullptr, &H);
        ++st.n_accept;
        st.accepted_values.push_back(fval);
      }
    }

    if (sub.lambda <= cfg.tol1 &&
        sub.dxi.norm() <= cfg.tol2 * (1.0 + xi.norm())) {
      st.final_lambda = sub.lambda;
      st.final_step_norm = sub.dxi.norm();
      st.final_grad_norm = grad.norm();
      st.final_value = fval;
      res.xi = xi;
      return res;
    }
    if (R < 1e-150)
      throw TrustRegionError("trust radius underflow (persistent rejection)");
  }
  throw TrustRegionError("minimize: iteration cap " +
                         std::to_string(cfg.max_iter) + " exceeded");
}

}  // namespace conefrac::trustregion

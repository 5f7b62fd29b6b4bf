#include "conefrac/objectives.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace conefrac::objectives {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Triplets = std::vector<Eigen::Triplet<double>>;

void push(Triplets* t, int i, int j, double v) {
  if (i >= 0 && j >= 0) t->emplace_back(i, j, v);
}

// mu*zeta*(phi_SOC(s0, c1, c2) + phi_NNO(c1 + t)) at one Gauss point.
// map holds the xi indices of the 12 local displacement DOFs (-1 entries are
// constrained and drop out); is0 indexes s0 and it indexes t (-1 when the
// phase has no t, in which case t must be 0).  Returns false when the point
// leaves the barrier domain.
bool interface_barrier(const assembly::OpeningMap& om, double s0, double t,
                       double muzeta, const std::array<int, 12>& map, int is0,
                       int it, double& value, Eigen::VectorXd* grad,
                       Triplets* hess) {
  const double c1 = om.c1, c2 = om.c2;
  const double dsoc = s0 * s0 - c1 * c1 - c2 * c2;
  const double ct = c1 + t;
  if (!(s0 > 0.0) || !(dsoc > 0.0) || !(ct > 0.0)) return false;

  value += muzeta * (-0.5 * std::log(dsoc) - std::log(ct));
  if (!grad && !hess) return true;

  // Work in y = (s0, c1, c2, t); c1 and c2 chain through the opening maps.
  Eigen::Vector4d gy(-s0 / dsoc, c1 / dsoc - 1.0 / ct, c2 / dsoc, -1.0 / ct);
  if (grad) {
    (*grad)[is0] += muzeta * gy[0];
    for (int m = 0; m < 12; ++m)
      if (map[m] >= 0)
        (*grad)[map[m]] += muzeta * (gy[1] * om.dc1[m] + gy[2] * om.dc2[m]);
    if (it >= 0) (*grad)[it] += muzeta * gy[3];
  }
  if (!hess) return true;

  Eigen::Matrix4d Hy = Eigen::Matrix4d::Zero();
  {
    const Eigen::Vector3d w(s0, -c1, -c2);
    Hy.topLeftCorner<3, 3>() = (2.0 / (dsoc * dsoc)) * (w * w.transpose());
    Hy(0, 0) -= 1.0 / dsoc;
    Hy(1, 1) += 1.0 / dsoc;
    Hy(2, 2) += 1.0 / dsoc;
    const double i2 = 1.0 / (ct * ct);
    Hy(1, 1) += i2;
    Hy(1, 3) += i2;
    Hy(3, 1) += i2;
    Hy(3, 3) += i2;
  }

  // Local layout: 0 = s0, 1..12 = displacement DOFs, 13 = t.
  Eigen::Matrix<double, 14, 14> Hl;
  Hl.setZero();
  Hl(0, 0) = Hy(0, 0);
  Hl(13, 13) = Hy(3, 3);
  for (int m = 0; m < 12; ++m) {
    const double a1 = om.dc1[m], a2 = om.dc2[m];
    Hl(0, 1 + m) = Hl(1 + m, 0) = Hy(0, 1) * a1 + Hy(0, 2) * a2;
    Hl(13, 1 + m) = Hl(1 + m, 13) = Hy(3, 1) * a1 + Hy(3, 2) * a2;
    for (int n = 0; n < 12; ++n) {
      const double b1 = om.dc1[n], b2 = om.dc2[n];
      Hl(1 + m, 1 + n) = Hy(1, 1) * a1 * b1 + Hy(2, 2) * a2 * b2 +
                         Hy(1, 2) * (a1 * b2 + a2 * b1) +
                         gy[1] * om.d2c1(m, n) + gy[2] * om.d2c2(m, n);
    }
  }

  std::array<int, 14> idx;
  idx[0] = is0;
  for (int m = 0; m < 12; ++m) idx[1 + m] = map[m];
  idx[13] = it;
  for (int p = 0; p < 14; ++p)
    for (int q = 0; q < 14; ++q) push(hess, idx[p], idx[q], muzeta * Hl(p, q));
  return true;
}

// Per-point regularized potential restricted to s0, everything else fixed:
// F(s0) = w g(s0; d) + c_alpha s0^2 - (mu zeta / 2) log(s0^2 - r^2), s0 > r.
// The derivative runs to -inf at the cone boundary and the quadratic wins
// for large s0, so a minimum exists.  Because g saturates past delta_u the
// potential is nonconvex and can carry a second, fully debonded basin that
// at loose barrier weights undercuts the cohesive one; extending into it
// would sever every interface on the first barrier stage.  The extension
// must stay on the branch connected to the cone boundary, so take the
// first descent-to-ascent crossing of F' and refine it by bisection.
double solve_s0_point(double r, double wq, double dmg, double muzeta,
                      double calpha, const material::CohesiveParams& coh) {
  // gamma = s0 - r > 0; s0^2 - r^2 = gamma (2r + gamma) keeps precision at
  // the boundary.
  const auto fprime = [&](double gamma) {
    const double s = r + gamma;
    double g1;
    material::cohesive_g(s, dmg, coh, &g1, nullptr);
    return wq * g1 + 2.0 * calpha * s - muzeta * s / (gamma * (2.0 * r + gamma));
  };
  const double scale = std::max(r, coh.delta_u());
  std::vector<double> grid;
  grid.push_back(1e-300);
  for (double e = -14.0; e <= 6.0; e += 0.25)
    grid.push_back(scale * std::pow(10.0, e));
  while (fprime(grid.back()) <= 0.0) {
    grid.push_back(2.0 * grid.back());
    if (!std::isfinite(grid.back()))
      throw std::runtime_error("optimal_s0: no ascent bracket found");
  }

  double prev = grid[0], prev_sign = fprime(prev);
  for (size_t k = 1; k < grid.size(); ++k) {
    const double cur = grid[k], cur_sign = fprime(cur);
    if (prev_sign < 0.0 && cur_sign >= 0.0) {
      double lo = prev, hi = cur;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (fprime(mid) < 0.0 ? lo : hi) = mid;
      }
      return r + 0.5 * (lo + hi);
    }
    prev = cur;
    prev_sign = cur_sign;
  }
  throw std::runtime_error("optimal_s0: bracket failure");
}

}  // namespace

Phase2Objective::Phase2Objective(const StepContext& ctx, double mu,
                                 double alpha)
    : ctx_(&ctx), mu_(mu), alpha_(alpha) {
  if (!ctx.sys) throw std::invalid_argument("Phase2Objective: null system");
  n_x_ = ctx.sys->n_free();
  n_gp_ = ctx.sys->n_gp();
}

Eigen::VectorXd Phase2Objective::full_u(const Eigen::VectorXd& xi) const {
  return ctx_->sys->bc.to_full(xi.head(n_x_), ctx_->u_bc);
}

bool Phase2Objective::eval(const Eigen::VectorXd& xi, double& value,
                           Eigen::VectorXd* grad,
                           Eigen::SparseMatrix<double>* hess) const {
  const auto& sys = *ctx_->sys;
  value = kInf;
  if (xi.size() != dim())
    throw std::invalid_argument("Phase2Objective: xi size");

  const Eigen::VectorXd u = full_u(xi);
  const auto s0 = xi.tail(n_gp_);

  double val = 0.0;
  if (grad) grad->setZero(dim());
  Triplets tri;
  Triplets* ht = hess ? &tri : nullptr;
  Eigen::VectorXd gu;  // full-DOF accumulator for the u-indexed pieces
  if (grad) gu.setZero(sys.n_dofs());

  // Contact barrier mu*phi_NNO(slack(u)).
  const Eigen::VectorXd slack = sys.contact.slack(u);
  for (int r = 0; r < slack.size(); ++r) {
    const double s = slack[r];
    if (!(s > 0.0)) return false;
    val -= mu_ * std::log(s);
    const int ih = sys.free_index[sys.contact.rows[r].dof_hi];
    const int il = sys.free_index[sys.contact.rows[r].dof_lo];
    if (grad) {
      if (ih >= 0) (*grad)[ih] -= mu_ / s;
      if (il >= 0) (*grad)[il] += mu_ / s;
    }
    if (ht) {
      const double h = mu_ / (s * s);
      push(ht, ih, ih, h);
      push(ht, il, il, h);
      push(ht, ih, il, -h);
      push(ht, il, ih, -h);
    }
  }

  // Interface cone barriers.
  const int derivs = hess ? 2 : (grad ? 1 : 0);
  for (int i = 0; i < static_cast<int>(sys.face_quad.size()); ++i) {
    std::array<int, 12> map;
    for (int m = 0; m < 12; ++m) map[m] = sys.free_index[sys.iface_dofs[i][m]];
    for (int q = 0; q < 3; ++q) {
      const auto om = assembly::opening_map(sys, i, q, u, derivs);
      if (om.degenerate) return false;
      const int g = 3 * i + q;
      if (!interface_barrier(om, s0[g], 0.0, mu_ * sys.zeta[g], map,
                             n_x_ + g, -1, val, grad, ht))
        return false;
    }
  }

  // Separable interface potential h_alpha(s0; d).
  {
    const auto he =
        material::h_alpha(s0, ctx_->d, sys.face_w, alpha_, sys.coh);
    val += he.value;
    if (grad) grad->tail(n_gp_) += he.grad;
    if (ht)
      for (int g = 0; g < n_gp_; ++g)
        push(ht, n_x_ + g, n_x_ + g, he.hess_diag[g]);
  }

  // Bulk strain energy (full-u indexing, reduced below).
  {
    double b = 0.0;
    Triplets tri_u;
    if (!assembly::bulk_energy(sys, u, b, grad ? &gu : nullptr,
                               ht ? &tri_u : nullptr))
      return false;
    val += b;
    if (ht)
      for (const auto& t : tri_u)
        push(ht, sys.free_index[t.row()], sys.free_index[t.col()], t.value());
  }

  // Momentum energy and external loads.
  if (ctx_->include_momentum) {
    val += assembly::momentum_energy(sys, u, ctx_->u_prev, ctx_->v_prev,
                                     grad ? &gu : nullptr);
    if (ht) {
      const double c = 4.0 / (sys.dt * sys.dt);
      for (int k = 0; k < sys.mass.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.mass, k); it;
             ++it)
          push(ht, sys.free_index[it.row()], sys.free_index[it.col()],
               c * it.value());
    }
  }
  val -= sys.fext.dot(u);
  if (grad) gu -= sys.fext;

  if (grad)
    for (int i = 0; i < n_x_; ++i) (*grad)[i] += gu[sys.bc.free_dofs[i]];
  if (hess) {
    hess->resize(dim(), dim());
    hess->setFromTriplets(tri.begin(), tri.end());
  }
  value = val;
  return true;
}

Eigen::VectorXd Phase2Objective::full_u_gradient(
    const Eigen::VectorXd& xi, Eigen::VectorXd* contact_part) const {
  const auto& sys = *ctx_->sys;
  const Eigen::VectorXd u = full_u(xi);
  const auto s0 = xi.tail(n_gp_);

  Eigen::VectorXd gu = Eigen::VectorXd::Zero(sys.n_dofs());
  if (contact_part) contact_part->setZero(sys.n_dofs());

  const Eigen::VectorXd slack = sys.contact.slack(u);
  for (int r = 0; r < slack.size(); ++r) {
    const double f = mu_ / slack[r];
    gu[sys.contact.rows[r].dof_hi] -= f;
    gu[sys.contact.rows[r].dof_lo] += f;
    if (contact_part) {
      (*contact_part)[sys.contact.rows[r].dof_hi] -= f;
      (*contact_part)[sys.contact.rows[r].dof_lo] += f;
    }
  }

  for (int i = 0; i < static_cast<int>(sys.face_quad.size()); ++i)
    for (int q = 0; q < 3; ++q) {
      const auto om = assembly::opening_map(sys, i, q, u, 1);
      const int g = 3 * i + q;
      const double dsoc = s0[g] * s0[g] - om.c1 * om.c1 - om.c2 * om.c2;
      const double muz = mu_ * sys.zeta[g];
      const double g1 = muz * (om.c1 / dsoc - 1.0 / om.c1);
      const double g2 = muz * (om.c2 / dsoc);
      for (int m = 0; m < 12; ++m)
        gu[sys.iface_dofs[i][m]] += g1 * om.dc1[m] + g2 * om.dc2[m];
    }

  double b = 0.0;
  assembly::bulk_energy(sys, u, b, &gu, nullptr);
  if (ctx_->include_momentum)
    assembly::momentum_energy(sys, u, ctx_->u_prev, ctx_->v_prev, &gu);
  gu -= sys.fext;
  return gu;
}

Phase1Objective::Phase1Objective(const StepContext& ctx, double mu_init,
                                 double big_m)
    : ctx_(&ctx),
      mu_(mu_init),
      big_m_(big_m),
      alpha_(mu_init * std::sqrt(big_m)) {
  if (!ctx.sys) throw std::invalid_argument("Phase1Objective: null system");
  n_u_ = ctx.sys->n_dofs();
  n_gp_ = ctx.sys->n_gp();
}

bool Phase1Objective::eval(const Eigen::VectorXd& xi, double& value,
                           Eigen::VectorXd* grad,
                           Eigen::SparseMatrix<double>* hess) const {
  const auto& sys = *ctx_->sys;
  value = kInf;
  if (xi.size() != dim())
    throw std::invalid_argument("Phase1Objective: xi size");

  const auto u = xi.head(n_u_);
  const auto s0 = xi.segment(n_u_, n_gp_);
  const double t = xi[n_u_ + n_gp_];
  const int it_idx = n_u_ + n_gp_;
  if (!(t > 0.0)) return false;

  double val = 0.0;
  if (grad) grad->setZero(dim());
  Triplets tri;
  Triplets* ht = hess ? &tri : nullptr;
  Eigen::VectorXd gu;
  if (grad) gu.setZero(n_u_);

  // Artificial-variable terms: M t + mu*phi_NNO(t).
  val += big_m_ * t - mu_ * std::log(t);
  if (grad) (*grad)[it_idx] += big_m_ - mu_ / t;
  if (ht) push(ht, it_idx, it_idx, mu_ / (t * t));

  // Contact rows relaxed by t: slack(u) + t > 0.
  const Eigen::VectorXd slack = sys.contact.slack(u);
  for (int r = 0; r < slack.size(); ++r) {
    const double s = slack[r] + t;
    if (!(s > 0.0)) return false;
    val -= mu_ * std::log(s);
    const int ih = sys.contact.rows[r].dof_hi;
    const int il = sys.contact.rows[r].dof_lo;
    if (grad) {
      (*grad)[ih] -= mu_ / s;
      (*grad)[il] += mu_ / s;
      (*grad)[it_idx] -= mu_ / s;
    }
    if (ht) {
      const double h = mu_ / (s * s);
      const int ids[3] = {ih, il, it_idx};
      const double sg[3] = {1.0, -1.0, 1.0};
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          push(ht, ids[a], ids[b], h * sg[a] * sg[b]);
    }
  }

  // Boundary conditions as a pair of relaxed inequalities per constrained
  // DOF: |u_c - b_c| < t.
  for (int c : sys.bc.constrained) {
    const double rc = u[c] - ctx_->u_bc[c];
    const double sp = rc + t, sm = -rc + t;
    if (!(sp > 0.0) || !(sm > 0.0)) return false;
    val -= mu_ * (std::log(sp) + std::log(sm));
    if (grad) {
      (*grad)[c] += mu_ * (1.0 / sm - 1.0 / sp);
      (*grad)[it_idx] -= mu_ * (1.0 / sp + 1.0 / sm);
    }
    if (ht) {
      const double hp = mu_ / (sp * sp), hm = mu_ / (sm * sm);
      push(ht, c, c, hp + hm);
      push(ht, c, it_idx, hp - hm);
      push(ht, it_idx, c, hp - hm);
      push(ht, it_idx, it_idx, hp + hm);
    }
  }

  // Interface cone barriers with the c1 rows relaxed by t.
  const int derivs = hess ? 2 : (grad ? 1 : 0);
  for (int i = 0; i < static_cast<int>(sys.face_quad.size()); ++i) {
    std::array<int, 12> map;
    for (int m = 0; m < 12; ++m) map[m] = sys.iface_dofs[i][m];
    for (int q = 0; q < 3; ++q) {
      const auto om = assembly::opening_map(sys, i, q, u, derivs);
      if (om.degenerate) return false;
      const int g = 3 * i + q;
      if (!interface_barrier(om, s0[g], t, mu_ * sys.zeta[g], map, n_u_ + g,
                             it_idx, val, grad, ht))
        return false;
    }
  }

  {
    const auto he =
        material::h_alpha(s0, ctx_->d, sys.face_w, alpha_, sys.coh);
    val += he.value;
    if (grad) grad->segment(n_u_, n_gp_) += he.grad;
    if (ht)
      for (int g = 0; g < n_gp_; ++g)
        push(ht, n_u_ + g, n_u_ + g, he.hess_diag[g]);
  }

  {
    double b = 0.0;
    if (!assembly::bulk_energy(sys, u, b, grad ? &gu : nullptr, ht)) return false;
    val += b;
  }
  if (ctx_->include_momentum) {
    val += assembly::momentum_energy(sys, u, ctx_->u_prev, ctx_->v_prev,
                                     grad ? &gu : nullptr);
    if (ht) {
      const double c = 4.0 / (sys.dt * sys.dt);
      for (int k = 0; k < sys.mass.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator m(sys.mass, k); m; ++m)
          push(ht, m.row(), m.col(), c * m.value());
    }
  }
  val -= sys.fext.dot(u);
  if (grad) {
    gu -= sys.fext;
    grad->head(n_u_) += gu;
  }
  if (hess) {
    hess->resize(dim(), dim());
    hess->setFromTriplets(tri.begin(), tri.end());
  }
  value = val;
  return true;
}

Eigen::VectorXd optimal_s0(const StepContext& ctx, const Eigen::VectorXd& u,
                           double mu, double alpha) {
  const auto& sys = *ctx.sys;
  const double du = sys.coh.delta_u();
  Eigen::VectorXd s0(sys.n_gp());
  for (int i = 0; i < static_cast<int>(sys.face_quad.size()); ++i)
    for (int q = 0; q < 3; ++q) {
      const auto om = assembly::opening_map(sys, i, q, u, 0);
      if (om.degenerate)
        throw std::runtime_error("optimal_s0: degenerate interface");
      const int g = 3 * i + q;
      const double r = std::hypot(om.c1, om.c2);
      const double ca =
          material::h_alpha_coeff(alpha, sys.face_w[g], ctx.d[g], du);
      s0[g] = solve_s0_point(r, sys.face_w[g], ctx.d[g], mu * sys.zeta[g], ca,
                             sys.coh);
    }
  return s0;
}

double optimal_t(const StepContext& ctx, const Eigen::VectorXd& u, double mu,
                 double big_m) {
  const auto& sys = *ctx.sys;

  // Collect every affine argument a_k + t that must stay positive, with its
  // barrier weight; phi_NNO(t) itself is the pair (0, 1).
  std::vector<std::pair<double, double>> rows;  // (a_k, weight)
  rows.emplace_back(0.0, 1.0);
  const Eigen::VectorXd slack = sys.contact.slack(u);
  for (int r = 0; r < slack.size(); ++r) rows.emplace_back(slack[r], 1.0);
  for (int c : sys.bc.constrained) {
    const double rc = u[c] - ctx.u_bc[c];
    rows.emplace_back(rc, 1.0);
    rows.emplace_back(-rc, 1.0);
  }
  for (int i = 0; i < static_cast<int>(sys.face_quad.size()); ++i)
    for (int q = 0; q < 3; ++q) {
      const auto om = assembly::opening_map(sys, i, q, u, 0);
      if (om.degenerate)
        throw std::runtime_error("optimal_t: degenerate interface");
      rows.emplace_back(om.c1, sys.zeta[3 * i + q]);
    }

  double tmin = 0.0;
  for (const auto& [a, w] : rows) tmin = std::max(tmin, -a);
  // Precompute nonnegative bases so the binding row contributes exactly
  // gamma to its argument (no cancellation at the boundary).
  std::vector<std::pair<double, double>> base;
  base.reserve(rows.size());
  for (const auto& [a, w] : rows) base.emplace_back(std::max(0.0, a + tmin), w);

  // F(t) = M t - mu sum w_k log(a_k + t) is convex; bisect on F'.
  const auto fprime = [&](double gamma) {
    double acc = big_m;
    for (const auto& [b, w] : base) acc -= mu * w / (b + gamma);
    return acc;
  };

  double hi = std::max(tmin, 1.0);
  for (int k = 0; fprime(hi) <= 0.0; ++k) {
    hi *= 2.0;
    if (k > 400) throw std::runtime_error("optimal_t: no ascent bracket");
  }
  double lo = 1e-300;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (fprime(mid) < 0.0 ? lo : hi) = mid;
  }
  return tmin + 0.5 * (lo + hi);
}

bool phase2_feasible(const StepContext& ctx, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& s0, double margin) {
  const auto& sys = *ctx.sys;
  const Eigen::VectorXd u = sys.bc.to_full(x, ctx.u_bc);

  double b = 0.0;
  if (!assembly::bulk_energy(sys, u, b)) return false;

  const Eigen::VectorXd slack = sys.contact.slack(u);
  for (int r = 0; r < slack.size(); ++r)
    if (!(slack[r] > margin)) return false;

  for (int i = 0; i < static_cast<int>(sys.face_quad.size()); ++i)
    for (int q = 0; q < 3; ++q) {
      const auto om = assembly::opening_map(sys, i, q, u, 0);
      if (om.degenerate) return false;
      const int g = 3 * i + q;
      if (!(om.c1 > margin)) return false;
      if (!(s0[g] - std::hypot(om.c1, om.c2) > margin)) return false;
    }
  return true;
}

}  // namespace conefrac::objectives

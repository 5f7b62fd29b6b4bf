#include "conefrac/cone.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace conefrac::cone {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

BarrierEval infeasible_eval() {
  BarrierEval e;
  e.feasible = false;
  e.value = kInf;
  return e;
}
}  // namespace

BarrierEval phi_nno(const Eigen::VectorXd& v, bool want_derivatives) {
  if (v.size() == 0) throw std::invalid_argument("phi_nno: empty vector");
  if ((v.array() <= 0.0).any()) return infeasible_eval();

  BarrierEval e;
  e.feasible = true;
  e.value = -v.array().log().sum();
  if (want_derivatives) {
    e.grad = -v.array().inverse();
    e.hess = v.array().inverse().square().matrix().asDiagonal();
  }
  return e;
}

BarrierEval phi_soc(const Eigen::VectorXd& x, bool want_derivatives) {
  const int n = static_cast<int>(x.size());
  if (n < 2) throw std::invalid_argument("phi_soc: need dimension >= 2");

  // d = x_1^2 - sum_{i>=2} x_i^2, interior iff x_1 > 0 and d > 0.
  const double tail2 = x.tail(n - 1).squaredNorm();
  const double d = x[0] * x[0] - tail2;
  if (x[0] <= 0.0 || d <= 0.0) return infeasible_eval();

  BarrierEval e;
  e.feasible = true;
  e.value = -0.5 * std::log(d);
  if (want_derivatives) {
    // With Q = diag(1,-1,...,-1) and w = Qx:
    //   grad = -w / d,  hess = (2 w w^T - d Q) / d^2.
    Eigen::VectorXd w = x;
    w.tail(n - 1) *= -1.0;
    e.grad = -w / d;
    e.hess = (2.0 / (d * d)) * (w * w.transpose());
    e.hess(0, 0) -= 1.0 / d;
    for (int i = 1; i < n; ++i) e.hess(i, i) += 1.0 / d;
  }
  return e;
}

Eigen::VectorXd jordan_product(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& s, Tag tag) {
  if (x.size() != s.size())
    throw std::invalid_argument("jordan_product: dimension mismatch");
  if (tag == Tag::NNO) return x.cwiseProduct(s);

  const int n = static_cast<int>(x.size());
  if (n < 2) throw std::invalid_argument("jordan_product: SOC needs dim >= 2");
  Eigen::VectorXd p(n);
  p[0] = x.dot(s);
  p.tail(n - 1) = x[0] * s.tail(n - 1) + s[0] * x.tail(n - 1);
  return p;
}

Eigen::VectorXd jordan_identity(int dim, Tag tag) {
  if (dim < 1 || (tag == Tag::SOC && dim < 2))
    throw std::invalid_argument("jordan_identity: bad dimension");
  if (tag == Tag::NNO) return Eigen::VectorXd::Ones(dim);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
  e[0] = 1.0;
  return e;
}

Eigen::VectorXd dual_from_primal(const Eigen::VectorXd& x, double mu,
                                 Tag tag) {
  if (mu <= 0.0) throw std::invalid_argument("dual_from_primal: mu <= 0");
  if (tag == Tag::NNO) {
    if ((x.array() <= 0.0).any())
      throw std::invalid_argument("dual_from_primal: x not interior (NNO)");
    return mu * x.array().inverse().matrix();
  }
  const int n = static_cast<int>(x.size());
  const double d = x[0] * x[0] - x.tail(n - 1).squaredNorm();
  if (x[0] <= 0.0 || d <= 0.0)
    throw std::invalid_argument("dual_from_primal: x not interior (SOC)");
  // s = -mu grad phi : s_1 = mu x_1 / d, s_i = -mu x_i / d.  Then
  // x o s = mu e by direct computation.
  Eigen::VectorXd s(n);
  s[0] = mu * x[0] / d;
  s.tail(n - 1) = -(mu / d) * x.tail(n - 1);
  return s;
}

bool is_strictly_feasible(const Eigen::VectorXd& v, Tag tag, double margin) {
  if (tag == Tag::NNO) return (v.array() > margin).all();
  const int n = static_cast<int>(v.size());
  if (n < 2) throw std::invalid_argument("is_strictly_feasible: SOC dim < 2");
  return v[0] - v.tail(n - 1).norm() > margin;
}

bool is_strictly_feasible(const Eigen::VectorXd& v, const Product& product,
                          double margin) {
  if (v.size() != product.total_dim())
    throw std::invalid_argument("is_strictly_feasible: dimension mismatch");
  int off = 0;
  for (const auto& f : product.factors) {
    if (!is_strictly_feasible(v.segment(off, f.dim), f.tag, margin))
      return false;
    off += f.dim;
  }
  return true;
}

}  // namespace conefrac::cone

#pragma once

// Barrier calculus for products of nonnegative orthants and second-order
// (Lorentz) cones.  Everything here is dimension-generic; the fracture
// assembly only ever uses 3-dimensional Lorentz factors and scalar orthant
// factors, but the tests exercise higher dimensions too.

#include <Eigen/Dense>

#include <vector>

namespace conefrac::cone {

enum class Tag { NNO, SOC };

struct Factor {
  Tag tag = Tag::NNO;
  int dim = 1;
};

// Ordered list of cone factors; the concatenation of the factor dimensions
// defines the layout of a conic vector.
struct Product {
  std::vector<Factor> factors;

  int total_dim() const {
    int n = 0;
    for (const auto& f : factors) n += f.dim;
    return n;
  }
};

// Result of a barrier evaluation.  When `feasible` is false the point lies
// outside the open cone: `value` is +inf and grad/hess are left empty.  The
// caller decides what to do with an infeasible trial point; no exception is
// involved, matching the trust-region rejection path.
struct BarrierEval {
  bool feasible = false;
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};

// phi(v) = -sum_i log(v_i) on the open orthant v > 0.
BarrierEval phi_nno(const Eigen::VectorXd& v, bool want_derivatives = true);

// phi(x) = -1/2 log(x_1^2 - x_2^2 - ... - x_n^2) on the open Lorentz cone
// x_1 > ||(x_2..x_n)||.
BarrierEval phi_soc(const Eigen::VectorXd& x, bool want_derivatives = true);

// Jordan product of two vectors living in one cone factor.
//   NNO: elementwise product.
//   SOC: (x o s)_1 = <x,s>, (x o s)_i = x_1 s_i + s_1 x_i for i >= 2.
Eigen::VectorXd jordan_product(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& s, Tag tag);

// Identity element of the Jordan algebra: all-ones for NNO, (1,0,...,0)
// for SOC.
Eigen::VectorXd jordan_identity(int dim, Tag tag);

// Dual point generated by the barrier gradient, s = -mu * grad phi(x).  It is
// interior to the (self-)dual cone and satisfies x o s = mu * e exactly.
Eigen::VectorXd dual_from_primal(const Eigen::VectorXd& x, double mu, Tag tag);

// Strict feasibility of a single factor with an absolute slack margin:
// NNO requires min_i v_i > margin, SOC requires x_1 - ||(x_2..)|| > margin.
bool is_strictly_feasible(const Eigen::VectorXd& v, Tag tag,
                          double margin = 0.0);

// Same test applied blockwise over a cone product.
bool is_strictly_feasible(const Eigen::VectorXd& v, const Product& product,
                          double margin = 0.0);

}  // namespace conefrac::cone

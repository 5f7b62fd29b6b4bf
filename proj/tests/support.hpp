#pragma once

// Shared fixtures and helpers for the unit and acceptance suites: in-memory
// mesh generators, assembled reference problems, and finite-difference
// derivative probes.

#include <doctest.h>

#include <Eigen/Dense>

#include <random>
#include <string>
#include <vector>

#include "conefrac/assembly.hpp"
#include "conefrac/mesh.hpp"
#include "conefrac/objectives.hpp"
#include "conefrac/trustregion.hpp"

namespace testsupport {

inline std::string fixture(const std::string& name) {
  return std::string(CONEFRAC_FIXTURE_DIR "/") + name;
}

// The two-element cohesive strip: a triangle of base kPatchL split by the
// vertical median, one interface of length kPatchL along x = kPatchHalf.
inline constexpr double kPatchL = 100.0;
inline constexpr double kPatchHalf = 50.0;

inline conefrac::mesh::Mesh patch_mesh() {
  conefrac::mesh::Mesh m;
  const double L = kPatchL;
  m.nodes = {{0, 0},          {0.5 * L, 0},     {0.5 * L, L},
             {L, 0},          {0.25 * L, 0},    {0.5 * L, 0.5 * L},
             {0.25 * L, 0.5 * L}, {0.75 * L, 0}, {0.75 * L, 0.5 * L}};
  m.elements = {{0, 1, 2, 4, 5, 6}, {1, 3, 2, 7, 8, 5}};
  m.element_part = {0, 0};
  m.n_parts = 1;
  m.nodesets["outer"] = {0, 3, 4, 6, 7, 8};
  return m;
}

// Structured block of nx-by-ny quads, each split into two triangles, appended
// to an existing mesh as a new connected component.  Quadratic nodes live on
// the (2nx+1)-by-(2ny+1) lattice.  Adds nodesets prefix+"_bottom", "_top",
// "_left", "_right" over the full lattice edges.
inline void append_block(conefrac::mesh::Mesh& m, int nx, int ny, double x0,
                         double y0, double w, double h,
                         const std::string& prefix) {
  const int base = static_cast<int>(m.nodes.size());
  const int cols = 2 * nx + 1, rows = 2 * ny + 1;
  auto id = [&](int ix, int iy) { return base + iy * cols + ix; };
  for (int iy = 0; iy < rows; ++iy)
    for (int ix = 0; ix < cols; ++ix)
      m.nodes.push_back(
          {x0 + ix * (w / (2.0 * nx)), y0 + iy * (h / (2.0 * ny))});
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int ax = 2 * i, ay = 2 * j;
      m.elements.push_back({id(ax, ay), id(ax + 2, ay), id(ax + 2, ay + 2),
                            id(ax + 1, ay), id(ax + 2, ay + 1),
                            id(ax + 1, ay + 1)});
      m.elements.push_back({id(ax, ay), id(ax + 2, ay + 2), id(ax, ay + 2),
                            id(ax + 1, ay + 1), id(ax + 1, ay + 2),
                            id(ax, ay + 1)});
    }
  }
  auto& bottom = m.nodesets[prefix + "_bottom"];
  auto& top = m.nodesets[prefix + "_top"];
  for (int ix = 0; ix < cols; ++ix) {
    bottom.push_back(id(ix, 0));
    top.push_back(id(ix, rows - 1));
  }
  auto& left = m.nodesets[prefix + "_left"];
  auto& right = m.nodesets[prefix + "_right"];
  for (int iy = 0; iy < rows; ++iy) {
    left.push_back(id(0, iy));
    right.push_back(id(cols - 1, iy));
  }
}

inline conefrac::mesh::Mesh block_mesh(int nx, int ny, double w = 1.0,
                                       double h = 1.0) {
  conefrac::mesh::Mesh m;
  append_block(m, nx, ny, 0.0, 0.0, w, h, "b");
  m.element_part.assign(m.elements.size(), 0);
  m.n_parts = 1;
  return m;
}

// Bulk and interface parameters sized for the barrier stages: the solver's
// fixed stabilization weights keep a loaded interface on the cohesive branch
// only when sigma_c^2 stays well below 100 * G_c, and the strip tears stably
// (no snap-back) only when E/(1-nu^2)/L exceeds sigma_c/delta_u.  These
// values satisfy both with comfortable margins.
inline conefrac::material::BulkParams patch_bulk() {
  conefrac::material::BulkParams p;
  p.model = conefrac::material::BulkModel::kLinear;
  p.E = 1000.0;
  p.nu = 0.3;
  p.rho = 1e-9;
  return p;
}

inline conefrac::material::CohesiveParams patch_cohesive() {
  conefrac::material::CohesiveParams c;
  c.sigma_c = 0.25;
  c.G_c = 0.005;  // delta_u = 0.04
  c.beta_mix = 1.0;
  return c;
}

// Strip pulled by the exact affine history u = (eps_rate * t * (X - 50), 0)
// prescribed on every non-interface node; the uniform-strain state is then
// the exact pre-onset solution and the nominal interface traction is
// E/(1-nu^2) * eps_rate * t.
struct PatchProblem {
  conefrac::assembly::System sys;
  double eps_rate = 0.0;
};

inline PatchProblem make_patch_problem(double eps_rate, double dt,
                                       int energy_rule = 3) {
  using namespace conefrac;
  mesh::Mesh m = patch_mesh();
  mesh::FracturedMesh fm = mesh::insert_interfaces(m);
  std::vector<mesh::DofConstraint> cons;
  for (int n : fm.nodesets.at("outer")) {
    const double vx = eps_rate * (fm.nodes[n].x() - kPatchHalf);
    cons.push_back({2 * n, 0.0, vx});
    cons.push_back({2 * n + 1, 0.0, 0.0});
  }
  mesh::BoundaryOperator bc = mesh::build_bc(fm, cons);
  assembly::SystemOptions opt;
  opt.energy_rule = energy_rule;
  opt.dt = dt;
  PatchProblem p{assembly::build_system(std::move(fm), {patch_bulk()},
                                        patch_cohesive(), std::move(bc),
                                        mesh::LinearInequalities{}, opt),
                 eps_rate};
  return p;
}

// Central-difference probes for any trust-region objective.
inline Eigen::VectorXd fd_gradient(
    const conefrac::trustregion::TrustRegionObjective& f,
    const Eigen::VectorXd& xi, double h) {
  const int n = static_cast<int>(xi.size());
  Eigen::VectorXd g(n), x = xi;
  for (int i = 0; i < n; ++i) {
    const double hi = h * (1.0 + std::abs(xi[i]));
    double fp, fm;
    x[i] = xi[i] + hi;
    REQUIRE(f.eval(x, fp, nullptr, nullptr));
    x[i] = xi[i] - hi;
    REQUIRE(f.eval(x, fm, nullptr, nullptr));
    x[i] = xi[i];
    g[i] = (fp - fm) / (2.0 * hi);
  }
  return g;
}

inline Eigen::VectorXd fd_hess_vec(
    const conefrac::trustregion::TrustRegionObjective& f,
    const Eigen::VectorXd& xi, const Eigen::VectorXd& dir, double h) {
  const double s = h * (1.0 + xi.norm()) / std::max(dir.norm(), 1e-300);
  double v;
  Eigen::VectorXd gp, gm;
  REQUIRE(f.eval(xi + s * dir, v, &gp, nullptr));
  REQUIRE(f.eval(xi - s * dir, v, &gm, nullptr));
  return (gp - gm) / (2.0 * s);
}

inline double rel_err(const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
  return (got - want).norm() / std::max(1e-12, want.norm());
}

}  // namespace testsupport

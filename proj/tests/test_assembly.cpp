#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "conefrac/assembly.hpp"
#include "conefrac/mesh.hpp"
#include "support.hpp"

using namespace conefrac;
using testsupport::block_mesh;
using testsupport::patch_bulk;
using testsupport::patch_cohesive;
using testsupport::patch_mesh;
using testsupport::rel_err;

namespace {

// all-free patch system with a distinguishable mixity weight
assembly::System free_patch_system(double beta_mix) {
  mesh::FracturedMesh fm = mesh::insert_interfaces(patch_mesh());
  mesh::BoundaryOperator bc = mesh::build_bc(fm, {});
  material::CohesiveParams coh = patch_cohesive();
  coh.beta_mix = beta_mix;
  return assembly::build_system(std::move(fm), {patch_bulk()}, coh,
                                std::move(bc), mesh::LinearInequalities{}, {});
}

assembly::System fractured_block_system(int nx, int ny,
                                        const material::BulkParams& mat,
                                        int energy_rule = 3) {
  mesh::FracturedMesh fm = mesh::insert_interfaces(block_mesh(nx, ny));
  mesh::BoundaryOperator bc = mesh::build_bc(fm, {});
  assembly::SystemOptions opt;
  opt.energy_rule = energy_rule;
  return assembly::build_system(std::move(fm), {mat}, patch_cohesive(),
                                std::move(bc), mesh::LinearInequalities{}, opt);
}

material::BulkParams knowles_mat() {
  material::BulkParams p;
  p.model = material::BulkModel::kNeoHookean;
  p.E = 3.24e9;
  p.nu = 0.35;
  p.rho = 1200.0;
  return p;
}

Eigen::VectorXd random_u(int n_dofs, double amp, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-amp, amp);
  Eigen::VectorXd u(n_dofs);
  for (int i = 0; i < n_dofs; ++i) u[i] = unif(rng);
  return u;
}

}  // namespace

TEST_SUITE("assembly") {

TEST_CASE("system caching: quadrature, interface weights, index maps") {
  const auto p = testsupport::make_patch_problem(0.0, 1.0);
  const assembly::System& sys = p.sys;

  REQUIRE(sys.bulk_quad.size() == 2);
  CHECK(sys.bulk_quad[0].size() == 3);  // default energy rule
  REQUIRE(sys.face_quad.size() == 1);
  CHECK(sys.n_gp() == 3);
  CHECK(sys.face_w.size() == 3);
  CHECK(sys.zeta.size() == 3);

  // each element covers area 2500; reference bulk weights sum to it
  for (int e = 0; e < 2; ++e) {
    double a = 0.0;
    for (const auto& bq : sys.bulk_quad[e]) a += bq.w;
    CHECK(a == doctest::Approx(2500.0).epsilon(1e-14));
  }

  // the single interface runs from (50, 0) to (50, 100): length 100
  CHECK(sys.face_w.sum() == doctest::Approx(100.0).epsilon(1e-14));
  for (int g = 0; g < 3; ++g) {
    CHECK(sys.face_w[g] > 0.0);
    CHECK(sys.zeta[g] ==
          doctest::Approx(1e4 * sys.coh.G_c * sys.face_w[g]).epsilon(1e-15));
  }

  // interface DOF table interleaves x/y per side node
  const auto& f = sys.fm.interfaces[0];
  for (int k = 0; k < 3; ++k) {
    CHECK(sys.iface_dofs[0][2 * k] == 2 * f.nodes_a[k]);
    CHECK(sys.iface_dofs[0][2 * k + 1] == 2 * f.nodes_a[k] + 1);
    CHECK(sys.iface_dofs[0][6 + 2 * k] == 2 * f.nodes_b[k]);
    CHECK(sys.iface_dofs[0][6 + 2 * k + 1] == 2 * f.nodes_b[k] + 1);
  }

  // free_index inverts the free-DOF list and is -1 on constrained DOFs
  for (int i = 0; i < sys.bc.n_free(); ++i)
    CHECK(sys.free_index[sys.bc.free_dofs[i]] == i);
  for (int d : sys.bc.constrained) CHECK(sys.free_index[d] == -1);

  CHECK(sys.fext.size() == sys.n_dofs());
  CHECK(sys.fext.norm() == 0.0);
}

TEST_CASE("build_system rejects inconsistent inputs") {
  auto fm = [] { return mesh::insert_interfaces(patch_mesh()); };
  auto bc = [&] {
    auto f = fm();
    return mesh::build_bc(f, {});
  };
  CHECK_THROWS_AS(assembly::build_system(fm(), {patch_bulk(), patch_bulk()},
                                         patch_cohesive(), bc(),
                                         mesh::LinearInequalities{}, {}),
                  std::invalid_argument);
  assembly::SystemOptions bad_rule;
  bad_rule.energy_rule = 4;
  CHECK_THROWS_AS(assembly::build_system(fm(), {patch_bulk()},
                                         patch_cohesive(), bc(),
                                         mesh::LinearInequalities{}, bad_rule),
                  std::invalid_argument);
  assembly::SystemOptions bad_dt;
  bad_dt.dt = 0.0;
  CHECK_THROWS_AS(assembly::build_system(fm(), {patch_bulk()},
                                         patch_cohesive(), bc(),
                                         mesh::LinearInequalities{}, bad_dt),
                  std::invalid_argument);
  CHECK_THROWS_AS(assembly::build_system(fm(), {patch_bulk()},
                                         patch_cohesive(),
                                         mesh::BoundaryOperator{},
                                         mesh::LinearInequalities{}, {}),
                  std::invalid_argument);
}

TEST_CASE("consistent mass: exact entries, SPD, total mass per axis") {
  // energy_rule 3 must not leak into the mass, which needs the 6-point rule
  const auto p = testsupport::make_patch_problem(0.0, 1.0, 3);
  const assembly::System& sys = p.sys;
  const Eigen::MatrixXd M = Eigen::MatrixXd(sys.mass);

  CHECK((M - M.transpose()).cwiseAbs().maxCoeff() == 0.0);

  // x and y blocks are identical and decoupled
  for (int a = 0; a < sys.fm.n_nodes(); ++a)
    for (int b = 0; b < sys.fm.n_nodes(); ++b) {
      CHECK(M(2 * a, 2 * b + 1) == 0.0);
      CHECK(M(2 * a, 2 * b) == M(2 * a + 1, 2 * b + 1));
    }

  // elements share no nodes after duplication: no cross-element coupling
  for (int a : sys.fm.elements[0])
    for (int b : sys.fm.elements[1]) CHECK(M(2 * a, 2 * b) == 0.0);

  // exact reference value rho * detJ / 60 on an affine element's corner;
  // a 3-point rule cannot reproduce this quartic integral, so the check also
  // pins the rule choice
  const double rho = sys.bulk[0].rho;
  const double detJ = 5000.0;  // element area 2500
  const int c0 = sys.fm.elements[0][0];
  CHECK(M(2 * c0, 2 * c0) ==
        doctest::Approx(rho * detJ / 60.0).epsilon(1e-14));

  // rigid x-translation recovers the total mass rho * area
  Eigen::VectorXd ex = Eigen::VectorXd::Zero(sys.n_dofs());
  for (int n = 0; n < sys.fm.n_nodes(); ++n) ex[2 * n] = 1.0;
  CHECK(ex.dot(M * ex) == doctest::Approx(rho * 5000.0).epsilon(1e-13));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("bulk energy: zero states, frame indifference, part materials") {
  const auto sys = fractured_block_system(2, 2, knowles_mat());
  const int nd = sys.n_dofs();

  double v = 0.0;
  REQUIRE(assembly::bulk_energy(sys, Eigen::VectorXd::Zero(nd), v));
  CHECK(v == 0.0);

  Eigen::VectorXd trans(nd);
  for (int n = 0; n < sys.fm.n_nodes(); ++n) trans.segment<2>(2 * n) << 0.3, -0.7;
  REQUIRE(assembly::bulk_energy(sys, trans, v));
  CHECK(std::abs(v) < 1e-6);

  // finite rotation: energy-free for the hyperelastic model ...
  const double th = 0.3;
  Eigen::Matrix2d R;
  R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  Eigen::VectorXd rot(nd);
  for (int n = 0; n < sys.fm.n_nodes(); ++n)
    rot.segment<2>(2 * n) = R * sys.fm.nodes[n] - sys.fm.nodes[n];
  REQUIRE(assembly::bulk_energy(sys, rot, v));
  CHECK(std::abs(v) < 1e-5);

  // ... but not for the small-strain model
  auto lin = knowles_mat();
  lin.model = material::BulkModel::kLinear;
  const auto lsys = fractured_block_system(2, 2, lin);
  REQUIRE(assembly::bulk_energy(lsys, rot, v));
  CHECK(v > 1e6);
}

TEST_CASE("bulk energy derivatives match finite differences") {
  for (const bool knowles : {true, false}) {
    CAPTURE(knowles);
    auto mat = knowles_mat();
    if (!knowles) mat.model = material::BulkModel::kLinear;
    const auto sys = fractured_block_system(2, 2, mat);
    const int nd = sys.n_dofs();
    const Eigen::VectorXd u = random_u(nd, 1e-3, 405);

    double v0 = 0.0;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(nd);
    std::vector<Eigen::Triplet<double>> ht;
    REQUIRE(assembly::bulk_energy(sys, u, v0, &g, &ht));

    // value-level finite differences for the gradient
    Eigen::VectorXd gfd(nd);
    Eigen::VectorXd up = u;
    for (int i = 0; i < nd; ++i) {
      const double h = 1e-7;
      double vp, vm;
      up[i] = u[i] + h;
      REQUIRE(assembly::bulk_energy(sys, up, vp));
      up[i] = u[i] - h;
      REQUIRE(assembly::bulk_energy(sys, up, vm));
      up[i] = u[i];
      gfd[i] = (vp - vm) / (2 * h);
    }
    CHECK(rel_err(g, gfd) < 1e-6);

    // gradient-level finite differences for Hessian-vector products
    Eigen::SparseMatrix<double> H(nd, nd);
    H.setFromTriplets(ht.begin(), ht.end());
    const Eigen::MatrixXd Hd = Eigen::MatrixXd(H);
    CHECK((Hd - Hd.transpose()).cwiseAbs().maxCoeff() <
          1e-12 * Hd.cwiseAbs().maxCoeff());

    std::mt19937 rng(406);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd dir(nd);
      for (int i = 0; i < nd; ++i) dir[i] = gauss(rng);
      dir.normalize();
      const double s = 1e-7;
      double vv;
      Eigen::VectorXd gp = Eigen::VectorXd::Zero(nd);
      Eigen::VectorXd gm = Eigen::VectorXd::Zero(nd);
      REQUIRE(assembly::bulk_energy(sys, u + s * dir, vv, &gp));
      REQUIRE(assembly::bulk_energy(sys, u - s * dir, vv, &gm));
      CHECK(rel_err(Hd * dir, (gp - gm) / (2 * s)) < 1e-6);
    }

    // grad accumulates instead of overwriting
    Eigen::VectorXd g2 = Eigen::VectorXd::Ones(nd);
    double v2;
    REQUIRE(assembly::bulk_energy(sys, u, v2, &g2));
    CHECK(rel_err(g2, (g + Eigen::VectorXd::Ones(nd)).eval()) < 1e-14);
  }
}

TEST_CASE("bulk energy flags inverted elements, linear model never does") {
  const auto sys = fractured_block_system(1, 1, knowles_mat());
  Eigen::VectorXd u = Eigen::VectorXd::Zero(sys.n_dofs());
  for (int n = 0; n < sys.fm.n_nodes(); ++n)
    u[2 * n] = -2.0 * sys.fm.nodes[n].x();  // mirror: F = diag(-1, 1)

  double v = 0.0;
  int bad = -1;
  CHECK_FALSE(assembly::bulk_energy(sys, u, v, nullptr, nullptr, &bad));
  CHECK(std::isinf(v));
  CHECK(bad == 0);

  auto lin = knowles_mat();
  lin.model = material::BulkModel::kLinear;
  const auto lsys = fractured_block_system(1, 1, lin);
  CHECK(assembly::bulk_energy(lsys, u, v));
  CHECK(std::isfinite(v));
}

TEST_CASE("momentum energy and its gradient") {
  auto p = testsupport::make_patch_problem(0.0, 0.1);  // dt = 0.1
  const assembly::System& sys = p.sys;
  const int nd = sys.n_dofs();
  const Eigen::VectorXd u = random_u(nd, 0.01, 407);
  const Eigen::VectorXd up = random_u(nd, 0.01, 408);
  const Eigen::VectorXd vp = random_u(nd, 0.1, 409);

  const Eigen::VectorXd w = u - up - 0.5 * sys.dt * vp;
  const double want = (2.0 / (sys.dt * sys.dt)) * w.dot(sys.mass * w);
  Eigen::VectorXd g = Eigen::VectorXd::Ones(nd);  // accumulation sentinel
  const double got = assembly::momentum_energy(sys, u, up, vp, &g);
  CHECK(got == doctest::Approx(want).epsilon(1e-13));

  const Eigen::VectorXd want_g =
      Eigen::VectorXd::Ones(nd) +
      (4.0 / (sys.dt * sys.dt)) * (sys.mass * w).eval();
  CHECK(rel_err(g, want_g) < 1e-13);

  // finite differences on the value (quadratic: exact up to roundoff)
  Eigen::VectorXd gfd(nd), ux = u;
  for (int i = 0; i < nd; ++i) {
    const double h = 1e-6;
    ux[i] = u[i] + h;
    const double vpv = assembly::momentum_energy(sys, ux, up, vp);
    ux[i] = u[i] - h;
    const double vmv = assembly::momentum_energy(sys, ux, up, vp);
    ux[i] = u[i];
    gfd[i] = (vpv - vmv) / (2 * h);
  }
  CHECK(rel_err(g - Eigen::VectorXd::Ones(nd), gfd) < 1e-8);
}

TEST_CASE("opening maps: hand-checked jumps on the vertical interface") {
  const auto sys = free_patch_system(2.0);  // mixity weight 2
  const auto& f = sys.fm.interfaces[0];
  const int nd = sys.n_dofs();

  // side B is the left element; moving it left by g opens the interface
  const double g = 1e-3, s = 2e-3;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(nd);
  for (int k = 0; k < 3; ++k) {
    u[2 * f.nodes_b[k]] = -g;
    u[2 * f.nodes_b[k] + 1] = s;
  }
  for (int q = 0; q < 3; ++q) {
    const auto om = assembly::opening_map(sys, 0, q, u, 0);
    REQUIRE_FALSE(om.degenerate);
    CHECK(om.c1 == doctest::Approx(g).epsilon(1e-13));
    CHECK(om.c2 == doctest::Approx(2.0 * s).epsilon(1e-13));
  }

  // closing instead: negative normal opening
  for (int q = 0; q < 3; ++q) {
    const auto om = assembly::opening_map(sys, 0, q, -u, 0);
    CHECK(om.c1 == doctest::Approx(-g).epsilon(1e-13));
  }
}

TEST_CASE("opening maps are objective under superposed rigid motion") {
  const auto sys = free_patch_system(2.0);
  const auto& f = sys.fm.interfaces[0];
  const int nd = sys.n_dofs();

  Eigen::VectorXd u0 = Eigen::VectorXd::Zero(nd);
  for (int k = 0; k < 3; ++k) {
    u0[2 * f.nodes_b[k]] = -1e-3;
    u0[2 * f.nodes_b[k] + 1] = 5e-4;
  }
  double c1_ref[3], c2_ref[3];
  for (int q = 0; q < 3; ++q) {
    const auto om = assembly::opening_map(sys, 0, q, u0, 0);
    c1_ref[q] = om.c1;
    c2_ref[q] = om.c2;
  }

  const double th = 0.8;
  Eigen::Matrix2d R;
  R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  const Eigen::Vector2d shift(3.0, -2.0);
  Eigen::VectorXd u1(nd);
  for (int n = 0; n < sys.fm.n_nodes(); ++n) {
    const Eigen::Vector2d x = sys.fm.nodes[n] + u0.segment<2>(2 * n);
    u1.segment<2>(2 * n) = R * x + shift - sys.fm.nodes[n];
  }
  for (int q = 0; q < 3; ++q) {
    const auto om = assembly::opening_map(sys, 0, q, u1, 0);
    CHECK(om.c1 == doctest::Approx(c1_ref[q]).epsilon(1e-12));
    CHECK(om.c2 == doctest::Approx(c2_ref[q]).epsilon(1e-12));
  }

  // pure rigid motion of the closed mesh: no opening at all
  Eigen::VectorXd ur(nd);
  for (int n = 0; n < sys.fm.n_nodes(); ++n)
    ur.segment<2>(2 * n) = R * sys.fm.nodes[n] + shift - sys.fm.nodes[n];
  for (int q = 0; q < 3; ++q) {
    const auto om = assembly::opening_map(sys, 0, q, ur, 0);
    CHECK(std::abs(om.c1) < 1e-14);
    CHECK(std::abs(om.c2) < 1e-14);
  }
}

TEST_CASE("opening map derivatives match finite differences") {
  const auto sys = free_patch_system(2.0);
  const int nd = sys.n_dofs();
  Eigen::VectorXd u = random_u(nd, 0.05, 410);

  for (int q = 0; q < 3; ++q) {
    const auto om = assembly::opening_map(sys, 0, q, u, 2);
    REQUIRE_FALSE(om.degenerate);

    Eigen::Matrix<double, 12, 1> dc1_fd, dc2_fd;
    Eigen::Matrix<double, 12, 12> d2c1_fd, d2c2_fd;
    const double h = 1e-6, h2 = 1e-5;
    for (int m = 0; m < 12; ++m) {
      const int dof = sys.iface_dofs[0][m];
      const double keep = u[dof];
      u[dof] = keep + h;
      const auto omp = assembly::opening_map(sys, 0, q, u, 0);
      u[dof] = keep - h;
      const auto omm = assembly::opening_map(sys, 0, q, u, 0);
      dc1_fd[m] = (omp.c1 - omm.c1) / (2 * h);
      dc2_fd[m] = (omp.c2 - omm.c2) / (2 * h);

      u[dof] = keep + h2;
      const auto gp = assembly::opening_map(sys, 0, q, u, 1);
      u[dof] = keep - h2;
      const auto gm = assembly::opening_map(sys, 0, q, u, 1);
      u[dof] = keep;
      d2c1_fd.col(m) = (gp.dc1 - gm.dc1) / (2 * h2);
      d2c2_fd.col(m) = (gp.dc2 - gm.dc2) / (2 * h2);
    }
    CHECK((om.dc1 - dc1_fd).norm() < 1e-7 * (1.0 + om.dc1.norm()));
    CHECK((om.dc2 - dc2_fd).norm() < 1e-7 * (1.0 + om.dc2.norm()));
    CHECK((om.d2c1 - d2c1_fd).norm() < 1e-5 * (1.0 + om.d2c1.norm()));
    CHECK((om.d2c2 - d2c2_fd).norm() < 1e-5 * (1.0 + om.d2c2.norm()));
    CHECK((om.d2c1 - om.d2c1.transpose()).norm() == 0.0);
    CHECK((om.d2c2 - om.d2c2.transpose()).norm() == 0.0);
  }
}

TEST_CASE("effective openings gather all Gauss points; degenerate throws") {
  const auto sys = free_patch_system(2.0);
  const int nd = sys.n_dofs();
  const Eigen::VectorXd u = random_u(nd, 0.02, 411);

  const Eigen::VectorXd eff = assembly::effective_openings(sys, u);
  REQUIRE(eff.size() == 3);
  for (int q = 0; q < 3; ++q) {
    const auto om = assembly::opening_map(sys, 0, q, u, 0);
    CHECK(eff[q] == doctest::Approx(std::hypot(om.c1, om.c2)).epsilon(1e-14));
  }

  // collapse both sides of the interface onto one point: the mid-surface
  // tangent vanishes
  Eigen::VectorXd uc = Eigen::VectorXd::Zero(nd);
  const auto& f = sys.fm.interfaces[0];
  const Eigen::Vector2d P(50.0, 50.0);
  for (int k = 0; k < 3; ++k) {
    uc.segment<2>(2 * f.nodes_a[k]) = P - sys.fm.nodes[f.nodes_a[k]];
    uc.segment<2>(2 * f.nodes_b[k]) = P - sys.fm.nodes[f.nodes_b[k]];
  }
  CHECK(assembly::opening_map(sys, 0, 0, uc, 0).degenerate);
  try {
    assembly::effective_openings(sys, uc);
    FAIL("expected degenerate-interface error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("degenerate interface") !=
          std::string::npos);
  }
}

TEST_CASE("interface weights accumulate the interior edge length") {
  const auto sys = fractured_block_system(2, 2, knowles_mat());
  // 4 diagonals of length sqrt(2)/2, 2 interior verticals and 2 horizontals
  // of length 1/2 each
  const double want = 4.0 * std::sqrt(2.0) / 2.0 + 4.0 * 0.5;
  CHECK(sys.face_w.sum() == doctest::Approx(want).epsilon(1e-13));
  for (int g = 0; g < sys.n_gp(); ++g)
    CHECK(sys.zeta[g] ==
          doctest::Approx(1e4 * sys.coh.G_c * sys.face_w[g]).epsilon(1e-15));
}

}  // TEST_SUITE

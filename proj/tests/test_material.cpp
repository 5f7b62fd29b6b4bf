#include <doctest.h>

#include <cmath>
#include <random>

#include "conefrac/material.hpp"

using namespace conefrac;
using Eigen::Matrix2d;
using Eigen::VectorXd;

namespace {

material::BulkParams knowles_params() {
  material::BulkParams p;
  p.model = material::BulkModel::kNeoHookean;
  p.E = 3.24e9;
  p.nu = 0.35;
  p.rho = 1190.0;
  return p;
}

material::CohesiveParams test_cohesive() {
  material::CohesiveParams c;
  c.sigma_c = 1e6;
  c.G_c = 100.0;
  return c;
}

}  // namespace

TEST_SUITE("material") {

TEST_CASE("hyperelastic density at a pinned deformation gradient") {
  auto p = knowles_params();
  CHECK(p.c1() == doctest::Approx(6.0e8).epsilon(1e-15));
  CHECK(p.beta() == doctest::Approx(0.35 / 0.30).epsilon(1e-15));

  Matrix2d F;
  F << 1.08, 0.03, -0.02, 0.95;
  auto ev = material::bulk_energy_density(F, p);
  REQUIRE_FALSE(ev.inverted);
  CHECK(ev.value == doctest::Approx(11058308.275352478).epsilon(1e-14));
  CHECK(ev.dF(0, 0) == doctest::Approx(216493376.18859982).epsilon(1e-13));
  CHECK(ev.dF(0, 1) == doctest::Approx(13273544.761865249).epsilon(1e-13));
  CHECK(ev.dF(1, 0) == doctest::Approx(10089682.857202124).epsilon(1e-13));
  CHECK(ev.dF(1, 1) == doctest::Approx(-87228582.859276742).epsilon(1e-13));
}

TEST_CASE("hyperelastic density vanishes with zero stress at identity") {
  auto ev = material::bulk_energy_density(Matrix2d::Identity(),
                                          knowles_params());
  CHECK(std::abs(ev.value) < 1e-6);
  CHECK(ev.dF.norm() < 1e-4);  // absolute, against a GPa-scale modulus
}

TEST_CASE("hyperelastic derivatives match finite differences") {
  auto p = knowles_params();
  std::mt19937 rng(411);
  std::uniform_real_distribution<double> u(-0.12, 0.12);
  for (int trial = 0; trial < 25; ++trial) {
    Matrix2d F = Matrix2d::Identity();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) F(i, j) += u(rng);
    if (F.determinant() < 0.3) continue;
    auto ev = material::bulk_energy_density(F, p);
    REQUIRE_FALSE(ev.inverted);
    const double h = 1e-6;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        Matrix2d Fp = F, Fm = F;
        Fp(i, j) += h;
        Fm(i, j) -= h;
        auto evp = material::bulk_energy_density(Fp, p);
        auto evm = material::bulk_energy_density(Fm, p);
        const double fd = (evp.value - evm.value) / (2.0 * h);
        CHECK(ev.dF(i, j) == doctest::Approx(fd).epsilon(2e-6));
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) {
            const double hfd = (evp.dF(k, l) - evm.dF(k, l)) / (2.0 * h);
            CHECK(ev.d2F(2 * i + j, 2 * k + l) ==
                  doctest::Approx(hfd).epsilon(2e-5).scale(p.E));
          }
      }
    }
  }
}

TEST_CASE("hyperelastic density flags inverted elements") {
  Matrix2d F;
  F << 0.5, 1.0, 1.0, 0.5;  // det = -0.75
  auto ev = material::bulk_energy_density(F, knowles_params());
  CHECK(ev.inverted);
  CHECK(std::isinf(ev.value));
  F << 1.0, 0.0, 0.0, 0.0;  // det = 0
  CHECK(material::bulk_energy_density(F, knowles_params()).inverted);
}

TEST_CASE("hyperelastic density linearizes to plane-stress elasticity") {
  auto pn = knowles_params();
  auto pl = pn;
  pl.model = material::BulkModel::kLinear;
  Matrix2d D;
  D << 0.7, 0.2, 0.2, -0.4;  // symmetric so both models see the same strain
  for (double s : {1e-3, 1e-4}) {
    const Matrix2d F = Matrix2d::Identity() + s * D;
    const double wn = material::bulk_energy_density(F, pn).value;
    const double wl = material::bulk_energy_density(F, pl).value;
    // quadratic leading term; cubic remainder O(s^3 E)
    CHECK(std::abs(wn - wl) < 30.0 * s * s * s * pn.E);
    CHECK(wl > 0.0);
  }
}

TEST_CASE("linear plane-stress density at a pinned strain") {
  material::BulkParams p;
  p.model = material::BulkModel::kLinear;
  p.E = 1e9;
  p.nu = 0.3;
  Matrix2d F;
  F << 1.08, 0.03, -0.02, 0.95;
  auto ev = material::bulk_energy_density(F, p);
  REQUIRE_FALSE(ev.inverted);
  CHECK(ev.value == doctest::Approx(3590659.3406593464).epsilon(1e-14));
  // dPsi/dF equals the symmetric stress of the symmetrized strain
  CHECK(ev.dF(0, 0) == doctest::Approx(71428571.428571492).epsilon(1e-13));
  CHECK(ev.dF(0, 1) == doctest::Approx(3846153.8461538451).epsilon(1e-13));
  CHECK(ev.dF(1, 0) == doctest::Approx(3846153.8461538451).epsilon(1e-13));
  CHECK(ev.dF(1, 1) == doctest::Approx(-28571428.571428597).epsilon(1e-13));
  // the linear model has no inversion barrier
  Matrix2d Fi;
  Fi << -1.0, 0.0, 0.0, 1.0;
  CHECK_FALSE(material::bulk_energy_density(Fi, p).inverted);
}

TEST_CASE("cohesive free energy branch values") {
  auto c = test_cohesive();
  const double du = c.delta_u();
  CHECK(du == doctest::Approx(2e-4).epsilon(1e-15));
  CHECK(material::cohesive_g(0.5 * du, 0.0, c) ==
        doctest::Approx(75.0).epsilon(1e-14));
  CHECK(material::cohesive_g(du, 0.0, c) ==
        doctest::Approx(100.0).epsilon(1e-14));
  CHECK(material::cohesive_g(0.7 * du, 0.4 * du, c) ==
        doctest::Approx(75.0).epsilon(1e-13));
  CHECK(material::cohesive_g(1.5 * du, 0.4 * du, c) ==
        doctest::Approx(84.0).epsilon(1e-14));
  CHECK(material::cohesive_g(0.2 * du, 0.4 * du, c) ==
        doctest::Approx(24.0).epsilon(1e-13));
}

TEST_CASE("cohesive law is initially rigid with the exact fracture energy") {
  material::CohesiveParams pmma;
  pmma.sigma_c = 1.05e8;
  pmma.G_c = 352.0;
  double dg = 0.0;
  material::cohesive_g(0.0, 0.0, pmma, &dg);
  CHECK(std::abs(dg - pmma.sigma_c) <= 1e-12 * pmma.sigma_c);
  const double gu = material::cohesive_g(pmma.delta_u(), 0.0, pmma);
  CHECK(std::abs(gu - pmma.G_c) <= 1e-12 * pmma.G_c);
}

TEST_CASE("cohesive energy is C1 at its breakpoints") {
  auto c = test_cohesive();
  const double du = c.delta_u();
  for (double d : {0.0, 0.3 * du, 0.8 * du, du}) {
    for (double bp : {d, du}) {
      const double h = 1e-9 * du;
      double dgm, dgp;
      material::cohesive_g(bp - h, d, c, &dgm);
      material::cohesive_g(bp + h, d, c, &dgp);
      CHECK(std::abs(dgp - dgm) <= 1e-8 * c.sigma_c + 2e-9 / du * c.sigma_c);
      // value continuity as well
      const double vm = material::cohesive_g(bp - h, d, c);
      const double vp = material::cohesive_g(bp + h, d, c);
      CHECK(std::abs(vp - vm) <= 1e-8 * c.G_c);
    }
  }
}

TEST_CASE("dissipation formula equals loading work minus stored energy") {
  auto c = test_cohesive();
  const double du = c.delta_u();
  for (double d : {0.1 * du, 0.4 * du, 0.9 * du, du}) {
    // monotone loading traction is the softening envelope sigma_c(1 - s/du)
    const int n = 200000;
    double work = 0.0;
    for (int i = 0; i < n; ++i) {
      const double s0 = d * i / n, s1 = d * (i + 1) / n;
      const double t0 = c.sigma_c * (1.0 - s0 / du);
      const double t1 = c.sigma_c * (1.0 - s1 / du);
      work += 0.5 * (t0 + t1) * (s1 - s0);
    }
    const double stored = material::cohesive_g(d, d, c);
    const double formula = c.sigma_c * d * d / (2.0 * du);
    CHECK(work - stored == doctest::Approx(formula).epsilon(1e-9));
  }
  // full rupture dissipates exactly G_c per unit length
  CHECK(c.sigma_c * du * du / (2.0 * du) == doctest::Approx(c.G_c));
}

TEST_CASE("separable interface potential and its regularization") {
  auto c = test_cohesive();
  const double du = c.delta_u();
  VectorXd s0(3), d(3), w(3);
  s0 << 0.5 * du, 1.2 * du, 0.3 * du;
  d << 0.0, du, 0.4 * du;
  w << 0.2, 0.5, 0.3;

  auto h = material::h_potential(s0, d, w, c);
  double expect = 0.0;
  for (int i = 0; i < 3; ++i)
    expect += w[i] * material::cohesive_g(s0[i], d[i], c);
  CHECK(h.value == doctest::Approx(expect).epsilon(1e-14));

  const double alpha = 5e-5;
  auto ha = material::h_alpha(s0, d, w, alpha, c);
  double quad = 0.0;
  for (int i = 0; i < 3; ++i)
    quad += material::h_alpha_coeff(alpha, w[i], d[i], du) * s0[i] * s0[i];
  CHECK(ha.value == doctest::Approx(h.value + quad).epsilon(1e-14));
  CHECK_THROWS_AS(material::h_alpha(s0, d, w, 0.0, c), std::invalid_argument);

  // fully damaged points keep the 8e-6 coefficient floor
  CHECK(material::h_alpha_coeff(alpha, 0.5, du, du) ==
        doctest::Approx(5e5 * alpha * 0.5 * 8e-6).epsilon(1e-15));
  CHECK(material::h_alpha_coeff(alpha, 0.5, 2.0 * du, du) ==
        doctest::Approx(5e5 * alpha * 0.5 * 8e-6).epsilon(1e-15));

  // gradient and diagonal hessian against finite differences; the step stays
  // inside each point's active branch
  const double hstep = 1e-6;
  for (int i = 0; i < 3; ++i) {
    VectorXd sp = s0, sm = s0;
    sp[i] += hstep;
    sm[i] -= hstep;
    const double fd = (material::h_alpha(sp, d, w, alpha, c).value -
                       material::h_alpha(sm, d, w, alpha, c).value) /
                      (2.0 * hstep);
    CHECK(ha.grad[i] == doctest::Approx(fd).epsilon(1e-5));
    const double hd = (material::h_alpha(sp, d, w, alpha, c).grad[i] -
                       material::h_alpha(sm, d, w, alpha, c).grad[i]) /
                      (2.0 * hstep);
    CHECK(ha.hess_diag[i] == doctest::Approx(hd).epsilon(1e-4));
  }
}

TEST_CASE("damage update is irreversible and capped") {
  const double du = 2e-4;
  VectorXd d(4), delta(4);
  d << 0.0, 0.5 * du, 0.9 * du, du;
  delta << 0.3 * du, 0.2 * du, 1.5 * du, 0.1 * du;
  VectorXd dn = material::update_damage(d, delta, du);
  CHECK(dn[0] == doctest::Approx(0.3 * du));
  CHECK(dn[1] == doctest::Approx(0.5 * du));  // never decreases
  CHECK(dn[2] == doctest::Approx(du));        // capped
  CHECK(dn[3] == doctest::Approx(du));
  CHECK_THROWS_AS(material::update_damage(d, delta.head(2), du),
                  std::invalid_argument);
}

}  // TEST_SUITE

#include <gtest/gtest.h>

#include <quadlag/numeric.hpp>

#include "support.hpp"

using namespace quadlag;
using qtest::rmat;
using qtest::rvec;

namespace {

QuadricSystem sphere3() { return {rmat({{1, 1, 1}}), rvec({1})}; }

QuadricSystem clifford() { return {RationalMatrix::identity(2), rvec({1, 1})}; }

// j(u, phi)_k = u_k exp(2 pi i <gamma_k, phi>), evaluated directly.
Eigen::VectorXcd immersion(const QuadricSystem &s, const Eigen::VectorXd &u, const Eigen::VectorXd &phi) {
  Eigen::VectorXcd z(s.m());
  for (std::size_t k = 0; k < s.m(); ++k) {
    double angle = 0;
    for (std::size_t j = 0; j < s.quadrics(); ++j) angle += s.gamma()(j, k).get_d() * phi[j];
    z[k] = std::polar(u[k], 2 * M_PI * angle);
  }
  return z;
}

} // namespace

TEST(Sample, SphereProjection) {
  auto pts = sample_points(sphere3(), 100, 7);
  ASSERT_EQ(pts.size(), 100u);
  for (const auto &p : pts) {
    EXPECT_LE(p.residual, 1e-12);
    EXPECT_NEAR(p.u.norm(), 1.0, 1e-12);
  }
}

TEST(Sample, PentagonSystem) {
  auto s = to_quadrics(qtest::pentagon());
  auto pts = sample_points(s, 100, 11);
  ASSERT_EQ(pts.size(), 100u);
  const Eigen::MatrixXd g = detail::to_double(s.gamma());
  const Eigen::VectorXd c = detail::to_double(s.c());
  for (const auto &p : pts) EXPECT_LE((g * p.u.cwiseAbs2() - c).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Sample, Deterministic) {
  auto s = to_quadrics(qtest::pentagon());
  auto a = sample_points(s, 20, 5), b = sample_points(s, 20, 5);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].u, b[i].u);
  EXPECT_EQ(verify_lagrangian(s, 20, 5), verify_lagrangian(s, 20, 5));
}

TEST(Sample, DegenerateRejected) {
  EXPECT_EQ(qtest::error_code_of([] { (void)sample_points(QuadricSystem(rmat({{1, 1}}), rvec({0})), 10, 1); }),
            ErrorCode::DegenerateSystem);
}

TEST(Frame, CliffordTorusDirections) {
  SamplePoint p{Eigen::Vector2d(1, 1), 0};
  auto f = tangent_frame(clifford(), p, Eigen::Vector2d::Zero());
  EXPECT_NEAR(f.min_singular_value, 1.0, 1e-12);
  EXPECT_LE(lagrangian_residual(f), 1e-15);
}

TEST(Frame, SphereAtPole) {
  SamplePoint p{Eigen::Vector3d(1, 0, 0), 0};
  auto f = tangent_frame(sphere3(), p, Eigen::VectorXd::Zero(1));
  EXPECT_GT(f.min_singular_value, 0.5);
  EXPECT_LE(lagrangian_residual(f), 1e-15);
}

TEST(Frame, RankDeficientFlagged) {
  SamplePoint p{Eigen::Vector2d(1, 0), 0};
  EXPECT_EQ(qtest::error_code_of([&] { (void)tangent_frame(clifford(), p, Eigen::Vector2d::Zero()); }),
            ErrorCode::RankDeficient);
}

TEST(Frame, MatchesFiniteDifferences) {
  auto s = to_quadrics(qtest::pentagon());
  auto pts = sample_points(s, 5, 3);
  const Eigen::MatrixXd basis = lattice_basis_matrix(s);
  std::mt19937_64 rng(9);
  const double h = 1e-6;
  for (const auto &p : pts) {
    const Eigen::VectorXd phi = random_phi(basis, rng);
    auto f = tangent_frame(s, p, phi);
    const std::size_t n = s.n();
    // Torus columns are the normalized phi-derivatives of j.
    for (std::size_t a = 0; a < s.quadrics(); ++a) {
      Eigen::VectorXd dphi = Eigen::VectorXd::Zero(s.quadrics());
      dphi[a] = h;
      Eigen::VectorXcd d = (immersion(s, p.u, phi + dphi) - immersion(s, p.u, phi - dphi)) / (2 * h);
      d /= d.norm();
      EXPECT_LE((d - f.frame.col(n + a)).norm(), 1e-6);
    }
    // Kernel columns move along R to first order.
    const Eigen::MatrixXd g = detail::to_double(s.gamma());
    const Eigen::VectorXd c = detail::to_double(s.c());
    for (std::size_t a = 0; a < n; ++a) {
      Eigen::VectorXcd unphased = f.frame.col(a);
      const Eigen::VectorXcd base = immersion(s, Eigen::VectorXd::Ones(s.m()), phi);
      Eigen::VectorXd v = unphased.cwiseQuotient(base).real();
      EXPECT_LE((g * (p.u + h * v).cwiseAbs2() - c).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(Lagrangian, PentagonAndNegativeControl) {
  auto s = to_quadrics(qtest::pentagon());
  auto rep = verify_lagrangian(s, 100, 2024);
  EXPECT_EQ(rep.samples, 100u);
  EXPECT_TRUE(rep.passed);
  EXPECT_LE(rep.max_symplectic_pullback, 1e-9);
  EXPECT_GE(rep.min_frame_singular_value, 1e-6);

  auto pts = sample_points(s, 1, 2024);
  auto f = tangent_frame(s, pts[0], Eigen::VectorXd::Zero(s.quadrics()));
  EXPECT_NEAR(lagrangian_residual(corrupted_frame(f)), 1.0, 1e-12);
}

TEST(Lagrangian, TwoQuadricFamily) {
  auto rep = verify_lagrangian(qtest::unit_two_quadrics(1, 2, 2), 100, 17);
  EXPECT_TRUE(rep.passed);
  EXPECT_LE(rep.max_quadric_residual, 1e-12);
}

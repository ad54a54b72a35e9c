#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "quadlag/lattice_torus.hpp"

namespace quadlag {

struct NumericTolerances {
  double acceptance = 1e-12; // max quadric defect of an accepted sample
  double lagrangian = 1e-9;  // max normalized symplectic pullback
  double rank = 1e-8;        // smallest admissible frame singular value
  int max_iterations = 100;
  friend bool operator==(const NumericTolerances &, const NumericTolerances &) = default;
};

struct SamplePoint {
  Eigen::VectorXd u;
  double residual = 0;
};

struct TangentFrame {
  SamplePoint base;
  Eigen::VectorXd phi;
  Eigen::MatrixXcd frame; // m x m, one tangent vector per column
  double min_singular_value = 0;
};

struct ResidualReport {
  std::size_t samples = 0;
  double max_quadric_residual = 0;
  double min_frame_singular_value = 0;
  double max_symplectic_pullback = 0;
  std::uint64_t seed = 0;
  bool passed = false;
  friend bool operator==(const ResidualReport &, const ResidualReport &) = default;
};

namespace detail {

inline Eigen::MatrixXd to_double(const RationalMatrix &m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).get_d();
  return out;
}

inline Eigen::VectorXd to_double(const RationalVector &v) {
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].get_d();
  return out;
}

inline double quadric_residual(const Eigen::MatrixXd &g, const Eigen::VectorXd &c, const Eigen::VectorXd &u) {
  return (g * u.cwiseAbs2() - c).cwiseAbs().maxCoeff();
}

/// Damped Newton with minimum-norm steps -J^T (J J^T)^-1 F, J = 2 Gamma diag(u).
inline std::optional<SamplePoint> project(const Eigen::MatrixXd &g, const Eigen::VectorXd &c, Eigen::VectorXd u,
                                          const NumericTolerances &tol) {
  double res = quadric_residual(g, c, u);
  for (int it = 0; it < tol.max_iterations; ++it) {
    if (res <= tol.acceptance) return SamplePoint{u, res};
    const Eigen::VectorXd f = g * u.cwiseAbs2() - c;
    const Eigen::MatrixXd j = 2.0 * g * u.asDiagonal();
    const Eigen::MatrixXd jjt = j * j.transpose();
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(jjt);
    if (!lu.isInvertible()) return std::nullopt;
    const Eigen::VectorXd step = -j.transpose() * lu.solve(f);
    if (!step.allFinite()) return std::nullopt;
    double t = 1.0;
    Eigen::VectorXd next = u + step;
    double next_res = quadric_residual(g, c, next);
    while (next_res > res && t > 1e-10) {
      t *= 0.5;
      next = u + t * step;
      next_res = quadric_residual(g, c, next);
    }
    if (next_res > res) return std::nullopt;
    u = next;
    res = next_res;
  }
  if (res <= tol.acceptance) return SamplePoint{u, res};
  return std::nullopt;
}

inline Eigen::MatrixXd stack_real(const Eigen::MatrixXcd &frame) {
  const auto m = frame.rows();
  Eigen::MatrixXd out(2 * m, frame.cols());
  out.topRows(m) = frame.real();
  out.bottomRows(m) = frame.imag();
  return out;
}

} // namespace detail

/// Up to 2 * count projections from standard-normal seeds; fewer than count
/// acceptances means more than half failed, reported as ConvergenceFailure.
inline std::vector<SamplePoint> sample_points(const QuadricSystem &s, std::size_t count, std::uint64_t seed,
                                              const NumericTolerances &tol = {}) {
  require_nondegenerate(s);
  const Eigen::MatrixXd g = detail::to_double(s.gamma());
  const Eigen::VectorXd c = detail::to_double(s.c());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<SamplePoint> out;
  for (std::size_t attempt = 0; attempt < 2 * count && out.size() < count; ++attempt) {
    Eigen::VectorXd u(s.m());
    for (auto &x : u) x = normal(rng);
    if (auto p = detail::project(g, c, u, tol)) out.push_back(*p);
  }
  if (out.size() < count)
    throw Error(ErrorCode::ConvergenceFailure, "only " + std::to_string(out.size()) + " of " +
                                                   std::to_string(2 * count) + " projections converged");
  return out;
}

/// Rows are the HNF basis of L, so phi = B^-1 t for t uniform in [0,1)^(m-n)
/// is a uniform draw from a fundamental domain of L*.
inline Eigen::MatrixXd lattice_basis_matrix(const QuadricSystem &s) {
  const LatticeBasis l = column_lattice(s);
  if (l.rank != s.quadrics()) throw Error(ErrorCode::NotFullRank, "L has rank below m-n");
  return detail::to_double(to_rational(l.basis)) / l.scale.get_d();
}

inline Eigen::VectorXd random_phi(const Eigen::MatrixXd &basis, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd t(basis.rows());
  for (auto &x : t) x = unit(rng);
  return basis.fullPivLu().solve(t);
}

/// Columns: an orthonormal basis v of ker(2 Gamma diag(u)) twisted by the
/// torus phases, then the m-n torus directions 2 pi i gamma_jk u_k e_k.
/// Columns are normalized before the singular value is taken.
inline TangentFrame tangent_frame(const QuadricSystem &s, const SamplePoint &sample, const Eigen::VectorXd &phi,
                                  const NumericTolerances &tol = {}) {
  const std::size_t m = s.m(), r = s.quadrics();
  if (static_cast<std::size_t>(sample.u.size()) != m || static_cast<std::size_t>(phi.size()) != r)
    throw Error(ErrorCode::DimensionMismatch, "sample or phi has the wrong length");
  const Eigen::MatrixXd g = detail::to_double(s.gamma());
  const Eigen::MatrixXd j = 2.0 * g * sample.u.asDiagonal();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(j, Eigen::ComputeFullV);

  constexpr double two_pi = 6.283185307179586476925286766559;
  const Eigen::VectorXd angle = two_pi * (g.transpose() * phi);
  Eigen::VectorXcd phase(m);
  for (std::size_t k = 0; k < m; ++k) phase[k] = std::polar(1.0, angle[k]);

  TangentFrame f;
  f.base = sample;
  f.phi = phi;
  f.frame.resize(m, m);
  const std::size_t n = m - r;
  for (std::size_t a = 0; a < n; ++a) {
    const Eigen::VectorXd v = svd.matrixV().col(r + a);
    f.frame.col(a) = v.cast<std::complex<double>>().cwiseProduct(phase);
  }
  const std::complex<double> i_two_pi(0.0, two_pi);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t k = 0; k < m; ++k) f.frame(k, n + a) = i_two_pi * g(a, k) * sample.u[k] * phase[k];
  for (std::size_t a = 0; a < m; ++a) {
    const double norm = f.frame.col(a).norm();
    if (norm > 0) f.frame.col(a) /= norm;
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> stacked(detail::stack_real(f.frame));
  f.min_singular_value = stacked.singularValues().minCoeff();
  if (f.min_singular_value < tol.rank)
    throw Error(ErrorCode::RankDeficient, "frame singular value " + std::to_string(f.min_singular_value));
  return f;
}

/// max |Im sum conj(xi_k) eta_k| / (|xi| |eta|) over column pairs.
inline double lagrangian_residual(const TangentFrame &f) {
  double worst = 0;
  for (Eigen::Index a = 0; a < f.frame.cols(); ++a)
    for (Eigen::Index b = a + 1; b < f.frame.cols(); ++b) {
      const double denom = f.frame.col(a).norm() * f.frame.col(b).norm();
      if (denom == 0) continue;
      worst = std::max(worst, std::abs(f.frame.col(a).dot(f.frame.col(b)).imag()) / denom);
    }
  return worst;
}

/// Negative control: column 0 replaced by i times column 1, a pair with
/// symplectic pairing equal to its norm product.
inline TangentFrame corrupted_frame(TangentFrame f) {
  if (f.frame.cols() < 2) throw Error(ErrorCode::DimensionMismatch, "need at least two frame vectors");
  f.frame.col(0) = std::complex<double>(0.0, 1.0) * f.frame.col(1);
  return f;
}

inline ResidualReport verify_lagrangian(const QuadricSystem &s, std::size_t count, std::uint64_t seed,
                                        const NumericTolerances &tol = {}) {
  const auto samples = sample_points(s, count, seed, tol);
  const Eigen::MatrixXd basis = lattice_basis_matrix(s);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  ResidualReport rep;
  rep.seed = seed;
  rep.samples = samples.size();
  rep.min_frame_singular_value = std::numeric_limits<double>::infinity();
  for (const auto &p : samples) {
    const TangentFrame f = tangent_frame(s, p, random_phi(basis, rng), tol);
    rep.max_quadric_residual = std::max(rep.max_quadric_residual, p.residual);
    rep.min_frame_singular_value = std::min(rep.min_frame_singular_value, f.min_singular_value);
    rep.max_symplectic_pullback = std::max(rep.max_symplectic_pullback, lagrangian_residual(f));
  }
  rep.passed = rep.max_quadric_residual <= tol.acceptance && rep.max_symplectic_pullback <= tol.lagrangian &&
               rep.min_frame_singular_value >= tol.rank;
  return rep;
}

} // namespace quadlag

#include "doctest.h"

#include <cmath>
#include <random>

#include "poince/basis.hpp"
#include "poince/design.hpp"
#include "poince/solver.hpp"

using namespace poince;

namespace {

Eigen::MatrixXd gaussian_matrix(Eigen::Index n, Eigen::Index p, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(n, p);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = g(rng);
  return m;
}

double sample_variance(const Eigen::VectorXd& y) {
  return (y.array() - y.mean()).square().sum() / static_cast<double>(y.size() - 1);
}

struct Problem {
  BasisSet basis;
  Eigen::MatrixXd psi;
};

Problem uniform_problem(int d, int p, Eigen::Index n, std::uint64_t seed) {
  auto b = std::make_shared<const PoincareBasis1D>(PoincareBasis1D::cosine(-0.5, 0.5, p));
  BasisSet bs = BasisSet::make(std::vector<BasisPtr>(d, b), {p, 1.0});
  const std::vector<Marginal> m(d, Marginal(Family::Uniform, {-0.5, 0.5}));
  Eigen::MatrixXd psi = bs.design_matrix(lhs_maximin(m, n, seed, 5).points);
  return {std::move(bs), std::move(psi)};
}

}  // namespace

TEST_CASE("ols basics") {
  const Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(5, -1.0, 3.0);
  CHECK((ols(Eigen::MatrixXd::Identity(5, 5), y) - y).norm() < 1e-14);

  std::mt19937_64 rng(1);
  const Eigen::MatrixXd psi = gaussian_matrix(50, 10, rng);
  const Eigen::VectorXd c = Eigen::VectorXd::LinSpaced(10, 1.0, 2.0);
  CHECK((ols(psi, psi * c) - c).norm() < 1e-12);

  const Eigen::VectorXd noisy = psi * c + gaussian_matrix(50, 1, rng);
  const Eigen::VectorXd got = ols(psi, noisy);
  const Eigen::VectorXd oracle = (psi.transpose() * psi).inverse() * psi.transpose() * noisy;
  CHECK((got - oracle).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((psi.transpose() * (noisy - psi * got)).norm() < 1e-10 * noisy.norm() * psi.norm());

  Eigen::MatrixXd rank_def = psi;
  rank_def.col(3) = rank_def.col(1) + rank_def.col(2);
  CHECK_THROWS_AS(ols(rank_def, noisy), SingularMatrixError);
  CHECK_THROWS_AS(ols(psi.topRows(5), noisy.head(5)), SingularMatrixError);
}

TEST_CASE("corrected LOO equals explicit leave-one-out refits") {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd psi = gaussian_matrix(40, 5, rng);
  const Eigen::VectorXd y = psi * Eigen::VectorXd::Ones(5) + 0.3 * gaussian_matrix(40, 1, rng);
  double sum = 0.0;
  for (Eigen::Index k = 0; k < 40; ++k) {
    Eigen::MatrixXd a(39, 5);
    Eigen::VectorXd b(39);
    for (Eigen::Index i = 0, r = 0; i < 40; ++i) {
      if (i == k) continue;
      a.row(r) = psi.row(i);
      b[r++] = y[i];
    }
    const Eigen::VectorXd c = (a.transpose() * a).ldlt().solve(a.transpose() * b);
    sum += std::pow(y[k] - psi.row(k).dot(c), 2);
  }
  const double trace = (psi.transpose() * psi).inverse().trace();
  const double oracle = sum / 40.0 * (40.0 / 35.0) * (1.0 + trace) / sample_variance(y);
  CHECK(loo_corrected(psi, y, {0, 1, 2, 3, 4}) == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("LOO edge cases") {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd psi = gaussian_matrix(30, 4, rng);
  CHECK(loo_corrected(psi, psi * Eigen::Vector4d(1, 2, 3, 4), {0, 1, 2, 3}) < 1e-20);
  const Eigen::MatrixXd square = gaussian_matrix(4, 4, rng);
  CHECK(std::isinf(loo_corrected(square, Eigen::Vector4d(1, -1, 2, 0), {0, 1, 2, 3})));
}

TEST_CASE("LARS path is equiangular") {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd psi = gaussian_matrix(60, 25, rng);
  const Eigen::VectorXd y = gaussian_matrix(60, 1, rng);
  int steps = 0;
  lars_path(psi, y, 20, -1, [&](const LarsStep& s) {
    // After the step that made column `entered` catch up, all active
    // correlations share one magnitude.
    const double ref = std::abs(s.correlations[s.active.front()]);
    for (Eigen::Index j : s.active) CHECK(std::abs(s.correlations[j]) == doctest::Approx(ref).epsilon(1e-8));
    for (Eigen::Index j = 0; j < psi.cols(); ++j) CHECK(std::abs(s.correlations[j]) <= ref * (1 + 1e-8));
    ++steps;
    return LarsAction::Continue;
  });
  CHECK(steps == 20);

  // Same with an intercept column.
  Eigen::MatrixXd with_one(60, 26);
  with_one << Eigen::VectorXd::Ones(60), psi;
  lars_path(with_one, y, 15, 0, [&](const LarsStep& s) {
    if (s.active.size() < 2) return LarsAction::Continue;
    const double ref = std::abs(s.correlations[s.active[1]]);
    for (std::size_t a = 1; a < s.active.size(); ++a) {
      CHECK(std::abs(s.correlations[s.active[a]]) == doctest::Approx(ref).epsilon(1e-8));
    }
    return LarsAction::Continue;
  });
}

TEST_CASE("hybrid LARS coincides with OLS when run to completion") {
  std::mt19937_64 rng(5);
  Eigen::MatrixXd psi = gaussian_matrix(80, 12, rng);
  psi.col(0).setOnes();
  const Eigen::VectorXd y = psi * Eigen::VectorXd::LinSpaced(12, -1, 1) + 0.1 * gaussian_matrix(80, 1, rng);
  LarsOptions opt;
  opt.intercept = 0;
  opt.max_active = 12;
  opt.patience = 1000;
  const FitResult fit = hybrid_lars(psi, y, opt);
  CHECK(fit.active.size() == 12);
  CHECK((fit.coefficients - ols(psi, y)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(fit.loo_error == doctest::Approx(loo_corrected(psi, y, fit.active)).epsilon(1e-10));
}

TEST_CASE("constant and zero responses") {
  std::mt19937_64 rng(6);
  Eigen::MatrixXd psi = gaussian_matrix(20, 8, rng);
  psi.col(0).setOnes();
  LarsOptions opt;
  opt.intercept = 0;
  const FitResult fit = hybrid_lars(psi, Eigen::VectorXd::Constant(20, 3.5), opt);
  CHECK(fit.active == std::vector<Eigen::Index>{0});
  CHECK(fit.coefficients[0] == doctest::Approx(3.5));
  CHECK(fit.loo_error == 0.0);

  const FitResult zero = hybrid_lars(psi.rightCols(7), Eigen::VectorXd::Zero(20));
  CHECK(zero.active.empty());
  CHECK(zero.coefficients.isZero());
}

TEST_CASE("selected prefix has the smallest LOO on the path") {
  std::mt19937_64 rng(7);
  Eigen::MatrixXd psi = gaussian_matrix(40, 30, rng);
  psi.col(0).setOnes();
  const Eigen::VectorXd y = psi.leftCols(6) * Eigen::VectorXd::Ones(6) + 0.2 * gaussian_matrix(40, 1, rng);
  LarsOptions opt;
  opt.intercept = 0;
  opt.patience = 1000;
  const FitResult fit = hybrid_lars(psi, y, opt);
  std::vector<Eigen::Index> prefix;
  lars_path(psi, y, 39, 0, [&](const LarsStep& s) {
    prefix = s.active;
    CHECK(fit.loo_error <= loo_corrected(psi, y, prefix) + 1e-12);
    // The OLS refit never has a larger residual than any other coefficients on that support.
    return LarsAction::Continue;
  });
  CHECK(fit.loo_error == doctest::Approx(loo_corrected(psi, y, fit.active)).epsilon(1e-10));
}

TEST_CASE("exact 3-sparse recovery in a d = 8, p = 5 basis") {
  const Problem pb = uniform_problem(8, 5, 50, 99);
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<Eigen::Index> pick(1, pb.basis.size() - 1);
  std::uniform_real_distribution<double> coef(0.5, 2.0);
  int recovered = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(pb.basis.size());
    while ((c.array() != 0.0).count() < 3) c[pick(rng)] = coef(rng) * (rng() % 2 ? 1 : -1);
    const FitResult fit = hybrid_lars(pb.psi, pb.psi * c, {0, 0, 0});
    recovered += (fit.coefficients - c).cwiseAbs().maxCoeff() <= 1e-6;
  }
  CHECK(recovered >= 19);
}

TEST_CASE("degree adaptivity") {
  const Problem pb = uniform_problem(3, 5, 120, 17);
  const auto j = *pb.basis.position({2, 1, 0});
  const Eigen::VectorXd y = pb.psi.col(j);
  const AdaptiveFit fit = degree_adaptive_fit(pb.psi, y, pb.basis.indices(), 1, 5, 1.0);
  CHECK(fit.fit.degree >= 3);
  CHECK(fit.fit.loo_error < 1e-12);
  CHECK(fit.fit.coefficients[j] == doctest::Approx(1.0).epsilon(1e-8));
  for (const auto& d : fit.diagnostics) CHECK(fit.fit.loo_error <= d.loo_error);

  const AdaptiveFit constant = degree_adaptive_fit(pb.psi, Eigen::VectorXd::Constant(120, 2.0), pb.basis.indices(), 1, 5, 1.0);
  CHECK(constant.fit.degree == 1);
  CHECK(constant.fit.coefficients[0] == doctest::Approx(2.0));

  std::mt19937_64 rng(9);
  const Eigen::VectorXd noisy = pb.psi.col(j) + 0.05 * gaussian_matrix(120, 1, rng);
  const AdaptiveFit nf = degree_adaptive_fit(pb.psi, noisy, pb.basis.indices(), 1, 5, 1.0);
  for (const auto& d : nf.diagnostics) CHECK(nf.fit.loo_error <= d.loo_error);
}

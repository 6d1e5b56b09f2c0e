#include "doctest.h"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <set>

#include "poince/basis.hpp"
#include "poince/design.hpp"

using namespace poince;

namespace {

// All alpha in {0..p}^d with (sum alpha_i^q)^(1/q) <= p, by brute force.
std::set<MultiIndex> brute_force(int d, int p, double q) {
  std::set<MultiIndex> out;
  MultiIndex alpha(d, 0);
  std::function<void(int)> rec = [&](int pos) {
    if (pos == d) {
      double s = 0.0;
      for (int a : alpha) s += a > 0 ? std::pow(a, q) : 0.0;
      if (std::pow(s, 1.0 / q) <= p + 1e-9) out.insert(alpha);
      return;
    }
    for (int a = 0; a <= p; ++a) {
      alpha[pos] = a;
      rec(pos + 1);
    }
  };
  rec(0);
  return out;
}

std::vector<BasisPtr> uniform_bases(int d, int p) {
  auto b = std::make_shared<const PoincareBasis1D>(PoincareBasis1D::cosine(-0.5, 0.5, p));
  return std::vector<BasisPtr>(d, b);
}

}  // namespace

TEST_CASE("total degree sizes") {
  CHECK(total_degree(8, 5).size() == 1287);
  CHECK(total_degree(1, 0) == std::vector<MultiIndex>{{0}});
  CHECK(total_degree(2, 2) == std::vector<MultiIndex>{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}});
  for (int d = 1; d <= 40; d += 3) {
    for (int p = 0; p <= 8; ++p) {
      if (binomial(p + d, d) > 300000) continue;
      CHECK(total_degree(d, p).size() == binomial(p + d, d));
    }
  }
  CHECK(binomial(8 + 5, 5) == 1287);
  CHECK(binomial(40 + 8, 8) == 377348994ULL);
}

TEST_CASE("hyperbolic sets match brute force") {
  for (int d = 1; d <= 4; ++d) {
    for (int p = 0; p <= 5; ++p) {
      for (double q : {0.3, 0.5, 0.75, 1.0}) {
        const auto set = hyperbolic(d, p, q);
        const std::set<MultiIndex> unique(set.begin(), set.end());
        CHECK(unique.size() == set.size());
        CHECK(unique == brute_force(d, p, q));
      }
    }
  }
  const auto h = hyperbolic(2, 4, 0.5);
  const std::set<MultiIndex> s(h.begin(), h.end());
  CHECK(s.count({2, 2}) == 0);
  CHECK(s.count({3, 1}) == 0);
  CHECK(s.count({4, 0}) == 1);
  CHECK(hyperbolic(5, 3, 1.0) == total_degree(5, 3));
  CHECK_THROWS_AS(hyperbolic(2, 2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(hyperbolic(2, 2, 1.5), std::invalid_argument);
}

TEST_CASE("hyperbolic sets are nested in q and deterministic") {
  for (double q : {0.4, 0.6, 0.8}) {
    const auto small = hyperbolic(6, 5, q);
    const auto large = hyperbolic(6, 5, q + 0.2);
    const std::set<MultiIndex> big(large.begin(), large.end());
    for (const auto& a : small) CHECK(big.count(a) == 1);
    CHECK(small == hyperbolic(6, 5, q));
  }
}

TEST_CASE("37 inputs at degree 2 with q = 0.5 keep only univariate terms") {
  const auto set = hyperbolic(37, 2, 0.5);
  CHECK(set.size() == 1 + 2 * 37);
  for (const auto& a : set) {
    int nonzero = 0;
    for (int v : a) nonzero += v > 0;
    CHECK(nonzero <= 1);
  }
  // Large sets enumerate quickly.
  CHECK(hyperbolic(37, 8, 0.5).size() > 0);
}

TEST_CASE("graded ordering contains the zero index first") {
  const auto set = hyperbolic(4, 4, 0.7);
  CHECK(set.front() == MultiIndex(4, 0));
  for (std::size_t j = 1; j < set.size(); ++j) CHECK(total_order(set[j - 1]) <= total_order(set[j]));
}

TEST_CASE("basis set evaluation") {
  const BasisSet bs = BasisSet::make(uniform_bases(2, 3), {3, 1.0});
  CHECK(bs.size() == 10);
  const Eigen::Vector2d x(0.13, -0.31);
  const Eigen::VectorXd row = bs.eval_row(x);
  CHECK(row[0] == 1.0);
  const auto j10 = *bs.position({1, 0});
  CHECK(row[j10] == doctest::Approx(std::numbers::sqrt2 * std::cos(std::numbers::pi * (x[0] + 0.5))));
  const auto j21 = *bs.position({2, 1});
  CHECK(row[j21] == doctest::Approx(bs.basis(0).eval(2, x[0]) * bs.basis(1).eval(1, x[1])));

  const Eigen::VectorXd drow = bs.eval_deriv_row(0, x);
  CHECK(drow.size() == static_cast<Eigen::Index>(bs.derivative_columns(0).size()));
  CHECK(bs.derivative_columns(0).size() == 6);
  for (std::size_t c = 0; c < bs.derivative_columns(0).size(); ++c) {
    const MultiIndex& a = bs.index(bs.derivative_columns(0)[c]);
    CHECK(a[0] >= 1);
    const double expect = bs.basis(0).eval_deriv(a[0], x[0]) / std::sqrt(bs.basis(0).eigenvalue(a[0])) *
                          bs.basis(1).eval(a[1], x[1]);
    CHECK(drow[static_cast<Eigen::Index>(c)] == doctest::Approx(expect));
  }
  CHECK_THROWS_AS(bs.eval_row(Eigen::Vector2d(0.7, 0.0)), DomainError);
}

TEST_CASE("derivative column count for the dyke configuration") {
  const BasisSet bs = BasisSet::make(uniform_bases(8, 5), {5, 1.0});
  CHECK(bs.size() == 1287);
  for (int i = 0; i < 8; ++i) CHECK(bs.derivative_columns(i).size() == 495);
}

TEST_CASE("hermite derivative row is one for H_1") {
  std::vector<BasisPtr> b{std::make_shared<const PoincareBasis1D>(PoincareBasis1D::hermite(3))};
  const BasisSet bs = BasisSet::make(b, {3, 1.0});
  for (double x : {-2.0, 0.5, 3.0}) CHECK(bs.eval_deriv_row(0, Eigen::VectorXd::Constant(1, x))[0] == 1.0);
}

TEST_CASE("Monte Carlo Gram matrices are close to identity") {
  const BasisSet bs = BasisSet::make(uniform_bases(2, 3), {3, 1.0});
  const std::vector<Marginal> m(2, Marginal(Family::Uniform, {-0.5, 0.5}));
  const Eigen::MatrixXd x = mc_sample(m, 100000, 11).points;
  const Eigen::MatrixXd psi = bs.design_matrix(x);
  const Eigen::MatrixXd g = psi.transpose() * psi / static_cast<double>(x.rows());
  CHECK((g - Eigen::MatrixXd::Identity(bs.size(), bs.size())).cwiseAbs().maxCoeff() < 2e-2);
  const Eigen::MatrixXd dpsi = bs.derivative_matrix(1, x);
  const Eigen::MatrixXd dg = dpsi.transpose() * dpsi / static_cast<double>(x.rows());
  CHECK((dg - Eigen::MatrixXd::Identity(dg.rows(), dg.cols())).cwiseAbs().maxCoeff() < 2e-2);
}

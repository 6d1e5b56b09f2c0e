#include "doctest.h"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "poince/poincare1d.hpp"

using namespace poince;

namespace {

Eigen::MatrixXd gram(const PoincareBasis1D& b, bool derivative, int panels) {
  const int p = b.max_order();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(p + 1, p + 1);
  for (int i = 0; i <= p; ++i) {
    for (int j = i; j <= p; ++j) {
      if (derivative && (i == 0 || j == 0)) continue;
      const double si = derivative ? std::sqrt(b.eigenvalue(i)) : 1.0;
      const double sj = derivative ? std::sqrt(b.eigenvalue(j)) : 1.0;
      g(i, j) = g(j, i) = integrate_against_density(
          b,
          [&](double x) {
            return derivative ? b.eval_deriv(i, x) * b.eval_deriv(j, x) / (si * sj)
                              : b.eval(i, x) * b.eval(j, x);
          },
          panels);
    }
  }
  if (derivative) g(0, 0) = 1.0;
  return g;
}

int sign_changes(const PoincareBasis1D& b, int order, int samples) {
  int changes = 0;
  double prev = 0.0;
  for (int s = 0; s <= samples; ++s) {
    const double x = b.lower() + (b.upper() - b.lower()) * s / samples;
    const double v = b.eval(order, x);
    if (v == 0.0) continue;
    if (prev != 0.0 && (v > 0) != (prev > 0)) ++changes;
    prev = v;
  }
  return changes;
}

SymmetricTridiagonal random_spd(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SymmetricTridiagonal t{Eigen::VectorXd(n), Eigen::VectorXd(n - 1)};
  for (int i = 0; i + 1 < n; ++i) t.off_diagonal[i] = u(rng);
  for (int i = 0; i < n; ++i) t.diagonal[i] = 2.5 + u(rng);
  return t;
}

}  // namespace

TEST_CASE("tridiagonal generalized eigenpairs match a dense solver") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 40 + 10 * trial;
    const SymmetricTridiagonal k = random_spd(n, rng);
    const SymmetricTridiagonal m = random_spd(n, rng);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> dense(k.to_dense(), m.to_dense());
    const GeneralizedEigenpairs pairs = smallest_generalized_eigenpairs(k, m, 6);
    const Eigen::MatrixXd md = m.to_dense();
    for (int j = 0; j < 6; ++j) {
      CHECK(pairs.values[j] == doctest::Approx(dense.eigenvalues()[j]).epsilon(1e-10));
      const Eigen::VectorXd v = pairs.vectors.col(j);
      const Eigen::VectorXd r = k * v - pairs.values[j] * (m * v);
      CHECK(r.norm() < 1e-9);
      CHECK(v.dot(md * v) == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK(count_eigenvalues_below(k, m, 0.5 * (pairs.values[2] + pairs.values[3])) == 3);
  }
}

TEST_CASE("tridiagonal solve") {
  std::mt19937_64 rng(3);
  const SymmetricTridiagonal a = random_spd(30, rng);
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(30, -1.0, 2.0);
  const Eigen::VectorXd b = a * x;
  const Eigen::VectorXd got = solve_tridiagonal(a.off_diagonal, a.diagonal, a.off_diagonal, b);
  CHECK((got - x).norm() < 1e-12);
}

TEST_CASE("clamped spline reproduces a clamped cubic") {
  // f(x) = x^2 (3 - 2x) has zero slope at 0 and 1.
  const int n = 21;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) {
    const double x = i / (n - 1.0);
    v[i] = x * x * (3 - 2 * x);
  }
  const ClampedCubicSpline s(0.0, 1.0, v);
  for (double x : {0.0, 0.013, 0.5, 0.77, 1.0}) {
    CHECK(s(x) == doctest::Approx(x * x * (3 - 2 * x)).epsilon(1e-12));
    CHECK(s.derivative(x) == doctest::Approx(6 * x * (1 - x)).epsilon(1e-10));
  }
}

TEST_CASE("cosine basis") {
  const PoincareBasis1D b = PoincareBasis1D::cosine(-0.5, 0.5, 6);
  CHECK(b.eigenvalue(1) == doctest::Approx(std::numbers::pi * std::numbers::pi));
  CHECK(b.poincare_constant() == doctest::Approx(1.0 / (std::numbers::pi * std::numbers::pi)));
  CHECK(std::abs(b.eval(1, 0.0)) < 1e-15);
  CHECK(b.eval(0, 0.3) == 1.0);
  for (int k = 1; k <= 6; ++k) CHECK(b.eigenvalue(k) / (k * k) == doctest::Approx(std::numbers::pi * std::numbers::pi));
  CHECK((gram(b, false, 2000) - Eigen::MatrixXd::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((gram(b, true, 2000) - Eigen::MatrixXd::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-10);
  // Weak identity <f', phi_1'> = lambda_1 <f, phi_1> for f = phi_1, phi_2.
  for (int f = 1; f <= 2; ++f) {
    const double lhs = integrate_against_density(b, [&](double x) { return b.eval_deriv(f, x) * b.eval_deriv(1, x); }, 2000);
    const double rhs = b.eigenvalue(1) * integrate_against_density(b, [&](double x) { return b.eval(f, x) * b.eval(1, x); }, 2000);
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }

  // On [0, 2 pi] the basis is proportional to cos(n x / 2).
  const PoincareBasis1D w = PoincareBasis1D::cosine(0.0, 2 * std::numbers::pi, 3);
  for (double x : {0.1, 1.7, 4.0}) CHECK(w.eval(3, x) == doctest::Approx(std::numbers::sqrt2 * std::cos(1.5 * x)));
}

TEST_CASE("hermite basis reproduces the normalized polynomials") {
  const PoincareBasis1D h = PoincareBasis1D::hermite(6);
  for (double x : {-2.3, -0.4, 0.0, 1.1, 3.7}) {
    CHECK(h.eval(2, x) == doctest::Approx((x * x - 1) / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(h.eval(3, x) == doctest::Approx((x * x * x - 3 * x) / std::sqrt(6.0)).epsilon(1e-14));
    CHECK(h.eval(4, x) == doctest::Approx((x * x * x * x - 6 * x * x + 3) / std::sqrt(24.0)).epsilon(1e-14));
    CHECK(h.eval_deriv(1, x) == 1.0);
  }
  for (int k = 0; k <= 6; ++k) CHECK(h.eigenvalue(k) == k);
  CHECK(h.eval(0, 12.0) == 1.0);
}

TEST_CASE("FEM on a uniform law reproduces the cosine basis") {
  const auto t0 = std::chrono::steady_clock::now();
  const PoincareBasis1D b = PoincareBasis1D::fem(Marginal(Family::Uniform, {-0.5, 0.5}), 6);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(seconds < 5.0);
  CHECK(b.kind() == BasisKind::Fem);
  for (int k = 1; k <= 6; ++k) {
    CHECK(b.eigenvalue(k) == doctest::Approx(k * k * std::numbers::pi * std::numbers::pi).epsilon(1e-3));
    CHECK(sign_changes(b, k, 5000) == k);
    CHECK(b.eval(k, -0.5) > 0.0);
    CHECK(b.eval_deriv(k, -0.5) == 0.0);
    CHECK(b.eval_deriv(k, 0.5) == 0.0);
  }
  CHECK((gram(b, false, 10000) - Eigen::MatrixXd::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-3);
  CHECK((gram(b, true, 10000) - Eigen::MatrixXd::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-3);
  const PoincareBasis1D c = PoincareBasis1D::cosine(-0.5, 0.5, 6);
  for (double x : {-0.41, 0.0, 0.23}) CHECK(b.eval(3, x) == doctest::Approx(c.eval(3, x)).epsilon(1e-4).scale(1.0));
}

TEST_CASE("FEM on a truncated Gaussian") {
  const PoincareBasis1D b = build_basis(truncate(Marginal(Family::Gaussian, {0.0, 1.0})), 6);
  CHECK(b.kind() == BasisKind::Fem);
  // Legendre-Galerkin solution (degree 60, 600-point Gauss rule) of the same
  // truncated Neumann problem.
  const double reference[] = {0.0, 1.0000447165107065, 2.0009032669657016, 3.0081049615660604,
                              4.042702902644782, 5.150495876811004, 6.391059896555656};
  for (int k = 1; k <= 6; ++k) CHECK(b.eigenvalue(k) == doctest::Approx(reference[k]).epsilon(1e-4));
  // Low orders barely feel the cut and stay close to Hermite.
  const PoincareBasis1D h = PoincareBasis1D::hermite(2);
  for (double x : {-1.5, 0.2, 2.0}) {
    for (int k = 1; k <= 2; ++k) CHECK(b.eval(k, x) == doctest::Approx(h.eval(k, x) * (k % 2 ? -1 : 1)).epsilon(1e-2).scale(1.0));
  }
}

TEST_CASE("FEM properties across marginals") {
  const std::vector<Marginal> laws = {
      Marginal(Family::Triangular, {-0.5, 0.5}),
      standardize(Marginal(Family::Gumbel, {1013.0, 558.0}, 500.0, 3000.0)).first,
      standardize(truncate(Marginal(Family::Gaussian, {30.0, 8.0}, 15.0))).first,
      truncate(Marginal(Family::Lognormal, {0.0, 0.5})),
      Marginal(Family::Beta, {2.0, 3.0, -0.5, 0.5}),
  };
  for (const Marginal& m : laws) {
    CAPTURE(family_name(m.family()));
    const PoincareBasis1D b = PoincareBasis1D::fem(truncate(m), 8);
    for (int k = 1; k <= 8; ++k) {
      CHECK(b.eigenvalue(k) > b.eigenvalue(k - 1));
      CHECK(sign_changes(b, k, 8000) == k);
    }
    CHECK((gram(b, false, 10000).topLeftCorner(7, 7) - Eigen::MatrixXd::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-3);
    CHECK((gram(b, true, 10000).topLeftCorner(7, 7) - Eigen::MatrixXd::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-3);
    // Weak form against phi_k for f = phi_1..phi_4.
    for (int k = 1; k <= 4; ++k) {
      for (int f = 1; f <= 4; ++f) {
        const double lhs = integrate_against_density(b, [&](double x) { return b.eval_deriv(f, x) * b.eval_deriv(k, x); }, 10000);
        const double rhs = b.eigenvalue(k) * integrate_against_density(b, [&](double x) { return b.eval(f, x) * b.eval(k, x); }, 10000);
        CHECK(std::abs(lhs - rhs) <= 1e-3 * b.eigenvalue(std::max(f, k)));
      }
    }
    // Poincare equality case for phi_1.
    const double var = integrate_against_density(b, [&](double x) { return b.eval(1, x) * b.eval(1, x); }, 10000) -
                       std::pow(integrate_against_density(b, [&](double x) { return b.eval(1, x); }, 10000), 2);
    const double energy = integrate_against_density(b, [&](double x) { return std::pow(b.eval_deriv(1, x), 2); }, 10000);
    CHECK(var == doctest::Approx(b.poincare_constant() * energy).epsilon(2e-3));
  }
}

TEST_CASE("eigenvalue asymptotics for a smooth density") {
  const Marginal m(Family::Gaussian, {0.1, 0.5}, -0.5, 0.5);
  const PoincareBasis1D b = PoincareBasis1D::fem(m, 8);
  const double limit = std::numbers::pi * std::numbers::pi;
  CHECK(std::abs(b.eigenvalue(8) / 64.0 - limit) / limit < 0.02);
  double prev_gap = std::abs(b.eigenvalue(4) / 16.0 - limit);
  for (int k = 5; k <= 8; ++k) {
    const double gap = std::abs(b.eigenvalue(k) / (k * k) - limit);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
}

TEST_CASE("evaluation guards") {
  const PoincareBasis1D b = PoincareBasis1D::cosine(0.0, 1.0, 3);
  CHECK_THROWS_AS(b.eval(4, 0.5), DomainError);
  CHECK_THROWS_AS(b.eval(1, 1.5), DomainError);
  CHECK_THROWS_AS(PoincareBasis1D::fem(Marginal(Family::Gaussian, {0.0, 1.0}), 3), std::invalid_argument);
}

TEST_CASE("csv dumps") {
  const PoincareBasis1D b = PoincareBasis1D::cosine(0.0, 1.0, 2);
  std::ostringstream eig, samples;
  write_eigenvalues_csv(eig, b);
  write_basis_samples_csv(samples, b, 3);
  CHECK(eig.str().rfind("order,eigenvalue\n0,0\n", 0) == 0);
  CHECK(samples.str().rfind("x,phi_0,phi_1,phi_2,dphi_0,dphi_1,dphi_2\n", 0) == 0);
}

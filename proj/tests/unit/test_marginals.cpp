#include "doctest.h"

#include <cmath>
#include <numbers>

#include "poince/marginals.hpp"

using namespace poince;

namespace {

// Composite Simpson rule on [a, b] with n (even) panels.
template <typename F>
double simpson(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

// Standard normal quantile by bisection on the erfc-based CDF.
double normal_quantile_bisect(double p) {
  double lo = -10.0, hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * std::erfc(-mid / std::numbers::sqrt2) < p) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<Marginal> catalogue() {
  return {
      Marginal(Family::Uniform, {7.0, 9.0}),
      Marginal(Family::Gaussian, {0.0, 1.0}),
      Marginal(Family::Gaussian, {30.0, 8.0}, 15.0),
      Marginal(Family::Gumbel, {1013.0, 558.0}, 500.0, 3000.0),
      Marginal(Family::GumbelMin, {2.0, 0.5}),
      Marginal(Family::Triangular, {49.0, 51.0}),
      Marginal(Family::Triangular, {0.0, 4.0, 1.0}),
      Marginal(Family::Beta, {2.0, 3.0, 0.0, 1.0}),
      Marginal(Family::Beta, {0.8, 0.6, -1.0, 2.0}),
      Marginal(Family::Gamma, {2.5, 1.5}),
      Marginal(Family::Gamma, {0.7, 1.0}),
      Marginal(Family::Exponential, {2.0}),
      Marginal(Family::Weibull, {1.7, 3.0}),
      Marginal(Family::Lognormal, {0.2, 0.4}),
      Marginal(Family::Logistic, {1.0, 0.3}),
  };
}

}  // namespace

TEST_CASE("standard normal truncation matches the bisection quantile") {
  const Marginal t = truncate(Marginal(Family::Gaussian, {0.0, 1.0}));
  const double z = normal_quantile_bisect(1.0 - 1e-6);
  CHECK(t.upper() == doctest::Approx(z).epsilon(1e-10));
  CHECK(t.lower() == doctest::Approx(-z).epsilon(1e-10));
  // Upper-tail quantile z with P(Z > z) = 1e-6.
  CHECK(z == doctest::Approx(4.753424308822899).epsilon(1e-9));
}

TEST_CASE("lower bound of a bounded side is kept") {
  const Marginal t = truncate(Marginal(Family::Gaussian, {30.0, 8.0}, 15.0));
  CHECK(t.lower() == 15.0);
  CHECK(t.upper() == doctest::Approx(30.0 + 8.0 * 4.753424308817087).epsilon(1e-10));
}

TEST_CASE("uniform truncation is a no-op") {
  const Marginal t = truncate(Marginal(Family::Uniform, {7.0, 9.0}));
  CHECK(t.lower() == 7.0);
  CHECK(t.upper() == 9.0);
  CHECK(t.mass() == 1.0);
}

TEST_CASE("laplace is rejected") {
  CHECK_THROWS_AS(truncate(Marginal(Family::Laplace, {0.0, 1.0})), UnsupportedFamilyError);
}

TEST_CASE("truncated densities integrate to one") {
  for (const Marginal& m : catalogue()) {
    const Marginal t = truncate(m);
    CAPTURE(family_name(m.family()));
    // Quantile-spaced pieces resolve steep edges.
    const double cuts[] = {0.0, 1e-5, 1e-4, 1e-3, 1e-2, 0.1, 0.5, 0.9, 0.99, 0.999, 0.9999, 0.99999, 1.0};
    // Integrable endpoint singularities (beta with a shape below 1) are
    // skipped and their CDF tail added back.
    const bool singular = std::isinf(t.pdf(t.lower())) || std::isinf(t.pdf(t.upper()));
    double total = singular ? 2e-5 : 0.0;
    for (int k = singular ? 1 : 0; k + 1 < (singular ? 12 : 13); ++k) {
      total += simpson([&](double x) { return t.pdf(x); }, t.quantile(cuts[k]), t.quantile(cuts[k + 1]), 2000);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("cdf and quantile round trip") {
  for (const Marginal& m : catalogue()) {
    const Marginal t = truncate(m);
    CAPTURE(family_name(m.family()));
    for (double p : {1e-6, 0.5, 1.0 - 1e-6}) {
      CHECK(t.cdf(t.quantile(p)) == doctest::Approx(p).epsilon(1e-10));
    }
  }
}

TEST_CASE("cdf agrees with integrated density") {
  for (const Marginal& m : catalogue()) {
    const Marginal t = truncate(m);
    CAPTURE(family_name(m.family()));
    const double x = t.quantile(0.3);
    const double lo = m.family() == Family::Gamma || m.family() == Family::Beta ? t.quantile(0.05) : t.lower();
    const double base = m.family() == Family::Gamma || m.family() == Family::Beta ? 0.05 : 0.0;
    const double integral = simpson([&](double s) { return t.pdf(s); }, lo, x, 20000);
    CHECK(base + integral == doctest::Approx(0.3).epsilon(1e-7));
  }
}

TEST_CASE("standardization maps") {
  const auto [u, mu] = standardize(Marginal(Family::Uniform, {7.0, 9.0}));
  CHECK(u.lower() == doctest::Approx(-0.5));
  CHECK(u.upper() == doctest::Approx(0.5));
  CHECK(mu.shift == 8.0);
  CHECK(mu.scale == 2.0);

  const auto [g, mg] = standardize(Marginal(Family::Gumbel, {1013.0, 558.0}, 500.0, 3000.0));
  CHECK(mg.shift == 1013.0);
  CHECK(mg.scale == 558.0);
  CHECK(g.params()[0] == 0.0);
  CHECK(g.params()[1] == 1.0);
  CHECK(g.lower() == doctest::Approx((500.0 - 1013.0) / 558.0));

  const auto [n, mn] = standardize(Marginal(Family::Gaussian, {0.0, 1.0}));
  CHECK(mn.is_identity());
  CHECK(!n.is_truncated());
}

TEST_CASE("standardization round trip is affine-exact") {
  for (const Marginal& m : catalogue()) {
    const Marginal t = truncate(m);
    const auto [s, map] = standardize(t);
    for (double p : {0.01, 0.3, 0.77, 0.999}) {
      const double x = t.quantile(p);
      CHECK(map.inverse(map.forward(x)) == doctest::Approx(x).epsilon(1e-12));
      // The standardized law is the pushforward of the original one.
      CHECK(s.cdf(map.forward(x)) == doctest::Approx(p).epsilon(1e-9));
    }
  }
}

TEST_CASE("point densities") {
  CHECK(Marginal(Family::Uniform, {-0.5, 0.5}).pdf(0.0) == 1.0);
  CHECK(Marginal(Family::Uniform, {-0.5, 0.5}).potential(0.0) == doctest::Approx(0.0));
  CHECK(Marginal(Family::Gaussian, {0.0, 1.0}).pdf(0.0) == doctest::Approx(0.3989422804014327));
  CHECK(Marginal(Family::Triangular, {49.0, 51.0}).pdf(50.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(Marginal(Family::Uniform, {0.0, 1.0}).pdf(2.0), DomainError);
}

TEST_CASE("gumbel cdf at the Q bounds") {
  const Marginal q(Family::Gumbel, {1013.0, 558.0});
  CHECK(q.cdf(500.0) == doctest::Approx(0.08145765086911357).epsilon(1e-13));
  CHECK(q.cdf(3000.0) == doctest::Approx(0.9719874997650119).epsilon(1e-13));
}

TEST_CASE("potential derivative matches finite differences") {
  for (const Marginal& m : catalogue()) {
    const Marginal t = truncate(m);
    CAPTURE(family_name(m.family()));
    const double x = t.quantile(0.37);
    const double h = 1e-6 * (t.upper() - t.lower());
    const double fd = (t.potential(x + h) - t.potential(x - h)) / (2 * h);
    CHECK(t.potential_prime(x) == doctest::Approx(fd).epsilon(1e-5));
  }
}

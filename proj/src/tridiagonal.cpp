#include "poince/tridiagonal.hpp"

#include <cmath>
#include <limits>

namespace poince {

Eigen::VectorXd SymmetricTridiagonal::operator*(const Eigen::VectorXd& x) const {
  const Eigen::Index n = size();
  Eigen::VectorXd y = diagonal.cwiseProduct(x);
  if (n > 1) {
    y.head(n - 1) += off_diagonal.cwiseProduct(x.tail(n - 1));
    y.tail(n - 1) += off_diagonal.cwiseProduct(x.head(n - 1));
  }
  return y;
}

Eigen::MatrixXd SymmetricTridiagonal::to_dense() const {
  const Eigen::Index n = size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  a.diagonal() = diagonal;
  if (n > 1) {
    a.diagonal(1) = off_diagonal;
    a.diagonal(-1) = off_diagonal;
  }
  return a;
}

Eigen::VectorXd solve_tridiagonal(Eigen::VectorXd dl, Eigen::VectorXd d, Eigen::VectorXd du,
                                  Eigen::VectorXd b) {
  const Eigen::Index n = d.size();
  if (n == 0) return b;
  const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon() +
                      std::numeric_limits<double>::epsilon() * d.cwiseAbs().maxCoeff();
  auto guard = [tiny](double& pivot) {
    if (std::abs(pivot) < tiny) pivot = pivot < 0 ? -tiny : tiny;
  };
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      guard(d[i]);
      const double fact = dl[i] / d[i];
      d[i + 1] -= fact * du[i];
      b[i + 1] -= fact * b[i];
      dl[i] = 0.0;
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      const double temp = d[i + 1];
      d[i + 1] = du[i] - fact * temp;
      if (i + 2 < n) {
        dl[i] = du[i + 1];
        du[i + 1] = -fact * dl[i];
      } else {
        dl[i] = 0.0;
      }
      du[i] = temp;
      const double bt = b[i];
      b[i] = b[i + 1];
      b[i + 1] = bt - fact * b[i + 1];
    }
  }
  guard(d[n - 1]);
  b[n - 1] /= d[n - 1];
  if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
  for (Eigen::Index i = n - 3; i >= 0; --i) {
    b[i] = (b[i] - du[i] * b[i + 1] - dl[i] * b[i + 2]) / d[i];
  }
  return b;
}

Eigen::Index count_eigenvalues_below(const SymmetricTridiagonal& k, const SymmetricTridiagonal& m,
                                     double sigma) {
  const Eigen::Index n = k.size();
  const double pivmin = std::numeric_limits<double>::min() * 1e10;
  Eigen::Index negatives = 0;
  double q = k.diagonal[0] - sigma * m.diagonal[0];
  for (Eigen::Index i = 0;; ++i) {
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0) ++negatives;
    if (i + 1 == n) break;
    const double e = k.off_diagonal[i] - sigma * m.off_diagonal[i];
    q = (k.diagonal[i + 1] - sigma * m.diagonal[i + 1]) - e * e / q;
  }
  return negatives;
}

GeneralizedEigenpairs smallest_generalized_eigenpairs(const SymmetricTridiagonal& k,
                                                      const SymmetricTridiagonal& m, int count) {
  const Eigen::Index n = k.size();
  if (m.size() != n || count < 1 || count > n) {
    throw std::invalid_argument("inconsistent generalized eigenproblem dimensions");
  }
  // Bracket: lower bound from Gershgorin-free doubling on both sides.
  double lo = -1.0;
  while (count_eigenvalues_below(k, m, lo) > 0) {
    lo = lo * 2.0;
    if (!std::isfinite(lo)) throw SpectralError("failed to bracket the spectrum from below");
  }
  double hi = 1.0;
  while (count_eigenvalues_below(k, m, hi) < count) {
    hi *= 2.0;
    if (!std::isfinite(hi)) throw SpectralError("failed to bracket the spectrum from above");
  }

  GeneralizedEigenpairs out;
  out.values.resize(count);
  out.vectors.resize(n, count);
  for (int j = 0; j < count; ++j) {
    double a = lo;
    double b = hi;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (count_eigenvalues_below(k, m, mid) > j) {
        b = mid;
      } else {
        a = mid;
      }
      if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b))) {
        break;
      }
    }
    const double mu = 0.5 * (a + b);
    out.values[j] = mu;

    Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
    Eigen::VectorXd diag = k.diagonal - mu * m.diagonal;
    if (n > 1) sub = k.off_diagonal - mu * m.off_diagonal;
    Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] += 1e-3 * std::sin(0.7 * static_cast<double>(i) + j);
    for (int it = 0; it < 4; ++it) {
      x = solve_tridiagonal(sub, diag, sub, m * x);
      for (int prev = 0; prev < j; ++prev) {
        const Eigen::VectorXd v = out.vectors.col(prev);
        x -= v.dot(m * x) * v;
      }
      const double norm = std::sqrt(x.dot(m * x));
      if (!(norm > 0.0) || !std::isfinite(norm)) throw SpectralError("inverse iteration failed");
      x /= norm;
    }
    out.vectors.col(j) = x;
  }
  return out;
}

}  // namespace poince

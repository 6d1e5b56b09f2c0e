#include "poince/basis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace poince {

std::size_t MultiIndexHash::operator()(const MultiIndex& alpha) const noexcept {
  std::size_t h = alpha.size();
  for (int a : alpha) h ^= static_cast<std::size_t>(a) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) result = result * static_cast<std::uint64_t>(n - k + i) / i;
  return result;
}

int total_order(const MultiIndex& alpha) { return std::accumulate(alpha.begin(), alpha.end(), 0); }

namespace {

// Depth-first enumeration of the compositions of `degree` into d parts, in
// descending lexicographic order, keeping those with sum alpha_i^q <= budget.
void enumerate_degree(int d, int degree, double q, double budget, std::vector<MultiIndex>& out) {
  MultiIndex alpha(d, 0);
  std::function<void(int, int, double)> rec = [&](int pos, int remaining, double used) {
    if (pos == d - 1) {
      const double cost = remaining > 0 ? std::pow(remaining, q) : 0.0;
      if (used + cost <= budget) {
        alpha[pos] = remaining;
        out.push_back(alpha);
        alpha[pos] = 0;
      }
      return;
    }
    for (int a = remaining; a >= 0; --a) {
      const double cost = a > 0 ? std::pow(a, q) : 0.0;
      const int rest = remaining - a;
      // Concavity: the rest costs at least rest^q.
      const double floor_rest = rest > 0 ? std::pow(rest, q) : 0.0;
      if (used + cost + floor_rest > budget) continue;
      alpha[pos] = a;
      rec(pos + 1, rest, used + cost);
    }
    alpha[pos] = 0;
  };
  rec(0, degree, 0.0);
}

}  // namespace

namespace {

double hyperbolic_budget(int p, double q) { return std::pow(static_cast<double>(p), q) * (1.0 + 1e-12) + 1e-12; }

}  // namespace

bool in_hyperbolic(const MultiIndex& alpha, int p, double q) {
  if (total_order(alpha) > p) return false;
  double used = 0.0;
  for (int a : alpha) used += a > 0 ? std::pow(a, q) : 0.0;
  return used <= hyperbolic_budget(p, q);
}

std::vector<MultiIndex> hyperbolic(int d, int p, double q) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (p < 0) throw std::invalid_argument("degree must be >= 0");
  if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("q must lie in (0, 1]");
  const double budget = hyperbolic_budget(p, q);
  std::vector<MultiIndex> out;
  for (int degree = 0; degree <= p; ++degree) enumerate_degree(d, degree, q, budget, out);
  return out;
}

std::vector<MultiIndex> total_degree(int d, int p) { return hyperbolic(d, p, 1.0); }

BasisSet::BasisSet(std::vector<MultiIndex> indices, std::vector<BasisPtr> bases, Truncation truncation)
    : indices_(std::move(indices)), bases_(std::move(bases)), truncation_(truncation) {
  const int d = dim();
  if (d == 0) throw std::invalid_argument("basis set needs at least one input");
  max_order_.assign(d, 0);
  factors_.reserve(indices_.size());
  derivative_columns_.assign(d, {});
  for (Eigen::Index j = 0; j < size(); ++j) {
    const MultiIndex& alpha = indices_[j];
    if (static_cast<int>(alpha.size()) != d) throw std::invalid_argument("multi-index dimension mismatch");
    std::vector<Factor> factors;
    for (int i = 0; i < d; ++i) {
      if (alpha[i] < 0) throw std::invalid_argument("negative multi-index entry");
      if (alpha[i] > 0) {
        factors.push_back({i, alpha[i]});
        derivative_columns_[i].push_back(j);
        max_order_[i] = std::max(max_order_[i], alpha[i]);
      }
    }
    factors_.push_back(std::move(factors));
    if (!lookup_.emplace(alpha, j).second) throw std::invalid_argument("duplicate multi-index");
  }
  for (int i = 0; i < d; ++i) {
    if (!bases_[i] || bases_[i]->max_order() < max_order_[i]) {
      throw std::invalid_argument("1D basis order too low for the multi-index set");
    }
  }
}

BasisSet BasisSet::make(std::vector<BasisPtr> bases, Truncation truncation) {
  const int d = static_cast<int>(bases.size());
  return BasisSet(hyperbolic(d, truncation.degree, truncation.q), std::move(bases), truncation);
}

std::optional<Eigen::Index> BasisSet::position(const MultiIndex& alpha) const {
  const auto it = lookup_.find(alpha);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

void BasisSet::tabulate(const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::MatrixXd& values) const {
  const int d = dim();
  if (x.size() != d) throw DomainError("point dimension does not match the basis");
  const int width = *std::max_element(max_order_.begin(), max_order_.end()) + 1;
  values.resize(width, d);
  Eigen::VectorXd column;
  for (int i = 0; i < d; ++i) {
    column.resize(bases_[i]->max_order() + 1);
    bases_[i]->eval_all(x[i], column);
    values.col(i).head(max_order_[i] + 1) = column.head(max_order_[i] + 1);
  }
}

Eigen::VectorXd BasisSet::eval_row(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::MatrixXd values;
  tabulate(x, values);
  Eigen::VectorXd row(size());
  for (Eigen::Index j = 0; j < size(); ++j) {
    double product = 1.0;
    for (const Factor& f : factors_[j]) product *= values(f.order, f.dim);
    row[j] = product;
  }
  return row;
}

Eigen::VectorXd BasisSet::eval_deriv_row(int i, const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (i < 0 || i >= dim()) throw DomainError("input index out of range");
  Eigen::MatrixXd values;
  tabulate(x, values);
  const PoincareBasis1D& b = *bases_[i];
  Eigen::VectorXd derivs(b.max_order() + 1);
  b.eval_deriv_all(x[i], derivs);
  const auto& columns = derivative_columns_[i];
  Eigen::VectorXd row(static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    double product = 1.0;
    for (const Factor& f : factors_[columns[c]]) {
      product *= f.dim == i ? derivs[f.order] / std::sqrt(b.eigenvalue(f.order)) : values(f.order, f.dim);
    }
    row[static_cast<Eigen::Index>(c)] = product;
  }
  return row;
}

Eigen::MatrixXd BasisSet::design_matrix(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
  Eigen::MatrixXd psi(x.rows(), size());
  for (Eigen::Index k = 0; k < x.rows(); ++k) psi.row(k) = eval_row(x.row(k).transpose()).transpose();
  return psi;
}

Eigen::MatrixXd BasisSet::derivative_matrix(int i, const Eigen::Ref<const Eigen::MatrixXd>& x) const {
  const auto cols = static_cast<Eigen::Index>(derivative_columns(i).size());
  Eigen::MatrixXd psi(x.rows(), cols);
  for (Eigen::Index k = 0; k < x.rows(); ++k) {
    psi.row(k) = eval_deriv_row(i, x.row(k).transpose()).transpose();
  }
  return psi;
}

}  // namespace poince

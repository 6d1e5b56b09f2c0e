#ifndef POINCE_BASIS_HPP
#define POINCE_BASIS_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "poince/poincare1d.hpp"

namespace poince {

using MultiIndex = std::vector<int>;

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& alpha) const noexcept;
};

/// Binomial coefficient C(n, k) in 64-bit arithmetic.
std::uint64_t binomial(int n, int k);

int total_order(const MultiIndex& alpha);

/// {alpha : sum alpha_i <= p}, graded then descending-lexicographic
/// (d = 2, p = 2 gives 00, 10, 01, 20, 11, 02).
std::vector<MultiIndex> total_degree(int d, int p);

/// {alpha : (sum alpha_i^q)^(1/q) <= p} for q in (0, 1], same ordering as
/// total_degree. Enumerated directly with pruning, so large d stays cheap.
std::vector<MultiIndex> hyperbolic(int d, int p, double q);

/// True when alpha belongs to hyperbolic(d, p, q).
bool in_hyperbolic(const MultiIndex& alpha, int p, double q);

struct Truncation {
  int degree = 0;
  double q = 1.0;
};

using BasisPtr = std::shared_ptr<const PoincareBasis1D>;

/// Candidate multivariate basis: an ordered multi-index set together with the
/// d one-dimensional bases it tensorizes. Evaluation happens in standardized
/// coordinates.
class BasisSet {
 public:
  BasisSet(std::vector<MultiIndex> indices, std::vector<BasisPtr> bases, Truncation truncation);

  /// Hyperbolic (total degree when q == 1) set over the given bases.
  static BasisSet make(std::vector<BasisPtr> bases, Truncation truncation);

  int dim() const { return static_cast<int>(bases_.size()); }
  Eigen::Index size() const { return static_cast<Eigen::Index>(indices_.size()); }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  const MultiIndex& index(Eigen::Index j) const { return indices_[j]; }
  const std::vector<BasisPtr>& bases() const { return bases_; }
  const PoincareBasis1D& basis(int i) const { return *bases_[i]; }
  const Truncation& truncation() const { return truncation_; }
  std::optional<Eigen::Index> position(const MultiIndex& alpha) const;

  /// Positions j with alpha_j(i) >= 1, in basis order.
  const std::vector<Eigen::Index>& derivative_columns(int i) const { return derivative_columns_[i]; }

  /// Phi_alpha(x) for every alpha in the set.
  Eigen::VectorXd eval_row(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// lambda_{i,alpha_i}^{-1/2} d Phi_alpha / d x_i over derivative_columns(i).
  Eigen::VectorXd eval_deriv_row(int i, const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// Rows of eval_row for each row of x (N x d).
  Eigen::MatrixXd design_matrix(const Eigen::Ref<const Eigen::MatrixXd>& x) const;
  /// Rows of eval_deriv_row(i, .) for each row of x.
  Eigen::MatrixXd derivative_matrix(int i, const Eigen::Ref<const Eigen::MatrixXd>& x) const;

 private:
  struct Factor {
    int dim;
    int order;
  };
  void tabulate(const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::MatrixXd& values) const;

  std::vector<MultiIndex> indices_;
  std::vector<std::vector<Factor>> factors_;
  std::vector<BasisPtr> bases_;
  Truncation truncation_;
  std::vector<int> max_order_;
  std::vector<std::vector<Eigen::Index>> derivative_columns_;
  std::unordered_map<MultiIndex, Eigen::Index, MultiIndexHash> lookup_;
};

}  // namespace poince

#endif  // POINCE_BASIS_HPP

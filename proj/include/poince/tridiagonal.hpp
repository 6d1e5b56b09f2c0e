#ifndef POINCE_TRIDIAGONAL_HPP
#define POINCE_TRIDIAGONAL_HPP

#include <Eigen/Dense>

#include <stdexcept>

namespace poince {

class SpectralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Symmetric tridiagonal matrix stored by its diagonal and first off-diagonal.
struct SymmetricTridiagonal {
  Eigen::VectorXd diagonal;
  Eigen::VectorXd off_diagonal;  // size n - 1

  Eigen::Index size() const { return diagonal.size(); }
  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd to_dense() const;
};

/// Solves a general tridiagonal system with partial pivoting (LAPACK gtsv
/// scheme). A zero pivot is replaced by a tiny value, which is what inverse
/// iteration wants.
Eigen::VectorXd solve_tridiagonal(Eigen::VectorXd sub, Eigen::VectorXd diag, Eigen::VectorXd sup,
                                  Eigen::VectorXd rhs);

/// Number of generalized eigenvalues of (K, M) strictly below sigma, M SPD.
/// Counts negative pivots of K - sigma M (Sylvester inertia).
Eigen::Index count_eigenvalues_below(const SymmetricTridiagonal& k, const SymmetricTridiagonal& m,
                                     double sigma);

struct GeneralizedEigenpairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, M-orthonormal
};

/// Smallest `count` eigenpairs of K a = mu M a for symmetric tridiagonal K and
/// SPD tridiagonal M, by Sturm bisection plus inverse iteration.
GeneralizedEigenpairs smallest_generalized_eigenpairs(const SymmetricTridiagonal& k,
                                                      const SymmetricTridiagonal& m, int count);

}  // namespace poince

#endif  // POINCE_TRIDIAGONAL_HPP

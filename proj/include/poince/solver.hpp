#ifndef POINCE_SOLVER_HPP
#define POINCE_SOLVER_HPP

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <vector>

#include "poince/basis.hpp"

namespace poince {

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Least-squares coefficients by column-pivoted Householder QR. Throws
/// SingularMatrixError when psi has fewer rows than columns or is rank
/// deficient.
Eigen::VectorXd ols(const Eigen::Ref<const Eigen::MatrixXd>& psi, const Eigen::Ref<const Eigen::VectorXd>& y);

/// Leave-one-out error of the OLS fit on the given columns, from the hat
/// matrix diagonal, times the correction N/(N-k) (1 + tr((Psi_a^T Psi_a)^-1))
/// and divided by the variance of y (its mean square when y has no spread).
/// +inf when some leverage reaches 1 or N <= k.
double loo_corrected(const Eigen::Ref<const Eigen::MatrixXd>& psi, const Eigen::Ref<const Eigen::VectorXd>& y,
                     const std::vector<Eigen::Index>& active);

enum class LarsAction { Continue, Stop, Reject };

/// State exposed after each column enters the active set.
struct LarsStep {
  const std::vector<Eigen::Index>& active;  // entry order
  const Eigen::VectorXd& correlations;      // X^T r, standardized columns
  Eigen::Index entered;
};

/// Plain least-angle regression on columns scaled to unit empirical RMS.
/// When `intercept` names a column it enters first, the remaining columns and
/// y are centered, and it is excluded from the correlations. Columns
/// collinear with the active set, or rejected by the callback, are skipped
/// permanently. Returns the number of entries accepted.
Eigen::Index lars_path(const Eigen::Ref<const Eigen::MatrixXd>& psi, const Eigen::Ref<const Eigen::VectorXd>& y,
                       Eigen::Index max_active, Eigen::Index intercept,
                       const std::function<LarsAction(const LarsStep&)>& on_step);

struct LarsOptions {
  /// Upper bound on the active set; min(N - 1, P) when <= 0.
  Eigen::Index max_active = 0;
  /// Stop after this many path steps without a better LOO; when <= 0 it is
  /// max(20, max_active / 10).
  Eigen::Index patience = 0;
  /// Column fitted as the intercept, or -1 when there is none.
  Eigen::Index intercept = -1;
};

struct FitResult {
  Eigen::VectorXd coefficients;       // one per column, zero outside the active set
  std::vector<Eigen::Index> active;   // entry order
  double loo_error = 0.0;
  int degree = -1;
  Eigen::Index path_length = 0;
};

/// LARS path with an OLS refit of every prefix; returns the prefix with the
/// smallest corrected LOO (ties go to the shorter prefix).
FitResult hybrid_lars(const Eigen::Ref<const Eigen::MatrixXd>& psi, const Eigen::Ref<const Eigen::VectorXd>& y,
                      const LarsOptions& options = {});

struct DegreeDiagnostic {
  int degree;
  double loo_error;
  Eigen::Index n_active;
  Eigen::Index n_columns;
};

struct AdaptiveFit {
  FitResult fit;  // coefficients indexed like the full column set
  std::vector<DegreeDiagnostic> diagnostics;
};

/// Runs hybrid_lars on the columns of psi whose multi-index lies in
/// hyperbolic(d, p, q) for each p in [p_min, p_max], stopping once the LOO
/// has risen for two consecutive degrees. Returns the smallest LOO; ties go
/// to fewer terms, then to the smaller p. `indices` labels the columns of psi.
/// The zero multi-index, when present, is used as the intercept.
AdaptiveFit degree_adaptive_fit(const Eigen::Ref<const Eigen::MatrixXd>& psi, const Eigen::Ref<const Eigen::VectorXd>& y,
                                const std::vector<MultiIndex>& indices, int p_min, int p_max, double q,
                                const LarsOptions& options = {});

}  // namespace poince

#endif  // POINCE_SOLVER_HPP

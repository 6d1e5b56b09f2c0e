#ifndef POINCE_EXPANSION_HPP
#define POINCE_EXPANSION_HPP

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "poince/basis.hpp"
#include "poince/marginals.hpp"
#include "poince/solver.hpp"

namespace poince {

/// The product input space: marginals in model units, their standardized
/// versions, the affine maps between them and one Poincaré basis per input.
class InputSpace {
 public:
  /// Gaussian inputs without bounds keep their tails (Hermite basis); every
  /// other input is truncated before standardization.
  InputSpace(std::vector<std::string> names, const std::vector<Marginal>& marginals, int max_order,
             int grid_n = kDefaultGridSize);

  int dim() const { return static_cast<int>(names_.size()); }
  int max_order() const { return max_order_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Marginal>& marginals() const { return marginals_; }
  const std::vector<Marginal>& standardized() const { return standardized_; }
  const std::vector<StandardizationMap>& maps() const { return maps_; }
  const std::vector<BasisPtr>& bases() const { return bases_; }
  const PoincareBasis1D& basis(int i) const { return *bases_[i]; }

  /// Model units to standardized coordinates, row-wise.
  Eigen::MatrixXd standardize(const Eigen::Ref<const Eigen::MatrixXd>& x) const;
  /// Gradient in model units to gradient in standardized coordinates.
  Eigen::MatrixXd standardize_gradient(const Eigen::Ref<const Eigen::MatrixXd>& g) const;

 private:
  std::vector<std::string> names_;
  std::vector<Marginal> marginals_;
  std::vector<Marginal> standardized_;
  std::vector<StandardizationMap> maps_;
  std::vector<BasisPtr> bases_;
  int max_order_;
};

using SpacePtr = std::shared_ptr<const InputSpace>;

enum class Provenance { PoinceLars, PoinceDerLars, PoinceDerAvg, PoinceMc, PoinceDerMc };

std::string_view provenance_name(Provenance p);

/// Sparse Poincaré chaos expansion: coefficients c_alpha on the standardized
/// tensor basis of an InputSpace.
struct Expansion {
  SpacePtr space;
  std::vector<MultiIndex> indices;
  Eigen::VectorXd coefficients;
  Provenance provenance = Provenance::PoinceLars;
  int input = -1;           // derivative expansions: the differentiated input
  Truncation truncation;    // candidate basis the fit selected from
  double loo_error = 0.0;
  std::vector<DegreeDiagnostic> diagnostics;

  Eigen::Index size() const { return static_cast<Eigen::Index>(indices.size()); }
  /// c_alpha, 0 when alpha is absent.
  double coefficient(const MultiIndex& alpha) const;
  /// Whether the candidate basis of this fit contains alpha.
  bool candidate_contains(const MultiIndex& alpha) const;
};

struct FitConfig {
  int p_min = 1;
  int p_max = 5;
  double q = 1.0;
  LarsOptions lars;
};

/// Sparse regression of model evaluations y on the tensor basis.
Expansion fit_poince(const SpacePtr& space, const Eigen::Ref<const Eigen::MatrixXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& y, const FitConfig& config);

/// Sparse regression of model-unit partial derivatives dy = df/dx_i on the
/// normalized derivative basis. Coefficients are returned in the same
/// normalization as fit_poince (c_alpha, not the derivative coefficients).
Expansion fit_poince_der(const SpacePtr& space, const Eigen::Ref<const Eigen::MatrixXd>& x,
                         const Eigen::Ref<const Eigen::VectorXd>& dy, int i, const FitConfig& config);

/// Averages c_alpha over the derivative expansions whose candidate basis
/// contains alpha, absent coefficients counting as 0. The result has no
/// constant term.
Expansion average_der_expansions(const std::vector<Expansion>& expansions);

/// Sets c_0 to the mean residual of the expansion on (x, y).
Expansion fit_constant_residual(const Expansion& expansion, const Eigen::Ref<const Eigen::MatrixXd>& x,
                                const Eigen::Ref<const Eigen::VectorXd>& y);

/// Monte Carlo projection on the total-degree p set: c_0 = mean(y) and
/// c_alpha = mean((y - mean(y)) Phi_alpha) otherwise.
Expansion fit_projection_mc(const SpacePtr& space, const Eigen::Ref<const Eigen::MatrixXd>& x,
                            const Eigen::Ref<const Eigen::VectorXd>& y, int p);

/// Monte Carlo projection of a model-unit partial derivative:
/// c_alpha = mean(dy_std * Psi_d) / sqrt(lambda) over alpha_i >= 1.
Expansion fit_projection_der_mc(const SpacePtr& space, const Eigen::Ref<const Eigen::MatrixXd>& x,
                                const Eigen::Ref<const Eigen::VectorXd>& dy, int i, int p);

/// Surrogate values at model-unit points.
Eigen::VectorXd eval_surrogate(const Expansion& expansion, const Eigen::Ref<const Eigen::MatrixXd>& x);

/// JSON document: inputs, standardization, truncation, provenance, terms.
std::string expansion_to_json(const Expansion& expansion);

}  // namespace poince

#endif  // POINCE_EXPANSION_HPP

#ifndef POINCE_SENSITIVITY_HPP
#define POINCE_SENSITIVITY_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "poince/expansion.hpp"
#include "poince/models.hpp"

namespace poince {

/// D = sum of c_alpha^2 over alpha != 0.
double total_variance(const Expansion& expansion);

struct PartialVariances {
  double first = 0.0;  // D_i^1
  double total = 0.0;  // D_i^tot
};

PartialVariances partial_variances(const Expansion& expansion, int i);

/// nu_i = E[(df/dx_i)^2] in model units: sum over alpha_i >= 1 of
/// lambda_{i,alpha_i} c_alpha^2, divided by the squared map scale.
double dgsm_from_coefficients(const Expansion& expansion, int i);

/// C_P(mu_i) nu_i = sum over alpha_i >= 1 of (lambda_{i,alpha_i} / lambda_{i,1}) c_alpha^2.
/// Never below partial_variances(expansion, i).total.
double dgsm_upper_bound(const Expansion& expansion, int i);

/// Monte Carlo mean of the squared partial derivative on an i.i.d. sample.
double dgsm_mc_reference(const Model& model, const std::vector<Marginal>& marginals, Eigen::Index n,
                         std::uint64_t seed, int i);

/// mean((truth - predicted)^2) / mean((truth - mean(truth))^2). Throws
/// std::domain_error when truth has no spread.
double relmse(const Eigen::Ref<const Eigen::VectorXd>& predicted, const Eigen::Ref<const Eigen::VectorXd>& truth);

/// RelMSE of the surrogate against the model on an independent i.i.d. sample.
double relmse(const Expansion& surrogate, const Model& model, const std::vector<Marginal>& marginals,
              Eigen::Index n_val, std::uint64_t seed);

/// Unbiased sample variance.
double sample_variance(const Eigen::Ref<const Eigen::VectorXd>& y);

enum class VarianceSource { Coefficients, Empirical };

std::string_view variance_source_name(VarianceSource source);

struct InputVariances {
  double first = 0.0;
  double total = 0.0;
  double dgsm = 0.0;
  double dgsm_ub = 0.0;
};

struct InputIndices {
  double first = 0.0;
  double total = 0.0;
  double s1 = 0.0;
  double stot = 0.0;
  double dgsm = 0.0;
  double dgsm_ub = 0.0;
};

struct SensitivityReport {
  double variance = 0.0;
  VarianceSource source = VarianceSource::Coefficients;
  std::vector<InputIndices> inputs;
};

/// S = partial variance / D. Throws std::domain_error when D <= 0.
SensitivityReport normalize_report(const std::vector<InputVariances>& variances, double d, VarianceSource source);

/// Per-input partial variances and DGSM quantities of one expansion.
InputVariances input_variances(const Expansion& expansion, int i);

/// Report with D and every partial variance taken from the expansion.
SensitivityReport coefficient_report(const Expansion& expansion);

std::string report_to_json(const SensitivityReport& report, const std::vector<std::string>& names);

}  // namespace poince

#endif  // POINCE_SENSITIVITY_HPP

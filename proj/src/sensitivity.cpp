#include "poince/sensitivity.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "poince/design.hpp"

namespace poince {

namespace {

void check_input(const Expansion& expansion, int i) {
  if (i < 0 || i >= expansion.space->dim()) throw std::invalid_argument("input index out of range");
}

}  // namespace

double total_variance(const Expansion& expansion) {
  double d = 0.0;
  for (Eigen::Index j = 0; j < expansion.size(); ++j) {
    if (total_order(expansion.indices[static_cast<std::size_t>(j)]) == 0) continue;
    d += expansion.coefficients[j] * expansion.coefficients[j];
  }
  return d;
}

PartialVariances partial_variances(const Expansion& expansion, int i) {
  check_input(expansion, i);
  PartialVariances out;
  for (Eigen::Index j = 0; j < expansion.size(); ++j) {
    const MultiIndex& alpha = expansion.indices[static_cast<std::size_t>(j)];
    const int ai = alpha[static_cast<std::size_t>(i)];
    if (ai == 0) continue;
    const double c2 = expansion.coefficients[j] * expansion.coefficients[j];
    out.total += c2;
    if (total_order(alpha) == ai) out.first += c2;
  }
  return out;
}

double dgsm_from_coefficients(const Expansion& expansion, int i) {
  check_input(expansion, i);
  const PoincareBasis1D& basis = expansion.space->basis(i);
  double nu = 0.0;
  for (Eigen::Index j = 0; j < expansion.size(); ++j) {
    const int ai = expansion.indices[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    if (ai == 0) continue;
    nu += basis.eigenvalue(ai) * expansion.coefficients[j] * expansion.coefficients[j];
  }
  const double scale = expansion.space->maps()[static_cast<std::size_t>(i)].scale;
  return nu / (scale * scale);
}

double dgsm_upper_bound(const Expansion& expansion, int i) {
  check_input(expansion, i);
  const PoincareBasis1D& basis = expansion.space->basis(i);
  const double lambda1 = basis.eigenvalue(1);
  double ub = 0.0;
  // Same terms and order as partial_variances: each addend is c^2 times a
  // ratio >= 1, so rounding cannot bring the sum below D_i^tot.
  for (Eigen::Index j = 0; j < expansion.size(); ++j) {
    const int ai = expansion.indices[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    if (ai == 0) continue;
    const double c2 = expansion.coefficients[j] * expansion.coefficients[j];
    ub += (basis.eigenvalue(ai) / lambda1) * c2;
  }
  return ub;
}

double dgsm_mc_reference(const Model& model, const std::vector<Marginal>& marginals, Eigen::Index n,
                         std::uint64_t seed, int i) {
  if (i < 0 || i >= static_cast<int>(marginals.size())) throw std::invalid_argument("input index out of range");
  if (n <= 0) throw std::invalid_argument("sample size must be positive");
  const ExperimentalDesign design = mc_sample(marginals, n, seed);
  double sum = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double g = model.gradient(design.points.row(k).transpose())[i];
    sum += g * g;
  }
  return sum / static_cast<double>(n);
}

double relmse(const Eigen::Ref<const Eigen::VectorXd>& predicted, const Eigen::Ref<const Eigen::VectorXd>& truth) {
  if (predicted.size() != truth.size() || truth.size() == 0) {
    throw std::invalid_argument("prediction and truth sizes differ");
  }
  const double var = (truth.array() - truth.mean()).square().mean();
  if (!(var > 0.0)) throw std::domain_error("RelMSE is undefined for a model without variance");
  return (truth - predicted).squaredNorm() / static_cast<double>(truth.size()) / var;
}

double relmse(const Expansion& surrogate, const Model& model, const std::vector<Marginal>& marginals,
              Eigen::Index n_val, std::uint64_t seed) {
  const ExperimentalDesign design = mc_sample(marginals, n_val, seed);
  return relmse(eval_surrogate(surrogate, design.points), model.values(design.points));
}

double sample_variance(const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (y.size() < 2) throw std::invalid_argument("sample variance needs two values");
  return (y.array() - y.mean()).square().sum() / static_cast<double>(y.size() - 1);
}

std::string_view variance_source_name(VarianceSource source) {
  return source == VarianceSource::Coefficients ? "coefficients" : "empirical";
}

SensitivityReport normalize_report(const std::vector<InputVariances>& variances, double d, VarianceSource source) {
  if (!(d > 0.0)) throw std::domain_error("total variance must be positive to normalize");
  SensitivityReport report;
  report.variance = d;
  report.source = source;
  for (const InputVariances& v : variances) {
    report.inputs.push_back({v.first, v.total, v.first / d, v.total / d, v.dgsm, v.dgsm_ub});
  }
  return report;
}

InputVariances input_variances(const Expansion& expansion, int i) {
  const PartialVariances pv = partial_variances(expansion, i);
  return {pv.first, pv.total, dgsm_from_coefficients(expansion, i), dgsm_upper_bound(expansion, i)};
}

SensitivityReport coefficient_report(const Expansion& expansion) {
  std::vector<InputVariances> v;
  for (int i = 0; i < expansion.space->dim(); ++i) v.push_back(input_variances(expansion, i));
  return normalize_report(v, total_variance(expansion), VarianceSource::Coefficients);
}

std::string report_to_json(const SensitivityReport& report, const std::vector<std::string>& names) {
  if (names.size() != report.inputs.size()) throw std::invalid_argument("one name per input is required");
  nlohmann::json doc;
  doc["variance"] = report.variance;
  doc["source"] = std::string(variance_source_name(report.source));
  nlohmann::json inputs = nlohmann::json::array();
  for (std::size_t i = 0; i < names.size(); ++i) {
    const InputIndices& r = report.inputs[i];
    inputs.push_back({{"name", names[i]},
                      {"D1", r.first},
                      {"Dtot", r.total},
                      {"S1", r.s1},
                      {"Stot", r.stot},
                      {"dgsm", r.dgsm},
                      {"dgsm_ub", r.dgsm_ub}});
  }
  doc["inputs"] = inputs;
  return doc.dump(2);
}

}  // namespace poince

#include "poince/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "json.hpp"

namespace poince {

namespace {

// Graded, then descending lexicographic: the enumeration order of hyperbolic().
bool graded_less(const MultiIndex& a, const MultiIndex& b) {
  const int oa = total_order(a);
  const int ob = total_order(b);
  if (oa != ob) return oa < ob;
  return a > b;
}

Expansion from_fit(const SpacePtr& space, const std::vector<MultiIndex>& labels, const AdaptiveFit& fit,
                   Provenance provenance, double q) {
  Expansion e;
  e.space = space;
  e.provenance = provenance;
  e.truncation = {fit.fit.degree, q};
  e.loo_error = fit.fit.loo_error;
  e.diagnostics = fit.diagnostics;
  std::vector<Eigen::Index> active = fit.fit.active;
  std::sort(active.begin(), active.end());
  e.coefficients.resize(static_cast<Eigen::Index>(active.size()));
  for (std::size_t a = 0; a < active.size(); ++a) {
    e.indices.push_back(labels[static_cast<std::size_t>(active[a])]);
    e.coefficients[static_cast<Eigen::Index>(a)] = fit.fit.coefficients[active[a]];
  }
  return e;
}

void check_fit_inputs(const InputSpace& space, const Eigen::Ref<const Eigen::MatrixXd>& x, Eigen::Index y_size,
                      const FitConfig& config) {
  if (x.cols() != space.dim()) throw std::invalid_argument("design dimension does not match the input space");
  if (x.rows() != y_size) throw std::invalid_argument("one response per design point is required");
  if (config.p_max > space.max_order()) throw std::invalid_argument("degree exceeds the input space basis order");
}

}  // namespace

InputSpace::InputSpace(std::vector<std::string> names, const std::vector<Marginal>& marginals, int max_order,
                       int grid_n)
    : names_(std::move(names)), max_order_(max_order) {
  if (names_.size() != marginals.size()) throw std::invalid_argument("one name per marginal is required");
  if (names_.empty()) throw std::invalid_argument("input space needs at least one input");
  for (const Marginal& m : marginals) {
    const bool keep_tails = m.family() == Family::Gaussian && !m.is_truncated();
    const Marginal model = keep_tails ? m : truncate(m);
    auto [standard, map] = poince::standardize(model);
    marginals_.push_back(model);
    bases_.push_back(std::make_shared<const PoincareBasis1D>(build_basis(standard, max_order, grid_n)));
    standardized_.push_back(std::move(standard));
    maps_.push_back(map);
  }
}

Eigen::MatrixXd InputSpace::standardize(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
  if (x.cols() != dim()) throw std::invalid_argument("point dimension does not match the input space");
  Eigen::MatrixXd z(x.rows(), x.cols());
  for (int i = 0; i < dim(); ++i) z.col(i) = (x.col(i).array() - maps_[i].shift) / maps_[i].scale;
  return z;
}

Eigen::MatrixXd InputSpace::standardize_gradient(const Eigen::Ref<const Eigen::MatrixXd>& g) const {
  if (g.cols() != dim()) throw std::invalid_argument("gradient dimension does not match the input space");
  Eigen::MatrixXd out(g.rows(), g.cols());
  for (int i = 0; i < dim(); ++i) out.col(i) = g.col(i) * maps_[i].scale;
  return out;
}

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::PoinceLars:
      return "poince-lars";
    case Provenance::PoinceDerLars:
      return "poince-der-lars";
    case Provenance::PoinceDerAvg:
      return "poince-der-avg";
    case Provenance::PoinceMc:
      return "poince-mc";
    case Provenance::PoinceDerMc:
      return "poince-der-mc";
  }
  return "unknown";
}

double Expansion::coefficient(const MultiIndex& alpha) const {
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (indices[j] == alpha) return coefficients[static_cast<Eigen::Index>(j)];
  }
  return 0.0;
}

bool Expansion::candidate_contains(const MultiIndex& alpha) const {
  if (input >= 0 && alpha[static_cast<std::size_t>(input)] < 1) return false;
  return in_hyperbolic(alpha, truncation.degree, truncation.q);
}

Expansion fit_poince(const SpacePtr& space, const Eigen::Ref<const Eigen::MatrixXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& y, const FitConfig& config) {
  check_fit_inputs(*space, x, y.size(), config);
  const BasisSet bs = BasisSet::make(space->bases(), {config.p_max, config.q});
  const Eigen::MatrixXd psi = bs.design_matrix(space->standardize(x));
  const AdaptiveFit fit = degree_adaptive_fit(psi, y, bs.indices(), config.p_min, config.p_max, config.q, config.lars);
  return from_fit(space, bs.indices(), fit, Provenance::PoinceLars, config.q);
}

Expansion fit_poince_der(const SpacePtr& space, const Eigen::Ref<const Eigen::MatrixXd>& x,
                         const Eigen::Ref<const Eigen::VectorXd>& dy, int i, const FitConfig& config) {
  check_fit_inputs(*space, x, dy.size(), config);
  if (i < 0 || i >= space->dim()) throw std::invalid_argument("input index out of range");
  const BasisSet bs = BasisSet::make(space->bases(), {config.p_max, config.q});
  const Eigen::MatrixXd psi = bs.derivative_matrix(i, space->standardize(x));
  std::vector<MultiIndex> labels;
  for (Eigen::Index j : bs.derivative_columns(i)) labels.push_back(bs.index(j));
  const Eigen::VectorXd y = dy * space->maps()[static_cast<std::size_t>(i)].scale;
  const AdaptiveFit fit = degree_adaptive_fit(psi, y, labels, config.p_min, config.p_max, config.q, config.lars);
  Expansion e = from_fit(space, labels, fit, Provenance::PoinceDerLars, config.q);
  e.input = i;
  for (Eigen::Index j = 0; j < e.size(); ++j) {
    e.coefficients[j] /= std::sqrt(space->basis(i).eigenvalue(e.indices[static_cast<std::size_t>(j)][i]));
  }
  return e;
}

Expansion average_der_expansions(const std::vector<Expansion>& expansions) {
  if (expansions.empty()) throw std::invalid_argument("nothing to average");
  const SpacePtr& space = expansions.front().space;
  for (const Expansion& e : expansions) {
    if (e.space != space) throw std::invalid_argument("derivative expansions use different input spaces");
    if (e.input < 0) throw std::invalid_argument("only derivative expansions can be averaged");
  }
  std::vector<MultiIndex> all;
  for (const Expansion& e : expansions) all.insert(all.end(), e.indices.begin(), e.indices.end());
  std::sort(all.begin(), all.end(), graded_less);
  all.erase(std::unique(all.begin(), all.end()), all.end());

  Expansion avg;
  avg.space = space;
  avg.provenance = Provenance::PoinceDerAvg;
  avg.truncation = {0, expansions.front().truncation.q};
  for (const Expansion& e : expansions) avg.truncation.degree = std::max(avg.truncation.degree, e.truncation.degree);
  std::vector<double> values;
  for (const MultiIndex& alpha : all) {
    if (total_order(alpha) == 0) continue;
    double sum = 0.0;
    int count = 0;
    for (const Expansion& e : expansions) {
      if (!e.candidate_contains(alpha)) continue;
      sum += e.coefficient(alpha);
      ++count;
    }
    if (count == 0) continue;
    avg.indices.push_back(alpha);
    values.push_back(sum / count);
  }
  avg.coefficients = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  return avg;
}

Eigen::VectorXd eval_surrogate(const Expansion& expansion, const Eigen::Ref<const Eigen::MatrixXd>& x) {
  if (expansion.size() == 0) return Eigen::VectorXd::Zero(x.rows());
  const BasisSet bs(expansion.indices, expansion.space->bases(), expansion.truncation);
  return bs.design_matrix(expansion.space->standardize(x)) * expansion.coefficients;
}

Expansion fit_constant_residual(const Expansion& expansion, const Eigen::Ref<const Eigen::MatrixXd>& x,
                                const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.rows() != y.size() || y.size() == 0) throw std::invalid_argument("one response per design point is required");
  Expansion out = expansion;
  const MultiIndex zero(static_cast<std::size_t>(expansion.space->dim()), 0);
  std::vector<MultiIndex> indices;
  std::vector<double> values;
  for (Eigen::Index j = 0; j < expansion.size(); ++j) {
    if (total_order(expansion.indices[static_cast<std::size_t>(j)]) == 0) continue;
    indices.push_back(expansion.indices[static_cast<std::size_t>(j)]);
    values.push_back(expansion.coefficients[j]);
  }
  out.indices = indices;
  out.coefficients = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  const double c0 = (y - eval_surrogate(out, x)).mean();
  out.indices.insert(out.indices.begin(), zero);
  values.insert(values.begin(), c0);
  out.coefficients = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  return out;
}

Expansion fit_projection_mc(const SpacePtr& space, const Eigen::Ref<const Eigen::MatrixXd>& x,
                            const Eigen::Ref<const Eigen::VectorXd>& y, int p) {
  check_fit_inputs(*space, x, y.size(), {p, p, 1.0, {}});
  const BasisSet bs = BasisSet::make(space->bases(), {p, 1.0});
  const Eigen::MatrixXd psi = bs.design_matrix(space->standardize(x));
  Expansion e;
  e.space = space;
  e.provenance = Provenance::PoinceMc;
  e.truncation = {p, 1.0};
  e.indices = bs.indices();
  // E[Phi_alpha] = 0 for alpha != 0, so centering y leaves the estimated
  // integrals unchanged and removes the mean from their variance.
  const double mean = y.mean();
  e.coefficients = psi.transpose() * (y.array() - mean).matrix() / static_cast<double>(y.size());
  for (Eigen::Index j = 0; j < bs.size(); ++j) {
    if (total_order(bs.index(j)) == 0) e.coefficients[j] = mean;
  }
  return e;
}

Expansion fit_projection_der_mc(const SpacePtr& space, const Eigen::Ref<const Eigen::MatrixXd>& x,
                                const Eigen::Ref<const Eigen::VectorXd>& dy, int i, int p) {
  check_fit_inputs(*space, x, dy.size(), {p, p, 1.0, {}});
  if (i < 0 || i >= space->dim()) throw std::invalid_argument("input index out of range");
  const BasisSet bs = BasisSet::make(space->bases(), {p, 1.0});
  const Eigen::MatrixXd psi = bs.derivative_matrix(i, space->standardize(x));
  const Eigen::VectorXd y = dy * space->maps()[static_cast<std::size_t>(i)].scale;
  Expansion e;
  e.space = space;
  e.provenance = Provenance::PoinceDerMc;
  e.input = i;
  e.truncation = {p, 1.0};
  e.coefficients = psi.transpose() * y / static_cast<double>(y.size());
  for (std::size_t c = 0; c < bs.derivative_columns(i).size(); ++c) {
    const MultiIndex& alpha = bs.index(bs.derivative_columns(i)[c]);
    e.indices.push_back(alpha);
    e.coefficients[static_cast<Eigen::Index>(c)] /= std::sqrt(space->basis(i).eigenvalue(alpha[i]));
  }
  return e;
}

std::string expansion_to_json(const Expansion& expansion) {
  using nlohmann::json;
  auto number = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  const InputSpace& space = *expansion.space;
  json doc;
  doc["provenance"] = std::string(provenance_name(expansion.provenance));
  doc["input"] = expansion.input >= 0 ? json(space.names()[static_cast<std::size_t>(expansion.input)]) : json(nullptr);
  doc["truncation"] = {{"degree", expansion.truncation.degree}, {"q", expansion.truncation.q}};
  doc["loo_error"] = number(expansion.loo_error);
  json inputs = json::array();
  for (int i = 0; i < space.dim(); ++i) {
    const Marginal& m = space.marginals()[static_cast<std::size_t>(i)];
    const PoincareBasis1D& b = space.basis(i);
    const char* kind = b.kind() == BasisKind::AnalyticCosine    ? "analytic-cosine"
                       : b.kind() == BasisKind::AnalyticHermite ? "analytic-hermite"
                                                                : "fem";
    inputs.push_back({{"name", space.names()[static_cast<std::size_t>(i)]},
                      {"family", std::string(family_name(m.family()))},
                      {"params", m.params()},
                      {"lower", number(m.lower())},
                      {"upper", number(m.upper())},
                      {"shift", space.maps()[static_cast<std::size_t>(i)].shift},
                      {"scale", space.maps()[static_cast<std::size_t>(i)].scale},
                      {"basis", kind},
                      {"eigenvalues", std::vector<double>(b.eigenvalues().data(), b.eigenvalues().data() + b.eigenvalues().size())}});
  }
  doc["inputs"] = inputs;
  json terms = json::array();
  for (Eigen::Index j = 0; j < expansion.size(); ++j) {
    terms.push_back({{"alpha", expansion.indices[static_cast<std::size_t>(j)]}, {"value", expansion.coefficients[j]}});
  }
  doc["terms"] = terms;
  json diag = json::array();
  for (const DegreeDiagnostic& d : expansion.diagnostics) {
    diag.push_back({{"degree", d.degree}, {"loo_error", number(d.loo_error)}, {"n_active", d.n_active}, {"n_columns", d.n_columns}});
  }
  doc["diagnostics"] = diag;
  return doc.dump(2);
}

}  // namespace poince

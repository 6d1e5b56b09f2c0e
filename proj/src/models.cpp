#include "poince/models.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace poince {

Eigen::VectorXd Model::values(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
  Eigen::VectorXd y(x.rows());
  for (Eigen::Index k = 0; k < x.rows(); ++k) y[k] = value(x.row(k).transpose());
  return y;
}

Eigen::MatrixXd Model::gradients(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
  Eigen::MatrixXd g(x.rows(), x.cols());
  for (Eigen::Index k = 0; k < x.rows(); ++k) g.row(k) = gradient(x.row(k).transpose()).transpose();
  return g;
}

DykeInputs DykeInputs::from_vector(const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != 8) throw std::invalid_argument("the dyke model has 8 inputs");
  return {x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7]};
}

Eigen::VectorXd DykeInputs::to_vector() const {
  Eigen::VectorXd x(8);
  x << q, ks, zv, zm, hd, cb, l, b;
  return x;
}

double dyke_overflow(const DykeInputs& in) {
  const double height = std::pow(in.q / (in.b * in.ks * std::sqrt((in.zm - in.zv) / in.l)), 0.6);
  return height + in.zv - in.hd - in.cb;
}

double dyke_cost(const DykeInputs& in) {
  const double s = dyke_overflow(in);
  const double flood = s > 0.0 ? 1.0 : 0.2 + 0.8 * (1.0 - std::exp(-1000.0 / std::pow(s, 4)));
  const double construction = (in.hd > 8.0 ? in.hd : 8.0) / 20.0;
  return flood + construction;
}

Eigen::VectorXd dyke_gradient(const DykeInputs& in, const Eigen::Ref<const Eigen::VectorXd>& steps) {
  if (steps.size() != 8) throw std::invalid_argument("one step per dyke input is required");
  const Eigen::VectorXd x = in.to_vector();
  Eigen::VectorXd g(8);
  for (int i = 0; i < 8; ++i) {
    Eigen::VectorXd up = x;
    Eigen::VectorXd down = x;
    up[i] += steps[i];
    down[i] -= steps[i];
    g[i] = (dyke_cost(DykeInputs::from_vector(up)) - dyke_cost(DykeInputs::from_vector(down))) / (2.0 * steps[i]);
  }
  return g;
}

std::vector<std::string> dyke_names() { return {"Q", "Ks", "Zv", "Zm", "Hd", "Cb", "L", "B"}; }

std::vector<Marginal> dyke_marginals() {
  return {
      Marginal(Family::Gumbel, {1013.0, 558.0}, 500.0, 3000.0),
      Marginal(Family::Gaussian, {30.0, 8.0}, 15.0),
      Marginal(Family::Triangular, {49.0, 51.0}),
      Marginal(Family::Triangular, {54.0, 56.0}),
      Marginal(Family::Uniform, {7.0, 9.0}),
      Marginal(Family::Triangular, {55.0, 56.0}),
      Marginal(Family::Triangular, {4990.0, 5010.0}),
      Marginal(Family::Triangular, {295.0, 305.0}),
  };
}

DykeModel::DykeModel() : names_(dyke_names()), marginals_(dyke_marginals()), steps_(8) {
  for (int i = 0; i < 8; ++i) {
    const Marginal t = truncate(marginals_[static_cast<std::size_t>(i)]);
    steps_[i] = 1e-6 * (t.upper() - t.lower());
  }
}

double DykeModel::value(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return dyke_cost(DykeInputs::from_vector(x));
}

Eigen::VectorXd DykeModel::gradient(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return dyke_gradient(DykeInputs::from_vector(x), steps_);
}

SyntheticTarget::SyntheticTarget(SpacePtr space, std::vector<MultiIndex> indices, Eigen::VectorXd coefficients)
    : space_(std::move(space)), indices_(std::move(indices)), coefficients_(std::move(coefficients)) {
  if (static_cast<Eigen::Index>(indices_.size()) != coefficients_.size()) {
    throw std::invalid_argument("one coefficient per multi-index is required");
  }
  for (const MultiIndex& alpha : indices_) {
    if (static_cast<int>(alpha.size()) != space_->dim()) throw std::invalid_argument("multi-index dimension mismatch");
    for (int i = 0; i < space_->dim(); ++i) {
      if (alpha[static_cast<std::size_t>(i)] > space_->max_order()) {
        throw std::invalid_argument("multi-index exceeds the basis order");
      }
    }
  }
}

SyntheticTarget::SyntheticTarget(const Expansion& expansion)
    : SyntheticTarget(expansion.space, expansion.indices, expansion.coefficients) {}

double SyntheticTarget::value(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const int d = space_->dim();
  Eigen::MatrixXd phi(space_->max_order() + 1, d);
  for (int i = 0; i < d; ++i) {
    const double z = space_->maps()[static_cast<std::size_t>(i)].forward(x[i]);
    space_->basis(i).eval_all(z, phi.col(i));
  }
  double f = 0.0;
  for (std::size_t j = 0; j < indices_.size(); ++j) {
    double term = coefficients_[static_cast<Eigen::Index>(j)];
    for (int i = 0; i < d; ++i) term *= phi(indices_[j][static_cast<std::size_t>(i)], i);
    f += term;
  }
  return f;
}

Eigen::VectorXd SyntheticTarget::gradient(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const int d = space_->dim();
  Eigen::MatrixXd phi(space_->max_order() + 1, d);
  Eigen::MatrixXd dphi(space_->max_order() + 1, d);
  for (int i = 0; i < d; ++i) {
    const double z = space_->maps()[static_cast<std::size_t>(i)].forward(x[i]);
    space_->basis(i).eval_all(z, phi.col(i));
    space_->basis(i).eval_deriv_all(z, dphi.col(i));
  }
  Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
  for (std::size_t j = 0; j < indices_.size(); ++j) {
    const MultiIndex& alpha = indices_[j];
    for (int i = 0; i < d; ++i) {
      if (alpha[static_cast<std::size_t>(i)] == 0) continue;
      double term = coefficients_[static_cast<Eigen::Index>(j)];
      for (int k = 0; k < d; ++k) {
        term *= k == i ? dphi(alpha[static_cast<std::size_t>(k)], k) : phi(alpha[static_cast<std::size_t>(k)], k);
      }
      g[i] += term;
    }
  }
  for (int i = 0; i < d; ++i) g[i] /= space_->maps()[static_cast<std::size_t>(i)].scale;
  return g;
}

FunctionModel::FunctionModel(std::vector<std::string> names, std::vector<Marginal> marginals, ValueFn value,
                             GradientFn gradient)
    : names_(std::move(names)), marginals_(std::move(marginals)), value_(std::move(value)),
      gradient_(std::move(gradient)) {
  if (names_.size() != marginals_.size()) throw std::invalid_argument("one name per marginal is required");
}

std::unique_ptr<Model> make_smooth_uniform_model() {
  using std::numbers::pi;
  auto value = [](const Eigen::Ref<const Eigen::VectorXd>& x) {
    return std::exp(0.6 * std::cos(pi * x[0]) + 0.4 * std::cos(pi * x[1])) + x[2] * x[2] * (3.0 - 2.0 * x[2]);
  };
  auto gradient = [](const Eigen::Ref<const Eigen::VectorXd>& x) {
    const double e = std::exp(0.6 * std::cos(pi * x[0]) + 0.4 * std::cos(pi * x[1]));
    Eigen::VectorXd g(3);
    g << -0.6 * pi * std::sin(pi * x[0]) * e, -0.4 * pi * std::sin(pi * x[1]) * e, 6.0 * x[2] * (1.0 - x[2]);
    return g;
  };
  std::vector<Marginal> marginals(3, Marginal(Family::Uniform, {0.0, 1.0}));
  return std::make_unique<FunctionModel>(std::vector<std::string>{"x1", "x2", "x3"}, marginals, value, gradient);
}

std::unique_ptr<Model> make_model(const std::string& name) {
  if (name == "dyke") return std::make_unique<DykeModel>();
  if (name == "smooth-uniform") return make_smooth_uniform_model();
  throw std::invalid_argument("unknown model: " + name);
}

}  // namespace poince

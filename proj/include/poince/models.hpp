#ifndef POINCE_MODELS_HPP
#define POINCE_MODELS_HPP

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "poince/expansion.hpp"
#include "poince/marginals.hpp"

namespace poince {

/// A scalar model on a product input space, with its gradient in model units.
class Model {
 public:
  virtual ~Model() = default;

  virtual const std::vector<std::string>& names() const = 0;
  virtual const std::vector<Marginal>& marginals() const = 0;
  virtual double value(const Eigen::Ref<const Eigen::VectorXd>& x) const = 0;
  virtual Eigen::VectorXd gradient(const Eigen::Ref<const Eigen::VectorXd>& x) const = 0;

  int dim() const { return static_cast<int>(names().size()); }
  /// value() for each row of x.
  Eigen::VectorXd values(const Eigen::Ref<const Eigen::MatrixXd>& x) const;
  /// gradient() for each row of x, one row per point.
  Eigen::MatrixXd gradients(const Eigen::Ref<const Eigen::MatrixXd>& x) const;
};

struct DykeInputs {
  double q;   // river flow, m^3/s
  double ks;  // Strickler coefficient
  double zv;  // downstream river bed level, m
  double zm;  // upstream river bed level, m
  double hd;  // dyke height, m
  double cb;  // bank level, m
  double l;   // river stretch length, m
  double b;   // river width, m

  static DykeInputs from_vector(const Eigen::Ref<const Eigen::VectorXd>& x);
  Eigen::VectorXd to_vector() const;
};

/// Maximal annual overflow S in metres.
double dyke_overflow(const DykeInputs& in);
/// Cost Y in million euros: flooding/maintenance term plus construction term.
double dyke_cost(const DykeInputs& in);
/// Central finite differences of dyke_cost with one step per input.
Eigen::VectorXd dyke_gradient(const DykeInputs& in, const Eigen::Ref<const Eigen::VectorXd>& steps);

std::vector<std::string> dyke_names();
/// The eight input laws of the dyke study.
std::vector<Marginal> dyke_marginals();

/// The dyke cost model; gradients by central differences with step
/// 1e-6 times the length of each (truncated) support.
class DykeModel final : public Model {
 public:
  DykeModel();
  const std::vector<std::string>& names() const override { return names_; }
  const std::vector<Marginal>& marginals() const override { return marginals_; }
  double value(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  Eigen::VectorXd gradient(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  const Eigen::VectorXd& steps() const { return steps_; }

 private:
  std::vector<std::string> names_;
  std::vector<Marginal> marginals_;
  Eigen::VectorXd steps_;
};

/// f = sum c_alpha Phi_alpha on the space, exact gradient.
class SyntheticTarget final : public Model {
 public:
  SyntheticTarget(SpacePtr space, std::vector<MultiIndex> indices, Eigen::VectorXd coefficients);
  explicit SyntheticTarget(const Expansion& expansion);

  const std::vector<std::string>& names() const override { return space_->names(); }
  const std::vector<Marginal>& marginals() const override { return space_->marginals(); }
  double value(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  Eigen::VectorXd gradient(const Eigen::Ref<const Eigen::VectorXd>& x) const override;

  const SpacePtr& space() const { return space_; }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  const Eigen::VectorXd& coefficients() const { return coefficients_; }

 private:
  SpacePtr space_;
  std::vector<MultiIndex> indices_;
  Eigen::VectorXd coefficients_;
};

/// Model from plain callables.
class FunctionModel final : public Model {
 public:
  using ValueFn = std::function<double(const Eigen::Ref<const Eigen::VectorXd>&)>;
  using GradientFn = std::function<Eigen::VectorXd(const Eigen::Ref<const Eigen::VectorXd>&)>;

  FunctionModel(std::vector<std::string> names, std::vector<Marginal> marginals, ValueFn value, GradientFn gradient);

  const std::vector<std::string>& names() const override { return names_; }
  const std::vector<Marginal>& marginals() const override { return marginals_; }
  double value(const Eigen::Ref<const Eigen::VectorXd>& x) const override { return value_(x); }
  Eigen::VectorXd gradient(const Eigen::Ref<const Eigen::VectorXd>& x) const override { return gradient_(x); }

 private:
  std::vector<std::string> names_;
  std::vector<Marginal> marginals_;
  ValueFn value_;
  GradientFn gradient_;
};

/// exp(0.6 cos(pi x1) + 0.4 cos(pi x2)) + x3^2 (3 - 2 x3) on U(0,1)^3.
std::unique_ptr<Model> make_smooth_uniform_model();

/// Built-in models by name: "dyke", "smooth-uniform".
std::unique_ptr<Model> make_model(const std::string& name);

}  // namespace poince

#endif  // POINCE_MODELS_HPP

#include "poince/poincare1d.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

namespace poince {

namespace {

constexpr double kGauss3Nodes[3] = {0.5 - 0.3872983346207417, 0.5, 0.5 + 0.3872983346207417};
constexpr double kGauss3Weights[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

}  // namespace

PoincareBasis1D PoincareBasis1D::cosine(double a, double b, int max_order) {
  if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("cosine basis needs a bounded interval");
  }
  if (max_order < 0) throw std::invalid_argument("negative basis order");
  PoincareBasis1D basis;
  basis.kind_ = BasisKind::AnalyticCosine;
  basis.lower_ = a;
  basis.upper_ = b;
  basis.eigenvalues_.resize(max_order + 1);
  for (int k = 0; k <= max_order; ++k) {
    const double w = k * std::numbers::pi / (b - a);
    basis.eigenvalues_[k] = w * w;
  }
  return basis;
}

PoincareBasis1D PoincareBasis1D::hermite(int max_order) {
  if (max_order < 0) throw std::invalid_argument("negative basis order");
  PoincareBasis1D basis;
  basis.kind_ = BasisKind::AnalyticHermite;
  basis.lower_ = -std::numeric_limits<double>::infinity();
  basis.upper_ = std::numeric_limits<double>::infinity();
  basis.eigenvalues_ = Eigen::VectorXd::LinSpaced(max_order + 1, 0.0, max_order);
  return basis;
}

PoincareBasis1D PoincareBasis1D::fem(const Marginal& marginal, int max_order, int grid_n) {
  if (!marginal.bounded()) throw std::invalid_argument("FEM basis needs a bounded support");
  if (max_order < 0) throw std::invalid_argument("negative basis order");
  if (grid_n < max_order + 3) throw std::invalid_argument("FEM grid too coarse for the order");

  PoincareBasis1D basis;
  basis.kind_ = BasisKind::Fem;
  basis.marginal_ = std::make_shared<const Marginal>(marginal);
  basis.lower_ = marginal.lower();
  basis.upper_ = marginal.upper();
  const double a = basis.lower_;
  const double h = (basis.upper_ - a) / (grid_n - 1);
  basis.grid_ = Eigen::VectorXd::LinSpaced(grid_n, a, basis.upper_);

  SymmetricTridiagonal mass{Eigen::VectorXd::Zero(grid_n), Eigen::VectorXd::Zero(grid_n - 1)};
  SymmetricTridiagonal stiffness = mass;
  for (int e = 0; e + 1 < grid_n; ++e) {
    double m00 = 0.0, m01 = 0.0, m11 = 0.0, s = 0.0;
    for (int q = 0; q < 3; ++q) {
      const double xi = kGauss3Nodes[q];
      const double rho = marginal.pdf(a + (e + xi) * h);
      if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw AssemblyError("density is not strictly positive inside the support");
      }
      const double w = kGauss3Weights[q] * rho;
      m00 += w * (1.0 - xi) * (1.0 - xi) * h;
      m01 += w * (1.0 - xi) * xi * h;
      m11 += w * xi * xi * h;
      s += w / h;
    }
    mass.diagonal[e] += m00;
    mass.diagonal[e + 1] += m11;
    mass.off_diagonal[e] += m01;
    stiffness.diagonal[e] += s;
    stiffness.diagonal[e + 1] += s;
    stiffness.off_diagonal[e] -= s;
  }
  SymmetricTridiagonal shifted{mass.diagonal + stiffness.diagonal,
                               mass.off_diagonal + stiffness.off_diagonal};

  const GeneralizedEigenpairs pairs = smallest_generalized_eigenpairs(shifted, mass, max_order + 1);
  basis.eigenvalues_ = pairs.values.array() - 1.0;
  basis.eigenvalues_[0] = 0.0;
  for (int k = 1; k <= max_order; ++k) {
    if (!(basis.eigenvalues_[k] > basis.eigenvalues_[k - 1])) {
      throw SpectralError("FEM eigenvalues are not strictly increasing");
    }
  }
  basis.nodal_ = pairs.vectors;
  basis.fd_step_ = (basis.upper_ - a) / (10.0 * grid_n);

  basis.splines_.resize(max_order + 1);
  basis.value_scale_ = Eigen::VectorXd::Ones(max_order + 1);
  basis.deriv_scale_ = Eigen::VectorXd::Zero(max_order + 1);
  const int panels = grid_n - 1;
  for (int k = 1; k <= max_order; ++k) {
    basis.splines_[k] = ClampedCubicSpline(a, basis.upper_, pairs.vectors.col(k), 0.0, 0.0);
    const ClampedCubicSpline& spline = basis.splines_[k];
    const double sign = spline(a) >= 0.0 ? 1.0 : -1.0;
    const double norm2 = integrate_against_density(
        basis, [&](double x) { return spline(x) * spline(x); }, panels);
    const double dnorm2 = integrate_against_density(
        basis,
        [&](double x) {
          const double d = basis.fd_derivative(spline, x);
          return d * d;
        },
        panels);
    basis.value_scale_[k] = sign / std::sqrt(norm2);
    basis.deriv_scale_[k] = sign * std::sqrt(basis.eigenvalues_[k] / dnorm2);
  }
  return basis;
}

double PoincareBasis1D::eigenvalue(int order) const {
  if (order < 0 || order > max_order()) throw DomainError("basis order out of range");
  return eigenvalues_[order];
}

double PoincareBasis1D::poincare_constant() const {
  if (max_order() < 1) throw SpectralError("lambda_1 unavailable: basis has order 0 only");
  return 1.0 / eigenvalues_[1];
}

double PoincareBasis1D::density(double x) const {
  switch (kind_) {
    case BasisKind::AnalyticCosine:
      return (x < lower_ || x > upper_) ? 0.0 : 1.0 / (upper_ - lower_);
    case BasisKind::AnalyticHermite:
      return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    case BasisKind::Fem:
      return marginal_->contains(x) ? marginal_->pdf(x) : 0.0;
  }
  return 0.0;
}

void PoincareBasis1D::check(int order, double x) const {
  if (order < 0 || order > max_order()) throw DomainError("basis order out of range");
  const double slack = 1e-12 * (std::isfinite(upper_ - lower_) ? upper_ - lower_ : 1.0);
  if (!(x >= lower_ - slack && x <= upper_ + slack)) throw DomainError("point outside basis support");
}

double PoincareBasis1D::fd_derivative(const ClampedCubicSpline& spline, double x) const {
  if (x <= lower_ || x >= upper_) return 0.0;
  const double lo = std::max(lower_, x - fd_step_);
  const double hi = std::min(upper_, x + fd_step_);
  return (spline(hi) - spline(lo)) / (hi - lo);
}

double PoincareBasis1D::eval(int order, double x) const {
  check(order, x);
  if (order == 0) return 1.0;
  switch (kind_) {
    case BasisKind::AnalyticCosine:
      return std::numbers::sqrt2 *
             std::cos(order * std::numbers::pi * (x - lower_) / (upper_ - lower_));
    case BasisKind::AnalyticHermite: {
      double prev = 1.0;
      double cur = x;
      for (int n = 1; n < order; ++n) {
        const double next = (x * cur - std::sqrt(static_cast<double>(n)) * prev) / std::sqrt(n + 1.0);
        prev = cur;
        cur = next;
      }
      return cur;
    }
    case BasisKind::Fem:
      return value_scale_[order] * splines_[order](x);
  }
  return 0.0;
}

double PoincareBasis1D::eval_deriv(int order, double x) const {
  check(order, x);
  if (order == 0) return 0.0;
  switch (kind_) {
    case BasisKind::AnalyticCosine: {
      const double w = order * std::numbers::pi / (upper_ - lower_);
      return -std::numbers::sqrt2 * w * std::sin(w * (x - lower_));
    }
    case BasisKind::AnalyticHermite:
      return std::sqrt(static_cast<double>(order)) * eval(order - 1, x);
    case BasisKind::Fem:
      return deriv_scale_[order] * fd_derivative(splines_[order], x);
  }
  return 0.0;
}

void PoincareBasis1D::eval_all(double x, Eigen::Ref<Eigen::VectorXd> out) const {
  check(0, x);
  const int p = max_order();
  out[0] = 1.0;
  switch (kind_) {
    case BasisKind::AnalyticCosine: {
      const double theta = std::numbers::pi * (x - lower_) / (upper_ - lower_);
      for (int k = 1; k <= p; ++k) out[k] = std::numbers::sqrt2 * std::cos(k * theta);
      break;
    }
    case BasisKind::AnalyticHermite:
      if (p >= 1) out[1] = x;
      for (int n = 1; n < p; ++n) {
        out[n + 1] = (x * out[n] - std::sqrt(static_cast<double>(n)) * out[n - 1]) / std::sqrt(n + 1.0);
      }
      break;
    case BasisKind::Fem:
      for (int k = 1; k <= p; ++k) out[k] = value_scale_[k] * splines_[k](x);
      break;
  }
}

void PoincareBasis1D::eval_deriv_all(double x, Eigen::Ref<Eigen::VectorXd> out) const {
  check(0, x);
  const int p = max_order();
  out[0] = 0.0;
  switch (kind_) {
    case BasisKind::AnalyticCosine: {
      const double scale = std::numbers::pi / (upper_ - lower_);
      const double theta = scale * (x - lower_);
      for (int k = 1; k <= p; ++k) out[k] = -std::numbers::sqrt2 * k * scale * std::sin(k * theta);
      break;
    }
    case BasisKind::AnalyticHermite: {
      Eigen::VectorXd values(p + 1);
      eval_all(x, values);
      for (int k = 1; k <= p; ++k) out[k] = std::sqrt(static_cast<double>(k)) * values[k - 1];
      break;
    }
    case BasisKind::Fem:
      for (int k = 1; k <= p; ++k) out[k] = deriv_scale_[k] * fd_derivative(splines_[k], x);
      break;
  }
}

PoincareBasis1D build_basis(const Marginal& standardized, int max_order, int grid_n) {
  if (standardized.family() == Family::Uniform) {
    return PoincareBasis1D::cosine(standardized.lower(), standardized.upper(), max_order);
  }
  if (standardized.family() == Family::Gaussian && !standardized.is_truncated() &&
      standardized.params()[0] == 0.0 && standardized.params()[1] == 1.0) {
    return PoincareBasis1D::hermite(max_order);
  }
  return PoincareBasis1D::fem(truncate(standardized), max_order, grid_n);
}

void write_eigenvalues_csv(std::ostream& out, const PoincareBasis1D& basis) {
  out << "order,eigenvalue\n";
  out.precision(17);
  for (int k = 0; k <= basis.max_order(); ++k) out << k << ',' << basis.eigenvalue(k) << '\n';
}

void write_basis_samples_csv(std::ostream& out, const PoincareBasis1D& basis, int samples) {
  const int p = basis.max_order();
  const bool infinite = !std::isfinite(basis.lower());
  const double a = infinite ? -5.0 : basis.lower();
  const double b = infinite ? 5.0 : basis.upper();
  out << 'x';
  for (int k = 0; k <= p; ++k) out << ",phi_" << k;
  for (int k = 0; k <= p; ++k) out << ",dphi_" << k;
  out << '\n';
  out.precision(17);
  Eigen::VectorXd values(p + 1);
  Eigen::VectorXd derivs(p + 1);
  for (int s = 0; s < samples; ++s) {
    const double x = samples == 1 ? a : a + (b - a) * s / (samples - 1.0);
    basis.eval_all(x, values);
    basis.eval_deriv_all(x, derivs);
    out << x;
    for (int k = 0; k <= p; ++k) out << ',' << values[k];
    for (int k = 0; k <= p; ++k) out << ',' << derivs[k];
    out << '\n';
  }
}

}  // namespace poince

#ifndef POINCE_POINCARE1D_HPP
#define POINCE_POINCARE1D_HPP

#include <Eigen/Dense>

#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "poince/marginals.hpp"
#include "poince/spline.hpp"
#include "poince/tridiagonal.hpp"

namespace poince {

/// Raised when the FEM operators cannot be assembled (density not positive).
class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class BasisKind { AnalyticCosine, AnalyticHermite, Fem };

/// Default number of FEM grid nodes.
inline constexpr int kDefaultGridSize = 1000;

/// Orthonormal eigenbasis of f'' - V' f' = -lambda f with Neumann conditions,
/// orders 0..max_order. phi_0 = 1 and lambda_0 = 0. Immutable once built;
/// evaluation is reentrant.
///
/// Sign convention: phi_alpha(lower) > 0 (Hermite: positive leading term).
class PoincareBasis1D {
 public:
  /// sqrt(2) cos(alpha pi (x - a) / (b - a)), lambda = (alpha pi / (b - a))^2.
  static PoincareBasis1D cosine(double a, double b, int max_order);
  /// Normalized probabilists' Hermite polynomials, lambda = alpha.
  static PoincareBasis1D hermite(int max_order);
  /// Linear finite elements on grid_n equally spaced nodes; the shifted
  /// pencil K a = (lambda + 1) M a with K = M + S is solved for the
  /// max_order + 1 smallest eigenvalues. Eigenvectors are interpolated by
  /// clamped cubic splines with zero end slopes; derivatives are centered
  /// differences of the spline. Both phi and phi' / sqrt(lambda) are
  /// rescaled to unit L2(mu) norm.
  static PoincareBasis1D fem(const Marginal& marginal, int max_order,
                             int grid_n = kDefaultGridSize);

  BasisKind kind() const { return kind_; }
  int max_order() const { return static_cast<int>(eigenvalues_.size()) - 1; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  double eigenvalue(int order) const;
  /// C_P = 1 / lambda_1.
  double poincare_constant() const;
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  /// Density of the underlying measure (standardized coordinates).
  double density(double x) const;

  double eval(int order, double x) const;
  double eval_deriv(int order, double x) const;
  /// Values of all orders 0..max_order at x.
  void eval_all(double x, Eigen::Ref<Eigen::VectorXd> out) const;
  void eval_deriv_all(double x, Eigen::Ref<Eigen::VectorXd> out) const;

  /// FEM only: node coordinates and raw M-normalized eigenvectors.
  const Eigen::VectorXd& grid() const { return grid_; }
  const Eigen::MatrixXd& nodal_vectors() const { return nodal_; }

 private:
  PoincareBasis1D() = default;
  void check(int order, double x) const;
  double fd_derivative(const ClampedCubicSpline& spline, double x) const;

  BasisKind kind_ = BasisKind::AnalyticCosine;
  Eigen::VectorXd eigenvalues_;
  double lower_ = 0.0;
  double upper_ = 1.0;
  std::shared_ptr<const Marginal> marginal_;

  // FEM state.
  Eigen::VectorXd grid_;
  Eigen::MatrixXd nodal_;
  std::vector<ClampedCubicSpline> splines_;
  Eigen::VectorXd value_scale_;
  Eigen::VectorXd deriv_scale_;
  double fd_step_ = 0.0;
};

/// Picks the analytic cosine basis for a uniform marginal, the Hermite basis
/// for an unbounded standard Gaussian, and the FEM basis otherwise. The
/// marginal is expected in standardized coordinates.
PoincareBasis1D build_basis(const Marginal& standardized, int max_order,
                            int grid_n = kDefaultGridSize);

/// E_mu[integrand(X)] by 5-point Gauss-Legendre on `panels` equal panels of
/// a bounded basis support.
template <typename F>
double integrate_against_density(const PoincareBasis1D& basis, F&& integrand, int panels) {
  static constexpr double nodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                      0.5384693101056831, 0.9061798459386640};
  static constexpr double weights[5] = {0.2369268850561891, 0.4786286704993665,
                                        0.5688888888888889, 0.4786286704993665,
                                        0.2369268850561891};
  const double a = basis.lower();
  const double h = (basis.upper() - a) / panels;
  double total = 0.0;
  for (int e = 0; e < panels; ++e) {
    const double mid = a + (e + 0.5) * h;
    for (int q = 0; q < 5; ++q) {
      const double x = mid + 0.5 * h * nodes[q];
      total += weights[q] * 0.5 * h * basis.density(x) * integrand(x);
    }
  }
  return total;
}

/// Writes eigenvalues as "order,eigenvalue" rows.
void write_eigenvalues_csv(std::ostream& out, const PoincareBasis1D& basis);
/// Writes "x,phi_0..phi_p,dphi_0..dphi_p" rows on `samples` equally spaced
/// points ([-5, 5] for the Hermite basis).
void write_basis_samples_csv(std::ostream& out, const PoincareBasis1D& basis, int samples);

}  // namespace poince

#endif  // POINCE_POINCARE1D_HPP

#ifndef POINCE_SPLINE_HPP
#define POINCE_SPLINE_HPP

#include <Eigen/Dense>

namespace poince {

/// Cubic spline through equally spaced samples on [a, b] with prescribed end
/// slopes (clamped boundary conditions).
class ClampedCubicSpline {
 public:
  ClampedCubicSpline() = default;
  ClampedCubicSpline(double a, double b, Eigen::VectorXd values, double slope_a = 0.0,
                     double slope_b = 0.0);

  double operator()(double x) const;
  double derivative(double x) const;

  double lower() const { return a_; }
  double upper() const { return b_; }
  const Eigen::VectorXd& knots_values() const { return values_; }

 private:
  Eigen::Index interval(double x) const;

  double a_ = 0.0;
  double b_ = 1.0;
  double h_ = 1.0;
  Eigen::VectorXd values_;
  Eigen::VectorXd second_;  // second derivatives at the knots
};

}  // namespace poince

#endif  // POINCE_SPLINE_HPP

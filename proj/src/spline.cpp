#include "poince/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "poince/tridiagonal.hpp"

namespace poince {

ClampedCubicSpline::ClampedCubicSpline(double a, double b, Eigen::VectorXd values, double slope_a,
                                       double slope_b)
    : a_(a), b_(b), values_(std::move(values)) {
  const Eigen::Index n = values_.size();
  if (n < 2 || !(b > a)) throw std::invalid_argument("spline needs >= 2 samples on a < b");
  h_ = (b_ - a_) / static_cast<double>(n - 1);
  const Eigen::VectorXd& y = values_;

  Eigen::VectorXd diag = Eigen::VectorXd::Constant(n, 4.0);
  Eigen::VectorXd off = Eigen::VectorXd::Ones(n - 1);
  Eigen::VectorXd rhs(n);
  diag[0] = 2.0;
  diag[n - 1] = 2.0;
  rhs[0] = 6.0 / h_ * ((y[1] - y[0]) / h_ - slope_a);
  rhs[n - 1] = 6.0 / h_ * (slope_b - (y[n - 1] - y[n - 2]) / h_);
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    rhs[i] = 6.0 / (h_ * h_) * (y[i + 1] - 2.0 * y[i] + y[i - 1]);
  }
  second_ = solve_tridiagonal(off, diag, off, rhs);
}

Eigen::Index ClampedCubicSpline::interval(double x) const {
  const auto last = values_.size() - 2;
  const auto j = static_cast<Eigen::Index>(std::floor((x - a_) / h_));
  return std::clamp<Eigen::Index>(j, 0, last);
}

double ClampedCubicSpline::operator()(double x) const {
  const Eigen::Index j = interval(x);
  const double t = x - (a_ + static_cast<double>(j) * h_);
  const double mj = second_[j];
  const double mk = second_[j + 1];
  const double slope = (values_[j + 1] - values_[j]) / h_ - h_ * (2.0 * mj + mk) / 6.0;
  return values_[j] + t * (slope + t * (0.5 * mj + t * (mk - mj) / (6.0 * h_)));
}

double ClampedCubicSpline::derivative(double x) const {
  const Eigen::Index j = interval(x);
  const double t = x - (a_ + static_cast<double>(j) * h_);
  const double mj = second_[j];
  const double mk = second_[j + 1];
  const double slope = (values_[j + 1] - values_[j]) / h_ - h_ * (2.0 * mj + mk) / 6.0;
  return slope + t * (mj + t * (mk - mj) / (2.0 * h_));
}

}  // namespace poince

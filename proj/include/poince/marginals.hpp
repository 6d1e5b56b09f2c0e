#ifndef POINCE_MARGINALS_HPP
#define POINCE_MARGINALS_HPP

#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace poince {

/// Raised for inputs outside a function's domain (support, index range, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a marginal family has no Poincaré basis (Laplace).
class UnsupportedFamilyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Family {
  Uniform,
  Gaussian,
  Gumbel,
  GumbelMin,
  Triangular,
  Beta,
  Gamma,
  Exponential,
  Weibull,
  Lognormal,
  Logistic,
  Laplace,
};

std::string_view family_name(Family family);
Family parse_family(std::string_view name);

/// Affine change of variables x_std = (x - shift) / scale.
struct StandardizationMap {
  double shift = 0.0;
  double scale = 1.0;

  double forward(double x) const { return (x - shift) / scale; }
  double inverse(double z) const { return shift + scale * z; }
  bool is_identity() const { return shift == 0.0 && scale == 1.0; }
};

/// A one-dimensional probability law, optionally restricted to [lower, upper].
///
/// Parameter conventions (model units):
///   uniform      {a, b}
///   gaussian     {mean, std}
///   gumbel       {location, scale}        (maximum convention)
///   gumbel-min   {location, scale}
///   triangular   {a, b} or {a, b, mode}   (mode defaults to the midpoint)
///   beta         {alpha, beta, a, b}      (a, b default to 0, 1)
///   gamma        {shape, scale}
///   exponential  {rate}
///   weibull      {shape, scale}
///   lognormal    {mu, sigma}              (of the underlying normal)
///   logistic     {location, scale}
///   laplace      {location, scale}        (rejected by truncate())
///
/// When the bounds are tighter than the natural support, the density is
/// renormalized by the retained probability mass. Values are immutable.
class Marginal {
 public:
  Marginal(Family family, std::vector<double> params,
           double lower = -std::numeric_limits<double>::infinity(),
           double upper = std::numeric_limits<double>::infinity());

  Family family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  bool bounded() const;
  bool contains(double x) const { return x >= lower_ && x <= upper_; }
  /// Probability mass of the untruncated law retained on [lower, upper].
  double mass() const { return mass_; }
  /// True when the bounds cut off part of the natural support.
  bool is_truncated() const;

  double pdf(double x) const;
  double cdf(double x) const;
  double quantile(double p) const;
  /// V = -log(pdf); +inf where the density vanishes.
  double potential(double x) const;
  /// Piecewise derivative V' (one-sided from the right at kinks).
  double potential_prime(double x) const;

  /// Natural support of the untruncated law.
  std::pair<double, double> natural_support() const;

  // Untruncated law.
  double raw_pdf(double x) const;
  double raw_cdf(double x) const;
  double raw_quantile(double p) const;

 private:
  double raw_log_pdf_prime(double x) const;

  Family family_;
  std::vector<double> params_;
  double lower_;
  double upper_;
  double cdf_lower_ = 0.0;
  double mass_ = 1.0;
};

/// Tail probability used to close unbounded supports.
inline constexpr double kTruncationTail = 1e-6;

/// Replaces every unbounded side of the support by the corresponding
/// 1e-6 / (1 - 1e-6) quantile of the untruncated law. Finite bounds are kept.
/// Throws UnsupportedFamilyError for Laplace.
Marginal truncate(const Marginal& marginal);

/// Shifts and rescales the marginal to standard parameters. Bounds-based for
/// uniform/beta/triangular (onto [-0.5, 0.5]), location-scale for
/// gaussian/gumbel/gumbel-min/laplace/logistic, scale-only for
/// exponential/gamma/weibull/lognormal.
std::pair<Marginal, StandardizationMap> standardize(const Marginal& marginal);

}  // namespace poince

#endif  // POINCE_MARGINALS_HPP

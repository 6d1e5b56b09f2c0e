#include "poince/marginals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace poince {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Acklam's rational approximation refined by Halley steps on erfc.
double normal_quantile(double p) {
  if (p <= 0.0) return -kInf;
  if (p >= 1.0) return kInf;
  static constexpr std::array<double, 6> a = {-3.969683028665376e+01, 2.209460984245205e+02,
                                              -2.759285104469687e+02, 1.383577518672690e+02,
                                              -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b = {-5.447609879822406e+01, 1.615858368580409e+02,
                                              -1.556989798598866e+02, 6.680131188771972e+01,
                                              -1.328068155288572e+01};
  static constexpr std::array<double, 6> c = {-7.784894002430293e-03, -3.223964580411365e-01,
                                              -2.400758277161838e+00, -2.549732539343734e+00,
                                              4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01,
                                              2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  for (int it = 0; it < 2; ++it) {
    // Work on the smaller tail to avoid cancellation.
    const double e = p < 0.5 ? normal_cdf(x) - p : (1.0 - p) - normal_cdf(-x);
    const double u = e / normal_pdf(x);
    x = x - u / (1.0 + 0.5 * x * u);
  }
  return x;
}

// Regularized lower incomplete gamma P(a, x).
double incomplete_gamma(double a, double x) {
  if (x <= 0.0) return 0.0;
  const double log_prefactor = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1.0) {
    double sum = 1.0 / a;
    double term = sum;
    for (int n = 1; n < 1000; ++n) {
      term *= x / (a + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return std::min(1.0, sum * std::exp(log_prefactor));
  }
  // Continued fraction for Q(a, x), modified Lentz.
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::max(0.0, 1.0 - std::exp(log_prefactor) * h);
}

double beta_continued_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m < 1000; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h;
}

// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_front) * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - std::exp(log_front) * beta_continued_fraction(b, a, 1.0 - x) / b;
}

template <typename Cdf>
double bisect_quantile(Cdf&& cdf, double p, double lo, double hi) {
  // Runs to full double resolution, which is finer than the 1e-12 target.
  for (int it = 0; it < 2200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

std::vector<double> checked_params(Family family, std::vector<double> params) {
  auto count = [&](std::size_t n) {
    require(params.size() == n, "wrong number of marginal parameters");
  };
  switch (family) {
    case Family::Uniform:
      count(2);
      require(params[0] < params[1], "uniform requires a < b");
      break;
    case Family::Triangular:
      require(params.size() == 2 || params.size() == 3, "triangular takes {a, b} or {a, b, mode}");
      require(params[0] < params[1], "triangular requires a < b");
      if (params.size() == 2) params.push_back(0.5 * (params[0] + params[1]));
      require(params[2] >= params[0] && params[2] <= params[1], "triangular mode outside [a, b]");
      break;
    case Family::Beta:
      require(params.size() == 2 || params.size() == 4, "beta takes {alpha, beta} or {alpha, beta, a, b}");
      if (params.size() == 2) {
        params.push_back(0.0);
        params.push_back(1.0);
      }
      require(params[0] > 0 && params[1] > 0, "beta shapes must be positive");
      require(params[2] < params[3], "beta requires a < b");
      break;
    case Family::Exponential:
      count(1);
      require(params[0] > 0, "exponential rate must be positive");
      break;
    case Family::Gaussian:
    case Family::Gumbel:
    case Family::GumbelMin:
    case Family::Logistic:
    case Family::Laplace:
      count(2);
      require(params[1] > 0, "scale parameter must be positive");
      break;
    case Family::Gamma:
    case Family::Weibull:
      count(2);
      require(params[0] > 0 && params[1] > 0, "shape and scale must be positive");
      break;
    case Family::Lognormal:
      count(2);
      require(params[1] > 0, "lognormal sigma must be positive");
      break;
  }
  return params;
}

}  // namespace

std::string_view family_name(Family family) {
  switch (family) {
    case Family::Uniform: return "uniform";
    case Family::Gaussian: return "gaussian";
    case Family::Gumbel: return "gumbel";
    case Family::GumbelMin: return "gumbel-min";
    case Family::Triangular: return "triangular";
    case Family::Beta: return "beta";
    case Family::Gamma: return "gamma";
    case Family::Exponential: return "exponential";
    case Family::Weibull: return "weibull";
    case Family::Lognormal: return "lognormal";
    case Family::Logistic: return "logistic";
    case Family::Laplace: return "laplace";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  static constexpr std::array<Family, 12> all = {
      Family::Uniform, Family::Gaussian,    Family::Gumbel,  Family::GumbelMin,
      Family::Triangular, Family::Beta,     Family::Gamma,   Family::Exponential,
      Family::Weibull, Family::Lognormal,   Family::Logistic, Family::Laplace};
  for (Family f : all) {
    if (family_name(f) == name) return f;
  }
  if (name == "normal") return Family::Gaussian;
  throw std::invalid_argument("unknown marginal family '" + std::string(name) + "'");
}

Marginal::Marginal(Family family, std::vector<double> params, double lower, double upper)
    : family_(family), params_(checked_params(family, std::move(params))) {
  const auto [lo, hi] = natural_support();
  lower_ = std::max(lower, lo);
  upper_ = std::min(upper, hi);
  if (!(lower_ < upper_)) throw std::invalid_argument("empty support for marginal");
  cdf_lower_ = std::isfinite(lower_) ? raw_cdf(lower_) : 0.0;
  const double cdf_upper = std::isfinite(upper_) ? raw_cdf(upper_) : 1.0;
  mass_ = cdf_upper - cdf_lower_;
  if (!(mass_ > 0.0)) throw std::invalid_argument("bounds retain no probability mass");
}

std::pair<double, double> Marginal::natural_support() const {
  const auto& p = params_;
  switch (family_) {
    case Family::Uniform:
    case Family::Triangular:
      return {p[0], p[1]};
    case Family::Beta:
      return {p[2], p[3]};
    case Family::Gamma:
    case Family::Exponential:
    case Family::Weibull:
    case Family::Lognormal:
      return {0.0, kInf};
    default:
      return {-kInf, kInf};
  }
}

bool Marginal::bounded() const { return std::isfinite(lower_) && std::isfinite(upper_); }

bool Marginal::is_truncated() const {
  const auto [lo, hi] = natural_support();
  return lower_ > lo || upper_ < hi;
}

double Marginal::raw_pdf(double x) const {
  const auto& p = params_;
  switch (family_) {
    case Family::Uniform:
      return (x < p[0] || x > p[1]) ? 0.0 : 1.0 / (p[1] - p[0]);
    case Family::Gaussian:
      return normal_pdf((x - p[0]) / p[1]) / p[1];
    case Family::Gumbel: {
      const double z = (x - p[0]) / p[1];
      return std::exp(-(z + std::exp(-z))) / p[1];
    }
    case Family::GumbelMin: {
      const double z = (x - p[0]) / p[1];
      return std::exp(z - std::exp(z)) / p[1];
    }
    case Family::Triangular: {
      const double a = p[0], b = p[1], c = p[2];
      if (x < a || x > b) return 0.0;
      if (x < c) return 2.0 * (x - a) / ((b - a) * (c - a));
      if (x == c) return 2.0 / (b - a);
      return 2.0 * (b - x) / ((b - a) * (b - c));
    }
    case Family::Beta: {
      const double w = p[3] - p[2];
      const double t = (x - p[2]) / w;
      if (t < 0.0 || t > 1.0) return 0.0;
      const double log_norm = std::lgamma(p[0] + p[1]) - std::lgamma(p[0]) - std::lgamma(p[1]);
      return std::exp(log_norm + (p[0] - 1.0) * std::log(t) + (p[1] - 1.0) * std::log1p(-t)) / w;
    }
    case Family::Gamma: {
      if (x < 0.0) return 0.0;
      if (x == 0.0) return p[0] == 1.0 ? 1.0 / p[1] : (p[0] > 1.0 ? 0.0 : kInf);
      const double z = x / p[1];
      return std::exp((p[0] - 1.0) * std::log(z) - z - std::lgamma(p[0])) / p[1];
    }
    case Family::Exponential:
      return x < 0.0 ? 0.0 : p[0] * std::exp(-p[0] * x);
    case Family::Weibull: {
      if (x < 0.0) return 0.0;
      const double z = x / p[1];
      if (z == 0.0) return p[0] == 1.0 ? 1.0 / p[1] : (p[0] > 1.0 ? 0.0 : kInf);
      return p[0] / p[1] * std::pow(z, p[0] - 1.0) * std::exp(-std::pow(z, p[0]));
    }
    case Family::Lognormal: {
      if (x <= 0.0) return 0.0;
      const double z = (std::log(x) - p[0]) / p[1];
      return normal_pdf(z) / (x * p[1]);
    }
    case Family::Logistic: {
      const double z = (x - p[0]) / p[1];
      const double e = std::exp(-std::abs(z));
      return e / (p[1] * (1.0 + e) * (1.0 + e));
    }
    case Family::Laplace:
      return std::exp(-std::abs(x - p[0]) / p[1]) / (2.0 * p[1]);
  }
  return 0.0;
}

double Marginal::raw_cdf(double x) const {
  const auto& p = params_;
  switch (family_) {
    case Family::Uniform:
      return std::clamp((x - p[0]) / (p[1] - p[0]), 0.0, 1.0);
    case Family::Gaussian:
      return normal_cdf((x - p[0]) / p[1]);
    case Family::Gumbel:
      return std::exp(-std::exp(-(x - p[0]) / p[1]));
    case Family::GumbelMin:
      return -std::expm1(-std::exp((x - p[0]) / p[1]));
    case Family::Triangular: {
      const double a = p[0], b = p[1], c = p[2];
      if (x <= a) return 0.0;
      if (x >= b) return 1.0;
      if (x <= c) return (x - a) * (x - a) / ((b - a) * (c - a));
      return 1.0 - (b - x) * (b - x) / ((b - a) * (b - c));
    }
    case Family::Beta:
      return incomplete_beta(p[0], p[1], std::clamp((x - p[2]) / (p[3] - p[2]), 0.0, 1.0));
    case Family::Gamma:
      return incomplete_gamma(p[0], std::max(0.0, x / p[1]));
    case Family::Exponential:
      return x <= 0.0 ? 0.0 : -std::expm1(-p[0] * x);
    case Family::Weibull:
      return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x / p[1], p[0]));
    case Family::Lognormal:
      return x <= 0.0 ? 0.0 : normal_cdf((std::log(x) - p[0]) / p[1]);
    case Family::Logistic:
      return 1.0 / (1.0 + std::exp(-(x - p[0]) / p[1]));
    case Family::Laplace: {
      const double z = (x - p[0]) / p[1];
      return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
    }
  }
  return 0.0;
}

double Marginal::raw_quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("probability outside [0, 1]");
  const auto& p = params_;
  const auto [lo, hi] = natural_support();
  if (u == 0.0) return lo;
  if (u == 1.0) return hi;
  switch (family_) {
    case Family::Uniform:
      return p[0] + u * (p[1] - p[0]);
    case Family::Gaussian:
      return p[0] + p[1] * normal_quantile(u);
    case Family::Gumbel:
      return p[0] - p[1] * std::log(-std::log(u));
    case Family::GumbelMin:
      return p[0] + p[1] * std::log(-std::log1p(-u));
    case Family::Triangular: {
      const double a = p[0], b = p[1], c = p[2];
      const double fc = (c - a) / (b - a);
      if (u <= fc) return a + std::sqrt(u * (b - a) * (c - a));
      return b - std::sqrt((1.0 - u) * (b - a) * (b - c));
    }
    case Family::Beta:
      return bisect_quantile([this](double x) { return raw_cdf(x); }, u, p[2], p[3]);
    case Family::Gamma: {
      double upper = p[0] * p[1] + 10.0 * std::sqrt(p[0]) * p[1];
      while (raw_cdf(upper) < u) upper *= 2.0;
      return bisect_quantile([this](double x) { return raw_cdf(x); }, u, 0.0, upper);
    }
    case Family::Exponential:
      return -std::log1p(-u) / p[0];
    case Family::Weibull:
      return p[1] * std::pow(-std::log1p(-u), 1.0 / p[0]);
    case Family::Lognormal:
      return std::exp(p[0] + p[1] * normal_quantile(u));
    case Family::Logistic:
      return p[0] + p[1] * std::log(u / (1.0 - u));
    case Family::Laplace:
      return u < 0.5 ? p[0] + p[1] * std::log(2.0 * u) : p[0] - p[1] * std::log(2.0 * (1.0 - u));
  }
  return 0.0;
}

double Marginal::raw_log_pdf_prime(double x) const {
  const auto& p = params_;
  switch (family_) {
    case Family::Uniform:
      return 0.0;
    case Family::Gaussian:
      return -(x - p[0]) / (p[1] * p[1]);
    case Family::Gumbel:
      return (std::exp(-(x - p[0]) / p[1]) - 1.0) / p[1];
    case Family::GumbelMin:
      return (1.0 - std::exp((x - p[0]) / p[1])) / p[1];
    case Family::Triangular:
      return x < p[2] ? 1.0 / (x - p[0]) : -1.0 / (p[1] - x);
    case Family::Beta: {
      const double w = p[3] - p[2];
      const double t = (x - p[2]) / w;
      return ((p[0] - 1.0) / t - (p[1] - 1.0) / (1.0 - t)) / w;
    }
    case Family::Gamma:
      return (p[0] - 1.0) / x - 1.0 / p[1];
    case Family::Exponential:
      return -p[0];
    case Family::Weibull:
      return (p[0] - 1.0) / x - p[0] / p[1] * std::pow(x / p[1], p[0] - 1.0);
    case Family::Lognormal:
      return -1.0 / x - (std::log(x) - p[0]) / (p[1] * p[1] * x);
    case Family::Logistic:
      return -std::tanh(0.5 * (x - p[0]) / p[1]) / p[1];
    case Family::Laplace:
      return x < p[0] ? 1.0 / p[1] : -1.0 / p[1];
  }
  return 0.0;
}

double Marginal::pdf(double x) const {
  if (!contains(x)) throw DomainError("point outside marginal support");
  return raw_pdf(x) / mass_;
}

double Marginal::cdf(double x) const {
  if (x <= lower_) return 0.0;
  if (x >= upper_) return 1.0;
  return std::clamp((raw_cdf(x) - cdf_lower_) / mass_, 0.0, 1.0);
}

double Marginal::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("probability outside [0, 1]");
  if (u == 0.0) return lower_;
  if (u == 1.0) return upper_;
  return std::clamp(raw_quantile(cdf_lower_ + u * mass_), lower_, upper_);
}

double Marginal::potential(double x) const {
  const double density = pdf(x);
  return density > 0.0 ? -std::log(density) : kInf;
}

double Marginal::potential_prime(double x) const {
  if (!contains(x)) throw DomainError("point outside marginal support");
  return -raw_log_pdf_prime(x);
}

Marginal truncate(const Marginal& marginal) {
  if (marginal.family() == Family::Laplace) {
    throw UnsupportedFamilyError("the Laplace distribution has no Poincaré basis");
  }
  double lower = marginal.lower();
  double upper = marginal.upper();
  if (!std::isfinite(lower)) lower = marginal.raw_quantile(kTruncationTail);
  if (!std::isfinite(upper)) upper = marginal.raw_quantile(1.0 - kTruncationTail);
  // Half-line laws whose density vanishes or blows up at the origin get the
  // lower quantile cut as well, otherwise the density is not bounded away
  // from 0 and infinity.
  const auto [natural_lo, natural_hi] = marginal.natural_support();
  if (!std::isfinite(natural_hi) && lower == natural_lo) {
    const double at_origin = marginal.raw_pdf(lower);
    if (!(at_origin > 0.0 && std::isfinite(at_origin))) lower = marginal.raw_quantile(kTruncationTail);
  }
  return Marginal(marginal.family(), marginal.params(), lower, upper);
}

std::pair<Marginal, StandardizationMap> standardize(const Marginal& marginal) {
  const auto& p = marginal.params();
  StandardizationMap map;
  std::vector<double> params = p;
  switch (marginal.family()) {
    case Family::Uniform:
    case Family::Triangular:
      map = {0.5 * (p[0] + p[1]), p[1] - p[0]};
      params[0] = -0.5;
      params[1] = 0.5;
      if (params.size() == 3) params[2] = map.forward(p[2]);
      break;
    case Family::Beta:
      map = {0.5 * (p[2] + p[3]), p[3] - p[2]};
      params[2] = -0.5;
      params[3] = 0.5;
      break;
    case Family::Gaussian:
    case Family::Gumbel:
    case Family::GumbelMin:
    case Family::Logistic:
    case Family::Laplace:
      map = {p[0], p[1]};
      params = {0.0, 1.0};
      break;
    case Family::Exponential:
      map = {0.0, 1.0 / p[0]};
      params = {1.0};
      break;
    case Family::Gamma:
    case Family::Weibull:
      map = {0.0, p[1]};
      params[1] = 1.0;
      break;
    case Family::Lognormal:
      map = {0.0, std::exp(p[0])};
      params[0] = 0.0;
      break;
  }
  Marginal standardized(marginal.family(), std::move(params), map.forward(marginal.lower()),
                        map.forward(marginal.upper()));
  return {std::move(standardized), map};
}

}  // namespace poince

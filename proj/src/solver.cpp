#include "poince/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace poince {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCollinear = 1e-10;
constexpr double kLooTie = 1e-12;

double loo_normalizer(const Eigen::Ref<const Eigen::VectorXd>& y) {
  const auto n = static_cast<double>(y.size());
  if (y.size() > 1) {
    const double var = (y.array() - y.mean()).square().sum() / (n - 1.0);
    if (var > 0.0) return var;
  }
  return y.squaredNorm() / n;
}

// Incremental Gram-Schmidt QR of the selected original columns, with the
// quantities the corrected LOO needs.
class IncrementalQr {
 public:
  IncrementalQr(const Eigen::Ref<const Eigen::VectorXd>& y, Eigen::Index capacity)
      : y_(y), q_(y.size(), capacity), r_(Eigen::MatrixXd::Zero(capacity, capacity)),
        rinv_(Eigen::MatrixXd::Zero(capacity, capacity)), qty_(capacity), residual_(y),
        leverage_(Eigen::VectorXd::Zero(y.size())) {}

  Eigen::Index size() const { return k_; }

  // Appends a column; false when it is numerically in the current span.
  bool push(const Eigen::Ref<const Eigen::VectorXd>& column) {
    const double norm = column.norm();
    if (!(norm > 0.0) || k_ >= q_.cols()) return false;
    Eigen::VectorXd v = column;
    Eigen::VectorXd z = Eigen::VectorXd::Zero(k_);
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd dz = q_.leftCols(k_).transpose() * v;
      v.noalias() -= q_.leftCols(k_) * dz;
      z += dz;
    }
    const double rho = v.norm();
    if (rho <= kCollinear * norm) return false;
    q_.col(k_) = v / rho;
    r_.col(k_).head(k_) = z;
    r_(k_, k_) = rho;
    const Eigen::VectorXd w = rinv_.topLeftCorner(k_, k_) * z;
    rinv_.col(k_).head(k_) = -w / rho;
    rinv_(k_, k_) = 1.0 / rho;
    trace_ += (w.squaredNorm() + 1.0) / (rho * rho);
    qty_[k_] = q_.col(k_).dot(y_);
    residual_.noalias() -= qty_[k_] * q_.col(k_);
    leverage_.array() += q_.col(k_).array().square();
    ++k_;
    return true;
  }

  double loo(double normalizer) const {
    const auto n = y_.size();
    if (n <= k_) return kInf;
    if ((leverage_.array() >= 1.0 - 1e-12).any()) return kInf;
    const double mean_sq = (residual_.array() / (1.0 - leverage_.array())).square().mean();
    const double correction = static_cast<double>(n) / static_cast<double>(n - k_) * (1.0 + trace_);
    return mean_sq * correction / normalizer;
  }

  // OLS coefficients of the first k columns.
  Eigen::VectorXd solve(Eigen::Index k) const {
    return r_.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(qty_.head(k));
  }

 private:
  Eigen::Ref<const Eigen::VectorXd> y_;
  Eigen::MatrixXd q_;
  Eigen::MatrixXd r_;
  Eigen::MatrixXd rinv_;
  Eigen::VectorXd qty_;
  Eigen::VectorXd residual_;
  Eigen::VectorXd leverage_;
  double trace_ = 0.0;
  Eigen::Index k_ = 0;
};

}  // namespace

Eigen::VectorXd ols(const Eigen::Ref<const Eigen::MatrixXd>& psi, const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (psi.rows() != y.size()) throw std::invalid_argument("row count of psi and y differ");
  if (psi.rows() < psi.cols()) throw SingularMatrixError("OLS needs at least as many rows as columns");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(psi);
  qr.setThreshold(1e-12);
  if (qr.rank() < psi.cols()) throw SingularMatrixError("regression matrix is rank deficient");
  return qr.solve(y);
}

double loo_corrected(const Eigen::Ref<const Eigen::MatrixXd>& psi, const Eigen::Ref<const Eigen::VectorXd>& y,
                     const std::vector<Eigen::Index>& active) {
  if (psi.rows() != y.size()) throw std::invalid_argument("row count of psi and y differ");
  IncrementalQr qr(y, static_cast<Eigen::Index>(active.size()));
  for (Eigen::Index j : active) {
    if (!qr.push(psi.col(j))) throw SingularMatrixError("active columns are linearly dependent");
  }
  const double normalizer = loo_normalizer(y);
  if (!(normalizer > 0.0)) return 0.0;
  return qr.loo(normalizer);
}

Eigen::Index lars_path(const Eigen::Ref<const Eigen::MatrixXd>& psi, const Eigen::Ref<const Eigen::VectorXd>& y,
                       Eigen::Index max_active, Eigen::Index intercept,
                       const std::function<LarsAction(const LarsStep&)>& on_step) {
  const Eigen::Index n = psi.rows();
  const Eigen::Index p = psi.cols();
  if (y.size() != n) throw std::invalid_argument("row count of psi and y differ");
  if (max_active <= 0) max_active = std::min(n - 1, p);
  max_active = std::min(max_active, p);
  const bool centered = intercept >= 0;

  Eigen::MatrixXd x = psi;
  Eigen::VectorXd r = y;
  std::vector<char> excluded(static_cast<std::size_t>(p), 0);
  if (centered) {
    x.rowwise() -= x.colwise().mean();
    r.array() -= r.mean();
    excluded[static_cast<std::size_t>(intercept)] = 1;
  }
  const double root_n = std::sqrt(static_cast<double>(n));
  for (Eigen::Index j = 0; j < p; ++j) {
    const double norm = x.col(j).norm();
    if (norm <= 1e-14 * root_n * std::max(1.0, psi.col(j).cwiseAbs().maxCoeff())) {
      excluded[static_cast<std::size_t>(j)] = 1;
    } else {
      x.col(j) *= root_n / norm;
    }
  }

  std::vector<Eigen::Index> active;
  std::vector<char> in_active(static_cast<std::size_t>(p), 0);
  Eigen::VectorXd c = x.transpose() * r;
  Eigen::Index accepted = 0;

  if (centered) {
    active.push_back(intercept);
    in_active[static_cast<std::size_t>(intercept)] = 1;
    ++accepted;
    const LarsAction act = on_step({active, c, intercept});
    if (act != LarsAction::Continue) return accepted;
  }

  const Eigen::Index capacity = std::min(max_active, p);
  Eigen::MatrixXd chol = Eigen::MatrixXd::Zero(capacity, capacity);
  std::vector<Eigen::Index> lars_set;  // active columns other than the intercept
  Eigen::VectorXd signs(capacity);

  auto max_corr = [&]() {
    double best = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (!excluded[static_cast<std::size_t>(j)] && !in_active[static_cast<std::size_t>(j)]) {
        best = std::max(best, std::abs(c[j]));
      }
    }
    return best;
  };
  const double c0 = max_corr();
  if (!(c0 > 0.0)) return accepted;
  double big_c = c0;

  enum class Added { No, Yes, YesAndStop };
  auto try_add = [&](Eigen::Index j) {
    const auto k = static_cast<Eigen::Index>(lars_set.size());
    Eigen::VectorXd b(k);
    for (Eigen::Index a = 0; a < k; ++a) b[a] = x.col(lars_set[a]).dot(x.col(j));
    const Eigen::VectorXd z = chol.topLeftCorner(k, k).triangularView<Eigen::Lower>().solve(b);
    const double d2 = static_cast<double>(n) - z.squaredNorm();
    if (d2 <= kCollinear * static_cast<double>(n)) return Added::No;
    active.push_back(j);
    in_active[static_cast<std::size_t>(j)] = 1;
    const LarsAction act = on_step({active, c, j});
    if (act == LarsAction::Reject) {
      active.pop_back();
      in_active[static_cast<std::size_t>(j)] = 0;
      return Added::No;
    }
    chol.row(k).head(k) = z.transpose();
    chol(k, k) = std::sqrt(d2);
    signs[k] = c[j] >= 0.0 ? 1.0 : -1.0;
    lars_set.push_back(j);
    ++accepted;
    return act == LarsAction::Stop ? Added::YesAndStop : Added::Yes;
  };

  // First entry: largest correlation.
  while (lars_set.empty()) {
    Eigen::Index best = -1;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (excluded[static_cast<std::size_t>(j)] || in_active[static_cast<std::size_t>(j)]) continue;
      if (best < 0 || std::abs(c[j]) > std::abs(c[best])) best = j;
    }
    if (best < 0) return accepted;
    const Added added = try_add(best);
    if (added == Added::No) excluded[static_cast<std::size_t>(best)] = 1;
    if (added == Added::YesAndStop) return accepted;
  }

  while (static_cast<Eigen::Index>(active.size()) < max_active) {
    const auto k = static_cast<Eigen::Index>(lars_set.size());
    const auto lower = chol.topLeftCorner(k, k).triangularView<Eigen::Lower>();
    Eigen::VectorXd g = lower.solve(signs.head(k));
    g = lower.transpose().solve(g);
    const double norm_a = 1.0 / std::sqrt(signs.head(k).dot(g));
    const Eigen::VectorXd w = norm_a * g;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    for (Eigen::Index a = 0; a < k; ++a) u.noalias() += w[a] * x.col(lars_set[a]);
    const Eigen::VectorXd av = x.transpose() * u;

    // Smallest step at which an inactive correlation catches up.
    double gamma = big_c / norm_a;
    Eigen::Index next = -1;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (excluded[static_cast<std::size_t>(j)] || in_active[static_cast<std::size_t>(j)]) continue;
      const double den_minus = norm_a - av[j];
      const double den_plus = norm_a + av[j];
      if (den_minus > 1e-15) {
        const double cand = std::max(0.0, big_c - c[j]) / den_minus;
        if (cand < gamma) {
          gamma = cand;
          next = j;
        }
      }
      if (den_plus > 1e-15) {
        const double cand = std::max(0.0, big_c + c[j]) / den_plus;
        if (cand < gamma) {
          gamma = cand;
          next = j;
        }
      }
    }
    r.noalias() -= gamma * u;
    c.noalias() -= gamma * av;
    big_c -= gamma * norm_a;
    if (next < 0 || big_c <= 1e-12 * c0) break;
    const Added added = try_add(next);
    if (added == Added::No) excluded[static_cast<std::size_t>(next)] = 1;
    if (added == Added::YesAndStop) break;
  }
  return accepted;
}

FitResult hybrid_lars(const Eigen::Ref<const Eigen::MatrixXd>& psi, const Eigen::Ref<const Eigen::VectorXd>& y,
                      const LarsOptions& options) {
  const Eigen::Index n = psi.rows();
  const Eigen::Index p = psi.cols();
  if (y.size() != n) throw std::invalid_argument("row count of psi and y differ");
  if (n < 1 || p < 1) throw std::invalid_argument("empty regression problem");
  if (!psi.allFinite() || !y.allFinite()) throw std::invalid_argument("non-finite regression data");

  FitResult result;
  result.coefficients = Eigen::VectorXd::Zero(p);
  const Eigen::Index intercept = options.intercept;
  Eigen::Index max_active = options.max_active > 0 ? options.max_active : std::min(n - 1, p);
  max_active = std::min({max_active, p, std::max<Eigen::Index>(n - 1, 1)});
  const Eigen::Index patience =
      options.patience > 0 ? options.patience : std::max<Eigen::Index>(20, max_active / 10);

  const double normalizer = loo_normalizer(y);
  if (!(normalizer > 0.0)) {
    // y is identically zero.
    result.loo_error = 0.0;
    return result;
  }

  IncrementalQr qr(y, max_active);
  std::vector<Eigen::Index> order;
  double best = kInf;
  Eigen::Index best_k = 0;
  Eigen::Index stale = 0;
  const Eigen::Index steps =
      lars_path(psi, y, max_active, intercept, [&](const LarsStep& step) {
        if (!qr.push(psi.col(step.entered))) return LarsAction::Reject;
        order.push_back(step.entered);
        const double loo = qr.loo(normalizer);
        if (loo < best - kLooTie || (best_k == 0 && loo < kInf)) {
          best = loo;
          best_k = qr.size();
          stale = 0;
        } else if (++stale >= patience) {
          return LarsAction::Stop;
        }
        return LarsAction::Continue;
      });
  result.path_length = steps;
  if (best_k == 0) {
    // Every prefix interpolates: fall back to the intercept or the first entry.
    result.loo_error = kInf;
    if (!order.empty()) {
      best_k = 1;
      best = kInf;
    } else {
      return result;
    }
  }
  const Eigen::VectorXd coef = qr.solve(best_k);
  result.active.assign(order.begin(), order.begin() + best_k);
  for (Eigen::Index a = 0; a < best_k; ++a) result.coefficients[result.active[a]] = coef[a];
  result.loo_error = best;
  return result;
}

AdaptiveFit degree_adaptive_fit(const Eigen::Ref<const Eigen::MatrixXd>& psi, const Eigen::Ref<const Eigen::VectorXd>& y,
                                const std::vector<MultiIndex>& indices, int p_min, int p_max, double q,
                                const LarsOptions& options) {
  if (static_cast<Eigen::Index>(indices.size()) != psi.cols()) {
    throw std::invalid_argument("one multi-index per column is required");
  }
  if (p_min > p_max || p_min < 0) throw std::invalid_argument("empty degree range");
  AdaptiveFit out;
  bool have = false;
  double previous = kInf;
  int rises = 0;
  for (int deg = p_min; deg <= p_max; ++deg) {
    std::vector<Eigen::Index> columns;
    Eigen::Index intercept = -1;
    for (Eigen::Index j = 0; j < psi.cols(); ++j) {
      if (!in_hyperbolic(indices[j], deg, q)) continue;
      if (total_order(indices[j]) == 0) intercept = static_cast<Eigen::Index>(columns.size());
      columns.push_back(j);
    }
    if (columns.empty()) continue;
    if (have && static_cast<Eigen::Index>(columns.size()) == out.diagnostics.back().n_columns) {
      // Same candidate set as the previous degree (e.g. q < 1 plateaus).
      continue;
    }
    Eigen::MatrixXd sub(psi.rows(), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = psi.col(columns[c]);
    LarsOptions opts = options;
    opts.intercept = intercept;
    FitResult fit = hybrid_lars(sub, y, opts);
    out.diagnostics.push_back({deg, fit.loo_error, static_cast<Eigen::Index>(fit.active.size()),
                               static_cast<Eigen::Index>(columns.size())});

    const auto n_active = static_cast<Eigen::Index>(fit.active.size());
    const bool better = !have || fit.loo_error < out.fit.loo_error - kLooTie ||
                        (std::abs(fit.loo_error - out.fit.loo_error) <= kLooTie &&
                         n_active < static_cast<Eigen::Index>(out.fit.active.size()));
    if (better) {
      FitResult mapped;
      mapped.coefficients = Eigen::VectorXd::Zero(psi.cols());
      for (Eigen::Index a : fit.active) {
        mapped.active.push_back(columns[static_cast<std::size_t>(a)]);
        mapped.coefficients[columns[static_cast<std::size_t>(a)]] = fit.coefficients[a];
      }
      mapped.loo_error = fit.loo_error;
      mapped.degree = deg;
      mapped.path_length = fit.path_length;
      out.fit = std::move(mapped);
      have = true;
    }
    rises = fit.loo_error > previous ? rises + 1 : 0;
    previous = fit.loo_error;
    if (rises >= 2) break;
  }
  if (!have) throw std::invalid_argument("no basis column within the degree range");
  return out;
}

}  // namespace poince

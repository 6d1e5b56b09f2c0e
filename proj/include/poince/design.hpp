#ifndef POINCE_DESIGN_HPP
#define POINCE_DESIGN_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "poince/marginals.hpp"

namespace poince {

/// 64-bit Mersenne twister with a portable uniform draw, so designs are
/// bit-reproducible from the seed independent of the standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t state_[312];
  int index_;
  std::uint64_t next();
};

enum class DesignKind { LhsMaximin, MonteCarlo, Subsample };

struct ExperimentalDesign {
  Eigen::MatrixXd points;  // N x d, model units
  std::uint64_t seed = 0;
  DesignKind kind = DesignKind::MonteCarlo;
};

/// Jittered Latin hypercube in (0, 1)^d: every column hits each of the n
/// strata exactly once.
Eigen::MatrixXd latin_hypercube(Eigen::Index n, int d, Rng& rng);

/// Smallest Euclidean distance between two rows.
double min_pairwise_distance(const Eigen::Ref<const Eigen::MatrixXd>& points);

/// Applies the marginal quantile functions column by column.
Eigen::MatrixXd map_to_marginals(const Eigen::Ref<const Eigen::MatrixXd>& unit,
                                 const std::vector<Marginal>& marginals);

/// Best of `restarts` Latin hypercubes under the maximin criterion (measured
/// in the unit hypercube), mapped through the marginal quantiles. The first
/// candidate is the plain LHS for the same seed.
ExperimentalDesign lhs_maximin(const std::vector<Marginal>& marginals, Eigen::Index n,
                               std::uint64_t seed, int restarts = 50);

/// i.i.d. inverse-CDF sample.
ExperimentalDesign mc_sample(const std::vector<Marginal>& marginals, Eigen::Index n, std::uint64_t seed);

/// n distinct row indices drawn from [0, population), in draw order.
std::vector<Eigen::Index> subsample_without_replacement(Eigen::Index population, Eigen::Index n,
                                                        std::uint64_t seed);

/// A header-tagged numeric table.
struct Table {
  std::vector<std::string> columns;
  Eigen::MatrixXd values;

  /// Column position by name; throws std::out_of_range when absent.
  Eigen::Index column(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

Table read_csv(const std::string& path);
Table read_csv(std::istream& in);
void write_csv(std::ostream& out, const Table& table);
void write_csv(const std::string& path, const Table& table);

/// Shortest round-trip decimal form of a double ("%.17g").
std::string format_double(double value);

}  // namespace poince

#endif  // POINCE_DESIGN_HPP

#ifndef POINCE_EXPERIMENT_HPP
#define POINCE_EXPERIMENT_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "poince/expansion.hpp"
#include "poince/marginals.hpp"
#include "poince/models.hpp"

namespace poince {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Estimator { PoinceLars, PoinceDerLars, PoinceDerAvg, PoinceMc, PoinceDerMc };

std::string_view estimator_name(Estimator e);
Estimator parse_estimator(std::string_view name);
bool needs_gradient(Estimator e);

struct ExperimentConfig {
  std::string model;        // built-in model name
  std::string data_file;    // or a CSV file of evaluations
  std::string data_output = "y";
  std::vector<std::string> names;
  std::vector<Marginal> marginals;
  std::vector<Estimator> estimators;
  int p_min = 1;
  int p_max = 5;
  double q = 1.0;
  int mc_degree = 2;
  std::vector<Eigen::Index> sizes;
  int replications = 1;
  std::uint64_t seed = 0;
  Eigen::Index validation_size = 10000;  // 0 disables RelMSE
  std::uint64_t validation_seed = 0;
  int grid_n = kDefaultGridSize;
  int lhs_restarts = 50;
  std::string output_dir = "results";
};

/// "family:p1,p2,...[:lower,upper]", e.g. "gumbel:1013,558:500,3000".
Marginal parse_marginal_spec(const std::string& spec);

/// Parses the JSON config text; relative data paths resolve against base_dir.
ExperimentConfig parse_config(const std::string& text, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

struct ResultRow {
  Estimator estimator;
  std::string input;
  Eigen::Index n;
  int replication;
  double s1;
  double stot;
  double d;
  double dtot;
  double d1;
  double dgsm;
  double dgsm_ub;
  double relmse;
  int p_star;
  Eigen::Index n_active;
};

/// Rows ordered by size, replication, estimator, input regardless of `jobs`.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config, int jobs = 1);

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results_csv(std::istream& in);

struct SummaryRow {
  Estimator estimator;
  std::string input;
  Eigen::Index n;
  std::string metric;
  Eigen::Index count;
  double median;
  double q1;
  double q3;
  double whisker_low;
  double whisker_high;
  double mean;
  double std;
};

struct BoxStats {
  double median;
  double q1;
  double q3;
  double whisker_low;   // smallest value >= q1 - 1.5 IQR
  double whisker_high;  // largest value <= q3 + 1.5 IQR
  double mean;
  double std;           // sample standard deviation, 0 for one value
};

/// Quartiles by linear interpolation between order statistics.
BoxStats box_stats(std::vector<double> values);

/// One row per (estimator, input, N, metric). Throws std::invalid_argument
/// on empty input.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

}  // namespace poince

#endif  // POINCE_EXPERIMENT_HPP

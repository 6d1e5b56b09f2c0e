#include "poince/design.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace poince {

// MT19937-64 (Matsumoto & Nishimura).
Rng::Rng(std::uint64_t seed) : index_(312) {
  state_[0] = seed;
  for (int i = 1; i < 312; ++i) {
    state_[i] = 6364136223846793005ULL * (state_[i - 1] ^ (state_[i - 1] >> 62)) + static_cast<std::uint64_t>(i);
  }
}

std::uint64_t Rng::next() {
  constexpr std::uint64_t upper = 0xFFFFFFFF80000000ULL;
  constexpr std::uint64_t lower = 0x7FFFFFFFULL;
  constexpr std::uint64_t matrix = 0xB5026F5AA96619E9ULL;
  if (index_ >= 312) {
    for (int i = 0; i < 312; ++i) {
      const std::uint64_t x = (state_[i] & upper) | (state_[(i + 1) % 312] & lower);
      std::uint64_t xa = x >> 1;
      if (x & 1ULL) xa ^= matrix;
      state_[i] = state_[(i + 156) % 312] ^ xa;
    }
    index_ = 0;
  }
  std::uint64_t x = state_[index_++];
  x ^= (x >> 29) & 0x5555555555555555ULL;
  x ^= (x << 17) & 0x71D67FFFEDA60000ULL;
  x ^= (x << 37) & 0xFFF7EEE000000000ULL;
  x ^= x >> 43;
  return x;
}

double Rng::uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

Eigen::MatrixXd latin_hypercube(Eigen::Index n, int d, Rng& rng) {
  if (n < 1 || d < 1) throw std::invalid_argument("LHS needs n >= 1 and d >= 1");
  Eigen::MatrixXd unit(n, d);
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  for (int j = 0; j < d; ++j) {
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    for (Eigen::Index i = n - 1; i > 0; --i) {
      std::swap(perm[i], perm[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      unit(i, j) = (static_cast<double>(perm[i]) + rng.uniform()) / static_cast<double>(n);
    }
  }
  return unit;
}

double min_pairwise_distance(const Eigen::Ref<const Eigen::MatrixXd>& points) {
  const Eigen::Index n = points.rows();
  if (n < 2) return std::numeric_limits<double>::infinity();
  const Eigen::MatrixXd t = points.transpose();
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const double dist = (t.col(a) - t.col(b)).squaredNorm();
      if (dist < best) best = dist;
    }
  }
  return std::sqrt(best);
}

Eigen::MatrixXd map_to_marginals(const Eigen::Ref<const Eigen::MatrixXd>& unit,
                                 const std::vector<Marginal>& marginals) {
  if (unit.cols() != static_cast<Eigen::Index>(marginals.size())) {
    throw std::invalid_argument("design dimension does not match the marginals");
  }
  Eigen::MatrixXd x(unit.rows(), unit.cols());
  for (Eigen::Index j = 0; j < unit.cols(); ++j) {
    for (Eigen::Index i = 0; i < unit.rows(); ++i) x(i, j) = marginals[j].quantile(unit(i, j));
  }
  return x;
}

ExperimentalDesign lhs_maximin(const std::vector<Marginal>& marginals, Eigen::Index n,
                               std::uint64_t seed, int restarts) {
  if (restarts < 1) throw std::invalid_argument("at least one LHS candidate is required");
  const int d = static_cast<int>(marginals.size());
  Rng rng(seed);
  Eigen::MatrixXd best = latin_hypercube(n, d, rng);
  double best_distance = min_pairwise_distance(best);
  for (int r = 1; r < restarts; ++r) {
    Eigen::MatrixXd candidate = latin_hypercube(n, d, rng);
    const double distance = min_pairwise_distance(candidate);
    if (distance > best_distance) {
      best_distance = distance;
      best = std::move(candidate);
    }
  }
  return {map_to_marginals(best, marginals), seed, DesignKind::LhsMaximin};
}

ExperimentalDesign mc_sample(const std::vector<Marginal>& marginals, Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd unit(n, static_cast<Eigen::Index>(marginals.size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < unit.cols(); ++j) unit(i, j) = rng.uniform();
  }
  return {map_to_marginals(unit, marginals), seed, DesignKind::MonteCarlo};
}

std::vector<Eigen::Index> subsample_without_replacement(Eigen::Index population, Eigen::Index n,
                                                        std::uint64_t seed) {
  if (n < 0 || n > population) throw std::invalid_argument("cannot draw more rows than available");
  std::vector<Eigen::Index> pool(static_cast<std::size_t>(population));
  std::iota(pool.begin(), pool.end(), Eigen::Index{0});
  Rng rng(seed);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto j = i + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(population - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(static_cast<std::size_t>(n));
  return pool;
}

Eigen::Index Table::column(const std::string& name) const {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] == name) return static_cast<Eigen::Index>(j);
  }
  throw std::out_of_range("no column named '" + name + "'");
}

bool Table::has_column(const std::string& name) const {
  for (const auto& c : columns) {
    if (c == name) return true;
  }
  return false;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto first = field.find_first_not_of(" \t\r\"");
    const auto last = field.find_last_not_of(" \t\r\"");
    fields.push_back(first == std::string::npos ? "" : field.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

Table read_csv(std::istream& in) {
  Table table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("CSV input is empty");
  table.columns = split_line(line);
  std::vector<double> data;
  Eigen::Index rows = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_line(line);
    if (fields.size() != table.columns.size()) {
      throw std::runtime_error("CSV row " + std::to_string(rows + 2) + " has the wrong number of fields");
    }
    for (const auto& f : fields) {
      std::size_t used = 0;
      const double v = std::stod(f, &used);
      if (used != f.size()) throw std::runtime_error("non-numeric CSV field '" + f + "'");
      data.push_back(v);
    }
    ++rows;
  }
  const auto cols = static_cast<Eigen::Index>(table.columns.size());
  table.values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      data.data(), rows, cols);
  return table;
}

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_csv(in);
}

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t j = 0; j < table.columns.size(); ++j) out << (j ? "," : "") << table.columns[j];
  out << '\n';
  for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < table.values.cols(); ++j) {
      out << (j ? "," : "") << format_double(table.values(i, j));
    }
    out << '\n';
  }
}

void write_csv(const std::string& path, const Table& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_csv(out, table);
}

}  // namespace poince

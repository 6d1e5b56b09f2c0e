#include "poince/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"
#include "poince/design.hpp"
#include "poince/sensitivity.hpp"

namespace poince {

namespace {

using nlohmann::json;

constexpr Estimator kAllEstimators[] = {Estimator::PoinceLars, Estimator::PoinceDerLars, Estimator::PoinceDerAvg,
                                        Estimator::PoinceMc, Estimator::PoinceDerMc};

bool uses_lhs(Estimator e) {
  return e == Estimator::PoinceLars || e == Estimator::PoinceDerLars || e == Estimator::PoinceDerAvg;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_bound(const json& v, double fallback) {
  if (v.is_null()) return fallback;
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw ConfigError("bounds must be numbers, null, \"inf\" or \"-inf\"");
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  return obj.at(key).get<T>();
}

struct Sample {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  Eigen::MatrixXd g;
};

// Everything a replication needs, shared read-only between workers.
struct Context {
  const ExperimentConfig& config;
  SpacePtr space;
  std::unique_ptr<Model> model;
  Eigen::MatrixXd data_x;
  Eigen::VectorXd data_y;
  Eigen::MatrixXd data_g;
  std::vector<Eigen::Index> pool;  // training rows of the data file
  Eigen::MatrixXd val_x;
  Eigen::VectorXd val_y;
  bool gradients = false;
};

Sample from_rows(const Context& ctx, const std::vector<Eigen::Index>& rows) {
  Sample s;
  const auto n = static_cast<Eigen::Index>(rows.size());
  s.x.resize(n, ctx.data_x.cols());
  s.y.resize(n);
  if (ctx.gradients) s.g.resize(n, ctx.data_g.cols());
  for (Eigen::Index k = 0; k < n; ++k) {
    s.x.row(k) = ctx.data_x.row(rows[static_cast<std::size_t>(k)]);
    s.y[k] = ctx.data_y[rows[static_cast<std::size_t>(k)]];
    if (ctx.gradients) s.g.row(k) = ctx.data_g.row(rows[static_cast<std::size_t>(k)]);
  }
  return s;
}

Sample evaluate(const Context& ctx, Eigen::MatrixXd x, bool gradients) {
  Sample s;
  s.y = ctx.model->values(x);
  if (gradients) s.g = ctx.model->gradients(x);
  s.x = std::move(x);
  return s;
}

std::vector<ResultRow> run_replication(const Context& ctx, Eigen::Index n, int rep) {
  const ExperimentConfig& cfg = ctx.config;
  const InputSpace& space = *ctx.space;
  const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(rep);
  const FitConfig fit{cfg.p_min, cfg.p_max, cfg.q, {}};
  const int d = space.dim();

  auto wants = [&](auto pred) { return std::any_of(cfg.estimators.begin(), cfg.estimators.end(), pred); };
  std::optional<Sample> lhs;
  std::optional<Sample> iid;
  if (ctx.model) {
    if (wants(uses_lhs)) {
      lhs = evaluate(ctx, lhs_maximin(space.marginals(), n, seed, cfg.lhs_restarts).points,
                     wants([](Estimator e) { return uses_lhs(e) && needs_gradient(e); }));
    }
    if (wants([](Estimator e) { return !uses_lhs(e); })) {
      iid = evaluate(ctx, mc_sample(space.marginals(), n, seed).points, wants([](Estimator e) {
                       return !uses_lhs(e) && needs_gradient(e);
                     }));
    }
  } else {
    const std::vector<Eigen::Index> pick =
        subsample_without_replacement(static_cast<Eigen::Index>(ctx.pool.size()), n, seed);
    std::vector<Eigen::Index> rows;
    for (Eigen::Index k : pick) rows.push_back(ctx.pool[static_cast<std::size_t>(k)]);
    lhs = from_rows(ctx, rows);
    iid = lhs;
  }

  std::vector<ResultRow> out;
  auto relmse_of = [&](const Expansion& surrogate) {
    if (ctx.val_x.rows() == 0) return std::numeric_limits<double>::quiet_NaN();
    return relmse(eval_surrogate(surrogate, ctx.val_x), ctx.val_y);
  };
  auto emit = [&](Estimator est, const SensitivityReport& report, double rel, auto p_star, auto n_active) {
    for (int i = 0; i < d; ++i) {
      const InputIndices& r = report.inputs[static_cast<std::size_t>(i)];
      out.push_back({est, space.names()[static_cast<std::size_t>(i)], n, rep, r.s1, r.stot, report.variance, r.total,
                     r.first, r.dgsm, r.dgsm_ub, rel, p_star(i), n_active(i)});
    }
  };

  std::optional<std::vector<Expansion>> ders;
  std::optional<Expansion> der_surrogate;
  auto der_fits = [&]() {
    if (!ders) {
      ders.emplace();
      for (int i = 0; i < d; ++i) ders->push_back(fit_poince_der(ctx.space, lhs->x, lhs->g.col(i), i, fit));
      der_surrogate = fit_constant_residual(average_der_expansions(*ders), lhs->x, lhs->y);
    }
  };

  for (Estimator est : kAllEstimators) {
    if (std::find(cfg.estimators.begin(), cfg.estimators.end(), est) == cfg.estimators.end()) continue;
    switch (est) {
      case Estimator::PoinceLars: {
        const Expansion e = fit_poince(ctx.space, lhs->x, lhs->y, fit);
        emit(est, coefficient_report(e), relmse_of(e), [&](int) { return e.truncation.degree; },
             [&](int) { return e.size(); });
        break;
      }
      case Estimator::PoinceDerLars: {
        der_fits();
        std::vector<InputVariances> v;
        for (int i = 0; i < d; ++i) v.push_back(input_variances((*ders)[static_cast<std::size_t>(i)], i));
        const SensitivityReport report =
            normalize_report(v, total_variance(*der_surrogate), VarianceSource::Coefficients);
        emit(est, report, relmse_of(*der_surrogate),
             [&](int i) { return (*ders)[static_cast<std::size_t>(i)].truncation.degree; },
             [&](int i) { return (*ders)[static_cast<std::size_t>(i)].size(); });
        break;
      }
      case Estimator::PoinceDerAvg: {
        der_fits();
        const Expansion& s = *der_surrogate;
        emit(est, coefficient_report(s), relmse_of(s), [&](int) { return s.truncation.degree; },
             [&](int) { return s.size(); });
        break;
      }
      case Estimator::PoinceMc: {
        const Expansion e = fit_projection_mc(ctx.space, iid->x, iid->y, cfg.mc_degree);
        std::vector<InputVariances> v;
        for (int i = 0; i < d; ++i) v.push_back(input_variances(e, i));
        emit(est, normalize_report(v, sample_variance(iid->y), VarianceSource::Empirical), relmse_of(e),
             [&](int) { return cfg.mc_degree; }, [&](int) { return e.size(); });
        break;
      }
      case Estimator::PoinceDerMc: {
        std::vector<Expansion> mc;
        std::vector<InputVariances> v;
        for (int i = 0; i < d; ++i) {
          mc.push_back(fit_projection_der_mc(ctx.space, iid->x, iid->g.col(i), i, cfg.mc_degree));
          v.push_back(input_variances(mc.back(), i));
        }
        const Expansion s = fit_constant_residual(average_der_expansions(mc), iid->x, iid->y);
        emit(est, normalize_report(v, sample_variance(iid->y), VarianceSource::Empirical), relmse_of(s),
             [&](int) { return cfg.mc_degree; },
             [&](int i) { return mc[static_cast<std::size_t>(i)].size(); });
        break;
      }
    }
  }
  return out;
}

void load_data(Context& ctx) {
  const ExperimentConfig& cfg = ctx.config;
  const Table table = read_csv(cfg.data_file);
  const auto d = static_cast<Eigen::Index>(cfg.names.size());
  ctx.data_x.resize(table.values.rows(), d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const std::string& name = cfg.names[static_cast<std::size_t>(i)];
    if (!table.has_column(name)) throw ConfigError("data file lacks input column '" + name + "'");
    ctx.data_x.col(i) = table.values.col(table.column(name));
  }
  if (!table.has_column(cfg.data_output)) throw ConfigError("data file lacks output column '" + cfg.data_output + "'");
  ctx.data_y = table.values.col(table.column(cfg.data_output));
  if (ctx.gradients) {
    ctx.data_g.resize(table.values.rows(), d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const std::string col = "d_" + cfg.names[static_cast<std::size_t>(i)];
      if (!table.has_column(col)) {
        throw ConfigError("derivative estimators need column '" + col + "', which the data file lacks");
      }
      ctx.data_g.col(i) = table.values.col(table.column(col));
    }
  }
  const Eigen::Index rows = table.values.rows();
  const Eigen::Index largest = *std::max_element(cfg.sizes.begin(), cfg.sizes.end());
  if (rows < cfg.validation_size + largest) {
    throw ConfigError("data file has " + std::to_string(rows) + " rows; validation and design sizes need " +
                      std::to_string(cfg.validation_size + largest));
  }
  const std::vector<Eigen::Index> order = subsample_without_replacement(rows, rows, cfg.validation_seed);
  const std::vector<Eigen::Index> val(order.begin(), order.begin() + cfg.validation_size);
  ctx.pool.assign(order.begin() + cfg.validation_size, order.end());
  if (!val.empty()) {
    const Sample v = from_rows(ctx, val);
    ctx.val_x = v.x;
    ctx.val_y = v.y;
  }
}

constexpr const char* metric_names[] = {"S1", "Stot", "D", "Dtot", "D1", "dgsm", "dgsm_ub", "relmse", "p_star", "n_active"};

double metric(const ResultRow& r, std::size_t m) {
  switch (m) {
    case 0: return r.s1;
    case 1: return r.stot;
    case 2: return r.d;
    case 3: return r.dtot;
    case 4: return r.d1;
    case 5: return r.dgsm;
    case 6: return r.dgsm_ub;
    case 7: return r.relmse;
    case 8: return r.p_star;
    default: return static_cast<double>(r.n_active);
  }
}

}  // namespace

std::string_view estimator_name(Estimator e) {
  switch (e) {
    case Estimator::PoinceLars: return "poince-lars";
    case Estimator::PoinceDerLars: return "poince-der-lars";
    case Estimator::PoinceDerAvg: return "poince-der-avg";
    case Estimator::PoinceMc: return "poince-mc";
    case Estimator::PoinceDerMc: return "poince-der-mc";
  }
  return "unknown";
}

Estimator parse_estimator(std::string_view name) {
  for (Estimator e : kAllEstimators) {
    if (estimator_name(e) == name) return e;
  }
  throw ConfigError("unknown estimator '" + std::string(name) + "'");
}

bool needs_gradient(Estimator e) {
  return e == Estimator::PoinceDerLars || e == Estimator::PoinceDerAvg || e == Estimator::PoinceDerMc;
}

Marginal parse_marginal_spec(const std::string& spec) {
  const std::vector<std::string> parts = split(spec, ':');
  if (parts.size() < 2 || parts.size() > 3) throw ConfigError("marginal spec must be family:params[:lower,upper]");
  std::vector<double> params;
  try {
    for (const std::string& p : split(parts[1], ',')) params.push_back(std::stod(p));
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    if (parts.size() == 3) {
      const std::vector<std::string> b = split(parts[2], ',');
      if (b.size() != 2) throw ConfigError("bounds must be lower,upper");
      lower = std::stod(b[0]);
      upper = std::stod(b[1]);
    }
    return Marginal(parse_family(parts[0]), params, lower, upper);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("bad marginal spec '" + spec + "': " + e.what());
  }
}

ExperimentConfig parse_config(const std::string& text, const std::string& base_dir) {
  ExperimentConfig cfg;
  try {
    const json doc = json::parse(text);
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    check_keys(doc,
               {"model", "data", "inputs", "estimators", "degree", "mc_degree", "sizes", "replications", "seed",
                "validation", "grid_n", "lhs_restarts", "output_dir"},
               "config");
    if (doc.contains("model") == doc.contains("data")) throw ConfigError("give exactly one of 'model' and 'data'");
    if (doc.contains("model")) cfg.model = doc.at("model").get<std::string>();
    if (doc.contains("data")) {
      const json& data = doc.at("data");
      check_keys(data, {"file", "output"}, "data");
      const std::filesystem::path file = data.at("file").get<std::string>();
      cfg.data_file = file.is_absolute() ? file.string() : (std::filesystem::path(base_dir) / file).string();
      cfg.data_output = get_or<std::string>(data, "output", "y");
    }
    if (doc.contains("inputs")) {
      for (const json& in : doc.at("inputs")) {
        check_keys(in, {"name", "family", "params", "lower", "upper"}, "inputs");
        cfg.names.push_back(in.at("name").get<std::string>());
        const double lo = parse_bound(in.value("lower", json()), -std::numeric_limits<double>::infinity());
        const double hi = parse_bound(in.value("upper", json()), std::numeric_limits<double>::infinity());
        cfg.marginals.emplace_back(parse_family(in.at("family").get<std::string>()),
                                   in.at("params").get<std::vector<double>>(), lo, hi);
      }
    }
    if (!cfg.data_file.empty() && cfg.names.empty()) throw ConfigError("data files need an 'inputs' list");
    for (const json& e : doc.at("estimators")) cfg.estimators.push_back(parse_estimator(e.get<std::string>()));
    if (cfg.estimators.empty()) throw ConfigError("estimator list is empty");
    if (doc.contains("degree")) {
      const json& deg = doc.at("degree");
      check_keys(deg, {"p", "p_min", "p_max", "q"}, "degree");
      if (deg.contains("p")) {
        if (deg.contains("p_min") || deg.contains("p_max")) throw ConfigError("give either p or p_min/p_max");
        cfg.p_min = cfg.p_max = deg.at("p").get<int>();
      } else {
        cfg.p_min = get_or(deg, "p_min", cfg.p_min);
        cfg.p_max = get_or(deg, "p_max", cfg.p_max);
      }
      cfg.q = get_or(deg, "q", cfg.q);
    }
    if (cfg.p_min < 1 || cfg.p_max < cfg.p_min) throw ConfigError("degrees must satisfy 1 <= p_min <= p_max");
    if (!(cfg.q > 0.0 && cfg.q <= 1.0)) throw ConfigError("q must lie in (0, 1]");
    cfg.mc_degree = get_or(doc, "mc_degree", cfg.mc_degree);
    if (cfg.mc_degree < 1) throw ConfigError("mc_degree must be at least 1");
    for (const json& n : doc.at("sizes")) cfg.sizes.push_back(n.get<Eigen::Index>());
    if (cfg.sizes.empty()) throw ConfigError("design size list is empty");
    for (Eigen::Index n : cfg.sizes) {
      if (n < 2) throw ConfigError("design sizes must be at least 2");
    }
    cfg.replications = get_or(doc, "replications", cfg.replications);
    if (cfg.replications < 1) throw ConfigError("replication count must be at least 1");
    cfg.seed = get_or<std::uint64_t>(doc, "seed", 0);
    cfg.validation_seed = cfg.seed + 1000003;
    if (doc.contains("validation")) {
      const json& val = doc.at("validation");
      check_keys(val, {"size", "seed"}, "validation");
      cfg.validation_size = get_or(val, "size", cfg.validation_size);
      cfg.validation_seed = get_or(val, "seed", cfg.validation_seed);
    }
    if (cfg.validation_size < 0) throw ConfigError("validation size must be non-negative");
    cfg.grid_n = get_or(doc, "grid_n", cfg.grid_n);
    cfg.lhs_restarts = get_or(doc, "lhs_restarts", cfg.lhs_restarts);
    if (cfg.grid_n < 10) throw ConfigError("grid_n must be at least 10");
    if (cfg.lhs_restarts < 1) throw ConfigError("lhs_restarts must be at least 1");
    cfg.output_dir = get_or<std::string>(doc, "output_dir", cfg.output_dir);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), std::filesystem::path(path).parent_path().string());
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config, int jobs) {
  Context ctx{config, nullptr, nullptr, {}, {}, {}, {}, {}, {}, false};
  ctx.gradients = std::any_of(config.estimators.begin(), config.estimators.end(), needs_gradient);
  std::vector<std::string> names = config.names;
  std::vector<Marginal> marginals = config.marginals;
  if (!config.model.empty()) {
    ctx.model = make_model(config.model);
    if (names.empty()) {
      names = ctx.model->names();
      marginals = ctx.model->marginals();
    } else if (static_cast<int>(names.size()) != ctx.model->dim()) {
      throw ConfigError("model '" + config.model + "' has " + std::to_string(ctx.model->dim()) + " inputs");
    }
  }
  if (config.data_file.empty() && !ctx.model) throw ConfigError("no model or data file given");
  if (!ctx.model) load_data(ctx);

  ctx.space = std::make_shared<const InputSpace>(names, marginals, std::max(config.p_max, config.mc_degree),
                                                 config.grid_n);
  if (ctx.model && config.validation_size > 0) {
    ctx.val_x = mc_sample(ctx.space->marginals(), config.validation_size, config.validation_seed).points;
    ctx.val_y = ctx.model->values(ctx.val_x);
  }

  std::vector<std::pair<Eigen::Index, int>> tasks;
  for (Eigen::Index n : config.sizes) {
    for (int rep = 0; rep < config.replications; ++rep) tasks.emplace_back(n, rep);
  }
  std::vector<std::vector<ResultRow>> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      try {
        results[t] = run_replication(ctx, tasks[t].first, tasks[t].second);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<ResultRow> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "estimator,input,N,replication,S1,Stot,D,Dtot,D1,dgsm,dgsm_ub,relmse,p_star,n_active\n";
  for (const ResultRow& r : rows) {
    out << estimator_name(r.estimator) << ',' << r.input << ',' << r.n << ',' << r.replication << ','
        << format_double(r.s1) << ',' << format_double(r.stot) << ',' << format_double(r.d) << ','
        << format_double(r.dtot) << ',' << format_double(r.d1) << ',' << format_double(r.dgsm) << ','
        << format_double(r.dgsm_ub) << ',' << format_double(r.relmse) << ',' << r.p_star << ',' << r.n_active
        << '\n';
  }
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("results file is empty");
  if (line != "estimator,input,N,replication,S1,Stot,D,Dtot,D1,dgsm,dgsm_ub,relmse,p_star,n_active") {
    throw std::invalid_argument("unexpected results header: " + line);
  }
  std::vector<ResultRow> rows;
  for (int lineno = 2; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 14) throw std::invalid_argument("results line " + std::to_string(lineno) + " has wrong arity");
    try {
      rows.push_back({parse_estimator(f[0]), f[1], std::stol(f[2]), std::stoi(f[3]), std::stod(f[4]), std::stod(f[5]),
                      std::stod(f[6]), std::stod(f[7]), std::stod(f[8]), std::stod(f[9]), std::stod(f[10]),
                      std::stod(f[11]), std::stoi(f[12]), std::stol(f[13])});
    } catch (const std::logic_error& e) {
      throw std::invalid_argument("results line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

BoxStats box_stats(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("no values to summarize");
  std::sort(v.begin(), v.end());
  auto quantile = [&](double p) {
    const double h = (static_cast<double>(v.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  BoxStats s;
  s.median = quantile(0.5);
  s.q1 = quantile(0.25);
  s.q3 = quantile(0.75);
  const double iqr = s.q3 - s.q1;
  s.whisker_low = *std::lower_bound(v.begin(), v.end(), s.q1 - 1.5 * iqr);
  s.whisker_high = *(std::upper_bound(v.begin(), v.end(), s.q3 + 1.5 * iqr) - 1);
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.std = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  return s;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("no results to summarize");
  std::vector<std::string> inputs;
  for (const ResultRow& r : rows) {
    if (std::find(inputs.begin(), inputs.end(), r.input) == inputs.end()) inputs.push_back(r.input);
  }
  auto input_pos = [&](const std::string& name) {
    return std::find(inputs.begin(), inputs.end(), name) - inputs.begin();
  };
  std::map<std::tuple<int, Eigen::Index, std::ptrdiff_t>, std::vector<const ResultRow*>> groups;
  for (const ResultRow& r : rows) groups[{static_cast<int>(r.estimator), r.n, input_pos(r.input)}].push_back(&r);

  std::vector<SummaryRow> out;
  for (const auto& [key, members] : groups) {
    const ResultRow& first = *members.front();
    for (std::size_t m = 0; m < std::size(metric_names); ++m) {
      std::vector<double> values;
      for (const ResultRow* r : members) {
        if (!std::isnan(metric(*r, m))) values.push_back(metric(*r, m));
      }
      SummaryRow row{first.estimator, first.input, first.n, metric_names[m], static_cast<Eigen::Index>(values.size()),
                     0, 0, 0, 0, 0, 0, 0};
      if (values.empty()) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.median = row.q1 = row.q3 = row.whisker_low = row.whisker_high = row.mean = row.std = nan;
      } else {
        const BoxStats s = box_stats(values);
        row.median = s.median;
        row.q1 = s.q1;
        row.q3 = s.q3;
        row.whisker_low = s.whisker_low;
        row.whisker_high = s.whisker_high;
        row.mean = s.mean;
        row.std = s.std;
      }
      out.push_back(row);
    }
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "estimator,input,N,metric,count,median,q1,q3,whisker_low,whisker_high,mean,std\n";
  for (const SummaryRow& r : rows) {
    out << estimator_name(r.estimator) << ',' << r.input << ',' << r.n << ',' << r.metric << ',' << r.count << ','
        << format_double(r.median) << ',' << format_double(r.q1) << ',' << format_double(r.q3) << ','
        << format_double(r.whisker_low) << ',' << format_double(r.whisker_high) << ',' << format_double(r.mean)
        << ',' << format_double(r.std) << '\n';
  }
}

}  // namespace poince

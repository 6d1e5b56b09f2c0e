#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "poince/experiment.hpp"
#include "poince/poincare1d.hpp"

namespace fs = std::filesystem;
using namespace poince;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

int run(const std::string& config_path, std::optional<std::uint64_t> seed, int jobs, const std::string& out_dir) {
  ExperimentConfig cfg = load_config(config_path);
  if (seed) cfg.seed = *seed;
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  const std::vector<ResultRow> rows = run_experiment(cfg, jobs);
  fs::create_directories(cfg.output_dir);
  const fs::path results = fs::path(cfg.output_dir) / "results.csv";
  const fs::path summary = fs::path(cfg.output_dir) / "summary.csv";
  {
    std::ofstream out = open_out(results);
    write_results_csv(out, rows);
  }
  {
    std::ofstream out = open_out(summary);
    write_summary_csv(out, summarize(rows));
  }
  std::cerr << "wrote " << rows.size() << " rows to " << results.string() << " and " << summary.string() << '\n';
  return 0;
}

int summarize_file(const std::string& path, const std::string& out_path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  const std::vector<SummaryRow> summary = summarize(read_results_csv(in));
  if (out_path.empty()) {
    write_summary_csv(std::cout, summary);
  } else {
    std::ofstream out = open_out(out_path);
    write_summary_csv(out, summary);
  }
  return 0;
}

int basis_dump(const std::string& spec, int order, int grid_n, int samples, const std::string& out_dir) {
  const InputSpace space({"x"}, {parse_marginal_spec(spec)}, order, grid_n);
  const PoincareBasis1D& basis = space.basis(0);
  std::cerr << "support [" << basis.lower() << ", " << basis.upper() << "], shift " << space.maps()[0].shift
            << ", scale " << space.maps()[0].scale << '\n';
  if (out_dir.empty()) {
    write_eigenvalues_csv(std::cout, basis);
    return 0;
  }
  fs::create_directories(out_dir);
  std::ofstream eig = open_out(fs::path(out_dir) / "eigenvalues.csv");
  write_eigenvalues_csv(eig, basis);
  std::ofstream values = open_out(fs::path(out_dir) / "basis.csv");
  write_basis_samples_csv(values, basis, samples);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poincare chaos expansions and global sensitivity analysis"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string out;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a replication study from a JSON config");
  run_cmd->add_option("config", config_path, "Experiment config")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--seed", seed, "Override the base seed");
  run_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", out, "Output directory (overrides the config)");

  std::string results_path;
  std::string summary_out;
  CLI::App* sum_cmd = app.add_subcommand("summarize", "Box-plot statistics of a results CSV");
  sum_cmd->add_option("results", results_path, "results.csv")->required()->check(CLI::ExistingFile);
  sum_cmd->add_option("--out", summary_out, "Summary CSV path (stdout when absent)");

  std::string spec;
  int order = 6;
  int grid_n = kDefaultGridSize;
  int samples = 201;
  std::string dump_out;
  CLI::App* basis_cmd = app.add_subcommand("basis", "One-dimensional Poincare bases");
  basis_cmd->require_subcommand(1);
  CLI::App* dump_cmd = basis_cmd->add_subcommand("dump", "Eigenvalues (and sampled eigenfunctions with --out)");
  dump_cmd->add_option("marginal", spec, "family:p1,p2[:lower,upper], e.g. gumbel:1013,558:500,3000")->required();
  dump_cmd->add_option("--order", order, "Highest eigenfunction order")->check(CLI::PositiveNumber);
  dump_cmd->add_option("--grid", grid_n, "FEM grid size")->check(CLI::Range(10, 1000000));
  dump_cmd->add_option("--samples", samples, "Points of the sampled eigenfunctions")->check(CLI::Range(2, 1000000));
  dump_cmd->add_option("--out", dump_out, "Directory for eigenvalues.csv and basis.csv");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return run(config_path, seed, jobs, out);
    if (*sum_cmd) return summarize_file(results_path, summary_out);
    if (*dump_cmd) return basis_dump(spec, order, grid_n, samples, dump_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

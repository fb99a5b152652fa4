#include <algorithm>
#include <atomic>
#include <iostream>
#include <mutex>
#include <set>
#include <thread>

#include <CLI11.hpp>

#include "dissim/cli.hpp"

namespace {

using namespace dissim;
namespace fs = std::filesystem;

struct Job {
  fs::path config_path;
  cli::RunConfig config;
  fs::path output_dir;
};

int run_command(const std::vector<std::string>& paths, int jobs) {
  // Validate every config before touching the filesystem.
  std::vector<Job> queue;
  const char* env = std::getenv(cli::kOutputEnv);
  const bool env_set = env && *env;
  try {
    for (const auto& p : paths) {
      Job job{p, cli::parse_run_config(cli::read_file(p), p), {}};
      job.output_dir = cli::resolve_output_dir(job.config.output_dir);
      if (env_set && paths.size() > 1) job.output_dir /= fs::path(p).stem();
      queue.push_back(std::move(job));
    }
  } catch (const cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitConfig;
  }
  std::set<fs::path> dirs;
  for (const auto& job : queue)
    if (!dirs.insert(fs::weakly_canonical(job.output_dir)).second) {
      std::cerr << "error: two configs write to " << job.output_dir << '\n';
      return cli::kExitConfig;
    }

  std::mutex log;
  std::vector<int> codes(queue.size(), cli::kExitOk);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < queue.size();) {
      const auto& job = queue[k];
      try {
        const auto outcome = cli::run(job.config, job.output_dir);
        codes[k] = outcome.exit_code;
        std::lock_guard lock(log);
        if (outcome.exit_code == cli::kExitOk)
          std::cout << job.config_path.string() << ": " << job.config.scenario << " -> " << job.output_dir.string() << '\n';
        else
          std::cerr << job.config_path.string() << ": partial output in " << job.output_dir.string() << ": "
                    << outcome.message << '\n';
      } catch (const std::exception& e) {
        codes[k] = cli::kExitFailure;
        std::lock_guard lock(log);
        std::cerr << job.config_path.string() << ": error: " << e.what() << '\n';
      }
    }
  };
  const int n = std::clamp(jobs, 1, static_cast<int>(queue.size()));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return *std::max_element(codes.begin(), codes.end());
}

int eliminate_command(const std::string& path) {
  cli::EliminateConfig cfg;
  try {
    cfg = cli::parse_eliminate_config(cli::read_file(path), path);
  } catch (const cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitConfig;
  }
  try {
    const auto report = cli::eliminate(cfg);
    const auto dir = cli::resolve_output_dir(cfg.output_dir);
    fs::create_directories(dir);
    std::ofstream(dir / "elimination.txt", std::ios::binary) << report.table();
    std::cout << report.table();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitFailure;
  }
  return cli::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Magnon-phonon Lindblad simulations with switchable dissipative Ising coupling"};
  app.require_subcommand(1);

  std::vector<std::string> run_configs;
  int jobs = 1;
  auto* run = app.add_subcommand("run", "run one or more scenario configs");
  run->add_option("configs", run_configs, "config files")->required();
  run->add_option("-j,--jobs", jobs, "configs to run concurrently")->check(CLI::PositiveNumber);

  app.add_subcommand("list", "list scenarios with their default parameters");

  std::string elim_config;
  auto* elim = app.add_subcommand("eliminate", "compare full and eliminated photon models");
  elim->add_option("config", elim_config, "elimination config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfig;
  }

  if (*run) return run_command(run_configs, jobs);
  if (*elim) return eliminate_command(elim_config);
  std::cout << cli::list_text();
  return cli::kExitOk;
}

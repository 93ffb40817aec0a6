#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trilat/bench.hpp"
#include "trilat/io.hpp"
#include "trilat/rng.hpp"
#include "trilat/verify.hpp"

namespace {

// exit codes: 0 success, 1 verification failure, 2 usage/parse error
constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct OutputTarget {
  std::ofstream file;
  std::ostream* stream = &std::cout;
  void open(const std::string& path) {
    if (path.empty()) {
      return;
    }
    file.open(path);
    if (!file) {
      throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    stream = &file;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closest-vector solvers for n-dimensional triangular lattices"};
  app.require_subcommand(1);

  // gen: write seeded uniform target vectors
  long long gen_n = 0;
  long long gen_count = 100;
  std::uint64_t gen_seed = 1;
  double gen_lo = -100.0;
  double gen_hi = 100.0;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen", "Generate uniform random target vectors");
  gen->add_option("--n", gen_n, "Vector dimension")->required()->check(CLI::PositiveNumber);
  gen->add_option("--trials,--count", gen_count, "Number of vectors")
      ->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--lo", gen_lo, "Lower bound of each component");
  gen->add_option("--hi", gen_hi, "Upper bound of each component");
  gen->add_option("--out", gen_out, "Output path (default stdout)");

  // solve: closest lattice point for every vector in a file
  std::string solve_input;
  std::string solve_algo = "lin";
  std::string solve_out;
  CLI::App* solve = app.add_subcommand("solve", "Solve CVP for each vector in a file");
  solve->add_option("input", solve_input, "Input vector file")->required();
  solve->add_option("--algo", solve_algo, "Algorithm: cv, qlin or lin");
  solve->add_option("--out", solve_out, "Output path (default stdout)");

  // bench: timing measurement
  std::string bench_algo;
  long long bench_n = 0;
  long long bench_trials = 10000;
  std::uint64_t bench_seed = 1;
  long long bench_warmup = 100;
  double bench_lo = -100.0;
  double bench_hi = 100.0;
  std::string bench_format = "csv";
  std::string bench_out;
  CLI::App* bench = app.add_subcommand("bench", "Time a solver over random targets");
  bench->add_option("--algo", bench_algo, "Algorithm: cv, qlin or lin")->required();
  bench->add_option("--n", bench_n, "Vector dimension")->required()->check(CLI::PositiveNumber);
  bench->add_option("--trials", bench_trials, "Timed solver calls")
      ->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_seed, "RNG seed");
  bench->add_option("--warmup", bench_warmup, "Untimed warmup calls")
      ->check(CLI::NonNegativeNumber);
  bench->add_option("--lo", bench_lo, "Lower bound of each component");
  bench->add_option("--hi", bench_hi, "Upper bound of each component");
  bench->add_option("--format", bench_format, "Report format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  bench->add_option("--out", bench_out, "Output path (default stdout)");

  // verify: solver cross-checks and invariants
  long long verify_n_max = 6;
  long long verify_trials = 1000;
  std::uint64_t verify_seed = 1;
  std::string verify_format = "text";
  std::string verify_out;
  CLI::App* verify = app.add_subcommand("verify", "Run oracle and invariant checks");
  verify->add_option("--n", verify_n_max, "Oracle stage dimension ceiling (<= 10)")
      ->check(CLI::Range(1, 10));
  verify->add_option("--trials", verify_trials, "Targets per dimension")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", verify_seed, "RNG seed");
  verify->add_option("--format", verify_format, "Report format: text, csv or json")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  verify->add_option("--out", verify_out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      OutputTarget out;
      out.open(gen_out);
      trilat::TargetGenerator source(gen_n, gen_seed, gen_lo, gen_hi);
      std::vector<Eigen::VectorXd> vectors;
      vectors.reserve(static_cast<std::size_t>(gen_count));
      for (long long i = 0; i < gen_count; ++i) {
        vectors.push_back(source.next());
      }
      trilat::write_vectors(*out.stream, vectors);
      return kExitOk;
    }
    if (solve->parsed()) {
      const trilat::Algo algo = trilat::parse_algo(solve_algo);
      OutputTarget out;
      out.open(solve_out);
      std::ifstream in(solve_input);
      if (!in) {
        throw std::runtime_error("cannot open '" + solve_input + "' for reading");
      }
      const std::size_t count = trilat::solve_stream(in, *out.stream, algo, solve_input);
      std::cerr << "solved " << count << " vectors\n";
      return kExitOk;
    }
    if (bench->parsed()) {
      const trilat::Algo algo = trilat::parse_algo(bench_algo);
      const trilat::BenchRecord rec = trilat::run_bench(
          algo, bench_n, bench_trials, bench_seed, bench_warmup, bench_lo, bench_hi);
      OutputTarget out;
      out.open(bench_out);
      const std::span<const trilat::BenchRecord> records(&rec, 1);
      if (bench_format == "json") {
        trilat::write_json(*out.stream, records);
      } else {
        trilat::write_csv(*out.stream, records);
      }
      return kExitOk;
    }
    if (verify->parsed()) {
      trilat::VerifyOptions options;
      options.n_max = verify_n_max;
      options.trials_per_n = verify_trials;
      options.seed = verify_seed;
      const trilat::VerifyReport report = trilat::run_verify(options);
      OutputTarget out;
      out.open(verify_out);
      if (verify_format == "json") {
        trilat::write_report_json(*out.stream, report);
      } else if (verify_format == "csv") {
        trilat::write_report_csv(*out.stream, report);
      } else {
        trilat::write_report_text(*out.stream, report);
      }
      return report.ok() ? kExitOk : kExitVerifyFailed;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

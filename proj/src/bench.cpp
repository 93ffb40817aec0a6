#include "trilat/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trilat/cvp.hpp"
#include "trilat/rng.hpp"

namespace trilat {

namespace {

template <typename T>
inline void do_not_optimize(const T& value) {
  asm volatile("" : : "g"(&value) : "memory");
}

double micros(std::chrono::steady_clock::duration d) {
  return std::chrono::duration<double, std::micro>(d).count();
}

}  // namespace

std::string_view algo_name(Algo algo) {
  switch (algo) {
    case Algo::cv:
      return "cv";
    case Algo::qlin:
      return "qlin";
    case Algo::lin:
      return "lin";
  }
  return "?";
}

Algo parse_algo(std::string_view name) {
  if (name == "cv") return Algo::cv;
  if (name == "qlin") return Algo::qlin;
  if (name == "lin") return Algo::lin;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) +
                              "' (expected cv, qlin or lin)");
}

BenchRecord run_bench(Algo algorithm, Index n, Index trials, std::uint64_t seed,
                      Index warmup, double lo, double hi) {
  if (trials < 1) {
    throw std::invalid_argument("run_bench: trials must be >= 1");
  }
  if (warmup < 0) {
    throw std::invalid_argument("run_bench: warmup must be >= 0");
  }
  const TriangularBasis<double> basis(n);
  const Eigen::MatrixXd targets = gen_targets(n, trials, seed, lo, hi);

  CvpWorkspace<double> ws;
  CvpSolution<double> sol;
  if (algorithm == Algo::cv) {
    ws.dense = materialize_dense(basis);  // setup, not part of the solve
  }
  const auto solve = [&](Index j) -> const CvpSolution<double>& {
    switch (algorithm) {
      case Algo::cv:
        return cv_baseline(basis, targets.col(j), ws, sol);
      case Algo::qlin:
        return qlin_cv(basis, targets.col(j), ws, sol);
      case Algo::lin:
      default:
        return lin_cv(basis, targets.col(j), ws, sol);
    }
  };

  for (Index i = 0; i < warmup; ++i) {
    do_not_optimize(solve(i % trials).point[0]);
  }

  std::vector<double> samples(static_cast<std::size_t>(trials));
  double sink = 0;
  const auto loop_start = std::chrono::steady_clock::now();
  for (Index j = 0; j < trials; ++j) {
    const auto c0 = std::chrono::steady_clock::now();
    const CvpSolution<double>& s = solve(j);
    const auto c1 = std::chrono::steady_clock::now();
    sink += s.point[0];
    samples[static_cast<std::size_t>(j)] = micros(c1 - c0);
  }
  const auto loop_end = std::chrono::steady_clock::now();
  do_not_optimize(sink);

  BenchRecord rec;
  rec.algorithm = algorithm;
  rec.n = n;
  rec.trials = trials;
  rec.seed = seed;
  rec.total_seconds = std::chrono::duration<double>(loop_end - loop_start).count();
  rec.mean_micros = rec.total_seconds * 1e6 / static_cast<double>(trials);
  const auto nth = [&](double q) {
    const auto pos = static_cast<std::ptrdiff_t>(q * static_cast<double>(trials - 1));
    std::nth_element(samples.begin(), samples.begin() + pos, samples.end());
    return samples[static_cast<std::size_t>(pos)];
  };
  rec.p50_micros = nth(0.50);
  rec.p99_micros = nth(0.99);
  return rec;
}

namespace {

std::string format_double(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace

void write_csv(std::ostream& os, std::span<const BenchRecord> records) {
  os << "schema,algorithm,n,trials,seed,total_seconds,mean_micros,p50_micros,"
        "p99_micros\n";
  for (const BenchRecord& r : records) {
    os << 1 << ',' << algo_name(r.algorithm) << ',' << r.n << ',' << r.trials << ','
       << r.seed << ',' << format_double(r.total_seconds, "%.9f") << ','
       << format_double(r.mean_micros, "%.6f") << ','
       << format_double(r.p50_micros, "%.6f") << ','
       << format_double(r.p99_micros, "%.6f") << '\n';
  }
}

void write_json(std::ostream& os, std::span<const BenchRecord> records) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const BenchRecord& r : records) {
    nlohmann::ordered_json obj;
    obj["schema"] = 1;
    obj["algorithm"] = algo_name(r.algorithm);
    obj["n"] = r.n;
    obj["trials"] = r.trials;
    obj["seed"] = r.seed;
    obj["total_seconds"] = r.total_seconds;
    obj["mean_micros"] = r.mean_micros;
    obj["p50_micros"] = r.p50_micros;
    obj["p99_micros"] = r.p99_micros;
    out.push_back(std::move(obj));
  }
  os << out.dump(2) << '\n';
}

}  // namespace trilat

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>

#include "trilat/basis.hpp"

namespace trilat {

enum class Algo { cv, qlin, lin };

std::string_view algo_name(Algo algo);
Algo parse_algo(std::string_view name);  // throws std::invalid_argument

/// One benchmark measurement. mean_micros is total_seconds / trials by
/// definition; p50/p99 come from per-call samples taken inside the same loop.
struct BenchRecord {
  Algo algorithm = Algo::lin;
  Index n = 0;
  Index trials = 0;
  std::uint64_t seed = 0;
  double total_seconds = 0;
  double mean_micros = 0;
  double p50_micros = 0;
  double p99_micros = 0;
};

/// Times `trials` solver calls over seeded uniform targets in [lo, hi]^n on
/// the monotonic clock. Target generation, warmup iterations and the dense
/// matrix setup of the baseline are excluded from the measurement; every
/// solution feeds a sink so the calls cannot be optimized away.
BenchRecord run_bench(Algo algorithm, Index n, Index trials, std::uint64_t seed,
                      Index warmup, double lo = -100.0, double hi = 100.0);

/// schema,algorithm,n,trials,seed,total_seconds,mean_micros,p50_micros,p99_micros
void write_csv(std::ostream& os, std::span<const BenchRecord> records);
void write_json(std::ostream& os, std::span<const BenchRecord> records);

}  // namespace trilat

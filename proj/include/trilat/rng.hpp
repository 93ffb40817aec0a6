#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <stdexcept>

#include "trilat/basis.hpp"

namespace trilat {

/// One splitmix64 step; used to derive independent child seeds from a root
/// seed so parallel stages never share a stream.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  std::uint64_t state = root + 0x9e3779b97f4a7c15ULL * (stream + 1);
  return splitmix64(state);
}

/// Deterministic stream of uniform target vectors. The engine is mt19937_64
/// (bit-reproducible across standard libraries); doubles are produced by the
/// explicit 53-bit mapping below rather than a distribution object, so the
/// stream is identical everywhere for a given seed.
class TargetGenerator {
 public:
  TargetGenerator(Index n, std::uint64_t seed, double lo = -100.0, double hi = 100.0)
      : eng_(seed), n_(n), lo_(lo), hi_(hi) {
    if (n < 1) {
      throw std::invalid_argument("TargetGenerator: dimension must be >= 1");
    }
    if (!(lo < hi)) {
      throw std::invalid_argument("TargetGenerator: need lo < hi");
    }
  }

  Index dim() const { return n_; }

  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  void fill(Eigen::Ref<Eigen::VectorXd> y) {
    for (Index i = 0; i < y.size(); ++i) {
      y[i] = lo_ + uniform01() * (hi_ - lo_);
    }
  }

  Eigen::VectorXd next() {
    Eigen::VectorXd y(n_);
    fill(y);
    return y;
  }

 private:
  std::mt19937_64 eng_;
  Index n_;
  double lo_;
  double hi_;
};

/// count targets as columns of an n x count matrix.
inline Eigen::MatrixXd gen_targets(Index n, Index count, std::uint64_t seed,
                                   double lo = -100.0, double hi = 100.0) {
  if (count < 1) {
    throw std::invalid_argument("gen_targets: count must be >= 1");
  }
  TargetGenerator gen(n, seed, lo, hi);
  Eigen::MatrixXd targets(n, count);
  for (Index j = 0; j < count; ++j) {
    gen.fill(targets.col(j));
  }
  return targets;
}

}  // namespace trilat

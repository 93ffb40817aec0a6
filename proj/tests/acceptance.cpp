// Acceptance suite: end-to-end checks with pinned tolerances, one line of
// output per criterion. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "trilat/bench.hpp"
#include "trilat/cvp.hpp"
#include "trilat/oracle.hpp"
#include "trilat/rng.hpp"
#include "trilat/selection.hpp"
#include "trilat/verify.hpp"

using trilat::Algo;
using trilat::BenchRecord;
using trilat::CvpSolution;
using trilat::CvpWorkspace;
using trilat::Index;
using trilat::TriangularBasis;

namespace {

constexpr std::uint64_t kSeed = 20240917;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// 1. Every solver reaches the brute-force optimum for n = 1..6, 1000 targets
//    each, within 1e-9 relative; total runtime under 60 s.
Outcome oracle_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  long long checked = 0;
  long long failed = 0;
  for (Index n = 1; n <= 6; ++n) {
    const TriangularBasis<double> basis(n);
    const Eigen::MatrixXd targets =
        trilat::gen_targets(n, 1000, trilat::derive_seed(kSeed, 10 + n));
    const trilat::StageResult stage = trilat::check_oracle_equivalence(basis, targets);
    checked += stage.pass + stage.fail;
    failed += stage.fail;
  }
  const double elapsed = seconds_since(t0);
  return {failed == 0 && elapsed < 60.0,
          fmt("%lld targets, %lld mismatches, %.1f s", checked, failed, elapsed)};
}

// 2. cv, qlin and lin emit identical coefficients on 10,000 uniform targets
//    for each n in {128, 256, 512}; runtime under 5 minutes.
Outcome triple_agreement() {
  const auto t0 = std::chrono::steady_clock::now();
  long long checked = 0;
  long long mismatches = 0;
  for (const Index n : {Index(128), Index(256), Index(512)}) {
    const TriangularBasis<double> basis(n);
    const Eigen::MatrixXd targets =
        trilat::gen_targets(n, 10000, trilat::derive_seed(kSeed, 20 + n));
    CvpWorkspace<double> ws;
    CvpSolution<double> a;
    CvpSolution<double> b;
    CvpSolution<double> c;
    for (Index j = 0; j < targets.cols(); ++j) {
      trilat::cv_baseline(basis, targets.col(j), ws, a);
      trilat::qlin_cv(basis, targets.col(j), ws, b);
      trilat::lin_cv(basis, targets.col(j), ws, c);
      ++checked;
      if (a.coeffs != b.coeffs || b.coeffs != c.coeffs) {
        ++mismatches;
      }
    }
  }
  const double elapsed = seconds_since(t0);
  return {mismatches == 0 && elapsed < 300.0,
          fmt("%lld targets, %lld coefficient mismatches, %.1f s", checked, mismatches,
              elapsed)};
}

// 3. Gram matrix within 1e-10 of [1 diag, 1/2 off-diag] for n in {2,3,64,512};
//    leading alpha/beta constants match their closed forms within 1e-15.
Outcome basis_correctness() {
  double worst_gram = 0.0;
  for (const Index n : {Index(2), Index(3), Index(64), Index(512)}) {
    const Eigen::MatrixXd b = materialize_dense(TriangularBasis<double>(n));
    Eigen::MatrixXd gram = Eigen::MatrixXd::Constant(n, n, 0.5);
    gram.diagonal().setOnes();
    worst_gram = std::max(worst_gram, (b.transpose() * b - gram).cwiseAbs().maxCoeff());
  }
  const TriangularBasis<double> basis(3);
  double worst_const = 0.0;
  const double expected[6] = {1.0,
                              std::sqrt(3.0) / 2.0,
                              std::sqrt(6.0) / 3.0,
                              0.5,
                              std::sqrt(3.0) / 6.0,
                              std::sqrt(6.0) / 12.0};
  for (int k = 0; k < 3; ++k) {
    worst_const = std::max(worst_const, std::abs(basis.alpha()[k] - expected[k]));
    worst_const = std::max(worst_const, std::abs(basis.beta()[k] - expected[k + 3]));
  }
  return {worst_gram <= 1e-10 && worst_const <= 1e-15,
          fmt("max Gram deviation %.2e, max constant deviation %.2e", worst_gram,
              worst_const)};
}

// 4. tri_to_cart(cart_to_tri(y)) at n = 512 over 1000 random targets: max
//    relative error below 1e-8.
Outcome transform_roundtrip() {
  const TriangularBasis<double> basis(512);
  const Eigen::MatrixXd targets =
      trilat::gen_targets(512, 1000, trilat::derive_seed(kSeed, 40));
  double worst = 0.0;
  for (Index j = 0; j < targets.cols(); ++j) {
    const Eigen::VectorXd y = targets.col(j);
    const Eigen::VectorXd back = tri_to_cart(basis, cart_to_tri(basis, y));
    worst = std::max(worst, (back - y).norm() / y.norm());
  }
  return {worst < 1e-8, fmt("max relative roundtrip error %.2e", worst)};
}

// 5. Scaling shape with 10,000 trials per point:
//    (a) cv 512/128 in [8, 32]   (b) qlin 512/128 in [2.5, 8]
//    (c) cv/qlin at 512 >= 4     (d) lin at 512 <= 1.5 x qlin.
Outcome scaling_shape() {
  const Index trials = 10000;
  const Index warmup = 200;
  const BenchRecord cv128 = trilat::run_bench(Algo::cv, 128, trials, kSeed, warmup);
  const BenchRecord cv512 = trilat::run_bench(Algo::cv, 512, trials, kSeed, warmup);
  const BenchRecord qlin128 = trilat::run_bench(Algo::qlin, 128, trials, kSeed, warmup);
  const BenchRecord qlin512 = trilat::run_bench(Algo::qlin, 512, trials, kSeed, warmup);
  const BenchRecord lin512 = trilat::run_bench(Algo::lin, 512, trials, kSeed, warmup);
  const double quad_ratio = cv512.mean_micros / cv128.mean_micros;
  const double qlin_ratio = qlin512.mean_micros / qlin128.mean_micros;
  const double speedup = cv512.mean_micros / qlin512.mean_micros;
  const double lin_vs_qlin = lin512.mean_micros / qlin512.mean_micros;
  const bool pass = quad_ratio >= 8.0 && quad_ratio <= 32.0 && qlin_ratio >= 2.5 &&
                    qlin_ratio <= 8.0 && speedup >= 4.0 && lin_vs_qlin <= 1.5;
  return {pass,
          fmt("cv 512/128 = %.1f (want [8,32]); qlin 512/128 = %.2f (want [2.5,8]); "
              "cv/qlin@512 = %.1f (want >= 4); lin/qlin@512 = %.2f (want <= 1.5)",
              quad_ratio, qlin_ratio, speedup, lin_vs_qlin)};
}

// 6. Convexity, two-candidate, popcount, idempotence and lattice-membership
//    hold on 10,000+ randomized instances spanning n = 1..64, including
//    duplicated fractional parts and integral targets.
Outcome property_suite() {
  const trilat::SolverFn lin = [](const TriangularBasis<double>& basis,
                                  const Eigen::VectorXd& y) {
    return trilat::lin_cv(basis, y);
  };
  long long instances = 0;
  long long failures = 0;
  for (Index n = 1; n <= 64; ++n) {
    const TriangularBasis<double> basis(n);
    const Eigen::MatrixXd targets =
        trilat::mixed_targets(basis, 157, trilat::derive_seed(kSeed, 60 + n));
    instances += targets.cols();
    failures += trilat::check_convexity(basis, targets).fail;
    failures += trilat::check_two_candidate(basis, targets).fail;
    failures += trilat::check_popcount(basis, targets, lin).fail;
    failures += trilat::check_idempotence(basis, targets, lin).fail;
    failures += trilat::check_lattice_membership(basis, targets, lin).fail;
  }
  return {failures == 0 && instances >= 10000,
          fmt("%lld instances, %lld property failures", instances, failures)};
}

// 7. Selection agrees with a full-sort oracle at the requested ranks on 1000
//    instances at n = 1000, duplicates included.
Outcome selection_correctness() {
  std::mt19937_64 eng(trilat::derive_seed(kSeed, 70));
  const Index n = 1000;
  long long failures = 0;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::uniform_int_distribution<int> quarter(0, 3);
  std::uniform_int_distribution<Index> pick(1, n);
  for (int instance = 0; instance < 1000; ++instance) {
    Eigen::VectorXd r(n);
    const bool duplicates = instance % 2 == 1;
    for (Index i = 0; i < n; ++i) {
      r[i] = duplicates ? static_cast<double>(quarter(eng)) / 4.0 : uniform(eng);
    }
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), Index(0));
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      return r[a] > r[b] || (r[a] == r[b] && a < b);
    });
    const Index k_hat = static_cast<Index>(std::floor(r.sum()));
    const Index ranks[4] = {Index(1), std::max<Index>(k_hat, 1),
                            std::min<Index>(k_hat + 1, n), pick(eng)};
    const auto stats = trilat::select_order_stats(
        r, std::span<const Index>(ranks, 4));
    for (const auto& [rank, stat] : stats) {
      const Index expected = order[static_cast<std::size_t>(rank - 1)];
      if (stat.arg != expected || stat.value != r[expected]) {
        ++failures;
      }
    }
  }
  return {failures == 0, fmt("1000 instances at n = 1000, %lld rank mismatches",
                             failures)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* label;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"oracle exactness (n <= 6)", oracle_exactness},
      {"triple agreement at n in {128, 256, 512}", triple_agreement},
      {"basis correctness", basis_correctness},
      {"transform roundtrip at n = 512", transform_roundtrip},
      {"scaling shape", scaling_shape},
      {"property suite (n <= 64)", property_suite},
      {"selection correctness", selection_correctness},
  };
  int failures = 0;
  int id = 0;
  for (const Criterion& criterion : criteria) {
    ++id;
    const Outcome outcome = criterion.run();
    std::printf("[%s] criterion %d: %s — %s\n", outcome.pass ? "PASS" : "FAIL", id,
                criterion.label, outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) {
      ++failures;
    }
  }
  return failures;
}

#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "trilat/basis.hpp"
#include "trilat/cvp.hpp"

namespace trilat {

using SolverFn = std::function<CvpSolution<double>(const TriangularBasis<double>&,
                                                   const Eigen::VectorXd&)>;

struct StageResult {
  std::string property;
  long long pass = 0;
  long long fail = 0;
};

struct VerifyReport {
  std::vector<StageResult> stages;
  bool ok() const;
  long long total_checks() const;
};

struct VerifyOptions {
  Index n_max = 6;  // oracle stage ceiling; must be <= 10
  long long trials_per_n = 1000;
  std::uint64_t seed = 1;
  double lo = -100.0;
  double hi = 100.0;
};

/// Runs the oracle-equivalence stage (n <= min(n_max, 6)), the cross-algorithm
/// agreement stage (n up to 512) and the invariant suites over seeded random
/// and adversarial targets. Failures are report content, not exceptions.
VerifyReport run_verify(const VerifyOptions& options);

void write_report_text(std::ostream& os, const VerifyReport& report);
void write_report_json(std::ostream& os, const VerifyReport& report);
void write_report_csv(std::ostream& os, const VerifyReport& report);

// Individual property checkers over a column-per-target matrix. Exposed so
// tests can aim them at deliberately broken solvers.
StageResult check_oracle_equivalence(const TriangularBasis<double>& basis,
                                     const Eigen::MatrixXd& targets, int window = 2);
StageResult check_triple_agreement(const TriangularBasis<double>& basis,
                                   const Eigen::MatrixXd& targets);
StageResult check_convexity(const TriangularBasis<double>& basis,
                            const Eigen::MatrixXd& targets);
StageResult check_two_candidate(const TriangularBasis<double>& basis,
                                const Eigen::MatrixXd& targets);
StageResult check_popcount(const TriangularBasis<double>& basis,
                           const Eigen::MatrixXd& targets, const SolverFn& solver);
StageResult check_idempotence(const TriangularBasis<double>& basis,
                              const Eigen::MatrixXd& targets, const SolverFn& solver);
StageResult check_lattice_membership(const TriangularBasis<double>& basis,
                                     const Eigen::MatrixXd& targets,
                                     const SolverFn& solver);
StageResult check_transform_roundtrip(const TriangularBasis<double>& basis,
                                      const Eigen::MatrixXd& targets);

/// Target mix for the invariant suites: uniform vectors plus adversarial
/// cases (exact lattice points, duplicated fractional parts, half-integer
/// lattice coordinates near Voronoi boundaries).
Eigen::MatrixXd mixed_targets(const TriangularBasis<double>& basis, Index count,
                              std::uint64_t seed, double lo = -100.0,
                              double hi = 100.0);

}  // namespace trilat

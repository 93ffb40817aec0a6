#include "trilat/verify.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include <nlohmann/json.hpp>

#include "trilat/oracle.hpp"
#include "trilat/rng.hpp"

namespace trilat {

bool VerifyReport::ok() const {
  for (const StageResult& s : stages) {
    if (s.fail > 0) {
      return false;
    }
  }
  return true;
}

long long VerifyReport::total_checks() const {
  long long total = 0;
  for (const StageResult& s : stages) {
    total += s.pass + s.fail;
  }
  return total;
}

namespace {

double dist_sq(const Eigen::VectorXd& y, const Eigen::VectorXd& point) {
  return (y - point).squaredNorm();
}

bool close_rel(double value, double reference, double tol) {
  return std::abs(value - reference) <= tol * std::max(1.0, std::abs(reference));
}

}  // namespace

StageResult check_oracle_equivalence(const TriangularBasis<double>& basis,
                                     const Eigen::MatrixXd& targets, int window) {
  StageResult result{"oracle-equivalence", 0, 0};
  CvpWorkspace<double> ws;
  CvpSolution<double> sol;
  for (Index j = 0; j < targets.cols(); ++j) {
    const Eigen::VectorXd y = targets.col(j);
    const OracleResult<double> oracle = brute_force_cvp(basis, y, window);
    bool good = true;
    cv_baseline(basis, y, ws, sol);
    good = good && close_rel(dist_sq(y, sol.point), oracle.best_dist_sq, 1e-9);
    qlin_cv(basis, y, ws, sol);
    good = good && close_rel(dist_sq(y, sol.point), oracle.best_dist_sq, 1e-9);
    lin_cv(basis, y, ws, sol);
    good = good && close_rel(dist_sq(y, sol.point), oracle.best_dist_sq, 1e-9);
    (good ? result.pass : result.fail) += 1;
  }
  return result;
}

StageResult check_triple_agreement(const TriangularBasis<double>& basis,
                                   const Eigen::MatrixXd& targets) {
  StageResult result{"triple-agreement", 0, 0};
  CvpWorkspace<double> ws;
  CvpSolution<double> a;
  CvpSolution<double> b;
  CvpSolution<double> c;
  for (Index j = 0; j < targets.cols(); ++j) {
    const Eigen::VectorXd y = targets.col(j);
    cv_baseline(basis, y, ws, a);
    qlin_cv(basis, y, ws, b);
    lin_cv(basis, y, ws, c);
    bool good = a.coeffs == b.coeffs && b.coeffs == c.coeffs;
    if (!good) {
      // distinct coeffs are only admissible on an exact tie, at equal distance
      const double da = dist_sq(y, a.point);
      const double db = dist_sq(y, b.point);
      const double dc = dist_sq(y, c.point);
      good = b.coeffs == c.coeffs && close_rel(da, db, 1e-9) && close_rel(db, dc, 1e-9);
    }
    (good ? result.pass : result.fail) += 1;
  }
  return result;
}

StageResult check_convexity(const TriangularBasis<double>& basis,
                            const Eigen::MatrixXd& targets) {
  StageResult result{"convexity", 0, 0};
  CvpWorkspace<double> ws;
  CvpSolution<double> sol;
  for (Index j = 0; j < targets.cols(); ++j) {
    const CandidateProfile<double> profile = candidate_profile(basis, targets.col(j));
    lin_cv(basis, targets.col(j), ws, sol);
    bool good = profile.delta2.size() == 0 || profile.delta2.minCoeff() > 0.0;
    good = good && profile.d[sol.k] <= profile.d.minCoeff() + 1e-9;
    (good ? result.pass : result.fail) += 1;
  }
  return result;
}

StageResult check_two_candidate(const TriangularBasis<double>& basis,
                                const Eigen::MatrixXd& targets) {
  StageResult result{"two-candidate", 0, 0};
  CvpWorkspace<double> ws;
  CvpSolution<double> sol;
  const Index n = basis.dim();
  for (Index j = 0; j < targets.cols(); ++j) {
    lin_cv(basis, targets.col(j), ws, sol);
    const FracDecomposition<double> frac = decompose(cart_to_tri(basis, targets.col(j)));
    std::vector<Index> order;
    detail::sorted_indices_desc(frac.r, order);
    const double delta_1 =
        detail::first_difference(Index(1), frac.r_sum, frac.r[order.front()]);
    const double delta_n = detail::first_difference(n, frac.r_sum, frac.r[order.back()]);
    bool good = true;
    if (delta_1 < 0.0 && delta_n >= 0.0) {  // interior case
      const Index k_hat =
          std::min(static_cast<Index>(std::floor(frac.r_sum)), n - 1);
      good = sol.k == k_hat || sol.k == k_hat + 1;
    }
    (good ? result.pass : result.fail) += 1;
  }
  return result;
}

StageResult check_popcount(const TriangularBasis<double>& basis,
                           const Eigen::MatrixXd& targets, const SolverFn& solver) {
  StageResult result{"popcount", 0, 0};
  for (Index j = 0; j < targets.cols(); ++j) {
    const CvpSolution<double> sol = solver(basis, targets.col(j));
    const FracDecomposition<double> frac = decompose(cart_to_tri(basis, targets.col(j)));
    Index ones = 0;
    bool binary = true;
    for (Index i = 0; i < basis.dim(); ++i) {
      const std::int64_t z = sol.coeffs[i] - frac.w[i];
      if (z == 1) {
        ++ones;
      } else if (z != 0) {
        binary = false;
      }
    }
    const bool good = binary && ones == sol.k;
    (good ? result.pass : result.fail) += 1;
  }
  return result;
}

StageResult check_idempotence(const TriangularBasis<double>& basis,
                              const Eigen::MatrixXd& targets, const SolverFn& solver) {
  StageResult result{"idempotence", 0, 0};
  for (Index j = 0; j < targets.cols(); ++j) {
    const CvpSolution<double> first = solver(basis, targets.col(j));
    const CvpSolution<double> second = solver(basis, first.point);
    const bool good = first.coeffs == second.coeffs;
    (good ? result.pass : result.fail) += 1;
  }
  return result;
}

StageResult check_lattice_membership(const TriangularBasis<double>& basis,
                                     const Eigen::MatrixXd& targets,
                                     const SolverFn& solver) {
  StageResult result{"lattice-membership", 0, 0};
  for (Index j = 0; j < targets.cols(); ++j) {
    const CvpSolution<double> sol = solver(basis, targets.col(j));
    const Eigen::VectorXd x = cart_to_tri(basis, sol.point);
    const double dev = (x - sol.coeffs.cast<double>()).cwiseAbs().maxCoeff();
    (dev < 1e-6 ? result.pass : result.fail) += 1;
  }
  return result;
}

StageResult check_transform_roundtrip(const TriangularBasis<double>& basis,
                                      const Eigen::MatrixXd& targets) {
  StageResult result{"transform-roundtrip", 0, 0};
  for (Index j = 0; j < targets.cols(); ++j) {
    const Eigen::VectorXd y = targets.col(j);
    const Eigen::VectorXd back = tri_to_cart(basis, cart_to_tri(basis, y));
    const double rel = (back - y).norm() / std::max(y.norm(), 1e-30);
    (rel < 1e-8 ? result.pass : result.fail) += 1;
  }
  return result;
}

Eigen::MatrixXd mixed_targets(const TriangularBasis<double>& basis, Index count,
                              std::uint64_t seed, double lo, double hi) {
  const Index n = basis.dim();
  Eigen::MatrixXd targets(n, count);
  TargetGenerator uniform(n, derive_seed(seed, 0), lo, hi);
  std::mt19937_64 eng(derive_seed(seed, 1));
  std::uniform_int_distribution<std::int64_t> coeff(-25, 25);
  std::uniform_int_distribution<int> quant(0, 7);
  Eigen::VectorXd x(n);
  for (Index j = 0; j < count; ++j) {
    switch (j % 5) {
      case 0:
      case 1:
      case 2:
        uniform.fill(targets.col(j));
        break;
      case 3:  // exact lattice points and half-integer boundary cases
        for (Index i = 0; i < n; ++i) {
          x[i] = static_cast<double>(coeff(eng)) + (j % 10 == 3 ? 0.0 : 0.5);
        }
        targets.col(j) = tri_to_cart(basis, x);
        break;
      case 4:  // duplicated fractional parts from an eighth-grid
      default:
        for (Index i = 0; i < n; ++i) {
          x[i] = static_cast<double>(coeff(eng)) + static_cast<double>(quant(eng)) / 8.0;
        }
        targets.col(j) = tri_to_cart(basis, x);
        break;
    }
  }
  return targets;
}

namespace {

void accumulate(VerifyReport& report, const std::string& property,
                const StageResult& result) {
  for (StageResult& s : report.stages) {
    if (s.property == property) {
      s.pass += result.pass;
      s.fail += result.fail;
      return;
    }
  }
  report.stages.push_back(StageResult{property, result.pass, result.fail});
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& options) {
  if (options.n_max < 1 || options.n_max > 10) {
    throw std::invalid_argument("run_verify: n_max must be in [1, 10]");
  }
  if (options.trials_per_n < 1) {
    throw std::invalid_argument("run_verify: trials_per_n must be >= 1");
  }
  VerifyReport report;
  const SolverFn lin = [](const TriangularBasis<double>& basis,
                          const Eigen::VectorXd& y) { return lin_cv(basis, y); };

  const Index oracle_max = std::min<Index>(options.n_max, 6);
  for (Index n = 1; n <= oracle_max; ++n) {
    const TriangularBasis<double> basis(n);
    const Eigen::MatrixXd targets = gen_targets(
        n, options.trials_per_n, derive_seed(options.seed, 100 + static_cast<std::uint64_t>(n)),
        options.lo, options.hi);
    accumulate(report, "oracle-equivalence", check_oracle_equivalence(basis, targets));
  }

  for (const Index n : {Index(1), Index(2), Index(3), Index(4), Index(6), Index(8),
                        Index(16), Index(32), Index(64), Index(128), Index(256),
                        Index(512)}) {
    const TriangularBasis<double> basis(n);
    const Eigen::MatrixXd targets = mixed_targets(
        basis, options.trials_per_n, derive_seed(options.seed, 200 + static_cast<std::uint64_t>(n)),
        options.lo, options.hi);
    accumulate(report, "triple-agreement", check_triple_agreement(basis, targets));
  }

  for (const Index n : {Index(1), Index(2), Index(3), Index(5), Index(8), Index(16),
                        Index(32), Index(64)}) {
    const TriangularBasis<double> basis(n);
    const Eigen::MatrixXd targets = mixed_targets(
        basis, options.trials_per_n, derive_seed(options.seed, 300 + static_cast<std::uint64_t>(n)),
        options.lo, options.hi);
    accumulate(report, "convexity", check_convexity(basis, targets));
    accumulate(report, "two-candidate", check_two_candidate(basis, targets));
    accumulate(report, "popcount", check_popcount(basis, targets, lin));
    accumulate(report, "idempotence", check_idempotence(basis, targets, lin));
    accumulate(report, "lattice-membership",
               check_lattice_membership(basis, targets, lin));
    accumulate(report, "transform-roundtrip",
               check_transform_roundtrip(basis, targets));
  }
  return report;
}

void write_report_text(std::ostream& os, const VerifyReport& report) {
  os << "property                  pass      fail\n";
  char buf[96];
  for (const StageResult& s : report.stages) {
    std::snprintf(buf, sizeof(buf), "%-22s %8lld  %8lld\n", s.property.c_str(), s.pass,
                  s.fail);
    os << buf;
  }
  os << "result: " << (report.ok() ? "PASS" : "FAIL") << " (" << report.total_checks()
     << " checks)\n";
}

void write_report_json(std::ostream& os, const VerifyReport& report) {
  nlohmann::ordered_json out;
  out["schema"] = 1;
  out["ok"] = report.ok();
  out["total_checks"] = report.total_checks();
  nlohmann::ordered_json stages = nlohmann::ordered_json::array();
  for (const StageResult& s : report.stages) {
    nlohmann::ordered_json stage;
    stage["property"] = s.property;
    stage["pass"] = s.pass;
    stage["fail"] = s.fail;
    stages.push_back(std::move(stage));
  }
  out["properties"] = std::move(stages);
  os << out.dump(2) << '\n';
}

void write_report_csv(std::ostream& os, const VerifyReport& report) {
  os << "schema,property,pass,fail\n";
  for (const StageResult& s : report.stages) {
    os << 1 << ',' << s.property << ',' << s.pass << ',' << s.fail << '\n';
  }
}

}  // namespace trilat

#pragma once

#include <functional>
#include <vector>

#include "witnesskit/matrix.hpp"

namespace witnesskit {

/// Thrown when a semidefinite program cannot be solved to tolerance.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One linear equality row Σ_k ⟨A_{l,k}, X_k⟩ = b_l, stored sparsely over
/// the variable blocks it touches.
struct SdpConstraint {
  std::vector<std::pair<int, HermitianMatrix>> terms;
  double rhs = 0.0;
};

/// Linear SDP over Hermitian PSD blocks:
///   maximize  Σ_k ⟨C_k, X_k⟩   (real trace inner product)
///   subject to Σ_k ⟨A_{l,k}, X_k⟩ = b_l  for every row l,  X_k ⪰ 0.
/// Callers are expected to pose strictly feasible problems (slack
/// formulations); the solver never certifies infeasibility.
struct SdpProblem {
  std::vector<int> block_dims;
  std::vector<HermitianMatrix> objective;
  std::vector<SdpConstraint> constraints;

  static SdpProblem with_blocks(std::vector<int> dims);
  int num_blocks() const { return static_cast<int>(block_dims.size()); }
  void set_objective(int block, HermitianMatrix c);
  /// Convenience for rows touching a single block.
  void add_constraint(int block, HermitianMatrix a, double rhs);
  void add_constraint(SdpConstraint c);
};

enum class SdpStatus { optimal, max_iterations, numerically_degenerate };

struct SdpSolution {
  SdpStatus status = SdpStatus::numerically_degenerate;
  std::vector<HermitianMatrix> primal;  // X_k
  std::vector<double> dual;             // y, indexed by original constraint row
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;           // dual − primal
  double relative_gap = 0.0;  // |gap| / (1 + max |objective|)
  double constraint_residual = 0.0;
  double min_primal_eigenvalue = 0.0;
  int iterations = 0;
};

struct SdpVerifyReport {
  double constraint_residual = 0.0;
  double min_primal_eigenvalue = 0.0;
  double min_dual_slack_eigenvalue = 0.0;  // of Σ_l y_l A_l − C
  double weak_duality_margin = 0.0;        // dual − primal + gap tolerance slack
  bool ok = false;
};

/// Primal-dual interior point with Mehrotra predictor-corrector and a
/// dense normal-equations solve. Deterministic for identical input.
SdpSolution solve(const SdpProblem& p);

/// Recomputes residuals, PSD margins, and the weak-duality check from the
/// problem data alone, independent of solver internals.
SdpVerifyReport verify(const SdpProblem& p, const SdpSolution& s);

/// Diagnostic hook invoked after every completed solve (testing aid;
/// not thread-safe against concurrent solves).
void set_solve_observer(std::function<void(const SdpProblem&, const SdpSolution&)> cb);

}  // namespace witnesskit

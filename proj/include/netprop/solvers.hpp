#pragma once

#include <cstdint>
#include <vector>

#include "netprop/operators.hpp"

namespace netprop {

// n x c real matrix, row-major. An initial label matrix Y carries +1/-1 for
// labeled (node, class) pairs and 0 for held-out nodes; an estimated matrix F
// is unconstrained.
struct LabelMatrix {
  index_t n = 0;
  index_t c = 0;
  std::vector<double> values;  // size n*c

  LabelMatrix() = default;
  LabelMatrix(index_t n_, index_t c_) : n(n_), c(c_), values(static_cast<std::size_t>(n_) * c_, 0.0) {}

  double& at(index_t i, index_t j) { return values[static_cast<std::size_t>(i) * c + j]; }
  double at(index_t i, index_t j) const { return values[static_cast<std::size_t>(i) * c + j]; }
};

struct SolverParams {
  double alpha = 0.85;   // propagation mixing weight, open interval (0,1)
  double gamma = 1.0;    // regularization weight, > 0
  double tol = 1e-9;     // max-abs entrywise change between iterates
  int max_iter = 10000;

  // Throws std::invalid_argument when a field is out of range. alpha and
  // gamma are independent knobs; the pairing alpha = 1/(1+gamma) is a
  // property checked by tests, not a constraint.
  void validate() const;
};

struct SolveResult {
  LabelMatrix F;
  int iterations = 0;     // 0 for closed-form solves
  double residual = 0.0;  // final update norm (iterative) or worst relative residual (closed form)
  bool converged = true;
};

// F <- alpha*S*F + (1-alpha)*Y from F = Y, iterated until the max-abs
// entrywise change drops to p.tol or p.max_iter is hit. Non-convergence is
// reported through the result (converged=false, last iterate kept), never as
// a silent answer. S must be the random-walk or symmetric-normalized
// operator.
SolveResult propagate_iterative(const PropagationOperator& S, const LabelMatrix& Y,
                                const SolverParams& p);

// Solves (I - alpha*S) X = (1-alpha) Y columnwise: conjugate gradients for
// the symmetric-normalized operator, BiCGSTAB for the random-walk one.
// Relative residual target 1e-12, at most 10n iterations per column; a
// breakdown or a miss of the target throws SolveError naming the column.
SolveResult solve_closed_form(const PropagationOperator& S, const LabelMatrix& Y,
                              double alpha);

// Solves (L_avg + gamma*I) X = gamma*Y by conjugate gradients; L_avg is the
// integrated un-normalized Laplacian and gamma > 0 makes the system SPD.
SolveResult solve_unnormalized(const PropagationOperator& L_avg, const LabelMatrix& Y,
                               double gamma);

// Same solve against the integrated symmetric-normalized Laplacian.
SolveResult solve_normalized_regularized(const PropagationOperator& L_sym_avg,
                                         const LabelMatrix& Y, double gamma);

// Clamped variant: labeled rows are pinned to Y at every iteration and the
// unlabeled block follows S. Requires the random-walk operator and at least
// one labeled node.
SolveResult propagate_clamped(const PropagationOperator& S, const LabelMatrix& Y,
                              const std::vector<std::uint8_t>& labeled_mask,
                              const SolverParams& p);

// Regularization objectives, evaluated directly from the collection as
// per-network edge sums (zero-degree nodes contribute nothing to the
// smoothness term). Used for gradient and minimizer checks.
double objective_normalized(const LabelMatrix& F, const LabelMatrix& Y,
                            const NetworkCollection& coll, double gamma);
double objective_unnormalized(const LabelMatrix& F, const LabelMatrix& Y,
                              const NetworkCollection& coll, double gamma);

}  // namespace netprop

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netprop/solvers.hpp"

namespace netprop {

// Ground-truth multi-label membership: every node has a known +1/-1 status
// for every class (classes are not mutually exclusive).
struct AnnotationSet {
  index_t n = 0;
  index_t c = 0;
  std::vector<std::string> class_names;
  std::vector<std::int8_t> membership;  // n*c entries in {+1,-1}

  std::int8_t at(index_t i, index_t j) const {
    return membership[static_cast<std::size_t>(i) * c + j];
  }
};

// Deterministic k-fold split: a pure function of (n, k, seed). Node indices
// are shuffled with xoshiro256** and dealt round-robin, so fold sizes differ
// by at most one.
struct FoldAssignment {
  int k = 0;
  std::uint64_t seed = 0;
  std::vector<std::int32_t> fold_of;  // length n, values in [0, k)
};

FoldAssignment make_folds(index_t n, int k, std::uint64_t seed);

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const noexcept { return tp + tn + fp + fn; }
  // Q = (TP+TN) / (TP+TN+FP+FN)
  double accuracy() const;
};

struct ClassResult {
  std::string class_name;
  ConfusionCounts counts;
  double q = 0.0;
};

struct EvalReport {
  std::string method;
  std::string networks;
  int folds = 0;
  std::uint64_t seed = 0;
  std::vector<ClassResult> per_class;
  // Folds whose solve did not converge are excluded from the pooled counts
  // and surfaced here instead of being hidden.
  int non_converged_folds = 0;
};

enum class Method {
  random_walk,      // closed form on S_rw
  sym_normalized,   // closed form on S_sym
  unnormalized,     // gamma-regularized solve on the averaged Laplacian
  sym_regularized,  // gamma-regularized solve on I - S_sym
  rw_clamped,       // Zhu-style clamped iteration on S_rw
};

std::string to_string(Method m);
Method parse_method(const std::string& tag);  // throws Error on unknown tag

// Y_ij = membership_ij for training nodes, 0 for held-out nodes. The train
// mask is arbitrary (not a prefix); it must mark at least one node.
LabelMatrix build_initial_labels(const AnnotationSet& ann,
                                 const std::vector<std::uint8_t>& train_mask);

// Entrywise sign of F with the fixed tie rule sign(0) -> -1.
std::vector<std::int8_t> predict(const LabelMatrix& F);

// Confusion counts for class j over the nodes flagged in eval_mask. Throws
// Error when the mask selects no nodes (Q would be undefined).
ConfusionCounts confusion(const std::vector<std::int8_t>& pred, const AnnotationSet& truth,
                          const std::vector<std::uint8_t>& eval_mask, index_t class_j);

// Seeded k-fold cross-validation: per fold, train labels come from the
// out-of-fold nodes, one solve produces all c class columns jointly, and the
// in-fold nodes are scored. Confusion counts are pooled across folds before
// Q is computed (micro-average). Deterministic given the seed.
EvalReport cross_validate(const NetworkCollection& coll, const AnnotationSet& ann,
                          Method method, const SolverParams& params, int k,
                          std::uint64_t seed);

// Same protocol with a caller-supplied fold assignment.
EvalReport cross_validate(const NetworkCollection& coll, const AnnotationSet& ann,
                          Method method, const SolverParams& params,
                          const FoldAssignment& folds);

}  // namespace netprop

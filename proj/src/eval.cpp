#include "netprop/eval.hpp"

#include <numeric>
#include <stdexcept>

#include "netprop/errors.hpp"
#include "netprop/rng.hpp"

namespace netprop {

std::string to_string(Method m) {
  switch (m) {
    case Method::random_walk: return "rw";
    case Method::sym_normalized: return "sym";
    case Method::unnormalized: return "unnorm";
    case Method::sym_regularized: return "sym-reg";
    case Method::rw_clamped: return "rw-clamped";
  }
  return "?";
}

Method parse_method(const std::string& tag) {
  if (tag == "rw") return Method::random_walk;
  if (tag == "sym") return Method::sym_normalized;
  if (tag == "unnorm") return Method::unnormalized;
  if (tag == "sym-reg") return Method::sym_regularized;
  if (tag == "rw-clamped") return Method::rw_clamped;
  throw Error("unknown method tag: " + tag);
}

double ConfusionCounts::accuracy() const {
  const std::uint64_t all = total();
  if (all == 0) throw Error("accuracy is undefined over an empty evaluation set");
  return static_cast<double>(tp + tn) / static_cast<double>(all);
}

FoldAssignment make_folds(index_t n, int k, std::uint64_t seed) {
  if (k < 1) throw Error("fold count must be positive");
  if (n < k) throw Error("need at least one node per fold");
  std::vector<index_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Xoshiro256 rng(seed);
  shuffle(order, rng);

  FoldAssignment folds;
  folds.k = k;
  folds.seed = seed;
  folds.fold_of.assign(static_cast<std::size_t>(n), 0);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    folds.fold_of[order[pos]] = static_cast<std::int32_t>(pos % static_cast<std::size_t>(k));
  }
  return folds;
}

LabelMatrix build_initial_labels(const AnnotationSet& ann,
                                 const std::vector<std::uint8_t>& train_mask) {
  if (train_mask.size() != static_cast<std::size_t>(ann.n)) {
    throw std::invalid_argument("train mask length must equal n");
  }
  bool any = false;
  for (const auto flag : train_mask) any = any || flag != 0;
  if (!any) throw Error("training mask selects no nodes");

  LabelMatrix Y(ann.n, ann.c);
  for (index_t i = 0; i < ann.n; ++i) {
    if (!train_mask[i]) continue;
    for (index_t j = 0; j < ann.c; ++j) Y.at(i, j) = static_cast<double>(ann.at(i, j));
  }
  return Y;
}

std::vector<std::int8_t> predict(const LabelMatrix& F) {
  std::vector<std::int8_t> signs(F.values.size());
  for (std::size_t i = 0; i < F.values.size(); ++i) {
    // Tie rule: sign(0) -> -1 (predict "not in class").
    signs[i] = F.values[i] > 0.0 ? std::int8_t{1} : std::int8_t{-1};
  }
  return signs;
}

ConfusionCounts confusion(const std::vector<std::int8_t>& pred, const AnnotationSet& truth,
                          const std::vector<std::uint8_t>& eval_mask, index_t class_j) {
  if (pred.size() != truth.membership.size()) {
    throw std::invalid_argument("prediction matrix does not match annotation shape");
  }
  if (eval_mask.size() != static_cast<std::size_t>(truth.n)) {
    throw std::invalid_argument("evaluation mask length must equal n");
  }
  if (class_j < 0 || class_j >= truth.c) throw std::invalid_argument("class index out of range");

  ConfusionCounts counts;
  for (index_t i = 0; i < truth.n; ++i) {
    if (!eval_mask[i]) continue;
    const bool known_pos = truth.at(i, class_j) > 0;
    const bool pred_pos = pred[static_cast<std::size_t>(i) * truth.c + class_j] > 0;
    if (known_pos) {
      pred_pos ? ++counts.tp : ++counts.fn;
    } else {
      pred_pos ? ++counts.fp : ++counts.tn;
    }
  }
  if (counts.total() == 0) throw Error("evaluation mask selects no nodes");
  return counts;
}

namespace {

PropagationOperator build_operator(const NetworkCollection& coll, Method method) {
  switch (method) {
    case Method::random_walk:
    case Method::rw_clamped: return integrate_random_walk(coll);
    case Method::sym_normalized: return integrate_symmetric(coll);
    case Method::unnormalized: return integrate_unnormalized(coll);
    case Method::sym_regularized: return integrate_sym_laplacian(coll);
  }
  throw std::invalid_argument("unknown method");
}

SolveResult run_method(const PropagationOperator& op, Method method, const LabelMatrix& Y,
                       const std::vector<std::uint8_t>& train_mask,
                       const SolverParams& params) {
  switch (method) {
    case Method::random_walk:
    case Method::sym_normalized: return solve_closed_form(op, Y, params.alpha);
    case Method::unnormalized: return solve_unnormalized(op, Y, params.gamma);
    case Method::sym_regularized:
      return solve_normalized_regularized(op, Y, params.gamma);
    case Method::rw_clamped: return propagate_clamped(op, Y, train_mask, params);
  }
  throw std::invalid_argument("unknown method");
}

}  // namespace

EvalReport cross_validate(const NetworkCollection& coll, const AnnotationSet& ann,
                          Method method, const SolverParams& params, int k,
                          std::uint64_t seed) {
  if (k < 2) throw Error("cross-validation needs at least 2 folds");
  return cross_validate(coll, ann, method, params, make_folds(coll.n, k, seed));
}

EvalReport cross_validate(const NetworkCollection& coll, const AnnotationSet& ann,
                          Method method, const SolverParams& params,
                          const FoldAssignment& folds) {
  coll.validate();
  if (ann.n != coll.n) throw Error("annotations do not cover the collection's node set");
  if (folds.fold_of.size() != static_cast<std::size_t>(coll.n)) {
    throw Error("fold assignment does not match the collection's node set");
  }
  params.validate();

  const PropagationOperator op = build_operator(coll, method);

  EvalReport report;
  report.method = to_string(method);
  report.networks = "m=" + std::to_string(coll.m());
  report.folds = folds.k;
  report.seed = folds.seed;

  std::vector<ConfusionCounts> pooled(static_cast<std::size_t>(ann.c));
  for (int f = 0; f < folds.k; ++f) {
    std::vector<std::uint8_t> train_mask(static_cast<std::size_t>(coll.n), 0);
    std::vector<std::uint8_t> eval_mask(static_cast<std::size_t>(coll.n), 0);
    for (index_t i = 0; i < coll.n; ++i) {
      const bool held_out = folds.fold_of[i] == f;
      train_mask[i] = held_out ? 0 : 1;
      eval_mask[i] = held_out ? 1 : 0;
    }

    SolveResult solved;
    try {
      const LabelMatrix Y = build_initial_labels(ann, train_mask);
      solved = run_method(op, method, Y, train_mask, params);
    } catch (const SolveError&) {
      ++report.non_converged_folds;
      continue;
    }
    if (!solved.converged) {
      ++report.non_converged_folds;
      continue;  // surfaced in the report, fold left out of the pool
    }

    const std::vector<std::int8_t> pred = predict(solved.F);
    for (index_t j = 0; j < ann.c; ++j) {
      const ConfusionCounts cc = confusion(pred, ann, eval_mask, j);
      pooled[j].tp += cc.tp;
      pooled[j].tn += cc.tn;
      pooled[j].fp += cc.fp;
      pooled[j].fn += cc.fn;
    }
  }

  report.per_class.reserve(static_cast<std::size_t>(ann.c));
  for (index_t j = 0; j < ann.c; ++j) {
    ClassResult row;
    row.class_name = ann.class_names[j];
    row.counts = pooled[j];
    row.q = pooled[j].total() > 0 ? pooled[j].accuracy() : 0.0;
    report.per_class.push_back(std::move(row));
  }
  return report;
}

}  // namespace netprop

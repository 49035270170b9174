#include "netprop/solvers.hpp"

#include <cmath>
#include <cstring>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "netprop/errors.hpp"
#include "netprop/kernels.hpp"

namespace netprop {

namespace {

constexpr double kLinearRtol = 1e-12;  // relative residual target per column
constexpr double kBreakdownTiny = 1e-300;

const kernels::Ops& ops() { return kernels::active(); }

void check_operand(const PropagationOperator& S, const LabelMatrix& Y) {
  if (S.n != Y.n) throw std::invalid_argument("operator and label matrix disagree on n");
  if (Y.c < 1) throw std::invalid_argument("label matrix needs at least one class column");
}

void check_propagation_kind(const PropagationOperator& S) {
  if (S.kind != OperatorKind::random_walk && S.kind != OperatorKind::sym_normalized) {
    throw std::invalid_argument("propagation needs the random-walk or symmetric-normalized operator");
  }
}

struct LinearOutcome {
  bool ok = true;
  std::string why;
  double rel_residual = 0.0;
};

// Conjugate gradients for SPD systems, matrix-free. x must be zeroed by the
// caller; the true residual is recomputed at exit so a drifting recurrence
// cannot report a false convergence.
template <typename ApplyA>
LinearOutcome conjugate_gradient(std::size_t n, ApplyA&& apply, const double* b, double* x,
                                 int max_iter) {
  const double b_norm = std::sqrt(ops().dot(n, b, b));
  if (b_norm == 0.0) return {};

  std::vector<double> r(b, b + n);
  std::vector<double> p(r);
  std::vector<double> Ap(n, 0.0);

  double rs = ops().dot(n, r.data(), r.data());
  const double target = kLinearRtol * b_norm;
  for (int it = 0; it < max_iter && std::sqrt(rs) > target; ++it) {
    apply(p.data(), Ap.data());
    const double pAp = ops().dot(n, p.data(), Ap.data());
    if (!(pAp > 0.0)) return {false, "matrix is not positive definite", 0.0};
    const double step = rs / pAp;
    ops().axpy(n, step, p.data(), x);
    ops().axpy(n, -step, Ap.data(), r.data());
    const double rs_new = ops().dot(n, r.data(), r.data());
    ops().xpay(n, r.data(), rs_new / rs, p.data());
    rs = rs_new;
  }

  apply(x, Ap.data());
  ops().axpby(n, 1.0, b, -1.0, Ap.data(), Ap.data());
  const double true_rel = std::sqrt(ops().dot(n, Ap.data(), Ap.data())) / b_norm;
  if (true_rel > 100.0 * kLinearRtol) {
    return {false, "residual target not reached", true_rel};
  }
  return {true, "", true_rel};
}

// BiCGSTAB for the non-symmetric random-walk system, matrix-free.
template <typename ApplyA>
LinearOutcome bicgstab(std::size_t n, ApplyA&& apply, const double* b, double* x,
                       int max_iter) {
  const double b_norm = std::sqrt(ops().dot(n, b, b));
  if (b_norm == 0.0) return {};
  const double target = kLinearRtol * b_norm;

  std::vector<double> r(b, b + n);
  std::vector<double> r_hat(r);
  std::vector<double> p(n, 0.0), v(n, 0.0), t(n, 0.0);

  double rho = 1.0, step = 1.0, omega = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    const double rho_new = ops().dot(n, r_hat.data(), r.data());
    if (std::fabs(rho_new) < kBreakdownTiny) return {false, "rho breakdown", 0.0};
    if (it == 0) {
      p = r;
    } else {
      const double beta = (rho_new / rho) * (step / omega);
      ops().axpy(n, -omega, v.data(), p.data());
      ops().xpay(n, r.data(), beta, p.data());
    }
    apply(p.data(), v.data());
    const double denom = ops().dot(n, r_hat.data(), v.data());
    if (std::fabs(denom) < kBreakdownTiny) return {false, "alpha breakdown", 0.0};
    step = rho_new / denom;
    ops().axpy(n, -step, v.data(), r.data());  // r now holds s
    if (std::sqrt(ops().dot(n, r.data(), r.data())) <= target) {
      ops().axpy(n, step, p.data(), x);
      break;
    }
    apply(r.data(), t.data());
    const double tt = ops().dot(n, t.data(), t.data());
    if (tt < kBreakdownTiny) return {false, "omega breakdown", 0.0};
    omega = ops().dot(n, t.data(), r.data()) / tt;
    ops().axpy(n, step, p.data(), x);
    ops().axpy(n, omega, r.data(), x);
    ops().axpy(n, -omega, t.data(), r.data());
    if (std::sqrt(ops().dot(n, r.data(), r.data())) <= target) break;
    if (std::fabs(omega) < kBreakdownTiny) return {false, "omega breakdown", 0.0};
    rho = rho_new;
  }

  apply(x, t.data());
  ops().axpby(n, 1.0, b, -1.0, t.data(), t.data());
  const double true_rel = std::sqrt(ops().dot(n, t.data(), t.data())) / b_norm;
  if (true_rel > 100.0 * kLinearRtol) {
    return {false, "residual target not reached", true_rel};
  }
  return {true, "", true_rel};
}

// Runs fn(j) for every class column, spreading columns across threads.
// Columns are independent and each column's arithmetic has a fixed order, so
// the result does not depend on the thread count.
void for_each_column(index_t c, const std::function<void(index_t)>& fn) {
  const unsigned hw = std::thread::hardware_concurrency();
  const unsigned workers =
      std::min<unsigned>(hw == 0 ? 1 : hw, static_cast<unsigned>(c));
  if (workers <= 1) {
    for (index_t j = 0; j < c; ++j) fn(j);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(c));
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    threads.emplace_back([&, t]() {
      for (index_t j = static_cast<index_t>(t); j < c; j += static_cast<index_t>(workers)) {
        try {
          fn(j);
        } catch (...) {
          errors[j] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : threads) th.join();
  for (index_t j = 0; j < c; ++j) {
    if (errors[j]) std::rethrow_exception(errors[j]);
  }
}

// Shared driver for the columnwise linear solves F = solve(A, rhs_scale*Y).
template <typename ApplyA, typename Solver>
SolveResult solve_columns(const PropagationOperator& S, const LabelMatrix& Y,
                          double rhs_scale, ApplyA make_apply, Solver solver) {
  const std::size_t n = static_cast<std::size_t>(S.n);
  SolveResult result;
  result.F = LabelMatrix(Y.n, Y.c);
  std::vector<double> residuals(static_cast<std::size_t>(Y.c), 0.0);

  for_each_column(Y.c, [&](index_t j) {
    std::vector<double> rhs(n), x(n, 0.0), tmp(n);
    for (index_t i = 0; i < Y.n; ++i) rhs[i] = rhs_scale * Y.at(i, j);
    auto apply = make_apply(tmp);
    const LinearOutcome out =
        solver(n, apply, rhs.data(), x.data(), 10 * static_cast<int>(n));
    if (!out.ok) {
      throw SolveError("linear solve failed for class column " + std::to_string(j) +
                       ": " + out.why);
    }
    residuals[j] = out.rel_residual;
    for (index_t i = 0; i < Y.n; ++i) result.F.at(i, j) = x[i];
  });

  for (double r : residuals) result.residual = std::max(result.residual, r);
  result.iterations = 0;
  result.converged = true;
  return result;
}

}  // namespace

void SolverParams::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie strictly inside (0,1)");
  }
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
}

SolveResult propagate_iterative(const PropagationOperator& S, const LabelMatrix& Y,
                                const SolverParams& p) {
  check_propagation_kind(S);
  check_operand(S, Y);
  p.validate();

  const std::size_t total = Y.values.size();
  std::vector<double> cur(Y.values);
  std::vector<double> next(total, 0.0);

  SolveResult result;
  for (int t = 1; t <= p.max_iter; ++t) {
    S.matrix.matmat(cur.data(), static_cast<std::size_t>(Y.c), next.data());
    ops().axpby(total, 1.0 - p.alpha, Y.values.data(), p.alpha, next.data(), next.data());
    const double diff = ops().max_abs_diff(total, next.data(), cur.data());
    cur.swap(next);
    result.iterations = t;
    result.residual = diff;
    if (diff <= p.tol) {
      result.converged = true;
      result.F = LabelMatrix(Y.n, Y.c);
      result.F.values = std::move(cur);
      return result;
    }
  }
  result.converged = false;  // last iterate still returned, never dropped
  result.F = LabelMatrix(Y.n, Y.c);
  result.F.values = std::move(cur);
  return result;
}

SolveResult solve_closed_form(const PropagationOperator& S, const LabelMatrix& Y,
                              double alpha) {
  check_propagation_kind(S);
  check_operand(S, Y);
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie strictly inside (0,1)");
  }

  const std::size_t n = static_cast<std::size_t>(S.n);
  const CsrMatrix& M = S.matrix;
  auto make_apply = [&, alpha](std::vector<double>& tmp) {
    return [&M, &tmp, alpha, n](const double* x, double* out) {
      M.matvec(x, tmp.data());
      ops().axpby(n, 1.0, x, -alpha, tmp.data(), out);  // (I - alpha S) x
    };
  };

  if (S.kind == OperatorKind::sym_normalized) {
    return solve_columns(S, Y, 1.0 - alpha, make_apply,
                         [](std::size_t nn, auto& apply, const double* b, double* x,
                            int mi) { return conjugate_gradient(nn, apply, b, x, mi); });
  }
  return solve_columns(S, Y, 1.0 - alpha, make_apply,
                       [](std::size_t nn, auto& apply, const double* b, double* x,
                          int mi) { return bicgstab(nn, apply, b, x, mi); });
}

namespace {

SolveResult solve_regularized(const PropagationOperator& L, const LabelMatrix& Y,
                              double gamma) {
  check_operand(L, Y);
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");

  const std::size_t n = static_cast<std::size_t>(L.n);
  const CsrMatrix& M = L.matrix;
  auto make_apply = [&, gamma](std::vector<double>& tmp) {
    return [&M, &tmp, gamma, n](const double* x, double* out) {
      M.matvec(x, tmp.data());
      ops().axpby(n, gamma, x, 1.0, tmp.data(), out);  // (L + gamma I) x
    };
  };
  return solve_columns(L, Y, gamma, make_apply,
                       [](std::size_t nn, auto& apply, const double* b, double* x,
                          int mi) { return conjugate_gradient(nn, apply, b, x, mi); });
}

}  // namespace

SolveResult solve_unnormalized(const PropagationOperator& L_avg, const LabelMatrix& Y,
                               double gamma) {
  if (L_avg.kind != OperatorKind::unnorm_laplacian) {
    throw std::invalid_argument("solve_unnormalized needs the integrated un-normalized Laplacian");
  }
  return solve_regularized(L_avg, Y, gamma);
}

SolveResult solve_normalized_regularized(const PropagationOperator& L_sym_avg,
                                         const LabelMatrix& Y, double gamma) {
  if (L_sym_avg.kind != OperatorKind::sym_laplacian) {
    throw std::invalid_argument(
        "solve_normalized_regularized needs the integrated symmetric-normalized Laplacian");
  }
  return solve_regularized(L_sym_avg, Y, gamma);
}

SolveResult propagate_clamped(const PropagationOperator& S, const LabelMatrix& Y,
                              const std::vector<std::uint8_t>& labeled_mask,
                              const SolverParams& p) {
  if (S.kind != OperatorKind::random_walk) {
    throw std::invalid_argument("clamped propagation runs on the random-walk operator");
  }
  check_operand(S, Y);
  p.validate();
  if (labeled_mask.size() != static_cast<std::size_t>(Y.n)) {
    throw std::invalid_argument("labeled mask length must equal n");
  }
  bool any_labeled = false;
  for (const auto flag : labeled_mask) any_labeled = any_labeled || flag != 0;
  if (!any_labeled) throw Error("clamped propagation needs at least one labeled node");

  const std::size_t c = static_cast<std::size_t>(Y.c);
  const std::size_t total = Y.values.size();
  std::vector<double> cur(Y.values);
  std::vector<double> next(total, 0.0);

  SolveResult result;
  for (int t = 1; t <= p.max_iter; ++t) {
    S.matrix.matmat(cur.data(), c, next.data());
    for (index_t i = 0; i < Y.n; ++i) {
      if (labeled_mask[i]) {
        // Labeled rows are reset to Y bitwise, every iteration.
        std::memcpy(next.data() + static_cast<std::size_t>(i) * c,
                    Y.values.data() + static_cast<std::size_t>(i) * c,
                    c * sizeof(double));
      }
    }
    const double diff = ops().max_abs_diff(total, next.data(), cur.data());
    cur.swap(next);
    result.iterations = t;
    result.residual = diff;
    if (diff <= p.tol) {
      result.converged = true;
      result.F = LabelMatrix(Y.n, Y.c);
      result.F.values = std::move(cur);
      return result;
    }
  }
  result.converged = false;
  result.F = LabelMatrix(Y.n, Y.c);
  result.F.values = std::move(cur);
  return result;
}

namespace {

double fit_term(const LabelMatrix& F, const LabelMatrix& Y) {
  return ops().sum_sq_diff(F.values.size(), F.values.data(), Y.values.data());
}

void check_objective_dims(const LabelMatrix& F, const LabelMatrix& Y,
                          const NetworkCollection& coll) {
  coll.validate();
  if (F.n != coll.n || Y.n != coll.n || F.c != Y.c) {
    throw std::invalid_argument("objective operands disagree on dimensions");
  }
}

}  // namespace

double objective_normalized(const LabelMatrix& F, const LabelMatrix& Y,
                            const NetworkCollection& coll, double gamma) {
  check_objective_dims(F, Y, coll);
  const index_t c = F.c;
  double smooth = 0.0;
  for (const auto& net : coll.networks) {
    const CsrMatrix& w = net.adjacency();
    const std::vector<double> deg = w.row_sums();
    std::vector<double> inv_sqrt(deg.size(), 0.0);
    for (std::size_t i = 0; i < deg.size(); ++i) {
      if (deg[i] > 0.0) inv_sqrt[i] = 1.0 / std::sqrt(deg[i]);
    }
    for (index_t i = 0; i < w.n; ++i) {
      for (std::int64_t k = w.row_ptr[i]; k < w.row_ptr[i + 1]; ++k) {
        const index_t j = w.col[k];
        double dist = 0.0;
        for (index_t l = 0; l < c; ++l) {
          const double d = F.at(i, l) * inv_sqrt[i] - F.at(j, l) * inv_sqrt[j];
          dist += d * d;
        }
        smooth += w.val[k] * dist;
      }
    }
  }
  smooth /= 2.0 * static_cast<double>(coll.m());
  return smooth + gamma * fit_term(F, Y);
}

double objective_unnormalized(const LabelMatrix& F, const LabelMatrix& Y,
                              const NetworkCollection& coll, double gamma) {
  check_objective_dims(F, Y, coll);
  const index_t c = F.c;
  double smooth = 0.0;
  for (const auto& net : coll.networks) {
    const CsrMatrix& w = net.adjacency();
    for (index_t i = 0; i < w.n; ++i) {
      for (std::int64_t k = w.row_ptr[i]; k < w.row_ptr[i + 1]; ++k) {
        const index_t j = w.col[k];
        double dist = 0.0;
        for (index_t l = 0; l < c; ++l) {
          const double d = F.at(i, l) - F.at(j, l);
          dist += d * d;
        }
        smooth += w.val[k] * dist;
      }
    }
  }
  smooth /= 2.0 * static_cast<double>(coll.m());
  return smooth + gamma * fit_term(F, Y);
}

}  // namespace netprop

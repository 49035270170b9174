#pragma once

#include <string>

#include "netprop/graph.hpp"

namespace netprop {

enum class OperatorKind {
  random_walk,      // (1/m) sum_k D_k^-1 W_k
  sym_normalized,   // (1/m) sum_k D_k^-1/2 W_k D_k^-1/2
  unnorm_laplacian, // (1/m) sum_k (D_k - W_k)
  sym_laplacian,    // I - sym_normalized
};

std::string to_string(OperatorKind kind);

// Integrated propagation operator over a collection, tagged with the method
// that produced it. Rows touching a node with zero degree in network k get a
// zero contribution from that network instead of a division by zero.
struct PropagationOperator {
  OperatorKind kind;
  index_t n = 0;
  std::size_t m = 0;
  CsrMatrix matrix;
};

PropagationOperator integrate_random_walk(const NetworkCollection& coll);
PropagationOperator integrate_symmetric(const NetworkCollection& coll);
PropagationOperator integrate_unnormalized(const NetworkCollection& coll);
PropagationOperator integrate_sym_laplacian(const NetworkCollection& coll);

}  // namespace netprop

#pragma once

#include <cstdint>
#include <string>

#include "netprop/eval.hpp"
#include "netprop/graph.hpp"

namespace netprop {

// Planted-partition multi-network generator. Nodes fall into `clusters`
// contiguous, near-equal groups; a base graph draws each within-cluster pair
// with probability within_density and each cross pair with between_density
// (within_density = 1, between_density = 0 gives disjoint cliques). Each of
// the m networks then independently retains every base edge with the given
// retention probability, which reproduces the sparse-individual /
// well-covered-union regime at small scale. One class per cluster:
// membership is +1 on the cluster, -1 elsewhere. Fully determined by seed.
struct SyntheticParams {
  index_t n = 300;
  int clusters = 2;
  int networks = 5;
  double retention = 0.1;
  double within_density = 0.12;
  double between_density = 0.01;
  std::uint64_t seed = 42;

  void validate() const;  // throws Error on out-of-range values
};

struct SyntheticDataset {
  NetworkCollection collection;
  AnnotationSet annotations;
};

SyntheticDataset make_planted_partition(const SyntheticParams& params);

// Writes nodes.txt, network_<k>.tsv and annotations.tsv under dir (created
// if missing).
void write_dataset(const std::string& dir, const SyntheticParams& params);

}  // namespace netprop

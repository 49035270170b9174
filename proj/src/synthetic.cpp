#include "netprop/synthetic.hpp"

#include <filesystem>
#include <fstream>

#include "netprop/errors.hpp"
#include "netprop/io.hpp"
#include "netprop/rng.hpp"

namespace netprop {

void SyntheticParams::validate() const {
  if (n < 2) throw Error("synthetic dataset needs at least 2 nodes");
  if (clusters < 1 || clusters > n) throw Error("cluster count must lie in [1, n]");
  if (networks < 1) throw Error("at least one network is required");
  const auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(retention) || !unit(within_density) || !unit(between_density)) {
    throw Error("retention and densities must lie in [0, 1]");
  }
}

SyntheticDataset make_planted_partition(const SyntheticParams& params) {
  params.validate();
  const index_t n = params.n;

  // Contiguous near-equal clusters.
  std::vector<int> cluster_of(static_cast<std::size_t>(n));
  for (index_t i = 0; i < n; ++i) {
    cluster_of[i] = static_cast<int>((static_cast<std::int64_t>(i) * params.clusters) / n);
  }

  Xoshiro256 rng(params.seed);

  // Base graph, then per-network Bernoulli retention of its edges. All draws
  // happen in one fixed order so the dataset is a pure function of the seed.
  std::vector<std::pair<index_t, index_t>> base;
  for (index_t i = 0; i < n; ++i) {
    for (index_t j = i + 1; j < n; ++j) {
      const double density = cluster_of[i] == cluster_of[j] ? params.within_density
                                                            : params.between_density;
      if (rng.uniform() < density) base.emplace_back(i, j);
    }
  }

  NetworkCollection coll;
  coll.n = n;
  const int name_width = static_cast<int>(std::to_string(n - 1).size());
  coll.node_names.reserve(static_cast<std::size_t>(n));
  for (index_t i = 0; i < n; ++i) {
    std::string id = std::to_string(i);
    coll.node_names.push_back("n" + std::string(name_width - static_cast<int>(id.size()), '0') + id);
  }
  for (int k = 0; k < params.networks; ++k) {
    std::vector<Edge> edges;
    for (const auto& [i, j] : base) {
      if (rng.uniform() < params.retention) edges.push_back({i, j, 1.0});
    }
    coll.networks.push_back(SparseNetwork::from_edges(n, edges));
  }
  coll.validate();

  AnnotationSet ann;
  ann.n = n;
  ann.c = static_cast<index_t>(params.clusters);
  for (int cl = 0; cl < params.clusters; ++cl) {
    ann.class_names.push_back("class_" + std::to_string(cl + 1));
  }
  ann.membership.assign(static_cast<std::size_t>(n) * ann.c, 0);
  for (index_t i = 0; i < n; ++i) {
    for (index_t j = 0; j < ann.c; ++j) {
      ann.membership[static_cast<std::size_t>(i) * ann.c + j] =
          cluster_of[i] == j ? std::int8_t{1} : std::int8_t{-1};
    }
  }
  return {std::move(coll), std::move(ann)};
}

void write_dataset(const std::string& dir, const SyntheticParams& params) {
  const SyntheticDataset data = make_planted_partition(params);
  const std::filesystem::path root(dir);
  std::filesystem::create_directories(root);

  const auto open = [](const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path.string());
    return out;
  };

  {
    std::ofstream out = open(root / "nodes.txt");
    io::write_node_list(out, data.collection.node_names);
  }
  for (std::size_t k = 0; k < data.collection.m(); ++k) {
    std::ofstream out = open(root / ("network_" + std::to_string(k + 1) + ".tsv"));
    io::write_edge_list(out, data.collection.networks[k], data.collection.node_names);
  }
  {
    std::ofstream out = open(root / "annotations.tsv");
    io::write_annotations(out, data.annotations, data.collection.node_names);
  }
}

}  // namespace netprop

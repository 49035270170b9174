#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "netprop/eval.hpp"
#include "netprop/graph.hpp"

namespace netprop::io {

// One network input: either an edge-list file or a feature matrix converted
// through build_affinity. The CLI spells the latter as "features:<path>".
struct NetworkSource {
  std::string path;
  bool from_features = false;
};

NetworkSource parse_network_source(const std::string& spec);

// Edge-list file: one edge per line, `<node> <node> <weight>` separated by
// whitespace, '#' comments ignored. The reverse edge is implied; listing a
// pair twice with conflicting weights is an error. Node universe is the set
// of names appearing in the file, in lexicographic order.
SparseNetwork load_edge_list(const std::string& path);

// Loads m networks over one shared node index. With a node-list file the
// universe and id order follow that file and unknown names in any network
// are errors; otherwise the universe is the lexicographically sorted union
// of names across all sources. Nodes absent from one source are isolated in
// that network.
NetworkCollection load_collection(const std::vector<NetworkSource>& sources,
                                  const std::string& node_list_path = "",
                                  const AffinityParams& affinity = {});

// Annotation TSV: header `node<TAB>class_1<TAB>...`, one row per node with
// +1/-1 entries; every collection node must be covered.
AnnotationSet load_annotations(const std::string& path,
                               const std::vector<std::string>& node_names);

// Train/test split plus initial labels for `predict`: header
// `node<TAB>train<TAB>class_1<TAB>...`; train is 0/1, class entries are
// +1/-1/0. Nodes absent from the file are unlabeled test rows.
struct LabeledSplit {
  LabelMatrix Y;
  std::vector<std::uint8_t> train_mask;
  std::vector<std::string> class_names;
};

LabeledSplit load_labeled_split(const std::string& path,
                                const std::vector<std::string>& node_names);

// Feature matrix: each row `<node> <f_1> ... <f_p>`, consistent p, '#'
// comments ignored.
struct FeatureTable {
  std::vector<std::string> names;
  std::vector<std::size_t> lines;  // source line of each row, for messages
  std::vector<double> values;      // row-major, names.size() x p
  std::size_t p = 0;
};

FeatureTable load_features(const std::string& path);

using HeaderBlock = std::vector<std::pair<std::string, std::string>>;

// '#'-prefixed key = value lines; every config value of a run goes through
// here so output files are self-describing.
void write_header(std::ostream& os, const HeaderBlock& header);

// `class  tp  tn  fp  fn  Q_percent` rows, Q as a percentage with two
// decimals.
void write_report(std::ostream& os, const EvalReport& report, const HeaderBlock& header);

// Table-3-shaped comparison: one row per class, one Q column per method.
void write_comparison(std::ostream& os, const std::vector<EvalReport>& reports,
                      const HeaderBlock& header);

void write_edge_list(std::ostream& os, const SparseNetwork& net,
                     const std::vector<std::string>& node_names);
void write_node_list(std::ostream& os, const std::vector<std::string>& node_names);
void write_annotations(std::ostream& os, const AnnotationSet& ann,
                       const std::vector<std::string>& node_names);

std::string format_double(double v, int decimals);

}  // namespace netprop::io

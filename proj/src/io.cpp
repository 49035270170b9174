#include "netprop/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "netprop/errors.hpp"

namespace netprop::io {

namespace {

std::string rstrip(std::string line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
  return line;
}

bool skippable(const std::string& line) {
  for (const char ch : line) {
    if (ch == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(ch))) return false;
  }
  return true;  // blank
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream stream(line);
  std::string tok;
  while (stream >> tok) fields.push_back(tok);
  return fields;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  return in;
}

double parse_weight(const std::string& tok, const std::string& path, std::size_t line) {
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(tok, &consumed);
  } catch (const std::exception&) {
    throw ParseError(path, line, "cannot parse weight '" + tok + "'");
  }
  if (consumed != tok.size()) {
    throw ParseError(path, line, "cannot parse weight '" + tok + "'");
  }
  return value;
}

int parse_pm1(const std::string& tok, bool allow_zero, const std::string& path,
              std::size_t line) {
  if (tok == "+1" || tok == "1") return 1;
  if (tok == "-1") return -1;
  if (allow_zero && tok == "0") return 0;
  throw ParseError(path, line,
                   std::string("expected ") + (allow_zero ? "+1, -1 or 0" : "+1 or -1") +
                       ", got '" + tok + "'");
}

struct RawEdge {
  std::string a;
  std::string b;
  double w;
  std::size_t line;
};

std::vector<RawEdge> read_edge_file(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<RawEdge> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = rstrip(line);
    if (skippable(line)) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 3) {
      throw ParseError(path, line_no, "expected `node node weight`");
    }
    const double w = parse_weight(fields[2], path, line_no);
    if (w < 0.0) throw ParseError(path, line_no, "negative edge weight");
    if (fields[0] == fields[1]) {
      throw ParseError(path, line_no, "self-loop on node '" + fields[0] + "'");
    }
    raw.push_back({fields[0], fields[1], w, line_no});
  }
  return raw;
}

using NameIndex = std::unordered_map<std::string, index_t>;

NameIndex index_names(const std::vector<std::string>& names) {
  NameIndex idx;
  idx.reserve(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    idx.emplace(names[i], static_cast<index_t>(i));
  }
  return idx;
}

index_t resolve(const NameIndex& idx, const std::string& name, const std::string& path,
                std::size_t line) {
  const auto it = idx.find(name);
  if (it == idx.end()) {
    throw ParseError(path, line, "node '" + name + "' is not in the collection's node index");
  }
  return it->second;
}

std::vector<Edge> edges_from_raw(const std::vector<RawEdge>& raw, const NameIndex& idx,
                                 const std::string& path) {
  std::unordered_map<std::uint64_t, std::pair<double, std::size_t>> seen;
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const auto& e : raw) {
    const index_t u = resolve(idx, e.a, path, e.line);
    const index_t v = resolve(idx, e.b, path, e.line);
    if (e.w == 0.0) continue;  // zero weight means no edge
    const index_t lo = std::min(u, v);
    const index_t hi = std::max(u, v);
    const std::uint64_t key =
        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(lo)) << 32) |
        static_cast<std::uint32_t>(hi);
    const auto [it, inserted] = seen.emplace(key, std::make_pair(e.w, e.line));
    if (!inserted) {
      if (it->second.first != e.w) {
        throw ParseError(path, e.line,
                         "edge restated with a conflicting weight (first seen on line " +
                             std::to_string(it->second.second) + ")");
      }
      continue;  // identical restatement
    }
    edges.push_back({u, v, e.w});
  }
  return edges;
}

std::vector<std::string> read_node_list(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<std::string> names;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = rstrip(line);
    if (skippable(line)) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 1) throw ParseError(path, line_no, "expected one node name per line");
    if (!seen.insert(fields[0]).second) {
      throw ParseError(path, line_no, "duplicate node name '" + fields[0] + "'");
    }
    names.push_back(fields[0]);
  }
  if (names.empty()) throw Error("node list is empty: " + path);
  return names;
}

SparseNetwork affinity_network(const FeatureTable& table, const NameIndex& idx,
                               index_t n_global, const AffinityParams& params,
                               const std::string& path) {
  const SparseNetwork local = build_affinity(
      table.values, static_cast<index_t>(table.names.size()), table.p, params);
  std::vector<index_t> gid(table.names.size());
  for (std::size_t i = 0; i < table.names.size(); ++i) {
    gid[i] = resolve(idx, table.names[i], path, table.lines[i]);
  }
  std::vector<Edge> edges;
  const CsrMatrix& adj = local.adjacency();
  for (index_t i = 0; i < adj.n; ++i) {
    for (std::int64_t k = adj.row_ptr[i]; k < adj.row_ptr[i + 1]; ++k) {
      const index_t j = adj.col[k];
      if (j <= i) continue;  // one direction; from_edges mirrors
      edges.push_back({gid[i], gid[j], adj.val[k]});
    }
  }
  return SparseNetwork::from_edges(n_global, edges);
}

}  // namespace

NetworkSource parse_network_source(const std::string& spec) {
  constexpr const char* kPrefix = "features:";
  if (spec.rfind(kPrefix, 0) == 0) {
    return {spec.substr(std::string(kPrefix).size()), true};
  }
  return {spec, false};
}

SparseNetwork load_edge_list(const std::string& path) {
  const std::vector<RawEdge> raw = read_edge_file(path);
  std::set<std::string> names;
  for (const auto& e : raw) {
    names.insert(e.a);
    names.insert(e.b);
  }
  const std::vector<std::string> ordered(names.begin(), names.end());
  const NameIndex idx = index_names(ordered);
  return SparseNetwork::from_edges(static_cast<index_t>(ordered.size()),
                                   edges_from_raw(raw, idx, path));
}

FeatureTable load_features(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  FeatureTable table;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = rstrip(line);
    if (skippable(line)) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() < 2) {
      throw ParseError(path, line_no, "expected `node f_1 ... f_p`");
    }
    if (table.names.empty()) {
      table.p = fields.size() - 1;
    } else if (fields.size() - 1 != table.p) {
      throw ParseError(path, line_no, "inconsistent feature count");
    }
    if (!seen.insert(fields[0]).second) {
      throw ParseError(path, line_no, "duplicate feature row for node '" + fields[0] + "'");
    }
    table.names.push_back(fields[0]);
    table.lines.push_back(line_no);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      table.values.push_back(parse_weight(fields[i], path, line_no));
    }
  }
  if (table.names.empty()) throw Error("feature file is empty: " + path);
  return table;
}

NetworkCollection load_collection(const std::vector<NetworkSource>& sources,
                                  const std::string& node_list_path,
                                  const AffinityParams& affinity) {
  if (sources.empty()) throw Error("at least one network input is required");

  // Pre-read every source once.
  std::vector<std::vector<RawEdge>> raw_edges(sources.size());
  std::vector<FeatureTable> features(sources.size());
  for (std::size_t s = 0; s < sources.size(); ++s) {
    if (sources[s].from_features) {
      features[s] = load_features(sources[s].path);
    } else {
      raw_edges[s] = read_edge_file(sources[s].path);
    }
  }

  // Node universe: explicit list when given, otherwise the sorted union of
  // names across all sources.
  std::vector<std::string> names;
  if (!node_list_path.empty()) {
    names = read_node_list(node_list_path);
  } else {
    std::set<std::string> all;
    for (std::size_t s = 0; s < sources.size(); ++s) {
      if (sources[s].from_features) {
        all.insert(features[s].names.begin(), features[s].names.end());
      } else {
        for (const auto& e : raw_edges[s]) {
          all.insert(e.a);
          all.insert(e.b);
        }
      }
    }
    names.assign(all.begin(), all.end());
    if (names.empty()) throw Error("no nodes found in any network input");
  }
  const NameIndex idx = index_names(names);
  const index_t n = static_cast<index_t>(names.size());

  NetworkCollection coll;
  coll.n = n;
  coll.node_names = names;
  coll.networks.reserve(sources.size());
  for (std::size_t s = 0; s < sources.size(); ++s) {
    if (sources[s].from_features) {
      coll.networks.push_back(affinity_network(features[s], idx, n, affinity, sources[s].path));
    } else {
      coll.networks.push_back(
          SparseNetwork::from_edges(n, edges_from_raw(raw_edges[s], idx, sources[s].path)));
    }
  }
  coll.validate();
  return coll;
}

AnnotationSet load_annotations(const std::string& path,
                               const std::vector<std::string>& node_names) {
  std::ifstream in = open_or_throw(path);
  const NameIndex idx = index_names(node_names);

  AnnotationSet ann;
  ann.n = static_cast<index_t>(node_names.size());

  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<std::uint8_t> covered(node_names.size(), 0);
  while (std::getline(in, line)) {
    ++line_no;
    line = rstrip(line);
    if (skippable(line)) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (!have_header) {
      if (fields.size() < 2 || fields[0] != "node") {
        throw ParseError(path, line_no, "expected header `node class_1 ...`");
      }
      ann.class_names.assign(fields.begin() + 1, fields.end());
      ann.c = static_cast<index_t>(ann.class_names.size());
      ann.membership.assign(static_cast<std::size_t>(ann.n) * ann.c, 0);
      have_header = true;
      continue;
    }
    if (fields.size() != static_cast<std::size_t>(ann.c) + 1) {
      throw ParseError(path, line_no, "wrong number of columns");
    }
    const index_t node = resolve(idx, fields[0], path, line_no);
    if (covered[node]) throw ParseError(path, line_no, "duplicate row for node '" + fields[0] + "'");
    covered[node] = 1;
    for (index_t j = 0; j < ann.c; ++j) {
      ann.membership[static_cast<std::size_t>(node) * ann.c + j] =
          static_cast<std::int8_t>(parse_pm1(fields[j + 1], false, path, line_no));
    }
  }
  if (!have_header) throw Error("annotation file has no header: " + path);
  for (std::size_t i = 0; i < covered.size(); ++i) {
    if (!covered[i]) throw Error("annotation file is missing node '" + node_names[i] + "'");
  }
  return ann;
}

LabeledSplit load_labeled_split(const std::string& path,
                                const std::vector<std::string>& node_names) {
  std::ifstream in = open_or_throw(path);
  const NameIndex idx = index_names(node_names);
  const index_t n = static_cast<index_t>(node_names.size());

  LabeledSplit split;
  split.train_mask.assign(node_names.size(), 0);

  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  index_t c = 0;
  std::vector<std::uint8_t> covered(node_names.size(), 0);
  while (std::getline(in, line)) {
    ++line_no;
    line = rstrip(line);
    if (skippable(line)) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (!have_header) {
      if (fields.size() < 3 || fields[0] != "node" || fields[1] != "train") {
        throw ParseError(path, line_no, "expected header `node train class_1 ...`");
      }
      split.class_names.assign(fields.begin() + 2, fields.end());
      c = static_cast<index_t>(split.class_names.size());
      split.Y = LabelMatrix(n, c);
      have_header = true;
      continue;
    }
    if (fields.size() != static_cast<std::size_t>(c) + 2) {
      throw ParseError(path, line_no, "wrong number of columns");
    }
    const index_t node = resolve(idx, fields[0], path, line_no);
    if (covered[node]) throw ParseError(path, line_no, "duplicate row for node '" + fields[0] + "'");
    covered[node] = 1;
    std::uint8_t train = 0;
    if (fields[1] == "1") {
      train = 1;
    } else if (fields[1] != "0") {
      throw ParseError(path, line_no, "train flag must be 0 or 1");
    }
    split.train_mask[node] = train;
    for (index_t j = 0; j < c; ++j) {
      const int value = parse_pm1(fields[j + 2], true, path, line_no);
      // Held-out rows carry 0 regardless of what the file says.
      split.Y.at(node, j) = train ? static_cast<double>(value) : 0.0;
    }
  }
  if (!have_header) throw Error("labels file has no header: " + path);
  return split;
}

std::string format_double(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

void write_header(std::ostream& os, const HeaderBlock& header) {
  for (const auto& [key, value] : header) {
    os << "# " << key << " = " << value << "\n";
  }
}

void write_report(std::ostream& os, const EvalReport& report, const HeaderBlock& header) {
  write_header(os, header);
  os << "class\ttp\ttn\tfp\tfn\tQ_percent\n";
  for (const auto& row : report.per_class) {
    os << row.class_name << '\t' << row.counts.tp << '\t' << row.counts.tn << '\t'
       << row.counts.fp << '\t' << row.counts.fn << '\t'
       << format_double(100.0 * row.q, 2) << "\n";
  }
}

namespace {

std::string column_label(const std::string& method_tag) {
  if (method_tag == "sym") return "normalized";
  if (method_tag == "rw") return "random_walk";
  if (method_tag == "unnorm") return "unnormalized";
  if (method_tag == "sym-reg") return "sym_regularized";
  if (method_tag == "rw-clamped") return "rw_clamped";
  return method_tag;
}

}  // namespace

void write_comparison(std::ostream& os, const std::vector<EvalReport>& reports,
                      const HeaderBlock& header) {
  if (reports.empty()) throw Error("comparison table needs at least one report");
  write_header(os, header);
  os << "class";
  for (const auto& report : reports) os << '\t' << column_label(report.method);
  os << "\n";
  const std::size_t classes = reports.front().per_class.size();
  for (const auto& report : reports) {
    if (report.per_class.size() != classes) {
      throw Error("comparison reports disagree on the class list");
    }
  }
  for (std::size_t row = 0; row < classes; ++row) {
    os << reports.front().per_class[row].class_name;
    for (const auto& report : reports) {
      os << '\t' << format_double(100.0 * report.per_class[row].q, 2);
    }
    os << "\n";
  }
}

void write_edge_list(std::ostream& os, const SparseNetwork& net,
                     const std::vector<std::string>& node_names) {
  const CsrMatrix& adj = net.adjacency();
  char buf[64];
  for (index_t i = 0; i < adj.n; ++i) {
    for (std::int64_t k = adj.row_ptr[i]; k < adj.row_ptr[i + 1]; ++k) {
      const index_t j = adj.col[k];
      if (j <= i) continue;  // emit each undirected edge once
      std::snprintf(buf, sizeof(buf), "%.17g", adj.val[k]);
      os << node_names[i] << '\t' << node_names[j] << '\t' << buf << "\n";
    }
  }
}

void write_node_list(std::ostream& os, const std::vector<std::string>& node_names) {
  for (const auto& name : node_names) os << name << "\n";
}

void write_annotations(std::ostream& os, const AnnotationSet& ann,
                       const std::vector<std::string>& node_names) {
  os << "node";
  for (const auto& name : ann.class_names) os << '\t' << name;
  os << "\n";
  for (index_t i = 0; i < ann.n; ++i) {
    os << node_names[i];
    for (index_t j = 0; j < ann.c; ++j) {
      os << '\t' << (ann.at(i, j) > 0 ? "+1" : "-1");
    }
    os << "\n";
  }
}

}  // namespace netprop::io

// Copyright 2026 The StableGNN Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stable/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "stable/errors.hpp"
#include "stable/rng.hpp"

namespace stable {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string where(const fs::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

// Strips a '#' comment and reports whether anything but whitespace remains.
bool content_of(std::string& line) {
  if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
  return line.find_first_not_of(" \t\r") != std::string::npos;
}

std::uint64_t parse_id(const std::string& token, const fs::path& path, std::size_t line, std::size_t limit) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size() || v < 0) throw InputError(where(path, line) + "bad node id '" + token + "'");
  if (static_cast<std::uint64_t>(v) >= limit) {
    throw InputError(where(path, line) + "node id " + token + " out of range (N=" + std::to_string(limit) + ")");
  }
  return static_cast<std::uint64_t>(v);
}

template <typename Fn>
void for_each_pair_line(const fs::path& path, Fn&& fn) {
  auto in = open_in(path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!content_of(line)) continue;
    std::istringstream ss(line);
    std::string a, b, extra;
    if (!(ss >> a >> b) || (ss >> extra)) {
      throw InputError(where(path, lineno) + "expected two columns");
    }
    fn(a, b, lineno);
  }
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void check_ids(const std::vector<NodeId>& ids, const char* name, std::size_t n) {
  for (auto id : ids) {
    if (id >= n) throw InputError(std::string("split: ") + name + " id " + std::to_string(id) + " out of range");
  }
}

std::vector<NodeId> sorted_block(std::vector<NodeId> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

void DataSplit::validate(std::size_t num_nodes) const {
  if (train.empty()) throw InputError("split: train set is empty");
  check_ids(train, "train", num_nodes);
  check_ids(val, "val", num_nodes);
  check_ids(test, "test", num_nodes);
  std::vector<int> owner(num_nodes, -1);
  const std::vector<NodeId>* lists[] = {&train, &val, &test};
  const char* names[] = {"train", "val", "test"};
  for (int l = 0; l < 3; ++l) {
    for (auto id : *lists[l]) {
      if (owner[id] != -1) {
        throw InputError(std::string("split: node ") + std::to_string(id) + " appears in both " + names[owner[id]] +
                         " and " + names[l]);
      }
      owner[id] = l;
    }
  }
}

bool operator==(const GraphBundle& a, const GraphBundle& b) {
  return a.graph == b.graph && a.features == b.features && a.labels.labels == b.labels.labels &&
         a.labels.num_classes == b.labels.num_classes && a.split == b.split;
}

EdgeSet read_edge_list(const fs::path& path, std::size_t num_nodes) {
  std::vector<Edge> pairs;
  for_each_pair_line(path, [&](const std::string& a, const std::string& b, std::size_t line) {
    auto u = static_cast<NodeId>(parse_id(a, path, line, num_nodes));
    auto v = static_cast<NodeId>(parse_id(b, path, line, num_nodes));
    if (u != v) pairs.push_back({u, v});
  });
  return EdgeSet(std::move(pairs));
}

void write_edge_list(const fs::path& path, const EdgeSet& edges) {
  auto out = open_out(path);
  for (const auto& e : edges) out << e.u << '\t' << e.v << '\n';
  if (!out) throw InputError("write failed: " + path.string());
}

std::vector<Edge> read_arc_list(const fs::path& path, std::size_t num_nodes) {
  std::vector<Edge> arcs;
  for_each_pair_line(path, [&](const std::string& a, const std::string& b, std::size_t line) {
    auto u = static_cast<NodeId>(parse_id(a, path, line, num_nodes));
    auto v = static_cast<NodeId>(parse_id(b, path, line, num_nodes));
    if (u == v) throw InputError(where(path, line) + "self-loop arc");
    arcs.push_back({u, v});
  });
  return arcs;
}

void write_arc_list(const fs::path& path, const SparseGraph& graph) {
  auto out = open_out(path);
  for (const auto& a : graph.arcs()) out << a.u << '\t' << a.v << '\n';
  if (!out) throw InputError("write failed: " + path.string());
}

DenseMatrix read_features(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  std::size_t lineno = 0;
  std::size_t rows = 0, cols = 0;
  bool header = false;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++lineno;
    if (!content_of(line)) continue;
    std::istringstream ss(line);
    if (!header) {
      std::string extra;
      if (!(ss >> rows >> cols) || (ss >> extra)) throw InputError(where(path, lineno) + "expected header 'N d'");
      header = true;
      values.reserve(rows * cols);
      continue;
    }
    std::size_t count = 0;
    std::string token;
    while (ss >> token) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size() || !std::isfinite(v)) {
        throw InputError(where(path, lineno) + "bad feature value '" + token + "'");
      }
      values.push_back(v);
      ++count;
    }
    if (count != cols) {
      throw InputError(where(path, lineno) + "ragged row: " + std::to_string(count) + " values, expected " +
                       std::to_string(cols));
    }
  }
  if (!header) throw InputError(path.string() + ": missing 'N d' header");
  if (values.size() != rows * cols) {
    throw InputError(path.string() + ": expected " + std::to_string(rows) + " rows, found " +
                     std::to_string(cols == 0 ? 0 : values.size() / cols));
  }
  return DenseMatrix(rows, cols, std::move(values));
}

void write_features(const fs::path& path, const DenseMatrix& features) {
  auto out = open_out(path);
  out << features.rows() << ' ' << features.cols() << '\n';
  for (std::size_t r = 0; r < features.rows(); ++r) {
    auto row = features.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ' ';
      out << format_real(row[c]);
    }
    out << '\n';
  }
  if (!out) throw InputError("write failed: " + path.string());
}

LabelVector read_labels(const fs::path& path, std::size_t num_nodes) {
  std::vector<int> labels(num_nodes, kUnknownLabel);
  std::vector<bool> seen(num_nodes, false);
  for_each_pair_line(path, [&](const std::string& a, const std::string& b, std::size_t line) {
    auto node = parse_id(a, path, line, num_nodes);
    auto label = parse_id(b, path, line, 1u << 30);
    if (seen[node]) throw InputError(where(path, line) + "duplicate label for node " + a);
    seen[node] = true;
    labels[node] = static_cast<int>(label);
  });
  try {
    return make_labels(std::move(labels));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_labels(const fs::path& path, const LabelVector& labels) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels.known(i)) out << i << '\t' << labels[i] << '\n';
  }
  if (!out) throw InputError("write failed: " + path.string());
}

DataSplit read_split(const fs::path& path, std::size_t num_nodes) {
  auto in = open_in(path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  DataSplit split;
  auto take = [&](const char* key, std::vector<NodeId>& dst) {
    if (!doc.contains(key)) {
      if (std::string(key) == "train") throw InputError(path.string() + ": missing \"train\"");
      return;
    }
    for (const auto& v : doc.at(key)) {
      if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw InputError(path.string() + ": non-integer id in \"" + key + "\"");
      }
      dst.push_back(static_cast<NodeId>(v.get<long long>()));
    }
  };
  take("train", split.train);
  take("val", split.val);
  take("test", split.test);
  try {
    split.validate(num_nodes);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return split;
}

void write_split(const fs::path& path, const DataSplit& split) {
  auto out = open_out(path);
  json doc = {{"train", split.train}, {"val", split.val}, {"test", split.test}};
  out << doc.dump() << '\n';
  if (!out) throw InputError("write failed: " + path.string());
}

GraphBundle load_graph_bundle(const fs::path& dir) {
  for (const char* name : {"edges.tsv", "features.txt", "labels.tsv", "split.json"}) {
    if (!fs::exists(dir / name)) throw InputError("bundle " + dir.string() + ": missing " + name);
  }
  GraphBundle b;
  b.features = read_features(dir / "features.txt");
  const std::size_t n = b.features.rows();
  b.graph = SparseGraph::undirected(n, read_edge_list(dir / "edges.tsv", n));
  b.labels = read_labels(dir / "labels.tsv", n);
  b.split = read_split(dir / "split.json", n);
  return b;
}

void save_graph_bundle(const GraphBundle& bundle, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  write_edge_list(dir / "edges.tsv", bundle.graph.edge_set());
  write_features(dir / "features.txt", bundle.features);
  write_labels(dir / "labels.tsv", bundle.labels);
  write_split(dir / "split.json", bundle.split);
}

void SbmSpec::validate() const {
  if (num_classes < 2) throw InputError("sbm: need at least 2 classes");
  if (num_nodes < static_cast<std::size_t>(num_classes)) throw InputError("sbm: fewer nodes than classes");
  if (!(p_out >= 0.0 && p_out < p_in && p_in <= 1.0)) {
    throw InputError("sbm: require 0 <= p_out < p_in <= 1 (got p_in=" + format_real(p_in) +
                     ", p_out=" + format_real(p_out) + ")");
  }
  if (feature_dim == 0) throw InputError("sbm: feature dimension must be positive");
  if (on_bits > feature_dim) throw InputError("sbm: on-bits exceeds feature dimension");
  if (!(flip_noise >= 0.0 && flip_noise <= 1.0)) throw InputError("sbm: flip noise must lie in [0, 1]");
}

GraphBundle generate_sbm(const SbmSpec& spec) {
  spec.validate();
  const std::size_t n = spec.num_nodes;
  const auto k = static_cast<std::size_t>(spec.num_classes);
  Rng root(spec.seed);

  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i * k / n);

  Rng edge_rng = root.fork(1);
  std::vector<Edge> pairs;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      const double p = labels[i] == labels[j] ? spec.p_in : spec.p_out;
      if (edge_rng.bernoulli(p)) pairs.push_back({i, j});
    }
  }

  Rng template_rng = root.fork(2);
  std::vector<std::vector<std::size_t>> templates(k);
  std::vector<std::size_t> positions(spec.feature_dim);
  for (auto& t : templates) {
    for (std::size_t c = 0; c < positions.size(); ++c) positions[c] = c;
    // Partial Fisher-Yates: the first on_bits slots form a uniform subset.
    for (std::size_t c = 0; c < spec.on_bits; ++c) {
      std::size_t pick = c + static_cast<std::size_t>(template_rng.index(positions.size() - c));
      std::swap(positions[c], positions[pick]);
    }
    t.assign(positions.begin(), positions.begin() + static_cast<std::ptrdiff_t>(spec.on_bits));
  }

  Rng noise_rng = root.fork(3);
  DenseMatrix features(n, spec.feature_dim);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = features.row(i);
    for (auto c : templates[labels[i]]) row[c] = 1.0;
    for (auto& v : row) {
      if (noise_rng.bernoulli(spec.flip_noise)) v = 1.0 - v;
    }
  }

  Rng split_rng = root.fork(4);
  DataSplit split;
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<NodeId> members;
    for (NodeId i = 0; i < n; ++i) {
      if (static_cast<std::size_t>(labels[i]) == c) members.push_back(i);
    }
    split_rng.shuffle(std::span<NodeId>(members));
    const auto size = static_cast<double>(members.size());
    auto n_train = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.1 * size)));
    auto n_val = std::min(members.size() - n_train, static_cast<std::size_t>(std::lround(0.1 * size)));
    split.train.insert(split.train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.val.insert(split.val.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train),
                     members.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
    split.test.insert(split.test.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), members.end());
  }
  split.train = sorted_block(std::move(split.train));
  split.val = sorted_block(std::move(split.val));
  split.test = sorted_block(std::move(split.test));

  GraphBundle bundle;
  bundle.graph = SparseGraph::undirected(n, EdgeSet(std::move(pairs)));
  bundle.features = std::move(features);
  bundle.labels = make_labels(std::move(labels));
  bundle.split = std::move(split);
  return bundle;
}

}  // namespace stable

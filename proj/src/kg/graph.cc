/*
 * Copyright 2026 The kgzsl Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "kgzsl/kg/graph.h"

#include <algorithm>
#include <string>

#include "kgzsl/common/error.h"
#include "kgzsl/common/text.h"

namespace kgzsl::kg {

std::string_view seed_label_name(SeedLabel label) {
  switch (label) {
    case SeedLabel::kSeen: return "seen";
    case SeedLabel::kUnseen: return "unseen";
    case SeedLabel::kNone: break;
  }
  return "-";
}

SeedLabel parse_seed_label(std::string_view text) {
  text = trim(text);
  if (text == "seen") return SeedLabel::kSeen;
  if (text == "unseen") return SeedLabel::kUnseen;
  if (text == "-") return SeedLabel::kNone;
  throw Error(ErrorCode::kMalformedLine,
              "expected seen|unseen, got '" + std::string(text) + "'");
}

KnowledgeGraph KnowledgeGraph::from_parts(const GraphParts& parts) {
  KnowledgeGraph g;
  std::vector<std::pair<int, ConceptId>> order;
  order.reserve(parts.nodes.size());
  for (const auto& [name, info] : parts.nodes) {
    if (info.hop < 0) {
      throw Error(ErrorCode::kMalformedLine,
                  "negative hop for '" + name.str() + "'");
    }
    order.emplace_back(info.hop, name);
  }
  std::sort(order.begin(), order.end());
  for (size_t i = 0; i < order.size(); ++i) {
    const auto& info = parts.nodes.at(order[i].second);
    g.nodes_.push_back(GraphNode{order[i].second, info.hop, info.seed, i});
    g.index_.emplace(order[i].second, i);
  }
  for (size_t i = 0; i < g.nodes_.size(); ++i) {
    const auto& lookup = parts.nodes.at(g.nodes_[i].name).lookup;
    if (!lookup) continue;
    const auto target = g.find(*lookup);
    if (!target) {
      throw Error(ErrorCode::kMalformedLine,
                  "lookup target '" + lookup->str() + "' is not a node");
    }
    g.nodes_[i].lookup = *target;
  }
  std::map<std::string, size_t> relation_index;
  for (const auto& [label, category] : parts.relations) {
    relation_index.emplace(label, g.relations_.size());
    g.relations_.push_back(RelationType{label, category});
  }
  for (const auto& [key, weight] : parts.edges) {
    const auto& [src, dst, rel] = key;
    const auto s = g.find(src);
    const auto d = g.find(dst);
    const auto r = relation_index.find(rel);
    if (!s || !d || r == relation_index.end()) {
      throw Error(ErrorCode::kMalformedLine,
                  "edge " + src.str() + " -" + rel + "-> " + dst.str() +
                      " references a missing node or relation");
    }
    g.edges_.push_back(GraphEdge{*s, *d, r->second, weight});
  }
  std::sort(g.edges_.begin(), g.edges_.end(),
            [](const GraphEdge& a, const GraphEdge& b) {
              return std::tie(a.src, a.dst, a.relation) <
                     std::tie(b.src, b.dst, b.relation);
            });
  return g;
}

GraphParts KnowledgeGraph::to_parts() const {
  GraphParts parts;
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    GraphParts::NodeInfo info{n.hop, n.seed, std::nullopt};
    if (n.lookup != i) info.lookup = nodes_[n.lookup].name;
    parts.nodes.emplace(n.name, info);
  }
  for (const auto& r : relations_) parts.relations.emplace(r.label, r.category);
  for (const auto& e : edges_) {
    parts.edges.emplace(GraphParts::EdgeKey{nodes_[e.src].name,
                                            nodes_[e.dst].name,
                                            relations_[e.relation].label},
                        e.weight);
  }
  return parts;
}

std::optional<size_t> KnowledgeGraph::find(const ConceptId& c) const {
  const auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<size_t> KnowledgeGraph::seeds() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].seed != SeedLabel::kNone) out.push_back(i);
  }
  return out;
}

int KnowledgeGraph::max_hop() const {
  int h = 0;
  for (const auto& n : nodes_) h = std::max(h, n.hop);
  return h;
}

bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b) {
  if (a.nodes_.size() != b.nodes_.size() || a.edges_ != b.edges_ ||
      a.relations_ != b.relations_) {
    return false;
  }
  for (size_t i = 0; i < a.nodes_.size(); ++i) {
    const auto& x = a.nodes_[i];
    const auto& y = b.nodes_[i];
    if (x.name != y.name || x.hop != y.hop || x.seed != y.seed ||
        x.lookup != y.lookup) {
      return false;
    }
  }
  return true;
}

GraphStats graph_stats(const KnowledgeGraph& g) {
  GraphStats s;
  s.nodes = g.num_nodes();
  s.edges = g.edges().size();
  s.relation_types = g.relations().size();
  for (const auto& n : g.nodes()) {
    if (static_cast<size_t>(n.hop) >= s.per_hop.size()) {
      s.per_hop.resize(static_cast<size_t>(n.hop) + 1, 0);
    }
    ++s.per_hop[static_cast<size_t>(n.hop)];
  }
  return s;
}

void write_graph(std::ostream& out, const KnowledgeGraph& g) {
  out << "kgzsl-graph v1\n";
  out << "NODES " << g.num_nodes() << '\n';
  for (size_t i = 0; i < g.num_nodes(); ++i) {
    const auto& n = g.nodes()[i];
    out << i << '\t' << n.name.str() << '\t' << n.hop << '\t'
        << seed_label_name(n.seed) << '\t' << g.nodes()[n.lookup].name.str()
        << '\n';
  }
  out << "RELATIONS " << g.relations().size() << '\n';
  for (size_t i = 0; i < g.relations().size(); ++i) {
    const auto& r = g.relations()[i];
    out << i << '\t' << r.label << '\t' << relation_category_tag(r.category)
        << '\n';
  }
  out << "EDGES " << g.edges().size() << '\n';
  for (const auto& e : g.edges()) {
    out << e.src << '\t' << e.dst << '\t' << e.relation << '\t'
        << format_double(e.weight) << '\n';
  }
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::string_view next(const char* what) {
    while (std::getline(in_, line_)) {
      ++number_;
      if (!line_.empty() && line_.back() == '\r') line_.pop_back();
      const auto t = trim(line_);
      if (t.empty() || t.front() == '#') continue;
      return line_;
    }
    throw Error(ErrorCode::kMalformedLine,
                std::string("graph file ended while reading ") + what);
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::kMalformedLine,
                "graph file: " + why + " at line " + std::to_string(number_));
  }

  size_t section(std::string_view name) {
    const auto fields = split_whitespace(next(name.data()));
    const auto count = fields.size() == 2 ? parse_int(fields[1]) : std::nullopt;
    if (fields.size() != 2 || fields[0] != name || !count || *count < 0) {
      fail("expected '" + std::string(name) + " <count>'");
    }
    return static_cast<size_t>(*count);
  }

 private:
  std::istream& in_;
  std::string line_;
  size_t number_ = 0;
};

}  // namespace

KnowledgeGraph read_graph(std::istream& in) {
  LineReader reader(in);
  if (trim(reader.next("header")) != "kgzsl-graph v1") {
    reader.fail("unsupported graph header");
  }
  GraphParts parts;
  std::vector<ConceptId> names;
  std::vector<std::pair<size_t, std::string>> lookups;
  const size_t n = reader.section("NODES");
  for (size_t i = 0; i < n; ++i) {
    const auto f = split(reader.next("nodes"), '\t');
    const auto hop = f.size() == 5 ? parse_int(f[2]) : std::nullopt;
    if (f.size() != 5 || !hop) reader.fail("bad node record");
    ConceptId name{std::string(f[1])};
    GraphParts::NodeInfo info{static_cast<int>(*hop), parse_seed_label(f[3]),
                              std::nullopt};
    if (f[4] != f[1]) info.lookup = ConceptId(std::string(f[4]));
    names.push_back(name);
    parts.nodes.emplace(std::move(name), std::move(info));
  }
  std::vector<std::string> labels;
  const size_t r = reader.section("RELATIONS");
  for (size_t i = 0; i < r; ++i) {
    const auto f = split(reader.next("relations"), '\t');
    if (f.size() != 3) reader.fail("bad relation record");
    labels.emplace_back(f[1]);
    parts.relations.emplace(std::string(f[1]),
                            parse_relation_category(f[2]));
  }
  const size_t e = reader.section("EDGES");
  for (size_t i = 0; i < e; ++i) {
    const auto f = split(reader.next("edges"), '\t');
    if (f.size() != 4) reader.fail("bad edge record");
    const auto s = parse_int(f[0]);
    const auto d = parse_int(f[1]);
    const auto rel = parse_int(f[2]);
    const auto w = parse_double(f[3]);
    auto in_range = [](const std::optional<int64_t>& v, size_t bound) {
      return v && *v >= 0 && static_cast<size_t>(*v) < bound;
    };
    if (!in_range(s, n) || !in_range(d, n) || !in_range(rel, r) || !w) {
      reader.fail("bad edge record");
    }
    parts.edges.emplace(
        GraphParts::EdgeKey{names[static_cast<size_t>(*s)],
                            names[static_cast<size_t>(*d)],
                            labels[static_cast<size_t>(*rel)]},
        *w);
  }
  return KnowledgeGraph::from_parts(parts);
}

}  // namespace kgzsl::kg

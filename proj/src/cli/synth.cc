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

#include "kgzsl/cli/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "kgzsl/common/error.h"
#include "kgzsl/common/text.h"
#include "kgzsl/numerics/random.h"

namespace kgzsl::cli {

namespace fs = std::filesystem;
using kg::ConceptId;
using numerics::Rng;

namespace {

std::string numbered(const char* prefix, size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%02zu", prefix, i);
  return buf;
}

std::vector<double> unit(std::vector<double> v) {
  double n = 0.0;
  for (double x : v) n += x * x;
  n = std::sqrt(n);
  for (double& x : v) x /= n;
  return v;
}

std::vector<double> gaussian(size_t n, double stddev, Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = stddev * rng.normal();
  return v;
}

using Pair = std::pair<size_t, size_t>;

kg::SourceEdge edge(const std::string& a, const char* rel,
                    const std::string& b, double w) {
  return {ConceptId(a), ConceptId(b), {rel, kg::RelationCategory::kCommonSense},
          w};
}

}  // namespace

SynthWorld make_synth_world(const SynthSpec& spec) {
  const size_t k = spec.num_attributes;
  const size_t classes = spec.num_seen + spec.num_unseen;
  if (spec.num_seen < 2 || spec.num_unseen == 0 || k != 2 * spec.num_seen ||
      spec.num_unseen > spec.num_seen * (spec.num_seen - 1) / 2 ||
      spec.dim == 0 || spec.feature_dim == 0) {
    throw Error(ErrorCode::kConfig, "synthetic world sizes are inconsistent");
  }
  SynthWorld w;
  w.spec = spec;
  Rng rng(spec.seed);

  std::vector<std::vector<double>> attr;
  for (size_t i = 0; i < k; ++i) attr.push_back(unit(gaussian(spec.dim, 1.0, rng)));
  const auto true_vector = [&](Pair p) {
    std::vector<double> v = gaussian(spec.dim, 0.1 / std::sqrt(double(spec.dim)), rng);
    for (size_t d = 0; d < spec.dim; ++d) v[d] += attr[p.first][d] + attr[p.second][d];
    return unit(std::move(v));
  };

  std::vector<Pair> pairs;
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
  }
  // Seen classes split the attributes into disjoint pairs. Each unseen
  // class takes one attribute from each of two seen classes, and no two
  // unseen classes bridge the same two seen classes.
  std::vector<size_t> order(k);
  for (size_t i = 0; i < k; ++i) order[i] = i;
  rng.shuffle(std::span<size_t>(order));
  std::vector<Pair> class_pairs;
  for (size_t s = 0; s < spec.num_seen; ++s) {
    class_pairs.emplace_back(std::min(order[2 * s], order[2 * s + 1]),
                             std::max(order[2 * s], order[2 * s + 1]));
  }
  std::vector<Pair> bridges;
  for (size_t a = 0; a < spec.num_seen; ++a) {
    for (size_t b = a + 1; b < spec.num_seen; ++b) bridges.emplace_back(a, b);
  }
  rng.shuffle(std::span<Pair>(bridges));
  for (size_t u = 0; u < spec.num_unseen; ++u) {
    const Pair sa = class_pairs[bridges[u].first];
    const Pair sb = class_pairs[bridges[u].second];
    const size_t x = rng.uniform_index(2) ? sa.second : sa.first;
    const size_t y = rng.uniform_index(2) ? sb.second : sb.first;
    class_pairs.emplace_back(std::min(x, y), std::max(x, y));
  }

  std::vector<std::string> class_names;
  for (size_t c = 0; c < classes; ++c) {
    const bool seen = c < spec.num_seen;
    class_names.push_back(seen ? "seen_" + std::to_string(c)
                               : "unseen_" + std::to_string(c - spec.num_seen));
    w.seeds.push_back({class_names[c], seen ? kg::SeedLabel::kSeen
                                            : kg::SeedLabel::kUnseen});
    w.truth[ConceptId(class_names[c])] = true_vector(class_pairs[c]);
    w.taxonomy.emplace_back(ConceptId(class_names[c]), ConceptId("state"));
    for (size_t a : {class_pairs[c].first, class_pairs[c].second}) {
      w.edges.push_back(edge(class_names[c], "HasProperty",
                             numbered("attr", a), 2.0));
    }
  }
  for (size_t u = spec.num_seen; u < classes; ++u) {
    size_t best = 0;
    int best_overlap = -1;
    for (size_t s = 0; s < spec.num_seen; ++s) {
      const int overlap =
          (class_pairs[u].first == class_pairs[s].first) +
          (class_pairs[u].first == class_pairs[s].second) +
          (class_pairs[u].second == class_pairs[s].first) +
          (class_pairs[u].second == class_pairs[s].second);
      if (overlap > best_overlap) {
        best = s;
        best_overlap = overlap;
      }
    }
    w.edges.push_back(edge(class_names[u], "SimilarTo", class_names[best], 1.5));
  }

  for (size_t i = 0; i < k; ++i) {
    const std::string name = numbered("attr", i);
    w.anchors[ConceptId(name)] = attr[i];
    w.taxonomy.emplace_back(ConceptId(name), ConceptId("attribute"));
  }
  const std::set<Pair> taken(class_pairs.begin(), class_pairs.end());
  std::vector<Pair> object_pool;
  for (Pair p : pairs) {
    if (!taken.count(p)) object_pool.push_back(p);
  }
  std::vector<std::string> objects;
  for (size_t o = 0; o < spec.num_objects; ++o) {
    const Pair p = object_pool[rng.uniform_index(object_pool.size())];
    objects.push_back(numbered("object", o));
    w.anchors[ConceptId(objects.back())] = true_vector(p);
    w.taxonomy.emplace_back(ConceptId(objects.back()), ConceptId("object"));
    for (size_t a : {p.first, p.second}) {
      w.edges.push_back(edge(objects.back(), "HasProperty",
                             numbered("attr", a), 2.0));
    }
  }

  // Weak edges: object pairs and distractor concepts hanging off anything.
  std::vector<std::string> everything = class_names;
  everything.insert(everything.end(), objects.begin(), objects.end());
  for (size_t i = 0; i < k; ++i) everything.push_back(numbered("attr", i));
  std::set<std::pair<std::string, std::string>> weak;
  while (weak.size() < spec.num_objects / 2 && objects.size() > 1) {
    auto a = objects[rng.uniform_index(objects.size())];
    auto b = objects[rng.uniform_index(objects.size())];
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (weak.emplace(a, b).second) w.edges.push_back(edge(a, "RelatedTo", b, 0.5));
  }
  for (size_t d = 0; d < spec.num_distractors; ++d) {
    const std::string name = numbered("noise", d);
    w.taxonomy.emplace_back(ConceptId(name), ConceptId("misc"));
    w.edges.push_back(edge(name, "RelatedTo",
                           everything[rng.uniform_index(everything.size())],
                           0.5));
  }
  for (const char* group : {"state", "attribute", "object", "misc"}) {
    w.taxonomy.emplace_back(ConceptId(group), ConceptId("entity"));
  }
  std::sort(w.edges.begin(), w.edges.end());
  std::sort(w.taxonomy.begin(), w.taxonomy.end());

  // Features.
  const numerics::Matrix m = numerics::gaussian_matrix(
      spec.feature_dim, spec.dim, 1.0 / std::sqrt(double(spec.dim)), rng);
  auto& ds = w.dataset;
  ds.dim = spec.feature_dim;
  for (size_t c = 0; c < classes; ++c) {
    auto& side = c < spec.num_seen ? ds.classes.seen : ds.classes.unseen;
    side.emplace_back(class_names[c]);
  }
  std::sort(ds.classes.seen.begin(), ds.classes.seen.end());
  std::sort(ds.classes.unseen.begin(), ds.classes.unseen.end());
  const double noise = spec.feature_noise / std::sqrt(double(spec.feature_dim));
  const auto add = [&](zsl::Split split, size_t count, size_t num_labels,
                       const char* prefix) {
    for (size_t i = 0; i < count; ++i) {
      const size_t c = i % num_labels;
      const auto& t = w.truth.at(ConceptId(class_names[c]));
      zsl::FeatureItem item;
      item.id = numbered(prefix, i);
      item.split = split;
      item.label = ConceptId(class_names[c]);
      item.feature = gaussian(spec.feature_dim, noise, rng);
      for (size_t f = 0; f < spec.feature_dim; ++f) {
        for (size_t d = 0; d < spec.dim; ++d) item.feature[f] += m(f, d) * t[d];
      }
      ds.items.push_back(std::move(item));
    }
  };
  add(zsl::Split::kTrain, spec.train_samples, spec.num_seen, "train");
  add(zsl::Split::kVal, spec.val_samples, spec.num_seen, "val");
  add(zsl::Split::kTest, spec.test_samples, classes, "test");

  const numerics::Matrix p = numerics::gaussian_matrix(
      spec.node_vector_dim, spec.dim, 1.0 / std::sqrt(double(spec.dim)), rng);
  const double jitter =
      spec.node_vector_noise / std::sqrt(double(spec.node_vector_dim));
  for (size_t i = 0; i < k; ++i) {
    const auto& t = attr[i];
    auto v = gaussian(spec.node_vector_dim, jitter, rng);
    for (size_t r = 0; r < spec.node_vector_dim; ++r) {
      for (size_t d = 0; d < spec.dim; ++d) v[r] += p(r, d) * t[d];
    }
    w.node_vectors[ConceptId(numbered("attr", i))] = std::move(v);
  }
  ds.validate();
  return w;
}

nlohmann::json synth_config(const SynthSpec& spec) {
  nlohmann::json c;
  c["seed"] = spec.seed;
  c["name"] = "synth";
  c["paths"] = {{"conceptnet", "conceptnet.tsv"}, {"wordnet", "wordnet.tsv"},
                {"seeds", "seeds.tsv"},           {"anchors", "anchors.tsv"},
                {"node_vectors", "node_vectors.tsv"},
                {"features", "features.tsv"},     {"classes", "classes.tsv"},
                {"run_dir", "run"}};
  c["graph"] = {{"source", "CN"}, {"hops", 2}, {"rule", "all"}};
  c["gnn"] = {{"architecture", "Tr-GCN"},
              {"hidden", {64}},
              {"node_feature_dim", spec.node_vector_dim}};
  c["train"] = {{"epochs", 1000},
                {"val_fraction", 0.1},
                {"optimizer", "adam"},
                {"lr", 0.001},
                {"allow_missing_anchors", true}};
  c["finetune"] = {{"epochs", 50},
                   {"batch_size", 32},
                   {"optimizer", "sgd"},
                   {"lr", 0.01},
                   {"momentum", 0.9}};
  c["ablate"] = {{"architectures", {"GCN", "R-GCN", "LSTM", "Tr-GCN"}},
                 {"sources", {"CN", "WN", "CN+WN"}},
                 {"hops", {2, 3}},
                 {"policies", {"All", "TH"}},
                 {"baselines", {"none", "RN", "UN"}},
                 {"workers", 1}};
  return c;
}

void write_synth_world(const SynthWorld& world, const fs::path& dir) {
  fs::create_directories(dir);
  std::ostringstream edges, tax, seeds, anchors, truth, nodes, feats, classes;
  kg::write_edge_dump(edges, world.edges);
  for (const auto& [child, parent] : world.taxonomy) {
    tax << child.str() << '\t' << parent.str() << '\n';
  }
  for (const auto& s : world.seeds) {
    seeds << s.name << '\t' << kg::seed_label_name(s.label) << '\n';
  }
  gnn::write_concept_vectors(anchors, world.anchors);
  gnn::write_concept_vectors(truth, world.truth);
  gnn::write_concept_vectors(nodes, world.node_vectors);
  zsl::write_features(feats, world.dataset);
  zsl::write_classes(classes, world.dataset.classes);
  write_file(dir / "conceptnet.tsv", edges.str());
  write_file(dir / "wordnet.tsv", tax.str());
  write_file(dir / "seeds.tsv", seeds.str());
  write_file(dir / "anchors.tsv", anchors.str());
  write_file(dir / "truth.tsv", truth.str());
  write_file(dir / "node_vectors.tsv", nodes.str());
  write_file(dir / "features.tsv", feats.str());
  write_file(dir / "classes.tsv", classes.str());
  write_file(dir / "config.json", synth_config(world.spec).dump(2) + "\n");
}

}  // namespace kgzsl::cli

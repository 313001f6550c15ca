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

#ifndef KGZSL_CLI_SYNTH_H_
#define KGZSL_CLI_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "json.hpp"
#include "kgzsl/gnn/features.h"
#include "kgzsl/kg/builder.h"
#include "kgzsl/kg/source.h"
#include "kgzsl/kg/taxonomy.h"
#include "kgzsl/zsl/dataset.h"

namespace kgzsl::cli {

// Size knobs of a synthetic world.
struct SynthSpec {
  uint64_t seed = 0;
  size_t dim = 32;          // class embedding width D
  size_t feature_dim = 48;  // image feature width F
  size_t num_attributes = 10;  // twice num_seen
  size_t num_seen = 5;
  size_t num_unseen = 3;
  size_t num_objects = 40;  // anchors
  size_t num_distractors = 20;
  size_t train_samples = 200;
  size_t val_samples = 40;
  size_t test_samples = 200;
  double feature_noise = 0.3;
  size_t node_vector_dim = 32;
  double node_vector_noise = 0.3;
};

// Every class and object owns a true vector: the normalized sum of two
// attribute vectors plus a little jitter. Seen classes partition the
// attributes; each unseen class borrows one attribute from each of two
// seen classes. The ConceptNet-style dump links
// each class and object to its attributes with strong edges, each unseen
// class to the seen class sharing most attributes, and sprinkles weak
// distractor edges. Image features are x = M t + noise for the label's
// true vector t and one fixed random M.
struct SynthWorld {
  SynthSpec spec;
  std::vector<kg::SourceEdge> edges;
  std::vector<kg::Taxonomy::Entry> taxonomy;
  std::vector<kg::SeedSpec> seeds;
  gnn::ConceptVectors anchors;  // objects and attributes
  gnn::ConceptVectors truth;    // every class
  // Input vectors of the attributes: a fixed random image of their true
  // vectors plus noise. Classes and objects have none.
  gnn::ConceptVectors node_vectors;
  zsl::FeatureDataset dataset;
};

SynthWorld make_synth_world(const SynthSpec& spec);

// Starting config for a world: paths relative to its directory, desk-scale
// training settings.
nlohmann::json synth_config(const SynthSpec& spec);

// conceptnet.tsv, wordnet.tsv, seeds.tsv, anchors.tsv, truth.tsv,
// node_vectors.tsv, features.tsv, classes.tsv and config.json under `dir`.
void write_synth_world(const SynthWorld& world,
                       const std::filesystem::path& dir);

}  // namespace kgzsl::cli

#endif  // KGZSL_CLI_SYNTH_H_

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

#ifndef KGZSL_GNN_MODEL_H_
#define KGZSL_GNN_MODEL_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kgzsl/gnn/graph_view.h"
#include "kgzsl/gnn/layers.h"
#include "kgzsl/numerics/matrix.h"
#include "kgzsl/numerics/random.h"
#include "kgzsl/numerics/tape.h"

namespace kgzsl::gnn {

enum class Architecture { kGcn, kRgcn, kLstm, kTrGcn };

std::string_view architecture_name(Architecture a);  // GCN, R-GCN, LSTM, Tr-GCN
// Accepts the display names and lowercase aliases (gcn, rgcn, lstm, trgcn).
Architecture parse_architecture(std::string_view name);

struct GnnConfig {
  Architecture architecture = Architecture::kTrGcn;
  std::vector<size_t> layer_dims;  // d0, hidden..., D
  double leaky_alpha = 0.2;
  bool normalize_output = true;
  // Apply the nonlinearity after the last layer too. Off by default so the
  // output can take any sign before normalization.
  bool final_activation = false;
  size_t num_bases = 0;    // R-GCN; 0 means min(channels, 8)
  size_t lstm_hidden = 0;  // 0 means the layer's output width
  size_t proj_dim = 0;     // Tr-GCN; 0 means the layer's output width
  uint64_t order_seed = 0;  // LSTM neighbor order

  // Throws kConfig on an empty or zero-width layer chain.
  void validate() const;
  size_t num_layers() const { return layer_dims.size() - 1; }
  size_t input_dim() const { return layer_dims.front(); }
  size_t output_dim() const { return layer_dims.back(); }
};

// Graph-derived operators a model needs, computed once per graph.
struct PreparedGraph {
  GraphView view;
  SparseMatrix adjacency;
  std::vector<SparseMatrix> channels;
  std::vector<std::vector<size_t>> orders;
  Segments segments;

  static PreparedGraph build(GraphView view, const GnnConfig& config);
};

class GnnModel {
 public:
  struct Parameter {
    std::string name;
    numerics::Matrix value;
  };

  GnnModel() = default;

  // Glorot weights, zero biases.
  static GnnModel init(const GnnConfig& config, size_t num_relations,
                       numerics::Rng& rng);
  // Rebuilds a model from stored parameters; names and shapes must match
  // the layout implied by the config (kShapeMismatch otherwise).
  static GnnModel restore(const GnnConfig& config, size_t num_relations,
                          std::vector<Parameter> params);

  const GnnConfig& config() const { return config_; }
  size_t num_relations() const { return num_relations_; }
  bool uses_bases() const;
  size_t num_bases() const;

  std::vector<Parameter>& parameters() { return params_; }
  const std::vector<Parameter>& parameters() const { return params_; }

  // Records every parameter on the tape as a variable, in parameters()
  // order.
  std::vector<Var> bind(numerics::ad::Tape& tape) const;

  // Full stack. `params` comes from bind() (or any same-shaped handles).
  Var forward(const PreparedGraph& graph, Var features,
              std::span<const Var> params) const;

  // Forward pass with frozen parameters.
  numerics::Matrix infer(const PreparedGraph& graph,
                         const numerics::Matrix& features) const;

 private:
  Var layer(size_t l, const PreparedGraph& graph, Var h,
            std::span<const Var> params, size_t& cursor) const;

  GnnConfig config_;
  size_t num_relations_ = 0;
  std::vector<Parameter> params_;
};

// "kgzsl-gnn v1" header, config echo, then each parameter as a name line
// followed by a matrix block.
void write_checkpoint(std::ostream& out, const GnnModel& model);
GnnModel read_checkpoint(std::istream& in);

}  // namespace kgzsl::gnn

#endif  // KGZSL_GNN_MODEL_H_

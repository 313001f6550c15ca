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

#include "kgzsl/gnn/model.h"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "kgzsl/common/error.h"
#include "kgzsl/common/text.h"

namespace kgzsl::gnn {

namespace ad = numerics::ad;
using numerics::Matrix;

std::string_view architecture_name(Architecture a) {
  switch (a) {
    case Architecture::kGcn: return "GCN";
    case Architecture::kRgcn: return "R-GCN";
    case Architecture::kLstm: return "LSTM";
    case Architecture::kTrGcn: return "Tr-GCN";
  }
  return "?";
}

Architecture parse_architecture(std::string_view name) {
  std::string key;
  for (char c : name) {
    if (c != '-' && c != '_') key += static_cast<char>(std::tolower(c));
  }
  if (key == "gcn") return Architecture::kGcn;
  if (key == "rgcn") return Architecture::kRgcn;
  if (key == "lstm" || key == "lstmagg") return Architecture::kLstm;
  if (key == "trgcn") return Architecture::kTrGcn;
  throw Error(ErrorCode::kConfig,
              "unknown architecture '" + std::string(name) +
                  "' (expected GCN, R-GCN, LSTM or Tr-GCN)");
}

void GnnConfig::validate() const {
  if (layer_dims.size() < 2) {
    throw Error(ErrorCode::kConfig,
                "layer_dims needs an input and at least one layer");
  }
  for (size_t d : layer_dims) {
    if (d == 0) throw Error(ErrorCode::kConfig, "layer widths must be > 0");
  }
  if (!(leaky_alpha >= 0.0)) {
    throw Error(ErrorCode::kConfig, "leaky_alpha must be >= 0");
  }
}

PreparedGraph PreparedGraph::build(GraphView view, const GnnConfig& config) {
  PreparedGraph p;
  switch (config.architecture) {
    case Architecture::kGcn:
      p.adjacency = normalize_adjacency(view);
      break;
    case Architecture::kRgcn:
      p.channels = channel_mean_operators(view);
      break;
    case Architecture::kLstm:
      p.orders = neighbor_orders(view, config.order_seed);
      break;
    case Architecture::kTrGcn:
      p.segments = attention_segments(view);
      break;
  }
  p.view = std::move(view);
  return p;
}

namespace {

struct Slot {
  std::string name;
  size_t rows;
  size_t cols;
  bool bias;
};

std::vector<Slot> layout(const GnnConfig& c, size_t num_relations) {
  c.validate();
  std::vector<Slot> slots;
  const size_t channels = 2 * num_relations;
  const size_t bases = c.num_bases > 0 ? c.num_bases : std::min<size_t>(channels, 8);
  for (size_t l = 0; l < c.num_layers(); ++l) {
    const size_t in = c.layer_dims[l];
    const size_t out = c.layer_dims[l + 1];
    const std::string p = "l" + std::to_string(l) + ".";
    auto add = [&](std::string name, size_t r, size_t k, bool bias = false) {
      slots.push_back({p + name, r, k, bias});
    };
    switch (c.architecture) {
      case Architecture::kGcn:
        add("W", in, out);
        break;
      case Architecture::kRgcn:
        add("W0", in, out);
        if (bases > 0 && bases < channels) {
          for (size_t b = 0; b < bases; ++b) add("V" + std::to_string(b), in, out);
          add("A", channels, bases);
        } else {
          for (size_t r = 0; r < channels; ++r) {
            add("W" + std::to_string(r + 1), in, out);
          }
        }
        break;
      case Architecture::kLstm: {
        const size_t k = c.lstm_hidden > 0 ? c.lstm_hidden : out;
        add("Wx", in, 4 * k);
        add("Wh", k, 4 * k);
        add("b", 1, 4 * k, true);
        add("Wout", in + k, out);
        break;
      }
      case Architecture::kTrGcn: {
        const size_t q = c.proj_dim > 0 ? c.proj_dim : out;
        add("W1", in, q);
        add("b1", 1, q, true);
        add("W2", q, q);
        add("b2", 1, q, true);
        add("Q", q, q);
        add("K", q, q);
        add("V", q, q);
        add("Wout", in + q, out);
        break;
      }
    }
  }
  return slots;
}

}  // namespace

GnnModel GnnModel::init(const GnnConfig& config, size_t num_relations,
                        numerics::Rng& rng) {
  GnnModel m;
  m.config_ = config;
  m.num_relations_ = num_relations;
  for (const auto& s : layout(config, num_relations)) {
    m.params_.push_back({s.name, s.bias ? Matrix(s.rows, s.cols)
                                        : numerics::glorot_init(s.rows, s.cols, rng)});
  }
  return m;
}

GnnModel GnnModel::restore(const GnnConfig& config, size_t num_relations,
                           std::vector<Parameter> params) {
  const auto slots = layout(config, num_relations);
  check_shape(slots.size() == params.size(),
              "checkpoint has " + std::to_string(params.size()) +
                  " parameters, config implies " + std::to_string(slots.size()));
  for (size_t i = 0; i < slots.size(); ++i) {
    check_shape(params[i].name == slots[i].name &&
                    params[i].value.rows() == slots[i].rows &&
                    params[i].value.cols() == slots[i].cols,
                "checkpoint parameter '" + params[i].name +
                    "' does not match expected '" + slots[i].name + "'");
  }
  GnnModel m;
  m.config_ = config;
  m.num_relations_ = num_relations;
  m.params_ = std::move(params);
  return m;
}

size_t GnnModel::num_bases() const {
  return config_.num_bases > 0 ? config_.num_bases
                               : std::min<size_t>(2 * num_relations_, 8);
}

bool GnnModel::uses_bases() const {
  return config_.architecture == Architecture::kRgcn && num_bases() > 0 &&
         num_bases() < 2 * num_relations_;
}

std::vector<Var> GnnModel::bind(ad::Tape& tape) const {
  std::vector<Var> vars;
  vars.reserve(params_.size());
  for (const auto& p : params_) vars.push_back(tape.variable(p.value));
  return vars;
}

Var GnnModel::layer(size_t l, const PreparedGraph& graph, Var h,
                    std::span<const Var> params, size_t& cursor) const {
  auto next = [&]() { return params[cursor++]; };
  switch (config_.architecture) {
    case Architecture::kGcn:
      return gcn_layer(graph.adjacency, h, next());
    case Architecture::kRgcn: {
      RgcnWeights w;
      w.self = next();
      const size_t channels = 2 * num_relations_;
      if (uses_bases()) {
        std::vector<Var> bases;
        for (size_t b = 0; b < num_bases(); ++b) bases.push_back(next());
        w.channels = rgcn_basis_weights(next(), bases);
      } else {
        for (size_t c = 0; c < channels; ++c) w.channels.push_back(next());
      }
      return rgcn_layer(graph.channels, h, w);
    }
    case Architecture::kLstm: {
      LstmWeights w{next(), next(), next(), next()};
      return lstm_layer(graph.orders, h, w);
    }
    case Architecture::kTrGcn: {
      TrGcnWeights w;
      w.w1 = next();
      w.b1 = next();
      w.w2 = next();
      w.b2 = next();
      w.query = next();
      w.key = next();
      w.value = next();
      w.out = next();
      w.leaky_alpha = config_.leaky_alpha;
      return trgcn_layer(graph.segments, h, w);
    }
  }
  (void)l;
  throw Error(ErrorCode::kConfig, "unknown architecture");
}

Var GnnModel::forward(const PreparedGraph& graph, Var features,
                      std::span<const Var> params) const {
  check_shape(params.size() == params_.size(),
              "forward: expected " + std::to_string(params_.size()) +
                  " parameter handles");
  check_shape(features.rows() == graph.view.num_nodes &&
                  features.cols() == config_.input_dim(),
              "forward: features are " + std::to_string(features.rows()) + "x" +
                  std::to_string(features.cols()) + ", graph has " +
                  std::to_string(graph.view.num_nodes) + " nodes and model "
                  "input width is " + std::to_string(config_.input_dim()));
  check_shape(config_.architecture != Architecture::kRgcn ||
                  graph.view.num_relations == num_relations_,
              "forward: graph relation count differs from the model's");
  size_t cursor = 0;
  Var h = features;
  for (size_t l = 0; l < config_.num_layers(); ++l) {
    h = layer(l, graph, h, params, cursor);
    const bool last = l + 1 == config_.num_layers();
    if (!last || config_.final_activation) {
      h = ad::leaky_relu(h, config_.leaky_alpha);
    }
  }
  if (config_.normalize_output) h = ad::row_l2_normalize(h);
  return h;
}

Matrix GnnModel::infer(const PreparedGraph& graph,
                       const Matrix& features) const {
  ad::Tape tape;
  std::vector<Var> params;
  for (const auto& p : params_) params.push_back(tape.constant(p.value));
  return forward(graph, tape.constant(features), params).value();
}

void write_checkpoint(std::ostream& out, const GnnModel& model) {
  const auto& c = model.config();
  out << "kgzsl-gnn v1\n";
  out << "architecture " << architecture_name(c.architecture) << '\n';
  out << "layer_dims";
  for (size_t d : c.layer_dims) out << ' ' << d;
  out << '\n';
  out << "leaky_alpha " << format_double(c.leaky_alpha) << '\n';
  out << "normalize_output " << (c.normalize_output ? 1 : 0) << '\n';
  out << "final_activation " << (c.final_activation ? 1 : 0) << '\n';
  out << "num_bases " << c.num_bases << '\n';
  out << "lstm_hidden " << c.lstm_hidden << '\n';
  out << "proj_dim " << c.proj_dim << '\n';
  out << "order_seed " << c.order_seed << '\n';
  out << "num_relations " << model.num_relations() << '\n';
  out << "parameters " << model.parameters().size() << '\n';
  for (const auto& p : model.parameters()) {
    out << "param " << p.name << '\n';
    numerics::write_matrix(out, p.value);
  }
}

namespace {

std::vector<std::string_view> expect_line(std::istream& in, std::string& line,
                                          std::string_view key) {
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kMalformedLine,
                "checkpoint ended before '" + std::string(key) + "'");
  }
  auto fields = split_whitespace(line);
  if (fields.empty() || fields[0] != key) {
    throw Error(ErrorCode::kMalformedLine,
                "checkpoint: expected '" + std::string(key) + "', got '" +
                    line + "'");
  }
  return fields;
}

uint64_t expect_uint(std::istream& in, std::string& line, std::string_view key) {
  const auto f = expect_line(in, line, key);
  const auto v = f.size() == 2 ? parse_int(f[1]) : std::nullopt;
  if (!v || *v < 0) {
    throw Error(ErrorCode::kMalformedLine,
                "checkpoint: bad value for '" + std::string(key) + "'");
  }
  return static_cast<uint64_t>(*v);
}

}  // namespace

GnnModel read_checkpoint(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "kgzsl-gnn v1") {
    throw Error(ErrorCode::kMalformedLine, "not a kgzsl-gnn v1 checkpoint");
  }
  GnnConfig c;
  {
    const auto f = expect_line(in, line, "architecture");
    if (f.size() != 2) throw Error(ErrorCode::kMalformedLine, "bad architecture");
    c.architecture = parse_architecture(f[1]);
  }
  {
    const auto f = expect_line(in, line, "layer_dims");
    for (size_t i = 1; i < f.size(); ++i) {
      const auto d = parse_int(f[i]);
      if (!d || *d <= 0) throw Error(ErrorCode::kMalformedLine, "bad layer_dims");
      c.layer_dims.push_back(static_cast<size_t>(*d));
    }
  }
  {
    const auto f = expect_line(in, line, "leaky_alpha");
    const auto a = f.size() == 2 ? parse_double(f[1]) : std::nullopt;
    if (!a) throw Error(ErrorCode::kMalformedLine, "bad leaky_alpha");
    c.leaky_alpha = *a;
  }
  c.normalize_output = expect_uint(in, line, "normalize_output") != 0;
  c.final_activation = expect_uint(in, line, "final_activation") != 0;
  c.num_bases = expect_uint(in, line, "num_bases");
  c.lstm_hidden = expect_uint(in, line, "lstm_hidden");
  c.proj_dim = expect_uint(in, line, "proj_dim");
  c.order_seed = expect_uint(in, line, "order_seed");
  const size_t relations = expect_uint(in, line, "num_relations");
  const size_t count = expect_uint(in, line, "parameters");
  std::vector<GnnModel::Parameter> params;
  for (size_t i = 0; i < count; ++i) {
    const auto f = expect_line(in, line, "param");
    if (f.size() != 2) throw Error(ErrorCode::kMalformedLine, "bad param line");
    params.push_back({std::string(f[1]), numerics::read_matrix(in)});
  }
  return GnnModel::restore(c, relations, std::move(params));
}

}  // namespace kgzsl::gnn

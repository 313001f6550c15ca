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

#ifndef KGZSL_NUMERICS_OPTIM_H_
#define KGZSL_NUMERICS_OPTIM_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kgzsl/numerics/matrix.h"

namespace kgzsl::numerics {

struct AdamState {
  std::vector<Matrix> first_moment;
  std::vector<Matrix> second_moment;
  int64_t step = 0;
};

struct MomentumState {
  std::vector<Matrix> velocity;
  int64_t step = 0;
};

// Bias-corrected Adam. State buffers are created on first use.
void adam_step(std::span<Matrix> params, std::span<const Matrix> grads,
               AdamState& state, double lr, double beta1 = 0.9,
               double beta2 = 0.999, double eps = 1e-8);

// v <- momentum * v + g;  theta <- theta - lr * v.
void sgd_momentum_step(std::span<Matrix> params,
                       std::span<const Matrix> grads, MomentumState& state,
                       double lr = 1e-4, double momentum = 0.9);

enum class OptimizerKind { kAdam, kSgdMomentum };

struct OptimizerSpec {
  OptimizerKind kind = OptimizerKind::kAdam;
  double lr = 1e-3;
  double momentum = 0.9;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

OptimizerKind parse_optimizer_kind(const std::string& name);
std::string optimizer_kind_name(OptimizerKind kind);

// Config-selected optimizer owning its state.
class Optimizer {
 public:
  explicit Optimizer(OptimizerSpec spec) : spec_(spec) {}

  void step(std::span<Matrix> params, std::span<const Matrix> grads);
  const OptimizerSpec& spec() const { return spec_; }

 private:
  OptimizerSpec spec_;
  AdamState adam_;
  MomentumState momentum_;
};

}  // namespace kgzsl::numerics

#endif  // KGZSL_NUMERICS_OPTIM_H_

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

#include "kgzsl/numerics/optim.h"

#include <cmath>

#include "kgzsl/common/error.h"

namespace kgzsl::numerics {

namespace {

void check_pairs(std::span<Matrix> params, std::span<const Matrix> grads,
                 const char* who) {
  check_shape(params.size() == grads.size(),
              std::string(who) + ": parameter/gradient count mismatch");
  for (size_t i = 0; i < params.size(); ++i) {
    check_shape(params[i].same_shape(grads[i]),
                std::string(who) + ": gradient shape mismatch for parameter " +
                    std::to_string(i));
  }
}

void ensure_buffers(std::vector<Matrix>& buffers,
                    std::span<const Matrix> params, const char* who) {
  if (buffers.empty()) {
    for (const Matrix& p : params) buffers.emplace_back(p.rows(), p.cols());
    return;
  }
  check_shape(buffers.size() == params.size(),
              std::string(who) + ": optimizer state covers other parameters");
  for (size_t i = 0; i < params.size(); ++i) {
    check_shape(buffers[i].same_shape(params[i]),
                std::string(who) + ": state buffer shape mismatch");
  }
}

}  // namespace

void adam_step(std::span<Matrix> params, std::span<const Matrix> grads,
               AdamState& state, double lr, double beta1, double beta2,
               double eps) {
  check_pairs(params, grads, "adam_step");
  ensure_buffers(state.first_moment, params, "adam_step");
  ensure_buffers(state.second_moment, params, "adam_step");
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(beta1, t);
  const double correction2 = 1.0 - std::pow(beta2, t);
  for (size_t i = 0; i < params.size(); ++i) {
    auto p = params[i].values();
    const auto g = grads[i].values();
    auto m = state.first_moment[i].values();
    auto v = state.second_moment[i].values();
    for (size_t j = 0; j < p.size(); ++j) {
      m[j] = beta1 * m[j] + (1.0 - beta1) * g[j];
      v[j] = beta2 * v[j] + (1.0 - beta2) * g[j] * g[j];
      const double m_hat = m[j] / correction1;
      const double v_hat = v[j] / correction2;
      p[j] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
  }
}

void sgd_momentum_step(std::span<Matrix> params,
                       std::span<const Matrix> grads, MomentumState& state,
                       double lr, double momentum) {
  check_pairs(params, grads, "sgd_momentum_step");
  ensure_buffers(state.velocity, params, "sgd_momentum_step");
  ++state.step;
  for (size_t i = 0; i < params.size(); ++i) {
    auto p = params[i].values();
    const auto g = grads[i].values();
    auto v = state.velocity[i].values();
    for (size_t j = 0; j < p.size(); ++j) {
      v[j] = momentum * v[j] + g[j];
      p[j] -= lr * v[j];
    }
  }
}

OptimizerKind parse_optimizer_kind(const std::string& name) {
  if (name == "adam") return OptimizerKind::kAdam;
  if (name == "sgd" || name == "sgd_momentum") {
    return OptimizerKind::kSgdMomentum;
  }
  throw Error(ErrorCode::kConfig, "unknown optimizer '" + name + "'");
}

std::string optimizer_kind_name(OptimizerKind kind) {
  return kind == OptimizerKind::kAdam ? "adam" : "sgd";
}

void Optimizer::step(std::span<Matrix> params, std::span<const Matrix> grads) {
  switch (spec_.kind) {
    case OptimizerKind::kAdam:
      adam_step(params, grads, adam_, spec_.lr, spec_.beta1, spec_.beta2,
                spec_.eps);
      break;
    case OptimizerKind::kSgdMomentum:
      sgd_momentum_step(params, grads, momentum_, spec_.lr, spec_.momentum);
      break;
  }
}

}  // namespace kgzsl::numerics

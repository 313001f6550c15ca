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

#ifndef KGZSL_TESTS_TESTING_GRADCHECK_H_
#define KGZSL_TESTS_TESTING_GRADCHECK_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "kgzsl/numerics/matrix.h"
#include "kgzsl/numerics/tape.h"

namespace kgzsl::testing {

// Builds a scalar loss on `tape` from variables bound to `params`.
using LossBuilder = std::function<numerics::ad::Var(
    numerics::ad::Tape&, std::span<const numerics::ad::Var>)>;

struct GradCheckResult {
  double max_rel_error = 0.0;
  size_t entries = 0;
};

// Central finite differences against the tape's analytic gradients.
// Relative error per entry is |a - n| / max(|a| + |n|, floor).
inline GradCheckResult gradient_check(std::vector<numerics::Matrix> params,
                                      const LossBuilder& build,
                                      double eps = 1e-5, double floor = 1e-6) {
  using numerics::ad::Tape;
  using numerics::ad::Var;
  auto evaluate = [&](const std::vector<numerics::Matrix>& ps) {
    Tape tape;
    std::vector<Var> vars;
    for (const auto& p : ps) vars.push_back(tape.constant(p));
    return build(tape, vars).value()(0, 0);
  };

  std::vector<numerics::Matrix> analytic;
  {
    Tape tape;
    std::vector<Var> vars;
    for (const auto& p : params) vars.push_back(tape.variable(p));
    const Var loss = build(tape, vars);
    tape.backward(loss);
    for (const Var& v : vars) analytic.push_back(tape.grad(v));
  }

  GradCheckResult result;
  for (size_t p = 0; p < params.size(); ++p) {
    for (size_t i = 0; i < params[p].size(); ++i) {
      const double original = params[p].values()[i];
      params[p].values()[i] = original + eps;
      const double up = evaluate(params);
      params[p].values()[i] = original - eps;
      const double down = evaluate(params);
      params[p].values()[i] = original;
      const double numeric = (up - down) / (2.0 * eps);
      const double a = analytic[p].values()[i];
      const double denom = std::max(std::abs(a) + std::abs(numeric), floor);
      result.max_rel_error =
          std::max(result.max_rel_error, std::abs(a - numeric) / denom);
      ++result.entries;
    }
  }
  return result;
}

}  // namespace kgzsl::testing

#endif  // KGZSL_TESTS_TESTING_GRADCHECK_H_

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

#ifndef KGZSL_CLI_COMMANDS_H_
#define KGZSL_CLI_COMMANDS_H_

#include <iosfwd>

namespace kgzsl::cli {

// Entry point of the `kgzsl` tool. Errors are written to `err` as one JSON
// record {"error", "category", "message"}; the return value is the exit
// code (0 success, 1 usage or config, 2 data, 3 numeric).
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace kgzsl::cli

#endif  // KGZSL_CLI_COMMANDS_H_

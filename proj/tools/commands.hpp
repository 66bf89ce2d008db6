// Copyright 2026 The Scene Placer Authors. All rights reserved.
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

#ifndef SCENE_PLACER_TOOLS_COMMANDS_HPP_
#define SCENE_PLACER_TOOLS_COMMANDS_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace scene_placer::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

/// Entry point shared by the executable and the tests. `args` excludes
/// the program name.
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

}  // namespace scene_placer::cli

#endif  // SCENE_PLACER_TOOLS_COMMANDS_HPP_

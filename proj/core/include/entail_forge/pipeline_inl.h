// Copyright 2026 The entail-forge Authors.
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

#ifndef ENTAIL_FORGE_PIPELINE_INL_H_
#define ENTAIL_FORGE_PIPELINE_INL_H_

#include <string_view>

#include "entail_forge/error.h"

namespace entail_forge::pipeline {

// Rethrows e as the same error kind with "stage: " prepended.
[[noreturn]] void rethrow_in_stage(const Error& e, std::string_view stage);

template <typename Fn>
auto run_stage(std::string_view stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    rethrow_in_stage(e, stage);
  }
}

}  // namespace entail_forge::pipeline

#endif  // ENTAIL_FORGE_PIPELINE_INL_H_

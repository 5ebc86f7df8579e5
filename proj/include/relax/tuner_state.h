// Copyright 2026 The Relax Authors. All rights reserved.
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

#ifndef RELAX_TUNER_STATE_H_
#define RELAX_TUNER_STATE_H_

#include <string>
#include <string_view>

#include "relax/policies.h"

namespace relax {

inline constexpr std::string_view kTunerStateSchema = "relax.tuner_state";
inline constexpr int kTunerStateVersion = 1;

// Versioned JSON checkpoint of a learning policy, taken between rounds.
// Layout is documented in docs/tuner_state.md. Comparator policies carry no
// state and are rejected.
std::string save_tuner_state(const Policy& policy);

// Overwrites the learned state of `policy`. The document's kind, grid and
// hyperparameters must match the policy; mismatches throw ParameterError.
void restore_tuner_state(Policy& policy, std::string_view document);

}  // namespace relax

#endif  // RELAX_TUNER_STATE_H_

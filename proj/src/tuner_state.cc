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

#include "relax/tuner_state.h"

#include <json.hpp>

#include "relax/error.h"

namespace relax {

struct TunerStateAccess {
  static std::vector<TsallisState>& states(ContextualTsallis& t) {
    return t.states_;
  }
  static std::size_t& clamped(ContextualTsallis& t) { return t.clamped_; }
  static std::size_t& clamped(ChebCB& t) { return t.clamped_; }
  static std::vector<ChebArm>& arms(ChebCB& t) { return t.arms_; }
  static double n_norm(const ChebCB& t) { return t.n_norm_; }
  static double gamma(const ChebCB& t) { return t.gamma_; }
};

namespace {

using nlohmann::json;

json TsallisToJson(const TsallisState& s) {
  return json{{"normalization", s.normalization},
              {"step_mode", s.step_mode == StepMode::kFixed ? "fixed" : "anytime"},
              {"horizon", s.horizon},
              {"round", s.round},
              {"eta_scale", s.eta_scale},
              {"cum_cost", s.cum_cost},
              {"last_probabilities", s.last_probabilities}};
}

void TsallisFromJson(const json& j, TsallisState& s) {
  const auto cum = j.at("cum_cost").get<std::vector<double>>();
  if (cum.size() != s.cum_cost.size()) {
    throw ParameterError("tuner state has the wrong number of arms");
  }
  const std::string mode = j.at("step_mode").get<std::string>();
  if (mode != "fixed" && mode != "anytime") {
    throw ParameterError("unknown step_mode '" + mode + "'");
  }
  s.normalization = j.at("normalization").get<double>();
  s.step_mode = mode == "fixed" ? StepMode::kFixed : StepMode::kAnytime;
  s.horizon = j.at("horizon").get<std::size_t>();
  s.round = j.at("round").get<std::size_t>();
  s.eta_scale = j.at("eta_scale").get<double>();
  s.cum_cost = cum;
  s.last_probabilities = j.at("last_probabilities").get<std::vector<double>>();
}

json Header(std::string_view kind, const ActionGrid& grid) {
  return json{{"schema", kTunerStateSchema},
              {"version", kTunerStateVersion},
              {"kind", kind},
              {"grid", grid.values()}};
}

void CheckHeader(const json& j, std::string_view kind, const ActionGrid& grid) {
  if (j.at("schema").get<std::string>() != kTunerStateSchema) {
    throw ParameterError("not a tuner state document");
  }
  if (j.at("version").get<int>() != kTunerStateVersion) {
    throw ParameterError("unsupported tuner state version");
  }
  if (j.at("kind").get<std::string>() != kind) {
    throw ParameterError("tuner state kind mismatch: expected " +
                         std::string(kind));
  }
  if (j.at("grid").get<std::vector<double>>() != grid.values()) {
    throw ParameterError("tuner state grid mismatch");
  }
}

void CheckEqual(const json& j, const char* key, double expected) {
  if (j.at(key).get<double>() != expected) {
    throw ParameterError(std::string("tuner state mismatch in ") + key);
  }
}

}  // namespace

std::string save_tuner_state(const Policy& policy) {
  if (const auto* p = dynamic_cast<const TsallisPolicy*>(&policy)) {
    json j = Header("tsallis", p->grid());
    j["state"] = TsallisToJson(p->state());
    return j.dump();
  }
  if (const auto* p = dynamic_cast<const ContextualPolicy*>(&policy)) {
    const ContextualTsallis& t = p->tuner();
    json j = Header("contextual", t.grid());
    j["c_min"] = t.c_min();
    j["range"] = t.range();
    j["clamped_contexts"] = t.clamped_contexts();
    json bins = json::array();
    for (const TsallisState& s : t.states()) bins.push_back(TsallisToJson(s));
    j["bins"] = std::move(bins);
    return j.dump();
  }
  if (const auto* p = dynamic_cast<const ChebCBPolicy*>(&policy)) {
    const ChebCB& t = p->tuner();
    json j = Header("chebcb", t.grid());
    const ChebConfig& c = t.config();
    j["degree"] = c.degree;
    j["c_min"] = c.c_min;
    j["range"] = c.range;
    j["normalization"] = c.normalization;
    j["lipschitz"] = c.lipschitz;
    j["n_norm"] = TunerStateAccess::n_norm(t);
    j["gamma"] = TunerStateAccess::gamma(t);
    j["clamped_contexts"] = t.clamped_contexts();
    json arms = json::array();
    for (const ChebArm& a : t.arms()) {
      arms.push_back(json{{"theta", a.theta},
                          {"contexts", a.contexts},
                          {"targets", a.targets}});
    }
    j["arms"] = std::move(arms);
    return j.dump();
  }
  throw ParameterError("policy '" + policy.name() + "' has no learned state");
}

void restore_tuner_state(Policy& policy, std::string_view document) {
  json j;
  try {
    j = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParameterError(std::string("malformed tuner state: ") + e.what());
  }
  try {
    if (auto* p = dynamic_cast<TsallisPolicy*>(&policy)) {
      CheckHeader(j, "tsallis", p->grid());
      TsallisFromJson(j.at("state"), p->state());
      return;
    }
    if (auto* p = dynamic_cast<ContextualPolicy*>(&policy)) {
      ContextualTsallis& t = p->tuner();
      CheckHeader(j, "contextual", t.grid());
      CheckEqual(j, "c_min", t.c_min());
      CheckEqual(j, "range", t.range());
      const json& bins = j.at("bins");
      auto& states = TunerStateAccess::states(t);
      if (bins.size() != states.size()) {
        throw ParameterError("tuner state has the wrong number of bins");
      }
      for (std::size_t b = 0; b < states.size(); ++b) {
        TsallisFromJson(bins[b], states[b]);
      }
      TunerStateAccess::clamped(t) = j.at("clamped_contexts").get<std::size_t>();
      return;
    }
    if (auto* p = dynamic_cast<ChebCBPolicy*>(&policy)) {
      ChebCB& t = p->tuner();
      CheckHeader(j, "chebcb", t.grid());
      const ChebConfig& c = t.config();
      CheckEqual(j, "degree", static_cast<double>(c.degree));
      CheckEqual(j, "c_min", c.c_min);
      CheckEqual(j, "range", c.range);
      CheckEqual(j, "normalization", c.normalization);
      CheckEqual(j, "lipschitz", c.lipschitz);
      CheckEqual(j, "n_norm", TunerStateAccess::n_norm(t));
      CheckEqual(j, "gamma", TunerStateAccess::gamma(t));
      const json& arms = j.at("arms");
      if (arms.size() != t.arms().size()) {
        throw ParameterError("tuner state has the wrong number of arms");
      }
      for (std::size_t i = 0; i < arms.size(); ++i) {
        const auto contexts = arms[i].at("contexts").get<std::vector<double>>();
        const auto targets = arms[i].at("targets").get<std::vector<double>>();
        t.restore_arm(i, contexts, targets);
        auto theta = arms[i].at("theta").get<std::vector<double>>();
        if (theta.size() != c.degree + 1) {
          throw ParameterError("tuner state theta has the wrong length");
        }
        TunerStateAccess::arms(t)[i].theta = std::move(theta);
      }
      TunerStateAccess::clamped(t) = j.at("clamped_contexts").get<std::size_t>();
      return;
    }
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed tuner state: ") + e.what());
  }
  throw ParameterError("policy '" + policy.name() + "' has no learned state");
}

}  // namespace relax

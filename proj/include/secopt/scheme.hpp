// Copyright 2026 The secopt Authors
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

#pragma once

#include <optional>
#include <string_view>

#include "secopt/config.hpp"

namespace secopt {

enum class SchemeKind { ARIS_RSMA, ARIS_SDMA, PRIS_RSMA, PRIS_SDMA };

/// Benchmark variant. Passive schemes cap the reflection amplitude at 1,
/// amplify nothing (no dynamic noise) and carry no RIS power budget; SDMA
/// schemes transmit no common stream and allocate no common rate.
struct Scheme {
  SchemeKind kind = SchemeKind::ARIS_RSMA;

  bool rsma() const { return kind == SchemeKind::ARIS_RSMA || kind == SchemeKind::PRIS_RSMA; }
  bool active_ris() const {
    return kind == SchemeKind::ARIS_RSMA || kind == SchemeKind::ARIS_SDMA;
  }
  const char* name() const {
    switch (kind) {
      case SchemeKind::ARIS_RSMA: return "ARIS-RSMA";
      case SchemeKind::ARIS_SDMA: return "ARIS-SDMA";
      case SchemeKind::PRIS_RSMA: return "PRIS-RSMA";
      case SchemeKind::PRIS_SDMA: return "PRIS-SDMA";
    }
    return "?";
  }

  static std::optional<Scheme> parse(std::string_view s) {
    if (s == "ARIS-RSMA" || s == "aris-rsma") return Scheme{SchemeKind::ARIS_RSMA};
    if (s == "ARIS-SDMA" || s == "aris-sdma") return Scheme{SchemeKind::ARIS_SDMA};
    if (s == "PRIS-RSMA" || s == "pris-rsma") return Scheme{SchemeKind::PRIS_RSMA};
    if (s == "PRIS-SDMA" || s == "pris-sdma") return Scheme{SchemeKind::PRIS_SDMA};
    return std::nullopt;
  }
};

/// Scheme-effective physical parameters: passive RIS forces beta_max = 1 and
/// sigma_R^2 = 0. Every model evaluation for a scheme run uses this view.
inline PhysicalParams apply_scheme(PhysicalParams p, Scheme s) {
  if (!s.active_ris()) {
    p.beta_max = 1.0;
    p.sigma2_ris = 0.0;
  }
  return p;
}

}  // namespace secopt

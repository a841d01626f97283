// Copyright 2026 The superchern Authors
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

// JSON Schema of the experiment config, printed by `superchern schema`.

#include <superchern/json_io.hpp>

namespace superchern::cli {

inline json config_schema() {
  static const char* kSchema = R"json({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "superchern experiment config",
  "type": "object",
  "required": ["experiment"],
  "additionalProperties": false,
  "properties": {
    "experiment": {"enum": ["chern-closedness", "transgression", "chern-simons-stokes", "mckean-singer",
                            "local-index-scan", "asymptotic-fit", "eta", "tau", "detline-curvature",
                            "detline-holonomy", "getzler-limit"]},
    "description": {"type": "string"},
    "model": {"$ref": "#/$defs/model"},
    "models": {"type": "array", "items": {"$ref": "#/$defs/model"}, "minItems": 1},
    "model0": {"$ref": "#/$defs/model"},
    "output": {"type": "string"},
    "seed": {"type": "integer", "minimum": 0},
    "K": {"type": "integer", "minimum": 1},
    "grid_N": {"type": "integer", "minimum": 2, "description": "power of two, at least 2 * bandwidth + 2"},
    "t_list": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}, "minItems": 1,
               "description": "heat times; every t must satisfy t * K^2 >= 20"},
    "s_list": {"type": "array", "items": {"type": "number", "not": {"const": 0}}},
    "t": {"type": "number", "minimum": 0, "maximum": 1},
    "h": {"type": "number", "exclusiveMinimum": 0},
    "quad_order": {"type": "integer", "minimum": 1},
    "quad_orders": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
    "terms": {"type": "integer", "minimum": 1},
    "point": {"type": "array", "items": {"type": "number"}},
    "a": {"oneOf": [{"type": "number"}, {"type": "array", "items": {"type": "number"}}]},
    "expected": {"oneOf": [{"type": "number"}, {"type": "array", "items": {"type": "number"}}]},
    "shift": {"$ref": "#/$defs/form"},
    "loop": {
      "type": "object",
      "required": ["vertices"],
      "properties": {
        "vertices": {"type": "array", "minItems": 2,
                     "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}},
        "quad_order": {"type": "integer", "minimum": 1},
        "panels": {"type": "integer", "minimum": 1}
      }
    },
    "frame": {"enum": ["global", "section"]},
    "n": {"type": "integer", "minimum": 1, "maximum": 4},
    "monomials": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 1}}},
    "levels": {"type": "array", "items": {"type": "integer", "minimum": 0}},
    "eps_list": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}},
    "tolerances": {"type": "object", "additionalProperties": {"type": "number", "minimum": 0}}
  },
  "$defs": {
    "model": {"oneOf": [{"type": "string", "description": "name of a shipped model"},
                        {"$ref": "#/$defs/superconnection"},
                        {"type": "object", "required": ["superconnection"]}]},
    "fibre": {"type": "object", "required": ["even", "odd"],
              "properties": {"even": {"type": "integer", "minimum": 0}, "odd": {"type": "integer", "minimum": 0}}},
    "matrix": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
    "form": {
      "type": "object",
      "required": ["n", "K", "components"],
      "properties": {
        "n": {"type": "integer", "minimum": 1, "maximum": 4},
        "K": {"type": "integer", "minimum": 0},
        "parity": {"enum": ["even", "odd", "mixed"]},
        "fibre": {"$ref": "#/$defs/fibre"},
        "components": {"type": "array", "items": {
          "type": "object", "required": ["I", "coeffs"],
          "properties": {
            "I": {"type": "array", "items": {"type": "integer", "minimum": 1}},
            "coeffs": {"type": "array", "items": {
              "type": "object", "required": ["k", "re"],
              "properties": {"k": {"type": "array", "items": {"type": "integer"}},
                             "re": {"$ref": "#/$defs/matrix"}, "im": {"$ref": "#/$defs/matrix"}}}}}}}
      }
    },
    "superconnection": {
      "type": "object",
      "required": ["n", "fibre"],
      "properties": {
        "n": {"type": "integer", "minimum": 1, "maximum": 4},
        "fibre": {"$ref": "#/$defs/fibre"},
        "A": {"$ref": "#/$defs/form"},
        "omegas": {"type": "array", "items": {"type": "object", "required": ["degree", "form"],
                   "properties": {"degree": {"type": "integer", "minimum": 0, "not": {"const": 1}},
                                  "form": {"$ref": "#/$defs/form"}}}},
        "scale": {"type": "number", "not": {"const": 0}}
      }
    }
  }
})json";
  return json::parse(kSchema);
}

}  // namespace superchern::cli

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
#include "test_support.hpp"

#include <gtest/gtest.h>

namespace superchern {
namespace {

using testing::load_model;
using testing::Rng;

json minimal_form() {
  return json::parse(R"({"n": 2, "K": 1, "components": [{"I": [1], "coeffs": [{"k": [1, 0], "re": [[0.5]]}]}]})");
}

TEST(JsonIo, FormRoundTrip) {
  Rng rng;
  for (GradedDim fib : {GradedDim{1, 0}, GradedDim{1, 1}, GradedDim{2, 1}}) {
    for (int n = 1; n <= 4; ++n) {
      const FormField f = rng.form(n, fib, n <= 2 ? 2 : 1);
      const FormField g = form_from_json(json::parse(form_to_json(f).dump()));
      EXPECT_EQ((f - g).max_coeff(), 0.0) << "n=" << n;
      EXPECT_EQ(g.fibre(), fib);
    }
  }
}

TEST(JsonIo, SuperconnectionRoundTrip) {
  for (const char* name : {"circle-super", "t2-mixed", "t2-nonabelian", "detline-winding"}) {
    const Superconnection s = scale_action(load_model(name), 2.5);
    const Superconnection t = superconnection_from_json(json::parse(superconnection_to_json(s).dump()));
    EXPECT_EQ(t.scale(), 2.5) << name;
    EXPECT_EQ((t.odd_part() - s.odd_part()).max_coeff(), 0.0) << name;
    EXPECT_EQ(t.omegas().size(), s.omegas().size()) << name;
  }
}

TEST(JsonIo, FormDefaults) {
  const FormField f = form_from_json(minimal_form());
  EXPECT_EQ(f.fibre(), (GradedDim{1, 0}));
  EXPECT_EQ(f.component(1U).coeff(Freq{1, 0})(0, 0), cplx{0.5});
  EXPECT_EQ(f.parity(), Parity::odd);
  EXPECT_EQ(form_from_json(minimal_form(), GradedDim{1, 0}).fibre(), (GradedDim{1, 0}));
}

TEST(JsonIo, FormSchemaErrors) {
  auto expect_schema_error = [](const std::function<void(json&)>& edit) {
    json j = minimal_form();
    edit(j);
    EXPECT_THROW(form_from_json(j), SchemaError) << j.dump();
  };
  expect_schema_error([](json& j) { j.erase("n"); });
  expect_schema_error([](json& j) { j["n"] = 5; });
  expect_schema_error([](json& j) { j["n"] = "two"; });
  expect_schema_error([](json& j) { j["K"] = -1; });
  expect_schema_error([](json& j) { j["K"] = 0; });
  expect_schema_error([](json& j) { j["components"] = 3; });
  expect_schema_error([](json& j) { j["components"][0]["I"] = {2, 1}; });
  expect_schema_error([](json& j) { j["components"][0]["I"] = {3}; });
  expect_schema_error([](json& j) { j["components"][0]["coeffs"][0]["k"] = {1}; });
  expect_schema_error([](json& j) { j["components"][0]["coeffs"][0]["re"] = {{0.5, 0.0}}; });
  expect_schema_error([](json& j) { j["components"][0]["coeffs"][0]["re"] = {{"x"}}; });
  expect_schema_error([](json& j) { j["components"][0]["coeffs"][0]["im"] = {{0.1, 0.2}}; });
  expect_schema_error([](json& j) { j["parity"] = "even"; });
  expect_schema_error([](json& j) { j["parity"] = "odd-ish"; });
  expect_schema_error([](json& j) { j["fibre"] = {{"even", -1}, {"odd", 1}}; });
  json j = minimal_form();
  EXPECT_THROW(form_from_json(j, GradedDim{1, 1}), SchemaError);
  j["fibre"] = {{"even", 1}, {"odd", 0}};
  EXPECT_THROW(form_from_json(j, GradedDim{1, 1}), SchemaError);
}

TEST(JsonIo, SuperconnectionSchemaErrors) {
  json base = superconnection_to_json(load_model("t2-mixed"));
  json j = base;
  j.erase("fibre");
  EXPECT_THROW(superconnection_from_json(j), SchemaError);
  j = base;
  j["omegas"][0]["degree"] = 1;
  EXPECT_THROW(superconnection_from_json(j), SchemaError);
  j = base;
  j["scale"] = 0.0;
  EXPECT_THROW(superconnection_from_json(j), SchemaError);
  j = base;
  j["A"]["n"] = 1;
  EXPECT_THROW(superconnection_from_json(j), SchemaError);
  j = base;
  j["omegas"] = "none";
  EXPECT_THROW(superconnection_from_json(j), SchemaError);
}

TEST(JsonIo, LoopAndFiles) {
  const LoopDescriptor loop = loop_from_json(json::parse(R"({"vertices": [[0, 0], [1, 0], [1, 1]], "quad_order": 8})"));
  EXPECT_EQ(loop.vertices.size(), 3U);
  EXPECT_EQ(loop.quad_order, 8);
  EXPECT_EQ(loop.panels, 8);
  EXPECT_THROW(loop_from_json(json::parse(R"({"vertices": [[0, 0]]})")), SchemaError);
  EXPECT_THROW(loop_from_json(json::parse(R"({"vertices": [[0, 0], [1]]})")), SchemaError);
  EXPECT_THROW(loop_from_json(json::parse(R"({"vertices": [[0, 0], [1, 1]], "panels": 0})")), SchemaError);
  EXPECT_THROW(read_json_file("/nonexistent/superchern.json"), SchemaError);
}

}  // namespace
}  // namespace superchern

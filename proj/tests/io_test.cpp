// Copyright 2026 The Spinshape Authors
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

#include "spinshape/io.hpp"

#include <gtest/gtest.h>

#include <charconv>
#include <cmath>
#include <limits>
#include <random>

#include "spinshape/errors.hpp"

namespace spinshape {
namespace {

TEST(NetworkJson, UniformRingRoundTrip) {
  const SpinNetwork net = SpinNetwork::build(Topology::ring, 5, 0.75);
  const Json doc = network_to_json(net);
  EXPECT_EQ(doc.at("type"), "ring");
  EXPECT_EQ(doc.at("J"), 0.75);
  const SpinNetwork back = network_from_json(doc);
  EXPECT_EQ(back.couplings(), net.couplings());
  EXPECT_EQ(back.topology(), Topology::ring);
}

TEST(NetworkJson, EdgeListRoundTrip) {
  const SpinNetwork net = SpinNetwork::build(
      Topology::edges, 4, std::vector<Coupling>{{1, 2, 0.3}, {2, 4, -1.5}, {3, 4, 2.0}}, 0.0);
  const Json doc = network_to_json(net);
  EXPECT_TRUE(doc.at("J").is_array());
  EXPECT_EQ(network_from_json(doc).couplings(), net.couplings());
  EXPECT_EQ(network_from_json(Json::parse(doc.dump())).couplings(), net.couplings());
}

TEST(NetworkJson, RejectsMalformedDocuments) {
  EXPECT_THROW(network_from_json(Json{{"type", "ring"}, {"n", 3}}), DataError);
  EXPECT_THROW(network_from_json(Json{{"type", "star"}, {"n", 3}, {"J", 1.0}}), DataError);
  EXPECT_THROW(network_from_json(Json{{"type", "edges"}, {"n", 3}, {"J", Json::array({Json::array({1, 2})})}}),
               DataError);
  EXPECT_THROW(network_from_json(Json{{"type", "ring"}, {"n", "five"}, {"J", 1.0}}), DataError);
}

TEST(ControllerJson, RoundTripIsLossless) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal(0.0, 30.0);
  const SpinNetwork net = SpinNetwork::build(Topology::ring, 5, 1.0);
  ControllerSet set{net, {1, 2, 1.0, 0.0}, TimeRange{1.0, 30.0}, {}};
  for (int i = 0; i < 3; ++i) {
    Eigen::VectorXd d(5);
    for (int j = 0; j < 5; ++j) d(j) = normal(rng);
    Controller c{BiasField(d), {1, 2, 1.0 + std::abs(normal(rng)) / 3.0, 0.0}, 0.9 - 0.1 * i,
                 {rng(), i, 10 * i}, i == 2};
    set.controllers.push_back(c);
  }
  const ControllerSet back = controller_set_from_json(Json::parse(controller_set_to_json(set).dump()));
  ASSERT_EQ(back.controllers.size(), 3u);
  ASSERT_TRUE(back.time_range.has_value());
  EXPECT_EQ(back.time_range->hi, 30.0);
  for (int i = 0; i < 3; ++i) {
    const Controller& a = set.controllers[i];
    const Controller& b = back.controllers[i];
    EXPECT_EQ(a.bias.values(), b.bias.values());
    EXPECT_EQ(a.transfer.read_time, b.transfer.read_time);
    EXPECT_EQ(a.nominal_fidelity, b.nominal_fidelity);
    EXPECT_EQ(a.provenance.seed, b.provenance.seed);
    EXPECT_EQ(a.provenance.restart_index, b.provenance.restart_index);
    EXPECT_EQ(a.duplicate, b.duplicate);
  }
  EXPECT_EQ(controller_set_to_json(back).dump(), controller_set_to_json(set).dump());
}

TEST(ControllerJson, RejectsWrongBiasLength) {
  const SpinNetwork net = SpinNetwork::build(Topology::ring, 3, 1.0);
  Json doc = controller_set_to_json({net, {1, 2, 1.0, 0.0}, std::nullopt,
                                     {Controller{BiasField::zeros(3), {1, 2, 1.0, 0.0}, 0.5, {}, false}}});
  doc["controllers"][0]["D"] = {1.0, 2.0};
  EXPECT_THROW(controller_set_from_json(doc), DataError);
  doc["controllers"][0]["D"] = {1.0, 2.0, 3.0};
  doc["controllers"][0]["T"] = -1.0;
  EXPECT_THROW(controller_set_from_json(doc), DataError);
}

TEST(EnsembleJson, RoundTrip) {
  const Ensemble e = sample_ensemble(4, 25, 9);
  const Ensemble back = ensemble_from_json(Json::parse(ensemble_to_json(e).dump()));
  EXPECT_EQ(back.dim, 4);
  EXPECT_EQ(back.seed, 9u);
  EXPECT_EQ(back.candidates_drawn, e.candidates_drawn);
  EXPECT_EQ(back.acceptance_rate, e.acceptance_rate);
  ASSERT_EQ(back.count(), 25);
  for (int i = 0; i < 25; ++i) EXPECT_EQ(back.processes[i].lower(), e.processes[i].lower());

  Json bad = ensemble_to_json(e);
  bad["count"] = 26;
  EXPECT_THROW(ensemble_from_json(bad), DataError);
  bad["count"] = 25;
  bad["processes"][0]["rates"] = {0.5, 0.5};
  EXPECT_THROW(ensemble_from_json(bad), DataError);
}

TEST(ReportJson, CarriesAllStatistics) {
  RobustnessReport r;
  r.controller_id = 3;
  r.delta_grid = {0.0, 1.0};
  r.error_stats = {Aggregates{0, 0, 0, 0, 0}, Aggregates{0.1, 0.9, 0.5, 0.4, 0.2}};
  r.fidelity_stats = r.error_stats;
  r.eta = 1.25;
  r.ensemble_seed = 42;
  r.ensemble_count = 1000;
  const Json doc = report_to_json(r);
  EXPECT_EQ(doc.at("controller_id"), 3);
  EXPECT_EQ(doc.at("error_stats").at(1).at("median"), 0.4);
  EXPECT_EQ(doc.at("ensemble_meta").at("count"), 1000);
  EXPECT_EQ(doc.at("eta"), 1.25);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(-2.5e-20), "-2.5e-20");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng);
    const std::string text = format_double(v);
    double back = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), back);
    EXPECT_EQ(back, v);
  }
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
}

}  // namespace
}  // namespace spinshape

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

#include <charconv>
#include <cmath>

#include "spinshape/errors.hpp"

namespace spinshape {

namespace {

template <class T>
T required(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw DataError(std::string("missing field '") + key + "'");
  }
  try {
    return doc.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw DataError(std::string("field '") + key + "': " + e.what());
  }
}

Json transfer_to_json(const TransferSpec& t) {
  return {{"in", t.in_node}, {"out", t.out_node}, {"T", t.read_time}, {"dT", t.window_half_width}};
}

TransferSpec transfer_from_json(const Json& doc) {
  TransferSpec t;
  t.in_node = required<int>(doc, "in");
  t.out_node = required<int>(doc, "out");
  t.read_time = required<double>(doc, "T");
  t.window_half_width = doc.value("dT", 0.0);
  return t;
}

}  // namespace

Json network_to_json(const SpinNetwork& net) {
  Json doc;
  doc["type"] = std::string(to_string(net.topology()));
  doc["n"] = net.size();
  doc["kappa"] = net.kappa();
  const auto uniform = net.uniform_coupling();
  if (uniform && net.topology() != Topology::edges) {
    doc["J"] = *uniform;
  } else {
    Json edges = Json::array();
    for (const Coupling& c : net.couplings()) edges.push_back({c.m, c.n, c.J});
    doc["J"] = edges;
  }
  return doc;
}

SpinNetwork network_from_json(const Json& doc) {
  const Topology topology = parse_topology(required<std::string>(doc, "type"));
  const int n = required<int>(doc, "n");
  const double kappa = doc.value("kappa", 0.0);
  if (!doc.contains("J")) throw DataError("missing field 'J'");
  const Json& j = doc.at("J");
  if (j.is_number()) return SpinNetwork::build(topology, n, j.get<double>(), kappa);
  if (!j.is_array()) throw DataError("'J' must be a number or a list of [m, n, J]");
  std::vector<Coupling> couplings;
  for (const Json& edge : j) {
    if (!edge.is_array() || edge.size() != 3) throw DataError("edge entries must be [m, n, J]");
    couplings.push_back({edge[0].get<int>(), edge[1].get<int>(), edge[2].get<double>()});
  }
  return SpinNetwork::build(topology, n, couplings, kappa);
}

Json controller_set_to_json(const ControllerSet& set) {
  Json doc;
  doc["net"] = network_to_json(set.net);
  Json transfer = transfer_to_json(set.transfer);
  if (set.time_range) {
    transfer["T_range"] = {set.time_range->lo, set.time_range->hi};
  }
  doc["transfer"] = transfer;
  Json list = Json::array();
  for (std::size_t i = 0; i < set.controllers.size(); ++i) {
    const Controller& c = set.controllers[i];
    const Eigen::VectorXd& d = c.bias.values();
    list.push_back({{"rank", i + 1},
                    {"D", std::vector<double>(d.data(), d.data() + d.size())},
                    {"fidelity", c.nominal_fidelity},
                    {"T", c.transfer.read_time},
                    {"seed", c.provenance.seed},
                    {"restart", c.provenance.restart_index},
                    {"iterations", c.provenance.iterations},
                    {"duplicate", c.duplicate}});
  }
  doc["controllers"] = list;
  return doc;
}

ControllerSet controller_set_from_json(const Json& doc) {
  ControllerSet set{network_from_json(required<Json>(doc, "net")),
                    transfer_from_json(required<Json>(doc, "transfer")), std::nullopt, {}};
  const Json transfer = doc.at("transfer");
  if (transfer.contains("T_range")) {
    const auto range = transfer.at("T_range").get<std::vector<double>>();
    if (range.size() != 2) throw DataError("T_range must be [lo, hi]");
    set.time_range = TimeRange{range[0], range[1]};
  }
  for (const Json& entry : required<Json>(doc, "controllers")) {
    Controller c;
    const auto d = required<std::vector<double>>(entry, "D");
    if (static_cast<int>(d.size()) != set.net.size()) {
      throw DataError("controller bias length does not match network size");
    }
    c.bias = BiasField(Eigen::Map<const Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(d.size())));
    c.transfer = set.transfer;
    c.transfer.read_time = required<double>(entry, "T");
    c.transfer.validate(set.net.size());
    c.nominal_fidelity = required<double>(entry, "fidelity");
    c.provenance.seed = entry.value("seed", std::uint64_t{0});
    c.provenance.restart_index = entry.value("restart", 0);
    c.provenance.iterations = entry.value("iterations", 0);
    c.duplicate = entry.value("duplicate", false);
    set.controllers.push_back(std::move(c));
  }
  return set;
}

Json ensemble_to_json(const Ensemble& ensemble) {
  Json processes = Json::array();
  for (const DephasingProcess& p : ensemble.processes) processes.push_back({{"rates", p.packed()}});
  return {{"dim", ensemble.dim},
          {"seed", ensemble.seed},
          {"count", ensemble.count()},
          {"acceptance_rate", ensemble.acceptance_rate},
          {"candidates_drawn", ensemble.candidates_drawn},
          {"processes", processes}};
}

Ensemble ensemble_from_json(const Json& doc) {
  Ensemble e;
  e.dim = required<int>(doc, "dim");
  e.seed = doc.value("seed", std::uint64_t{0});
  e.acceptance_rate = doc.value("acceptance_rate", 0.0);
  e.candidates_drawn = doc.value("candidates_drawn", std::uint64_t{0});
  std::uint64_t index = 0;
  for (const Json& entry : required<Json>(doc, "processes")) {
    e.processes.push_back(DephasingProcess::from_packed(
        e.dim, required<std::vector<double>>(entry, "rates"),
        {ProcessSource::explicit_rates, e.seed, index++}));
  }
  if (doc.contains("count") && doc.at("count").get<int>() != e.count()) {
    throw DataError("ensemble count field disagrees with the process list");
  }
  return e;
}

Json aggregates_to_json(const Aggregates& a) {
  return {{"min", a.min}, {"max", a.max}, {"mean", a.mean}, {"median", a.median}, {"std", a.std}};
}

Json report_to_json(const RobustnessReport& report) {
  Json eps = Json::array();
  Json fid = Json::array();
  for (const Aggregates& a : report.error_stats) eps.push_back(aggregates_to_json(a));
  for (const Aggregates& a : report.fidelity_stats) fid.push_back(aggregates_to_json(a));
  return {{"controller_id", report.controller_id},
          {"delta_grid", report.delta_grid},
          {"error_stats", eps},
          {"fidelity_stats", fid},
          {"eta", report.eta},
          {"ensemble_meta", {{"seed", report.ensemble_seed}, {"count", report.ensemble_count}}}};
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

}  // namespace spinshape

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

#include "spinshape/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "spinshape/controllers.hpp"
#include "spinshape/dephasing.hpp"
#include "spinshape/errors.hpp"
#include "spinshape/io.hpp"
#include "spinshape/manifest.hpp"
#include "spinshape/robustness.hpp"

#ifndef SPINSHAPE_VERSION
#define SPINSHAPE_VERSION "0.0.0"
#endif

namespace spinshape::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_number(std::string_view text, const std::string& flag) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError(flag + ": cannot parse '" + std::string(text) + "'");
  }
  return value;
}

// "lo:hi", or a single value B meaning [-B, B] when symmetric is allowed.
std::pair<double, double> parse_range(const std::string& text, const std::string& flag,
                                      bool symmetric) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    if (!symmetric) throw UsageError(flag + " expects lo:hi");
    const double b = parse_number(text, flag);
    return {-b, b};
  }
  const double lo = parse_number(std::string_view(text).substr(0, colon), flag);
  const double hi = parse_number(std::string_view(text).substr(colon + 1), flag);
  if (!(lo < hi)) throw UsageError(flag + " needs lo < hi");
  return {lo, hi};
}

OutputNorm parse_norm(const std::string& name) {
  if (name == "frobenius") return OutputNorm::frobenius;
  if (name == "trace") return OutputNorm::trace;
  throw UsageError("--norm must be frobenius or trace");
}

struct Output {
  std::string path;
  std::string format;  // "json" or "csv"; empty means by extension

  bool csv() const {
    if (!format.empty()) return format == "csv";
    return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  }
};

struct Context {
  std::vector<std::string> command_line;
  std::ostream& out;
  std::ostream& err;
};

RunManifest base_manifest(const Context& ctx, const Json& config, std::uint64_t seed) {
  RunManifest m;
  m.command_line = ctx.command_line;
  m.config_sha256 = sha256_hex(config.dump());
  m.seed = seed;
  m.version = SPINSHAPE_VERSION;
  m.wall_clock = utc_timestamp();
  return m;
}

void add_input(RunManifest& m, const std::string& path) {
  m.inputs.push_back({path, sha256_hex(read_file(path))});
}

void emit_json(const Context& ctx, const Output& output, Json payload, RunManifest manifest) {
  const std::string text = seal(std::move(payload), std::move(manifest)).dump(2) + "\n";
  if (output.path.empty()) {
    ctx.out << text;
  } else {
    write_file(output.path, text);
  }
}

void emit_csv(const Context& ctx, const Output& output, const std::string& text,
              RunManifest manifest) {
  if (output.path.empty()) {
    ctx.out << text;
    return;
  }
  write_file(output.path, text);
  manifest.payload_sha256 = sha256_hex(text);
  manifest.output_path = output.path;
  write_file(sidecar_path(output.path), manifest_to_json(manifest).dump(2) + "\n");
}

// ---------------------------------------------------------------- design

struct DesignArgs {
  int ring = 0;
  int chain = 0;
  std::string net_file;
  double J = 1.0;
  double kappa = 0.0;
  int in_node = 1;
  int out_node = 2;
  std::optional<double> read_time;
  std::string time_opt;
  double half_width = 0.0;
  int count = 1;
  int restarts = 1;
  int max_iterations = 1000;
  std::string bias_box = "100";
  bool analytic = false;
  std::uint64_t seed = 0;
  int jobs = 1;
  Output output;
};

void add_design(CLI::App& app, DesignArgs& a) {
  auto* ring = app.add_option("--ring", a.ring, "ring of N spins")->check(CLI::PositiveNumber);
  auto* chain = app.add_option("--chain", a.chain, "chain of N spins")->check(CLI::PositiveNumber);
  auto* net = app.add_option("--net", a.net_file, "network JSON file");
  ring->excludes(chain)->excludes(net);
  chain->excludes(net);
  app.add_option("--J", a.J, "uniform coupling strength");
  app.add_option("--kappa", a.kappa, "anisotropy (0 = XX)");
  app.add_option("--in", a.in_node, "input node (1-based)");
  app.add_option("--out", a.out_node, "output node (1-based)");
  auto* t = app.add_option("--T", a.read_time, "fixed readout time");
  auto* topt = app.add_option("--T-opt", a.time_opt, "optimize the readout time in lo:hi");
  t->excludes(topt);
  app.add_option("--dT", a.half_width, "readout window half-width");
  app.add_option("--count", a.count, "number of controllers")->check(CLI::PositiveNumber);
  app.add_option("--restarts", a.restarts, "optimizer restarts per controller")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-iter", a.max_iterations, "iterations per restart")->check(CLI::PositiveNumber);
  app.add_option("--bias-box", a.bias_box, "bias bound B or lo:hi (use --bias-box=lo:hi)");
  app.add_flag("--analytic-gradient", a.analytic, "analytic gradient where it applies");
  app.add_option("--seed", a.seed, "global seed")->envname("SPINSHAPE_SEED");
  app.add_option("--jobs", a.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("-o,--out-file", a.output.path, "output JSON file (default stdout)");
}

SpinNetwork network_from_args(const DesignArgs& a, RunManifest* manifest) {
  if (a.ring > 0) return SpinNetwork::build(Topology::ring, a.ring, a.J, a.kappa);
  if (a.chain > 0) return SpinNetwork::build(Topology::chain, a.chain, a.J, a.kappa);
  if (!a.net_file.empty()) {
    const Json doc = load_document(a.net_file);
    if (manifest) add_input(*manifest, a.net_file);
    return network_from_json(doc.contains("net") ? doc.at("net") : doc);
  }
  throw UsageError("one of --ring, --chain or --net is required");
}

int cmd_design(const Context& ctx, const DesignArgs& a) {
  if (!a.read_time && a.time_opt.empty()) throw UsageError("one of --T or --T-opt is required");
  RunManifest pending;
  const SpinNetwork net = network_from_args(a, &pending);

  TransferSpec transfer{a.in_node, a.out_node, 0.0, a.half_width};
  std::optional<TimeRange> range;
  if (a.read_time) {
    transfer.read_time = *a.read_time;
  } else {
    const auto [lo, hi] = parse_range(a.time_opt, "--T-opt", false);
    range = TimeRange{lo, hi};
    transfer.read_time = lo;
  }
  transfer.validate(net.size());
  const auto [box_lo, box_hi] = parse_range(a.bias_box, "--bias-box", true);

  OptimizeOptions options;
  options.restarts = a.restarts;
  options.max_iterations = a.max_iterations;
  options.bias_lower = box_lo;
  options.bias_upper = box_hi;
  options.seed = a.seed;
  options.time_range = range;
  options.analytic_gradient = a.analytic;
  options.jobs = a.jobs;

  ControllerSet set{net, transfer, range, generate_controller_set(net, transfer, a.count, options)};

  Json config{{"command", "design"},
              {"net", network_to_json(net)},
              {"transfer", controller_set_to_json({net, transfer, range, {}}).at("transfer")},
              {"count", a.count},
              {"restarts", a.restarts},
              {"max_iter", a.max_iterations},
              {"bias_box", {box_lo, box_hi}},
              {"analytic_gradient", a.analytic},
              {"seed", a.seed}};
  RunManifest manifest = base_manifest(ctx, config, a.seed);
  manifest.inputs = pending.inputs;
  emit_json(ctx, a.output, controller_set_to_json(set), std::move(manifest));
  return kExitOk;
}

// ---------------------------------------------------------------- sample

struct SampleArgs {
  int dim = 0;
  int count = 1000;
  std::uint64_t seed = 0;
  std::uint64_t budget = SampleOptions{}.candidate_budget;
  int jobs = 1;
  Output output;
};

void add_sample(CLI::App& app, SampleArgs& a) {
  app.add_option("--dim", a.dim, "process dimension (number of spins)")
      ->required()
      ->check(CLI::Range(2, 4096));
  app.add_option("--count", a.count, "accepted processes")->check(CLI::PositiveNumber);
  app.add_option("--seed", a.seed, "global seed")->envname("SPINSHAPE_SEED");
  app.add_option("--budget", a.budget, "candidate draw limit")->check(CLI::PositiveNumber);
  app.add_option("--jobs", a.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("-o,--out-file", a.output.path, "output JSON file (default stdout)");
}

int cmd_sample(const Context& ctx, const SampleArgs& a) {
  const Ensemble ensemble = sample_ensemble(a.dim, a.count, a.seed, {a.budget, a.jobs});
  Json config{{"command", "sample"}, {"dim", a.dim}, {"count", a.count},
              {"seed", a.seed},      {"budget", a.budget}};
  emit_json(ctx, a.output, ensemble_to_json(ensemble), base_manifest(ctx, config, a.seed));
  return kExitOk;
}

// ---------------------------------------------------- controller selection

// First `top` non-duplicate controllers with their 1-based ranks; all of
// them when top is 0.
std::vector<std::pair<int, const Controller*>> select(const ControllerSet& set, int top) {
  std::vector<std::pair<int, const Controller*>> picked;
  for (std::size_t i = 0; i < set.controllers.size(); ++i) {
    if (top > 0 && static_cast<int>(picked.size()) >= top) break;
    if (set.controllers[i].duplicate) continue;
    picked.emplace_back(static_cast<int>(i) + 1, &set.controllers[i]);
  }
  if (picked.empty()) throw DataError("controller file has no usable controllers");
  return picked;
}

struct Inputs {
  ControllerSet set;
  std::optional<Ensemble> ensemble;
};

Inputs load_inputs(const std::string& ctrl, const std::string& deph, RunManifest& manifest) {
  Inputs in{controller_set_from_json(load_document(ctrl)), std::nullopt};
  add_input(manifest, ctrl);
  if (!deph.empty()) {
    in.ensemble = ensemble_from_json(load_document(deph));
    add_input(manifest, deph);
    if (in.ensemble->dim != in.set.net.size()) {
      throw DataError("ensemble dimension " + std::to_string(in.ensemble->dim) +
                      " does not match the " + std::to_string(in.set.net.size()) +
                      "-spin network");
    }
    if (in.ensemble->count() == 0) throw DataError("ensemble is empty");
  }
  return in;
}

// ----------------------------------------------------------------- sweep

struct SweepArgs {
  std::string ctrl;
  std::string deph;
  int top = 1;
  int grid = 21;
  double max_delta = 1.0;
  std::string norm = "frobenius";
  int hist_bins = 0;
  int jobs = 1;
  Output output;
};

void add_sweep(CLI::App& app, SweepArgs& a) {
  app.add_option("--ctrl", a.ctrl, "controller set JSON")->required();
  app.add_option("--deph", a.deph, "dephasing ensemble JSON")->required();
  app.add_option("--top", a.top, "controllers to sweep (0 = all)")->check(CLI::NonNegativeNumber);
  app.add_option("--grid", a.grid, "delta grid points")->check(CLI::Range(2, 100000));
  app.add_option("--max-delta", a.max_delta, "largest delta")->check(CLI::PositiveNumber);
  app.add_option("--norm", a.norm, "frobenius or trace");
  app.add_option("--hist-bins", a.hist_bins, "histogram of 1 - p at the largest delta (JSON)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--jobs", a.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("-o,--out-file", a.output.path, "output .csv or .json (default stdout CSV)");
  app.add_option("--format", a.output.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

int cmd_sweep(const Context& ctx, const SweepArgs& a) {
  const OutputNorm norm = parse_norm(a.norm);
  RunManifest pending;
  const Inputs in = load_inputs(a.ctrl, a.deph, pending);
  const Ensemble& ens = *in.ensemble;
  const std::vector<double> grid = uniform_delta_grid(a.grid, a.max_delta);

  std::vector<RobustnessReport> reports;
  std::vector<Histogram> histograms;
  for (const auto& [rank, ctrl] : select(in.set, a.top)) {
    reports.push_back(ensemble_stats(in.set.net, *ctrl, ens, grid, {norm, 1e-3, rank, a.jobs}));
    if (a.hist_bins > 0) {
      const ControllerResponse response(in.set.net, *ctrl);
      std::vector<double> errors;
      errors.reserve(ens.processes.size());
      for (const DephasingProcess& p : ens.processes) {
        errors.push_back(1.0 - response.fidelity(p, a.max_delta));
      }
      histograms.push_back(histogram(errors, a.hist_bins));
    }
  }

  Json config{{"command", "sweep"}, {"top", a.top},   {"grid", a.grid}, {"max_delta", a.max_delta},
              {"norm", a.norm},     {"hist_bins", a.hist_bins}};
  RunManifest manifest = base_manifest(ctx, config, ens.seed);
  manifest.inputs = pending.inputs;

  const bool csv = a.output.path.empty() ? a.output.format != "json" : a.output.csv();
  if (csv) {
    std::ostringstream text;
    text << "controller_rank,delta,eps_min,eps_max,eps_mean,eps_median,eps_std,"
            "fid_min,fid_max,fid_mean,fid_median,fid_std\n";
    for (const RobustnessReport& r : reports) {
      for (std::size_t i = 0; i < r.delta_grid.size(); ++i) {
        const Aggregates& e = r.error_stats[i];
        const Aggregates& f = r.fidelity_stats[i];
        text << r.controller_id << ',' << format_double(r.delta_grid[i]);
        for (double v : {e.min, e.max, e.mean, e.median, e.std, f.min, f.max, f.mean, f.median, f.std}) {
          text << ',' << format_double(v);
        }
        text << '\n';
      }
    }
    emit_csv(ctx, a.output, text.str(), std::move(manifest));
  } else {
    Json list = Json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
      Json entry = report_to_json(reports[i]);
      if (!histograms.empty()) {
        entry["error_histogram"] = {{"edges", histograms[i].edges}, {"counts", histograms[i].counts}};
      }
      list.push_back(std::move(entry));
    }
    emit_json(ctx, a.output, {{"norm", a.norm}, {"reports", list}}, std::move(manifest));
  }
  return kExitOk;
}

// ----------------------------------------------------------- sensitivity

struct SensitivityArgs {
  std::string ctrl;
  std::string deph;
  int top = 0;
  double h = 1e-3;
  std::string norm = "frobenius";
  int jobs = 1;
  Output output;
};

void add_sensitivity(CLI::App& app, SensitivityArgs& a) {
  app.add_option("--ctrl", a.ctrl, "controller set JSON")->required();
  app.add_option("--deph", a.deph, "dephasing ensemble JSON")->required();
  app.add_option("--top", a.top, "controllers to evaluate (0 = all)")->check(CLI::NonNegativeNumber);
  app.add_option("--step", a.h, "forward-difference step h")->check(CLI::PositiveNumber);
  app.add_option("--norm", a.norm, "frobenius or trace");
  app.add_option("--jobs", a.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("-o,--out-file", a.output.path, "output JSON file (default stdout)");
}

Json summarize(const std::vector<SensitivityPoint>& points, const std::vector<double>& fidelity) {
  if (points.size() < 3) return nullptr;
  std::vector<double> eta;
  for (const SensitivityPoint& p : points) eta.push_back(p.eta);
  Json summary{{"count", points.size()}};
  try {
    const LinearCorrelation fit = sensitivity_time_correlation(points);
    summary["pearson_r"] = fit.pearson_r;
    summary["slope"] = fit.slope;
    summary["intercept"] = fit.intercept;
  } catch (const DataError&) {
    summary["pearson_r"] = nullptr;
  }
  try {
    summary["spearman_fidelity_eta"] = spearman_correlation(fidelity, eta);
  } catch (const DataError&) {
    summary["spearman_fidelity_eta"] = nullptr;
  }
  return summary;
}

int cmd_sensitivity(const Context& ctx, const SensitivityArgs& a) {
  const OutputNorm norm = parse_norm(a.norm);
  RunManifest pending;
  const Inputs in = load_inputs(a.ctrl, a.deph, pending);

  Json list = Json::array();
  std::vector<SensitivityPoint> points;
  std::vector<double> fidelity;
  for (const auto& [rank, ctrl] : select(in.set, a.top)) {
    const double eta = sensitivity_eta(in.set.net, *ctrl, *in.ensemble, a.h, norm, a.jobs);
    points.push_back({eta, ctrl->transfer.read_time});
    fidelity.push_back(ctrl->nominal_fidelity);
    list.push_back({{"rank", rank},
                    {"T", ctrl->transfer.read_time},
                    {"fidelity", ctrl->nominal_fidelity},
                    {"eta", eta}});
  }

  Json config{{"command", "sensitivity"}, {"top", a.top}, {"h", a.h}, {"norm", a.norm}};
  RunManifest manifest = base_manifest(ctx, config, in.ensemble->seed);
  manifest.inputs = pending.inputs;
  emit_json(ctx, a.output, {{"points", list}, {"summary", summarize(points, fidelity)}},
            std::move(manifest));
  return kExitOk;
}

// ------------------------------------------------------------- correlate

struct CorrelateArgs {
  std::vector<std::string> reports;
  Output output;
};

void add_correlate(CLI::App& app, CorrelateArgs& a) {
  app.add_option("--reports", a.reports, "sensitivity report JSON files")->required();
  app.add_option("-o,--out-file", a.output.path, "output JSON file (default stdout)");
}

int cmd_correlate(const Context& ctx, const CorrelateArgs& a) {
  RunManifest pending;
  std::vector<SensitivityPoint> points;
  std::vector<double> fidelity;
  Json pairs = Json::array();
  for (const std::string& path : a.reports) {
    const Json doc = load_document(path);
    add_input(pending, path);
    if (!doc.contains("points") || !doc.at("points").is_array()) {
      throw DataError("'" + path + "' is not a sensitivity report");
    }
    for (const Json& p : doc.at("points")) {
      try {
        points.push_back({p.at("eta").get<double>(), p.at("T").get<double>()});
        fidelity.push_back(p.at("fidelity").get<double>());
      } catch (const Json::exception& e) {
        throw DataError("'" + path + "': malformed point: " + e.what());
      }
      pairs.push_back({points.back().eta, points.back().read_time});
    }
  }
  if (points.size() < 3) throw DataError("correlate needs at least 3 points");
  const LinearCorrelation fit = sensitivity_time_correlation(points);
  Json payload = summarize(points, fidelity);
  payload["reports"] = a.reports.size();
  payload["pairs"] = pairs;
  payload["pearson_r"] = fit.pearson_r;

  RunManifest manifest = base_manifest(ctx, {{"command", "correlate"}}, 0);
  manifest.inputs = pending.inputs;
  emit_json(ctx, a.output, std::move(payload), std::move(manifest));
  ctx.err << "r = " << format_double(fit.pearson_r) << ", eta = " << format_double(fit.slope)
          << " * T + " << format_double(fit.intercept) << "\n";
  return kExitOk;
}

// --------------------------------------------------------------- logsens

struct LogsensArgs {
  std::string ctrl;
  std::vector<std::string> structures{"all"};
  int top = 0;
  Output output;
};

void add_logsens(CLI::App& app, LogsensArgs& a) {
  app.add_option("--ctrl", a.ctrl, "controller set JSON")->required();
  app.add_option("--struct", a.structures, "bias:K, coupling:M-N, identity or all");
  app.add_option("--top", a.top, "controllers to evaluate (0 = all)")->check(CLI::NonNegativeNumber);
  app.add_option("-o,--out-file", a.output.path, "output .csv or .json (default stdout CSV)");
  app.add_option("--format", a.output.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

struct LogsensRow {
  int rank = 0;
  std::string structure;
  double p_inf = 0.0;
  std::optional<double> value;
  std::string status;
};

int cmd_logsens(const Context& ctx, const LogsensArgs& a) {
  RunManifest pending;
  const ControllerSet set = controller_set_from_json(load_document(a.ctrl));
  add_input(pending, a.ctrl);
  const int n = set.net.size();

  std::vector<std::pair<int, int>> edges;
  for (const Coupling& c : set.net.couplings()) edges.emplace_back(c.m, c.n);

  std::vector<LogsensRow> rows;
  for (const auto& [rank, ctrl] : select(set, a.top)) {
    for (const std::string& spec : a.structures) {
      const bool all = spec == "all";
      const std::vector<PerturbationStructure> structures =
          all ? PerturbationStructure::all_local(n, edges)
              : std::vector<PerturbationStructure>{PerturbationStructure::parse(spec, n)};
      std::optional<double> worst;
      std::string worst_status = "ok";
      for (const PerturbationStructure& s : structures) {
        LogsensRow row{rank, s.label(), asymptotic_fidelity(set.net, *ctrl, s, 0.0), std::nullopt, "ok"};
        try {
          row.value = asymptotic_log_sensitivity(set.net, *ctrl, s);
          if (!worst || *row.value > *worst) worst = row.value;
        } catch (const DegeneracyError&) {
          row.status = "degenerate";
          worst_status = row.status;
        } catch (const NumericalError&) {
          row.status = "zero-error";
          worst_status = row.status;
        }
        rows.push_back(row);
      }
      if (all) {
        rows.push_back({rank, "max", rows.back().p_inf, worst, worst ? "ok" : worst_status});
      }
    }
  }

  Json config{{"command", "logsens"}, {"structures", a.structures}, {"top", a.top}};
  RunManifest manifest = base_manifest(ctx, config, 0);
  manifest.inputs = pending.inputs;
  const bool csv = a.output.path.empty() ? a.output.format != "json" : a.output.csv();
  if (csv) {
    std::ostringstream text;
    text << "controller_rank,structure,p_inf,log_sensitivity,status\n";
    for (const LogsensRow& r : rows) {
      text << r.rank << ',' << r.structure << ',' << format_double(r.p_inf) << ','
           << (r.value ? format_double(*r.value) : "") << ',' << r.status << '\n';
    }
    emit_csv(ctx, a.output, text.str(), std::move(manifest));
  } else {
    Json list = Json::array();
    for (const LogsensRow& r : rows) {
      list.push_back({{"rank", r.rank},
                      {"structure", r.structure},
                      {"p_inf", r.p_inf},
                      {"log_sensitivity", r.value ? Json(*r.value) : Json(nullptr)},
                      {"status", r.status}});
    }
    emit_json(ctx, a.output, {{"rows", list}}, std::move(manifest));
  }
  return kExitOk;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const Context& ctx, const std::vector<std::string>& files) {
  bool all_ok = true;
  for (const std::string& path : files) {
    VerifyOutcome outcome;
    const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
    if (json) {
      Json doc;
      try {
        doc = Json::parse(read_file(path));
      } catch (const Json::exception& e) {
        outcome = {false, {std::string("not valid JSON: ") + e.what()}};
      }
      if (outcome.ok) outcome = verify_document(doc);
    } else {
      read_file(path);
      outcome = verify_sidecar(path);
    }
    if (outcome.ok) {
      ctx.out << "OK " << path << "\n";
    } else {
      all_ok = false;
      for (const std::string& problem : outcome.problems) {
        ctx.out << "FAIL " << path << ": " << problem << "\n";
      }
    }
  }
  return all_ok ? kExitOk : kExitData;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Static-bias controllers for spin networks and their robustness to dephasing",
               "spinshape"};
  app.set_version_flag("--version", SPINSHAPE_VERSION);
  app.require_subcommand(1);

  DesignArgs design;
  SampleArgs sample;
  SweepArgs sweep;
  SensitivityArgs sensitivity;
  CorrelateArgs correlate;
  LogsensArgs logsens;
  std::vector<std::string> verify_files;

  auto* design_cmd = app.add_subcommand("design", "optimize a ranked controller set");
  add_design(*design_cmd, design);
  auto* sample_cmd = app.add_subcommand("sample", "sample a dephasing ensemble");
  add_sample(*sample_cmd, sample);
  auto* sweep_cmd = app.add_subcommand("sweep", "error and fidelity statistics over delta");
  add_sweep(*sweep_cmd, sweep);
  auto* sens_cmd = app.add_subcommand("sensitivity", "sensitivity eta per controller");
  add_sensitivity(*sens_cmd, sensitivity);
  auto* corr_cmd = app.add_subcommand("correlate", "eta against readout time");
  add_correlate(*corr_cmd, correlate);
  auto* logsens_cmd = app.add_subcommand("logsens", "log-sensitivity to structured perturbations");
  add_logsens(*logsens_cmd, logsens);
  auto* verify_cmd = app.add_subcommand("verify", "check manifest digests");
  verify_cmd->add_option("files", verify_files, "JSON or CSV outputs")->required();

  std::vector<std::string> command_line{"spinshape"};
  command_line.insert(command_line.end(), args.begin(), args.end());
  const Context ctx{command_line, out, err};

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*design_cmd) return cmd_design(ctx, design);
    if (*sample_cmd) return cmd_sample(ctx, sample);
    if (*sweep_cmd) return cmd_sweep(ctx, sweep);
    if (*sens_cmd) return cmd_sensitivity(ctx, sensitivity);
    if (*corr_cmd) return cmd_correlate(ctx, correlate);
    if (*logsens_cmd) return cmd_logsens(ctx, logsens);
    if (*verify_cmd) return cmd_verify(ctx, verify_files);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Json::exception& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace spinshape::cli

// Copyright 2026 The layerfid Authors
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

#include "layerfid/server.hpp"

#include <cmath>
#include <functional>
#include <map>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "layerfid/error.hpp"

namespace lfd {

using json = nlohmann::json;

namespace {

struct BudgetExceeded {
  std::size_t requested;
};

// Infinite thresholds travel as null.
json real_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double get_real(const json& obj, const char* key, double fallback) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  if (!it->is_number()) throw Error(ErrorCode::InvalidArgument, std::string(key) + ": expected a number");
  return it->get<double>();
}

json require_object(const json& j, const char* what) {
  if (j.is_null()) return json::object();
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, std::string(what) + ": expected an object");
  return j;
}

FilterThresholds thresholds_from(const json& j) {
  const json o = require_object(j, "thresholds");
  FilterThresholds th;
  th.t1_min = get_real(o, "t1_min", th.t1_min);
  th.t2_min = get_real(o, "t2_min", th.t2_min);
  th.e1q_max = get_real(o, "e1q_max", th.e1q_max);
  th.e2q_max = get_real(o, "e2q_max", th.e2q_max);
  th.ero_max = get_real(o, "ero_max", th.ero_max);
  th.validate();
  return th;
}

json to_json(const FilterThresholds& th) {
  return {{"t1_min", th.t1_min},
          {"t2_min", th.t2_min},
          {"e1q_max", real_or_null(th.e1q_max)},
          {"e2q_max", real_or_null(th.e2q_max)},
          {"ero_max", real_or_null(th.ero_max)}};
}

StatePrep prep_from(const json& o) {
  StatePrep p{get_real(o, "theta", 0.0), get_real(o, "phi", 0.0)};
  p.validate();
  return p;
}

TeleportMode mode_from(const json& o) {
  const auto it = o.find("mode");
  if (it == o.end() || it->is_null()) return TeleportMode::Physical;
  if (!it->is_string()) throw Error(ErrorCode::InvalidArgument, "mode: expected a string");
  return parse_mode(it->get<std::string>());
}

PulseAssignment pulse_from(const json& o, PulseAssignment fallback) {
  const auto it = o.find("pulse");
  if (it == o.end() || it->is_null()) return fallback;
  if (it->is_string()) {
    const auto s = it->get<std::string>();
    if (s == "per_gate_default") return PulseAssignment::per_gate_default();
    return PulseAssignment::uniform(parse_pulse_shape(s));
  }
  const json p = require_object(*it, "pulse");
  auto shape = [&](const char* key, PulseShape def) {
    const auto f = p.find(key);
    if (f == p.end() || f->is_null()) return def;
    if (!f->is_string()) throw Error(ErrorCode::InvalidArgument, std::string("pulse.") + key + ": expected a string");
    return parse_pulse_shape(f->get<std::string>());
  };
  return {shape("sx", fallback.sx), shape("cz", fallback.cz), shape("measure", fallback.measure)};
}

json to_json(const PulseAssignment& p) {
  return {{"sx", to_string(p.sx)}, {"cz", to_string(p.cz)}, {"measure", to_string(p.measure)}, {"label", p.label()}};
}

json to_json(const LayoutCandidate& c) {
  return {{"mapping", c.mapping}, {"label", c.label()}, {"score", c.score}, {"kind", to_string(c.kind)}};
}

json to_json(const BandReport& b) {
  json j{{"n_configs", b.n_configs}, {"f_best", b.f_best}, {"f_worst", b.f_worst}, {"band", b.band}};
  j["reference_best"] = b.reference_best ? json(*b.reference_best) : json(nullptr);
  return j;
}

std::optional<double> optional_real(const json& o, const char* key) {
  const auto it = o.find(key);
  if (it == o.end() || it->is_null()) return std::nullopt;
  return get_real(o, key, 0.0);
}

void check_budget(std::size_t requested, std::size_t budget) {
  if (requested > budget) throw BudgetExceeded{requested};
}

using Handler = std::function<json(const json& body)>;

} // namespace

Api::Api(CalibrationSnapshot snapshot, PipelineContext ctx, std::size_t simulation_budget)
    : snapshot_(std::move(snapshot)), ctx_(std::move(ctx)), budget_(simulation_budget) {
  snapshot_.validate();
  snapshot_id_ = snapshot_.id();
}

ApiResponse Api::handle(std::string_view method, std::string_view path, std::string_view body) const {
  const auto& s = snapshot_;
  const std::size_t budget = budget_;
  const PipelineContext& base_ctx = ctx_;
  auto context = [&](const json& o) {
    PipelineContext c = base_ctx;
    if (o.contains("seed")) {
      if (!o["seed"].is_number_unsigned()) throw Error(ErrorCode::InvalidArgument, "seed: expected an unsigned integer");
      c.seed = o["seed"].get<std::uint64_t>();
    }
    return c;
  };

  const std::map<std::string_view, std::pair<std::string_view, Handler>> routes{
      {"/api/snapshot",
       {"GET",
        [&](const json&) {
          json qubits = json::array();
          for (const auto& [index, q] : s.qubits) {
            qubits.push_back({{"index", index},
                              {"t1_us", q.t1_us},
                              {"t2_us", q.t2_us},
                              {"readout_e01", q.readout_e01},
                              {"readout_e10", q.readout_e10},
                              {"readout_error", q.mean_readout_error()},
                              {"err_1q", q.err_1q},
                              {"dur_1q_us", q.dur_1q_us},
                              {"dur_meas_us", q.dur_meas_us}});
          }
          json edges = json::array();
          for (const auto& e : s.edges) {
            edges.push_back({{"a", e.a}, {"b", e.b}, {"err_2q", e.err_2q}, {"dur_2q_us", e.dur_2q_us}});
          }
          return json{{"backend", s.backend_name},
                      {"timestamp", s.timestamp},
                      {"qubit_count", s.qubits.size()},
                      {"edge_count", s.edges.size()},
                      {"qubits", qubits},
                      {"edges", edges}};
        }}},
      {"/api/filter",
       {"POST",
        [&](const json& o) {
          const auto th = thresholds_from(o.contains("thresholds") ? o["thresholds"] : o);
          const auto g = filter_graph(s, th);
          json edges = json::array();
          for (const auto& [a, b] : g.edges()) edges.push_back({{"a", a}, {"b", b}, {"err_2q", s.edge(a, b).err_2q}});
          json paths = json::array();
          for (const auto& c : admissible_layouts(TeleportMode::Physical, th, s)) paths.push_back(to_json(c));
          return json{{"thresholds", to_json(th)},
                      {"nodes", g.nodes()},
                      {"edges", edges},
                      {"paths", paths},
                      {"node_count", g.nodes().size()},
                      {"edge_count", g.edges().size()},
                      {"path_count", paths.size()}};
        }}},
      {"/api/run",
       {"POST",
        [&](const json& o) {
          PipelineConfig cfg;
          cfg.mode = mode_from(o);
          cfg.prep = prep_from(o);
          cfg.pulse = pulse_from(o, cfg.pulse);
          cfg.ns = NoiseScale(get_real(o, "ns", 1.0));
          if (o.contains("layout") && !o["layout"].is_null()) {
            if (!o["layout"].is_array()) throw Error(ErrorCode::InvalidArgument, "layout: expected an array");
            cfg.layout = LayoutCandidate{o["layout"].get<std::vector<int>>(), 0.0, LayoutKind::Path3};
          } else {
            cfg.layout = thresholds_from(o.value("thresholds", json::object()));
          }
          check_budget(1, budget);
          const auto r = run(cfg, s, context(o));
          return json{{"mode", to_string(cfg.mode)},
                      {"fidelity", r.fidelity},
                      {"accept", r.accept},
                      {"throughput", r.throughput()},
                      {"layout", to_json(r.layout)},
                      {"pulse", to_json(cfg.pulse)},
                      {"ns", cfg.ns.value()}};
        }}},
      {"/api/waterfall",
       {"POST",
        [&](const json& o) {
          WaterfallOptions opt;
          opt.mode = mode_from(o);
          opt.ns = NoiseScale(get_real(o, "ns", 1.0));
          opt.baseline_thresholds = thresholds_from(o.value("baseline_thresholds", json::object()));
          opt.l2_thresholds = thresholds_from(o.value("l2_thresholds", json::object()));
          check_budget(2 + all_pulse_assignments().size(), budget);
          const auto w = waterfall(prep_from(o), s, opt, context(o));
          return json{{"f_baseline", w.f_baseline},
                      {"f_after_l2", w.f_after_l2},
                      {"f_after_l3", w.f_after_l3},
                      {"delta_l2", w.delta_l2},
                      {"delta_l3", w.delta_l3},
                      {"total", w.total},
                      {"baseline_layout", to_json(w.baseline_layout)},
                      {"l2_layout", to_json(w.l2_layout)},
                      {"l3_pulse", to_json(w.l3_pulse)}};
        }}},
      {"/api/cascade",
       {"POST",
        [&](const json& o) {
          std::vector<FilterThresholds> stages;
          if (o.contains("stages") && !o["stages"].is_null()) {
            if (!o["stages"].is_array()) throw Error(ErrorCode::InvalidArgument, "stages: expected an array");
            for (const auto& st : o["stages"]) stages.push_back(thresholds_from(st));
          } else {
            stages = default_cascade_stages();
          }
          std::size_t sims = 0;
          for (const auto& st : stages) sims += enumerate_paths3(filter_graph(s, st)).size();
          check_budget(sims, budget);
          const auto rows = filter_cascade(s, stages, prep_from(o), optional_real(o, "reference_best"),
                                           NoiseScale(get_real(o, "ns", 1.0)), context(o));
          json out = json::array();
          for (const auto& r : rows) {
            out.push_back({{"thresholds", to_json(r.thresholds)},
                           {"node_count", r.node_count},
                           {"edge_count", r.edge_count},
                           {"path_count", r.path_count},
                           {"stats", r.stats ? to_json(*r.stats) : json(nullptr)}});
          }
          return json{{"rows", out}};
        }}},
      {"/api/sweep",
       {"POST",
        [&](const json& o) {
          std::vector<StatePrep> preps;
          if (!o.contains("preps") || !o["preps"].is_array()) {
            throw Error(ErrorCode::InvalidArgument, "preps: expected an array of {theta, phi}");
          }
          for (const auto& p : o["preps"]) preps.push_back(prep_from(require_object(p, "preps[]")));
          std::vector<double> scales{0.5, 1.0, 1.5, 2.0, 2.5};
          if (o.contains("scales")) {
            if (!o["scales"].is_array()) throw Error(ErrorCode::InvalidArgument, "scales: expected an array");
            scales.clear();
            for (const auto& v : o["scales"]) {
              if (!v.is_number()) throw Error(ErrorCode::InvalidArgument, "scales: expected numbers");
              scales.push_back(v.get<double>());
            }
          }
          SweepOptions opt;
          opt.thresholds = thresholds_from(o.value("thresholds", json::object()));
          opt.pulse = pulse_from(o, opt.pulse);
          check_budget(2 * preps.size() * scales.size(), budget);
          const auto rows = noise_sweep(s, preps, scales, opt, context(o));
          json out = json::array();
          for (const auto& r : rows) {
            out.push_back({{"theta", r.prep.theta},
                           {"phi", r.prep.phi},
                           {"ns", r.ns},
                           {"f_phys", r.f_phys},
                           {"f_log", r.f_log},
                           {"accept", r.accept},
                           {"accept_phys", r.accept_phys},
                           {"throughput_log", r.f_log * r.accept},
                           {"phys_layout", r.phys_layout.label()},
                           {"log_layout", r.log_layout.label()}});
          }
          return json{{"pulse", to_json(opt.pulse)}, {"rows", out}};
        }}},
  };

  auto error = [&](int status, std::string_view code, const std::string& message) {
    json j{{"error", code}, {"message", message}, {"snapshot_id", snapshot_id_}};
    return ApiResponse{status, j.dump()};
  };

  const auto route = routes.find(path);
  if (route == routes.end()) return error(404, "NotFound", "no route " + std::string(path));
  if (method != route->second.first) {
    return error(405, "MethodNotAllowed", std::string(path) + " expects " + std::string(route->second.first));
  }
  try {
    json request = json::object();
    if (!body.empty()) {
      try {
        request = json::parse(body);
      } catch (const json::parse_error& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("request body: ") + e.what());
      }
      if (!request.is_object()) throw Error(ErrorCode::InvalidArgument, "request body must be a JSON object");
    }
    json out = route->second.second(request);
    out["snapshot_id"] = snapshot_id_;
    return {200, out.dump()};
  } catch (const BudgetExceeded& b) {
    return error(413, "BudgetExceeded",
                 "request needs " + std::to_string(b.requested) + " simulations, budget is " + std::to_string(budget_));
  } catch (const Error& e) {
    return error(400, error_code_name(e.code()), e.what());
  } catch (const json::exception& e) {
    return error(400, error_code_name(ErrorCode::InvalidArgument), e.what());
  }
}

struct HttpService::Impl {
  httplib::Server server;
};

HttpService::HttpService(const Api& api) : impl_(std::make_unique<Impl>()) {
  auto& svr = impl_->server;
  svr.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});
  auto forward = [&api](const httplib::Request& req, httplib::Response& res) {
    const auto r = api.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  svr.Get(".*", forward);
  svr.Post(".*", forward);
  svr.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
}

HttpService::~HttpService() = default;

int HttpService::bind(const std::string& host, int port) {
  auto& svr = impl_->server;
  const int bound = port == 0 ? svr.bind_to_any_port(host) : (svr.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpService::run() { impl_->server.listen_after_bind(); }

void HttpService::stop() { impl_->server.stop(); }

} // namespace lfd

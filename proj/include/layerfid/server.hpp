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

/**
 * @file    server.hpp
 * @brief   JSON-over-HTTP facade for the pipeline operations.
 *
 * Routes (all bodies JSON, all responses carry "snapshot_id"):
 *
 *     GET  /api/snapshot   qubits, edges and summary counts
 *     POST /api/filter     thresholds -> surviving graph, scored paths
 *     POST /api/run        pipeline config -> fidelity, accept, layout
 *     POST /api/waterfall  prep (+ options) -> waterfall report
 *     POST /api/cascade    prep, stages -> one row per stage
 *     POST /api/sweep      preps x scales -> sweep rows
 *
 * Errors come back as {"error": <code name>, "message", "snapshot_id"}:
 * 400 for library errors and bad bodies, 404 for unknown routes, 405 for a
 * known route with the wrong method, 413 when a request would exceed the
 * simulation budget.
 */

#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "layerfid/noise.hpp"
#include "layerfid/pipeline.hpp"

namespace lfd {

struct ApiResponse {
  int status = 200;
  std::string body;
};

class Api {
 public:
  static constexpr std::size_t kDefaultSimulationBudget = 10000;

  explicit Api(CalibrationSnapshot snapshot, PipelineContext ctx = {},
               std::size_t simulation_budget = kDefaultSimulationBudget);

  /// Pure over the snapshot; safe to call concurrently.
  ApiResponse handle(std::string_view method, std::string_view path, std::string_view body) const;

  const CalibrationSnapshot& snapshot() const { return snapshot_; }
  const std::string& snapshot_id() const { return snapshot_id_; }

 private:
  CalibrationSnapshot snapshot_;
  PipelineContext ctx_;
  std::size_t budget_;
  std::string snapshot_id_;
};

/// HTTP/1.1 listener forwarding to an Api, with permissive CORS headers.
class HttpService {
 public:
  explicit HttpService(const Api& api);
  ~HttpService();
  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  /// Binds without accepting yet; port 0 picks a free port. Returns the
  /// bound port and throws IoError on failure.
  int bind(const std::string& host, int port);
  /// Accepts connections until stop() is called.
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace lfd

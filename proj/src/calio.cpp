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

#include "layerfid/calio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "layerfid/error.hpp"

namespace lfd {

using json = nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;
constexpr std::string_view kCsvHeader = "mode,theta,phi,layout,pulse_sx,pulse_cz,pulse_meas,ns,fidelity,accept";

[[noreturn]] void malformed(const std::string& why) { throw Error(ErrorCode::MalformedSnapshot, why); }

json parse_json(std::string_view text, ErrorCode code) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(code, std::string("JSON parse error: ") + e.what());
  }
}

double number_at(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) malformed(where + "." + key + ": missing");
  if (!it->is_number()) malformed(where + "." + key + ": not a number");
  return it->get<double>();
}

int int_at(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) malformed(where + "." + key + ": missing");
  if (!it->is_number_integer()) malformed(where + "." + key + ": not an integer");
  return it->get<int>();
}

double optional_number(const json& obj, const char* key, double fallback, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  if (!it->is_number()) malformed(where + "." + key + ": not a number");
  return it->get<double>();
}

std::string lower(std::string_view s) {
  std::string out;
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(std::string_view tok, const std::string& where) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
    throw Error(ErrorCode::InvalidArgument, where + ": bad number '" + std::string(tok) + "'");
  }
  return v;
}

// Uniform double in [0, 1) from the top 53 bits.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

// RFC 4180-style record splitter; quoted fields may contain commas.
std::vector<std::vector<std::string>> parse_csv_records(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        records.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field.push_back(c);
      any = true;
    }
  }
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    records.push_back(std::move(row));
  }
  return records;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double to_microseconds(double value, std::string_view unit_text) {
  const std::string u = lower(unit_text);
  if (u.empty() || u == "us" || u == "µs" || u == "\xc2\xb5s") return value;
  if (u == "ns") return value * 1e-3;
  if (u == "ms") return value * 1e3;
  if (u == "s") return value * 1e6;
  return value;
}

struct PartialQubit {
  std::optional<double> t1, t2, e01, e10, ro, err_sx, err_x, dur_1q, dur_meas;
};

struct PartialEdge {
  double err = 0.0;
  std::optional<double> dur;
};

// Shared tail of both converters: defaults, clamps, drops and validation.
ConversionReport assemble(const std::string& backend, const std::string& timestamp,
                          std::map<int, PartialQubit> qubits, std::map<std::pair<int, int>, PartialEdge> edges,
                          std::set<std::string> unmapped, const DefaultDurations& defaults) {
  ConversionReport report;
  report.snapshot.backend_name = backend.empty() ? "unknown" : backend;
  report.snapshot.timestamp = timestamp.empty() ? "unknown" : timestamp;
  auto clamp_prob = [&](double p, int q, const char* name) {
    if (p < 0.0 || p > 0.5) {
      report.warnings.push_back("qubit " + std::to_string(q) + ": " + name + " " + format_real(p) +
                                " clamped to [0, 0.5]");
    }
    return std::clamp(p, 0.0, 0.5);
  };
  for (auto& [index, pq] : qubits) {
    if (!pq.t1 || !pq.t2 || !(*pq.t1 > 0.0) || !(*pq.t2 > 0.0)) {
      report.warnings.push_back("qubit " + std::to_string(index) + ": missing or invalid T1/T2, dropped");
      continue;
    }
    QubitCal q;
    q.t1_us = *pq.t1;
    q.t2_us = *pq.t2;
    const double ro = pq.ro.value_or(0.0);
    q.readout_e01 = clamp_prob(pq.e01.value_or(ro), index, "readout_e01");
    q.readout_e10 = clamp_prob(pq.e10.value_or(ro), index, "readout_e10");
    q.err_1q = clamp_prob(pq.err_sx ? *pq.err_sx : pq.err_x.value_or(0.0), index, "err_1q");
    q.dur_1q_us = pq.dur_1q.value_or(defaults.dur_1q_us);
    q.dur_meas_us = pq.dur_meas.value_or(defaults.dur_meas_us);
    if (!(q.dur_1q_us > 0.0)) q.dur_1q_us = defaults.dur_1q_us;
    if (!(q.dur_meas_us > 0.0)) q.dur_meas_us = defaults.dur_meas_us;
    report.snapshot.qubits[index] = q;
  }
  for (const auto& [pair, pe] : edges) {
    if (!report.snapshot.qubits.contains(pair.first) || !report.snapshot.qubits.contains(pair.second)) {
      report.warnings.push_back("edge " + std::to_string(pair.first) + "-" + std::to_string(pair.second) +
                                ": endpoint dropped, edge skipped");
      continue;
    }
    EdgeCal e{pair.first, pair.second, std::clamp(pe.err, 0.0, 0.5), pe.dur.value_or(defaults.dur_2q_us)};
    if (!(e.dur_2q_us > 0.0)) e.dur_2q_us = defaults.dur_2q_us;
    report.snapshot.edges.push_back(e);
  }
  for (auto& w : report.snapshot.normalize()) report.warnings.push_back(std::move(w));
  report.snapshot.validate();
  report.unmapped.assign(unmapped.begin(), unmapped.end());
  return report;
}

ConversionReport convert_properties_json(const json& doc, const DefaultDurations& defaults) {
  std::map<int, PartialQubit> qubits;
  std::map<std::pair<int, int>, PartialEdge> edges;
  std::set<std::string> unmapped;
  for (const auto& [key, value] : doc.items()) {
    if (key != "backend_name" && key != "last_update_date" && key != "qubits" && key != "gates") {
      unmapped.insert(key);
    }
  }
  const auto& qs = doc.at("qubits");
  for (std::size_t i = 0; i < qs.size(); ++i) {
    PartialQubit pq;
    for (const auto& item : qs[i]) {
      const std::string name = item.value("name", "");
      if (!item.contains("value") || !item["value"].is_number()) continue;
      const double v = item["value"].get<double>();
      const std::string u = item.value("unit", "");
      if (name == "T1") pq.t1 = to_microseconds(v, u);
      else if (name == "T2") pq.t2 = to_microseconds(v, u);
      else if (name == "prob_meas1_prep0") pq.e01 = v;
      else if (name == "prob_meas0_prep1") pq.e10 = v;
      else if (name == "readout_error") pq.ro = v;
      else if (name == "readout_length") pq.dur_meas = to_microseconds(v, u);
      else unmapped.insert("qubits[]." + name);
    }
    qubits[static_cast<int>(i)] = pq;
  }
  if (doc.contains("gates")) {
    for (const auto& g : doc["gates"]) {
      const std::string gate = lower(g.value("gate", ""));
      const auto targets = g.value("qubits", std::vector<int>{});
      std::optional<double> err, len;
      for (const auto& p : g.value("parameters", json::array())) {
        const std::string name = p.value("name", "");
        if (!p.contains("value") || !p["value"].is_number()) continue;
        if (name == "gate_error") err = p["value"].get<double>();
        else if (name == "gate_length") len = to_microseconds(p["value"].get<double>(), p.value("unit", ""));
      }
      if (targets.size() == 1 && (gate == "sx" || gate == "x")) {
        auto& pq = qubits[targets[0]];
        (gate == "sx" ? pq.err_sx : pq.err_x) = err;
        if (gate == "sx" || !pq.dur_1q) pq.dur_1q = len;
      } else if (targets.size() == 2 && (gate == "cz" || gate == "ecr" || gate == "cx")) {
        const auto key = std::minmax(targets[0], targets[1]);
        if (!edges.contains(key)) edges[key] = {err.value_or(0.0), len};
      } else if (gate != "rz" && gate != "id" && gate != "measure" && gate != "reset" && gate != "delay") {
        unmapped.insert("gates." + gate);
      }
    }
  }
  return assemble(doc.value("backend_name", ""), doc.value("last_update_date", ""), std::move(qubits),
                  std::move(edges), std::move(unmapped), defaults);
}

ConversionReport convert_calibration_csv(std::string_view text, const DefaultDurations& defaults) {
  const auto records = parse_csv_records(text);
  if (records.size() < 2) malformed("calibration CSV has no data rows");
  const auto& header = records.front();
  std::map<int, PartialQubit> qubits;
  std::map<std::pair<int, int>, PartialEdge> edges;
  std::set<std::string> unmapped;

  enum class Col { Skip, Qubit, T1, T2, E01, E10, Ro, Sx, X, DurMeas, Dur1q, TwoQ, TwoQLen };
  std::vector<Col> cols;
  for (const auto& h : header) {
    const std::string k = lower(trim(h));
    Col c = Col::Skip;
    if (k == "qubit") c = Col::Qubit;
    else if (k.starts_with("t1")) c = Col::T1;
    else if (k.starts_with("t2")) c = Col::T2;
    else if (k.find("meas1 prep0") != std::string::npos) c = Col::E01;
    else if (k.find("meas0 prep1") != std::string::npos) c = Col::E10;
    else if (k.find("readout assignment error") != std::string::npos) c = Col::Ro;
    else if (k.find("readout length") != std::string::npos) c = Col::DurMeas;
    else if (k.find("(sx) error") != std::string::npos || k == "sx error") c = Col::Sx;
    else if (k.find("pauli-x error") != std::string::npos) c = Col::X;
    else if (k.find("single-qubit gate length") != std::string::npos) c = Col::Dur1q;
    else if (k.starts_with("cz error") || k.starts_with("ecr error") || k.starts_with("cnot error")) c = Col::TwoQ;
    else if (k.starts_with("gate length") || k.starts_with("gate time")) c = Col::TwoQLen;
    else unmapped.insert("column:" + trim(h));
    cols.push_back(c);
  }
  if (std::find(cols.begin(), cols.end(), Col::Qubit) == cols.end()) malformed("calibration CSV lacks a Qubit column");

  // Cells such as "1:0.004;15:0.006" or "0_1:0.004" list per-neighbour values.
  auto pair_values = [](int q, const std::string& cell) {
    std::vector<std::pair<std::pair<int, int>, double>> out;
    for (const auto& part : split(cell, ';')) {
      const auto colon = part.find(':');
      if (colon == std::string::npos) continue;
      const std::string lhs = trim(part.substr(0, colon));
      const std::string rhs = trim(part.substr(colon + 1));
      char* end = nullptr;
      const double v = std::strtod(rhs.c_str(), &end);
      if (end == rhs.c_str()) continue;
      const auto us = lhs.find('_');
      int a = q, b = 0;
      try {
        if (us != std::string::npos) {
          a = std::stoi(lhs.substr(0, us));
          b = std::stoi(lhs.substr(us + 1));
        } else {
          b = std::stoi(lhs);
        }
      } catch (const std::exception&) {
        continue;
      }
      if (a != b) out.push_back({std::minmax(a, b), v});
    }
    return out;
  };

  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    int q = -1;
    for (std::size_t i = 0; i < rec.size() && i < cols.size(); ++i) {
      if (cols[i] == Col::Qubit) q = std::atoi(trim(rec[i]).c_str());
    }
    if (q < 0) continue;
    auto& pq = qubits[q];
    for (std::size_t i = 0; i < rec.size() && i < cols.size(); ++i) {
      const std::string cell = trim(rec[i]);
      if (cell.empty()) continue;
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      const bool numeric = end != cell.c_str();
      switch (cols[i]) {
      case Col::T1: if (numeric) pq.t1 = v; break;
      case Col::T2: if (numeric) pq.t2 = v; break;
      case Col::E01: if (numeric) pq.e01 = v; break;
      case Col::E10: if (numeric) pq.e10 = v; break;
      case Col::Ro: if (numeric) pq.ro = v; break;
      case Col::Sx: if (numeric) pq.err_sx = v; break;
      case Col::X: if (numeric) pq.err_x = v; break;
      case Col::DurMeas: if (numeric) pq.dur_meas = v * 1e-3; break;
      case Col::Dur1q: if (numeric) pq.dur_1q = v * 1e-3; break;
      case Col::TwoQ:
        for (const auto& [key, val] : pair_values(q, cell)) {
          if (!edges.contains(key)) edges[key].err = val;
        }
        break;
      case Col::TwoQLen:
        for (const auto& [key, val] : pair_values(q, cell)) {
          if (!edges[key].dur) edges[key].dur = val * 1e-3;
        }
        break;
      default: break;
      }
    }
  }
  return assemble("", "", std::move(qubits), std::move(edges), std::move(unmapped), defaults);
}

ResultRow parse_row(const std::vector<std::string>& f, std::size_t line) {
  const std::string where = "results line " + std::to_string(line);
  if (f.size() != 10) throw Error(ErrorCode::InvalidArgument, where + ": expected 10 fields");
  ResultRow r;
  r.mode = parse_mode(f[0]);
  r.theta = parse_real(f[1], where);
  r.phi = parse_real(f[2], where);
  r.layout = f[3];
  r.pulse = {parse_pulse_shape(f[4]), parse_pulse_shape(f[5]), parse_pulse_shape(f[6])};
  r.ns = parse_real(f[7], where);
  r.fidelity = parse_real(f[8], where);
  r.accept = parse_real(f[9], where);
  return r;
}

} // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "failed reading " + path.string());
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

LoadedSnapshot parse_snapshot(std::string_view json_text, const DefaultDurations& defaults) {
  const json doc = parse_json(json_text, ErrorCode::MalformedSnapshot);
  if (!doc.is_object()) malformed("snapshot must be a JSON object");
  if (doc.contains("version") && doc["version"] != kSchemaVersion) {
    malformed("unsupported snapshot version " + doc["version"].dump());
  }
  LoadedSnapshot out;
  auto& s = out.snapshot;
  s.backend_name = doc.value("backend", "");
  s.timestamp = doc.value("timestamp", "");
  if (!doc.contains("qubits") || !doc["qubits"].is_array()) malformed("qubits: missing array");
  const auto& qs = doc["qubits"];
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const std::string where = "qubits[" + std::to_string(i) + "]";
    const auto& item = qs[i];
    if (!item.is_object()) malformed(where + ": not an object");
    const int index = int_at(item, "index", where);
    QubitCal q;
    q.t1_us = number_at(item, "t1_us", where);
    q.t2_us = number_at(item, "t2_us", where);
    q.readout_e01 = number_at(item, "readout_e01", where);
    q.readout_e10 = number_at(item, "readout_e10", where);
    q.err_1q = number_at(item, "err_1q", where);
    q.dur_1q_us = optional_number(item, "dur_1q_us", defaults.dur_1q_us, where);
    q.dur_meas_us = optional_number(item, "dur_meas_us", defaults.dur_meas_us, where);
    if (!s.qubits.emplace(index, q).second) {
      throw Error(ErrorCode::InvalidCalibration, where + ".index: duplicate qubit " + std::to_string(index));
    }
  }
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array()) malformed("edges: not an array");
    const auto& es = doc["edges"];
    for (std::size_t i = 0; i < es.size(); ++i) {
      const std::string where = "edges[" + std::to_string(i) + "]";
      if (!es[i].is_object()) malformed(where + ": not an object");
      EdgeCal e;
      e.a = int_at(es[i], "a", where);
      e.b = int_at(es[i], "b", where);
      e.err_2q = number_at(es[i], "err_2q", where);
      e.dur_2q_us = optional_number(es[i], "dur_2q_us", defaults.dur_2q_us, where);
      s.edges.push_back(e);
    }
  }
  out.warnings = s.normalize();
  s.validate();
  return out;
}

LoadedSnapshot load_snapshot(const std::filesystem::path& path, const DefaultDurations& defaults) {
  return parse_snapshot(read_text_file(path), defaults);
}

std::string snapshot_to_json(const CalibrationSnapshot& snapshot) {
  nlohmann::ordered_json doc;
  doc["version"] = kSchemaVersion;
  doc["backend"] = snapshot.backend_name;
  doc["timestamp"] = snapshot.timestamp;
  doc["qubits"] = nlohmann::ordered_json::array();
  for (const auto& [index, q] : snapshot.qubits) {
    doc["qubits"].push_back({{"index", index},
                             {"t1_us", q.t1_us},
                             {"t2_us", q.t2_us},
                             {"readout_e01", q.readout_e01},
                             {"readout_e10", q.readout_e10},
                             {"err_1q", q.err_1q},
                             {"dur_1q_us", q.dur_1q_us},
                             {"dur_meas_us", q.dur_meas_us}});
  }
  doc["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : snapshot.edges) {
    doc["edges"].push_back({{"a", e.a}, {"b", e.b}, {"err_2q", e.err_2q}, {"dur_2q_us", e.dur_2q_us}});
  }
  return doc.dump(2) + "\n";
}

void save_snapshot(const CalibrationSnapshot& snapshot, const std::filesystem::path& path) {
  write_text_file(path, snapshot_to_json(snapshot));
}

std::string_view to_string(Regime regime) {
  switch (regime) {
  case Regime::T1Dominated: return "t1_dominated";
  case Regime::DephasingDominated: return "dephasing_dominated";
  case Regime::Balanced: return "balanced";
  }
  return "?";
}

Regime parse_regime(std::string_view text) {
  for (auto r : {Regime::T1Dominated, Regime::DephasingDominated, Regime::Balanced}) {
    if (text == to_string(r)) return r;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown regime '" + std::string(text) + "'");
}

SynthProfile SynthProfile::from_topology(std::string_view text, Regime regime, std::uint64_t seed) {
  SynthProfile p;
  p.regime = regime;
  p.seed = seed;
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw Error(ErrorCode::InvalidArgument, "topology must look like line:N");
  const std::string kind(text.substr(0, colon));
  const std::string dims(text.substr(colon + 1));
  auto to_int = [&](const std::string& s) {
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || v < 1) {
      throw Error(ErrorCode::InvalidArgument, "bad topology size '" + s + "'");
    }
    return v;
  };
  if (kind == "line" || kind == "ring") {
    p.topology = kind == "line" ? Topology::Line : Topology::Ring;
    p.size = to_int(dims);
  } else if (kind == "grid") {
    const auto x = dims.find('x');
    if (x == std::string::npos) throw Error(ErrorCode::InvalidArgument, "grid needs RxC");
    p.topology = Topology::Grid;
    p.rows = to_int(dims.substr(0, x));
    p.size = to_int(dims.substr(x + 1));
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown topology '" + kind + "'");
  }
  return p;
}

CalibrationSnapshot synth_snapshot(const SynthProfile& profile) {
  if (profile.size < 1 || profile.rows < 1) throw Error(ErrorCode::InvalidArgument, "synthetic topology is empty");
  std::mt19937_64 rng(profile.seed);
  const DefaultDurations dur;
  auto jitter = [&](double x) { return x * (0.7 + 0.6 * unit(rng)); };

  CalibrationSnapshot s;
  const int n = profile.topology == Topology::Grid ? profile.rows * profile.size : profile.size;
  std::string topo;
  switch (profile.topology) {
  case Topology::Line: topo = "line" + std::to_string(n); break;
  case Topology::Ring: topo = "ring" + std::to_string(n); break;
  case Topology::Grid: topo = "grid" + std::to_string(profile.rows) + "x" + std::to_string(profile.size); break;
  }
  s.backend_name = "synth-" + topo + "-" + std::string(to_string(profile.regime));
  s.timestamp = "seed-" + std::to_string(profile.seed);

  for (int q = 0; q < n; ++q) {
    QubitCal c;
    switch (profile.regime) {
    case Regime::T1Dominated:
      c.t1_us = 40.0 + 40.0 * unit(rng);
      c.t2_us = 2.0 * c.t1_us * (0.95 + 0.05 * unit(rng));
      break;
    case Regime::DephasingDominated:
      c.t1_us = 200.0 + 100.0 * unit(rng);
      c.t2_us = 15.0 + 15.0 * unit(rng);
      break;
    case Regime::Balanced:
      c.t1_us = 80.0 + 80.0 * unit(rng);
      c.t2_us = c.t1_us * (0.6 + 0.6 * unit(rng));
      break;
    }
    c.dur_1q_us = dur.dur_1q_us;
    c.dur_meas_us = dur.dur_meas_us;
    c.err_1q = std::min(0.5, coherence_error(c.t1_us, c.t2_us, c.dur_1q_us) + jitter(profile.err_1q));
    // Relaxation during readout makes 1 -> 0 the likelier misread.
    c.readout_e01 = std::min(0.5, 0.7 * jitter(profile.readout));
    c.readout_e10 = std::min(0.5, 1.3 * jitter(profile.readout));
    s.qubits[q] = c;
  }

  std::vector<std::pair<int, int>> pairs;
  if (profile.topology == Topology::Grid) {
    for (int r = 0; r < profile.rows; ++r) {
      for (int c = 0; c < profile.size; ++c) {
        const int q = r * profile.size + c;
        if (c + 1 < profile.size) pairs.emplace_back(q, q + 1);
        if (r + 1 < profile.rows) pairs.emplace_back(q, q + profile.size);
      }
    }
  } else {
    for (int q = 0; q + 1 < n; ++q) pairs.emplace_back(q, q + 1);
    if (profile.topology == Topology::Ring && n >= 3) pairs.emplace_back(0, n - 1);
  }
  for (const auto& [a, b] : pairs) {
    const auto& qa = s.qubits[a];
    const auto& qb = s.qubits[b];
    const double coh = 0.5 * (coherence_error(qa.t1_us, qa.t2_us, dur.dur_2q_us) +
                              coherence_error(qb.t1_us, qb.t2_us, dur.dur_2q_us));
    s.edges.push_back({a, b, std::min(0.5, coh + jitter(profile.err_2q)), dur.dur_2q_us});
  }
  s.validate();
  return s;
}

NoiseConfig parse_config(std::string_view json_text) {
  const json doc = parse_json(json_text, ErrorCode::InvalidArgument);
  if (!doc.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");
  NoiseConfig cfg;
  try {
    if (doc.contains("shape_factors")) {
      for (const auto& [cls_name, shapes] : doc["shape_factors"].items()) {
        GateClass cls;
        if (cls_name == "SX" || cls_name == "X") cls = GateClass::SingleQubit;
        else if (cls_name == "CZ") cls = GateClass::TwoQubit;
        else if (cls_name == "MEASURE") cls = GateClass::Measure;
        else throw Error(ErrorCode::InvalidArgument, "shape_factors: unknown gate class '" + cls_name + "'");
        for (const auto& [shape, factor] : shapes.items()) {
          cfg.shape_factors.set(cls, parse_pulse_shape(shape), factor.get<double>());
        }
      }
    }
    if (doc.contains("durations")) {
      const auto& d = doc["durations"];
      cfg.durations.dur_1q_us = d.value("dur_1q_us", cfg.durations.dur_1q_us);
      cfg.durations.dur_2q_us = d.value("dur_2q_us", cfg.durations.dur_2q_us);
      cfg.durations.dur_meas_us = d.value("dur_meas_us", cfg.durations.dur_meas_us);
      for (double v : {cfg.durations.dur_1q_us, cfg.durations.dur_2q_us, cfg.durations.dur_meas_us}) {
        if (!(v > 0.0)) throw Error(ErrorCode::InvalidArgument, "durations must be positive");
      }
    }
    if (doc.contains("pauli_weights_1q")) cfg.pauli_weights_1q = doc["pauli_weights_1q"].get<std::array<double, 3>>();
    if (doc.contains("pauli_weights_2q")) cfg.pauli_weights_2q = doc["pauli_weights_2q"].get<std::array<double, 15>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("config: ") + e.what());
  }
  return cfg;
}

NoiseConfig load_config(const std::filesystem::path& path) { return parse_config(read_text_file(path)); }

std::string config_to_json(const NoiseConfig& config) {
  nlohmann::ordered_json doc;
  doc["version"] = kSchemaVersion;
  for (auto cls : {GateClass::SingleQubit, GateClass::TwoQubit, GateClass::Measure}) {
    for (auto shape : kAllShapes) {
      doc["shape_factors"][std::string(to_string(cls))][std::string(to_string(shape))] =
          config.shape_factors.at(cls, shape);
    }
  }
  doc["durations"] = {{"dur_1q_us", config.durations.dur_1q_us},
                      {"dur_2q_us", config.durations.dur_2q_us},
                      {"dur_meas_us", config.durations.dur_meas_us}};
  doc["pauli_weights_1q"] = config.pauli_weights_1q;
  doc["pauli_weights_2q"] = config.pauli_weights_2q;
  return doc.dump(2) + "\n";
}

std::string results_to_csv(const std::vector<ResultRow>& rows) {
  std::string out(kCsvHeader);
  out.push_back('\n');
  for (const auto& r : rows) {
    if (r.layout.find_first_of(",\"\n\r") != std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, "layout label must not contain CSV delimiters");
    }
    out += std::string(to_string(r.mode)) + "," + format_real(r.theta) + "," + format_real(r.phi) + "," + r.layout +
           "," + std::string(to_string(r.pulse.sx)) + "," + std::string(to_string(r.pulse.cz)) + "," +
           std::string(to_string(r.pulse.measure)) + "," + format_real(r.ns) + "," + format_real(r.fidelity) +
           "," + format_real(r.accept) + "\n";
  }
  return out;
}

std::vector<ResultRow> results_from_csv(std::string_view text) {
  std::vector<ResultRow> rows;
  std::size_t line = 0;
  bool header_seen = false;
  for (const auto& raw : split(text, '\n')) {
    ++line;
    std::string_view l = raw;
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    if (l.empty()) continue;
    if (!header_seen) {
      if (l != kCsvHeader) throw Error(ErrorCode::InvalidArgument, "results CSV header mismatch");
      header_seen = true;
      continue;
    }
    rows.push_back(parse_row(split(l, ','), line));
  }
  if (!header_seen) throw Error(ErrorCode::InvalidArgument, "results CSV is missing its header");
  return rows;
}

void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  write_text_file(path, results_to_csv(rows));
}

std::vector<ResultRow> read_results(const std::filesystem::path& path) {
  try {
    return results_from_csv(read_text_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoError) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

ConversionReport convert_vendor_snapshot(std::string_view text, const DefaultDurations& defaults) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i < text.size() && text[i] == '{') {
    const json doc = parse_json(text, ErrorCode::MalformedSnapshot);
    if (!doc.contains("qubits") || !doc["qubits"].is_array()) malformed("properties document lacks a qubits array");
    // Already in our schema: pass through the regular loader.
    if (!doc["qubits"].empty() && doc["qubits"][0].is_object()) {
      auto loaded = parse_snapshot(text, defaults);
      return {std::move(loaded.snapshot), {}, std::move(loaded.warnings)};
    }
    try {
      return convert_properties_json(doc, defaults);
    } catch (const json::exception& e) {
      malformed(std::string("properties document: ") + e.what());
    }
  }
  return convert_calibration_csv(text, defaults);
}

} // namespace lfd

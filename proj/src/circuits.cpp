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

#include "layerfid/circuits.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>

#include "layerfid/error.hpp"

namespace lfd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBranchFloor = 1e-15;

GateOp make_op(OpKind kind, std::vector<int> qubits, double angle = 0.0, std::vector<int> cbits = {}) {
  GateOp op;
  op.kind = kind;
  op.qubits = std::move(qubits);
  op.angle = angle;
  op.cbits = std::move(cbits);
  return op;
}

std::size_t arity(OpKind kind) { return (kind == OpKind::CX || kind == OpKind::CZ) ? 2 : 1; }

Matrix ideal_unitary(const GateOp& op) {
  switch (op.kind) {
  case OpKind::RZ: return gates::rz(op.angle);
  case OpKind::SX: return gates::sx();
  case OpKind::X: return gates::x();
  case OpKind::H: return gates::h();
  case OpKind::CX: return gates::cx();
  case OpKind::CZ: return gates::cz();
  default: break;
  }
  throw Error(ErrorCode::InvalidArgument, "op has no unitary");
}

std::optional<GateKind> native_kind(OpKind kind) {
  switch (kind) {
  case OpKind::RZ: return GateKind::RZ;
  case OpKind::SX: return GateKind::SX;
  case OpKind::X: return GateKind::X;
  case OpKind::CZ: return GateKind::CZ;
  case OpKind::Measure: return GateKind::Measure;
  default: return std::nullopt;
  }
}

unsigned parity(unsigned long bits, const std::vector<int>& cbits) {
  unsigned p = 0;
  for (int c : cbits) p ^= static_cast<unsigned>((bits >> c) & 1UL);
  return p;
}

bool passes(unsigned long bits, const SyndromeCheck& check) {
  unsigned value = 0;
  for (int c : check.cbits) value = (value << 1) | static_cast<unsigned>((bits >> c) & 1UL);
  return std::find(check.accepted.begin(), check.accepted.end(), value) != check.accepted.end();
}

void append_h(std::vector<GateOp>& out, int q) {
  out.push_back(make_op(OpKind::RZ, {q}, kPi / 2));
  out.push_back(make_op(OpKind::SX, {q}));
  out.push_back(make_op(OpKind::RZ, {q}, kPi / 2));
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string join(const std::vector<int>& v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s.push_back(sep);
    s += std::to_string(v[i]);
  }
  return s;
}

struct Branch {
  DensityMatrix rho;
  unsigned long bits = 0;
};

SimResult run_branches(const Circuit& circuit, const CalibrationSnapshot* snapshot,
                       const PulseAssignment& pulse, NoiseScale ns, const NoiseConfig& config) {
  circuit.validate();
  const bool noisy = ns.value() > 0.0;
  if (noisy && !circuit.is_native()) {
    throw Error(ErrorCode::InvalidArgument, "noisy simulation requires a transpiled circuit");
  }
  std::map<int, int> local_of;
  if (circuit.is_native()) {
    for (int i = 0; i < circuit.n_qubits; ++i) local_of[circuit.physical[static_cast<std::size_t>(i)]] = i;
  } else {
    for (int i = 0; i < circuit.n_qubits; ++i) local_of[i] = i;
  }
  auto local = [&](const std::vector<int>& qs) {
    std::vector<int> out;
    for (int q : qs) out.push_back(local_of.at(q));
    return out;
  };
  const bool with_cal = snapshot != nullptr && circuit.is_native();

  std::vector<Branch> branches;
  branches.push_back({DensityMatrix(circuit.n_qubits), 0});

  for (const auto& op : circuit.ops) {
    const std::vector<int> targets = local(op.qubits);
    if (op.kind == OpKind::CondX || op.kind == OpKind::CondZ) {
      const Matrix u = op.kind == OpKind::CondX ? gates::x() : gates::z();
      for (auto& b : branches) {
        if (parity(b.bits, op.cbits)) b.rho = apply_unitary(std::move(b.rho), u, targets);
      }
      continue;
    }
    const auto kind = native_kind(op.kind);
    std::optional<KrausChannel> channel;
    if (with_cal && kind) {
      const auto cls = gate_class(*kind);
      const PulseShape shape = op.shape ? *op.shape : (cls ? pulse.for_class(*cls) : PulseShape::Square);
      channel = gate_channel(*snapshot, *kind, op.qubits, shape, ns, config);
      if (channel->is_identity(0.0)) channel.reset();
    }
    if (op.kind == OpKind::Measure) {
      Confusion conf = Confusion::Identity();
      if (with_cal) {
        const PulseShape shape = op.shape ? *op.shape : pulse.measure;
        conf = confusion(*snapshot, op.qubits[0], ns,
                         config.shape_factors.at(GateClass::Measure, shape));
      }
      std::vector<Branch> next;
      next.reserve(branches.size() * 2);
      for (auto& b : branches) {
        DensityMatrix rho = channel ? apply_channel(std::move(b.rho), *channel, targets) : std::move(b.rho);
        for (int recorded = 0; recorded < 2; ++recorded) {
          DensityMatrix sigma = project_recorded(rho, targets[0], conf, recorded);
          if (sigma.trace() <= kBranchFloor) continue;
          unsigned long bits = b.bits & ~(1UL << op.cbits[0]);
          if (recorded) bits |= 1UL << op.cbits[0];
          next.push_back({std::move(sigma), bits});
        }
      }
      branches = std::move(next);
      continue;
    }
    const Matrix u = ideal_unitary(op);
    for (auto& b : branches) {
      b.rho = apply_unitary(std::move(b.rho), u, targets);
      if (channel) b.rho = apply_channel(std::move(b.rho), *channel, targets);
    }
  }

  SimResult result;
  const auto n = static_cast<Eigen::Index>(std::size_t{1} << circuit.n_qubits);
  Matrix accepted = Matrix::Zero(n, n);
  double accept = 0.0;
  for (const auto& b : branches) {
    std::string key(static_cast<std::size_t>(circuit.n_cbits), '0');
    for (int c = 0; c < circuit.n_cbits; ++c) {
      if ((b.bits >> c) & 1UL) key[static_cast<std::size_t>(c)] = '1';
    }
    const double p = b.rho.trace();
    result.branch_log[key] += p;
    if (std::all_of(circuit.checks.begin(), circuit.checks.end(),
                    [&](const SyndromeCheck& chk) { return passes(b.bits, chk); })) {
      accepted += b.rho.data();
      accept += p;
    }
  }

  const Matrix mixed = Matrix::Identity(2, 2) * 0.5;
  if (circuit.mode == TeleportMode::Physical) {
    result.accept_prob = 1.0;
    result.codespace_prob = 1.0;
    const DensityMatrix total(circuit.n_qubits, std::move(accepted));
    DensityMatrix bob = partial_trace(total, circuit.roles.bob);
    bob.mutable_data() /= bob.trace();
    result.output_state = std::move(bob);
    return result;
  }

  result.accept_prob = std::clamp(accept, 0.0, 1.0);
  if (!(accept > 0.0)) {
    result.codespace_prob = 0.0;
    result.output_state = DensityMatrix(1, mixed);
    return result;
  }
  const DensityMatrix total(circuit.n_qubits, std::move(accepted));
  const DensityMatrix bob = partial_trace(total, circuit.roles.bob);
  // Decode: project onto span{|00>, |11>} and relabel as |0>, |1>.
  Matrix decoded(2, 2);
  decoded << bob(0, 0), bob(0, 3), bob(3, 0), bob(3, 3);
  const double weight = decoded.trace().real();
  result.codespace_prob = std::clamp(weight / accept, 0.0, 1.0);
  if (!(weight > 0.0)) {
    result.output_state = DensityMatrix(1, mixed);
    return result;
  }
  result.output_state = DensityMatrix(1, decoded / weight);
  return result;
}

} // namespace

std::string_view to_string(OpKind kind) {
  switch (kind) {
  case OpKind::RZ: return "RZ";
  case OpKind::SX: return "SX";
  case OpKind::X: return "X";
  case OpKind::H: return "H";
  case OpKind::CX: return "CX";
  case OpKind::CZ: return "CZ";
  case OpKind::Measure: return "MEASURE";
  case OpKind::CondX: return "COND_X";
  case OpKind::CondZ: return "COND_Z";
  }
  return "?";
}

std::string_view to_string(TeleportMode mode) {
  return mode == TeleportMode::Physical ? "physical" : "encoded";
}

TeleportMode parse_mode(std::string_view text) {
  if (text == "physical") return TeleportMode::Physical;
  if (text == "encoded") return TeleportMode::Encoded;
  throw Error(ErrorCode::InvalidArgument, "mode must be 'physical' or 'encoded'");
}

int Circuit::two_qubit_count() const {
  return static_cast<int>(std::count_if(ops.begin(), ops.end(), [](const GateOp& op) { return op.is_two_qubit(); }));
}

void Circuit::validate() const {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw Error(ErrorCode::InvalidDimension, "circuit qubit count out of range");
  }
  if (n_cbits < 0 || n_cbits > 32) throw Error(ErrorCode::InvalidArgument, "classical register out of range");
  if (is_native() && physical.size() != static_cast<std::size_t>(n_qubits)) {
    throw Error(ErrorCode::InvalidTargets, "physical map does not cover every qubit");
  }
  const std::set<int> allowed = is_native() ? std::set<int>(physical.begin(), physical.end())
                                            : std::set<int>{};
  if (is_native() && allowed.size() != physical.size()) {
    throw Error(ErrorCode::InvalidTargets, "physical map is not injective");
  }
  std::vector<bool> written(static_cast<std::size_t>(n_cbits), false);
  for (const auto& op : ops) {
    if (op.qubits.size() != arity(op.kind)) {
      throw Error(ErrorCode::InvalidTargets, std::string(to_string(op.kind)) + " has wrong arity");
    }
    for (int q : op.qubits) {
      const bool ok = is_native() ? allowed.contains(q) : (q >= 0 && q < n_qubits);
      if (!ok) throw Error(ErrorCode::InvalidTargets, "qubit " + std::to_string(q) + " not in circuit");
    }
    if (op.is_two_qubit() && op.qubits[0] == op.qubits[1]) {
      throw Error(ErrorCode::InvalidTargets, "two-qubit op needs distinct qubits");
    }
    for (int c : op.cbits) {
      if (c < 0 || c >= n_cbits) throw Error(ErrorCode::InvalidArgument, "classical bit out of range");
    }
    if (op.kind == OpKind::Measure) {
      if (op.cbits.size() != 1) throw Error(ErrorCode::InvalidArgument, "MEASURE writes exactly one bit");
      written[static_cast<std::size_t>(op.cbits[0])] = true;
    } else if (op.kind == OpKind::CondX || op.kind == OpKind::CondZ) {
      if (op.cbits.empty()) throw Error(ErrorCode::InvalidArgument, "conditional op needs a bit");
      for (int c : op.cbits) {
        if (!written[static_cast<std::size_t>(c)]) {
          throw Error(ErrorCode::InvalidArgument, "classical bit c" + std::to_string(c) + " read before written");
        }
      }
    } else if (!op.cbits.empty()) {
      throw Error(ErrorCode::InvalidArgument, "only MEASURE and COND ops carry classical bits");
    }
  }
}

PulseShape PulseAssignment::for_class(GateClass cls) const {
  switch (cls) {
  case GateClass::SingleQubit: return sx;
  case GateClass::TwoQubit: return cz;
  case GateClass::Measure: return measure;
  }
  return sx;
}

std::string PulseAssignment::label() const {
  return std::string(to_string(sx)) + "/" + std::string(to_string(cz)) + "/" +
         std::string(to_string(measure));
}

std::vector<PulseAssignment> all_pulse_assignments() {
  std::vector<PulseAssignment> out;
  for (auto sx : kAllShapes)
    for (auto cz : kAllShapes)
      for (auto meas : kAllShapes) out.push_back({sx, cz, meas});
  return out;
}

std::vector<GateOp> state_prep_ops(const StatePrep& prep, int qubit) {
  // Ry(theta) = Rz(pi) SX Rz(theta + pi) SX up to global phase; the trailing
  // Rz(pi) merges with Rz(phi).
  return {make_op(OpKind::SX, {qubit}), make_op(OpKind::RZ, {qubit}, prep.theta + kPi),
          make_op(OpKind::SX, {qubit}), make_op(OpKind::RZ, {qubit}, kPi + prep.phi)};
}

Circuit build_physical_teleport(const StatePrep& prep) {
  Circuit c;
  c.n_qubits = 3;
  c.n_cbits = 2;
  c.mode = TeleportMode::Physical;
  c.roles = {{0}, {1}, {2}};
  c.ops = state_prep_ops(prep, 0);
  c.ops.push_back(make_op(OpKind::H, {1}));
  c.ops.push_back(make_op(OpKind::CX, {1, 2}));
  c.bell_measure_index = c.ops.size();
  c.ops.push_back(make_op(OpKind::CX, {0, 1}));
  c.ops.push_back(make_op(OpKind::H, {0}));
  c.ops.push_back(make_op(OpKind::Measure, {0}, 0.0, {0}));
  c.ops.push_back(make_op(OpKind::Measure, {1}, 0.0, {1}));
  c.ops.push_back(make_op(OpKind::CondX, {2}, 0.0, {1}));
  c.ops.push_back(make_op(OpKind::CondZ, {2}, 0.0, {0}));
  return c;
}

Circuit build_encoded_teleport(const StatePrep& prep) {
  Circuit c;
  c.n_qubits = 6;
  c.n_cbits = 4;
  c.mode = TeleportMode::Encoded;
  c.roles = {{0, 1}, {2, 3}, {4, 5}};
  c.ops = state_prep_ops(prep, 0);
  c.ops.push_back(make_op(OpKind::CX, {0, 1}));
  c.ops.push_back(make_op(OpKind::H, {2}));
  c.ops.push_back(make_op(OpKind::CX, {2, 4}));
  c.ops.push_back(make_op(OpKind::CX, {2, 3}));
  c.ops.push_back(make_op(OpKind::CX, {4, 5}));
  c.bell_measure_index = c.ops.size();
  c.ops.push_back(make_op(OpKind::CX, {0, 2}));
  c.ops.push_back(make_op(OpKind::CX, {1, 3}));
  c.ops.push_back(make_op(OpKind::H, {0}));
  c.ops.push_back(make_op(OpKind::H, {1}));
  for (int q = 0; q < 4; ++q) c.ops.push_back(make_op(OpKind::Measure, {q}, 0.0, {q}));
  c.ops.push_back(make_op(OpKind::CondX, {4}, 0.0, {2}));
  c.ops.push_back(make_op(OpKind::CondX, {5}, 0.0, {2}));
  c.ops.push_back(make_op(OpKind::CondZ, {4}, 0.0, {0, 1}));
  c.checks.push_back({{2, 3}, {0b00, 0b11}});
  return c;
}

Circuit build_teleport(TeleportMode mode, const StatePrep& prep) {
  return mode == TeleportMode::Physical ? build_physical_teleport(prep) : build_encoded_teleport(prep);
}

CouplingGraph interaction_graph(const Circuit& circuit) {
  CouplingGraph g;
  for (int q = 0; q < circuit.n_qubits; ++q) {
    g.add_node(circuit.is_native() ? circuit.physical[static_cast<std::size_t>(q)] : q);
  }
  for (const auto& op : circuit.ops) {
    if (op.is_two_qubit()) g.add_edge(op.qubits[0], op.qubits[1]);
  }
  return g;
}

Circuit rewrite_native(const Circuit& circuit) {
  std::vector<GateOp> expanded;
  std::size_t bell = circuit.ops.size();
  for (std::size_t i = 0; i < circuit.ops.size(); ++i) {
    if (i == circuit.bell_measure_index) bell = expanded.size();
    const auto& op = circuit.ops[i];
    if (op.kind == OpKind::H) {
      append_h(expanded, op.qubits[0]);
    } else if (op.kind == OpKind::CX) {
      append_h(expanded, op.qubits[1]);
      expanded.push_back(make_op(OpKind::CZ, op.qubits));
      append_h(expanded, op.qubits[1]);
    } else {
      expanded.push_back(op);
    }
  }

  // Merge RZ runs per qubit; bell tracks the first surviving op at or
  // after the original boundary.
  std::vector<GateOp> merged;
  std::map<int, std::size_t> last_on;
  std::size_t merged_bell = std::string::npos;
  for (std::size_t i = 0; i < expanded.size(); ++i) {
    const auto& op = expanded[i];
    if (i == bell) merged_bell = merged.size();
    if (op.kind == OpKind::RZ) {
      const auto it = last_on.find(op.qubits[0]);
      if (it != last_on.end() && merged[it->second].kind == OpKind::RZ) {
        merged[it->second].angle += op.angle;
        continue;
      }
    }
    merged.push_back(op);
    for (int q : op.qubits) last_on[q] = merged.size() - 1;
  }
  if (merged_bell == std::string::npos) merged_bell = merged.size();

  Circuit out = circuit;
  out.ops.clear();
  out.bell_measure_index = merged.size();
  for (std::size_t i = 0; i < merged.size(); ++i) {
    auto op = merged[i];
    if (i == merged_bell) out.bell_measure_index = out.ops.size();
    if (op.kind == OpKind::RZ) {
      op.angle = std::remainder(op.angle, 2.0 * kPi);
      if (std::abs(op.angle) <= 1e-15) continue;
    }
    out.ops.push_back(std::move(op));
  }
  return out;
}

Circuit transpile(const Circuit& circuit, std::span<const int> mapping, const CouplingGraph& graph) {
  if (circuit.is_native()) throw Error(ErrorCode::InvalidArgument, "circuit is already transpiled");
  if (mapping.size() != static_cast<std::size_t>(circuit.n_qubits)) {
    throw Error(ErrorCode::InvalidTargets, "layout must map every logical qubit");
  }
  const std::set<int> distinct(mapping.begin(), mapping.end());
  if (distinct.size() != mapping.size()) throw Error(ErrorCode::InvalidTargets, "layout is not injective");
  for (int p : mapping) {
    if (!graph.has_node(p)) {
      throw Error(ErrorCode::InvalidTargets, "physical qubit " + std::to_string(p) + " not in coupling graph");
    }
  }
  Circuit out = rewrite_native(circuit);
  for (auto& op : out.ops) {
    for (int& q : op.qubits) q = mapping[static_cast<std::size_t>(q)];
    if (op.is_two_qubit() && !graph.has_edge(op.qubits[0], op.qubits[1])) {
      throw Error(ErrorCode::RoutingRequired, "no coupling between physical qubits " +
                                                  std::to_string(op.qubits[0]) + " and " +
                                                  std::to_string(op.qubits[1]));
    }
  }
  out.physical.assign(mapping.begin(), mapping.end());
  return out;
}

SimResult simulate(const Circuit& circuit, const CalibrationSnapshot& snapshot,
                   const PulseAssignment& pulse, NoiseScale ns, const NoiseConfig& config) {
  return run_branches(circuit, &snapshot, pulse, ns, config);
}

SimResult simulate_ideal(const Circuit& circuit) {
  return run_branches(circuit, nullptr, PulseAssignment{}, NoiseScale(0.0), NoiseConfig{});
}

TeleportOutcome teleport_fidelity(const SimResult& result, const StatePrep& prep) {
  return {fidelity(result.output_state, prep), result.accept_prob};
}

std::string to_text(const Circuit& circuit) {
  std::ostringstream out;
  out << "# layerfid circuit v1\n";
  out << ".qubits " << circuit.n_qubits << "\n";
  out << ".cbits " << circuit.n_cbits << "\n";
  out << ".mode " << to_string(circuit.mode) << "\n";
  out << ".roles alice=" << join(circuit.roles.alice, ',') << " mediator="
      << join(circuit.roles.mediator, ',') << " bob=" << join(circuit.roles.bob, ',') << "\n";
  out << ".bell " << circuit.bell_measure_index << "\n";
  if (circuit.is_native()) out << ".physical " << join(circuit.physical, ' ') << "\n";
  for (const auto& chk : circuit.checks) {
    out << ".check c=" << join(chk.cbits, ',') << " accept=";
    for (std::size_t i = 0; i < chk.accepted.size(); ++i) {
      if (i) out << ',';
      for (std::size_t b = chk.cbits.size(); b-- > 0;) out << ((chk.accepted[i] >> b) & 1U);
    }
    out << "\n";
  }
  for (const auto& op : circuit.ops) {
    out << to_string(op.kind);
    for (int q : op.qubits) out << ' ' << q;
    if (op.kind == OpKind::RZ) out << ' ' << format_double(op.angle);
    if (!op.cbits.empty()) out << " c=" << join(op.cbits, ',');
    if (op.shape) out << " shape=" << to_string(*op.shape);
    out << "\n";
  }
  return out.str();
}

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& why) {
  throw Error(ErrorCode::InvalidArgument, "circuit text line " + std::to_string(line) + ": " + why);
}

int parse_int(const std::string& tok, std::size_t line) {
  int v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) parse_fail(line, "bad integer '" + tok + "'");
  return v;
}

std::vector<int> parse_int_list(const std::string& text, std::size_t line) {
  std::vector<int> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_int(item, line));
  return out;
}

OpKind parse_kind(const std::string& tok, std::size_t line) {
  for (auto k : {OpKind::RZ, OpKind::SX, OpKind::X, OpKind::H, OpKind::CX, OpKind::CZ, OpKind::Measure,
                 OpKind::CondX, OpKind::CondZ}) {
    if (tok == to_string(k)) return k;
  }
  parse_fail(line, "unknown op '" + tok + "'");
}

} // namespace

Circuit parse_circuit(std::string_view text) {
  Circuit c;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    if (tok[0][0] == '.') {
      const std::string& key = tok[0];
      if (key == ".qubits" && tok.size() == 2) {
        c.n_qubits = parse_int(tok[1], line_no);
      } else if (key == ".cbits" && tok.size() == 2) {
        c.n_cbits = parse_int(tok[1], line_no);
      } else if (key == ".mode" && tok.size() == 2) {
        c.mode = parse_mode(tok[1]);
      } else if (key == ".bell" && tok.size() == 2) {
        c.bell_measure_index = static_cast<std::size_t>(parse_int(tok[1], line_no));
      } else if (key == ".physical") {
        for (std::size_t i = 1; i < tok.size(); ++i) c.physical.push_back(parse_int(tok[i], line_no));
      } else if (key == ".roles") {
        for (std::size_t i = 1; i < tok.size(); ++i) {
          const auto eq = tok[i].find('=');
          if (eq == std::string::npos) parse_fail(line_no, "bad role '" + tok[i] + "'");
          const std::string role = tok[i].substr(0, eq);
          auto list = parse_int_list(tok[i].substr(eq + 1), line_no);
          if (role == "alice") c.roles.alice = std::move(list);
          else if (role == "mediator") c.roles.mediator = std::move(list);
          else if (role == "bob") c.roles.bob = std::move(list);
          else parse_fail(line_no, "unknown role '" + role + "'");
        }
      } else if (key == ".check" && tok.size() == 3 && tok[1].starts_with("c=") && tok[2].starts_with("accept=")) {
        SyndromeCheck chk;
        chk.cbits = parse_int_list(tok[1].substr(2), line_no);
        std::stringstream ss(tok[2].substr(7));
        for (std::string pattern; std::getline(ss, pattern, ',');) {
          if (pattern.size() != chk.cbits.size()) parse_fail(line_no, "accept pattern width mismatch");
          unsigned v = 0;
          for (char ch : pattern) {
            if (ch != '0' && ch != '1') parse_fail(line_no, "accept pattern must be binary");
            v = (v << 1) | static_cast<unsigned>(ch - '0');
          }
          chk.accepted.push_back(v);
        }
        c.checks.push_back(std::move(chk));
      } else {
        parse_fail(line_no, "bad directive '" + key + "'");
      }
      continue;
    }

    GateOp op;
    op.kind = parse_kind(tok[0], line_no);
    std::size_t i = 1;
    for (std::size_t k = 0; k < arity(op.kind); ++k, ++i) {
      if (i >= tok.size()) parse_fail(line_no, "missing qubit");
      op.qubits.push_back(parse_int(tok[i], line_no));
    }
    if (op.kind == OpKind::RZ) {
      if (i >= tok.size()) parse_fail(line_no, "RZ needs an angle");
      const auto& t = tok[i++];
      const auto res = std::from_chars(t.data(), t.data() + t.size(), op.angle);
      if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) parse_fail(line_no, "bad angle '" + t + "'");
    }
    for (; i < tok.size(); ++i) {
      if (tok[i].starts_with("c=")) op.cbits = parse_int_list(tok[i].substr(2), line_no);
      else if (tok[i].starts_with("shape=")) op.shape = parse_pulse_shape(tok[i].substr(6));
      else parse_fail(line_no, "unexpected token '" + tok[i] + "'");
    }
    c.ops.push_back(std::move(op));
  }
  c.validate();
  return c;
}

} // namespace lfd

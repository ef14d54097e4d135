// Copyright 2026 The FFQRAM Authors
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
 * @file
 * Line-oriented circuit text format and its JSON mirror.
 *
 *     QUBITS 4 ANCILLA 3
 *     CXLAYER 01 q=0,1
 *     CNRY c=0,1 t=2 1.5
 *     TOFFOLI 0 1 3
 *
 * Blank lines and lines starting with '#' are ignored. Reals are written
 * with 17 significant digits so that parsing restores them bit-exactly.
 */

#pragma once

#include <charconv>
#include <optional>
#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "ffqram/circuit.hpp"
#include "ffqram/error.hpp"

namespace ffqram {

inline std::string format_real(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  if (ec != std::errc()) throw Error("cannot format real");
  return std::string(buf, end);
}

namespace detail {

inline std::string join(const std::vector<int>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(xs[i]);
  }
  return out;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

class LineParser {
 public:
  LineParser(std::size_t line_no, std::vector<std::string_view> tokens)
      : line_(line_no), tokens_(std::move(tokens)) {}

  void expect_count(std::size_t n) const {
    if (tokens_.size() != n)
      fail(std::string(tokens_[0]) + " expects " + std::to_string(n - 1) +
           " operands, got " + std::to_string(tokens_.size() - 1));
  }

  int integer(std::size_t k) const { return parse_int(tokens_.at(k)); }

  double real(std::size_t k) const {
    const auto tok = tokens_.at(k);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      fail("invalid real '" + std::string(tok) + "'");
    return v;
  }

  std::string_view raw(std::size_t k) const { return tokens_.at(k); }

  /// Parses "key=i0,i1,...". An empty list is allowed.
  std::vector<int> list(std::size_t k, std::string_view key) const {
    const auto tok = tokens_.at(k);
    if (tok.substr(0, key.size() + 1) != std::string(key) + "=")
      fail("expected '" + std::string(key) + "=' in '" + std::string(tok) + "'");
    return split_ints(tok.substr(key.size() + 1));
  }

  int keyed(std::size_t k, std::string_view key) const {
    const auto xs = list(k, key);
    if (xs.size() != 1) fail("'" + std::string(key) + "=' takes exactly one qubit");
    return xs[0];
  }

  std::vector<int> split_ints(std::string_view s) const {
    std::vector<int> out;
    if (s.empty()) return out;
    std::size_t start = 0;
    while (true) {
      const auto comma = s.find(',', start);
      out.push_back(parse_int(s.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& why) const { throw ParseError(line_, why); }

 private:
  int parse_int(std::string_view tok) const {
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || v < 0)
      fail("invalid qubit index '" + std::string(tok) + "'");
    return v;
  }

  std::size_t line_;
  std::vector<std::string_view> tokens_;
};

}  // namespace detail

inline std::string serialize_gate(const Gate& g) {
  using detail::join;
  const std::string name(gate_name(g));
  return std::visit(
      Overloaded{
          [&](const ir::ClassicalXLayer& x) {
            return name + " " + x.bits + " q=" + join(x.qubits);
          },
          [&](const ir::H& x) { return name + " " + std::to_string(x.qubit); },
          [&](const ir::X& x) { return name + " " + std::to_string(x.qubit); },
          [&](const ir::RotY& x) {
            return name + " " + std::to_string(x.qubit) + " " + format_real(x.theta);
          },
          [&](const ir::Phase& x) {
            return name + " " + std::to_string(x.qubit) + " " + format_real(x.phi);
          },
          [&](const ir::CnRotY& x) {
            return name + " c=" + join(x.controls) + " t=" + std::to_string(x.target) +
                   " " + format_real(x.theta);
          },
          [&](const ir::CnRotArbitrary& x) {
            return name + " c=" + join(x.controls) + " t=" + std::to_string(x.target) +
                   " " + format_real(x.theta) + " " + format_real(x.phi);
          },
          [&](const ir::CnNot& x) {
            return name + " c=" + join(x.controls) + " t=" + std::to_string(x.target);
          },
          [&](const ir::Toffoli& x) {
            return name + " " + std::to_string(x.c1) + " " + std::to_string(x.c2) +
                   " " + std::to_string(x.target);
          },
          [&](const ir::Swap& x) {
            return name + " " + std::to_string(x.a) + " " + std::to_string(x.b);
          },
          [&](const ir::CSwap& x) {
            return name + " " + std::to_string(x.control) + " " + std::to_string(x.a) +
                   " " + std::to_string(x.b);
          },
          [&](const ir::SubspaceH3& x) {
            return name + " " + std::to_string(x.a) + " " + std::to_string(x.b);
          },
      },
      g);
}

inline std::string serialize(const Circuit& c) {
  std::string out = "QUBITS " + std::to_string(c.num_qubits()) + " ANCILLA";
  if (!c.ancilla_qubits().empty()) out += " " + detail::join(c.ancilla_qubits());
  out += '\n';
  for (const auto& g : c.gates()) {
    out += serialize_gate(g);
    out += '\n';
  }
  return out;
}

namespace detail {

inline Gate parse_gate_tokens(const LineParser& p, std::string_view op) {
  if (op == "CXLAYER") {
    p.expect_count(3);
    return ir::ClassicalXLayer{std::string(p.raw(1)), p.list(2, "q")};
  }
  if (op == "H") {
    p.expect_count(2);
    return ir::H{p.integer(1)};
  }
  if (op == "X") {
    p.expect_count(2);
    return ir::X{p.integer(1)};
  }
  if (op == "RY") {
    p.expect_count(3);
    return ir::RotY{p.integer(1), p.real(2)};
  }
  if (op == "PHASE") {
    p.expect_count(3);
    return ir::Phase{p.integer(1), p.real(2)};
  }
  if (op == "CNRY") {
    p.expect_count(4);
    return ir::CnRotY{p.list(1, "c"), p.keyed(2, "t"), p.real(3)};
  }
  if (op == "CNR") {
    p.expect_count(5);
    return ir::CnRotArbitrary{p.list(1, "c"), p.keyed(2, "t"), p.real(3), p.real(4)};
  }
  if (op == "CNNOT") {
    p.expect_count(3);
    return ir::CnNot{p.list(1, "c"), p.keyed(2, "t")};
  }
  if (op == "TOFFOLI") {
    p.expect_count(4);
    return ir::Toffoli{p.integer(1), p.integer(2), p.integer(3)};
  }
  if (op == "SWAP") {
    p.expect_count(3);
    return ir::Swap{p.integer(1), p.integer(2)};
  }
  if (op == "CSWAP") {
    p.expect_count(4);
    return ir::CSwap{p.integer(1), p.integer(2), p.integer(3)};
  }
  if (op == "H3") {
    p.expect_count(3);
    return ir::SubspaceH3{p.integer(1), p.integer(2)};
  }
  p.fail("unknown gate '" + std::string(op) + "'");
}

inline Circuit parse_json(std::string_view text);

}  // namespace detail

/// Parses the text format, or the JSON form when the input starts with '{'.
inline Circuit parse(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{')
    return detail::parse_json(text);

  std::optional<Circuit> circuit;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    auto tokens = detail::split_ws(line);
    if (tokens.empty() || tokens[0].front() == '#') continue;
    detail::LineParser p(line_no, tokens);
    if (!circuit) {
      if (tokens[0] != "QUBITS" || tokens.size() < 3 || tokens[2] != "ANCILLA" ||
          tokens.size() > 4)
        p.fail("expected header 'QUBITS <q> ANCILLA <list>'");
      const int q = p.integer(1);
      std::vector<int> anc;
      if (tokens.size() == 4) anc = p.split_ints(tokens[3]);
      try {
        circuit.emplace(q, std::move(anc));
      } catch (const Error& e) {
        p.fail(e.what());
      }
      continue;
    }
    Gate g = detail::parse_gate_tokens(p, tokens[0]);
    try {
      circuit->add(std::move(g));
    } catch (const Error& e) {
      p.fail(e.what());
    }
  }
  if (!circuit) throw ParseError(line_no, "missing QUBITS header");
  return *circuit;
}

inline nlohmann::json to_json(const Circuit& c) {
  nlohmann::json gates = nlohmann::json::array();
  for (const auto& g : c.gates()) {
    nlohmann::json j;
    j["op"] = std::string(gate_name(g));
    std::visit(Overloaded{
                   [&](const ir::ClassicalXLayer& x) {
                     j["bits"] = x.bits;
                     j["q"] = x.qubits;
                   },
                   [&](const ir::H& x) { j["q"] = {x.qubit}; },
                   [&](const ir::X& x) { j["q"] = {x.qubit}; },
                   [&](const ir::RotY& x) {
                     j["q"] = {x.qubit};
                     j["theta"] = x.theta;
                   },
                   [&](const ir::Phase& x) {
                     j["q"] = {x.qubit};
                     j["phi"] = x.phi;
                   },
                   [&](const ir::CnRotY& x) {
                     j["c"] = x.controls;
                     j["t"] = x.target;
                     j["theta"] = x.theta;
                   },
                   [&](const ir::CnRotArbitrary& x) {
                     j["c"] = x.controls;
                     j["t"] = x.target;
                     j["theta"] = x.theta;
                     j["phi"] = x.phi;
                   },
                   [&](const ir::CnNot& x) {
                     j["c"] = x.controls;
                     j["t"] = x.target;
                   },
                   [&](const ir::Toffoli& x) { j["q"] = {x.c1, x.c2, x.target}; },
                   [&](const ir::Swap& x) { j["q"] = {x.a, x.b}; },
                   [&](const ir::CSwap& x) { j["q"] = {x.control, x.a, x.b}; },
                   [&](const ir::SubspaceH3& x) { j["q"] = {x.a, x.b}; },
               },
               g);
    gates.push_back(std::move(j));
  }
  return {{"qubits", c.num_qubits()}, {"ancilla", c.ancilla_qubits()}, {"gates", gates}};
}

namespace detail {

[[noreturn]] inline void json_gate_fail(std::size_t k, const std::string& why) {
  throw ParseError(k + 1, "gate " + std::to_string(k) + ": " + why);
}

inline Gate gate_from_json(const nlohmann::json& j, std::size_t k) {
  auto fail = [k](const std::string& why) { json_gate_fail(k, why); };
  if (!j.is_object() || !j.contains("op")) fail("missing 'op'");
  const auto op = j.at("op").get<std::string>();
  auto qs = [&](std::size_t n) {
    auto v = j.at("q").get<std::vector<int>>();
    if (v.size() != n) fail(op + " expects " + std::to_string(n) + " qubits");
    return v;
  };
  if (op == "CXLAYER") return ir::ClassicalXLayer{j.at("bits").get<std::string>(), j.at("q").get<std::vector<int>>()};
  if (op == "H") return ir::H{qs(1)[0]};
  if (op == "X") return ir::X{qs(1)[0]};
  if (op == "RY") return ir::RotY{qs(1)[0], j.at("theta").get<double>()};
  if (op == "PHASE") return ir::Phase{qs(1)[0], j.at("phi").get<double>()};
  if (op == "CNRY")
    return ir::CnRotY{j.at("c").get<std::vector<int>>(), j.at("t").get<int>(), j.at("theta").get<double>()};
  if (op == "CNR")
    return ir::CnRotArbitrary{j.at("c").get<std::vector<int>>(), j.at("t").get<int>(),
                              j.at("theta").get<double>(), j.at("phi").get<double>()};
  if (op == "CNNOT") return ir::CnNot{j.at("c").get<std::vector<int>>(), j.at("t").get<int>()};
  if (op == "TOFFOLI") {
    const auto q = qs(3);
    return ir::Toffoli{q[0], q[1], q[2]};
  }
  if (op == "SWAP") {
    const auto q = qs(2);
    return ir::Swap{q[0], q[1]};
  }
  if (op == "CSWAP") {
    const auto q = qs(3);
    return ir::CSwap{q[0], q[1], q[2]};
  }
  if (op == "H3") {
    const auto q = qs(2);
    return ir::SubspaceH3{q[0], q[1]};
  }
  json_gate_fail(k, "unknown gate '" + op + "'");
}

inline Circuit parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(1, std::string("invalid JSON: ") + e.what());
  }
  try {
    Circuit c(doc.at("qubits").get<int>(),
              doc.value("ancilla", std::vector<int>{}));
    const auto& gates = doc.at("gates");
    for (std::size_t k = 0; k < gates.size(); ++k) {
      Gate g = gate_from_json(gates[k], k);
      try {
        c.add(std::move(g));
      } catch (const Error& e) {
        throw ParseError(k + 1, "gate " + std::to_string(k) + ": " + e.what());
      }
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(1, std::string("malformed circuit JSON: ") + e.what());
  }
}

}  // namespace detail

inline std::string serialize_json(const Circuit& c) { return to_json(c).dump(); }

}  // namespace ffqram

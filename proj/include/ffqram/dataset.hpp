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
 * Classical datasets, bus specifications and their CSV ingestion.
 */

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <variant>
#include <vector>

#include "ffqram/decompose.hpp"
#include "ffqram/error.hpp"
#include "ffqram/statevector.hpp"

namespace ffqram {

enum class EncodingMode { kAmplitude, kAngle, kBinary };

inline std::string_view to_string(EncodingMode m) {
  switch (m) {
    case EncodingMode::kAmplitude: return "amplitude";
    case EncodingMode::kAngle: return "angle";
    case EncodingMode::kBinary: return "binary";
  }
  return "?";
}

inline EncodingMode parse_mode(std::string_view s) {
  if (s == "amplitude") return EncodingMode::kAmplitude;
  if (s == "angle") return EncodingMode::kAngle;
  if (s == "binary") return EncodingMode::kBinary;
  throw ValidationError("unknown encoding mode '" + std::string(s) + "'");
}

struct Angle {
  double radians;
  bool operator==(const Angle&) const = default;
};

struct Amplitude {
  Complex value;
  bool operator==(const Amplitude&) const = default;
};

struct Bit {
  int value;
  bool operator==(const Bit&) const = default;
};

using RecordValue = std::variant<Angle, Amplitude, Bit>;

struct DataRecord {
  std::string bits;
  RecordValue value;
  std::optional<unsigned> label;
};

struct Dataset {
  EncodingMode mode = EncodingMode::kAngle;
  std::vector<DataRecord> records;

  std::size_t size() const noexcept { return records.size(); }
  bool has_labels() const {
    return std::any_of(records.begin(), records.end(),
                       [](const DataRecord& r) { return r.label.has_value(); });
  }

  static Dataset angles(std::vector<std::pair<std::string, double>> entries) {
    Dataset ds{EncodingMode::kAngle, {}};
    for (auto& [bits, theta] : entries) ds.records.push_back({std::move(bits), Angle{theta}, {}});
    return ds;
  }

  static Dataset amplitudes(std::vector<std::pair<std::string, Complex>> entries) {
    Dataset ds{EncodingMode::kAmplitude, {}};
    for (auto& [bits, b] : entries) ds.records.push_back({std::move(bits), Amplitude{b}, {}});
    return ds;
  }

  static Dataset binary(std::vector<std::pair<std::string, int>> entries) {
    Dataset ds{EncodingMode::kBinary, {}};
    for (auto& [bits, b] : entries) ds.records.push_back({std::move(bits), Bit{b}, {}});
    return ds;
  }
};

/// Label bits appended to every address: ceil(log2) of the label range.
inline int label_width(const Dataset& ds) {
  if (!ds.has_labels()) return 0;
  unsigned top = 0;
  for (const auto& r : ds.records) top = std::max(top, *r.label);
  return ceil_log2(static_cast<long long>(std::max<std::size_t>(ds.size(), top + 1u)));
}

/// Checks width, alphabet, value kinds and label uniqueness.
inline void validate(const Dataset& ds) {
  if (ds.records.empty()) throw ValidationError("dataset has no records");
  const std::size_t n = ds.records.front().bits.size();
  const bool labelled = ds.records.front().label.has_value();
  std::set<unsigned> labels;
  for (std::size_t l = 0; l < ds.records.size(); ++l) {
    const auto& r = ds.records[l];
    const std::string where = "record " + std::to_string(l);
    if (r.bits.size() != n)
      throw ValidationError(where + ": bitstring length " + std::to_string(r.bits.size()) +
                            " differs from " + std::to_string(n));
    if (r.bits.find_first_not_of("01") != std::string::npos)
      throw ValidationError(where + ": bitstring '" + r.bits + "' is not binary");
    const bool ok = std::visit(
        Overloaded{
            [&](const Angle& a) { return ds.mode == EncodingMode::kAngle && std::isfinite(a.radians); },
            [&](const Amplitude& a) {
              return ds.mode == EncodingMode::kAmplitude && std::isfinite(a.value.real()) &&
                     std::isfinite(a.value.imag());
            },
            [&](const Bit& b) { return ds.mode == EncodingMode::kBinary && (b.value == 0 || b.value == 1); },
        },
        r.value);
    if (!ok) throw ValidationError(where + ": value does not match " + std::string(to_string(ds.mode)) + " mode");
    if (r.label.has_value() != labelled)
      throw ValidationError(where + ": labels must be given for all records or none");
    if (r.label && !labels.insert(*r.label).second)
      throw ValidationError(where + ": duplicate label " + std::to_string(*r.label));
  }
}

/// Bitstring written for record l: bits, followed by the label in binary.
inline std::vector<std::string> addresses(const Dataset& ds) {
  const int m = label_width(ds);
  std::vector<std::string> out;
  out.reserve(ds.size());
  for (const auto& r : ds.records) {
    std::string a = r.bits;
    for (int k = m - 1; k >= 0; --k) a += ((*r.label >> k) & 1u) ? '1' : '0';
    out.push_back(std::move(a));
  }
  return out;
}

/// Bus width of the dataset (data bits plus label bits).
inline int address_width(const Dataset& ds) {
  if (ds.records.empty()) return 0;
  return static_cast<int>(ds.records.front().bits.size()) + label_width(ds);
}

inline bool has_duplicate_addresses(const Dataset& ds) {
  auto a = addresses(ds);
  std::sort(a.begin(), a.end());
  return std::adjacent_find(a.begin(), a.end()) != a.end();
}

inline double angle_of(const DataRecord& r) {
  if (const auto* a = std::get_if<Angle>(&r.value)) return a->radians;
  throw ValidationError("record '" + r.bits + "' does not carry an angle");
}

/// Where the bus amplitudes come from.
struct BusSpec {
  struct Uniform {};
  struct BasisList {
    std::vector<std::pair<std::string, Complex>> entries;
  };
  struct Explicit {
    StateVector state;
  };
  std::variant<Uniform, BasisList, Explicit> kind = Uniform{};

  static BusSpec uniform() { return {Uniform{}}; }
  static BusSpec basis_list(std::vector<std::pair<std::string, Complex>> e) { return {BasisList{std::move(e)}}; }
  static BusSpec explicit_state(StateVector s) { return {Explicit{std::move(s)}}; }
};

/// Normalized bus state on `n` qubits.
inline StateVector bus_state(const BusSpec& bus, int n) {
  return std::visit(
      Overloaded{
          [&](const BusSpec::Uniform&) {
            const Index dim = Index{1} << n;
            return StateVector(n, std::vector<Complex>(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)))));
          },
          [&](const BusSpec::BasisList& b) {
            StateVector s(n);
            s[0] = 0.0;
            for (const auto& [bits, amp] : b.entries) s[s.index_of(bits)] += amp;
            if (s.norm_squared() == 0.0) throw ValidationError("bus basis list has zero norm");
            s.normalize();
            return s;
          },
          [&](const BusSpec::Explicit& e) {
            if (e.state.num_qubits() != n)
              throw ValidationError("bus state has " + std::to_string(e.state.num_qubits()) +
                                    " qubits, dataset addresses " + std::to_string(n));
            if (std::abs(e.state.norm_squared() - 1.0) > 1e-10)
              throw ValidationError("explicit bus state is not normalized");
            return e.state;
          },
      },
      bus.kind);
}

// ---------------------------------------------------------------------------
// CSV ingestion

/// Parses "a", "a+bi", "a-bi", "bi", "i", "-i". Whitespace is ignored.
inline std::optional<Complex> parse_complex(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (ch != ' ' && ch != '\t') s += ch;
  if (s.empty()) return std::nullopt;
  auto real_of = [](std::string_view t) -> std::optional<double> {
    if (!t.empty() && t.front() == '+') t.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
    return v;
  };
  if (s.back() != 'i' && s.back() != 'j') {
    auto r = real_of(s);
    if (!r) return std::nullopt;
    return Complex(*r, 0.0);
  }
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string re_part = split == std::string::npos ? "" : s.substr(0, split);
  std::string im_part = split == std::string::npos ? s : s.substr(split);
  if (im_part.empty() || im_part == "+") im_part = "1";
  if (im_part == "-") im_part = "-1";
  auto im = real_of(im_part);
  if (!im) return std::nullopt;
  double re = 0.0;
  if (!re_part.empty()) {
    auto r = real_of(re_part);
    if (!r) return std::nullopt;
    re = *r;
  }
  return Complex(re, *im);
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_csv_row(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

/// Calls fn(row_number, fields) for each non-blank, non-comment line.
template <class Fn>
void for_each_csv_row(std::string_view text, Fn&& fn) {
  std::size_t row = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++row;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    fn(row, split_csv_row(t));
  }
}

}  // namespace detail

/// Parses `bits,value[,label]` rows. A leading header row whose first field
/// is not a bitstring is skipped. Errors name the offending row.
inline Dataset parse_dataset_csv(std::string_view text, EncodingMode mode) {
  Dataset ds{mode, {}};
  bool first = true;
  detail::for_each_csv_row(text, [&](std::size_t row, const std::vector<std::string>& f) {
    const bool header = first && !f.empty() && (f[0].empty() || f[0].find_first_not_of("01") != std::string::npos);
    first = false;
    if (header) return;
    const std::string where = "row " + std::to_string(row);
    if (f.size() < 2 || f.size() > 3)
      throw ValidationError(where + ": expected 'bits,value[,label]', got " + std::to_string(f.size()) + " fields");
    if (f[0].empty() || f[0].find_first_not_of("01") != std::string::npos)
      throw ValidationError(where + ": '" + f[0] + "' is not a bitstring");
    DataRecord r{f[0], Angle{0.0}, {}};
    const auto v = parse_complex(f[1]);
    if (!v) throw ValidationError(where + ": cannot parse value '" + f[1] + "'");
    switch (mode) {
      case EncodingMode::kAngle:
        if (v->imag() != 0.0) throw ValidationError(where + ": angle must be real");
        r.value = Angle{v->real()};
        break;
      case EncodingMode::kAmplitude:
        r.value = Amplitude{*v};
        break;
      case EncodingMode::kBinary:
        if (f[1] != "0" && f[1] != "1") throw ValidationError(where + ": binary value must be 0 or 1");
        r.value = Bit{f[1] == "1" ? 1 : 0};
        break;
    }
    if (f.size() == 3) {
      unsigned label = 0;
      auto [ptr, ec] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), label);
      if (ec != std::errc() || ptr != f[2].data() + f[2].size())
        throw ValidationError(where + ": invalid label '" + f[2] + "'");
      r.label = label;
    }
    if (!ds.records.empty() && ds.records.front().bits.size() != r.bits.size())
      throw ValidationError(where + ": bitstring length " + std::to_string(r.bits.size()) + " differs from " +
                            std::to_string(ds.records.front().bits.size()));
    ds.records.push_back(std::move(r));
  });
  if (ds.records.empty()) throw ValidationError("dataset has no rows");
  validate(ds);
  return ds;
}

/// Parses `bits,amplitude` rows into a basis-list bus.
inline BusSpec parse_bus_csv(std::string_view text) {
  BusSpec::BasisList list;
  bool first = true;
  detail::for_each_csv_row(text, [&](std::size_t row, const std::vector<std::string>& f) {
    const bool header = first && !f.empty() && f[0].find_first_not_of("01") != std::string::npos;
    first = false;
    if (header) return;
    if (f.size() != 2) throw ValidationError("bus row " + std::to_string(row) + ": expected 'bits,amplitude'");
    const auto v = parse_complex(f[1]);
    if (!v) throw ValidationError("bus row " + std::to_string(row) + ": cannot parse amplitude '" + f[1] + "'");
    list.entries.emplace_back(f[0], *v);
  });
  return {std::move(list)};
}

}  // namespace ffqram

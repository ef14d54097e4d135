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
 * Command implementations for the `ffqram` tool. Kept in a header so the
 * test suite can drive the commands in-process.
 *
 * Exit codes: 0 success, 2 input error, 3 runtime-impossible operation
 * (e.g. post-selection on a zero-probability outcome).
 */

#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "ffqram/ffqram.hpp"

namespace ffqram::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitImpossible = 3;

/// Error carrying the exit code it maps to.
class CommandError : public Error {
 public:
  CommandError(int code, const std::string& message) : Error(message), code_(code) {}
  int code() const noexcept { return code_; }

 private:
  int code_;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CommandError(kExitInput, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CommandError(kExitInput, "cannot write '" + path + "'");
  out << content;
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

/// Writes the report to `path`, or to `out` when no path is given.
inline void emit_report(nlohmann::json report, bool timestamp, const std::string& path, std::ostream& out) {
  if (timestamp) report["timestamp"] = utc_timestamp();
  const std::string text = report.dump(2) + "\n";
  if (path.empty())
    out << text;
  else
    write_file(path, text);
}

/// Simulates `c` on bus (x) |0> register (x) |0> ancillae.
inline StateVector run_on_bus(const Circuit& c, const StateVector& bus) {
  const int rest = c.num_qubits() - bus.num_qubits();
  return simulate(c, bus.tensor(StateVector(rest)));
}

inline StateVector discard_ancillae(const StateVector& s, int first_ancilla) {
  StateVector cur = s;
  for (int q = s.num_qubits() - 1; q >= first_ancilla; --q) cur = post_select(cur, q, 0).state;
  return cur;
}

inline bool has_complex_amplitude(const Dataset& ds) {
  for (const auto& r : ds.records)
    if (std::get<Amplitude>(r.value).value.imag() != 0.0) return true;
  return false;
}

inline void add_circuit_stats(nlohmann::json& report, const Circuit& c) {
  int total = 0;
  for (const auto& [kind, count] : c.gate_counts()) {
    report["gates_" + kind] = count;
    total += count;
  }
  report["gates_total"] = total;
  report["depth"] = schedule(c).depth();
  report["ancilla_qubits"] = c.ancilla_qubits().size();
  report["total_qubits"] = c.num_qubits();
}

}  // namespace detail

struct EncodeArgs {
  std::string data;
  std::string mode = "angle";
  std::string bus = "uniform";
  std::string decompose = "none";
  bool simulate = false;
  std::string out;
  std::string report;
  std::optional<std::uint64_t> seed;
  bool no_timestamp = false;
};

inline int cmd_encode(const EncodeArgs& a, std::ostream& out, std::ostream& err) {
  const EncodingMode mode = parse_mode(a.mode);
  Dataset ds;
  try {
    ds = parse_dataset_csv(detail::read_file(a.data), mode);
  } catch (const ValidationError& e) {
    throw CommandError(kExitInput, a.data + ": " + e.what());
  }
  if (has_duplicate_addresses(ds))
    err << "warning: duplicate bitstrings in " << a.data << "; their rotations accumulate\n";

  const int n = address_width(ds);
  const BusSpec bus = a.bus == "uniform" ? BusSpec::uniform() : parse_bus_csv(detail::read_file(a.bus));
  const StateVector bus_vec = bus_state(bus, n);
  for (std::size_t l : unwritable_records(bus, ds))
    err << "warning: record " << l << " has zero bus amplitude and cannot be written\n";

  SynthesisOptions opts;
  opts.decompose = a.decompose == "toffoli" ? DecomposeMode::kToffoli : DecomposeMode::kNone;
  if (a.decompose != "none" && a.decompose != "toffoli")
    throw CommandError(kExitInput, "--decompose must be none or toffoli");

  std::optional<Dataset> angle_ds;
  Circuit circuit;
  if (mode == EncodingMode::kAmplitude && detail::has_complex_amplitude(ds)) {
    circuit = synthesize_complex(ds, opts);
    angle_ds = Dataset{EncodingMode::kAngle, {}};
    const auto angles = complex_angles(ds);
    for (std::size_t l = 0; l < ds.size(); ++l)
      angle_ds->records.push_back({ds.records[l].bits, Angle{angles[l].first}, ds.records[l].label});
  } else if (mode == EncodingMode::kAmplitude) {
    angle_ds = angles_from_amplitudes(ds, bus);
    circuit = synthesize(*angle_ds, opts);
  } else {
    if (mode == EncodingMode::kAngle) angle_ds = ds;
    circuit = synthesize(ds, opts);
  }

  const std::string text = serialize(circuit);
  if (!a.out.empty()) detail::write_file(a.out, text);
  if (!a.simulate && a.report.empty()) {
    if (a.out.empty()) out << text;
    return kExitOk;
  }

  nlohmann::json report;
  report["mode"] = std::string(to_string(mode));
  report["records"] = ds.size();
  report["bus_qubits"] = n;
  report["register_qubits"] = 1;
  detail::add_circuit_stats(report, circuit);
  report["seed"] = detail::resolve_seed(a.seed);
  if (angle_ds && n >= 2) report["tau"] = count_tau(n, static_cast<long long>(ds.size()), NoiseModel::kFull);
  if (angle_ds && n == 1) report["tau"] = count_tau_single_bit(static_cast<long long>(ds.size()));
  if (angle_ds && n >= 1) report["tau_mild"] = count_tau(n, static_cast<long long>(ds.size()), NoiseModel::kMild);
  if (angle_ds && opts.decompose == DecomposeMode::kToffoli && opts.merge_flips &&
      !(mode == EncodingMode::kAmplitude && detail::has_complex_amplitude(ds)))
    report["tau_circuit"] = count_locations_in_circuit(circuit);

  if (a.simulate) {
    const StateVector final_state = detail::run_on_bus(circuit, bus_vec);
    const StateVector data_state = detail::discard_ancillae(final_state, n + 1);
    const double p1 = probability_of(data_state, n, 1);
    report["p1_simulated"] = p1;
    if (mode == EncodingMode::kBinary) {
      StateVector oracle = bus_vec.tensor(StateVector(1));
      std::map<std::string, int> stored;
      const auto addr = addresses(ds);
      for (std::size_t l = 0; l < ds.size(); ++l) stored[addr[l]] ^= std::get<Bit>(ds.records[l].value).value;
      double p1_analytic = 0.0;
      for (const auto& [address, bit] : stored) {
        if (!bit) continue;
        const Index j = bus_vec.index_of(address);
        oracle[2 * j + 1] = bus_vec[j];
        oracle[2 * j] = 0.0;
        p1_analytic += std::norm(bus_vec[j]);
      }
      report["p1_analytic"] = p1_analytic;
      report["fidelity"] = fidelity(oracle, data_state);
      report["norm"] = data_state.norm_squared();
    } else {
      report["p1_analytic"] = postselection_probability(bus, *angle_ds);
      if (p1 <= 1e-12) throw CommandError(kExitImpossible, "post-selection of the register on |1> is impossible");
      const auto sel = post_select(data_state, n, 1);
      StateVector oracle(n);
      oracle[0] = 0.0;
      const auto addr = addresses(ds);
      for (std::size_t l = 0; l < ds.size(); ++l) {
        const Index j = oracle.index_of(addr[l]);
        if (mode == EncodingMode::kAmplitude)
          oracle[j] += bus_vec[j] * std::get<Amplitude>(ds.records[l].value).value;
      }
      if (mode == EncodingMode::kAngle) oracle = target_qdb(bus, ds);
      else oracle.normalize();
      report["fidelity"] = fidelity(oracle, sel.state);
    }
  }
  detail::emit_report(std::move(report), !a.no_timestamp, a.report, out);
  return kExitOk;
}

struct NoiseArgs {
  std::vector<long long> m_list;
  std::vector<double> ps_list;
  std::string model = "full";
  std::string n_rule = "log2M";
  std::string out;
};

inline int cmd_noise(const NoiseArgs& a, std::ostream& out) {
  NRule rule = NRule::log2m();
  if (a.n_rule.rfind("fixed:", 0) == 0) {
    try {
      rule = NRule::fixed(std::stoi(a.n_rule.substr(6)));
    } catch (const std::exception&) {
      throw CommandError(kExitInput, "invalid --n-rule '" + a.n_rule + "'");
    }
  } else if (a.n_rule != "log2M") {
    throw CommandError(kExitInput, "--n-rule must be log2M or fixed:<n>");
  }
  std::vector<NoiseModel> models;
  if (a.model == "both")
    models = {NoiseModel::kFull, NoiseModel::kMild};
  else
    models = {parse_noise_model(a.model)};
  std::vector<CurveRow> rows;
  for (NoiseModel m : models) {
    auto part = curve(rule, a.m_list, a.ps_list, m);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  const std::string csv = curve_csv(rows);
  if (a.out.empty())
    out << csv;
  else
    detail::write_file(a.out, csv);
  return kExitOk;
}

struct ForkArgs {
  std::string phi;
  std::string u1 = "I";
  std::string u2 = "I";
  std::string u3;
  std::string part = "real";
  std::string ancilla = "zero";
  std::optional<long long> shots;
  std::optional<std::uint64_t> seed;
  std::string report;
  bool no_timestamp = false;
};

namespace detail {

/// `basis:<bits>`, `plus:<n>`, a dataset CSV (angle mode, uniform bus,
/// post-selected), or a circuit file applied to |0...0>.
inline StateVector load_phi(const std::string& spec) {
  if (spec.rfind("basis:", 0) == 0) return StateVector::basis(spec.substr(6));
  if (spec.rfind("plus:", 0) == 0) {
    const int n = std::stoi(spec.substr(5));
    StateVector s(n);
    for (int q = 0; q < n; ++q) s.apply_matrix(q, gates::h());
    return s;
  }
  const std::string text = read_file(spec);
  if (std::filesystem::path(spec).extension() == ".csv") {
    const Dataset ds = parse_dataset_csv(text, EncodingMode::kAngle);
    const int n = address_width(ds);
    return post_select(simulate_write(BusSpec::uniform(), ds), n, 1).state;
  }
  const Circuit c = parse(text);
  return simulate(c, StateVector(c.num_qubits()));
}

inline Circuit load_unitary(const std::string& spec, int n) {
  if (std::filesystem::exists(spec)) return parse(read_file(spec));
  return preset_unitary(spec, n);
}

inline StateVector random_state(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Complex> amps(std::size_t{1} << n);
  for (auto& x : amps) x = Complex(g(rng), g(rng));
  StateVector s(n, std::move(amps));
  s.normalize();
  return s;
}

}  // namespace detail

inline int cmd_fork(const ForkArgs& a, std::ostream& out) {
  QdbSource source([&] { return detail::load_phi(a.phi); });
  StateVector phi = source.prepare();
  const int n = phi.num_qubits();
  std::vector<Circuit> us{detail::load_unitary(a.u1, n), detail::load_unitary(a.u2, n)};
  if (!a.u3.empty()) us.push_back(detail::load_unitary(a.u3, n));
  for (std::size_t i = 0; i < us.size(); ++i)
    if (us[i].num_qubits() != n)
      throw CommandError(kExitInput, "unitary " + std::to_string(i + 1) + " acts on " +
                                         std::to_string(us[i].num_qubits()) + " qubits but phi has " +
                                         std::to_string(n));
  const std::uint64_t seed = detail::resolve_seed(a.seed);
  StateVector anc(n);
  if (a.ancilla == "random")
    anc = detail::random_state(n, seed ^ 0x5eedULL);
  else if (a.ancilla != "zero")
    throw CommandError(kExitInput, "--ancilla must be zero or random");
  const ForkSpec spec(phi, us, anc);

  std::vector<StateVector> branches;
  for (const auto& u : us) branches.push_back(simulate(u, phi));

  nlohmann::json report;
  report["part"] = a.part;
  report["qubits_per_block"] = n;
  report["branches"] = us.size();
  report["qdb_preparations"] = source.preparations();
  report["seed"] = seed;
  double p0 = 0.0;
  double scale = 2.0;
  double offset = -1.0;
  if (a.part == "real" || a.part == "imag") {
    if (us.size() != 2) throw CommandError(kExitInput, "--part " + a.part + " takes exactly two unitaries");
    const auto r = a.part == "real" ? swap_test_real(spec) : swap_test_imag(spec);
    const Complex ip = inner_product(branches[0], branches[1]);
    p0 = r.p0;
    report["p0"] = r.p0;
    report["estimate"] = r.estimate;
    report["oracle"] = a.part == "real" ? ip.real() : ip.imag();
  } else if (a.part == "sum") {
    const auto r = pairwise_sum(spec);
    double oracle = 0.0;
    for (const auto& x : branches)
      for (const auto& y : branches) oracle += inner_product(x, y).real();
    const double d = static_cast<double>(us.size());
    p0 = r.p0;
    scale = d * d;
    offset = 0.0;
    report["p0"] = r.p0;
    report["estimate"] = r.sum;
    report["oracle"] = oracle;
  } else {
    throw CommandError(kExitInput, "--part must be real, imag or sum");
  }
  if (a.shots) {
    const auto s = sample_control(p0, *a.shots, seed);
    report["shots"] = *a.shots;
    report["p0_sampled"] = s.estimate;
    report["p0_stderr"] = s.stderr_;
    report["estimate_sampled"] = scale * s.estimate + offset;
    report["estimate_stderr"] = scale * s.stderr_;
  }
  detail::emit_report(std::move(report), !a.no_timestamp, a.report, out);
  return kExitOk;
}

struct QsvmArgs {
  std::string train;
  bool simulate = false;
  std::string decompose = "none";
  std::string out;
  std::string report;
  bool no_timestamp = false;
};

inline int cmd_qsvm(const QsvmArgs& a, std::ostream& out) {
  std::optional<TrainingSet> t;
  try {
    t.emplace(parse_matrix_csv(detail::read_file(a.train)));
  } catch (const ValidationError& e) {
    throw CommandError(kExitInput, a.train + ": " + e.what());
  }
  const DecomposeMode dm = a.decompose == "toffoli" ? DecomposeMode::kToffoli : DecomposeMode::kNone;
  const Circuit c = synthesize_chi_circuit(*t, dm);
  if (!a.out.empty()) detail::write_file(a.out, serialize(c));
  nlohmann::json report;
  report["M"] = t->rows();
  report["N"] = t->cols();
  report["bus_qubits"] = t->bus_qubits();
  report["blocks"] = t->rows() * t->cols();
  report["skippable_blocks"] = skippable_blocks(*t).size();
  report["p_success_analytic"] = chi_success_probability(*t);
  detail::add_circuit_stats(report, c);
  if (a.simulate) {
    const auto chi = prepare_chi(*t);
    const StateVector oracle = chi_oracle(*t);
    report["p_success"] = chi.p_success;
    report["fidelity"] = fidelity(oracle, chi.state);
    report["overlap_real"] = inner_product(oracle, chi.state).real();
    for (Index i = 0; i < chi.state.size(); ++i)
      if (std::norm(chi.state[i]) > 1.0 - 1e-10) {
        std::string bits;
        for (int q = 0; q < chi.state.num_qubits(); ++q) bits += (i & chi.state.mask_of(q)) ? '1' : '0';
        report["basis_state"] = bits;
      }
  }
  detail::emit_report(std::move(report), !a.no_timestamp, a.report, out);
  return kExitOk;
}

/// Parses argv and dispatches. Errors go to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Flip-flop QRAM toolkit", "ffqram"};
  app.require_subcommand(1);

  EncodeArgs enc;
  auto* encode = app.add_subcommand("encode", "Compile a dataset into a flip-register-flop circuit");
  encode->add_option("--data", enc.data, "Dataset CSV (bits,value[,label])")->required();
  encode->add_option("--mode", enc.mode, "amplitude | angle | binary")
      ->check(CLI::IsMember({"amplitude", "angle", "binary"}));
  encode->add_option("--bus", enc.bus, "uniform, or a CSV of bits,amplitude");
  encode->add_option("--decompose", enc.decompose, "none | toffoli")->check(CLI::IsMember({"none", "toffoli"}));
  encode->add_flag("--simulate", enc.simulate, "Simulate and report P(1) and fidelity");
  encode->add_option("--out", enc.out, "Circuit output path");
  encode->add_option("--report", enc.report, "Report output path (default stdout)");
  encode->add_option("--seed", enc.seed, "Seed recorded in the report");
  encode->add_flag("--no-timestamp", enc.no_timestamp);

  NoiseArgs noi;
  auto* noise = app.add_subcommand("noise", "Per-step error rate needed for a target success probability");
  noise->add_option("--M", noi.m_list, "Record counts")->delimiter(',')->required();
  noise->add_option("--ps", noi.ps_list, "Target success probabilities")->delimiter(',')->required();
  noise->add_option("--model", noi.model, "full | mild | both")->check(CLI::IsMember({"full", "mild", "both"}));
  noise->add_option("--n-rule", noi.n_rule, "log2M | fixed:<n>");
  noise->add_option("--out", noi.out, "CSV output path (default stdout)");

  ForkArgs frk;
  auto* fork = app.add_subcommand("fork", "Quantum-forking swap tests");
  fork->add_option("--phi", frk.phi, "basis:<bits> | plus:<n> | dataset.csv | circuit file")->required();
  fork->add_option("--u1", frk.u1, "Preset or circuit file");
  fork->add_option("--u2", frk.u2, "Preset or circuit file");
  fork->add_option("--u3", frk.u3, "Preset or circuit file (three-branch sum)");
  fork->add_option("--part", frk.part, "real | imag | sum")->check(CLI::IsMember({"real", "imag", "sum"}));
  fork->add_option("--ancilla", frk.ancilla, "zero | random");
  fork->add_option("--shots", frk.shots, "Finite-shot sampling of the control");
  fork->add_option("--seed", frk.seed, "Sampling seed");
  fork->add_option("--report", frk.report, "Report output path (default stdout)");
  fork->add_flag("--no-timestamp", frk.no_timestamp);

  QsvmArgs qs;
  auto* qsvm = app.add_subcommand("qsvm", "Training-state loader for a quantum SVM");
  qsvm->add_option("--train", qs.train, "Training matrix CSV, one row per vector")->required();
  qsvm->add_flag("--simulate", qs.simulate);
  qsvm->add_option("--decompose", qs.decompose, "none | toffoli")->check(CLI::IsMember({"none", "toffoli"}));
  qsvm->add_option("--out", qs.out, "Circuit output path");
  qsvm->add_option("--report", qs.report, "Report output path (default stdout)");
  qsvm->add_flag("--no-timestamp", qs.no_timestamp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (*encode) return cmd_encode(enc, out, err);
    if (*noise) return cmd_noise(noi, out);
    if (*fork) return cmd_fork(frk, out);
    if (*qsvm) return cmd_qsvm(qs, out);
  } catch (const CommandError& e) {
    err << "error: " << e.what() << "\n";
    return e.code();
  } catch (const PostSelectionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitImpossible;
  } catch (const DegenerateError& e) {
    err << "error: " << e.what() << "\n";
    return kExitImpossible;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"ffqram"};
  for (const auto& s : args) argv.push_back(s.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace ffqram::cli

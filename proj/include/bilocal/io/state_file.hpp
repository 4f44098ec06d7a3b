#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"  // vendored nlohmann/json

#include "bilocal/error.hpp"
#include "bilocal/io/format.hpp"
#include "bilocal/monogamy.hpp"
#include "bilocal/state.hpp"

namespace bilocal::io {

// State file: a JSON object
//   {"qubits": n, "kind": "ket" | "density", "data": ..., "label": "..."}
// where "data" is 2^n [re, im] pairs for a ket or a 2^n x 2^n nested array of
// [re, im] pairs for a density matrix. Basis order: qubit 0 is the most
// significant bit.

using json = nlohmann::ordered_json;

struct StateFile {
  int qubits = 0;
  std::optional<Ket> ket;  // set for kind "ket"
  DensityMatrix rho = DensityMatrix::maximally_mixed(1);
  std::string label;
};

struct LoadedState {
  StateFile state;
  std::string source;  // path or generator spec
  std::string digest;
};

namespace detail {

inline Complex parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::Parse, "complex entries must be [re, im] number pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json complex_json(Complex z) { return json::array({round15(z.real()), round15(z.imag())}); }

}  // namespace detail

/// Validates the document and the physical invariants of the state.
/// Schema problems raise ErrorCode::Parse; NotNormalized / InvalidState signal
/// a well-formed file holding an unphysical state.
inline StateFile parse_state(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("state file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::Parse, "state file must be a JSON object");
  if (!doc.contains("qubits") || !doc["qubits"].is_number_integer()) {
    throw Error(ErrorCode::Parse, "state file needs an integer \"qubits\" field");
  }
  if (!doc.contains("kind") || !doc["kind"].is_string()) {
    throw Error(ErrorCode::Parse, "state file needs a \"kind\" field (\"ket\" or \"density\")");
  }
  if (!doc.contains("data") || !doc["data"].is_array()) {
    throw Error(ErrorCode::Parse, "state file needs a \"data\" array");
  }
  StateFile out;
  out.qubits = doc["qubits"].get<int>();
  if (out.qubits < 1 || out.qubits > kMaxQubits) {
    throw Error(ErrorCode::Parse, "\"qubits\" must be between 1 and 4");
  }
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) throw Error(ErrorCode::Parse, "\"label\" must be a string");
    out.label = doc["label"].get<std::string>();
  }
  const std::size_t dim = std::size_t{1} << out.qubits;
  const json& data = doc["data"];
  const std::string kind = doc["kind"].get<std::string>();
  if (kind == "ket") {
    if (data.size() != dim) {
      throw Error(ErrorCode::Parse, "ket data must hold " + std::to_string(dim) + " amplitudes");
    }
    std::vector<Complex> amps;
    for (const json& z : data) amps.push_back(detail::parse_complex(z));
    out.ket = Ket(std::move(amps));
    out.rho = density_from_ket(*out.ket);
  } else if (kind == "density") {
    if (data.size() != dim) throw Error(ErrorCode::Parse, "density data must have " + std::to_string(dim) + " rows");
    ComplexMatrix m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
      if (!data[r].is_array() || data[r].size() != dim) {
        throw Error(ErrorCode::Parse, "density row " + std::to_string(r) + " must have " + std::to_string(dim) +
                                          " entries");
      }
      for (std::size_t c = 0; c < dim; ++c) m(r, c) = detail::parse_complex(data[r][c]);
    }
    out.rho = DensityMatrix::from_matrix(std::move(m));
  } else {
    throw Error(ErrorCode::Parse, "unknown state kind '" + kind + "'");
  }
  return out;
}

inline std::string serialize_state(const StateFile& s) {
  json doc;
  doc["qubits"] = s.qubits;
  if (s.ket) {
    doc["kind"] = "ket";
    json data = json::array();
    for (const Complex& z : s.ket->amplitudes()) data.push_back(detail::complex_json(z));
    doc["data"] = std::move(data);
  } else {
    doc["kind"] = "density";
    json data = json::array();
    const ComplexMatrix& m = s.rho.matrix();
    for (std::size_t r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(detail::complex_json(m(r, c)));
      data.push_back(std::move(row));
    }
    doc["data"] = std::move(data);
  }
  if (!s.label.empty()) doc["label"] = s.label;
  return doc.dump(2) + "\n";
}

/// Parses an angle such as "0.3", "pi/4", "3*pi/8" or "-pi".
inline double parse_angle(std::string_view text) {
  std::string t;
  for (char ch : text)
    if (ch != ' ') t += ch;
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) throw Error(ErrorCode::Parse, "cannot parse angle '" + std::string(text) + "'");
    return v;
  };
  const auto pos = t.find("pi");
  if (pos == std::string::npos) return number(t);
  std::string coef = t.substr(0, pos);
  std::string rest = t.substr(pos + 2);
  double scale = 1.0;
  if (!coef.empty() && coef.back() == '*') coef.pop_back();
  if (coef == "-") scale = -1.0;
  else if (!coef.empty() && coef != "+") scale = number(coef);
  if (!rest.empty()) {
    if (rest.front() != '/') throw Error(ErrorCode::Parse, "cannot parse angle '" + std::string(text) + "'");
    scale /= number(rest.substr(1));
  }
  return scale * std::numbers::pi;
}

/// Built-in states: bell, ghz, product, classical, mixed, w:MU0,MU1,
/// random:SEED[:RANK]. `qubits` is the register size the caller needs.
inline StateFile generate_state(std::string_view spec, int qubits) {
  require_qubit_count(qubits);
  const std::size_t dim = std::size_t{1} << qubits;
  const std::string s(spec);
  const auto colon = s.find(':');
  const std::string name = s.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : s.substr(colon + 1);
  auto split = [](const std::string& a, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      const auto at = a.find(sep, start);
      parts.push_back(a.substr(start, at - start));
      if (at == std::string::npos) break;
      start = at + 1;
    }
    return parts;
  };
  auto from_ket = [&](std::vector<Complex> amps) {
    StateFile out;
    out.qubits = qubits;
    out.ket = Ket(std::move(amps));
    out.rho = density_from_ket(*out.ket);
    out.label = s;
    return out;
  };
  auto from_rho = [&](DensityMatrix rho) {
    StateFile out;
    out.qubits = qubits;
    out.rho = std::move(rho);
    out.label = s;
    return out;
  };

  if ((name == "bell" || name == "ghz") && args.empty()) {
    if (name == "bell" && qubits != 2) throw Error(ErrorCode::InvalidArgument, "bell is a two-qubit state");
    std::vector<Complex> amps(dim);
    amps.front() = amps.back() = std::numbers::sqrt2 / 2;
    return from_ket(std::move(amps));
  }
  if (name == "product" && args.empty()) {
    std::vector<Complex> amps(dim);
    amps.front() = 1.0;
    return from_ket(std::move(amps));
  }
  if (name == "classical" && args.empty()) {
    ComplexMatrix m(dim, dim);
    m(0, 0) = 0.5;
    m(dim - 1, dim - 1) = 0.5;
    return from_rho(DensityMatrix::from_matrix(std::move(m)));
  }
  if (name == "mixed" && args.empty()) return from_rho(DensityMatrix::maximally_mixed(qubits));
  if (name == "w") {
    if (qubits != 3) throw Error(ErrorCode::InvalidArgument, "w is a three-qubit state");
    const auto parts = split(args, ',');
    if (parts.size() != 2) throw Error(ErrorCode::Parse, "w needs two angles: w:MU0,MU1");
    const Ket psi = w_state({parse_angle(parts[0]), parse_angle(parts[1])});
    return from_ket(std::vector<Complex>(psi.amplitudes().begin(), psi.amplitudes().end()));
  }
  if (name == "random") {
    const auto parts = split(args, ':');
    if (args.empty() || parts.size() > 2) throw Error(ErrorCode::Parse, "random needs random:SEED[:RANK]");
    std::uint64_t seed = 0;
    int rank = std::min<int>(4, static_cast<int>(dim));
    try {
      std::size_t used = 0;
      seed = std::stoull(parts[0], &used);
      if (used != parts[0].size()) throw std::invalid_argument("seed");
      if (parts.size() == 2) {
        rank = std::stoi(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument("rank");
      }
    } catch (const std::exception&) {
      throw Error(ErrorCode::Parse, "cannot parse generator '" + s + "'");
    }
    return from_rho(random_density(qubits, rank, seed));
  }
  throw Error(ErrorCode::Parse, "unknown state generator '" + s + "'");
}

inline LoadedState load_state_file(const std::string& path) {
  const std::string text = read_file(path);
  return LoadedState{parse_state(text), path, digest(text)};
}

inline LoadedState load_generated(const std::string& spec, int qubits) {
  StateFile st = generate_state(spec, qubits);
  const std::string canonical = serialize_state(st);
  return LoadedState{std::move(st), "generator:" + spec, digest(canonical)};
}

}  // namespace bilocal::io

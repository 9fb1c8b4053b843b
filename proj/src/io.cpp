// SPDX-License-Identifier: Apache-2.0
#include "seaice/io.hpp"

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "seaice/error.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace seaice {

namespace {

constexpr const char* kFieldNames[4] = {"u_x", "u_y", "h", "A"};

void put_le(std::string& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xffu));
}

double get_le(const char* p) {
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[b])) << (8 * b);
  return std::bit_cast<double>(bits);
}

std::string payload_path_for(const std::string& manifest_path) {
  fs::path p(manifest_path);
  return p.replace_extension(".bin").string();
}

[[noreturn]] void corrupt(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::Parse, "snapshot " + path + ": " + what);
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& bytes) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::Io, "cannot open " + tmp + " for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw Error(ErrorCode::Io, "write to " + tmp + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot rename " + tmp + " to " + path + ": " + ec.message());
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_snapshot(const State& s, const std::string& manifest_path) {
  s.validate();
  const Grid& g = s.grid();
  const std::size_t n = g.size();
  const ScalarField* fields[4] = {&s.u.x, &s.u.y, &s.h, &s.A};

  std::string payload;
  payload.reserve(4 * n * 8);
  json list = json::array();
  for (int f = 0; f < 4; ++f) {
    list.push_back({{"name", kFieldNames[f]}, {"offset", payload.size()}, {"count", n}});
    for (double v : fields[f]->values()) put_le(payload, v);
  }
  const std::string payload_path = payload_path_for(manifest_path);
  json m = {{"format", "seaice-snapshot"},
            {"version", 1},
            {"grid", {{"nx", g.nx()}, {"ny", g.ny()}, {"lx", g.lx()}, {"ly", g.ly()}}},
            {"t", s.t},
            {"dtype", "float64"},
            {"endianness", "little"},
            {"payload", fs::path(payload_path).filename().string()},
            {"payload_bytes", payload.size()},
            {"fields", list}};
  write_file_atomic(payload_path, payload);
  write_file_atomic(manifest_path, m.dump(2) + "\n");
}

State read_snapshot(const std::string& manifest_path) {
  json m;
  try {
    m = json::parse(read_file(manifest_path));
  } catch (const json::parse_error& e) {
    corrupt(manifest_path, std::string("manifest is not valid JSON: ") + e.what());
  }
  try {
    if (m.at("format").get<std::string>() != "seaice-snapshot") corrupt(manifest_path, "unknown format tag");
    if (m.at("dtype").get<std::string>() != "float64") corrupt(manifest_path, "dtype must be float64");
    if (m.at("endianness").get<std::string>() != "little") corrupt(manifest_path, "endianness must be little");
    const json& gj = m.at("grid");
    const Grid g(gj.at("nx").get<int>(), gj.at("ny").get<int>(), gj.at("lx").get<double>(), gj.at("ly").get<double>());
    const std::string payload_path =
        (fs::path(manifest_path).parent_path() / m.at("payload").get<std::string>()).string();
    const std::string payload = read_file(payload_path);
    if (m.contains("payload_bytes") && m.at("payload_bytes").get<std::size_t>() != payload.size()) {
      std::ostringstream os;
      os << "payload length mismatch: manifest says " << m.at("payload_bytes").get<std::size_t>() << " bytes, file has "
         << payload.size();
      corrupt(manifest_path, os.str());
    }

    State s{VectorField(g), ScalarField(g), ScalarField(g), m.at("t").get<double>()};
    ScalarField* fields[4] = {&s.u.x, &s.u.y, &s.h, &s.A};
    bool seen[4] = {false, false, false, false};
    for (const json& fj : m.at("fields")) {
      const std::string name = fj.at("name").get<std::string>();
      int which = -1;
      for (int f = 0; f < 4; ++f)
        if (name == kFieldNames[f]) which = f;
      if (which < 0) corrupt(manifest_path, "unknown field " + name);
      const auto offset = fj.at("offset").get<std::size_t>();
      const auto count = fj.at("count").get<std::size_t>();
      if (count != g.size()) corrupt(manifest_path, "field " + name + " count does not match the grid");
      if (offset % 8 != 0 || offset + 8 * count > payload.size()) {
        std::ostringstream os;
        os << "payload length mismatch: field " << name << " needs bytes [" << offset << ", " << offset + 8 * count
           << ") but the payload has " << payload.size();
        corrupt(manifest_path, os.str());
      }
      for (std::size_t k = 0; k < count; ++k) (*fields[which])[k] = get_le(payload.data() + offset + 8 * k);
      seen[which] = true;
    }
    for (int f = 0; f < 4; ++f)
      if (!seen[f]) corrupt(manifest_path, std::string("missing field ") + kFieldNames[f]);
    s.validate();
    return s;
  } catch (const json::exception& e) {
    corrupt(manifest_path, std::string("malformed manifest: ") + e.what());
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::vector<std::string>& diagnostic_columns() {
  static const std::vector<std::string> cols = {
      "t",        "h_min",        "h_max",         "A_min",   "A_max",        "mass",
      "u_h3",     "h_h3",         "A_h3",          "energy_E", "energy_frakE", "div_exp",
      "picard_ratio", "picard_iterations", "solver_iterations", "solver_residual"};
  return cols;
}

std::string format_diagnostics(const std::vector<DiagRecord>& series) {
  std::string out;
  const auto& cols = diagnostic_columns();
  for (std::size_t c = 0; c < cols.size(); ++c) out += (c ? "," : "") + cols[c];
  out += "\n";
  for (const DiagRecord& d : series) {
    const double vals[] = {d.t,    d.h_min, d.h_max, d.A_min,    d.A_max,        d.mass,
                           d.u_h3, d.h_h3,  d.A_h3,  d.energy_E, d.energy_frakE, d.div_exp,
                           d.picard_ratio};
    for (double v : vals) out += format_double(v) + ",";
    out += std::to_string(d.picard_iterations) + "," + std::to_string(d.solver_iterations) + "," +
           format_double(d.solver_residual) + "\n";
  }
  return out;
}

void write_diagnostics(const std::vector<DiagRecord>& series, const std::string& path) {
  write_file_atomic(path, format_diagnostics(series));
}

std::vector<DiagRecord> parse_diagnostics(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Parse, "diagnostics CSV is empty");
  std::string expected;
  for (const auto& c : diagnostic_columns()) expected += (expected.empty() ? "" : ",") + c;
  if (line != expected) throw Error(ErrorCode::Parse, "diagnostics CSV header does not match the column order");

  std::vector<DiagRecord> out;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<double> v;
    const char* p = line.c_str();
    while (*p) {
      char* end = nullptr;
      v.push_back(std::strtod(p, &end));
      if (end == p) throw Error(ErrorCode::Parse, "bad number in diagnostics row " + std::to_string(row));
      p = end;
      if (*p == ',') ++p;
    }
    if (v.size() != diagnostic_columns().size())
      throw Error(ErrorCode::Parse, "diagnostics row " + std::to_string(row) + " has the wrong column count");
    DiagRecord d;
    double* fields[] = {&d.t,    &d.h_min, &d.h_max, &d.A_min,    &d.A_max,        &d.mass,
                        &d.u_h3, &d.h_h3,  &d.A_h3,  &d.energy_E, &d.energy_frakE, &d.div_exp,
                        &d.picard_ratio};
    for (std::size_t k = 0; k < 13; ++k) *fields[k] = v[k];
    d.picard_iterations = static_cast<int>(v[13]);
    d.solver_iterations = static_cast<int>(v[14]);
    d.solver_residual = v[15];
    out.push_back(d);
  }
  return out;
}

}  // namespace seaice

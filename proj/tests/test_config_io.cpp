// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <unistd.h>

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <string>

#include <json.hpp>

#include "seaice/config.hpp"
#include "seaice/error.hpp"
#include "seaice/io.hpp"
#include "support.hpp"

using namespace seaice;
using namespace seaice::test;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  explicit TempDir(const std::string& tag)
      : path_(fs::temp_directory_path() / ("seaice-test-" + tag + "-" + std::to_string(::getpid()))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

std::string error_text(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

State random_state(Rng& rng, const Grid& g) {
  return State{rng.noise_vec(g, -1, 1), rng.noise(g, 0.1, 2.0), rng.noise(g, 0.0, 1.0), rng.uniform(0, 5)};
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_SUITE("config_io") {

TEST_CASE("minimal config fills defaults") {
  const RunConfig c = parse_config("{}");
  CHECK(c.cfl.cfl_number == 0.4);
  CHECK(c.picard_tol == 1e-8);
  CHECK(c.picard_max == 50);
  CHECK(c.grid.nx == 32);
  CHECK(c.reg.epsilon == 0.1);
  CHECK(c.solver.tol_rel == 1e-11);
  CHECK(c.monitor_tol == 1e-6);
  CHECK(c.phys.growth.family() == "tanh");
  CHECK(c.stability.deltas == std::vector<double>{1e-2, 1e-3, 1e-4});
}

TEST_CASE("invalid data constraints are named") {
  const std::string bad_A = R"({"initial": {"A": {"family": "random-smooth", "lo": -0.1, "hi": 1.0}}})";
  CHECK(code_of([&] { parse_config(bad_A); }) == ErrorCode::Validation);
  const std::string msg = error_text([&] { parse_config(bad_A); });
  CHECK(msg.find("initial.A") != std::string::npos);
  CHECK(msg.find("0 <= A_in <= 1") != std::string::npos);

  const std::string bad_h = R"({"initial": {"h": {"family": "single-mode", "a0": 1.0, "a1": 1.5}}})";
  CHECK(error_text([&] { parse_config(bad_h); }).find("initial.h") != std::string::npos);

  CHECK(code_of([] { parse_config(R"({"regularization": {"epsilon": 0}})"); }) == ErrorCode::Validation);
  CHECK(code_of([] { parse_config(R"({"time": {"dt_max": -1}})"); }) == ErrorCode::Validation);
  CHECK(code_of([] { parse_config(R"({"grid": {"nx": 2}})"); }) == ErrorCode::Validation);
}

TEST_CASE("malformed configs are parse errors") {
  CHECK(code_of([] { parse_config("{"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse_config(R"({"grdi": {}})"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse_config(R"({"grid": {"nx": "many"}})"); }) == ErrorCode::Parse);
  CHECK(code_of([] { load_config("/nonexistent/config.json"); }) == ErrorCode::Io);
}

TEST_CASE("config round trip") {
  const RunConfig a = load_config(SEAICE_SOURCE_DIR "/configs/standard.json");
  const std::string text = serialize_config(a);
  const RunConfig b = parse_config(text);
  CHECK(a == b);
  CHECK(serialize_config(b) == text);

  TempDir dir("config");
  RunConfig c = b;
  c.continuation.schedule = c.continuation.expand(c.reg);
  c.slab_cap = 0.25;
  c.phys.growth = growth_constant(-0.2);
  save_config(c, dir / "c.json");
  const RunConfig d = load_config(dir / "c.json");
  CHECK(d == c);
  CHECK(d.continuation.schedule.size() == 5);
  CHECK(d.slab_cap == 0.25);
  CHECK(d.phys.growth(3.0) == -0.2);
}

TEST_CASE("continuation schedule expansion") {
  ContinuationSpec cs;
  const std::vector<RegParams> s = cs.expand(RegParams{});
  REQUIRE(s.size() == 5);
  CHECK(s[0].mu == 0.1);
  CHECK(s[0].iota == 0.01);
  CHECK(s[4].lambda == doctest::Approx(0.1 / 16));
  CHECK(s[4].nu == doctest::Approx(0.1 / 16));
  for (std::size_t k = 1; k < s.size(); ++k) CHECK(s[k - 1].dominates(s[k]));
}

TEST_CASE("initial field families") {
  const Grid g(16, 8, 2.0, 1.0);
  FieldSpec c{"constant", 0.7};
  CHECK(make_field(c, g, 1, -1e300, 1e300) == ScalarField(g, 0.7));

  FieldSpec sm;
  sm.family = "single-mode";
  sm.a0 = 1.0;
  sm.a1 = 0.2;
  sm.kx = 2;
  const ScalarField f = make_field(sm, g, 1, -1e300, 1e300);
  CHECK(f(3, 5) == doctest::Approx(1.0 + 0.2 * std::sin(kTwoPi * 2 * g.x(3) / 2.0) * std::sin(kTwoPi * g.y(5))));

  FieldSpec rs;
  rs.family = "random-smooth";
  rs.lo = 0.6;
  rs.hi = 1.4;
  const ScalarField r1 = make_field(rs, g, 7, -1e300, 1e300), r2 = make_field(rs, g, 7, -1e300, 1e300);
  const ScalarField r3 = make_field(rs, g, 8, -1e300, 1e300);
  CHECK(r1 == r2);
  CHECK(!(r1 == r3));
  CHECK(r1.min() == doctest::Approx(0.6));
  CHECK(r1.max() == doctest::Approx(1.4));
  const ScalarField clipped = make_field(rs, g, 7, 0.8, 1.0);
  CHECK(clipped.min() >= 0.8);
  CHECK(clipped.max() <= 1.0);
}

TEST_CASE("initial state from a config") {
  RunConfig cfg = load_config(SEAICE_SOURCE_DIR "/configs/standard.json");
  const State s = make_initial_state(cfg);
  CHECK(s.grid() == Grid(32, 32));
  CHECK(s.h.min() > 0.0);
  CHECK(s.A.max() <= 1.0);
  CHECK(s.t == 0.0);
  CHECK(make_initial_state(cfg) == s);
}

TEST_CASE("snapshot round trip and references from configs") {
  TempDir dir("snapshot");
  Rng rng(71);
  const State s = random_state(rng, Grid(12, 10, 1.0, 0.5));
  write_snapshot(s, dir / "sub/state.json");
  CHECK(fs::exists(dir / "sub/state.bin"));
  const State back = read_snapshot(dir / "sub/state.json");
  CHECK(back == s);
  CHECK(back.t == s.t);

  RunConfig cfg;
  cfg.grid = {12, 10, 1.0, 0.5};
  cfg.initial.snapshot = "sub/state.json";
  write_file_atomic(dir / "cfg.json", serialize_config(cfg));
  const RunConfig loaded = load_config(dir / "cfg.json");
  CHECK(make_initial_state(loaded) == s);

  cfg.initial.snapshot = "missing.json";
  write_file_atomic(dir / "cfg2.json", serialize_config(cfg));
  CHECK(code_of([&] { load_config(dir / "cfg2.json"); }) == ErrorCode::Validation);
}

TEST_CASE("truncated payload is a length mismatch") {
  TempDir dir("truncate");
  Rng rng(72);
  write_snapshot(random_state(rng, Grid(8, 8)), dir / "s.json");
  fs::resize_file(dir / "s.bin", fs::file_size(dir / "s.bin") - 8);
  const std::string msg = error_text([&] { read_snapshot(dir / "s.json"); });
  CHECK(msg.find("length mismatch") != std::string::npos);
  CHECK(code_of([&] { read_snapshot(dir / "s.json"); }) == ErrorCode::Parse);
  CHECK(code_of([&] { read_snapshot(dir / "none.json"); }) == ErrorCode::Io);
}

TEST_CASE("independent reader reproduces the field means") {
  TempDir dir("reader");
  Rng rng(73);
  const State s = random_state(rng, Grid(9, 7));
  write_snapshot(s, dir / "s.json");

  const nlohmann::json m = nlohmann::json::parse(read_file(dir / "s.json"));
  CHECK(m["dtype"] == "float64");
  CHECK(m["endianness"] == "little");
  std::ifstream bin(dir / m["payload"].get<std::string>(), std::ios::binary);
  const std::string bytes((std::istreambuf_iterator<char>(bin)), std::istreambuf_iterator<char>());
  CHECK(bytes.size() == m["payload_bytes"].get<std::size_t>());

  const std::map<std::string, const ScalarField*> expect{{"u_x", &s.u.x}, {"u_y", &s.u.y}, {"h", &s.h}, {"A", &s.A}};
  std::size_t offset = 0;
  for (const auto& f : m["fields"]) {
    const std::string name = f["name"];
    const std::size_t count = f["count"];
    CHECK(f["offset"].get<std::size_t>() == offset);
    double sum = 0.0, ref = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      std::uint64_t bits = 0;
      for (int b = 0; b < 8; ++b)
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[offset + 8 * k + b])) << (8 * b);
      sum += std::bit_cast<double>(bits);
      ref += (*expect.at(name))[k];
    }
    CHECK(sum / count == ref / count);
    offset += 8 * count;
  }
  CHECK(offset == bytes.size());
}

TEST_CASE("diagnostics CSV") {
  const std::string empty = format_diagnostics({});
  CHECK(count_lines(empty) == 1);
  CHECK(empty.rfind("t,h_min,h_max", 0) == 0);
  CHECK(parse_diagnostics(empty).empty());

  DiagRecord d;
  d.t = 0.1;
  d.mass = 1.0 / 3.0;
  CHECK(count_lines(format_diagnostics({d})) == 2);

  Rng rng(74);
  std::vector<DiagRecord> series(20);
  for (auto& r : series) {
    r.t = rng.unit();
    r.h_min = rng.uniform(0, 1);
    r.h_max = rng.uniform(1, 2);
    r.A_min = -rng.unit() * 1e-17;
    r.A_max = 1.0 - rng.unit() * 1e-9;
    r.mass = rng.unit() * 1e-300;
    r.u_h3 = rng.unit() * 1e200;
    r.energy_E = rng.unit();
    r.energy_frakE = rng.unit();
    r.div_exp = 1.0 + rng.unit();
    r.picard_ratio = rng.unit();
    r.picard_iterations = static_cast<int>(rng.bits() % 50);
    r.solver_iterations = static_cast<int>(rng.bits() % 1000);
    r.solver_residual = rng.unit() * 1e-11;
  }
  CHECK(parse_diagnostics(format_diagnostics(series)) == series);

  TempDir dir("csv");
  write_diagnostics(series, dir / "d.csv");
  CHECK(parse_diagnostics(read_file(dir / "d.csv")) == series);

  CHECK(code_of([] { parse_diagnostics("a,b\n1,2\n"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse_diagnostics(""); }) == ErrorCode::Parse);
  std::string short_row = format_diagnostics({});
  short_row += "1,2,3\n";
  CHECK(code_of([&] { parse_diagnostics(short_row); }) == ErrorCode::Parse);
}

TEST_CASE("number formatting round trips") {
  Rng rng(75);
  for (int k = 0; k < 1000; ++k) {
    const double v = std::bit_cast<double>(rng.bits() & 0x7fefffffffffffffull);
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("atomic writes leave no temporary files") {
  TempDir dir("atomic");
  write_file_atomic(dir / "a/b/c.txt", "hello");
  CHECK(read_file(dir / "a/b/c.txt") == "hello");
  write_file_atomic(dir / "a/b/c.txt", "bye");
  CHECK(read_file(dir / "a/b/c.txt") == "bye");
  int files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir.path() / "a/b")) ++files;
  CHECK(files == 1);
}

}  // TEST_SUITE

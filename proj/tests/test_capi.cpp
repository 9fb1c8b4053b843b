// SPDX-License-Identifier: Apache-2.0
// Exercises the shared library through its C header only.
#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "seaice/seaice.h"

namespace fs = std::filesystem;

namespace {

const char* kSmallConfig = R"({
  "grid": {"nx": 16, "ny": 16},
  "initial": {
    "h": {"family": "single-mode", "a0": 1.0, "a1": 0.2},
    "A": {"family": "single-mode", "a0": 0.7, "a1": 0.25},
    "u_x": {"family": "single-mode", "a1": 0.03, "py": 1.5707963267948966},
    "u_y": {"family": "single-mode", "a1": 0.03, "px": 1.5707963267948966}
  },
  "time": {"T": 0.004, "dt_max": 0.002},
  "studies": {"continuation": {"entries": 3}, "stability": {"deltas": [0.01, 0.001]}}
})";

fs::path scratch(const std::string& tag) {
  const char* env = std::getenv("SEAICE_TEST_TMP");
  const fs::path base = env ? fs::path(env) : fs::temp_directory_path() / ("seaice-capi-" + std::to_string(::getpid()));
  const fs::path p = base / tag;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct Config {
  seaice_config* cfg = nullptr;
  explicit Config(const char* text = kSmallConfig) { REQUIRE(seaice_config_parse(text, nullptr, &cfg) == SEAICE_OK); }
  ~Config() { seaice_config_free(cfg); }
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

int lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("version and status strings") {
  CHECK(std::strlen(seaice_version()) > 0);
  CHECK(std::string(seaice_status_string(SEAICE_OK)) != "");
  CHECK(std::string(seaice_status_string(SEAICE_ERR_BOUND_VIOLATION)) !=
        std::string(seaice_status_string(SEAICE_ERR_PARSE)));
  CHECK(std::string(seaice_status_string(static_cast<seaice_status>(12345))) != "");
}

TEST_CASE("errors are reported through status and message") {
  seaice_config* cfg = reinterpret_cast<seaice_config*>(0x1);
  CHECK(seaice_config_parse("{not json", nullptr, &cfg) == SEAICE_ERR_PARSE);
  CHECK(cfg == nullptr);
  CHECK(std::strlen(seaice_last_error()) > 0);
  CHECK(seaice_config_parse(R"({"grid": {"nx": 1}})", nullptr, &cfg) == SEAICE_ERR_VALIDATION);
  CHECK(std::string(seaice_last_error()).find("grid") != std::string::npos);
  CHECK(seaice_config_load("/nonexistent/seaice.json", &cfg) == SEAICE_ERR_IO);
  CHECK(seaice_config_parse(nullptr, nullptr, &cfg) == SEAICE_ERR_INVALID_ARGUMENT);
  CHECK(seaice_run(nullptr, nullptr) == SEAICE_ERR_INVALID_ARGUMENT);
  seaice_config_free(nullptr);
  seaice_state_free(nullptr);

  Config ok;
  CHECK(std::strlen(seaice_last_error()) == 0);
}

TEST_CASE("serialization and overrides") {
  Config c;
  size_t needed = 0;
  CHECK(seaice_config_serialize(c.cfg, nullptr, 0, &needed) == SEAICE_OK);
  REQUIRE(needed > 1);
  std::vector<char> small(4, 'x');
  size_t needed2 = 0;
  CHECK(seaice_config_serialize(c.cfg, small.data(), small.size(), &needed2) == SEAICE_ERR_INVALID_ARGUMENT);
  CHECK(needed2 == needed);
  std::vector<char> buf(needed);
  CHECK(seaice_config_serialize(c.cfg, buf.data(), buf.size(), &needed) == SEAICE_OK);
  CHECK(std::strlen(buf.data()) + 1 == needed);

  seaice_config* again = nullptr;
  REQUIRE(seaice_config_parse(buf.data(), nullptr, &again) == SEAICE_OK);
  std::vector<char> buf2(needed);
  CHECK(seaice_config_serialize(again, buf2.data(), buf2.size(), &needed) == SEAICE_OK);
  CHECK(std::string(buf.data()) == std::string(buf2.data()));
  seaice_config_free(again);

  CHECK(seaice_config_set_seed(c.cfg, 99) == SEAICE_OK);
  uint64_t seed = 0;
  CHECK(seaice_config_get_seed(c.cfg, &seed) == SEAICE_OK);
  CHECK(seed == 99);

  // rejected overrides leave the config untouched
  CHECK(seaice_config_set_grid_size(c.cfg, 2) == SEAICE_ERR_VALIDATION);
  CHECK(seaice_config_set_end_time(c.cfg, -1.0) == SEAICE_ERR_VALIDATION);
  std::vector<char> buf3(needed + 64);
  CHECK(seaice_config_serialize(c.cfg, buf3.data(), buf3.size(), &needed) == SEAICE_OK);
  CHECK(std::string(buf3.data()).find("\"nx\": 16") != std::string::npos);

  CHECK(seaice_config_set_grid_size(c.cfg, 8) == SEAICE_OK);
  CHECK(seaice_config_set_out_dir(c.cfg, "elsewhere") == SEAICE_OK);
  const char* dir = nullptr;
  CHECK(seaice_config_get_out_dir(c.cfg, &dir) == SEAICE_OK);
  CHECK(std::string(dir) == "elsewhere");
  CHECK(seaice_config_set_fail_fast(c.cfg, 1) == SEAICE_OK);

  const fs::path d = scratch("save");
  CHECK(seaice_config_save(c.cfg, (d / "c.json").c_str()) == SEAICE_OK);
  seaice_config* loaded = nullptr;
  REQUIRE(seaice_config_load((d / "c.json").c_str(), &loaded) == SEAICE_OK);
  std::vector<char> b1(8192), b2(8192);
  seaice_config_serialize(c.cfg, b1.data(), b1.size(), &needed);
  seaice_config_serialize(loaded, b2.data(), b2.size(), &needed);
  CHECK(std::string(b1.data()) == std::string(b2.data()));
  seaice_config_free(loaded);
}

TEST_CASE("states and snapshots") {
  Config c;
  seaice_state* st = nullptr;
  REQUIRE(seaice_state_from_config(c.cfg, &st) == SEAICE_OK);
  int nx = 0, ny = 0;
  double lx = 0, ly = 0, t = -1;
  CHECK(seaice_state_grid(st, &nx, &ny, &lx, &ly) == SEAICE_OK);
  CHECK(nx == 16);
  CHECK(ny == 16);
  CHECK(lx == 1.0);
  CHECK(seaice_state_time(st, &t) == SEAICE_OK);
  CHECK(t == 0.0);
  std::vector<double> h(256), bad(10);
  CHECK(seaice_state_get_field(st, "h", h.data(), h.size()) == SEAICE_OK);
  CHECK(*std::min_element(h.begin(), h.end()) > 0.7);
  CHECK(seaice_state_get_field(st, "h", bad.data(), bad.size()) == SEAICE_ERR_INVALID_ARGUMENT);
  CHECK(seaice_state_get_field(st, "p", h.data(), h.size()) == SEAICE_ERR_INVALID_ARGUMENT);

  const fs::path d = scratch("state");
  CHECK(seaice_state_write(st, (d / "s.json").c_str()) == SEAICE_OK);
  seaice_state* back = nullptr;
  REQUIRE(seaice_state_read((d / "s.json").c_str(), &back) == SEAICE_OK);
  for (const char* name : {"u_x", "u_y", "h", "A"}) {
    std::vector<double> a(256), b(256);
    seaice_state_get_field(st, name, a.data(), a.size());
    seaice_state_get_field(back, name, b.data(), b.size());
    CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
  }
  seaice_state_free(back);
  seaice_state_free(st);

  fs::resize_file(d / "s.bin", 100);
  seaice_state* broken = nullptr;
  CHECK(seaice_state_read((d / "s.json").c_str(), &broken) == SEAICE_ERR_PARSE);
  CHECK(broken == nullptr);
}

TEST_CASE("run writes its artifacts") {
  Config c;
  const fs::path d = scratch("run");
  REQUIRE(seaice_config_set_out_dir(c.cfg, d.c_str()) == SEAICE_OK);
  seaice_run_summary r{};
  REQUIRE(seaice_run(c.cfg, &r) == SEAICE_OK);
  CHECK(r.t_end == doctest::Approx(0.004));
  CHECK(r.records == 3);
  CHECK(r.slabs == 1);
  CHECK(r.violations == 0);
  CHECK(r.mass_initial == doctest::Approx(1.0));
  CHECK(r.residual <= 1e-7);
  for (const char* f : {"config.json", "initial.json", "initial.bin", "final.json", "final.bin", "diagnostics.csv",
                        "violations.csv", "slabs.csv"})
    CHECK(fs::exists(d / f));
  CHECK(lines(slurp(d / "diagnostics.csv")) == 4);
  CHECK(lines(slurp(d / "violations.csv")) == 1);

  seaice_state* fin = nullptr;
  REQUIRE(seaice_state_read((d / "final.json").c_str(), &fin) == SEAICE_OK);
  double t = 0;
  seaice_state_time(fin, &t);
  CHECK(t == doctest::Approx(0.004));
  seaice_state_free(fin);

  // identical configs produce identical bytes
  const std::string first = slurp(d / "diagnostics.csv");
  REQUIRE(seaice_run(c.cfg, &r) == SEAICE_OK);
  CHECK(slurp(d / "diagnostics.csv") == first);
}

TEST_CASE("run with T = 0") {
  Config c;
  const fs::path d = scratch("run0");
  seaice_config_set_out_dir(c.cfg, d.c_str());
  REQUIRE(seaice_config_set_end_time(c.cfg, 0.0) == SEAICE_OK);
  seaice_run_summary r{};
  REQUIRE(seaice_run(c.cfg, &r) == SEAICE_OK);
  CHECK(r.records == 1);
  CHECK(r.slabs == 0);
  CHECK(r.t_end == 0.0);
  CHECK(lines(slurp(d / "diagnostics.csv")) == 2);
}

TEST_CASE("studies") {
  Config c;
  const fs::path d = scratch("studies");
  seaice_config_set_out_dir(c.cfg, d.c_str());

  seaice_picard_summary p{};
  REQUIRE(seaice_picard_study(c.cfg, &p) == SEAICE_OK);
  CHECK(p.slabs >= 1);
  CHECK(p.located == 1);
  CHECK(p.target == 0.5);
  CHECK(fs::exists(d / "picard_study.csv"));

  seaice_continuation_summary k{};
  REQUIRE(seaice_continuation_study(c.cfg, &k) == SEAICE_OK);
  CHECK(k.differences == 2);
  CHECK(k.d_first > 0.0);
  CHECK(lines(slurp(d / "continuation.csv")) == 4);

  seaice_stability_summary s{};
  REQUIRE(seaice_stability_study(c.cfg, &s) == SEAICE_OK);
  CHECK(s.count == 2);
  CHECK(s.min_ratio > 0.0);
  CHECK(s.min_ratio <= s.max_ratio);
  CHECK(lines(slurp(d / "stability.csv")) == 3);
}

TEST_CASE("invariant suite through the callback") {
  struct Tally {
    int rows = 0;
    int passed = 0;
  } tally;
  int failures = -1;
  auto cb = [](const seaice_invariant_row* row, void* user) {
    auto* t = static_cast<Tally*>(user);
    ++t->rows;
    t->passed += row->pass;
  };
  REQUIRE(seaice_check_invariants(0, cb, &tally, &failures) == SEAICE_OK);
  CHECK(failures == 0);
  CHECK(tally.rows > 10);
  CHECK(tally.passed == tally.rows);
  CHECK(seaice_check_invariants(3, nullptr, nullptr, &failures) == SEAICE_OK);
  CHECK(failures == 0);
}

}  // TEST_SUITE

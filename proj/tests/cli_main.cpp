#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const char* bin() { return std::getenv("FLOQ1D_BIN"); }

fs::path scratch() {
  const fs::path dir = fs::current_path() / "cli_scratch";
  fs::create_directories(dir);
  return dir;
}

struct run_result {
  int exit_code;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

run_result run(const std::string& args, const std::string& env_prefix = "") {
  const fs::path dir = scratch();
  const fs::path out = dir / "stdout.txt", err = dir / "stderr.txt";
  const std::string cmd = env_prefix + std::string(bin()) + " " + args + " >" + out.string() +
                          " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  const int code = (status != -1 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out), slurp(err)};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

struct table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    REQUIRE_MESSAGE(false, "missing column " << name);
    return 0;
  }
};

table parse_csv(const std::string& text) {
  table t;
  bool first = true;
  for (const auto& line : split(text, '\n')) {
    if (line.empty()) continue;
    if (first) {
      t.header = split(line, ',');
      first = false;
    } else {
      t.rows.push_back(split(line, ','));
    }
  }
  return t;
}

const char* golden_config = R"({
  "cell": [[0.5, 4.0], [0.5, 1.0]],
  "defect": {"width": 0.8, "layers": [[0.8, 2.25]]},
  "polarization": "E",
  "sweep": {"k_min": 1.76, "k_max": 1.93, "k_count": 241, "n": 5, "theta": 0.0}
})";

constexpr double k0 = 1.8417976682289354;

fs::path write_config(const char* name, const std::string& text) {
  const fs::path p = scratch() / name;
  spit(p, text);
  return p;
}

}  // namespace

TEST_CASE("bands on vacuum never reports a gap") {
  if (!bin()) return;
  const auto cfg = write_config("vacuum_bands.json", R"({
    "cell": [[1.0, 1.0]],
    "polarization": "E",
    "bands": {"k_min": 0.1, "k_max": 3.0, "k_count": 50, "theta": 0.0}
  })");
  const fs::path out = scratch() / "vacuum_bands.csv";
  const auto res = run("bands --config " + cfg.string() + " --out " + out.string());
  REQUIRE_MESSAGE(res.exit_code == 0, res.err);
  const auto t = parse_csv(slurp(out));
  REQUIRE(t.rows.size() == 50);
  const auto cls = t.col("class");
  for (const auto& row : t.rows) CHECK(row[cls] != "Gap");
}

TEST_CASE("sweep across the gap dips exactly at the defect mode") {
  if (!bin()) return;
  const auto cfg = write_config("golden_sweep.json", golden_config);
  const fs::path out = scratch() / "sweep.csv";
  const auto res = run("sweep --config " + cfg.string() + " --out " + out.string());
  REQUIRE_MESSAGE(res.exit_code == 0, res.err);
  const auto t = parse_csv(slurp(out));
  REQUIRE(t.rows.size() == 241);
  const auto kc = t.col("k"), rc = t.col("abs_r"), ec = t.col("energy_residual");
  double min_r = 2.0, min_k = 0.0, max_r = 0.0, max_energy = 0.0;
  for (const auto& row : t.rows) {
    const double r = std::stod(row[rc]);
    if (r < min_r) {
      min_r = r;
      min_k = std::stod(row[kc]);
    }
    max_r = std::max(max_r, r);
    max_energy = std::max(max_energy, std::stod(row[ec]));
  }
  CHECK(std::abs(min_k - k0) < 0.01);
  CHECK(min_r < 0.8);
  CHECK(max_r > 0.99);
  CHECK(max_energy < 1e-10);
}

TEST_CASE("identical configs give byte-identical output, independent of jobs") {
  if (!bin()) return;
  const auto cfg = write_config("golden_sweep.json", golden_config);
  const fs::path a = scratch() / "det_a.csv", b = scratch() / "det_b.csv",
                 c = scratch() / "det_c.csv";
  REQUIRE(run("sweep --config " + cfg.string() + " --out " + a.string() + " --jobs 1").exit_code ==
          0);
  REQUIRE(run("sweep --config " + cfg.string() + " --out " + b.string() + " --jobs 1").exit_code ==
          0);
  REQUIRE(run("sweep --config " + cfg.string() + " --out " + c.string() + " --jobs 4").exit_code ==
          0);
  const std::string ta = slurp(a);
  CHECK(ta == slurp(b));
  CHECK(ta == slurp(c));
  CHECK(!ta.empty());
}

TEST_CASE("kernel selection is observable but never changes results") {
  if (!bin()) return;
  const auto cfg = write_config("golden_sweep.json", golden_config);
  const fs::path a = scratch() / "kern_auto.csv", b = scratch() / "kern_scalar.csv";
  REQUIRE(run("sweep --config " + cfg.string() + " --out " + a.string()).exit_code == 0);
  REQUIRE(run("sweep --config " + cfg.string() + " --out " + b.string(),
              "FLOQ_KERNEL=scalar ")
              .exit_code == 0);
  CHECK(slurp(a) == slurp(b));
  const auto bad = run("sweep --config " + cfg.string(), "FLOQ_KERNEL=warp9 ");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("json output carries the same rows") {
  if (!bin()) return;
  const auto cfg = write_config("golden_sweep.json", golden_config);
  const fs::path out = scratch() / "sweep.json";
  const auto res =
      run("sweep --config " + cfg.string() + " --out " + out.string() + " --format json");
  REQUIRE_MESSAGE(res.exit_code == 0, res.err);
  const auto arr = nlohmann::json::parse(slurp(out));
  REQUIRE(arr.is_array());
  CHECK(arr.size() == 241);
  CHECK(arr.front().contains("abs_r"));
  CHECK(arr.front()["n"] == 5.0);
}

TEST_CASE("modes subcommand finds the golden mode") {
  if (!bin()) return;
  const auto cfg = write_config("golden_modes.json", R"({
    "cell": [[0.5, 4.0], [0.5, 1.0]],
    "defect": {"width": 0.8, "layers": [[0.8, 2.25]]},
    "polarization": "E",
    "modes": {"k_min": 0.05, "k_max": 3.5, "theta": 0.0}
  })");
  const fs::path out = scratch() / "modes.csv";
  const auto res = run("modes --config " + cfg.string() + " --out " + out.string());
  REQUIRE_MESSAGE(res.exit_code == 0, res.err);
  const auto t = parse_csv(slurp(out));
  REQUIRE(t.rows.size() == 1);
  CHECK(std::abs(std::stod(t.rows[0][t.col("k0")]) - k0) < 1e-6);
  CHECK(std::stod(t.rows[0][t.col("residual")]) < 1e-9);
  CHECK(t.rows[0][t.col("gap_index")] == "1");
}

TEST_CASE("polezero subcommand certifies the pair windings") {
  if (!bin()) return;
  const auto cfg = write_config("golden_pz.json", R"({
    "cell": [[0.5, 4.0], [0.5, 1.0]],
    "defect": {"width": 0.8, "layers": [[0.8, 2.25]]},
    "polarization": "E",
    "polezero": {"n_values": [6], "theta": 0.0, "k_min": 0.05, "k_max": 3.5}
  })");
  const fs::path out = scratch() / "pz.csv";
  const auto res = run("polezero --config " + cfg.string() + " --out " + out.string());
  REQUIRE_MESSAGE(res.exit_code == 0, res.err);
  const auto t = parse_csv(slurp(out));
  REQUIRE(t.rows.size() == 1);
  CHECK(std::abs(std::stod(t.rows[0][t.col("winding_p")]) - 1.0) < 1e-6);
  CHECK(std::abs(std::stod(t.rows[0][t.col("winding_q")]) - 1.0) < 1e-6);
  CHECK(std::stod(t.rows[0][t.col("im_k_pole")]) < 0.0);
  CHECK(std::stod(t.rows[0][t.col("delta_n")]) > 0.0);
}

TEST_CASE("supercell subcommand reports shrinking widths") {
  if (!bin()) return;
  const auto cfg = write_config("golden_sc.json", R"({
    "cell": [[0.5, 4.0], [0.5, 1.0]],
    "defect": {"width": 0.8, "layers": [[0.8, 2.25]]},
    "polarization": "E",
    "supercell": {"n_min": 4, "n_max": 6, "theta": 0.0, "k_min": 0.05, "k_max": 3.5}
  })");
  const fs::path out = scratch() / "sc.csv";
  const auto res = run("supercell --config " + cfg.string() + " --out " + out.string());
  REQUIRE_MESSAGE(res.exit_code == 0, res.err);
  const auto t = parse_csv(slurp(out));
  REQUIRE(t.rows.size() == 3);
  const auto wc = t.col("width");
  const double w4 = std::stod(t.rows[0][wc]), w5 = std::stod(t.rows[1][wc]),
               w6 = std::stod(t.rows[2][wc]);
  CHECK(w4 > w5);
  CHECK(w5 > w6);
  CHECK(w6 > 0.0);
}

TEST_CASE("envelope on vacuum is identically zero") {
  if (!bin()) return;
  const auto cfg = write_config("vacuum_env.json", R"({
    "cell": [[1.0, 1.0]],
    "defect": {"width": 0.8, "layers": [[0.8, 1.0]]},
    "polarization": "E",
    "envelope": {"k_min": 0.1, "k_max": 3.0, "k_count": 100, "n": 5, "theta": 0.0}
  })");
  const fs::path out = scratch() / "env.csv";
  const auto res = run("envelope --config " + cfg.string() + " --out " + out.string());
  REQUIRE_MESSAGE(res.exit_code == 0, res.err);
  const auto t = parse_csv(slurp(out));
  REQUIRE(t.rows.size() == 100);
  const auto ec = t.col("envelope");
  for (const auto& row : t.rows) {
    REQUIRE(!row[ec].empty());  // vacuum is all band
    CHECK(std::stod(row[ec]) < 1e-12);
  }
}

TEST_CASE("config failures use exit code 2 and name the field") {
  if (!bin()) return;
  const auto bad = write_config("bad_thickness.json", R"({
    "cell": [[-0.5, 4.0], [1.5, 1.0]],
    "polarization": "E",
    "sweep": {"k_min": 1.0, "k_max": 2.0, "k_count": 3, "n": 1, "theta": 0.0}
  })");
  const auto res = run("sweep --config " + bad.string());
  CHECK(res.exit_code == 2);
  CHECK(res.err.find("thickness") != std::string::npos);

  const auto unknown = write_config("unknown_key.json", R"({
    "cell": [[1.0, 1.0]], "polarization": "E", "surprise": true
  })");
  CHECK(run("bands --config " + unknown.string()).exit_code == 2);

  CHECK(run("warp --config " + bad.string()).exit_code == 2);
  CHECK(run("sweep").exit_code == 2);
}

TEST_CASE("numerical failures use exit code 3 and log the context") {
  if (!bin()) return;
  const auto cfg = write_config("modeless_pz.json", R"({
    "cell": [[0.5, 4.0], [0.5, 1.0]],
    "defect": {"width": 0.8, "layers": [[0.8, 2.25]]},
    "polarization": "E",
    "polezero": {"n_values": [6], "theta": 0.0, "k_min": 2.6, "k_max": 3.4}
  })");
  const auto res = run("polezero --config " + cfg.string());
  CHECK(res.exit_code == 3);
  CHECK(res.err.find("mode") != std::string::npos);
}

TEST_CASE("missing config file uses exit code 4") {
  if (!bin()) return;
  CHECK(run("sweep --config /nonexistent/floq.json").exit_code == 4);
}

TEST_CASE("every run writes a manifest echoing the config") {
  if (!bin()) return;
  const auto cfg = write_config("golden_sweep.json", golden_config);
  const fs::path out = scratch() / "manifested.csv";
  REQUIRE(run("sweep --config " + cfg.string() + " --out " + out.string()).exit_code == 0);
  const auto m = nlohmann::json::parse(slurp(out.string() + ".manifest.json"));
  CHECK(m["tool"] == "floq1d");
  CHECK(m["subcommand"] == "sweep");
  CHECK(m["output"] == out.string());
  CHECK(m["config"]["cell"][0][1] == 4.0);
  CHECK(m["wall_time_s"].is_number());
  CHECK(m["version"].is_string());
}

TEST_CASE("help exits cleanly") {
  if (!bin()) return;
  CHECK(run("--help").exit_code == 0);
  CHECK(run("sweep --help").exit_code == 0);
}

#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "whitham/io/checksum.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("whitham_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Result lab(const std::string& args, const std::string& env = "") {
  const auto dir = fs::temp_directory_path();
  const auto out = dir / "whitham_cli_stdout.txt", err = dir / "whitham_cli_stderr.txt";
  const std::string cmd =
      env + " '" + std::string(WHITHAM_LAB_EXE) + "' " + args + " >'" + out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

fs::path write_config(const fs::path& dir, const std::string& body) {
  const auto p = dir / "run.cfg";
  std::ofstream(p) << body;
  return p;
}

const char* kSmallRun = "n = 512\nperiod = 128\ndt = 0.5\nt_end = 8\nepsilon = 0.05\nsample_every = 2\n";

} // namespace

TEST(Cli, UnknownSubcommandIsUsageError) {
  EXPECT_EQ(lab("frobnicate").code, 2);
  EXPECT_EQ(lab("").code, 2);
  EXPECT_EQ(lab("--help").code, 0);
}

TEST(Cli, SymbolTableRowCount) {
  const auto r = lab("symbol-table --range -5:5 --step 0.01");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(r.out), 1002u); // header + 1001 rows
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "xi,lambda,d1,d2,d3");
  EXPECT_EQ(lab("symbol-table --range 5:-5").code, 2);
  EXPECT_EQ(lab("symbol-table --symbol nope").code, 2);
}

TEST(Cli, SimulateMissingConfigExitsTwo) {
  const auto dir = scratch("missing");
  const auto r = lab("simulate --config /nonexistent/run.cfg --out '" + dir.string() + "'");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("cannot open"), std::string::npos);
}

TEST(Cli, SimulateRejectsUnknownKeys) {
  const auto dir = scratch("typo");
  const auto cfg = write_config(dir, std::string(kSmallRun) + "epsilonn = 3\n");
  EXPECT_EQ(lab("simulate --config '" + cfg.string() + "' --out '" + (dir / "o").string() + "'").code, 2);
}

TEST(Cli, SimulateWritesDiagnosticsAndManifest) {
  const auto dir = scratch("sim");
  const auto cfg = write_config(dir, kSmallRun);
  const auto out = dir / "o";
  const auto r = lab("simulate --config '" + cfg.string() + "' --out '" + out.string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto diag = slurp(out / "diagnostics.ndjson");
  EXPECT_EQ(count_lines(diag), 5u);
  const auto m = nlohmann::json::parse(slurp(out / "manifest.json"));
  EXPECT_EQ(m["status"], "complete");
  bool found = false;
  for (const auto& f : m["files"])
    if (f["name"] == "diagnostics.ndjson") {
      found = true;
      EXPECT_EQ(f["sha256"], whitham::io::sha256(diag));
    }
  EXPECT_TRUE(found);
  EXPECT_TRUE(fs::exists(out / "snapshot_0000.csv"));
}

TEST(Cli, SimulateOverridesAndEnvironmentOutput) {
  const auto dir = scratch("env");
  const auto cfg = write_config(dir, kSmallRun);
  const auto out = dir / "from_env";
  const auto r = lab("simulate --config '" + cfg.string() + "' --set t_end=4 --set snapshots=none",
                     "WHITHAM_OUT='" + out.string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(slurp(out / "diagnostics.ndjson")), 3u);
  EXPECT_FALSE(fs::exists(out / "snapshot_0000.csv"));
  EXPECT_EQ(lab("simulate --config '" + cfg.string() + "' --set nonsense --out '" + out.string() + "'").code, 2);
}

TEST(Cli, SimulateBlowupWritesPartialManifest) {
  const auto dir = scratch("blowup");
  const auto cfg = write_config(dir, std::string(kSmallRun) + "blowup_factor = 0.5\n");
  const auto r = lab("simulate --config '" + cfg.string() + "' --out '" + (dir / "o").string() + "'");
  EXPECT_EQ(r.code, 1);
  const auto m = nlohmann::json::parse(slurp(dir / "o" / "manifest.json"));
  EXPECT_EQ(m["status"], "partial");
  EXPECT_NE(m["error"].get<std::string>().find("blowup"), std::string::npos);
}

TEST(Cli, ScatteringNeedsPhaseFiles) {
  const auto dir = scratch("scat");
  const auto cfg = write_config(dir, std::string(kSmallRun) + "snapshots = samples\n");
  ASSERT_EQ(lab("simulate --config '" + cfg.string() + "' --out '" + (dir / "o").string() + "'").code, 0);
  EXPECT_EQ(lab("scattering --dir '" + (dir / "o").string() + "'").code, 2);
}

TEST(Cli, ScatteringReport) {
  const auto dir = scratch("scat2");
  const auto cfg = write_config(dir, "n = 1024\nperiod = 512\ndt = 0.25\nt_end = 64\nepsilon = 0.05\n"
                                     "samples = 8, 16, 32, 64\nsnapshots = samples\nphase = on\n");
  const auto out = dir / "o";
  ASSERT_EQ(lab("simulate --config '" + cfg.string() + "' --out '" + out.string() + "'").code, 0);
  const auto r = lab("scattering --dir '" + out.string() + "' --band 1:3");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(slurp(out / "scattering_dyads.ndjson")), 3u);
  EXPECT_EQ(count_lines(slurp(out / "scattering_final.csv")), 1025u);
  EXPECT_NE(r.out.find("\"kappa\""), std::string::npos);
  EXPECT_EQ(lab("scattering --dir '" + out.string() + "' --band 0.01:3").code, 2);
}

TEST(Cli, DecayFitExpectation) {
  const std::string base = "decay-fit --n 4096 --period 2048 --t-range 20:400 --count 8";
  EXPECT_EQ(lab(base + " --expect -0.45:-0.25").code, 0);
  EXPECT_EQ(lab(base + " --expect 0:1").code, 1);
  EXPECT_EQ(lab("decay-fit --n 1024 --period 64 --t-range 10:100").code, 2); // wraparound
}

TEST(Cli, ResonanceCheckCsv) {
  const auto dir = scratch("res");
  const auto r = lab("resonance-check --samples 2000 --four-samples 500 --k-min -2 --k-max 2 --out '" +
                     (dir / "r.csv").string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(slurp(dir / "r.csv")), 1u + 2u + 5u);
}

TEST(Cli, VerifySuites) {
  EXPECT_EQ(lab("verify --suite symbol").code, 0);
  EXPECT_EQ(lab("verify --suite identity").code, 0);
  EXPECT_EQ(lab("verify --suite bogus").code, 2);
}

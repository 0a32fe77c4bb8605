// End-to-end checks of the cavitysim binary: exit codes, file outputs and
// the closure property (a run is reproducible from its summary alone).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kBinary = CAVITYSIM_BIN;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("cavitysim_test_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& args, const fs::path& dir, const std::string& log = "log.txt") {
  const std::string command =
      kBinary + " " + args + " > " + (dir / log).string() + " 2>&1";
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("version string carries the defaults hash") {
  TempDir dir;
  CHECK(run("--version", dir.path) == 0);
  const std::string out = slurp(dir.path / "log.txt");
  CHECK(out.find("cavitysim") != std::string::npos);
  CHECK(out.find("defaults-hash") != std::string::npos);
}

TEST_CASE("derive prints the quoted constants") {
  TempDir dir;
  CHECK(run("--output-dir " + dir.path.string() + " derive", dir.path) == 0);
  const json out = json::parse(slurp(dir.path / "log.txt"));
  CHECK(out.at("finesse").get<double>() == doctest::Approx(1.0134e6).epsilon(1e-3));
  CHECK(out.at("kappa_over_2pi_mhz").get<double>() == doctest::Approx(0.4651).epsilon(1e-3));
  CHECK(out.at("waist_um").get<double>() == doctest::Approx(23.24).epsilon(1e-3));
  CHECK(fs::exists(dir.path / "derive_summary.json"));
}

TEST_CASE("invalid configuration exits 2 without partial outputs") {
  TempDir dir;
  std::ofstream(dir.path / "bad.ini") << "[drive]\nwarp_speed = 11\n";
  const int code = run("--config " + (dir.path / "bad.ini").string() + " --output-dir " +
                           (dir.path / "out").string() + " average",
                       dir.path);
  CHECK(code == 2);
  CHECK_FALSE(fs::exists(dir.path / "out" / "average.csv"));

  CHECK(run("--preset fig9 derive --output-dir " + dir.path.string(), dir.path) == 2);
}

TEST_CASE("numerical failures exit 3") {
  TempDir dir;
  // fit target far above anything the model can reach
  const int code = run("--output-dir " + dir.path.string() +
                           " --set ensemble.n_samples=60 fit-temp --target 0.999",
                       dir.path);
  CHECK(code == 3);
}

TEST_CASE("closure: a run is reproducible from its summary alone") {
  TempDir dir;
  const std::string out1 = (dir.path / "run1").string();
  CHECK(run("--output-dir " + out1 + " --preset fig3 --set ensemble.n_samples=120 average",
            dir.path) == 0);

  const json summary = json::parse(slurp(fs::path(out1) / "average_summary.json"));
  std::ofstream(dir.path / "replay.ini") << summary.at("resolved_config").get<std::string>();

  const std::string out2 = (dir.path / "run2").string();
  CHECK(run("--output-dir " + out2 + " --config " + (dir.path / "replay.ini").string() +
                " average",
            dir.path) == 0);

  CHECK(slurp(fs::path(out1) / "average.csv") == slurp(fs::path(out2) / "average.csv"));
  const json replay_summary = json::parse(slurp(fs::path(out2) / "average_summary.json"));
  CHECK(replay_summary.at("outputs").at("t_rel_mean").get<double>() ==
        summary.at("outputs").at("t_rel_mean").get<double>());
}

TEST_CASE("flag overrides beat the config file") {
  TempDir dir;
  std::ofstream(dir.path / "cfg.ini") << "[drive]\ndelta_pa_mhz = 30\n";
  CHECK(run("--output-dir " + dir.path.string() + " --config " + (dir.path / "cfg.ini").string() +
                " --set drive.delta_pa_mhz=20 --name override derive",
            dir.path) == 0);
  const json summary = json::parse(slurp(dir.path / "override_summary.json"));
  const std::string resolved = summary.at("resolved_config").get<std::string>();
  CHECK(resolved.find("delta_pa_mhz = 20") != std::string::npos);
}

TEST_CASE("environment variable provides the default config path") {
  TempDir dir;
  std::ofstream(dir.path / "env.ini") << "[drive]\ndelta_pa_mhz = 33\n";
  const std::string command = "CAVITYSIM_CONFIG=" + (dir.path / "env.ini").string() + " " +
                              kBinary + " --output-dir " + dir.path.string() +
                              " --name env derive > " + (dir.path / "log.txt").string() + " 2>&1";
  CHECK(WEXITSTATUS(std::system(command.c_str())) == 0);
  const json summary = json::parse(slurp(dir.path / "env_summary.json"));
  CHECK(summary.at("resolved_config").get<std::string>().find("delta_pa_mhz = 33") !=
        std::string::npos);
}

TEST_CASE("transmission subcommand emits the documented columns") {
  TempDir dir;
  CHECK(run("--output-dir " + dir.path.string() +
                " transmission --g-mhz 0,13 --delta-mhz -10:10:3",
            dir.path) == 0);
  std::ifstream csv(dir.path / "transmission.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "g_over_2pi,delta_pa_over_2pi,T_rel,n_photon,atomic_excitation,converged");
  int rows = 0;
  std::string line;
  while (std::getline(csv, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 6);
}

TEST_CASE("trace accepts a scripted event list") {
  TempDir dir;
  std::ofstream(dir.path / "events.json") << R"({
    "probe_on_s": 0.01,
    "duration_s": 0.2,
    "events": [
      {"t_s": 0.05, "kind": "insertion", "node": 0},
      {"t_s": 0.10, "kind": "hop", "node": 18},
      {"t_s": 0.15, "kind": "removal"}
    ]
  })";
  CHECK(run("--output-dir " + dir.path.string() + " --set ensemble.n_samples=150 trace --events " +
                (dir.path / "events.json").string(),
            dir.path) == 0);
  std::ifstream csv(dir.path / "trace.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "t_s,counts,true_rate,node_index");
  // the scripted node change must show up in the node column
  bool saw_hop = false;
  std::string line;
  while (std::getline(csv, line)) {
    if (line.find(",18") != std::string::npos) saw_hop = true;
  }
  CHECK(saw_hop);
}

TEST_CASE("grid-dump emits the documented columns") {
  TempDir dir;
  CHECK(run("--output-dir " + dir.path.string() + " grid-dump --x-um -20:20:5 --z-um 0,0.213",
            dir.path) == 0);
  std::ifstream csv(dir.path / "grid_dump.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "x,y,z,g_over_2pi_MHz,U_dipole_mK,U_lock_mK,stark_MHz");
  int rows = 0;
  std::string line;
  while (std::getline(csv, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 10);
}

TEST_CASE("figure presets run end to end") {
  TempDir dir;
  // reduced sample counts keep this quick; the acceptance suite runs the
  // full-size presets
  CHECK(run("--output-dir " + dir.path.string() + " --preset fig3"
            " --set ensemble.n_samples=150 average",
            dir.path) == 0);
  CHECK(run("--output-dir " + dir.path.string() + " --preset fig5 --name fig5"
            " --set ensemble.n_samples=60 --set sweep.time_step_ms=15"
            " --set sweep.node_average_count=4 sweep --forth-back",
            dir.path) == 0);
  CHECK(run("--output-dir " + dir.path.string() + " --preset fig6 --name fig6"
            " --set ensemble.n_samples=100 --set sweep.time_step_ms=15 sweep --atoms 2",
            dir.path) == 0);
  CHECK(run("--output-dir " + dir.path.string() + " --preset fig7"
            " --set pump.n_trajectories=60 --set pump.n_points=7 pump-map",
            dir.path) == 0);

  // the forth-back sweep writes both directions
  std::ifstream csv(dir.path / "fig5.csv");
  std::string header, first, line;
  std::getline(csv, header);
  std::getline(csv, first);
  std::string last;
  while (std::getline(csv, line)) {
    if (!line.empty()) last = line;
  }
  // the trace returns to the starting position
  const std::string start_y = first.substr(first.find(',') + 1);
  const std::string end_y = last.substr(last.find(',') + 1);
  CHECK(start_y == end_y);
}

TEST_CASE("shipped config files are equivalent to the built-in presets") {
  TempDir dir;
  const fs::path configs = CAVITYSIM_CONFIG_DIR;
  for (const std::string name : {"defaults", "fig3", "fig5", "fig6", "fig7"}) {
    const std::string preset = name == "defaults" ? "" : name;
    const std::string preset_flag = preset.empty() ? "" : (" --preset " + preset);
    CHECK(run("--output-dir " + dir.path.string() + " --name file_" + name + " --config " +
                  (configs / (name + ".ini")).string() + " derive",
              dir.path) == 0);
    CHECK(run("--output-dir " + dir.path.string() + " --name preset_" + name + preset_flag +
                  " derive",
              dir.path) == 0);
    const json from_file = json::parse(slurp(dir.path / ("file_" + name + "_summary.json")));
    const json from_preset = json::parse(slurp(dir.path / ("preset_" + name + "_summary.json")));
    CHECK(from_file.at("resolved_config") == from_preset.at("resolved_config"));
  }
}

TEST_CASE("fit-photon recovers the photon number of a synthetic map") {
  TempDir dir;
  CHECK(run("--output-dir " + dir.path.string() + " --preset fig7"
            " --set pump.n_trajectories=150 --set pump.n_points=9"
            " --set pump.y_min_um=-20 --set pump.y_max_um=20 pump-map",
            dir.path) == 0);
  CHECK(run("--output-dir " + dir.path.string() + " --preset fig7"
            " --set pump.n_trajectories=150 --set pump.n_points=9"
            " --set pump.y_min_um=-20 --set pump.y_max_um=20 fit-photon --input " +
                (dir.path / "pump_map.csv").string(),
            dir.path) == 0);
  const json summary = json::parse(slurp(dir.path / "fit_photon_summary.json"));
  CHECK(summary.at("outputs").at("fitted_n_empty").get<double>() ==
        doctest::Approx(0.02).epsilon(0.15));
}

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eegdec/cli.hpp"
#include "eegdec/eedgenet.hpp"
#include "eegdec/tensor_io.hpp"
#include "selection_fixture.hpp"
#include "test_support.hpp"

using namespace eegdec;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

int spawn(const std::string& args) {
  const std::string cmd = std::string(EEGDEC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

nlohmann::json read_json(const std::filesystem::path& p) { return nlohmann::json::parse(slurp(p)); }

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("process exit codes") {
  test::TempDir dir("cli");
  CHECK(spawn("--help") == kExitOk);
  CHECK(spawn("") == kExitUsage);
  CHECK(spawn("frobnicate") == kExitUsage);
  CHECK(spawn("synth --channels 2") == kExitUsage);
  CHECK(spawn("synth --spec --out " + (dir / "x.csv").string()) == kExitUsage);
  CHECK(spawn("synth --channels 2 --fs 256 --seconds 3 --seed 1 --out " + (dir / "a.csv").string()) == kExitOk);
  CHECK(spawn("select --in " + (dir / "absent.eetf").string()) == kExitDomainError);
}

TEST_CASE("synth writes a deterministic recording") {
  test::TempDir dir("cli");
  const auto a = dir / "a.csv";
  const auto b = dir / "b.csv";
  for (const auto& p : {a, b}) {
    const auto r = cli({"synth", "--channels", "2", "--fs", "256", "--seconds", "3", "--seed", "1", "--out", p.string()});
    REQUIRE(r.code == kExitOk);
  }
  const auto text = slurp(a);
  CHECK(text == slurp(b));
  std::istringstream in(text);
  std::string line, header;
  std::getline(in, header);
  CHECK(header == "t,C1,C2");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 768);

  write_text(dir / "spec.txt", "Fz sine 10 5\nFz noise 1\nCz spike 1.0 80\n");
  const auto r = cli({"synth", "--spec", "--spec-file", (dir / "spec.txt").string(), "--seconds", "2", "--out",
                      (dir / "s.csv").string()});
  CHECK(r.code == kExitOk);
  std::istringstream s(slurp(dir / "s.csv"));
  std::getline(s, header);
  CHECK(header == "t,Fz,Cz");

  const auto usage = cli({"synth", "--spec", "--out", (dir / "x.csv").string()});
  CHECK(usage.code == kExitUsage);
  CHECK(usage.err.find("--spec-file") != std::string::npos);
}

TEST_CASE("fixture, extract, select, infer, bench and stats") {
  test::TempDir dir("cli");
  const auto windows = (dir / "windows.eetf").string();
  const auto features = (dir / "features.eetf").string();

  REQUIRE(cli({"fixture", "--classes", "3", "--per-class", "4", "--channels", "6", "--subjects", "2", "--seed",
               "5", "--out", windows})
              .code == kExitOk);
  const auto wt = read_tensor_file(windows);
  CHECK(wt.shape == std::vector<std::size_t>{12, 6, 384});

  SUBCASE("extract defaults to every catalog feature") {
    const auto r = cli({"--workers", "2", "extract", "--in", windows, "--out", features, "--matrix-dir",
                        (dir / "mats").string()});
    REQUIRE(r.code == kExitOk);
    const auto ft = read_tensor_file(features);
    CHECK(ft.shape == std::vector<std::size_t>{12, 6, 85});
    CHECK(ft.meta.at("labels").size() == 12);
    CHECK(std::filesystem::exists(dir / "mats"));

    const auto sel = cli({"--json", "select", "--in", features, "--target-k", "5", "--out", (dir / "sel.json").string(),
                          "--corr-out", (dir / "corr.eetf").string()});
    CHECK(sel.code == kExitOk);
    const auto rep = nlohmann::json::parse(sel.out);
    CHECK(rep.at("kept").size() <= 5);
    CHECK(read_json(dir / "sel.json") == rep);
    CHECK(read_tensor_file(dir / "corr.eetf").shape == std::vector<std::size_t>{85, 85});
  }

  SUBCASE("extract the top ten features of a selection report") {
    nlohmann::json rep;
    rep["kept"] = test::ten_feature_names();
    write_text(dir / "ten.json", rep.dump());
    const auto r = cli({"extract", "--in", windows, "--features", "10", "--selection", (dir / "ten.json").string(),
                        "--out", features});
    REQUIRE(r.code == kExitOk);
    const auto ft = read_tensor_file(features);
    CHECK(ft.shape == std::vector<std::size_t>{12, 6, 10});
    CHECK(ft.meta.at("feature_names").get<std::vector<std::string>>() == test::ten_feature_names());

    CHECK(cli({"extract", "--in", windows, "--features", "10", "--out", features}).code == kExitUsage);
    CHECK(cli({"extract", "--in", windows, "--features", "11", "--selection", (dir / "ten.json").string(), "--out",
               features})
              .code == kExitDomainError);
    const auto named = cli({"extract", "--in", windows, "--features", "rms,hurst", "--out", features});
    CHECK(named.code == kExitOk);
    CHECK(read_tensor_file(features).shape[2] == 2);
  }

  SUBCASE("infer, bench and stats on a model bundle") {
    ModelConfig mc;
    mc.seq_len = 6;
    mc.in_features = 2;
    mc.feature_names = {"rms", "delta_power"};
    auto bundle = WeightBundle::identity(mc);
    bundle.mutable_tensor("head.bias").data[1] = 3.0f;
    save_bundle(bundle, dir / "m.eewb");

    const auto inf = cli({"--json", "infer", "--bundle", (dir / "m.eewb").string(), "--in", windows, "--out",
                          (dir / "pred.json").string()});
    REQUIRE(inf.code == kExitOk);
    const auto pred = nlohmann::json::parse(inf.out);
    REQUIRE(pred.at("predictions").size() == 12);
    for (const auto& p : pred.at("predictions")) {
      CHECK(p.at("probs").size() == 27);
      CHECK(p.at("label") == 1);
      CHECK(p.at("glyph") == "b");
    }
    CHECK(pred.at("accuracy").get<double>() == doctest::Approx(4.0 / 12.0));

    const auto st = cli({"--json", "stats", "--pred", (dir / "pred.json").string(), "--true", windows, "--runs",
                         "0.8,0.9,0.85", "--confusion-csv", (dir / "conf.csv").string()});
    REQUIRE(st.code == kExitOk);
    const auto metrics = nlohmann::json::parse(st.out);
    CHECK(metrics.at("accuracy").get<double>() == doctest::Approx(1.0 / 3.0));
    CHECK(metrics.at("recall_weighted") == metrics.at("accuracy"));
    CHECK(metrics.contains("run_ci"));
    CHECK(metrics.contains("calibration"));
    CHECK(std::filesystem::exists(dir / "conf.csv"));

    write_text(dir / "truth.json", "[0,1,2,0,1,2,0,1,2,0,1,2]");
    CHECK(cli({"stats", "--pred", (dir / "pred.json").string(), "--true", (dir / "truth.json").string()}).code ==
          kExitOk);
    write_text(dir / "short.json", "[0,1]");
    CHECK(cli({"stats", "--pred", (dir / "pred.json").string(), "--true", (dir / "short.json").string()}).code ==
          kExitDomainError);

    const auto bench = cli({"--json", "bench", "--bundle", (dir / "m.eewb").string(), "--in", windows, "--warmup",
                            "2", "--out", (dir / "timings.json").string()});
    REQUIRE(bench.code == kExitOk);
    const auto timings = nlohmann::json::parse(bench.out);
    CHECK(timings.at("n_windows") == 10);

    write_text(dir / "tegra.txt", std::string(20, ' ') + "\n" + [] {
      std::string s;
      for (int i = 0; i < 10; ++i) s += "RAM 2000/7860MB VDD_IN 5914.9/5910\n";
      return s;
    }());
    const auto energy = cli({"--json", "bench", "--powerlog", (dir / "tegra.txt").string(), "--elapsed-ms", "914.18",
                             "--windows", "1"});
    REQUIRE(energy.code == kExitOk);
    CHECK(nlohmann::json::parse(energy.out).at("energy_mj_per_character").get<double>() ==
          doctest::Approx(5914.9 * 0.91418));
    const auto from_timings =
        cli({"--json", "bench", "--powerlog", (dir / "tegra.txt").string(), "--timings", (dir / "timings.json").string()});
    CHECK(from_timings.code == kExitOk);
  }
}

TEST_CASE("CSV extraction errors surface as domain errors") {
  test::TempDir dir("cli");
  write_text(dir / "rec.csv", "t,A,B\n0,1,2\n");
  write_text(dir / "map.txt", "C3=A\nC4=missing\n");
  const auto r = cli({"extract", "--csv", (dir / "rec.csv").string(), "--mapping", (dir / "map.txt").string(),
                      "--fs", "256", "--out", (dir / "f.eetf").string()});
  CHECK(r.code == kExitDomainError);
  CHECK(r.err.find("MissingColumn") != std::string::npos);

  CHECK(cli({"extract", "--csv", (dir / "rec.csv").string(), "--out", (dir / "f.eetf").string()}).code == kExitUsage);
  CHECK(cli({"--set", "nonsense", "extract", "--in", "x", "--out", "y"}).code == kExitUsage);
  CHECK(cli({"--set", "asr.z=-1", "extract", "--in", "x", "--out", "y"}).code == kExitDomainError);
}

TEST_CASE("CSV recordings go through the same extraction") {
  test::TempDir dir("cli");
  REQUIRE(cli({"synth", "--channels", "4", "--seconds", "3", "--seed", "2", "--out", (dir / "r.csv").string()}).code ==
          kExitOk);
  write_text(dir / "map.txt", "Fz=C1\nCz=C2\nPz=C3\nOz=C4\n");
  write_text(dir / "labels.txt", "a\n26\n");
  const auto r = cli({"extract", "--csv", (dir / "r.csv").string(), "--mapping", (dir / "map.txt").string(), "--fs",
                      "256", "--labels", (dir / "labels.txt").string(), "--subject", "S9", "--out", (dir / "f.eetf").string()});
  REQUIRE(r.code == kExitOk);
  const auto t = read_tensor_file(dir / "f.eetf");
  CHECK(t.shape == std::vector<std::size_t>{2, 4, 85});
  CHECK(t.meta.at("labels").get<std::vector<int>>() == std::vector<int>{0, 26});
}

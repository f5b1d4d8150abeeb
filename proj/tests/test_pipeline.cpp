#include <doctest.h>

#include <fstream>

#include "eegdec/error.hpp"
#include "eegdec/feature_select.hpp"
#include "eegdec/pipeline.hpp"
#include "test_support.hpp"

using namespace eegdec;

namespace {

CharacterWindow sample_window(std::uint64_t seed = 1) {
  ClassDatasetSpec spec;
  spec.n_classes = 3;
  spec.per_class = 1;
  spec.seed = seed;
  return make_class_dataset(spec).front();
}

}  // namespace

TEST_CASE("config file parsing") {
  const auto c = parse_pipeline_config(
      "# comment\n"
      "bandpass.low = 2\n"
      "bandpass.high=40\n"
      "bandpass.order = 6\n"
      "asr.z = 2.5\n"
      "preprocess = false\n"
      "window_seconds = 1.0\n"
      "wavelet = db2\n"
      "features = rms, hjorth_mobility\n"
      "bundle = models/m.eewb\n"
      "seed = 9\n",
      "/base");
  CHECK(c.bandpass.low_hz == 2.0);
  CHECK(c.bandpass.high_hz == 40.0);
  CHECK(c.bandpass.order == 6);
  CHECK(c.asr.z_threshold == 2.5);
  CHECK_FALSE(c.preprocess);
  CHECK(c.window_seconds == 1.0);
  CHECK(c.wavelet == "db2");
  CHECK(c.features == std::vector<std::string>{"rms", "hjorth_mobility"});
  REQUIRE(c.bundle_path.has_value());
  CHECK(*c.bundle_path == std::filesystem::path("/base/models/m.eewb"));
  CHECK(c.seed == 9);

  CHECK(parse_pipeline_config("features = all\n").features.empty());
  CHECK_THROWS_AS(parse_pipeline_config("nonsense = 1\n"), Error);
  CHECK_THROWS_AS(parse_pipeline_config("bandpass.low\n"), Error);
  CHECK_THROWS_AS(parse_pipeline_config("asr.z = abc\n"), Error);
  CHECK_THROWS_AS(parse_pipeline_config("features = rms, bogus\n"), Error);
  CHECK_THROWS_AS(parse_pipeline_config("bandpass.low = 60\n"), Error);
}

TEST_CASE("feature list from a selection report") {
  test::TempDir dir("pipeline");
  SelectionReport rep;
  rep.kept = {{"rms", 0.9}, {"delta_power", 0.8}};
  {
    std::ofstream out(dir / "sel.json");
    out << rep.to_json().dump();
  }
  {
    std::ofstream out(dir / "run.cfg");
    out << "features = @sel.json\n";
  }
  CHECK(load_selection_names(dir / "sel.json") == std::vector<std::string>{"rms", "delta_power"});
  const auto c = load_pipeline_config(dir / "run.cfg");
  CHECK(c.features == std::vector<std::string>{"rms", "delta_power"});
  CHECK_THROWS_AS(load_pipeline_config(dir / "absent.cfg"), Error);
}

TEST_CASE("feature pipeline matches the stage functions") {
  PipelineConfig c;
  c.features = {"rms", "graphical_D2_ellipse_area"};
  const FeaturePipeline p(c);
  const auto w = sample_window();
  const auto pre = p.preprocess(w);
  const auto direct = preprocess_window(w, c.bandpass, c.asr);
  for (std::size_t i = 0; i < 384; ++i) CHECK(pre.data(1, i) == direct.data(1, i));
  const auto fm = p.run(w);
  const auto full = extract_features(direct);
  CHECK(fm.names == c.features);
  CHECK(fm.values(2, 1) == full.values(2, static_cast<std::size_t>(feature_index("graphical_D2_ellipse_area"))));

  c.preprocess = false;
  const FeaturePipeline raw(c);
  CHECK(raw.preprocess(w).data(0, 5) == w.data(0, 5));

  auto other = w;
  other.fs = 128.0;
  CHECK_THROWS_AS(p.preprocess(other), Error);
}

TEST_CASE("model feature names") {
  PipelineConfig c;
  ModelConfig m;
  CHECK(model_feature_names(c, m) == catalog_names());
  m.in_features = 2;
  c.features = {"rms", "mean"};
  CHECK(model_feature_names(c, m) == c.features);
  m.feature_names = {"hurst", "kurtosis"};
  CHECK(model_feature_names(c, m) == m.feature_names);
  m.feature_names.clear();
  c.features = {"rms"};
  CHECK_THROWS_AS(model_feature_names(c, m), Error);
}

TEST_CASE("predict_window is deterministic with positive stage timings") {
  ModelConfig m;
  m.seq_len = 4;
  m.in_features = 3;
  m.feature_names = {"rms", "hjorth_mobility", "delta_power"};
  auto b = WeightBundle::identity(m);
  b.mutable_tensor("head.bias").data[4] = 2.0f;
  const auto p = pipeline_for_model({}, b);
  CHECK(p.feature_indices().size() == 3);
  const auto w = sample_window(3);
  const auto a = predict_window(w, p, b);
  const auto again = predict_window(w, PipelineConfig{}, b);
  CHECK(a.probs == again.probs);
  CHECK(a.label == 4);
  CHECK(a.timing.preprocess_ms > 0.0);
  CHECK(a.timing.features_ms > 0.0);
  CHECK(a.timing.model_ms > 0.0);
  CHECK(a.timing.preprocess_ms + a.timing.features_ms + a.timing.model_ms <= a.timing.total_ms);
}

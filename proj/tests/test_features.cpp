#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "eegdec/error.hpp"
#include "eegdec/features.hpp"
#include "eegdec/features_time.hpp"
#include "test_support.hpp"

using namespace eegdec;

namespace {

CharacterWindow random_window(std::size_t channels, std::uint64_t seed, int label = 3) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 8.0);
  CharacterWindow w;
  w.data = Matrix(channels, 384);
  for (std::size_t c = 0; c < channels; ++c) {
    for (auto& v : w.data.row(c)) v = d(rng);
  }
  w.label = label;
  w.subject_id = "S" + std::to_string(seed % 3);
  w.window_index = static_cast<int>(seed);
  return w;
}

}  // namespace

TEST_CASE("full extraction assembles every family in catalog order") {
  const auto w = random_window(3, 1);
  const auto fm = extract_features(w);
  REQUIRE(fm.n_channels() == 3);
  REQUIRE(fm.n_features() == 85);
  CHECK(fm.names == catalog_names());

  for (std::size_t c = 0; c < 3; ++c) {
    const auto row = w.data.row(c);
    const auto t = time_features(row);
    const double tv[] = {t.mean, t.variance, t.skewness, t.kurtosis, t.rms, t.ssc_count,
                         t.hjorth_mobility, t.hjorth_complexity, t.hurst, t.shannon_entropy,
                         t.sample_entropy, t.permutation_entropy};
    for (int i = 0; i < 12; ++i) CHECK(fm.values(c, static_cast<std::size_t>(i)) == tv[i]);

    const auto f = frequency_features(row, w.fs);
    CHECK(fm.values(c, 12) == f.delta_power);
    CHECK(fm.values(c, 19) == f.spectral_entropy);

    const auto g = graphical_features(row);
    for (std::size_t i = 0; i < 65; ++i) CHECK(fm.values(c, 20 + i) == g[i]);
  }
}

TEST_CASE("subset extraction equals the matching full-extraction columns") {
  const auto w = random_window(4, 2);
  const auto full = extract_features(w);
  const std::vector<int> subset{84, 0, 17, 10, 33, 12};
  const auto part = extract_features(w, {}, subset);
  REQUIRE(part.n_features() == subset.size());
  for (std::size_t j = 0; j < subset.size(); ++j) {
    CHECK(part.names[j] == full.names[static_cast<std::size_t>(subset[j])]);
    for (std::size_t c = 0; c < 4; ++c) CHECK(part.values(c, j) == full.values(c, static_cast<std::size_t>(subset[j])));
  }
  CHECK(indices_for_names({"rms", "graphical_D4_ctm"}) == std::vector<int>{4, 84});
  CHECK_THROWS_AS(indices_for_names({"nope"}), Error);
  CHECK_THROWS_AS(extract_features(w, {}, {85}), Error);
}

TEST_CASE("unsupported decomposition depth is rejected") {
  FeatureOptions opts;
  opts.graphical.levels = 3;
  CHECK_THROWS_AS(extract_features(random_window(1, 3), opts), Error);
}

TEST_CASE("extraction is deterministic and finite") {
  const auto w = random_window(2, 7);
  const auto a = extract_features(w);
  const auto b = extract_features(w);
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t j = 0; j < 85; ++j) {
      CHECK(a.values(c, j) == b.values(c, j));
      CHECK(std::isfinite(a.values(c, j)));
    }
  }
}

TEST_CASE("feature dataset tensor round-trip") {
  test::TempDir dir("features");
  std::vector<CharacterWindow> windows;
  std::vector<FeatureMatrix> feats;
  for (std::uint64_t s = 0; s < 4; ++s) {
    windows.push_back(random_window(3, s, static_cast<int>(s)));
    feats.push_back(extract_features(windows.back(), {}, {0, 4, 12}));
  }
  const auto t = features_to_tensor(feats, windows);
  CHECK(t.shape == std::vector<std::size_t>{4, 3, 3});
  write_tensor_file(dir / "f.eetf", t);
  const auto back_t = read_tensor_file(dir / "f.eetf");
  CHECK(back_t.meta == t.meta);
  const auto back = tensor_to_features(back_t);
  REQUIRE(back.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(back[i].names == feats[i].names);
    for (std::size_t c = 0; c < 3; ++c) {
      for (std::size_t j = 0; j < 3; ++j) CHECK(back[i].values(c, j) == feats[i].values(c, j));
    }
  }
  CHECK(t.meta.at("labels").get<std::vector<int>>() == std::vector<int>{0, 1, 2, 3});
  CHECK_THROWS_AS(features_to_tensor(feats, {windows[0]}), Error);
}

TEST_CASE("single feature matrix file round-trip") {
  test::TempDir dir("features");
  const auto fm = extract_features(random_window(3, 11));
  write_feature_matrix(dir / "m.eetf", fm);
  const auto back = read_feature_matrix(dir / "m.eetf");
  CHECK(back.names == fm.names);
  REQUIRE(back.n_channels() == 3);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t j = 0; j < 85; ++j) CHECK(back.values(c, j) == fm.values(c, j));
  }
  write_feature_matrix_csv(dir / "m.csv", fm);
  std::ifstream csv(dir / "m.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header.find("graphical_D4_ctm") != std::string::npos);
}

TEST_CASE("tensor file format errors") {
  test::TempDir dir("features");
  {
    std::ofstream out(dir / "bad.eetf", std::ios::binary);
    out << "XXXX0000";
  }
  try {
    read_tensor_file(dir / "bad.eetf");
    FAIL("expected BadMagic");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadMagic);
  }

  TensorFile t;
  t.shape = {2, 3};
  t.values = {1, 2, 3, 4, 5, 6};
  write_tensor_file(dir / "ok.eetf", t);
  std::filesystem::resize_file(dir / "ok.eetf", std::filesystem::file_size(dir / "ok.eetf") - 8);
  try {
    read_tensor_file(dir / "ok.eetf");
    FAIL("expected TruncatedPayload");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TruncatedPayload);
  }

  t.values.pop_back();
  CHECK_THROWS_AS(write_tensor_file(dir / "mismatch.eetf", t), Error);
}

TEST_CASE("window tensor round-trip") {
  std::vector<CharacterWindow> windows{random_window(2, 1, 5), random_window(2, 2, 26)};
  windows[1].label.reset();
  const auto back = tensor_to_windows(windows_to_tensor(windows, {"C3", "C4"}));
  REQUIRE(back.size() == 2);
  CHECK(back[0].label == 5);
  CHECK_FALSE(back[1].label.has_value());
  CHECK(back[0].subject_id == windows[0].subject_id);
  CHECK(back[1].data(1, 200) == windows[1].data(1, 200));
  CHECK(back[0].fs == 256.0);
}

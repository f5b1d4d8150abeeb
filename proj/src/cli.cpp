#include "eegdec/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "eegdec/bench.hpp"
#include "eegdec/eedgenet.hpp"
#include "eegdec/error.hpp"
#include "eegdec/evalstats.hpp"
#include "eegdec/feature_select.hpp"
#include "eegdec/features.hpp"
#include "eegdec/parallel.hpp"
#include "eegdec/pipeline.hpp"
#include "eegdec/signal.hpp"
#include "eegdec/tensor_io.hpp"

namespace eegdec {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using nlohmann::json;

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool json_output = false;
  unsigned workers = default_workers();
  PipelineConfig config;
  std::shared_ptr<spdlog::logger> log;
};

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("eegdec", sink);
  logger->set_pattern("[%l] %v");
  logger->set_level(spdlog::level::warn);
  if (const char* lvl = std::getenv("EEGDEC_LOG_LEVEL")) logger->set_level(spdlog::level::from_str(lvl));
  return logger;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
}

// Report JSON goes to --out when given, and to stdout with --json (or when
// there is nowhere else for it to go). Otherwise stdout gets `summary`.
void emit(Context& ctx, const json& report, const std::string& out_path, const std::string& summary,
          bool stdout_default = false) {
  if (!out_path.empty()) write_text(out_path, report.dump(2) + "\n");
  if (ctx.json_output || (out_path.empty() && stdout_default)) {
    ctx.out << report.dump(2) << '\n';
  } else {
    ctx.out << summary << '\n';
  }
}

bool is_tensor_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[4] = {};
  in.read(magic, 4);
  return in && std::string(magic, 4) == "EETF";
}

std::vector<CharacterWindow> load_windows(const std::filesystem::path& path) {
  return tensor_to_windows(read_tensor_file(path));
}

std::vector<int> parse_labels_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<int> labels;
  std::string line;
  while (std::getline(in, line)) {
    line.erase(std::remove_if(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); }), line.end());
    if (line.empty()) continue;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isdigit(c); })) {
      labels.push_back(ClassLabel(std::stoi(line)).index());
    } else if (line.size() == 1) {
      labels.push_back(ClassLabel::from_glyph(line[0]).index());
    } else {
      throw Error(ErrorCode::InvalidArgument, path.string() + ": bad label '" + line + "'");
    }
  }
  return labels;
}

std::vector<int> labels_from_json(const json& j, const std::string& what) {
  const json* arr = &j;
  if (j.is_object()) {
    if (j.contains("labels")) {
      arr = &j["labels"];
    } else if (j.contains("predictions")) {
      std::vector<int> out;
      for (const auto& p : j["predictions"]) out.push_back(p.at("label").get<int>());
      return out;
    } else {
      throw Error(ErrorCode::InvalidArgument, what + ": expected a label array");
    }
  }
  if (!arr->is_array()) throw Error(ErrorCode::InvalidArgument, what + ": expected a label array");
  std::vector<int> out;
  for (const auto& v : *arr) out.push_back(v.is_string() ? ClassLabel::from_glyph(v.get<std::string>().at(0)).index()
                                                         : v.get<int>());
  return out;
}

std::vector<int> load_labels(const std::filesystem::path& path) {
  if (is_tensor_file(path)) {
    std::vector<int> out;
    for (const auto& w : load_windows(path)) {
      if (!w.label) throw Error(ErrorCode::InvalidArgument, path.string() + ": window without a label");
      out.push_back(*w.label);
    }
    return out;
  }
  return labels_from_json(read_json(path), path.string());
}

// --- synth ------------------------------------------------------------------

struct SynthArgs {
  std::size_t channels = 4;
  double fs = 256.0;
  double seconds = 3.0;
  std::uint64_t seed = 1;
  std::string spec_file;
  bool spec = false;
  std::string out;
};

int cmd_synth(Context& ctx, const SynthArgs& a) {
  if (a.spec && a.spec_file.empty()) throw UsageError("--spec requires --spec-file");
  std::vector<SynthChannel> channels;
  if (!a.spec_file.empty()) {
    std::ifstream in(a.spec_file);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + a.spec_file);
    std::stringstream ss;
    ss << in.rdbuf();
    channels = parse_synth_spec(ss.str());
  } else {
    channels = default_synth_channels(a.channels);
  }
  const auto rec = synth_eeg(channels, a.fs, a.seconds, a.seed);
  export_csv(rec, a.out);
  ctx.log->info("wrote {} channels x {} samples to {}", rec.n_channels(), rec.n_samples(), a.out);
  const json report{{"out", a.out}, {"channels", rec.n_channels()}, {"samples", rec.n_samples()}, {"fs", a.fs}};
  emit(ctx, report, "", "wrote " + a.out);
  return kExitOk;
}

// --- fixture ----------------------------------------------------------------

struct FixtureArgs {
  ClassDatasetSpec spec;
  std::string out;
};

int cmd_fixture(Context& ctx, const FixtureArgs& a) {
  const auto windows = make_class_dataset(a.spec);
  std::vector<std::string> names;
  for (std::size_t c = 0; c < a.spec.n_channels; ++c) names.push_back("ch" + std::to_string(c));
  write_tensor_file(a.out, windows_to_tensor(windows, names));
  const json report{{"out", a.out}, {"windows", windows.size()}, {"channels", a.spec.n_channels},
                    {"samples", windows.empty() ? 0 : windows.front().n_samples()}};
  emit(ctx, report, "", "wrote " + std::to_string(windows.size()) + " windows to " + a.out);
  return kExitOk;
}

// --- extract ----------------------------------------------------------------

struct ExtractArgs {
  std::string in, csv, mapping, labels, subject;
  double fs = 256.0;
  std::string features = "all";
  std::string selection;
  std::string out;
  std::string matrix_dir;
};

std::vector<std::string> resolve_feature_list(const std::string& spec, const std::string& selection_path) {
  if (spec == "all") return selection_path.empty() ? std::vector<std::string>{} : load_selection_names(selection_path);
  if (!spec.empty() && std::all_of(spec.begin(), spec.end(), [](unsigned char c) { return std::isdigit(c); })) {
    if (selection_path.empty()) throw UsageError("--features N needs --selection to rank features");
    const auto n = static_cast<std::size_t>(std::stoul(spec));
    auto names = load_selection_names(selection_path);
    if (n == 0 || n > names.size()) {
      throw Error(ErrorCode::InvalidArgument, "selection lists " + std::to_string(names.size()) +
                                                  " features, " + spec + " requested");
    }
    names.resize(n);
    return names;
  }
  PipelineConfig tmp;
  tmp.set("features", spec);
  return tmp.features;
}

int cmd_extract(Context& ctx, const ExtractArgs& a) {
  if (a.in.empty() == a.csv.empty()) throw UsageError("give exactly one of --in or --csv");
  if (!a.csv.empty() && a.mapping.empty()) throw UsageError("--csv needs --mapping");

  std::vector<CharacterWindow> windows;
  if (!a.in.empty()) {
    windows = load_windows(a.in);
  } else {
    const auto rec = ingest_csv(a.csv, load_mapping(a.mapping), a.fs);
    std::optional<std::vector<int>> labels;
    if (!a.labels.empty()) labels = parse_labels_file(a.labels);
    windows = segment_windows(rec, ctx.config.window_seconds, labels);
    if (!a.subject.empty()) {
      for (auto& w : windows) w.subject_id = a.subject;
    }
  }
  if (windows.empty()) throw Error(ErrorCode::NoWindows, "input holds no complete window");

  PipelineConfig cfg = ctx.config;
  if (a.features != "all" || !a.selection.empty() || cfg.features.empty()) {
    cfg.features = resolve_feature_list(a.features, a.selection);
  }
  const FeaturePipeline pipeline(cfg, windows.front().fs);

  std::vector<FeatureMatrix> features(windows.size());
  const auto t0 = std::chrono::steady_clock::now();
  parallel_for(windows.size(), ctx.workers, [&](std::size_t i) { features[i] = pipeline.run(windows[i]); });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ctx.log->info("extracted {} windows in {:.3f} s with {} workers", windows.size(), secs, ctx.workers);

  write_tensor_file(a.out, features_to_tensor(features, windows));
  if (!a.matrix_dir.empty()) {
    std::filesystem::create_directories(a.matrix_dir);
    for (std::size_t i = 0; i < features.size(); ++i) {
      write_feature_matrix(std::filesystem::path(a.matrix_dir) / ("window_" + std::to_string(i) + ".bin"),
                           features[i]);
    }
  }
  const json report{{"out", a.out},
                    {"windows", features.size()},
                    {"channels", features.front().n_channels()},
                    {"features", features.front().n_features()},
                    {"feature_names", features.front().names}};
  emit(ctx, report, "",
       "wrote " + std::to_string(features.size()) + " x " + std::to_string(features.front().n_channels()) + " x " +
           std::to_string(features.front().n_features()) + " features to " + a.out);
  return kExitOk;
}

// --- select -----------------------------------------------------------------

struct SelectArgs {
  std::string in, out, corr_out;
  double neg = -0.4, pos = 0.7;
  int target_k = 0;
  std::string aggregate = "mean";
};

int cmd_select(Context& ctx, const SelectArgs& a) {
  Aggregation mode;
  if (a.aggregate == "mean") {
    mode = Aggregation::Mean;
  } else if (a.aggregate == "fisher") {
    mode = Aggregation::FisherZ;
  } else {
    throw UsageError("--aggregate must be mean or fisher");
  }
  const auto features = tensor_to_features(read_tensor_file(a.in));
  std::vector<CorrelationMatrix> mats(features.size());
  parallel_for(features.size(), ctx.workers, [&](std::size_t i) { mats[i] = window_correlation(features[i]); });
  const auto corr = aggregate_correlations(mats, mode);
  if (!a.corr_out.empty()) write_tensor_file(a.corr_out, correlation_to_tensor(corr));
  const auto report = select_features(corr, {a.neg, a.pos}, a.target_k > 0 ? std::optional<int>(a.target_k) : std::nullopt);
  json j = report.to_json();
  j["n_windows_aggregated"] = corr.n_windows_aggregated;
  std::string summary = "kept " + std::to_string(report.kept.size()) + ":";
  for (const auto& f : report.kept) summary += " " + f.name;
  emit(ctx, j, a.out, summary, true);
  return kExitOk;
}

// --- infer ------------------------------------------------------------------

struct InferArgs {
  std::string bundle, in, out;
};

int cmd_infer(Context& ctx, const InferArgs& a) {
  const auto windows = load_windows(a.in);
  if (windows.empty()) throw Error(ErrorCode::NoWindows, a.in + " holds no windows");
  const auto bundle = load_bundle(a.bundle);
  const auto pipeline = pipeline_for_model(ctx.config, bundle, windows.front().fs);

  std::vector<PredictionResult> results(windows.size());
  parallel_for(windows.size(), ctx.workers,
               [&](std::size_t i) { results[i] = predict_window(windows[i], pipeline, bundle); });

  json preds = json::array();
  std::size_t labelled = 0, correct = 0;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto& r = results[i];
    json p{{"window", windows[i].window_index},
           {"label", r.label},
           {"glyph", std::string(1, ClassLabel(r.label).glyph())},
           {"probs", r.probs}};
    if (windows[i].label) {
      p["true_label"] = *windows[i].label;
      ++labelled;
      if (*windows[i].label == r.label) ++correct;
    }
    preds.push_back(std::move(p));
  }
  json report{{"n_windows", windows.size()}, {"bundle", a.bundle}, {"predictions", preds}};
  std::string summary = std::to_string(windows.size()) + " windows";
  if (labelled > 0) {
    const double acc = static_cast<double>(correct) / static_cast<double>(labelled);
    report["accuracy"] = acc;
    summary += ", accuracy " + std::to_string(acc);
  }
  emit(ctx, report, a.out, summary, true);
  return kExitOk;
}

// --- bench ------------------------------------------------------------------

struct BenchArgs {
  std::string bundle, in, out, csv, powerlog, timings;
  int warmup = 3;
  std::size_t max_windows = 0;
  double interval_ms = 100.0;
  double elapsed_ms = 0.0;
  std::size_t windows = 0;
};

int cmd_bench(Context& ctx, const BenchArgs& a) {
  if (!a.powerlog.empty()) {
    double elapsed_ms = a.elapsed_ms;
    std::size_t n = a.windows;
    if (!a.timings.empty()) {
      const auto t = read_json(a.timings);
      if (elapsed_ms <= 0.0) elapsed_ms = t.at("elapsed_ms").get<double>();
      if (n == 0) n = t.at("n_windows").get<std::size_t>();
    }
    if (elapsed_ms <= 0.0 || n == 0) throw UsageError("energy mode needs --timings or --elapsed-ms and --windows");
    std::ifstream in(a.powerlog);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + a.powerlog);
    const auto log = parse_power_log(in, a.interval_ms);
    const double mj = energy_per_character(log, elapsed_ms / 1000.0, n);
    const json report{{"readings", log.entries.size()},
                      {"skipped_lines", log.skipped_lines},
                      {"mean_power_mw", log.mean_instant_mw()},
                      {"elapsed_s", elapsed_ms / 1000.0},
                      {"n_windows", n},
                      {"energy_mj_per_character", mj}};
    emit(ctx, report, a.out, std::to_string(mj) + " mJ/character");
    return kExitOk;
  }
  if (a.bundle.empty() || a.in.empty()) throw UsageError("bench needs --bundle and --in, or --powerlog");
  auto windows = load_windows(a.in);
  if (a.max_windows > 0 && windows.size() > a.max_windows) windows.resize(a.max_windows);
  if (windows.empty()) throw Error(ErrorCode::NoWindows, a.in + " holds no windows");
  const auto bundle = load_bundle(a.bundle);
  const auto pipeline = pipeline_for_model(ctx.config, bundle, windows.front().fs);
  const auto rep = time_inference(windows, pipeline, bundle, a.warmup);
  if (!a.csv.empty()) write_text(a.csv, rep.samples_csv());
  emit(ctx, rep.to_json(), a.out,
       "mean " + std::to_string(rep.total.mean) + " ms/character over " + std::to_string(rep.n_windows) + " windows");
  return kExitOk;
}

// --- stats ------------------------------------------------------------------

struct StatsArgs {
  std::string pred, truth, out, confusion_csv;
  std::vector<double> runs;
  double level = 0.95;
  int bins = 10;
};

int cmd_stats(Context& ctx, const StatsArgs& a) {
  const json pred = read_json(a.pred);
  const auto y_pred = labels_from_json(pred, a.pred);
  std::vector<int> y_true;
  if (!a.truth.empty()) {
    y_true = load_labels(a.truth);
  } else if (pred.is_object() && pred.contains("predictions")) {
    for (const auto& p : pred["predictions"]) {
      if (!p.contains("true_label")) throw UsageError("predictions lack true labels; pass --true");
      y_true.push_back(p["true_label"].get<int>());
    }
  } else {
    throw UsageError("stats needs --true");
  }
  const auto metrics = classification_metrics(y_true, y_pred);
  json report = metrics.to_json();

  if (pred.is_object() && pred.contains("predictions") && !pred["predictions"].empty() &&
      pred["predictions"][0].contains("probs")) {
    std::vector<double> conf;
    std::vector<bool> hit;
    for (std::size_t i = 0; i < y_pred.size(); ++i) {
      const auto probs = pred["predictions"][i]["probs"].get<std::vector<double>>();
      conf.push_back(std::clamp(*std::max_element(probs.begin(), probs.end()), 0.0, 1.0));
      hit.push_back(y_pred[i] == y_true[i]);
    }
    const auto diag = reliability_diagram(conf, hit, a.bins);
    json bins = json::array();
    for (const auto& b : diag.bins) {
      bins.push_back({{"lo", b.lo}, {"hi", b.hi}, {"mean_confidence", b.mean_confidence},
                      {"accuracy", b.accuracy}, {"count", b.count}});
    }
    report["calibration"] = {{"ece", diag.ece}, {"bins", bins}};
  }
  if (!a.runs.empty()) {
    const auto ci = run_ci(a.runs, a.level);
    report["run_ci"] = {{"level", a.level}, {"mean", ci.mean}, {"half_width", ci.half_width},
                        {"lo", ci.lo},       {"hi", ci.hi}};
  }
  if (!a.confusion_csv.empty()) write_text(a.confusion_csv, metrics.confusion_csv());
  emit(ctx, report, a.out, "accuracy " + std::to_string(metrics.accuracy), true);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"EEG imagined-handwriting decoding engine", "eeg_decode"};
  app.require_subcommand(1);

  bool json_output = false;
  int workers = 0;
  std::string config_path;
  std::vector<std::string> overrides;
  app.add_flag("--json", json_output, "Print the command's report as JSON on stdout");
  app.add_option("--workers", workers, "Worker threads (default: available cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--config", config_path, "Pipeline config file (key = value)");
  app.add_option("--set", overrides, "Config override key=value (repeatable)");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic recording as CSV");
  synth_cmd->add_option("--channels", synth.channels)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--fs", synth.fs)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--seconds", synth.seconds)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--seed", synth.seed);
  synth_cmd->add_option("--spec-file", synth.spec_file, "Component spec, one '<ch> sine|noise|spike ...' per line");
  synth_cmd->add_flag("--spec", synth.spec, "Require the component spec file");
  synth_cmd->add_option("--out", synth.out)->required();

  FixtureArgs fixture;
  auto* fixture_cmd = app.add_subcommand("fixture", "Write the labelled synthetic class dataset");
  fixture_cmd->add_option("--classes", fixture.spec.n_classes)->check(CLI::Range(1, kNumClasses));
  fixture_cmd->add_option("--per-class", fixture.spec.per_class)->check(CLI::PositiveNumber);
  fixture_cmd->add_option("--channels", fixture.spec.n_channels)->check(CLI::PositiveNumber);
  fixture_cmd->add_option("--fs", fixture.spec.fs)->check(CLI::PositiveNumber);
  fixture_cmd->add_option("--seconds", fixture.spec.window_seconds)->check(CLI::PositiveNumber);
  fixture_cmd->add_option("--noise", fixture.spec.noise_sigma)->check(CLI::NonNegativeNumber);
  fixture_cmd->add_option("--subjects", fixture.spec.n_subjects)->check(CLI::PositiveNumber);
  fixture_cmd->add_option("--seed", fixture.spec.seed);
  fixture_cmd->add_option("--out", fixture.out)->required();

  ExtractArgs extract;
  auto* extract_cmd = app.add_subcommand("extract", "Preprocess windows and compute feature matrices");
  extract_cmd->add_option("--in", extract.in, "Window tensor file");
  extract_cmd->add_option("--csv", extract.csv, "Recording CSV");
  extract_cmd->add_option("--mapping", extract.mapping, "channel=column mapping for --csv");
  extract_cmd->add_option("--labels", extract.labels, "One label (index or glyph) per window for --csv");
  extract_cmd->add_option("--subject", extract.subject, "Subject id for --csv windows");
  extract_cmd->add_option("--fs", extract.fs, "Sampling rate of --csv")->check(CLI::PositiveNumber);
  extract_cmd->add_option("--features", extract.features, "all | N (top N of --selection) | name,name,...");
  extract_cmd->add_option("--selection", extract.selection, "Selection report JSON");
  extract_cmd->add_option("--out", extract.out)->required();
  extract_cmd->add_option("--matrix-dir", extract.matrix_dir, "Also write one feature matrix file per window");

  SelectArgs select;
  auto* select_cmd = app.add_subcommand("select", "Correlation-based feature selection");
  select_cmd->add_option("--in", select.in, "Feature dataset file")->required();
  select_cmd->add_option("--out", select.out, "Selection report JSON");
  select_cmd->add_option("--corr-out", select.corr_out, "Aggregated correlation matrix tensor");
  select_cmd->add_option("--neg", select.neg);
  select_cmd->add_option("--pos", select.pos);
  select_cmd->add_option("--target-k", select.target_k)->check(CLI::NonNegativeNumber);
  select_cmd->add_option("--aggregate", select.aggregate, "mean | fisher");

  InferArgs infer;
  auto* infer_cmd = app.add_subcommand("infer", "Predict a class for every window");
  infer_cmd->add_option("--bundle", infer.bundle)->required();
  infer_cmd->add_option("--in", infer.in, "Window tensor file")->required();
  infer_cmd->add_option("--out", infer.out, "Predictions JSON");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Latency benchmark or energy accounting from a power log");
  bench_cmd->add_option("--bundle", bench.bundle);
  bench_cmd->add_option("--in", bench.in, "Window tensor file");
  bench_cmd->add_option("--warmup", bench.warmup)->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--max-windows", bench.max_windows);
  bench_cmd->add_option("--csv", bench.csv, "Raw per-window timings CSV");
  bench_cmd->add_option("--powerlog", bench.powerlog, "tegrastats-style log");
  bench_cmd->add_option("--timings", bench.timings, "Latency report JSON from a previous bench run");
  bench_cmd->add_option("--elapsed-ms", bench.elapsed_ms);
  bench_cmd->add_option("--windows", bench.windows);
  bench_cmd->add_option("--interval-ms", bench.interval_ms)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", bench.out);

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "Classification metrics, calibration and run intervals");
  stats_cmd->add_option("--pred", stats.pred, "Predictions JSON")->required();
  stats_cmd->add_option("--true", stats.truth, "True labels (JSON array or window tensor file)");
  stats_cmd->add_option("--out", stats.out);
  stats_cmd->add_option("--confusion-csv", stats.confusion_csv);
  stats_cmd->add_option("--runs", stats.runs, "Per-run accuracies for a t interval")->delimiter(',');
  stats_cmd->add_option("--level", stats.level)->check(CLI::Range(0.0, 1.0));
  stats_cmd->add_option("--bins", stats.bins)->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Context ctx{out, err, json_output, workers > 0 ? static_cast<unsigned>(workers) : default_workers(), {},
              make_logger(err)};

  try {
    if (!config_path.empty()) ctx.config = load_pipeline_config(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
      ctx.config.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    ctx.config.validate();

    if (*synth_cmd) return cmd_synth(ctx, synth);
    if (*fixture_cmd) return cmd_fixture(ctx, fixture);
    if (*extract_cmd) return cmd_extract(ctx, extract);
    if (*select_cmd) return cmd_select(ctx, select);
    if (*infer_cmd) return cmd_infer(ctx, infer);
    if (*bench_cmd) return cmd_bench(ctx, bench);
    if (*stats_cmd) return cmd_stats(ctx, stats);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  }
  return kExitUsage;
}

}  // namespace eegdec

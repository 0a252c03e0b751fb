// Copyright 2026 The eegpipe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eegpipe/cli.h"

#include <algorithm>
#include <filesystem>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_replace.h"
#include "absl/strings/str_split.h"
#include "eegpipe/binary_io.h"
#include "eegpipe/channel_select.h"
#include "eegpipe/pipeline.h"
#include "eegpipe/report.h"
#include "eegpipe/status_macros.h"
#include "eegpipe/synthgen.h"
#include "json.hpp"

namespace eegpipe {

namespace {

using Json = nlohmann::ordered_json;

std::string Quote(const std::string& s) { return Json(s).dump(); }

std::string HashJson(uint64_t hash) { return Quote(HashToHex(hash)); }

template <typename T>
absl::StatusOr<T> LoadConfig(const std::string& path) {
  if (path.empty()) return T();
  ASSIGN_OR_RETURN(std::string text, ReadFileToString(path));
  auto parsed = T::Parse(text);
  if (!parsed.ok()) {
    return absl::Status(parsed.status().code(),
                        absl::StrCat(path, ": ", parsed.status().message()));
  }
  return parsed;
}

absl::StatusOr<PresetRegistry> LoadPresets(const std::string& path) {
  PresetRegistry registry = PresetRegistry::Default();
  if (!path.empty()) {
    ASSIGN_OR_RETURN(std::string text, ReadFileToString(path));
    RETURN_IF_ERROR(registry.LoadOverrides(text));
  }
  return registry;
}

absl::StatusOr<MontageSpec> LoadMontage(const std::string& name_or_path) {
  if (name_or_path.empty() || absl::AsciiStrToLower(name_or_path) == "tcp") {
    return DefaultTcpMontage();
  }
  ASSIGN_OR_RETURN(std::string text, ReadFileToString(name_or_path));
  return ParseMontage(text,
                      std::filesystem::path(name_or_path).stem().string());
}

absl::StatusOr<ElectrodeAliases> LoadAliases(const std::string& path) {
  if (path.empty()) return ElectrodeAliases::Default();
  ASSIGN_OR_RETURN(std::string text, ReadFileToString(path));
  return ElectrodeAliases::Parse(text);
}

absl::StatusOr<std::vector<double>> LoadThresholds(const std::string& path) {
  ASSIGN_OR_RETURN(std::string text, ReadFileToString(path));
  std::vector<double> grid;
  for (absl::string_view token :
       absl::StrSplit(text, absl::ByAnyChar(",\n\r\t "), absl::SkipEmpty())) {
    if (token == "threshold" || token[0] == '#') continue;
    double v = 0.0;
    if (!absl::SimpleAtod(token, &v)) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ": bad threshold '", token, "'"));
    }
    grid.push_back(v);
  }
  std::sort(grid.begin(), grid.end(), std::greater<>());
  return grid;
}

// Duration of a reference annotation file: its own header line, else the
// EDF recording with the same stem.
absl::StatusOr<EventList> LoadReference(const std::string& dir,
                                        const std::string& stem) {
  const std::string csv = JoinPath(dir, stem + kAnnotationExtension);
  auto events = ReadAnnotationFile(csv);
  if (events.ok()) return events;
  const std::string edf_path = JoinPath(dir, stem + kEdfExtension);
  if (!std::filesystem::exists(edf_path)) return events.status();
  ASSIGN_OR_RETURN(std::string bytes, ReadFileToString(edf_path));
  ASSIGN_OR_RETURN(EdfHeader header, ParseEdfHeader(bytes));
  return ReadAnnotationFile(csv, header.record_count * header.record_duration);
}

absl::StatusOr<std::vector<LabeledRecording>> LoadLabeledDir(
    const std::string& dir) {
  ASSIGN_OR_RETURN(std::vector<std::string> stems,
                   ListStems(dir, kEdfExtension));
  if (stems.empty()) {
    return absl::NotFoundError(absl::StrCat("no EDF files in ", dir));
  }
  std::vector<LabeledRecording> out;
  for (const std::string& stem : stems) {
    ASSIGN_OR_RETURN(Recording rec,
                     ReadEdfRecording(JoinPath(dir, stem + kEdfExtension)));
    ASSIGN_OR_RETURN(
        EventList events,
        ReadAnnotationFile(JoinPath(dir, stem + kAnnotationExtension),
                           rec.duration_seconds()));
    out.push_back({stem, std::move(rec), std::move(events)});
  }
  return out;
}

struct Context {
  std::vector<std::string> args;
  std::ostream* out;
  std::ostream* err;

  std::string ArgsJson() const { return Json(args).dump(); }
};

// synth --------------------------------------------------------------------

struct SynthFlags {
  std::string config, out, prefix = "synth";
  int count = 1;
};

absl::Status RunSynth(const SynthFlags& f, const Context& ctx) {
  ASSIGN_OR_RETURN(SynthConfig base, LoadConfig<SynthConfig>(f.config));
  if (f.count < 1) return absl::InvalidArgumentError("--count must be >= 1");
  RETURN_IF_ERROR(EnsureDirectory(f.out));
  std::vector<std::string> names;
  for (int i = 0; i < f.count; ++i) {
    SynthConfig cfg = base;
    cfg.seed = base.seed + static_cast<uint64_t>(i);
    ASSIGN_OR_RETURN(SynthOutput gen, Generate(cfg));
    const std::string stem = absl::StrFormat("%s_%03d", f.prefix, i);
    RETURN_IF_ERROR(WriteEdfRecording(JoinPath(f.out, stem + kEdfExtension),
                                      gen.recording));
    RETURN_IF_ERROR(
        WriteStringToFile(JoinPath(f.out, stem + kAnnotationExtension),
                          AnnotationFileText(gen.events)));
    names.push_back(stem);
    *ctx.out << stem << ": " << gen.events.size() << " bursts\n";
  }
  return WriteManifest(
      JoinPath(f.out, kManifestName), "synth",
      {{"args", ctx.ArgsJson()},
       {"synth_config", Quote(base.Canonical())},
       {"synth_config_hash", HashJson(Fnv1a64(base.Canonical()))},
       {"recordings", Json(names).dump()}});
}

// features -----------------------------------------------------------------

struct FeaturesFlags {
  std::string montage = "tcp", preset = "ch22", in, out, feature_config,
              presets_file, aliases;
  int threads = 1;
};

absl::Status RunFeatures(const FeaturesFlags& f, const Context& ctx) {
  ASSIGN_OR_RETURN(FeatureConfig cfg,
                   LoadConfig<FeatureConfig>(f.feature_config));
  ASSIGN_OR_RETURN(MontageSpec montage, LoadMontage(f.montage));
  ASSIGN_OR_RETURN(ElectrodeAliases aliases, LoadAliases(f.aliases));
  ASSIGN_OR_RETURN(PresetRegistry registry, LoadPresets(f.presets_file));
  ASSIGN_OR_RETURN(ChannelConfig preset, registry.Get(f.preset));
  ASSIGN_OR_RETURN(std::vector<std::string> stems,
                   ListStems(f.in, kEdfExtension));
  if (stems.empty()) {
    return absl::NotFoundError(absl::StrCat("no EDF files in ", f.in));
  }
  RETURN_IF_ERROR(EnsureDirectory(f.out));
  for (const std::string& stem : stems) {
    ASSIGN_OR_RETURN(Recording rec,
                     ReadEdfRecording(JoinPath(f.in, stem + kEdfExtension)));
    auto tensor =
        RecordingFeatures(rec, montage, aliases, preset, cfg, f.threads);
    if (!tensor.ok()) {
      return absl::Status(tensor.status().code(),
                          absl::StrCat(stem, ": ", tensor.status().message()));
    }
    RETURN_IF_ERROR(WriteStringToFile(JoinPath(f.out, stem + kFeatureExtension),
                                      tensor->Serialize()));
    *ctx.out << stem << ": " << tensor->epochs() << " epochs x "
             << tensor->channels() << " channels\n";
  }
  return WriteManifest(JoinPath(f.out, kManifestName), "features",
                       {{"args", ctx.ArgsJson()},
                        {"feature_config", Quote(cfg.Canonical())},
                        {"feature_config_hash", HashJson(cfg.Hash())},
                        {"montage", Quote(montage.name())},
                        {"preset", Quote(preset.name)},
                        {"channels", Json(preset.members).dump()},
                        {"recordings", Json(stems).dump()}});
}

// train --------------------------------------------------------------------

struct TrainFlags {
  std::string spec, features, labels, out, train_config;
  std::optional<uint64_t> seed;
  int threads = 1;
};

absl::StatusOr<std::vector<std::pair<std::string, FeatureTensor>>>
LoadFeatureDir(const std::string& dir) {
  ASSIGN_OR_RETURN(std::vector<std::string> stems,
                   ListStems(dir, kFeatureExtension));
  if (stems.empty()) {
    return absl::NotFoundError(absl::StrCat("no feature files in ", dir));
  }
  std::vector<std::pair<std::string, FeatureTensor>> out;
  for (const std::string& stem : stems) {
    ASSIGN_OR_RETURN(std::string bytes,
                     ReadFileToString(JoinPath(dir, stem + kFeatureExtension)));
    auto tensor = FeatureTensor::Parse(bytes);
    if (!tensor.ok()) {
      return absl::Status(tensor.status().code(),
                          absl::StrCat(stem, ": ", tensor.status().message()));
    }
    if (!out.empty() &&
        (tensor->channel_labels() != out.front().second.channel_labels() ||
         tensor->config_hash() != out.front().second.config_hash())) {
      return absl::InvalidArgumentError(
          absl::StrCat(stem, ": channel layout or feature config differs"));
    }
    out.emplace_back(stem, *std::move(tensor));
  }
  return out;
}

absl::Status RunTrain(const TrainFlags& f, const Context& ctx) {
  ASSIGN_OR_RETURN(NetworkSpec spec, LoadConfig<NetworkSpec>(f.spec));
  ASSIGN_OR_RETURN(TrainConfig cfg, LoadConfig<TrainConfig>(f.train_config));
  if (f.seed.has_value()) cfg.seed = *f.seed;
  cfg.threads = f.threads;
  ASSIGN_OR_RETURN(auto tensors, LoadFeatureDir(f.features));
  std::vector<LabeledFeatures> data;
  for (const auto& [stem, tensor] : tensors) {
    ASSIGN_OR_RETURN(
        EventList events,
        ReadAnnotationFile(JoinPath(f.labels, stem + kAnnotationExtension),
                           tensor.duration_seconds()));
    data.push_back({&tensor, EpochLabels(events, tensor.epochs())});
  }
  const FeatureTensor& first = tensors.front().second;
  ASSIGN_OR_RETURN(Network net,
                   Network::Create(spec, static_cast<int>(first.channels())));
  ASSIGN_OR_RETURN(TrainResult result, Train(net, data, cfg));
  for (const std::string& w : result.warnings) {
    *ctx.err << "warning: " << w << "\n";
  }
  Checkpoint ckpt{spec, first.channel_labels(), first.config_hash(),
                  std::move(result.weights)};
  const std::string bytes = ckpt.Serialize();
  const std::filesystem::path out_path(f.out);
  if (out_path.has_parent_path()) {
    RETURN_IF_ERROR(EnsureDirectory(out_path.parent_path().string()));
  }
  RETURN_IF_ERROR(WriteStringToFile(f.out, bytes));
  std::string curve = "pass,loss\n";
  for (size_t i = 0; i < result.pass_losses.size(); ++i) {
    absl::StrAppendFormat(&curve, "%d,%.17g\n", i, result.pass_losses[i]);
  }
  RETURN_IF_ERROR(WriteStringToFile(f.out + ".loss.csv", curve));
  *ctx.out << "plan " << net.plan().ToString() << ", "
           << ckpt.weights.params.ParameterCount() << " parameters, loss "
           << result.pass_losses.front() << " -> " << result.pass_losses.back()
           << "\n";
  std::vector<std::string> stems;
  for (const auto& t : tensors) stems.push_back(t.first);
  return WriteManifest(
      f.out + ".manifest.json", "train",
      {{"args", ctx.ArgsJson()},
       {"network_spec", Quote(spec.Canonical())},
       {"network_spec_hash", HashJson(spec.Hash())},
       {"train_config", Quote(cfg.Canonical())},
       {"train_config_hash", HashJson(Fnv1a64(cfg.Canonical()))},
       {"seed", Json(cfg.seed).dump()},
       {"feature_config_hash", HashJson(first.config_hash())},
       {"shape_plan", Quote(net.plan().ToString())},
       {"recordings", Json(stems).dump()},
       {"checkpoint_hash", HashJson(Fnv1a64(bytes))}});
}

// infer --------------------------------------------------------------------

struct InferFlags {
  std::string ckpt, features, out, spec, postprocess;
  int threads = 1;
  int segment_epochs = TrainConfig().segment_epochs;
};

absl::Status RunInfer(const InferFlags& f, const Context& ctx) {
  ASSIGN_OR_RETURN(std::string bytes, ReadFileToString(f.ckpt));
  ASSIGN_OR_RETURN(Checkpoint ckpt, Checkpoint::Parse(bytes));
  if (!f.spec.empty()) {
    ASSIGN_OR_RETURN(NetworkSpec spec, LoadConfig<NetworkSpec>(f.spec));
    if (spec.Hash() != ckpt.spec.Hash()) {
      return absl::FailedPreconditionError(
          absl::StrCat("network spec hash ", HashToHex(spec.Hash()),
                       " does not match checkpoint spec hash ",
                       HashToHex(ckpt.spec.Hash())));
    }
  }
  ASSIGN_OR_RETURN(PostprocessConfig post,
                   LoadConfig<PostprocessConfig>(f.postprocess));
  ASSIGN_OR_RETURN(auto tensors, LoadFeatureDir(f.features));
  ASSIGN_OR_RETURN(
      Network net,
      Network::Create(ckpt.spec, static_cast<int>(ckpt.channel_labels.size())));
  RETURN_IF_ERROR(EnsureDirectory(f.out));
  std::vector<std::string> stems;
  for (const auto& [stem, tensor] : tensors) {
    if (tensor.channel_labels() != ckpt.channel_labels) {
      return absl::FailedPreconditionError(
          absl::StrCat(stem, ": channels differ from the checkpoint's"));
    }
    if (tensor.config_hash() != ckpt.feature_hash) {
      return absl::FailedPreconditionError(absl::StrCat(
          stem, ": feature config hash differs from the checkpoint's"));
    }
    ASSIGN_OR_RETURN(std::vector<double> p, Infer(net, ckpt.weights, tensor,
                                                  f.segment_epochs, f.threads));
    RETURN_IF_ERROR(
        WriteStringToFile(JoinPath(f.out, stem + kPosteriorExtension),
                          PosteriorFileText(p, tensor.duration_seconds())));
    ASSIGN_OR_RETURN(EventList events,
                     ToEvents(p, post, tensor.duration_seconds()));
    RETURN_IF_ERROR(
        WriteStringToFile(JoinPath(f.out, stem + kAnnotationExtension),
                          AnnotationFileText(events)));
    *ctx.out << stem << ": " << events.size() << " events\n";
    stems.push_back(stem);
  }
  return WriteManifest(JoinPath(f.out, kManifestName), "infer",
                       {{"args", ctx.ArgsJson()},
                        {"checkpoint_hash", HashJson(Fnv1a64(bytes))},
                        {"network_spec_hash", HashJson(ckpt.spec.Hash())},
                        {"feature_config_hash", HashJson(ckpt.feature_hash)},
                        {"postprocess", Quote(post.Canonical())},
                        {"segment_epochs", Json(f.segment_epochs).dump()},
                        {"recordings", Json(stems).dump()}});
}

// score --------------------------------------------------------------------

struct ScoreFlags {
  std::string ref, hyp, roc, out, postprocess;
};

absl::Status RunScore(const ScoreFlags& f, const Context& ctx) {
  if (!f.roc.empty() && f.out.empty()) {
    return absl::InvalidArgumentError("--roc requires --out");
  }
  ASSIGN_OR_RETURN(PostprocessConfig post,
                   LoadConfig<PostprocessConfig>(f.postprocess));
  ASSIGN_OR_RETURN(std::vector<std::string> stems,
                   ListStems(f.ref, kAnnotationExtension));
  if (stems.empty()) {
    return absl::NotFoundError(absl::StrCat("no annotation files in ", f.ref));
  }
  std::vector<EventList> refs, hyps;
  for (const std::string& stem : stems) {
    ASSIGN_OR_RETURN(EventList ref, LoadReference(f.ref, stem));
    ASSIGN_OR_RETURN(
        EventList hyp,
        ReadAnnotationFile(JoinPath(f.hyp, stem + kAnnotationExtension),
                           ref.total_duration()));
    refs.push_back(std::move(ref));
    hyps.push_back(std::move(hyp));
  }
  std::vector<ScoredPair> pairs;
  for (size_t i = 0; i < refs.size(); ++i)
    pairs.push_back({&refs[i], &hyps[i]});
  ASSIGN_OR_RETURN(ScoreReport report, Score(pairs));
  if (!f.roc.empty()) {
    ASSIGN_OR_RETURN(std::vector<double> grid, LoadThresholds(f.roc));
    std::vector<RecordingPosteriors> posteriors;
    for (size_t i = 0; i < stems.size(); ++i) {
      ASSIGN_OR_RETURN(
          std::string text,
          ReadFileToString(JoinPath(f.hyp, stems[i] + kPosteriorExtension)));
      ASSIGN_OR_RETURN(auto parsed, ParsePosteriorFile(text));
      posteriors.push_back({std::move(parsed.first), &refs[i]});
    }
    ASSIGN_OR_RETURN(report.roc, RocSweep(posteriors, post, grid));
  }
  const std::string json = ScoreReportJson(
      report, Json({{"postprocess", post.Canonical()},
                    {"postprocess_hash", HashToHex(Fnv1a64(post.Canonical()))}})
                  .dump());
  if (f.out.empty()) {
    *ctx.out << json;
    return absl::OkStatus();
  }
  RETURN_IF_ERROR(EnsureDirectory(f.out));
  RETURN_IF_ERROR(WriteStringToFile(JoinPath(f.out, "report.json"), json));
  if (!report.roc.empty()) {
    RETURN_IF_ERROR(
        WriteStringToFile(JoinPath(f.out, "roc.csv"), RocCsv(report.roc)));
    RETURN_IF_ERROR(
        WriteStringToFile(JoinPath(f.out, "roc.svg"), RocSvg(report.roc)));
  }
  *ctx.out << absl::StrFormat(
      "sensitivity %.2f%%  specificity %.2f%%  FA/24h %.2f\n",
      report.Sensitivity(), report.Specificity(), report.FaPer24h());
  return WriteManifest(JoinPath(f.out, kManifestName), "score",
                       {{"args", ctx.ArgsJson()},
                        {"postprocess", Quote(post.Canonical())},
                        {"recordings", Json(stems).dump()}});
}

// grid ---------------------------------------------------------------------

struct GridFlags {
  std::string presets = "ch22,ch20,ch16,ch8,ch4,ch2", train, test, out, spec,
              train_config, feature_config, postprocess, presets_file;
  std::optional<uint64_t> seed;
  int threads = 1;
};

absl::Status RunGrid(const GridFlags& f, const Context& ctx) {
  ExperimentConfig cfg;
  ASSIGN_OR_RETURN(cfg.network, LoadConfig<NetworkSpec>(f.spec));
  ASSIGN_OR_RETURN(cfg.train, LoadConfig<TrainConfig>(f.train_config));
  ASSIGN_OR_RETURN(cfg.features, LoadConfig<FeatureConfig>(f.feature_config));
  ASSIGN_OR_RETURN(cfg.postprocess,
                   LoadConfig<PostprocessConfig>(f.postprocess));
  if (f.seed.has_value()) cfg.train.seed = *f.seed;
  cfg.threads = f.threads;
  ASSIGN_OR_RETURN(PresetRegistry registry, LoadPresets(f.presets_file));
  std::vector<ChannelConfig> presets;
  for (absl::string_view name :
       absl::StrSplit(f.presets, ',', absl::SkipWhitespace())) {
    ASSIGN_OR_RETURN(ChannelConfig p,
                     registry.Get(absl::StripAsciiWhitespace(name)));
    presets.push_back(std::move(p));
  }
  if (presets.empty()) return absl::InvalidArgumentError("no presets given");
  ASSIGN_OR_RETURN(std::vector<LabeledRecording> train,
                   LoadLabeledDir(f.train));
  ASSIGN_OR_RETURN(std::vector<LabeledRecording> test, LoadLabeledDir(f.test));
  RETURN_IF_ERROR(EnsureDirectory(f.out));

  std::vector<ExperimentResult> results;
  std::string summary_csv =
      "preset,channels,conv_layers,sensitivity,specificity,fa_per_24h,"
      "epoch_auc,roc_area\n";
  for (const ChannelConfig& preset : presets) {
    auto result = RunExperiment(train, test, preset, cfg);
    if (!result.ok()) {
      return absl::Status(
          result.status().code(),
          absl::StrCat(preset.name, ": ", result.status().message()));
    }
    const std::string dir = JoinPath(f.out, preset.name);
    RETURN_IF_ERROR(EnsureDirectory(dir));
    const std::string extra =
        Json({{"preset", preset.name},
              {"channels", preset.members},
              {"shape_plan", result->shape_plan},
              {"epoch_auc", result->epoch_auc},
              {"network_spec_hash", HashToHex(cfg.network.Hash())},
              {"feature_config_hash", HashToHex(cfg.features.Hash())},
              {"train_config_hash", HashToHex(Fnv1a64(cfg.train.Canonical()))}})
            .dump();
    RETURN_IF_ERROR(WriteStringToFile(JoinPath(dir, "report.json"),
                                      ScoreReportJson(result->report, extra)));
    RETURN_IF_ERROR(WriteStringToFile(JoinPath(dir, "roc.csv"),
                                      RocCsv(result->report.roc)));
    RETURN_IF_ERROR(WriteStringToFile(JoinPath(dir, "roc.svg"),
                                      RocSvg(result->report.roc, preset.name)));
    RETURN_IF_ERROR(WriteStringToFile(JoinPath(dir, "model.ckpt"),
                                      result->checkpoint.Serialize()));
    absl::StrAppendFormat(
        &summary_csv, "%s,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", preset.name,
        result->channels, result->conv_layers, result->report.Sensitivity(),
        result->report.Specificity(), result->report.FaPer24h(),
        result->epoch_auc, result->roc_area);
    results.push_back(*std::move(result));
  }
  const std::string table = SummaryTable(results);
  *ctx.out << table;
  RETURN_IF_ERROR(WriteStringToFile(JoinPath(f.out, "summary.txt"), table));
  RETURN_IF_ERROR(
      WriteStringToFile(JoinPath(f.out, "summary.csv"), summary_csv));
  std::vector<std::string> names;
  for (const auto& p : presets) names.push_back(p.name);
  return WriteManifest(JoinPath(f.out, kManifestName), "grid",
                       {{"args", ctx.ArgsJson()},
                        {"presets", Json(names).dump()},
                        {"network_spec", Quote(cfg.network.Canonical())},
                        {"network_spec_hash", HashJson(cfg.network.Hash())},
                        {"train_config", Quote(cfg.train.Canonical())},
                        {"feature_config", Quote(cfg.features.Canonical())},
                        {"feature_config_hash", HashJson(cfg.features.Hash())},
                        {"postprocess", Quote(cfg.postprocess.Canonical())},
                        {"seed", Json(cfg.train.seed).dump()}});
}

std::string EnvName(const std::string& flag) {
  return "EEGPIPE_" +
         absl::AsciiStrToUpper(absl::StrReplaceAll(flag, {{"-", "_"}}));
}

void BindEnvironment(CLI::App& app) {
  for (CLI::App* sub : app.get_subcommands({})) {
    for (CLI::Option* opt : sub->get_options()) {
      const std::string name = opt->get_single_name();
      if (name.empty() || name == "help") continue;
      opt->envname(EnvName(name));
    }
  }
}

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  if (status.ok()) return kExitOk;
  return status.code() == absl::StatusCode::kInternal ? kExitNumericFailure
                                                      : kExitDataError;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app("EEG seizure detection pipeline", "eegpipe");
  app.require_subcommand(1);

  SynthFlags synth;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "Generate a synthetic EDF + CSV dataset");
  synth_cmd->add_option("--config", synth.config,
                        "Synth config (key=value or JSON)");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--count", synth.count, "Number of recordings");
  synth_cmd->add_option("--prefix", synth.prefix, "File name prefix");

  FeaturesFlags features;
  CLI::App* features_cmd =
      app.add_subcommand("features", "Compute feature tensors");
  features_cmd->add_option("--montage", features.montage,
                           "'tcp' or a montage file");
  features_cmd->add_option("--preset", features.preset, "Channel preset");
  features_cmd->add_option("--in", features.in, "Directory of EDF files")
      ->required();
  features_cmd->add_option("--out", features.out, "Output directory")
      ->required();
  features_cmd->add_option("--feature-config", features.feature_config,
                           "Feature config file");
  features_cmd->add_option("--presets-file", features.presets_file,
                           "Preset overrides");
  features_cmd->add_option("--aliases", features.aliases,
                           "Electrode alias file");
  features_cmd->add_option("--threads", features.threads, "Worker threads");

  TrainFlags train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a detector");
  train_cmd->add_option("--spec", train.spec, "Network spec file");
  train_cmd->add_option("--features", train.features, "Feature directory")
      ->required();
  train_cmd->add_option("--labels", train.labels, "Annotation directory")
      ->required();
  train_cmd->add_option("--seed", train.seed, "Training seed");
  train_cmd->add_option("--out", train.out, "Checkpoint path")->required();
  train_cmd->add_option("--train-config", train.train_config,
                        "Training config file");
  train_cmd->add_option("--threads", train.threads, "Worker threads");

  InferFlags infer;
  CLI::App* infer_cmd =
      app.add_subcommand("infer", "Compute posteriors and hypothesis events");
  infer_cmd->add_option("--ckpt", infer.ckpt, "Checkpoint path")->required();
  infer_cmd->add_option("--features", infer.features, "Feature directory")
      ->required();
  infer_cmd->add_option("--out", infer.out, "Output directory")->required();
  infer_cmd->add_option("--spec", infer.spec, "Expected network spec file");
  infer_cmd->add_option("--postprocess", infer.postprocess,
                        "Postprocess config file");
  infer_cmd->add_option("--segment-epochs", infer.segment_epochs,
                        "LSTM segment length");
  infer_cmd->add_option("--threads", infer.threads, "Worker threads");

  ScoreFlags score;
  CLI::App* score_cmd =
      app.add_subcommand("score", "Score hypotheses against references");
  score_cmd->add_option("--ref", score.ref, "Reference annotation directory")
      ->required();
  score_cmd->add_option("--hyp", score.hyp, "Hypothesis directory")->required();
  score_cmd->add_option("--roc", score.roc, "Threshold grid CSV");
  score_cmd->add_option("--out", score.out, "Report directory");
  score_cmd->add_option("--postprocess", score.postprocess,
                        "Postprocess config file");

  GridFlags grid;
  CLI::App* grid_cmd =
      app.add_subcommand("grid", "Run the channel-configuration grid");
  grid_cmd->add_option("--presets", grid.presets, "Comma-separated presets");
  grid_cmd->add_option("--train", grid.train, "Training EDF + CSV directory")
      ->required();
  grid_cmd->add_option("--test", grid.test, "Test EDF + CSV directory")
      ->required();
  grid_cmd->add_option("--out", grid.out, "Output directory")->required();
  grid_cmd->add_option("--spec", grid.spec, "Network spec file");
  grid_cmd->add_option("--train-config", grid.train_config,
                       "Training config file");
  grid_cmd->add_option("--feature-config", grid.feature_config,
                       "Feature config file");
  grid_cmd->add_option("--postprocess", grid.postprocess,
                       "Postprocess config file");
  grid_cmd->add_option("--presets-file", grid.presets_file, "Preset overrides");
  grid_cmd->add_option("--seed", grid.seed, "Training seed");
  grid_cmd->add_option("--threads", grid.threads, "Worker threads");

  BindEnvironment(app);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const Context ctx{args, &out, &err};
  absl::Status status;
  if (*synth_cmd) status = RunSynth(synth, ctx);
  if (*features_cmd) status = RunFeatures(features, ctx);
  if (*train_cmd) status = RunTrain(train, ctx);
  if (*infer_cmd) status = RunInfer(infer, ctx);
  if (*score_cmd) status = RunScore(score, ctx);
  if (*grid_cmd) status = RunGrid(grid, ctx);
  if (!status.ok()) err << "error: " << status << "\n";
  return ExitCodeFor(status);
}

}  // namespace eegpipe

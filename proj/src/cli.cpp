// Copyright 2026 the f0kit authors
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

#include "f0kit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "f0kit/audio.hpp"
#include "f0kit/corpus.hpp"
#include "f0kit/errors.hpp"
#include "f0kit/metrics.hpp"
#include "f0kit/trajectory.hpp"
#include "io_util.hpp"

namespace f0kit::cli {

namespace fs = std::filesystem;
using nlohmann::json;

const char* const kRawTrackSuffix = ".f0.json";
const char* const kLogTrackSuffix = ".logf0.json";

namespace {

std::string with_id(const std::string& id, const std::exception& e) {
  return "utterance \"" + id + "\": " + e.what();
}

// Re-throws per-utterance failures with the utterance id prepended, keeping
// the concrete error type so callers and diagnostics still see it.
template <typename Fn>
auto for_utterance(const std::string& id, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const MalformedWav& e) {
    throw MalformedWav(with_id(id, e));
  } catch (const UnsupportedFormat& e) {
    throw UnsupportedFormat(with_id(id, e));
  } catch (const IoError& e) {
    throw IoError(with_id(id, e));
  } catch (const TooShort& e) {
    throw TooShort(with_id(id, e));
  } catch (const AllUnvoiced& e) {
    throw AllUnvoiced(with_id(id, e));
  } catch (const InvalidFraming& e) {
    throw InvalidFraming(with_id(id, e));
  } catch (const OutOfSanityBounds& e) {
    throw OutOfSanityBounds(with_id(id, e));
  } catch (const EmptyInput& e) {
    throw EmptyInput(with_id(id, e));
  } catch (const LengthMismatch& e) {
    throw LengthMismatch(with_id(id, e));
  } catch (const HopMismatch& e) {
    throw HopMismatch(with_id(id, e));
  } catch (const DimensionMismatch& e) {
    throw DimensionMismatch(with_id(id, e));
  }
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create directory " + dir + ": " + ec.message());
  }
}

void write_json(const std::string& path, const json& doc) {
  ioutil::write_file(path, doc.dump() + "\n");
}

// CSV reports get a JSON twin for tooling: foo.csv -> foo.json, anything
// else gets ".json" appended.
std::string json_twin(const std::string& out) {
  fs::path p(out);
  if (p.extension() == ".csv") {
    p.replace_extension(".json");
    return p.string();
  }
  return out + ".json";
}

// Loads any track file as a linear-Hz F0Track; log trajectories are
// exponentiated and keep their voiced mask.
F0Track load_as_f0(const std::string& path) {
  if (is_log_track_file(path)) {
    const LogF0Track log_track = load_log_track(path);
    F0Track track;
    track.hop_s = log_track.hop_s;
    track.values_hz.resize(log_track.size());
    track.voiced = log_track.voiced_mask;
    for (std::size_t i = 0; i < log_track.size(); ++i) {
      track.values_hz[i] =
          log_track.voiced_mask[i] ? std::exp(log_track.values_log[i]) : 0.0;
    }
    return track;
  }
  return load_f0_track(path);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> discover_tracks(
    const std::string& dir) {
  if (!fs::is_directory(dir)) {
    throw IoError(dir + " is not a directory");
  }
  std::map<std::string, std::string> by_id;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) {
      continue;
    }
    const std::string name = entry.path().filename().string();
    std::string id;
    if (name.size() > std::string(kLogTrackSuffix).size() &&
        name.ends_with(kLogTrackSuffix)) {
      id = name.substr(0, name.size() - std::string(kLogTrackSuffix).size());
    } else if (name.size() > std::string(kRawTrackSuffix).size() &&
               name.ends_with(kRawTrackSuffix)) {
      id = name.substr(0, name.size() - std::string(kRawTrackSuffix).size());
    } else {
      continue;
    }
    auto [it, inserted] = by_id.emplace(id, entry.path().string());
    if (!inserted) {
      throw ParseError("directory " + dir + " holds two track files for id \"" +
                       id + "\"");
    }
  }
  return {by_id.begin(), by_id.end()};
}

std::string format_csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

SpeakerStats load_stats_file(const std::string& path) {
  json doc;
  try {
    doc = json::parse(ioutil::read_file(path));
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("schema_version") ||
      !doc["schema_version"].is_number_integer()) {
    throw ParseError(path + ": missing integer schema_version");
  }
  if (doc["schema_version"].get<int>() != 1) {
    throw SchemaVersionMismatch(path + ": schema_version " +
                                std::to_string(doc["schema_version"].get<int>()) +
                                ", expected 1");
  }
  SpeakerStats stats;
  try {
    stats.mean_hz = doc.at("mean_hz").get<double>();
    stats.variance_hz2 = doc.at("variance_hz2").get<double>();
    stats.n_frames = doc.at("n_frames").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (!(stats.mean_hz > 0.0) || !std::isfinite(stats.mean_hz) ||
      stats.variance_hz2 < 0.0 || stats.n_frames == 0) {
    throw ParseError(path + ": implausible speaker statistics");
  }
  return stats;
}

void cmd_extract(const ExtractOptions& opt) {
  const Corpus corpus = load_manifest(opt.manifest);
  if (corpus.utterances.empty()) {
    throw EmptyCorpus("manifest " + opt.manifest + " lists no utterances");
  }
  ensure_dir(opt.out_dir);

  std::map<std::string, std::vector<F0Track>> per_speaker;
  for (const Utterance& utt : corpus.utterances) {
    const F0Track track = for_utterance(utt.id, [&] {
      return extract_f0(load_wav(utt.audio_path), opt.pitch);
    });
    save_track((fs::path(opt.out_dir) / (utt.id + kRawTrackSuffix)).string(),
               track);
    per_speaker[utt.speaker_id].push_back(track);
  }

  json speakers = json::object();
  for (const auto& [speaker, tracks] : per_speaker) {
    json entry;
    entry["role"] = role_name(corpus.speakers.at(speaker));
    entry["n_utterances"] = tracks.size();
    std::uint64_t voiced = 0;
    for (const F0Track& t : tracks) {
      for (std::uint8_t flag : t.voiced) {
        voiced += flag != 0;
      }
    }
    entry["voiced_frames"] = voiced;
    if (voiced > 0) {
      const SpeakerStats stats =
          speaker_stats(std::span<const F0Track>(tracks));
      entry["mean_hz"] = stats.mean_hz;
      entry["variance_hz2"] = stats.variance_hz2;
    } else {
      entry["mean_hz"] = nullptr;
      entry["variance_hz2"] = nullptr;
    }
    speakers[speaker] = std::move(entry);
  }

  json summary;
  summary["schema_version"] = 1;
  summary["hop_s"] = opt.pitch.hop_s;
  summary["n_utterances"] = corpus.utterances.size();
  summary["speakers"] = std::move(speakers);
  write_json((fs::path(opt.out_dir) / "summary.json").string(), summary);
}

void cmd_compare(const CompareOptions& opt) {
  const auto tracks_a = discover_tracks(opt.dir_a);
  const auto tracks_b = discover_tracks(opt.dir_b);

  std::map<std::string, std::string> map_b(tracks_b.begin(), tracks_b.end());
  std::vector<std::string> only_a, only_b;
  std::vector<std::pair<std::string, std::pair<std::string, std::string>>>
      matched;
  for (const auto& [id, path] : tracks_a) {
    auto it = map_b.find(id);
    if (it == map_b.end()) {
      only_a.push_back(id);
    } else {
      matched.push_back({id, {path, it->second}});
      map_b.erase(it);
    }
  }
  for (const auto& [id, path] : map_b) {
    only_b.push_back(id);
  }
  if (!only_a.empty() || !only_b.empty()) {
    std::string msg = "track ids do not match;";
    if (!only_a.empty()) {
      msg += " only in " + opt.dir_a + ":";
      for (const auto& id : only_a) msg += " " + id;
      msg += ";";
    }
    if (!only_b.empty()) {
      msg += " only in " + opt.dir_b + ":";
      for (const auto& id : only_b) msg += " " + id;
    }
    throw IdMismatch(msg);
  }
  if (matched.empty()) {
    throw EmptyInput("no track files to compare in " + opt.dir_a);
  }

  std::string csv = "id,n_frames,rmse_hz,rmse_log,correlation\n";
  json rows = json::array();
  double sum_hz = 0.0, sum_log = 0.0, sum_corr = 0.0;
  for (const auto& [id, paths] : matched) {
    const ComparisonReport report = for_utterance(id, [&] {
      LogF0Track a = load_track_as_log(paths.first);
      LogF0Track b = load_track_as_log(paths.second);
      // Different pipeline stages legitimately disagree on trailing frame
      // counts (windowed extraction stops early); score the common prefix.
      const std::size_t n = std::min(a.size(), b.size());
      if (n == 0) {
        throw EmptyInput("empty track");
      }
      a.values_log.resize(n);
      a.voiced_mask.resize(n);
      b.values_log.resize(n);
      b.voiced_mask.resize(n);
      return compare(a, b);
    });
    sum_hz += report.rmse_hz;
    sum_log += report.rmse_log;
    sum_corr += report.correlation;
    csv += id + "," + std::to_string(report.n_frames) + "," +
           format_csv_number(report.rmse_hz) + "," +
           format_csv_number(report.rmse_log) + "," +
           format_csv_number(report.correlation) + "\n";
    rows.push_back({{"id", id},
                    {"n_frames", report.n_frames},
                    {"rmse_hz", report.rmse_hz},
                    {"rmse_log", report.rmse_log},
                    {"correlation", report.correlation}});
  }
  const double inv = 1.0 / static_cast<double>(matched.size());
  csv += "mean,," + format_csv_number(sum_hz * inv) + "," +
         format_csv_number(sum_log * inv) + "," +
         format_csv_number(sum_corr * inv) + "\n";

  ioutil::write_file(opt.out, csv);
  json doc;
  doc["schema_version"] = 1;
  doc["rows"] = std::move(rows);
  doc["mean"] = {{"rmse_hz", sum_hz * inv},
                 {"rmse_log", sum_log * inv},
                 {"correlation", sum_corr * inv}};
  write_json(json_twin(opt.out), doc);
}

namespace {

struct PooledSample {
  std::vector<double> values;  // every interpolated log-F0 frame
  std::vector<double> deltas;  // forward differences per track
};

PooledSample pool_directory(const std::string& dir) {
  PooledSample pooled;
  for (const auto& [id, path] : discover_tracks(dir)) {
    const LogF0Track track = load_track_as_log(path);
    pooled.values.insert(pooled.values.end(), track.values_log.begin(),
                         track.values_log.end());
    if (track.size() >= 2) {
      const DeltaTrack d = delta(track);
      pooled.deltas.insert(pooled.deltas.end(), d.values.begin(),
                           d.values.end());
    }
  }
  if (pooled.values.empty()) {
    throw EmptyInput("no track frames found in " + dir);
  }
  if (pooled.deltas.empty()) {
    throw EmptyInput("no multi-frame tracks in " + dir +
                     " to form delta distributions");
  }
  return pooled;
}

// Histogram range of the reference sample; a degenerate (constant) sample
// widens to an arbitrary unit window so the edges stay strictly increasing.
std::pair<double, double> sample_range(const std::vector<double>& values) {
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (!(hi - lo > 1e-12)) {
    lo -= 0.5;
    hi += 0.5;
  }
  return {lo, hi};
}

}  // namespace

void cmd_dist(const DistOptions& opt) {
  if (opt.system_dirs.empty()) {
    throw ConfigOutOfRange("dist needs at least one system directory");
  }
  const PooledSample target = pool_directory(opt.target_dir);
  const auto [f0_lo, f0_hi] = sample_range(target.values);
  const auto [d_lo, d_hi] = sample_range(target.deltas);

  const F0Distribution target_f0 = build_distribution(
      target.values, opt.bins, f0_lo, f0_hi, opt.epsilon);
  const F0Distribution target_delta = build_distribution(
      target.deltas, opt.bins, d_lo, d_hi, opt.epsilon);

  std::string csv = "system,kld_f0,kld_delta\n";
  json rows = json::array();
  for (const std::string& dir : opt.system_dirs) {
    const PooledSample system = pool_directory(dir);
    const F0Distribution system_f0 = build_distribution(
        system.values, opt.bins, f0_lo, f0_hi, opt.epsilon);
    const F0Distribution system_delta = build_distribution(
        system.deltas, opt.bins, d_lo, d_hi, opt.epsilon);
    const double kld_f0 = kld(target_f0, system_f0);
    const double kld_delta = kld(target_delta, system_delta);
    csv += dir + "," + format_csv_number(kld_f0) + "," +
           format_csv_number(kld_delta) + "\n";
    rows.push_back(
        {{"system", dir}, {"kld_f0", kld_f0}, {"kld_delta", kld_delta}});
  }

  ioutil::write_file(opt.out, csv);
  json doc;
  doc["schema_version"] = 1;
  doc["bins"] = opt.bins;
  doc["epsilon"] = opt.epsilon;
  doc["target"] = opt.target_dir;
  doc["rows"] = std::move(rows);
  write_json(json_twin(opt.out), doc);
}

void cmd_synth_traj(const SynthTrajOptions& opt) {
  LogF0Track track;
  if (opt.kind == "flat") {
    if (!(opt.f0_hz > 0.0)) {
      throw ConfigOutOfRange("flat level must be positive Hz");
    }
    track = gen_flat(opt.n_frames, opt.hop_s, std::log(opt.f0_hz));
  } else if (opt.kind == "sine") {
    if (!(opt.f0_hz > 0.0)) {
      throw ConfigOutOfRange("sine center must be positive Hz");
    }
    track = gen_sine(opt.n_frames, opt.hop_s, std::log(opt.f0_hz),
                     opt.amplitude_log, opt.period_frames);
  } else if (opt.kind == "linear") {
    if (!(opt.start_hz > 0.0) || !(opt.end_hz > 0.0)) {
      throw ConfigOutOfRange("linear endpoints must be positive Hz");
    }
    track = gen_linear(opt.n_frames, opt.hop_s, std::log(opt.start_hz),
                       std::log(opt.end_hz));
  } else {
    throw ConfigOutOfRange("unknown trajectory kind \"" + opt.kind +
                           "\" (expected flat, sine or linear)");
  }
  save_track(opt.out, track);
}

void cmd_train(const TrainOptions& opt) {
  const Corpus corpus = load_manifest(opt.manifest);
  if (corpus.utterances.empty()) {
    throw EmptyCorpus("manifest " + opt.manifest + " lists no utterances");
  }

  std::set<std::string> phoneme_set;
  for (const Utterance& utt : corpus.utterances) {
    for (const PhoneInterval& phone : utt.phones) {
      phoneme_set.insert(phone.symbol);
    }
  }
  const std::vector<std::string> phonemes(phoneme_set.begin(),
                                          phoneme_set.end());
  std::vector<std::string> speakers;
  for (const auto& [speaker, role] : corpus.speakers) {
    speakers.push_back(speaker);
  }

  std::vector<TrainingPair> pairs;
  for (const Utterance& utt : corpus.utterances) {
    const std::size_t speaker_index = static_cast<std::size_t>(
        std::find(speakers.begin(), speakers.end(), utt.speaker_id) -
        speakers.begin());
    TrainingPair pair;
    pair.id = utt.id;
    pair.is_target =
        corpus.speakers.at(utt.speaker_id) == SpeakerRole::kTarget;
    for_utterance(utt.id, [&] {
      const F0Track raw = extract_f0(load_wav(utt.audio_path), opt.pitch);
      pair.oracle = interpolate(raw);
      pair.features = featurize(utt, opt.pitch.hop_s, phonemes, speaker_index,
                                speakers.size());
      // The windowed extractor stops a few frames before the alignment end;
      // train on the prefix both sides cover.
      const std::size_t n = std::min(pair.features.n_frames,
                                     pair.oracle.size());
      if (n == 0) {
        throw TooShort("no frames shared by features and oracle");
      }
      pair.features.n_frames = n;
      pair.features.values.resize(n * pair.features.dim);
      pair.oracle.values_log.resize(n);
      pair.oracle.voiced_mask.resize(n);
      return 0;
    });
    pairs.push_back(std::move(pair));
  }

  TrainResult result = train(pairs, opt.train);
  result.model.phonemes = phonemes;
  result.model.speakers = speakers;
  save_model(opt.model_out, result.model);

  std::string loss_path = opt.loss_out;
  if (loss_path.empty()) {
    fs::path p(opt.model_out);
    const std::string stem = p.stem().string();
    p.replace_filename(stem + "_loss.csv");
    loss_path = p.string();
  }
  std::string csv = "step,loss\n";
  for (std::size_t step = 0; step < result.loss_curve.size(); ++step) {
    csv += std::to_string(step) + "," +
           format_csv_number(result.loss_curve[step]) + "\n";
  }
  ioutil::write_file(loss_path, csv);
}

void cmd_predict(const PredictOptions& opt) {
  const PredictorModel model = load_model(opt.model_path);
  const Corpus corpus = load_manifest(opt.manifest);
  if (corpus.utterances.empty()) {
    throw EmptyCorpus("manifest " + opt.manifest + " lists no utterances");
  }
  ensure_dir(opt.out_dir);

  for (const Utterance& utt : corpus.utterances) {
    const auto it =
        std::find(model.speakers.begin(), model.speakers.end(),
                  utt.speaker_id);
    if (it == model.speakers.end()) {
      throw UnknownSpeaker("utterance \"" + utt.id + "\": speaker \"" +
                           utt.speaker_id + "\" is not in the model");
    }
    const std::size_t speaker_index =
        static_cast<std::size_t>(it - model.speakers.begin());
    const LogF0Track pred = for_utterance(utt.id, [&] {
      const FrameFeatures features =
          featurize(utt, model.hop_s, model.phonemes, speaker_index,
                    model.speakers.size());
      return predict(model, features);
    });
    save_track((fs::path(opt.out_dir) / (utt.id + kLogTrackSuffix)).string(),
               pred);
  }
}

void cmd_rescale(const RescaleOptions& opt) {
  const SpeakerStats source = load_stats_file(opt.source_stats);
  const SpeakerStats target = load_stats_file(opt.target_stats);
  const auto tracks = discover_tracks(opt.track_dir);
  if (tracks.empty()) {
    throw EmptyInput("no track files in " + opt.track_dir);
  }
  ensure_dir(opt.out_dir);
  for (const auto& [id, path] : tracks) {
    const LogF0Track shifted =
        rescale_to_target(load_track_as_log(path), source, target);
    save_track((fs::path(opt.out_dir) / (id + kLogTrackSuffix)).string(),
               shifted);
  }
}

void cmd_stats(const StatsOptions& opt) {
  auto tracks = discover_tracks(opt.track_dir);
  if (!opt.speaker.empty()) {
    if (opt.manifest.empty()) {
      throw ConfigOutOfRange("--speaker needs --manifest to map utterances");
    }
    const Corpus corpus = load_manifest(opt.manifest);
    if (corpus.speakers.find(opt.speaker) == corpus.speakers.end()) {
      throw UnknownSpeaker("speaker \"" + opt.speaker +
                           "\" is not in the manifest");
    }
    std::set<std::string> keep;
    for (const Utterance& utt : corpus.utterances) {
      if (utt.speaker_id == opt.speaker) {
        keep.insert(utt.id);
      }
    }
    std::erase_if(tracks, [&](const auto& id_path) {
      return keep.find(id_path.first) == keep.end();
    });
  }
  if (tracks.empty()) {
    throw EmptyInput("no track files selected in " + opt.track_dir);
  }

  std::vector<F0Track> loaded;
  loaded.reserve(tracks.size());
  for (const auto& [id, path] : tracks) {
    loaded.push_back(load_as_f0(path));
  }
  const SpeakerStats stats =
      speaker_stats(std::span<const F0Track>(loaded));

  json doc;
  doc["schema_version"] = 1;
  doc["mean_hz"] = stats.mean_hz;
  doc["variance_hz2"] = stats.variance_hz2;
  doc["n_frames"] = stats.n_frames;
  doc["n_tracks"] = tracks.size();
  if (!opt.speaker.empty()) {
    doc["speaker"] = opt.speaker;
  }
  write_json(opt.out, doc);
}

}  // namespace f0kit::cli

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

#include "f0kit/corpus.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <system_error>

#include "json.hpp"

#include "f0kit/errors.hpp"
#include "io_util.hpp"

namespace f0kit {

namespace fs = std::filesystem;
using nlohmann::json;
using ioutil::read_file;
using ioutil::write_file;

const char* role_name(SpeakerRole role) {
  return role == SpeakerRole::kTarget ? "target" : "supporting";
}

namespace {

// Interval bookkeeping tolerance; alignment files carry 6-decimal seconds,
// so anything below a microsecond is rounding noise, not overlap.
constexpr double kAlignEps = 1e-9;

double parse_seconds(const std::string& field, const std::string& where) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(where + ": bad number \"" + field + "\"");
  }
  return value;
}

std::vector<PhoneInterval> load_alignment(const std::string& path,
                                          const std::string& utt_id) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("utterance " + utt_id + ": cannot open alignment " + path);
  }

  std::vector<PhoneInterval> phones;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const std::string where =
        path + ":" + std::to_string(lineno) + " (utterance " + utt_id + ")";

    std::vector<std::string> fields;
    std::size_t begin = 0;
    while (true) {
      const std::size_t tab = line.find('\t', begin);
      fields.push_back(line.substr(begin, tab - begin));
      if (tab == std::string::npos) {
        break;
      }
      begin = tab + 1;
    }
    if (fields.size() != 3) {
      throw ParseError(where + ": expected 3 tab-separated columns, got " +
                       std::to_string(fields.size()));
    }
    if (fields[0].empty()) {
      throw ParseError(where + ": empty phone symbol");
    }

    PhoneInterval phone;
    phone.symbol = fields[0];
    phone.start_s = parse_seconds(fields[1], where + " start_s");
    phone.end_s = parse_seconds(fields[2], where + " end_s");
    phones.push_back(std::move(phone));
  }

  for (std::size_t i = 0; i < phones.size(); ++i) {
    const PhoneInterval& p = phones[i];
    if (p.start_s < 0.0 || !(p.end_s > p.start_s)) {
      throw InvalidAlignment("utterance " + utt_id + ": phone " +
                             std::to_string(i) + " (\"" + p.symbol +
                             "\") has invalid interval [" +
                             std::to_string(p.start_s) + ", " +
                             std::to_string(p.end_s) + "]");
    }
    if (i > 0 && p.start_s < phones[i - 1].end_s - kAlignEps) {
      throw InvalidAlignment("utterance " + utt_id + ": phones " +
                             std::to_string(i - 1) + " and " +
                             std::to_string(i) + " overlap");
    }
  }
  return phones;
}

std::string resolve(const fs::path& base_dir, const std::string& p) {
  fs::path candidate(p);
  if (candidate.is_absolute()) {
    return candidate.string();
  }
  return (base_dir / candidate).string();
}

std::string require_string(const json& obj, const char* key,
                           const std::string& where) {
  if (!obj.contains(key)) {
    throw ParseError(where + ": missing field \"" + key + "\"");
  }
  if (!obj[key].is_string()) {
    throw ParseError(where + ": field \"" + key + "\" must be a string");
  }
  return obj[key].get<std::string>();
}

std::map<std::string, SpeakerRole> load_speakers(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError(path + ": expected an object of speaker_id -> role");
  }

  std::map<std::string, SpeakerRole> speakers;
  for (const auto& [speaker, role] : doc.items()) {
    if (!role.is_string()) {
      throw ParseError(path + ": role of \"" + speaker +
                       "\" must be a string");
    }
    const std::string name = role.get<std::string>();
    if (name == "target") {
      speakers[speaker] = SpeakerRole::kTarget;
    } else if (name == "supporting") {
      speakers[speaker] = SpeakerRole::kSupporting;
    } else {
      throw ParseError(path + ": speaker \"" + speaker +
                       "\" has unknown role \"" + name +
                       "\" (expected target or supporting)");
    }
  }
  return speakers;
}

}  // namespace

Corpus load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open manifest " + path);
  }
  const fs::path base_dir = fs::path(path).parent_path();

  Corpus corpus;
  corpus.speakers = load_speakers((base_dir / "speakers.json").string());

  std::set<std::string> seen_ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const std::string where = path + ":" + std::to_string(lineno);

    json entry;
    try {
      entry = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (!entry.is_object()) {
      throw ParseError(where + ": expected a JSON object");
    }

    Utterance utt;
    utt.id = require_string(entry, "id", where);
    utt.audio_path = resolve(base_dir, require_string(entry, "audio", where));
    utt.speaker_id = require_string(entry, "speaker", where);
    const std::string alignment_path =
        resolve(base_dir, require_string(entry, "alignment", where));

    if (!seen_ids.insert(utt.id).second) {
      throw ParseError(where + ": duplicate utterance id \"" + utt.id + "\"");
    }
    if (corpus.speakers.find(utt.speaker_id) == corpus.speakers.end()) {
      throw ParseError(where + ": utterance \"" + utt.id + "\" names speaker \"" +
                       utt.speaker_id + "\" absent from speakers.json");
    }
    if (!fs::exists(utt.audio_path)) {
      throw MissingAudio("utterance \"" + utt.id + "\": audio file " +
                         utt.audio_path + " does not exist");
    }
    utt.phones = load_alignment(alignment_path, utt.id);
    corpus.utterances.push_back(std::move(utt));
  }
  return corpus;
}

namespace {

constexpr int kSchemaVersion = 1;

void check_schema(const json& doc, const std::string& path) {
  if (!doc.is_object() || !doc.contains("schema_version") ||
      !doc["schema_version"].is_number_integer()) {
    throw ParseError(path + ": missing integer schema_version");
  }
  const int version = doc["schema_version"].get<int>();
  if (version != kSchemaVersion) {
    throw SchemaVersionMismatch(path + ": schema_version " +
                                std::to_string(version) + ", expected " +
                                std::to_string(kSchemaVersion));
  }
}

double require_hop(const json& doc, const std::string& path) {
  if (!doc.contains("hop_s") || !doc["hop_s"].is_number()) {
    throw ParseError(path + ": missing numeric hop_s");
  }
  const double hop = doc["hop_s"].get<double>();
  if (!(hop > 0.0) || !std::isfinite(hop)) {
    throw ParseError(path + ": hop_s must be positive and finite");
  }
  return hop;
}

bool log_flag(const json& doc) {
  return doc.contains("log") && doc["log"].is_boolean() &&
         doc["log"].get<bool>();
}

F0Track parse_f0(const json& doc, const std::string& path) {
  check_schema(doc, path);
  if (log_flag(doc)) {
    throw ParseError(path + ": holds a log trajectory, not a linear-Hz track");
  }
  F0Track track;
  track.hop_s = require_hop(doc, path);
  if (!doc.contains("frames") || !doc["frames"].is_array()) {
    throw ParseError(path + ": missing frames array");
  }
  for (const auto& frame : doc["frames"]) {
    if (frame.is_null()) {
      track.values_hz.push_back(0.0);
      track.voiced.push_back(0);
    } else if (frame.is_number()) {
      const double hz = frame.get<double>();
      if (!std::isfinite(hz) || hz <= 0.0) {
        throw ParseError(path + ": voiced frame value " + std::to_string(hz) +
                         " is not a positive finite Hz value");
      }
      track.values_hz.push_back(hz);
      track.voiced.push_back(1);
    } else {
      throw ParseError(path + ": frames must hold numbers or null");
    }
  }
  return track;
}

LogF0Track parse_log(const json& doc, const std::string& path) {
  check_schema(doc, path);
  if (!log_flag(doc)) {
    throw ParseError(path + ": holds a linear-Hz track, not a log trajectory");
  }
  LogF0Track track;
  track.hop_s = require_hop(doc, path);
  if (!doc.contains("frames") || !doc["frames"].is_array()) {
    throw ParseError(path + ": missing frames array");
  }
  if (!doc.contains("voiced_mask") || !doc["voiced_mask"].is_array()) {
    throw ParseError(path + ": missing voiced_mask array");
  }
  for (const auto& frame : doc["frames"]) {
    if (!frame.is_number()) {
      throw ParseError(path + ": log frames must all be numbers");
    }
    track.values_log.push_back(frame.get<double>());
  }
  for (const auto& flag : doc["voiced_mask"]) {
    if (!flag.is_boolean()) {
      throw ParseError(path + ": voiced_mask must hold booleans");
    }
    track.voiced_mask.push_back(flag.get<bool>() ? 1 : 0);
  }
  if (track.voiced_mask.size() != track.values_log.size()) {
    throw ParseError(path + ": frames and voiced_mask lengths differ");
  }
  validate(track);
  return track;
}

json load_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace

void save_track(const std::string& path, const F0Track& track) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["hop_s"] = track.hop_s;
  json frames = json::array();
  for (std::size_t i = 0; i < track.size(); ++i) {
    if (track.voiced[i]) {
      frames.push_back(track.values_hz[i]);
    } else {
      frames.push_back(nullptr);
    }
  }
  doc["frames"] = std::move(frames);
  write_file(path, doc.dump() + "\n");
}

void save_track(const std::string& path, const LogF0Track& track) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["hop_s"] = track.hop_s;
  doc["log"] = true;
  doc["frames"] = track.values_log;
  json mask = json::array();
  for (std::uint8_t flag : track.voiced_mask) {
    mask.push_back(flag != 0);
  }
  doc["voiced_mask"] = std::move(mask);
  write_file(path, doc.dump() + "\n");
}

F0Track load_f0_track(const std::string& path) {
  return parse_f0(load_json_file(path), path);
}

LogF0Track load_log_track(const std::string& path) {
  return parse_log(load_json_file(path), path);
}

bool is_log_track_file(const std::string& path) {
  return log_flag(load_json_file(path));
}

LogF0Track load_track_as_log(const std::string& path) {
  const json doc = load_json_file(path);
  if (log_flag(doc)) {
    return parse_log(doc, path);
  }
  return interpolate(parse_f0(doc, path));
}

}  // namespace f0kit

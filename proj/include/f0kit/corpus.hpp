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

#pragma once

#include <map>
#include <string>
#include <vector>

#include "f0kit/pitch.hpp"
#include "f0kit/trajectory.hpp"

namespace f0kit {

enum class SpeakerRole { kTarget, kSupporting };

const char* role_name(SpeakerRole role);

// One phone from a forced alignment: half-open interval [start_s, end_s).
struct PhoneInterval {
  std::string symbol;
  double start_s = 0.0;
  double end_s = 0.0;
};

struct Utterance {
  std::string id;
  std::string audio_path;
  std::string speaker_id;
  std::vector<PhoneInterval> phones;
};

// Immutable after load; utterance order equals manifest file order.
struct Corpus {
  std::vector<Utterance> utterances;
  std::map<std::string, SpeakerRole> speakers;
};

// Manifest format: one JSON object per line with fields
// {"id": ..., "audio": ..., "speaker": ..., "alignment": ...}; relative
// paths resolve against the manifest's directory. Speaker roles live in a
// sibling speakers.json mapping speaker_id -> "target" | "supporting".
// Alignments are TSV files with columns phone, start_s, end_s.
//
// Everything is validated up front (ids unique, speakers known, audio files
// present, intervals ascending and non-overlapping); audio samples are NOT
// loaded here. Throws ParseError, MissingAudio, InvalidAlignment, IoError.
Corpus load_manifest(const std::string& path);

// Track persistence, schema_version 1.
//   F0Track:    {"schema_version": 1, "hop_s": h, "frames": [hz-or-null, ...]}
//               where null marks an unvoiced frame.
//   LogF0Track: adds "log": true and an explicit "voiced_mask" array; frames
//               hold log-Hz values everywhere (interpolated tracks have no
//               gaps to encode).
// Round-trips are value-exact: load(save(t)) == t bit for bit.
void save_track(const std::string& path, const F0Track& track);
void save_track(const std::string& path, const LogF0Track& track);
F0Track load_f0_track(const std::string& path);
LogF0Track load_log_track(const std::string& path);

// True if the file at `path` carries "log": true (a LogF0Track).
bool is_log_track_file(const std::string& path);

// Loads either kind of track file as a continuous log trajectory: log files
// load directly, linear-Hz files are interpolated over unvoiced frames.
LogF0Track load_track_as_log(const std::string& path);

}  // namespace f0kit

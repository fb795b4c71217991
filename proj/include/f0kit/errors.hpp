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

#include <stdexcept>
#include <string>

namespace f0kit {

// Base class for every error this library throws. name() is the stable,
// machine-readable identifier the CLI prints in its JSON diagnostics.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
  virtual const char* name() const noexcept { return "Error"; }
};

#define F0KIT_DEFINE_ERROR(NAME)                                  \
  class NAME : public Error {                                     \
   public:                                                        \
    using Error::Error;                                           \
    const char* name() const noexcept override { return #NAME; }  \
  };

// audio_io
F0KIT_DEFINE_ERROR(MalformedWav)
F0KIT_DEFINE_ERROR(UnsupportedFormat)
F0KIT_DEFINE_ERROR(InvalidFraming)

// pitch
F0KIT_DEFINE_ERROR(ConfigOutOfRange)

// trajectory
F0KIT_DEFINE_ERROR(AllUnvoiced)
F0KIT_DEFINE_ERROR(TooShort)
F0KIT_DEFINE_ERROR(OutOfSanityBounds)

// metrics
F0KIT_DEFINE_ERROR(LengthMismatch)
F0KIT_DEFINE_ERROR(HopMismatch)
F0KIT_DEFINE_ERROR(EmptyInput)
F0KIT_DEFINE_ERROR(BadRange)
F0KIT_DEFINE_ERROR(BinMismatch)

// predictor
F0KIT_DEFINE_ERROR(UnknownPhoneme)
F0KIT_DEFINE_ERROR(UnknownSpeaker)
F0KIT_DEFINE_ERROR(OverlappingIntervals)
F0KIT_DEFINE_ERROR(CoverageGap)
F0KIT_DEFINE_ERROR(DimensionMismatch)
F0KIT_DEFINE_ERROR(NonFiniteLoss)

// corpus
F0KIT_DEFINE_ERROR(ParseError)
F0KIT_DEFINE_ERROR(MissingAudio)
F0KIT_DEFINE_ERROR(InvalidAlignment)
F0KIT_DEFINE_ERROR(IoError)
F0KIT_DEFINE_ERROR(SchemaVersionMismatch)

// cli
F0KIT_DEFINE_ERROR(EmptyCorpus)
F0KIT_DEFINE_ERROR(IdMismatch)

#undef F0KIT_DEFINE_ERROR

}  // namespace f0kit

// include/speechdist/wav.h

// Copyright 2026  The speechdist Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SPEECHDIST_WAV_H_
#define SPEECHDIST_WAV_H_

#include <filesystem>
#include <vector>

namespace speechdist {

struct WavData {
  int sample_rate = 0;
  int channels = 0;
  std::vector<double> interleaved;  // frames * channels, nominal range [-1, 1]

  size_t num_frames() const {
    return channels > 0 ? interleaved.size() / static_cast<size_t>(channels) : 0;
  }
};

enum class WavEncoding { kPcm16, kFloat32 };

// Reads RIFF/WAVE with PCM 16/24/32-bit integer or 32-bit IEEE float samples,
// including WAVE_FORMAT_EXTENSIBLE headers. Throws DataError on anything else.
WavData ReadWav(const std::filesystem::path& path);

void WriteWav(const std::filesystem::path& path, const WavData& wav,
              WavEncoding encoding = WavEncoding::kFloat32);

}  // namespace speechdist

#endif  // SPEECHDIST_WAV_H_

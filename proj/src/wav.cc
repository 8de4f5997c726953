// src/wav.cc

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

#include "speechdist/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "speechdist/error.h"
#include "speechdist/io.h"

namespace speechdist {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint32_t ReadU32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t ReadU16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutU16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

WavData ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open audio file " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  const std::string where = path.string() + ": ";
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw DataError(where + "not a RIFF/WAVE file");

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  const unsigned char* data = nullptr;
  size_t data_size = 0;
  bool have_fmt = false;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const uint32_t size = ReadU32(chunk + 4);
    const size_t body = pos + 8;
    const size_t avail = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || avail < 16) throw DataError(where + "truncated fmt chunk");
      const unsigned char* f = bytes.data() + body;
      format = ReadU16(f);
      channels = ReadU16(f + 2);
      rate = ReadU32(f + 4);
      bits = ReadU16(f + 14);
      if (format == kFormatExtensible) {
        if (size < 40 || avail < 40) throw DataError(where + "truncated extensible fmt chunk");
        format = ReadU16(f + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      // Some writers leave the size as 0xFFFFFFFF for streamed output.
      data_size = std::min<size_t>(size, avail);
      break;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt) throw DataError(where + "missing fmt chunk");
  if (data == nullptr) throw DataError(where + "missing data chunk");
  if (channels == 0 || rate == 0) throw DataError(where + "invalid channel count or sample rate");

  const bool is_float = format == kFormatFloat && bits == 32;
  const bool is_pcm = format == kFormatPcm && (bits == 16 || bits == 24 || bits == 32);
  if (!is_float && !is_pcm)
    throw DataError(where + "unsupported encoding (format " + std::to_string(format) +
                    ", " + std::to_string(bits) + " bits)");

  const size_t bytes_per_sample = bits / 8;
  const size_t count = data_size / bytes_per_sample;
  const size_t frames = count / channels;
  if (frames == 0) throw DataError(where + "zero-length audio");

  WavData wav;
  wav.sample_rate = static_cast<int>(rate);
  wav.channels = channels;
  wav.interleaved.resize(frames * channels);
  for (size_t i = 0; i < wav.interleaved.size(); ++i) {
    const unsigned char* p = data + i * bytes_per_sample;
    double v = 0.0;
    if (is_float) {
      uint32_t u = ReadU32(p);
      float f;
      std::memcpy(&f, &u, sizeof f);
      v = f;
    } else if (bits == 16) {
      v = static_cast<int16_t>(ReadU16(p)) / 32768.0;
    } else if (bits == 24) {
      int32_t s = static_cast<int32_t>(p[0] | (p[1] << 8) | (p[2] << 16));
      if (s & 0x800000) s -= 0x1000000;
      v = s / 8388608.0;
    } else {
      v = static_cast<int32_t>(ReadU32(p)) / 2147483648.0;
    }
    if (!std::isfinite(v)) throw DataError(where + "non-finite sample");
    wav.interleaved[i] = v;
  }
  return wav;
}

void WriteWav(const std::filesystem::path& path, const WavData& wav, WavEncoding encoding) {
  if (wav.channels <= 0 || wav.sample_rate <= 0)
    throw DataError("WriteWav: invalid channel count or sample rate");
  const bool is_float = encoding == WavEncoding::kFloat32;
  const uint16_t bits = is_float ? 32 : 16;
  const uint16_t block_align = static_cast<uint16_t>(wav.channels * bits / 8);
  const uint32_t data_size = static_cast<uint32_t>(wav.interleaved.size() * (bits / 8));

  std::string out;
  out.reserve(44 + data_size);
  out += "RIFF";
  PutU32(out, 36 + data_size);
  out += "WAVEfmt ";
  PutU32(out, 16);
  PutU16(out, is_float ? kFormatFloat : kFormatPcm);
  PutU16(out, static_cast<uint16_t>(wav.channels));
  PutU32(out, static_cast<uint32_t>(wav.sample_rate));
  PutU32(out, static_cast<uint32_t>(wav.sample_rate) * block_align);
  PutU16(out, block_align);
  PutU16(out, bits);
  out += "data";
  PutU32(out, data_size);
  for (double v : wav.interleaved) {
    if (is_float) {
      float f = static_cast<float>(v);
      uint32_t u;
      std::memcpy(&u, &f, sizeof u);
      PutU32(out, u);
    } else {
      double scaled = std::clamp(std::round(v * 32768.0), -32768.0, 32767.0);
      PutU16(out, static_cast<uint16_t>(static_cast<int16_t>(scaled)));
    }
  }
  WriteFileAtomic(path, out);
}

}  // namespace speechdist

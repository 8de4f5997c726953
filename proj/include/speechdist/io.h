// include/speechdist/io.h

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

#ifndef SPEECHDIST_IO_H_
#define SPEECHDIST_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace speechdist {

// Writes to a sibling temp file and renames it over the target.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view contents);

std::string ReadFile(const std::filesystem::path& path);

// Splits on '\n', dropping a trailing '\r' from each line.
std::vector<std::string> SplitLines(std::string_view text);

std::vector<std::string> SplitWhitespace(std::string_view text);
std::vector<std::string> SplitChar(std::string_view text, char sep);
std::string_view Trim(std::string_view s);

// Parses an entire field as a finite double; throws DataError with `context`.
double ParseDouble(std::string_view field, const std::string& context);

// printf %.<digits>g.
std::string FormatG(double v, int digits = 6);

}  // namespace speechdist

#endif  // SPEECHDIST_IO_H_

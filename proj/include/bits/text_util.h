// Copyright 2026 The BITS Audit Authors.
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

#ifndef BITS_TEXT_UTIL_H_
#define BITS_TEXT_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace bits {

inline bool IsAsciiAlpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
inline bool IsAsciiDigit(char c) { return c >= '0' && c <= '9'; }
inline bool IsWordChar(char c) {
  return IsAsciiAlpha(c) || IsAsciiDigit(c) || c == '_';
}
inline char AsciiToLower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}
inline char AsciiToUpper(char c) {
  return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c;
}

std::string AsciiLower(std::string_view s);
std::string_view Trim(std::string_view s);
std::vector<std::string> Split(std::string_view s, char sep);
bool EqualsIgnoreCase(std::string_view a, std::string_view b);

// Orders "T2" before "T10": digit runs compare numerically.
bool NaturalLess(std::string_view a, std::string_view b);

// 64-bit FNV-1a. Stable across platforms and runs.
uint64_t Fnv1a64(std::string_view data);
std::string HexId(char prefix, uint64_t hash);

// Shortest round-trip representation of a double.
std::string FormatExact(double v);
// Fixed-point with `digits` decimals, "-0.00" normalized to "0.00".
std::string FormatFixed(double v, int digits);
// Rounds to `digits` significant decimal digits.
double RoundSignificant(double v, int digits);

// Reads a tab-separated file, skipping blank lines and lines starting
// with '#'. Each returned row keeps the 1-based source line number.
struct TsvRow {
  int line = 0;
  std::vector<std::string> fields;
};
std::vector<TsvRow> ReadTsv(const std::filesystem::path &path);

std::string ReadFile(const std::filesystem::path &path);
void WriteFile(const std::filesystem::path &path, std::string_view content);

}  // namespace bits

#endif  // BITS_TEXT_UTIL_H_

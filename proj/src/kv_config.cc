// Copyright 2026 The tiltrl Authors
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

#include "tiltrl/kv_config.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tiltrl/error.h"

namespace tiltrl {
namespace {

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double ParseDouble(const std::string& key, const std::string& token) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::kParse,
                "key '" + key + "': cannot parse '" + token + "' as number");
  }
  return value;
}

}  // namespace

std::string FormatDouble(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

KeyValueConfig KeyValueConfig::Parse(const std::string& text) {
  KeyValueConfig config;
  std::istringstream stream(text);
  std::string line;
  int line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.resize(comment);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(line_number) + ": missing '='");
    }
    const std::string key = Trim(line.substr(0, eq));
    if (key.empty()) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(line_number) + ": empty key");
    }
    config.entries_[key] = Trim(line.substr(eq + 1));
  }
  return config;
}

KeyValueConfig KeyValueConfig::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Parse(buffer.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void KeyValueConfig::Save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << ToString();
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

std::string KeyValueConfig::ToString() const {
  std::string text;
  for (const auto& [key, value] : entries_) {
    text += key + " = " + value + "\n";
  }
  return text;
}

bool KeyValueConfig::Has(const std::string& key) const {
  return entries_.count(key) > 0;
}

const std::string& KeyValueConfig::GetString(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    throw Error(ErrorCode::kParse, "missing key '" + key + "'");
  }
  return it->second;
}

double KeyValueConfig::GetDouble(const std::string& key) const {
  return ParseDouble(key, GetString(key));
}

long long KeyValueConfig::GetInt(const std::string& key) const {
  const std::string& token = GetString(key);
  long long value = 0;
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw Error(ErrorCode::kParse,
                "key '" + key + "': cannot parse '" + token + "' as integer");
  }
  return value;
}

bool KeyValueConfig::GetBool(const std::string& key) const {
  const std::string& token = GetString(key);
  if (token == "true" || token == "1" || token == "on") return true;
  if (token == "false" || token == "0" || token == "off") return false;
  throw Error(ErrorCode::kParse,
              "key '" + key + "': cannot parse '" + token + "' as bool");
}

std::vector<double> KeyValueConfig::GetDoubles(const std::string& key) const {
  std::istringstream stream(GetString(key));
  std::vector<double> values;
  std::string token;
  while (stream >> token) values.push_back(ParseDouble(key, token));
  return values;
}

void KeyValueConfig::Read(const std::string& key, double* out) const {
  if (Has(key)) *out = GetDouble(key);
}

void KeyValueConfig::Read(const std::string& key, int* out) const {
  if (Has(key)) *out = static_cast<int>(GetInt(key));
}

void KeyValueConfig::Read(const std::string& key, bool* out) const {
  if (Has(key)) *out = GetBool(key);
}

void KeyValueConfig::Read(const std::string& key, std::string* out) const {
  if (Has(key)) *out = GetString(key);
}

void KeyValueConfig::Set(const std::string& key, const std::string& value) {
  entries_[key] = value;
}

void KeyValueConfig::Set(const std::string& key, double value) {
  entries_[key] = FormatDouble(value);
}

void KeyValueConfig::Set(const std::string& key, int value) {
  entries_[key] = std::to_string(value);
}

void KeyValueConfig::Set(const std::string& key, bool value) {
  entries_[key] = value ? "true" : "false";
}

void KeyValueConfig::Set(const std::string& key,
                         const std::vector<double>& values) {
  std::string text;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i > 0) text += ' ';
    text += FormatDouble(values[i]);
  }
  entries_[key] = text;
}

void KeyValueConfig::Merge(const KeyValueConfig& other) {
  for (const auto& [key, value] : other.entries_) entries_[key] = value;
}

void KeyValueConfig::CheckSize(const std::string& key, size_t got,
                               size_t want) {
  if (got != want) {
    throw Error(ErrorCode::kParse, "key '" + key + "': expected " +
                                       std::to_string(want) + " values, got " +
                                       std::to_string(got));
  }
}

}  // namespace tiltrl

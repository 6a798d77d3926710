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

#ifndef TILTRL_KV_CONFIG_H_
#define TILTRL_KV_CONFIG_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace tiltrl {

// Plain-text `key = value` configuration shared by the physical, actuator,
// environment and training configs. Lines starting with '#' are comments;
// vector values are whitespace separated. Keys are kept sorted so that
// serialization is deterministic.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig Parse(const std::string& text);
  static KeyValueConfig Load(const std::filesystem::path& path);

  void Save(const std::filesystem::path& path) const;
  std::string ToString() const;

  bool Has(const std::string& key) const;
  const std::string& GetString(const std::string& key) const;
  double GetDouble(const std::string& key) const;
  long long GetInt(const std::string& key) const;
  bool GetBool(const std::string& key) const;
  std::vector<double> GetDoubles(const std::string& key) const;

  // Reads `key` into `out` when present; leaves `out` untouched otherwise.
  void Read(const std::string& key, double* out) const;
  void Read(const std::string& key, int* out) const;
  void Read(const std::string& key, bool* out) const;
  void Read(const std::string& key, std::string* out) const;
  template <typename Container>
  void ReadFixed(const std::string& key, Container* out) const {
    if (!Has(key)) return;
    const auto values = GetDoubles(key);
    CheckSize(key, values.size(), out->size());
    for (size_t i = 0; i < values.size(); ++i) (*out)[i] = values[i];
  }

  void Set(const std::string& key, const std::string& value);
  void Set(const std::string& key, double value);
  void Set(const std::string& key, int value);
  void Set(const std::string& key, bool value);
  void Set(const std::string& key, const std::vector<double>& values);
  template <typename Container>
  void SetFixed(const std::string& key, const Container& values) {
    Set(key, std::vector<double>(values.begin(), values.end()));
  }

  // Copies every entry of `other` into this config, overwriting duplicates.
  void Merge(const KeyValueConfig& other);

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  static void CheckSize(const std::string& key, size_t got, size_t want);

  std::map<std::string, std::string> entries_;
};

// Round-trip-exact decimal representation of a double.
std::string FormatDouble(double value);

}  // namespace tiltrl

#endif  // TILTRL_KV_CONFIG_H_

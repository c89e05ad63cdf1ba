// Copyright 2026 The conjbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "conjbench/cassette.hpp"

#include <fstream>

#include "conjbench/error.hpp"

namespace conjbench {

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path) {
  std::vector<nlohmann::json> out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void append_jsonl(const std::filesystem::path& path, const nlohmann::json& record) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error("cannot append to " + path.string());
  out << record.dump() << '\n';
  out.flush();
  if (!out) throw Error("write failed: " + path.string());
}

KeyedLog::KeyedLog(std::string key_field) : key_field_(std::move(key_field)) {}

void KeyedLog::load(const std::filesystem::path& path) {
  auto records = read_jsonl(path);
  std::unique_lock lock(mu_);
  for (auto& r : records) {
    const auto it = r.find(key_field_);
    if (it == r.end() || !it->is_string()) {
      throw Error(path.string() + ": record without string `" + key_field_ + "`");
    }
    index_.try_emplace(it->get<std::string>(), std::move(r));
  }
}

void KeyedLog::set_writer(std::filesystem::path path) {
  std::unique_lock lock(mu_);
  writer_ = std::move(path);
}

bool KeyedLog::writable() const {
  std::shared_lock lock(mu_);
  return writer_.has_value();
}

std::optional<nlohmann::json> KeyedLog::find(const std::string& key) const {
  std::shared_lock lock(mu_);
  const auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return std::optional<nlohmann::json>(std::in_place, it->second);
}

bool KeyedLog::append(const nlohmann::json& record) {
  const auto key = record.at(key_field_).get<std::string>();
  std::unique_lock lock(mu_);
  if (!writer_) throw Error("cassette is read-only");
  if (index_.contains(key)) return false;
  append_jsonl(*writer_, record);
  index_.emplace(key, record);
  return true;
}

std::size_t KeyedLog::size() const {
  std::shared_lock lock(mu_);
  return index_.size();
}

}  // namespace conjbench

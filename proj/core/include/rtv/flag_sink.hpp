// Copyright 2026 The rtv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy of
// the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations under
// the License.

#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace rtv {

/// Destination for flagged-event records, one JSON document per line.
class FlagSink {
 public:
  virtual ~FlagSink() = default;
  /// Throws SinkUnavailable when the record cannot be stored.
  virtual void write_line(std::string_view line) = 0;
};

class StreamFlagSink final : public FlagSink {
 public:
  explicit StreamFlagSink(std::ostream& out) : out_(out) {}
  void write_line(std::string_view line) override;

 private:
  std::ostream& out_;
};

/// Writes to a file opened on construction, truncating it unless `append`.
class FileFlagSink final : public FlagSink {
 public:
  explicit FileFlagSink(const std::filesystem::path& path, bool append = false);
  void write_line(std::string_view line) override;

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

/// Keeps records in memory.
class MemoryFlagSink final : public FlagSink {
 public:
  void write_line(std::string_view line) override { lines_.emplace_back(line); }
  const std::vector<std::string>& lines() const noexcept { return lines_; }

 private:
  std::vector<std::string> lines_;
};

}  // namespace rtv

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

#include "rtv/flag_sink.hpp"

#include "rtv/error.hpp"

namespace rtv {

void StreamFlagSink::write_line(std::string_view line) {
  out_ << line << '\n';
  if (!out_) throw Error(ErrorKind::SinkUnavailable, "flag stream rejected a record");
}

FileFlagSink::FileFlagSink(const std::filesystem::path& path, bool append)
    : path_(path), out_(path, append ? std::ios::out | std::ios::app : std::ios::out | std::ios::trunc) {
  if (!out_) {
    throw Error(ErrorKind::SinkUnavailable, "cannot open flag sink " + path.string());
  }
}

void FileFlagSink::write_line(std::string_view line) {
  out_ << line << '\n';
  out_.flush();
  if (!out_) throw Error(ErrorKind::SinkUnavailable, "write to " + path_.string() + " failed");
}

}  // namespace rtv

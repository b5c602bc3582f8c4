// Copyright 2026 The pulsebss Authors
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

#include "pulsebss/csv.hpp"

#include <cmath>
#include <cstdio>

#include "pulsebss/errors.hpp"

namespace pulsebss {

std::string fmt_g(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path) : path_(path), out_(path, std::ios::binary) {
  if (!out_) throw sim_error(errc::io_error, "cannot open for writing: " + path);
}

CsvWriter::~CsvWriter() {
  if (out_.is_open()) out_.close();
}

void CsvWriter::row(const std::string& line) {
  out_ << line << '\n';
  if (!out_) throw sim_error(errc::io_error, "write failed: " + path_);
}

void CsvWriter::close() {
  out_.close();
  if (out_.fail()) throw sim_error(errc::io_error, "close failed: " + path_);
}

}  // namespace pulsebss

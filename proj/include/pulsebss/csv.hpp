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

#ifndef PULSEBSS_CSV_HPP
#define PULSEBSS_CSV_HPP

#include <fstream>
#include <string>

namespace pulsebss {

// Fixed-format double rendering ("%.12g"); identical values always render
// to identical bytes, which keeps emitted files reproducible.
std::string fmt_g(double v);

// Line-oriented CSV writer; surfaces failures as io_error with the path.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();

  void row(const std::string& line);
  void close();

 private:
  std::string path_;
  std::ofstream out_;
};

}  // namespace pulsebss

#endif  // PULSEBSS_CSV_HPP

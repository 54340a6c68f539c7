/*
 * Copyright 2026 The cmkl Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CMKL_CSV_HPP_
#define CMKL_CSV_HPP_

#include <fstream>
#include <istream>
#include <string>
#include <vector>

namespace cmkl {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// RFC-4180 reader: quoted fields may hold commas, doubled quotes and line
// breaks; CRLF and LF both end a record. The first record is the header.
// Every record must have as many fields as the header.
CsvTable parse_csv(std::istream& in);
CsvTable read_csv(const std::string& path);

// Quotes a field only when it needs it.
std::string csv_escape(const std::string& field);

// Opens path for binary writing, creating missing parent directories.
std::ofstream open_output(const std::string& path);

}  // namespace cmkl

#endif  // CMKL_CSV_HPP_

// Copyright 2026 The jsdrazor Authors
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

#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace jsdrazor {

/// Shortest decimal form that round-trips; "nan", "inf" and "-inf" otherwise.
std::string format_real(double x);

/// Quotes a field per RFC 4180 when it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);

/// Writes one CSV record terminated by CRLF (RFC 4180).
void write_csv_record(std::ostream& out, const std::vector<std::string>& fields);

/// Splits one CSV record; supports quoted fields with doubled quotes.
std::vector<std::string> split_csv_record(std::string_view line);

}  // namespace jsdrazor

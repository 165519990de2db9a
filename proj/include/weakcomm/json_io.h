// Copyright 2026 The weakcomm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WEAKCOMM_JSON_IO_H
#define WEAKCOMM_JSON_IO_H

#include <string>

#include "json.hpp"

namespace weakcomm {

using Json = nlohmann::ordered_json;

/// Deterministic text form: keys in insertion order, two-space indentation,
/// arrays of scalars on one line, floats with 17 significant digits, and
/// non-finite floats as null. Output ends with a newline.
std::string dump_json(const Json &doc);

/// Parses text produced by dump_json (or any JSON) preserving key order.
Json parse_json(const std::string &text);

}  // namespace weakcomm

#endif

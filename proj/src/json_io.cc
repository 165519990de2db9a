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

#include "weakcomm/json_io.h"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace weakcomm {

namespace {

void append_number(std::string &out, double v) {
    if (!std::isfinite(v)) {
        out += "null";
        return;
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    if (res.ec != std::errc()) {
        throw std::runtime_error("dump_json: cannot format number");
    }
    out.append(buf, res.ptr);
}

bool is_scalar(const Json &j) {
    return !j.is_object() && !j.is_array();
}

void append_scalar(std::string &out, const Json &j) {
    switch (j.type()) {
        case Json::value_t::number_float:
            append_number(out, j.get<double>());
            break;
        default:
            out += j.dump();
            break;
    }
}

void append_value(std::string &out, const Json &j, int depth) {
    const std::string pad(2 * (depth + 1), ' ');
    const std::string close_pad(2 * depth, ' ');
    if (j.is_object()) {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) {
                out += ",\n";
            }
            first = false;
            out += pad;
            out += Json(it.key()).dump();
            out += ": ";
            append_value(out, it.value(), depth + 1);
        }
        out += "\n" + close_pad + "}";
        return;
    }
    if (j.is_array()) {
        bool flat = true;
        for (const auto &e : j) {
            flat = flat && is_scalar(e);
        }
        if (flat) {
            out += "[";
            bool first = true;
            for (const auto &e : j) {
                if (!first) {
                    out += ", ";
                }
                first = false;
                append_scalar(out, e);
            }
            out += "]";
            return;
        }
        out += "[\n";
        bool first = true;
        for (const auto &e : j) {
            if (!first) {
                out += ",\n";
            }
            first = false;
            out += pad;
            append_value(out, e, depth + 1);
        }
        out += "\n" + close_pad + "]";
        return;
    }
    append_scalar(out, j);
}

}  // namespace

std::string dump_json(const Json &doc) {
    std::string out;
    append_value(out, doc, 0);
    out += "\n";
    return out;
}

Json parse_json(const std::string &text) {
    return Json::parse(text);
}

}  // namespace weakcomm

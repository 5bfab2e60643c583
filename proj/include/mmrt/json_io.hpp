// SPDX-License-Identifier: Apache-2.0
//
// mmrt - mobility-aware mmWave ray-tracing channel simulator
// Copyright (C) 2026 The mmrt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "mmrt/error.hpp"
#include "mmrt/vec.hpp"

#include <json.hpp>

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>

// Helpers for the structured-text (JSON) configuration files. Every reader rejects keys it does
// not know, naming the offending key with its path in the document.

namespace mmrt::json_io {

using json = nlohmann::json;

inline void require_object(const json &j, const std::string &path) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
}

inline void check_keys(const json &j, const std::string &path, std::initializer_list<std::string_view> allowed) {
    require_object(j, path);
    for (const auto &[key, value] : j.items()) {
        bool known = false;
        for (std::string_view a : allowed) known = known || key == a;
        if (!known) throw ConfigError(path + ": unknown key '" + key + "'");
    }
}

inline std::string child(const std::string &path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

inline const json &required(const json &j, const std::string &path, std::string_view key) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(path + ": missing required key '" + std::string(key) + "'");
    return *it;
}

inline double number(const json &j, const std::string &path) {
    if (!j.is_number()) throw ConfigError(path + ": expected a number");
    return j.get<double>();
}

inline double number(const json &obj, const std::string &path, std::string_view key) {
    return number(required(obj, path, key), child(path, key));
}

inline double number_or(const json &obj, const std::string &path, std::string_view key, double fallback) {
    auto it = obj.find(key);
    return it == obj.end() ? fallback : number(*it, child(path, key));
}

inline long long integer(const json &j, const std::string &path) {
    if (!j.is_number_integer()) throw ConfigError(path + ": expected an integer");
    return j.get<long long>();
}

inline long long integer_or(const json &obj, const std::string &path, std::string_view key, long long fallback) {
    auto it = obj.find(key);
    return it == obj.end() ? fallback : integer(*it, child(path, key));
}

inline std::string string(const json &j, const std::string &path) {
    if (!j.is_string()) throw ConfigError(path + ": expected a string");
    return j.get<std::string>();
}

inline std::string string(const json &obj, const std::string &path, std::string_view key) {
    return string(required(obj, path, key), child(path, key));
}

inline bool boolean_or(const json &obj, const std::string &path, std::string_view key, bool fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_boolean()) throw ConfigError(child(path, key) + ": expected true or false");
    return it->get<bool>();
}

inline const json &array(const json &j, const std::string &path) {
    if (!j.is_array()) throw ConfigError(path + ": expected a list");
    return j;
}

inline Vec2 vec2(const json &j, const std::string &path) {
    if (!j.is_array() || j.size() != 2) throw ConfigError(path + ": expected [x, y]");
    return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
}

inline Vec3 vec3(const json &j, const std::string &path) {
    if (!j.is_array() || j.size() != 3) throw ConfigError(path + ": expected [x, y, z]");
    return {number(j[0], path + "[0]"), number(j[1], path + "[1]"), number(j[2], path + "[2]")};
}

inline json to_json(Vec2 v) { return json::array({v.x, v.y}); }
inline json to_json(Vec3 v) { return json::array({v.x, v.y, v.z}); }

inline json parse_text(std::string_view text, const std::string &what) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        throw ConfigError(what + ": malformed file (" + std::string(e.what()) + ")");
    }
}

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline json load_file(const std::string &path) { return parse_text(read_file(path), path); }

} // namespace mmrt::json_io

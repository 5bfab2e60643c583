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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace mmrt {

enum class ErrorKind { geometry, domain, config, parse, validation, lookup, version };

/// Base of every error raised by the library. The kind decides the CLI exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class GeometryError : public Error {
public:
    explicit GeometryError(const std::string &what) : Error(ErrorKind::geometry, what) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string &what) : Error(ErrorKind::domain, what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string &what) : Error(ErrorKind::config, what) {}
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string &what) : Error(ErrorKind::validation, what) {}
};

class LookupError : public Error {
public:
    explicit LookupError(const std::string &what) : Error(ErrorKind::lookup, what) {}
};

class VersionError : public Error {
public:
    VersionError(int found, int expected)
        : Error(ErrorKind::version, "unsupported format version " + std::to_string(found) +
                                        " (this build reads version " + std::to_string(expected) + ")"),
          found_(found), expected_(expected) {}
    int found() const noexcept { return found_; }
    int expected() const noexcept { return expected_; }

private:
    int found_;
    int expected_;
};

/// Malformed input. Text formats report a 1-based line, binary-ish ones a byte offset.
class ParseError : public Error {
public:
    ParseError(const std::string &what, std::optional<std::size_t> line, std::optional<std::size_t> byte_offset)
        : Error(ErrorKind::parse, decorate(what, line, byte_offset)), line_(line), offset_(byte_offset) {}

    static ParseError at_line(std::size_t line, const std::string &what) { return {what, line, std::nullopt}; }
    static ParseError at_offset(std::size_t offset, const std::string &what) { return {what, std::nullopt, offset}; }

    std::optional<std::size_t> line() const noexcept { return line_; }
    std::optional<std::size_t> byte_offset() const noexcept { return offset_; }

private:
    static std::string decorate(const std::string &what, std::optional<std::size_t> line,
                                std::optional<std::size_t> offset) {
        if (line) return "line " + std::to_string(*line) + ": " + what;
        if (offset) return "byte offset " + std::to_string(*offset) + ": " + what;
        return what;
    }

    std::optional<std::size_t> line_;
    std::optional<std::size_t> offset_;
};

} // namespace mmrt

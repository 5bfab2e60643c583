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

#include <functional>
#include <iostream>
#include <mutex>
#include <string>
#include <string_view>

// Warning sink. Library code reports recoverable conditions (skipped actors,
// scenes without receivers) here; the default writes to standard error.

namespace mmrt::log {

using Sink = std::function<void(std::string_view)>;

namespace detail {
inline Sink &sink() {
    static Sink s = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
    return s;
}
inline std::mutex &sink_mutex() {
    static std::mutex m;
    return m;
}
} // namespace detail

/// Replaces the warning sink and returns the previous one.
inline Sink set_sink(Sink s) {
    std::lock_guard lock(detail::sink_mutex());
    std::swap(detail::sink(), s);
    return s;
}

inline void warn(std::string_view msg) {
    std::lock_guard lock(detail::sink_mutex());
    if (detail::sink()) detail::sink()(msg);
}

/// Installs a sink for the lifetime of the guard.
class ScopedSink {
public:
    explicit ScopedSink(Sink s) : previous_(set_sink(std::move(s))) {}
    ~ScopedSink() { set_sink(std::move(previous_)); }
    ScopedSink(const ScopedSink &) = delete;
    ScopedSink &operator=(const ScopedSink &) = delete;

private:
    Sink previous_;
};

} // namespace mmrt::log

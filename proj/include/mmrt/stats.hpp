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

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace mmrt {

struct Summary {
    double mean = 0.0;
    double std = 0.0; ///< population standard deviation
    double min = 0.0;
    double max = 0.0;

    friend bool operator==(const Summary &, const Summary &) = default;
};

inline Summary summarize(std::span<const double> series) {
    if (series.empty()) throw DomainError("summarize: empty series");
    Summary s;
    double sum = 0.0;
    for (double v : series) sum += v;
    s.mean = sum / static_cast<double>(series.size());
    double ss = 0.0;
    for (double v : series) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(series.size()));
    auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    s.min = *lo;
    s.max = *hi;
    return s;
}

/// Median; mean of the two middle values for even sizes.
inline double median(std::vector<double> v) {
    if (v.empty()) throw DomainError("median: empty series");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace mmrt

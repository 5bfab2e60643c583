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

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mmrt {

using MaterialId = std::uint32_t;

/// Electrical description of a surface. A perfect conductor ignores the other two fields.
struct Material {
    std::string name;
    double rel_permittivity = 1.0; ///< real part, >= 1
    double conductivity = 0.0;     ///< S/m, >= 0
    bool perfect_conductor = false;

    friend bool operator==(const Material &, const Material &) = default;
};

inline void validate(const Material &m) {
    if (m.name.empty()) throw DomainError("material name must not be empty");
    if (m.perfect_conductor) return;
    if (!(m.rel_permittivity >= 1.0) || !std::isfinite(m.rel_permittivity))
        throw DomainError("material '" + m.name + "': rel_permittivity must be >= 1");
    if (!(m.conductivity >= 0.0) || !std::isfinite(m.conductivity))
        throw DomainError("material '" + m.name + "': conductivity must be >= 0");
}

/// ITU-R P.2040 frequency power-law material model: eps_r = a f^b, sigma = c f^d with f in GHz.
struct PowerLawMaterial {
    double a, b, c, d;

    double rel_permittivity(double frequency_hz) const { return a * std::pow(frequency_hz * 1e-9, b); }
    double conductivity(double frequency_hz) const { return c * std::pow(frequency_hz * 1e-9, d); }
};

namespace itu {
inline constexpr PowerLawMaterial concrete{5.31, 0.0, 0.0326, 0.8095};
inline constexpr PowerLawMaterial glass{6.27, 0.0, 0.0043, 1.1925};
} // namespace itu

/// Material ids every scenario table starts with. Scenario files may override their constants.
namespace materials {
inline constexpr MaterialId metal = 0;
inline constexpr MaterialId glass = 1;
inline constexpr MaterialId concrete = 2;
inline constexpr MaterialId ground = 3;
inline constexpr MaterialId body = 4;
} // namespace materials

/// Frequency at which the default dielectric constants are evaluated [Hz].
inline constexpr double default_material_frequency = 28e9;

class MaterialTable {
public:
    MaterialTable() = default;
    explicit MaterialTable(std::vector<Material> ms) : materials_(std::move(ms)) {
        for (const auto &m : materials_) validate(m);
    }

    std::size_t size() const noexcept { return materials_.size(); }
    const Material &at(MaterialId id) const {
        if (id >= materials_.size()) throw LookupError("material id " + std::to_string(id) + " out of range");
        return materials_[id];
    }
    const std::vector<Material> &all() const noexcept { return materials_; }

    std::optional<MaterialId> find(std::string_view name) const {
        for (std::size_t i = 0; i < materials_.size(); ++i)
            if (materials_[i].name == name) return static_cast<MaterialId>(i);
        return std::nullopt;
    }

    /// Replaces the material with the same name, or appends it.
    MaterialId upsert(Material m) {
        validate(m);
        if (auto id = find(m.name)) {
            materials_[*id] = std::move(m);
            return *id;
        }
        materials_.push_back(std::move(m));
        return static_cast<MaterialId>(materials_.size() - 1);
    }

    friend bool operator==(const MaterialTable &, const MaterialTable &) = default;

private:
    std::vector<Material> materials_;
};

/// metal, glass, concrete, ground, body at the ids in `materials`.
inline MaterialTable default_material_table() {
    const double f = default_material_frequency;
    return MaterialTable({
        {"metal", 1.0, 0.0, true},
        {"glass", itu::glass.rel_permittivity(f), itu::glass.conductivity(f), false},
        {"concrete", itu::concrete.rel_permittivity(f), itu::concrete.conductivity(f), false},
        {"ground", 4.0, 0.5, false},
        {"body", 50.0, 10.0, false},
    });
}

} // namespace mmrt

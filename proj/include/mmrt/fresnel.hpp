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

#include "mmrt/constants.hpp"
#include "mmrt/error.hpp"
#include "mmrt/material.hpp"

#include <cmath>
#include <complex>
#include <string>

namespace mmrt {

/// TE: electric field perpendicular to the plane of incidence. TM: field in the plane of incidence.
enum class Polarization { te, tm };

inline std::complex<double> complex_permittivity(const Material &m, double frequency) {
    return {m.rel_permittivity, -m.conductivity / (constants::two_pi * frequency * constants::vacuum_permittivity)};
}

/// Fresnel reflection coefficient of a half-space.
///
/// Sign convention: TE coefficients multiply the perpendicular component directly; TM
/// coefficients map the incident in-plane unit vector p_i = s x k_i to p_r = s x k_r, with
/// s = k_i x n / |k_i x n|. Under it a perfect conductor gives TE = -1 and TM = +1, and at normal
/// incidence TM = -TE, so the reflected field does not depend on how s is chosen there.
inline std::complex<double> fresnel_reflection(const Material &material, double cos_incidence, double frequency,
                                               Polarization component) {
    if (!(cos_incidence >= 0.0 && cos_incidence <= 1.0))
        throw DomainError("cos_incidence must be in [0, 1], got " + std::to_string(cos_incidence));
    if (material.perfect_conductor) return component == Polarization::te ? -1.0 : 1.0;
    const std::complex<double> eta = complex_permittivity(material, frequency);
    const double sin2 = 1.0 - cos_incidence * cos_incidence;
    const std::complex<double> root = std::sqrt(eta - sin2); // principal branch, Re >= 0
    if (component == Polarization::te) return (cos_incidence - root) / (cos_incidence + root);
    return (eta * cos_incidence - root) / (eta * cos_incidence + root);
}

} // namespace mmrt

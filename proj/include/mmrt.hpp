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
#include "mmrt/vec.hpp"
#include "mmrt/log.hpp"
#include "mmrt/material.hpp"
#include "mmrt/mesh.hpp"
#include "mmrt/templates.hpp"
#include "mmrt/road.hpp"
#include "mmrt/mobility.hpp"
#include "mmrt/json_io.hpp"
#include "mmrt/scenario.hpp"
#include "mmrt/scene.hpp"
#include "mmrt/bvh.hpp"
#include "mmrt/fresnel.hpp"
#include "mmrt/raytracer.hpp"
#include "mmrt/stats.hpp"
#include "mmrt/episode.hpp"
#include "mmrt/bench.hpp"

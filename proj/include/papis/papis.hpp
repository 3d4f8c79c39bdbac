// Copyright 2026 The PaPIS Authors. All Rights Reserved.
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

// Umbrella header for the PaPIS library.

#pragma once

#include "papis/analysis/categorize.hpp"
#include "papis/analysis/colormap.hpp"
#include "papis/analysis/heatmap.hpp"
#include "papis/analysis/report.hpp"
#include "papis/core/error.hpp"
#include "papis/core/filter.hpp"
#include "papis/core/image_io.hpp"
#include "papis/core/parallel.hpp"
#include "papis/core/plane.hpp"
#include "papis/core/rng.hpp"
#include "papis/features.hpp"
#include "papis/fts1.hpp"
#include "papis/metrics/baseline.hpp"
#include "papis/metrics/papis.hpp"
#include "papis/metrics/registry.hpp"
#include "papis/retinex.hpp"
#include "papis/wsi.hpp"

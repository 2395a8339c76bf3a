// SPDX-FileCopyrightText: Copyright (c) 2026 fdcap contributors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "fdcap/channel_model.hpp"
#include "fdcap/dmc_bounds.hpp"
#include "fdcap/experiments.hpp"
#include "fdcap/gap_analysis.hpp"
#include "fdcap/gdof.hpp"
#include "fdcap/marton.hpp"
#include "fdcap/mimo_bounds.hpp"
#include "fdcap/rate_region.hpp"
#include "fdcap/scalar_bounds.hpp"
#include "fdcap/schemes.hpp"

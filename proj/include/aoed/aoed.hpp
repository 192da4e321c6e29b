// Copyright 2026 The aoed Authors
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

#pragma once

// Umbrella header for the aoed library: A-optimal Bayesian sensor placement
// for linear-Gaussian inverse problems.

#include "aoed/csv.hpp"
#include "aoed/errors.hpp"
#include "aoed/greedy.hpp"
#include "aoed/informed.hpp"
#include "aoed/model.hpp"
#include "aoed/parallel.hpp"
#include "aoed/problems.hpp"
#include "aoed/relaxed.hpp"
#include "aoed/rng.hpp"
#include "aoed/simplex.hpp"

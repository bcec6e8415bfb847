// Copyright 2026 qnetsim authors
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

#pragma once

#include "qnetsim/analysis.hpp"
#include "qnetsim/distribution.hpp"
#include "qnetsim/experiment.hpp"
#include "qnetsim/mitigation.hpp"
#include "qnetsim/noise.hpp"
#include "qnetsim/oracles.hpp"
#include "qnetsim/protocols.hpp"
#include "qnetsim/rng.hpp"
#include "qnetsim/simulator.hpp"
#include "qnetsim/stats.hpp"

// Copyright 2026 The frlogic Authors
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
/**
 * @file
 * Everything: amplitudes, states, measurement histories, statements,
 * scenarios, the bundled library, the experiment language and reports.
 */
#pragma once

#include "error.hpp"
#include "exact_amplitude.hpp"
#include "amplitude_traits.hpp"
#include "state_space.hpp"
#include "measurement_engine.hpp"
#include "statement_logic.hpp"
#include "scenario.hpp"
#include "scenario_library.hpp"
#include "dsl.hpp"
#include "report.hpp"

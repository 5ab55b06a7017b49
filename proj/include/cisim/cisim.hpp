/**
 * Copyright 2026 The cisim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CISIM_CISIM_HPP
#define CISIM_CISIM_HPP

#include "cisim/analysis.hpp"
#include "cisim/circuit.hpp"
#include "cisim/common.hpp"
#include "cisim/equivalence.hpp"
#include "cisim/fock.hpp"
#include "cisim/fringe_dataset.hpp"
#include "cisim/interference.hpp"
#include "cisim/noise.hpp"
#include "cisim/permanent.hpp"
#include "cisim/random.hpp"
#include "cisim/version.hpp"

#endif

// Copyright 2026 The FFQRAM Authors
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

// Umbrella header for the ffqram library.

#pragma once

#include "ffqram/circuit.hpp"
#include "ffqram/dataset.hpp"
#include "ffqram/decompose.hpp"
#include "ffqram/error.hpp"
#include "ffqram/forking.hpp"
#include "ffqram/matrix.hpp"
#include "ffqram/noise.hpp"
#include "ffqram/qram.hpp"
#include "ffqram/qsvm.hpp"
#include "ffqram/schedule.hpp"
#include "ffqram/serialize.hpp"
#include "ffqram/statevector.hpp"

// Copyright 2026 the partdist authors
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

#include "partdist/classical.hpp"
#include "partdist/common.hpp"
#include "partdist/exp_indist.hpp"
#include "partdist/io.hpp"
#include "partdist/matops.hpp"
#include "partdist/measurement.hpp"
#include "partdist/quantum.hpp"
#include "partdist/states.hpp"
#include "partdist/verifier.hpp"

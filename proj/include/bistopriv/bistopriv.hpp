// Copyright 2026 The bistopriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Umbrella header for the bistochastic privacy toolkit.

#pragma once

#include "bistopriv/birkhoff.hpp"
#include "bistopriv/constructors.hpp"
#include "bistopriv/dataset.hpp"
#include "bistopriv/dataset_io.hpp"
#include "bistopriv/entropy.hpp"
#include "bistopriv/errors.hpp"
#include "bistopriv/majorization.hpp"
#include "bistopriv/matrix.hpp"
#include "bistopriv/pram.hpp"
#include "bistopriv/rng.hpp"
#include "bistopriv/table1.hpp"

// Copyright 2026 The chartail Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Umbrella header: the whole library in one include.

#ifndef CHARTAIL_CHARTAIL_HPP_
#define CHARTAIL_CHARTAIL_HPP_

#include "chartail/adjust.hpp"
#include "chartail/alignment.hpp"
#include "chartail/charset.hpp"
#include "chartail/ensemble.hpp"
#include "chartail/error.hpp"
#include "chartail/experiment.hpp"
#include "chartail/io.hpp"
#include "chartail/metrics.hpp"
#include "chartail/recognizer.hpp"
#include "chartail/synth.hpp"

#endif  // CHARTAIL_CHARTAIL_HPP_

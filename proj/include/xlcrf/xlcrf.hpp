// xlcrf/xlcrf.hpp
//
// Copyright 2026  The xlcrf authors
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
//
// Umbrella header for the whole library. The command-line layer (cli.hpp)
// stays out because it depends on a vendored argument parser.

#ifndef XLCRF_XLCRF_HPP_
#define XLCRF_XLCRF_HPP_

#include "xlcrf/core.hpp"
#include "xlcrf/eval.hpp"
#include "xlcrf/features.hpp"
#include "xlcrf/ge.hpp"
#include "xlcrf/inference.hpp"
#include "xlcrf/io.hpp"
#include "xlcrf/lbfgs.hpp"
#include "xlcrf/likelihood.hpp"
#include "xlcrf/projection.hpp"
#include "xlcrf/rng.hpp"
#include "xlcrf/synthetic.hpp"
#include "xlcrf/trainer.hpp"

#endif  // XLCRF_XLCRF_HPP_

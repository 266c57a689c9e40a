// Copyright 2026 The adauction Authors
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

#ifndef ADAUCTION_ADAUCTION_HPP_
#define ADAUCTION_ADAUCTION_HPP_

#include "adauction/cascade_wdp.hpp"
#include "adauction/core.hpp"
#include "adauction/distributions.hpp"
#include "adauction/linfrac.hpp"
#include "adauction/matching.hpp"
#include "adauction/mechanisms.hpp"
#include "adauction/mnl_wdp.hpp"
#include "adauction/oracle.hpp"
#include "adauction/random.hpp"

#endif  // ADAUCTION_ADAUCTION_HPP_

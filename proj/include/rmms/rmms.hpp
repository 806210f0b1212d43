// Copyright 2026 The Authors.
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

#ifndef RMMS_RMMS_HPP
#define RMMS_RMMS_HPP

#include "rmms/algorithms.hpp"
#include "rmms/bundle.hpp"
#include "rmms/errors.hpp"
#include "rmms/fairness.hpp"
#include "rmms/instance.hpp"
#include "rmms/oracle.hpp"
#include "rmms/random.hpp"
#include "rmms/rational.hpp"
#include "rmms/rmms_efx.hpp"
#include "rmms/shares.hpp"
#include "rmms/valuation.hpp"

#endif  // RMMS_RMMS_HPP

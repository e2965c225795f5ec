// Copyright 2026 The Walras Authors
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

#pragma once

#include "walras/core.hpp"
#include "walras/item_set.hpp"
#include "walras/instance.hpp"
#include "walras/io.hpp"
#include "walras/demand.hpp"
#include "walras/lyapunov.hpp"
#include "walras/lnat.hpp"
#include "walras/auction.hpp"
#include "walras/oracle.hpp"
#include "walras/report.hpp"

// Copyright 2026 The superchern Authors
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

#include <superchern/common.hpp>
#include <superchern/graded_core.hpp>
#include <superchern/fourier_grid.hpp>
#include <superchern/form_algebra.hpp>
#include <superchern/clifford.hpp>
#include <superchern/quadrature.hpp>
#include <superchern/parallel.hpp>
#include <superchern/superconnection.hpp>
#include <superchern/chern.hpp>
#include <superchern/dirac_spectral.hpp>
#include <superchern/eta.hpp>
#include <superchern/detline.hpp>
#include <superchern/json_io.hpp>

// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field XL-MIMO channel modelling and estimation library
// Copyright (C) 2026 The xlmimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef XLMIMO_BENCH_SELFTEST_HPP
#define XLMIMO_BENCH_SELFTEST_HPP

#include <string>
#include <vector>

namespace xlmimo::bench {

struct SelftestResult
{
    std::string name;
    bool pass = false;
    std::string detail;
};

// Quick invariant checks on small problems (a few seconds in total).
std::vector<SelftestResult> run_selftest();

} // namespace xlmimo::bench

#endif

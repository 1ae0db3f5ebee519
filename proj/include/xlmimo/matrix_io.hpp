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

#ifndef XLMIMO_MATRIX_IO_HPP
#define XLMIMO_MATRIX_IO_HPP

#include "xlmimo/polar_codebook.hpp"
#include "xlmimo/types.hpp"

#include <cstdint>
#include <filesystem>

namespace xlmimo {

// Dense complex matrix file, all fields little-endian:
//   u64 rows, u64 cols, f64 wavelength, f64 beta,
//   rows * cols pairs of f64 (re, im) in row-major order.
// Codebook caches store N x S atoms; imported channels store N2 x N1 with beta = 0.
struct MatrixFile
{
    double wavelength = 0.0;
    double beta = 0.0;
    CMat data;
};

void write_matrix_file(const std::filesystem::path &path, const MatrixFile &file);
MatrixFile read_matrix_file(const std::filesystem::path &path);

void save_codebook_cache(const std::filesystem::path &path, const PolarCodebook &codebook);

} // namespace xlmimo

#endif

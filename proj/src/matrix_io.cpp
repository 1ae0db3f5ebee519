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

#include "xlmimo/matrix_io.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <stdexcept>

namespace xlmimo {

namespace {

void put_u64(std::ostream &os, std::uint64_t v)
{
    std::array<char, 8> b{};
    for (int i = 0; i < 8; ++i)
        b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xFFu);
    os.write(b.data(), 8);
}

void put_f64(std::ostream &os, double v) { put_u64(os, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream &is)
{
    std::array<unsigned char, 8> b{};
    if (!is.read(reinterpret_cast<char *>(b.data()), 8))
        throw std::runtime_error("matrix file truncated");
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i)
        v = (v << 8) | b[static_cast<std::size_t>(i)];
    return v;
}

double get_f64(std::istream &is) { return std::bit_cast<double>(get_u64(is)); }

} // namespace

void write_matrix_file(const std::filesystem::path &path, const MatrixFile &file)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    put_u64(os, static_cast<std::uint64_t>(file.data.rows()));
    put_u64(os, static_cast<std::uint64_t>(file.data.cols()));
    put_f64(os, file.wavelength);
    put_f64(os, file.beta);
    for (Eigen::Index i = 0; i < file.data.rows(); ++i)
        for (Eigen::Index j = 0; j < file.data.cols(); ++j)
        {
            put_f64(os, file.data(i, j).real());
            put_f64(os, file.data(i, j).imag());
        }
    if (!os)
        throw std::runtime_error("write failed: " + path.string());
}

MatrixFile read_matrix_file(const std::filesystem::path &path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open " + path.string());
    const auto rows = get_u64(is);
    const auto cols = get_u64(is);
    // Guard against garbage headers before allocating.
    constexpr std::uint64_t limit = std::uint64_t{1} << 32;
    if (rows == 0 || cols == 0 || rows > limit || cols > limit || rows * cols > limit)
        throw std::runtime_error("matrix file has an implausible shape: " + path.string());

    MatrixFile f;
    f.wavelength = get_f64(is);
    f.beta = get_f64(is);
    f.data.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < f.data.rows(); ++i)
        for (Eigen::Index j = 0; j < f.data.cols(); ++j)
        {
            const double re = get_f64(is);
            const double im = get_f64(is);
            f.data(i, j) = cplx(re, im);
        }
    return f;
}

void save_codebook_cache(const std::filesystem::path &path, const PolarCodebook &codebook)
{
    write_matrix_file(path, MatrixFile{codebook.wavelength, codebook.beta, codebook.atoms});
}

} // namespace xlmimo

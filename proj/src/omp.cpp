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

#include "xlmimo/omp.hpp"

#include <limits>
#include <stdexcept>

namespace xlmimo {

AtomPair split_flat_index(std::size_t n_star, std::size_t s2)
{
    if (n_star == 0 || s2 == 0)
        throw std::invalid_argument("split_flat_index: index and S2 must be >= 1");
    return AtomPair{(n_star - 1) / s2 + 1, (n_star - 1) % s2 + 1};
}

OmpResult estimate_nlos(const CMat &y, const RMat &p, const RMat &w, const PolarCodebook &dt,
                        const PolarCodebook &dr, std::size_t sparsity)
{
    if (sparsity == 0)
        throw std::invalid_argument("estimate_nlos: sparsity must be >= 1");
    if (dt.atoms.rows() != p.rows() || dr.atoms.rows() != w.cols())
        throw std::invalid_argument("estimate_nlos: codebooks do not match the array sizes");
    if (y.rows() != w.rows() || y.cols() != p.cols())
        throw std::invalid_argument("estimate_nlos: Y must be Nrf x M");
    const Eigen::Index s1 = dt.atoms.cols();
    const Eigen::Index s2 = dr.atoms.cols();
    if (static_cast<std::size_t>(s1 * s2) < sparsity)
        throw std::invalid_argument("estimate_nlos: sparsity exceeds the dictionary size");

    const CMat at = dt.atoms.adjoint() * p.cast<cplx>(); // S1 x M
    const CMat ar = w.cast<cplx>() * dr.atoms;           // Nrf x S2
    const CMat ar_h = ar.adjoint();
    const CMat at_h = at.adjoint();
    const CVec yv = Eigen::Map<const CVec>(y.data(), y.size());

    OmpResult out;
    CMat residual = y;
    out.residual_norms.push_back(residual.norm());
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> used =
        Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(s2, s1, false);
    CMat a(y.size(), 0);

    for (std::size_t l = 0; l < sparsity; ++l)
    {
        const CMat z = ar_h * residual * at_h; // S2 x S1
        double best = -1.0;
        Eigen::Index bi = 0, bj = 0;
        for (Eigen::Index j = 0; j < s1; ++j)
            for (Eigen::Index i = 0; i < s2; ++i)
            {
                if (used(i, j))
                    continue;
                const double v = std::norm(z(i, j));
                if (v > best)
                {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        used(bi, bj) = true;
        out.support.push_back(AtomPair{static_cast<std::size_t>(bj), static_cast<std::size_t>(bi)});

        const CMat outer = ar.col(bi) * at.row(bj); // Nrf x M
        a.conservativeResize(Eigen::NoChange, a.cols() + 1);
        a.col(a.cols() - 1) = Eigen::Map<const CVec>(outer.data(), outer.size());

        CMat gram = a.adjoint() * a;
        const CVec rhs = a.adjoint() * yv;
        Eigen::LDLT<CMat> ldlt(gram);
        const double tr = std::real(gram.trace()) / static_cast<double>(gram.rows());
        bool ill = ldlt.info() != Eigen::Success || !ldlt.isPositive();
        if (!ill)
        {
            const RVec d = ldlt.vectorD().real();
            ill = d.minCoeff() <= 1e-12 * d.maxCoeff();
        }
        if (ill)
        {
            gram += CMat::Identity(gram.rows(), gram.cols()) * (1e-10 * std::max(tr, 1e-300));
            ldlt.compute(gram);
            out.regularized = true;
        }
        out.coefficients = ldlt.solve(rhs);
        const CVec rv = yv - a * out.coefficients;
        residual = Eigen::Map<const CMat>(rv.data(), y.rows(), y.cols());
        out.residual_norms.push_back(residual.norm());
    }

    CMat h = CMat::Zero(dr.atoms.rows(), dt.atoms.rows());
    for (std::size_t i = 0; i < out.support.size(); ++i)
        h.noalias() += out.coefficients(static_cast<Eigen::Index>(i)) *
                       dr.atoms.col(static_cast<Eigen::Index>(out.support[i].rx)) *
                       dt.atoms.col(static_cast<Eigen::Index>(out.support[i].tx)).adjoint();
    out.channel.nlos_part = h;
    out.channel.entries = std::move(h);
    return out;
}

} // namespace xlmimo

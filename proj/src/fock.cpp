// Copyright 2026 The slhnet authors
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

#include "slhnet/fock.hpp"

namespace slhnet::fock {

Index fock_dim(int m, int cutoff) {
    Index d = 1;
    for (int j = 0; j < m; ++j) d *= cutoff;
    return d;
}

CMat mode_annihilator(int m, int cutoff, int j) {
    if (j < 0 || j >= m) throw InvalidArgument("mode_annihilator: mode out of range");
    CMat a = annihilator(cutoff);
    CMat left = CMat::Identity(fock_dim(j, cutoff), fock_dim(j, cutoff));
    CMat right = CMat::Identity(fock_dim(m - j - 1, cutoff), fock_dim(m - j - 1, cutoff));
    return kron(kron(left, a), right);
}

std::vector<std::vector<Index>> number_sectors(int m, int cutoff) {
    const Index dim = fock_dim(m, cutoff);
    std::vector<std::vector<Index>> sectors(m * (cutoff - 1) + 1);
    for (Index b = 0; b < dim; ++b) {
        Index rem = b;
        Index total = 0;
        for (int j = 0; j < m; ++j) {
            total += rem % cutoff;
            rem /= cutoff;
        }
        sectors[total].push_back(b);
    }
    return sectors;
}

CMat y_operator(const CMat& a_blocks, int m, Index d, int cutoff) {
    if (a_blocks.rows() != m * d || a_blocks.cols() != m * d) {
        throw InvalidArgument("y_operator: A must be (m*d) x (m*d)");
    }
    const Index fdim = fock_dim(m, cutoff);
    CMat y = CMat::Zero(d * fdim, d * fdim);
    for (int j = 0; j < m; ++j) {
        CMat adag_j = mode_annihilator(m, cutoff, j).adjoint();
        for (int l = 0; l < m; ++l) {
            CMat num = adag_j * mode_annihilator(m, cutoff, l);
            y += kron(a_blocks.block(j * d, l * d, d, d), num);
        }
    }
    return y;
}

std::vector<Index> joint_indices(Index d, Index fdim, const std::vector<Index>& fock_idx) {
    std::vector<Index> out;
    out.reserve(d * fock_idx.size());
    for (Index i = 0; i < d; ++i) {
        for (Index f : fock_idx) out.push_back(i * fdim + f);
    }
    return out;
}

CMat restrict_to(const CMat& m, const std::vector<Index>& idx) {
    CMat out(static_cast<Index>(idx.size()), static_cast<Index>(idx.size()));
    for (Index r = 0; r < out.rows(); ++r) {
        for (Index c = 0; c < out.cols(); ++c) out(r, c) = m(idx[r], idx[c]);
    }
    return out;
}

}  // namespace slhnet::fock

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

#pragma once

#include <random>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "slhnet/operators.hpp"

namespace slhnet::testing {

using Rng = std::mt19937_64;

inline CMat random_matrix(Rng& rng, Index r, Index c) {
    std::normal_distribution<double> g;
    CMat m(r, c);
    for (Index i = 0; i < r; ++i) {
        for (Index j = 0; j < c; ++j) m(i, j) = Complex(g(rng), g(rng));
    }
    return m;
}

inline CMat random_hermitian(Rng& rng, Index d) {
    CMat m = random_matrix(rng, d, d);
    return 0.5 * (m + m.adjoint());
}

inline CMat random_unitary(Rng& rng, Index d) {
    CMat m = random_matrix(rng, d, d);
    Eigen::HouseholderQR<CMat> qr(m);
    CMat q = qr.householderQ();
    CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index i = 0; i < d; ++i) {
        Complex ph = r(i, i) / std::abs(r(i, i));
        q.col(i) *= ph;
    }
    return q;
}

/// Random matrix with all singular values in [smin, smin + 1].
inline CMat random_full_rank(Rng& rng, Index r, Index c, double smin = 0.5) {
    CMat m = random_matrix(rng, r, c);
    Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    std::uniform_real_distribution<double> u(smin, smin + 1.0);
    Eigen::VectorXd s(svd.singularValues().size());
    for (Index i = 0; i < s.size(); ++i) s(i) = u(rng);
    return svd.matrixU() * s.asDiagonal() * svd.matrixV().adjoint();
}

/// Random matrix of the given rank (singular values in [0.5, 1.5]).
inline CMat random_rank(Rng& rng, Index r, Index c, Index rank) {
    CMat left = random_full_rank(rng, r, rank);
    CMat right = random_full_rank(rng, rank, c);
    return left * right;
}

/// A generalized inverse A^+ + (I - A^+A) R + S (I - A A^+) with random R, S.
inline CMat random_generalized_inverse(Rng& rng, const CMat& a, double scale = 1.0) {
    CMat ap = moore_penrose(a);
    CMat r = scale * random_matrix(rng, a.cols(), a.rows());
    CMat s = scale * random_matrix(rng, a.cols(), a.rows());
    CMat il = CMat::Identity(a.cols(), a.cols()) - ap * a;
    CMat ir = CMat::Identity(a.rows(), a.rows()) - a * ap;
    return ap + il * r + s * ir;
}

/// Strictly Hurwitz block A = -1/2 C*C - i Omega from a full-rank C.
inline CMat random_hurwitz(Rng& rng, const CMat& c_block) {
    CMat omega = random_hermitian(rng, c_block.cols());
    return -0.5 * (c_block.adjoint() * c_block) - Complex(0, 1) * omega;
}

}  // namespace slhnet::testing

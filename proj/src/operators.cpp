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

#include "slhnet/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace slhnet {

namespace {

void check_finite(const CMat& m, const char* who) {
    if (!m.allFinite()) {
        throw InvalidArgument(std::string(who) + ": entries must be finite");
    }
}

}  // namespace

HilbertSpace::HilbertSpace(std::vector<SpaceFactor> factors)
    : factors_(std::move(factors)) {
    std::set<std::string> seen;
    total_ = 1;
    for (const auto& f : factors_) {
        if (f.dim < 1) {
            throw InvalidArgument("HilbertSpace: factor '" + f.label +
                                  "' has dimension < 1");
        }
        if (!seen.insert(f.label).second) {
            throw InvalidArgument("HilbertSpace: duplicate factor label '" +
                                  f.label + "'");
        }
        total_ *= f.dim;
    }
}

HilbertSpace HilbertSpace::single(const std::string& label, Index dim) {
    return HilbertSpace({SpaceFactor{label, dim}});
}

bool HilbertSpace::has_factor(const std::string& label) const {
    for (const auto& f : factors_) {
        if (f.label == label) return true;
    }
    return false;
}

Index HilbertSpace::factor_index(const std::string& label) const {
    for (Index i = 0; i < static_cast<Index>(factors_.size()); ++i) {
        if (factors_[i].label == label) return i;
    }
    throw InvalidArgument("HilbertSpace: unknown factor label '" + label + "'");
}

HilbertSpace HilbertSpace::tensor(const HilbertSpace& other) const {
    std::vector<SpaceFactor> fs = factors_;
    fs.insert(fs.end(), other.factors_.begin(), other.factors_.end());
    return HilbertSpace(std::move(fs));
}

Operator::Operator(HilbertSpace s, CMat m) : space(std::move(s)), mat(std::move(m)) {
    if (mat.rows() != mat.cols()) {
        throw InvalidArgument("Operator: matrix must be square");
    }
    if (mat.rows() != space.total_dim()) {
        throw InvalidArgument("Operator: matrix size does not match space dimension");
    }
    check_finite(mat, "Operator");
}

CMat kron(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

CMat embed_matrix(const CMat& m, const HilbertSpace& from, const HilbertSpace& to) {
    if (m.rows() != m.cols() || m.rows() != from.total_dim()) {
        throw InvalidArgument("embed_matrix: operator does not match source space");
    }
    const auto& tf = to.factors();
    const Index nf = static_cast<Index>(tf.size());

    // Positions of the source factors inside the target, in source order.
    std::vector<Index> src_pos;
    std::vector<char> is_src(nf, 0);
    for (const auto& f : from.factors()) {
        Index p = to.factor_index(f.label);  // throws on unknown label
        if (tf[p].dim != f.dim) {
            throw InvalidArgument("embed_matrix: factor '" + f.label +
                                  "' has dimension " + std::to_string(tf[p].dim) +
                                  " in target, expected " + std::to_string(f.dim));
        }
        src_pos.push_back(p);
        is_src[p] = 1;
    }

    const Index total = to.total_dim();
    // For each target index, its index within the source factors (in source
    // factor order) and within the remaining factors.
    std::vector<Index> op_idx(total), rest_idx(total);
    std::vector<Index> digits(nf);
    for (Index t = 0; t < total; ++t) {
        Index rem = t;
        for (Index f = nf - 1; f >= 0; --f) {
            digits[f] = rem % tf[f].dim;
            rem /= tf[f].dim;
        }
        Index io = 0;
        for (Index s = 0; s < static_cast<Index>(src_pos.size()); ++s) {
            io = io * tf[src_pos[s]].dim + digits[src_pos[s]];
        }
        Index ir = 0;
        for (Index f = 0; f < nf; ++f) {
            if (!is_src[f]) ir = ir * tf[f].dim + digits[f];
        }
        op_idx[t] = io;
        rest_idx[t] = ir;
    }

    CMat out = CMat::Zero(total, total);
    for (Index r = 0; r < total; ++r) {
        for (Index c = 0; c < total; ++c) {
            if (rest_idx[r] == rest_idx[c]) out(r, c) = m(op_idx[r], op_idx[c]);
        }
    }
    return out;
}

Operator tensor_embed(const Operator& op, const HilbertSpace& target) {
    return Operator(target, embed_matrix(op.mat, op.space, target));
}

CMat annihilator(int cutoff) {
    if (cutoff < 2) {
        throw InvalidArgument("annihilator: cutoff must be >= 2");
    }
    CMat a = CMat::Zero(cutoff, cutoff);
    for (int n = 1; n < cutoff; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

double default_rank_tol(const CMat& m, double sigma_max) {
    const double eps = std::numeric_limits<double>::epsilon();
    return static_cast<double>(std::max(m.rows(), m.cols())) * eps * sigma_max;
}

CMat moore_penrose(const CMat& m, double rank_tol) {
    if (m.rows() == 0 || m.cols() == 0) return CMat::Zero(m.cols(), m.rows());
    check_finite(m, "moore_penrose");
    Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    const double tol = rank_tol >= 0.0 ? rank_tol : default_rank_tol(m, smax);
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    for (Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > tol) inv(i) = 1.0 / sv(i);
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

double image_inclusion_residual(const CMat& b, const CMat& a) {
    if (b.rows() != a.rows()) {
        throw InvalidArgument("image_inclusion: row dimensions differ");
    }
    CMat proj = a * moore_penrose(a);
    CMat res = b - proj * b;
    return res.norm() / std::max(1.0, b.norm());
}

double kernel_inclusion_residual(const CMat& a, const CMat& c) {
    if (a.cols() != c.cols()) {
        throw InvalidArgument("kernel_inclusion: column dimensions differ");
    }
    CMat proj = moore_penrose(a) * a;
    CMat res = c - c * proj;
    return res.norm() / std::max(1.0, c.norm());
}

bool image_inclusion(const CMat& b, const CMat& a, double tol) {
    return image_inclusion_residual(b, a) <= tol;
}

bool kernel_inclusion(const CMat& a, const CMat& c, double tol) {
    return kernel_inclusion_residual(a, c) <= tol;
}

double hermitian_part_max_eigenvalue(const CMat& a) {
    if (a.rows() != a.cols()) {
        throw InvalidArgument("hermitian_part_max_eigenvalue: matrix must be square");
    }
    if (a.rows() == 0) return -std::numeric_limits<double>::infinity();
    CMat h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

bool is_strictly_hurwitz(const CMat& a, double margin) {
    if (a.rows() == 0) return true;
    return hermitian_part_max_eigenvalue(a) < -margin;
}

CMat kernel_basis(const CMat& a, double rank_tol) {
    if (a.cols() == 0) return CMat::Zero(0, 0);
    if (a.rows() == 0) return CMat::Identity(a.cols(), a.cols());
    Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    const double tol = rank_tol >= 0.0 ? rank_tol : default_rank_tol(a, smax);
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > tol) ++rank;
    }
    return svd.matrixV().rightCols(a.cols() - rank);
}

SubspaceBasis kernel_basis(const Operator& a, double rank_tol) {
    return SubspaceBasis{a.space, kernel_basis(a.mat, rank_tol)};
}

double condition_number(const CMat& a) {
    if (a.rows() == 0 || a.cols() == 0) return 1.0;
    Eigen::JacobiSVD<CMat> svd(a);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (smin <= 0.0) return std::numeric_limits<double>::infinity();
    return sv(0) / smin;
}

}  // namespace slhnet

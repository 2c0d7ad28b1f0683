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

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "slhnet/errors.hpp"

namespace slhnet {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Index = Eigen::Index;

/// One labeled tensor factor of a Hilbert space.
struct SpaceFactor {
    std::string label;
    Index dim = 1;

    bool operator==(const SpaceFactor&) const = default;
};

/// An ordered tensor product of labeled finite-dimensional factors.
/// The empty product is the scalar space C (dimension 1). Indexing is
/// row-major: the rightmost factor index varies fastest.
class HilbertSpace {
public:
    HilbertSpace() = default;
    explicit HilbertSpace(std::vector<SpaceFactor> factors);

    static HilbertSpace scalar() { return HilbertSpace{}; }
    static HilbertSpace single(const std::string& label, Index dim);

    const std::vector<SpaceFactor>& factors() const { return factors_; }
    Index total_dim() const { return total_; }
    bool has_factor(const std::string& label) const;
    Index factor_index(const std::string& label) const;

    /// Tensor product; factor labels must be disjoint.
    HilbertSpace tensor(const HilbertSpace& other) const;

    bool operator==(const HilbertSpace&) const = default;

private:
    std::vector<SpaceFactor> factors_;
    Index total_ = 1;
};

/// A dense operator tagged with the space it acts on.
struct Operator {
    HilbertSpace space;
    CMat mat;

    Operator() = default;
    Operator(HilbertSpace s, CMat m);

    Index dim() const { return mat.rows(); }
    Operator adjoint() const { return Operator(space, mat.adjoint()); }
};

/// Orthonormal columns spanning a subspace.
struct SubspaceBasis {
    HilbertSpace space;
    CMat columns;

    Index rank() const { return columns.cols(); }
};

// --- embeddings --------------------------------------------------------

/// Embeds `m`, acting on `from`, into `to` as m (x) identity, with indices
/// permuted to `to`'s factor order. Every factor of `from` must appear in
/// `to` with the same dimension.
CMat embed_matrix(const CMat& m, const HilbertSpace& from, const HilbertSpace& to);

Operator tensor_embed(const Operator& op, const HilbertSpace& target);

CMat kron(const CMat& a, const CMat& b);

// --- ladder operators ---------------------------------------------------

/// Truncated bosonic annihilator: a[n-1, n] = sqrt(n) for n = 1..cutoff-1.
CMat annihilator(int cutoff);

// --- pseudoinverse and subspace tests ------------------------------------

/// Default SVD rank cutoff: max(rows, cols) * eps * sigma_max.
double default_rank_tol(const CMat& m, double sigma_max);

/// Moore-Penrose inverse via SVD. Singular values <= rank_tol are treated
/// as zero; rank_tol < 0 selects the default cutoff. The zero matrix maps
/// to the (transposed) zero matrix.
CMat moore_penrose(const CMat& m, double rank_tol = -1.0);

inline constexpr double kInclusionTol = 1e-9;

/// True iff im(B) is contained in im(A), tested as
/// ||(I - A A^+) B||_F <= tol * max(1, ||B||_F).
bool image_inclusion(const CMat& b, const CMat& a, double tol = kInclusionTol);

/// True iff ker(A) is contained in ker(C), tested as
/// ||C (I - A^+ A)||_F <= tol * max(1, ||C||_F).
bool kernel_inclusion(const CMat& a, const CMat& c, double tol = kInclusionTol);

double image_inclusion_residual(const CMat& b, const CMat& a);
double kernel_inclusion_residual(const CMat& a, const CMat& c);

/// Strict Hurwitz stability: Re<phi, A phi> < 0 for all phi != 0,
/// i.e. lambda_max((A + A*)/2) < -margin. An empty matrix passes.
bool is_strictly_hurwitz(const CMat& a, double margin = 1e-9);

/// Largest eigenvalue of the Hermitian part (the Hurwitz margin is its
/// negation). Returns -inf for an empty matrix.
double hermitian_part_max_eigenvalue(const CMat& a);

/// Orthonormal basis of the numerical null space (right singular vectors
/// with sigma <= rank_tol; rank_tol < 0 selects the default cutoff).
CMat kernel_basis(const CMat& a, double rank_tol = -1.0);

SubspaceBasis kernel_basis(const Operator& a, double rank_tol = -1.0);

/// sigma_max / sigma_min; inf when singular, 1 for empty matrices.
double condition_number(const CMat& a);

}  // namespace slhnet

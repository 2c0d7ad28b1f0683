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

#include <vector>

#include "slhnet/operators.hpp"

namespace slhnet::fock {

/// Dimension cutoff^m of m truncated oscillators.
Index fock_dim(int m, int cutoff);

/// Annihilator of mode j (0-based) embedded on Fock(cutoff)^(x)m.
/// Mode 0 is the leftmost (slowest-varying) tensor factor.
CMat mode_annihilator(int m, int cutoff, int j);

/// Basis indices grouped by total excitation number N = 0 .. m*(cutoff-1).
std::vector<std::vector<Index>> number_sectors(int m, int cutoff);

/// Y = sum_jl A_jl (x) a_j^* a_l on hilbert (dim d) (x) Fock(cutoff)^(x)m,
/// where A is an (m*d) x (m*d) matrix of d x d mode blocks. Y preserves
/// total excitation number exactly, truncation included.
CMat y_operator(const CMat& a_blocks, int m, Index d, int cutoff);

/// Indices of the joint space hilbert(d) (x) Fock spanning the subspace
/// where the oscillators occupy the given Fock basis indices.
std::vector<Index> joint_indices(Index d, Index fdim, const std::vector<Index>& fock_idx);

/// Submatrix of `m` on the given joint-space indices (rows and columns).
CMat restrict_to(const CMat& m, const std::vector<Index>& idx);

}  // namespace slhnet::fock

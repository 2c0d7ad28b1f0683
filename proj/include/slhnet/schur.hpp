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

#include <array>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "slhnet/operators.hpp"

namespace slhnet::schur {

using LabelList = std::vector<std::string>;

/// A named tiling of [0, total) into contiguous half-open index ranges,
/// one per label, in declaration order.
class Partition {
public:
    Partition() = default;
    static Partition from_sizes(const std::vector<std::pair<std::string, Index>>& parts);

    Index total() const { return total_; }
    const LabelList& labels() const { return labels_; }
    bool has(const std::string& label) const;
    Index size_of(const std::string& label) const;
    Index offset_of(const std::string& label) const;

    /// The given label set reordered to declaration order. Rejects unknown
    /// labels, duplicates and the empty set.
    LabelList ordered(const LabelList& which) const;
    LabelList complement(const LabelList& which) const;
    Index size_of_set(const LabelList& which) const;

    /// Sub-partition containing only `which` (declaration order), re-based
    /// at offset zero.
    Partition restricted(const LabelList& which) const;

    bool operator==(const Partition& o) const;

private:
    LabelList labels_;
    std::unordered_map<std::string, std::pair<Index, Index>> ranges_;  // offset, size
    Index total_ = 0;
};

/// A dense matrix with named index partitions on rows and columns.
struct BlockMatrix {
    Partition rows;
    Partition cols;
    CMat entries;

    BlockMatrix() = default;
    BlockMatrix(Partition r, Partition c, CMat e);

    CMat block(const std::string& row_label, const std::string& col_label) const;
};

/// The concatenated sub-matrix M_{A,B}, blocks in declared label order.
CMat sub_block(const BlockMatrix& m, const LabelList& a, const LabelList& b);

struct SchurOptions {
    bool checked = true;           // verify well-definedness before complementing
    double inclusion_tol = kInclusionTol;
    double rank_tol = -1.0;        // pseudoinverse cutoff; < 0 selects default
};

struct WellDefinedReport {
    bool im_ok = false;
    bool ker_ok = false;
    double im_residual = 0.0;
    double ker_residual = 0.0;

    bool ok() const { return im_ok && ker_ok; }
};

/// Checks the two inclusions under which the generalized complement of
/// M_{A,B} relative to M_{C,D} does not depend on the choice of generalized
/// inverse: im(M_{C,B\D}) within im(M_{C,D}) and ker(M_{C,D}) within
/// ker(M_{A\C,D}).
WellDefinedReport check_well_defined(const BlockMatrix& m, const LabelList& a,
                                     const LabelList& b, const LabelList& c,
                                     const LabelList& d,
                                     double tol = kInclusionTol);

WellDefinedReport check_well_defined(const BlockMatrix& m, const LabelList& c,
                                     const LabelList& d,
                                     double tol = kInclusionTol);

/// Generalized Schur complement
///   M_{A,B} / M_{C,D} = M_{A\C,B\D} - M_{A\C,D} (M_{C,D})^- M_{C,B\D}
/// with the Moore-Penrose inverse as the canonical generalized inverse.
/// The result is partitioned by A\C rows and B\D cols. When opts.checked,
/// a well-definedness violation raises PreconditionError naming the failed
/// inclusion.
BlockMatrix generalized_schur(const BlockMatrix& m, const LabelList& a,
                              const LabelList& b, const LabelList& c,
                              const LabelList& d, const SchurOptions& opts = {});

BlockMatrix generalized_schur(const BlockMatrix& m, const LabelList& c,
                              const LabelList& d, const SchurOptions& opts = {});

/// Block generalized inverse of the 2x2 partition (M_{C,D} in the corner):
///   [[A^- + A^- B X^- C A^-, -A^- B X^-], [-X^- C A^-, X^-]],  X = M/A.
/// Requires im(B) within im(A) and ker(A) within ker(C); the result then
/// satisfies M M^- M = M. Returns a (cols.total x rows.total) matrix.
CMat banachiewicz_pinv(const BlockMatrix& m, const LabelList& c,
                       const LabelList& d, const SchurOptions& opts = {});

struct SuccessiveResult {
    BlockMatrix via_c_first;  // (M/M_CC)/(M/M_CC)_BB
    BlockMatrix via_b_first;  // (M/M_BB)/(M/M_BB)_CC
    BlockMatrix one_shot;     // M/M_{BuC,BuC}
    double max_deviation = 0.0;  // largest pairwise difference, max-abs norm
};

/// Both orders of successive complementation over the 3-part partition
/// (A = remaining labels, B, C), together with the one-shot complement
/// they must both equal. Requires identical row/col partitions. When
/// opts.checked, the six well-definedness conditions are verified first
/// and a failure names the condition.
SuccessiveResult successive_complement(const BlockMatrix& m, const LabelList& b,
                                       const LabelList& c,
                                       const SchurOptions& opts = {});

struct LemmaNewReport {
    // In order:
    //  1. ker [[M_BB, M_BC], [M_CB, M_CC]]  within  ker [M_AB M_AC]
    //  2. im  [M_BA; M_CA]                  within  im  of that 2x2 block
    //  3. ker M_CC within ker M_BC
    //  4. im  M_CB within im  M_CC
    //  5. ker M_BB within ker M_CB
    //  6. im  M_BC within im  M_BB
    std::array<bool, 6> ok{};
    std::array<double, 6> residual{};

    bool all() const;
    std::string failed_list() const;
};

/// Evaluates the six sufficient conditions under which all Schur
/// complements appearing in the successive complementation rule are
/// well-defined.
LemmaNewReport check_lemma_new(const BlockMatrix& m, const LabelList& a,
                               const LabelList& b, const LabelList& c,
                               double tol = kInclusionTol);

}  // namespace slhnet::schur

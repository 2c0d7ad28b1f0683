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

#include "slhnet/schur.hpp"

#include <algorithm>
#include <set>

namespace slhnet::schur {

Partition Partition::from_sizes(const std::vector<std::pair<std::string, Index>>& parts) {
    Partition p;
    Index off = 0;
    for (const auto& [label, size] : parts) {
        if (size < 0) throw InvalidArgument("Partition: negative block size");
        if (p.ranges_.count(label)) {
            throw InvalidArgument("Partition: duplicate label '" + label + "'");
        }
        p.labels_.push_back(label);
        p.ranges_[label] = {off, size};
        off += size;
    }
    p.total_ = off;
    return p;
}

bool Partition::has(const std::string& label) const { return ranges_.count(label) > 0; }

Index Partition::size_of(const std::string& label) const {
    auto it = ranges_.find(label);
    if (it == ranges_.end()) throw InvalidArgument("Partition: unknown label '" + label + "'");
    return it->second.second;
}

Index Partition::offset_of(const std::string& label) const {
    auto it = ranges_.find(label);
    if (it == ranges_.end()) throw InvalidArgument("Partition: unknown label '" + label + "'");
    return it->second.first;
}

LabelList Partition::ordered(const LabelList& which) const {
    if (which.empty()) throw InvalidArgument("Partition: empty label set");
    std::set<std::string> want;
    for (const auto& l : which) {
        if (!has(l)) throw InvalidArgument("Partition: unknown label '" + l + "'");
        if (!want.insert(l).second) {
            throw InvalidArgument("Partition: duplicate label '" + l + "' in set");
        }
    }
    LabelList out;
    for (const auto& l : labels_) {
        if (want.count(l)) out.push_back(l);
    }
    return out;
}

LabelList Partition::complement(const LabelList& which) const {
    std::set<std::string> drop;
    for (const auto& l : which) {
        if (!has(l)) throw InvalidArgument("Partition: unknown label '" + l + "'");
        drop.insert(l);
    }
    LabelList out;
    for (const auto& l : labels_) {
        if (!drop.count(l)) out.push_back(l);
    }
    return out;
}

Index Partition::size_of_set(const LabelList& which) const {
    Index n = 0;
    for (const auto& l : which) n += size_of(l);
    return n;
}

Partition Partition::restricted(const LabelList& which) const {
    LabelList ord = ordered(which);
    std::vector<std::pair<std::string, Index>> parts;
    for (const auto& l : ord) parts.emplace_back(l, size_of(l));
    return Partition::from_sizes(parts);
}

bool Partition::operator==(const Partition& o) const {
    if (labels_ != o.labels_) return false;
    for (const auto& l : labels_) {
        if (size_of(l) != o.size_of(l)) return false;
    }
    return true;
}

BlockMatrix::BlockMatrix(Partition r, Partition c, CMat e)
    : rows(std::move(r)), cols(std::move(c)), entries(std::move(e)) {
    if (entries.rows() != rows.total() || entries.cols() != cols.total()) {
        throw InvalidArgument("BlockMatrix: entries shape does not match partitions");
    }
}

CMat BlockMatrix::block(const std::string& r, const std::string& c) const {
    return entries.block(rows.offset_of(r), cols.offset_of(c), rows.size_of(r),
                         cols.size_of(c));
}

CMat sub_block(const BlockMatrix& m, const LabelList& a, const LabelList& b) {
    LabelList ra = m.rows.ordered(a);
    LabelList cb = m.cols.ordered(b);
    CMat out(m.rows.size_of_set(ra), m.cols.size_of_set(cb));
    Index ro = 0;
    for (const auto& rl : ra) {
        Index co = 0;
        for (const auto& cl : cb) {
            out.block(ro, co, m.rows.size_of(rl), m.cols.size_of(cl)) = m.block(rl, cl);
            co += m.cols.size_of(cl);
        }
        ro += m.rows.size_of(rl);
    }
    return out;
}

namespace {

// Validates the nested label structure of a complement and returns the
// ordered versions of all four sets.
struct ComplementSets {
    LabelList a, b, c, d, a_rest, b_rest;
};

ComplementSets resolve_sets(const BlockMatrix& m, const LabelList& a,
                            const LabelList& b, const LabelList& c,
                            const LabelList& d) {
    ComplementSets s;
    s.a = m.rows.ordered(a);
    s.b = m.cols.ordered(b);
    s.c = m.rows.ordered(c);
    s.d = m.cols.ordered(d);
    std::set<std::string> sa(s.a.begin(), s.a.end());
    for (const auto& l : s.c) {
        if (!sa.count(l)) throw InvalidArgument("generalized_schur: C must be a subset of A");
    }
    std::set<std::string> sb(s.b.begin(), s.b.end());
    for (const auto& l : s.d) {
        if (!sb.count(l)) throw InvalidArgument("generalized_schur: D must be a subset of B");
    }
    for (const auto& l : s.a) {
        if (!std::count(s.c.begin(), s.c.end(), l)) s.a_rest.push_back(l);
    }
    for (const auto& l : s.b) {
        if (!std::count(s.d.begin(), s.d.end(), l)) s.b_rest.push_back(l);
    }
    if (s.a_rest.empty() || s.b_rest.empty()) {
        throw InvalidArgument("generalized_schur: degenerate complement (C = A or D = B)");
    }
    return s;
}

}  // namespace

WellDefinedReport check_well_defined(const BlockMatrix& m, const LabelList& a,
                                     const LabelList& b, const LabelList& c,
                                     const LabelList& d, double tol) {
    ComplementSets s = resolve_sets(m, a, b, c, d);
    CMat mcd = sub_block(m, s.c, s.d);
    CMat mcb = sub_block(m, s.c, s.b_rest);
    CMat mad = sub_block(m, s.a_rest, s.d);
    WellDefinedReport rep;
    rep.im_residual = image_inclusion_residual(mcb, mcd);
    rep.ker_residual = kernel_inclusion_residual(mcd, mad);
    rep.im_ok = rep.im_residual <= tol;
    rep.ker_ok = rep.ker_residual <= tol;
    return rep;
}

WellDefinedReport check_well_defined(const BlockMatrix& m, const LabelList& c,
                                     const LabelList& d, double tol) {
    return check_well_defined(m, m.rows.labels(), m.cols.labels(), c, d, tol);
}

BlockMatrix generalized_schur(const BlockMatrix& m, const LabelList& a,
                              const LabelList& b, const LabelList& c,
                              const LabelList& d, const SchurOptions& opts) {
    ComplementSets s = resolve_sets(m, a, b, c, d);
    if (opts.checked) {
        WellDefinedReport rep = check_well_defined(m, a, b, c, d, opts.inclusion_tol);
        if (!rep.ok()) {
            std::string what = "generalized_schur: complement is not well-defined:";
            if (!rep.im_ok) {
                what += " im(M_{C,B\\D}) not within im(M_{C,D}) (residual " +
                        std::to_string(rep.im_residual) + ");";
            }
            if (!rep.ker_ok) {
                what += " ker(M_{C,D}) not within ker(M_{A\\C,D}) (residual " +
                        std::to_string(rep.ker_residual) + ");";
            }
            throw PreconditionError(what);
        }
    }
    CMat mcd = sub_block(m, s.c, s.d);
    CMat top = sub_block(m, s.a_rest, s.b_rest);
    CMat left = sub_block(m, s.a_rest, s.d);
    CMat right = sub_block(m, s.c, s.b_rest);
    CMat res = top - left * moore_penrose(mcd, opts.rank_tol) * right;
    return BlockMatrix(m.rows.restricted(s.a_rest), m.cols.restricted(s.b_rest),
                       std::move(res));
}

BlockMatrix generalized_schur(const BlockMatrix& m, const LabelList& c,
                              const LabelList& d, const SchurOptions& opts) {
    return generalized_schur(m, m.rows.labels(), m.cols.labels(), c, d, opts);
}

CMat banachiewicz_pinv(const BlockMatrix& m, const LabelList& c,
                       const LabelList& d, const SchurOptions& opts) {
    ComplementSets s =
        resolve_sets(m, m.rows.labels(), m.cols.labels(), c, d);
    CMat a = sub_block(m, s.c, s.d);
    CMat b = sub_block(m, s.c, s.b_rest);
    CMat cl = sub_block(m, s.a_rest, s.d);
    if (opts.checked) {
        double imr = image_inclusion_residual(b, a);
        double kerr = kernel_inclusion_residual(a, cl);
        if (imr > opts.inclusion_tol || kerr > opts.inclusion_tol) {
            throw PreconditionError(
                "banachiewicz_pinv: inclusion hypotheses violated (im residual " +
                std::to_string(imr) + ", ker residual " + std::to_string(kerr) + ")");
        }
    }
    CMat ai = moore_penrose(a, opts.rank_tol);
    CMat x = sub_block(m, s.a_rest, s.b_rest) - cl * ai * b;
    CMat xi = moore_penrose(x, opts.rank_tol);

    // Assemble [[A^- + A^- B X^- C A^-, -A^- B X^-], [-X^- C A^-, X^-]] in
    // the (D, B\D) x (C, A\C) orientation of a generalized inverse.
    const Index r1 = a.cols(), r2 = x.cols();
    const Index c1 = a.rows(), c2 = x.rows();
    CMat out(r1 + r2, c1 + c2);
    out.block(0, 0, r1, c1) = ai + ai * b * xi * cl * ai;
    out.block(0, c1, r1, c2) = -ai * b * xi;
    out.block(r1, 0, r2, c1) = -xi * cl * ai;
    out.block(r1, c1, r2, c2) = xi;
    return out;
}

bool LemmaNewReport::all() const {
    return std::all_of(ok.begin(), ok.end(), [](bool v) { return v; });
}

std::string LemmaNewReport::failed_list() const {
    std::string out;
    for (int i = 0; i < 6; ++i) {
        if (!ok[i]) {
            if (!out.empty()) out += ", ";
            out += std::to_string(i + 1);
        }
    }
    return out;
}

LemmaNewReport check_lemma_new(const BlockMatrix& m, const LabelList& a,
                               const LabelList& b, const LabelList& c,
                               double tol) {
    if (!(m.rows == m.cols)) {
        throw InvalidArgument("check_lemma_new: row and column partitions must agree");
    }
    LabelList oa = m.rows.ordered(a), ob = m.rows.ordered(b), oc = m.rows.ordered(c);
    std::set<std::string> seen;
    for (const auto& list : {oa, ob, oc}) {
        for (const auto& l : list) {
            if (!seen.insert(l).second) {
                throw InvalidArgument("check_lemma_new: sets must be disjoint");
            }
        }
    }
    if (seen.size() != m.rows.labels().size()) {
        throw InvalidArgument("check_lemma_new: A, B, C must partition the labels");
    }

    LabelList bc = ob;
    bc.insert(bc.end(), oc.begin(), oc.end());
    CMat m_bcbc = sub_block(m, bc, bc);
    CMat m_a_bc = sub_block(m, oa, bc);
    CMat m_bc_a = sub_block(m, bc, oa);
    CMat m_bb = sub_block(m, ob, ob);
    CMat m_bc_ = sub_block(m, ob, oc);
    CMat m_cb = sub_block(m, oc, ob);
    CMat m_cc = sub_block(m, oc, oc);

    LemmaNewReport rep;
    rep.residual[0] = kernel_inclusion_residual(m_bcbc, m_a_bc);
    rep.residual[1] = image_inclusion_residual(m_bc_a, m_bcbc);
    rep.residual[2] = kernel_inclusion_residual(m_cc, m_bc_);
    rep.residual[3] = image_inclusion_residual(m_cb, m_cc);
    rep.residual[4] = kernel_inclusion_residual(m_bb, m_cb);
    rep.residual[5] = image_inclusion_residual(m_bc_, m_bb);
    for (int i = 0; i < 6; ++i) rep.ok[i] = rep.residual[i] <= tol;
    return rep;
}

SuccessiveResult successive_complement(const BlockMatrix& m, const LabelList& b,
                                       const LabelList& c, const SchurOptions& opts) {
    if (!(m.rows == m.cols)) {
        throw InvalidArgument("successive_complement: row and column partitions must agree");
    }
    LabelList ob = m.rows.ordered(b), oc = m.rows.ordered(c);
    LabelList bc = ob;
    bc.insert(bc.end(), oc.begin(), oc.end());
    LabelList oa = m.rows.complement(bc);
    if (oa.empty()) {
        throw InvalidArgument("successive_complement: B and C must leave labels over");
    }
    if (opts.checked) {
        LemmaNewReport rep = check_lemma_new(m, oa, ob, oc, opts.inclusion_tol);
        if (!rep.all()) {
            throw PreconditionError(
                "successive_complement: well-definedness condition(s) " +
                rep.failed_list() + " failed");
        }
    }
    SchurOptions inner = opts;
    inner.checked = false;  // already established above

    SuccessiveResult res;
    res.one_shot = generalized_schur(m, bc, bc, inner);
    BlockMatrix mc = generalized_schur(m, oc, oc, inner);
    res.via_c_first = generalized_schur(mc, ob, ob, inner);
    BlockMatrix mb = generalized_schur(m, ob, ob, inner);
    res.via_b_first = generalized_schur(mb, oc, oc, inner);

    double d1 = (res.via_c_first.entries - res.one_shot.entries).cwiseAbs().maxCoeff();
    double d2 = (res.via_b_first.entries - res.one_shot.entries).cwiseAbs().maxCoeff();
    double d3 = (res.via_c_first.entries - res.via_b_first.entries).cwiseAbs().maxCoeff();
    res.max_deviation = std::max({d1, d2, d3});
    return res;
}

}  // namespace slhnet::schur

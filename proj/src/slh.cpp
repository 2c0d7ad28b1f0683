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

#include "slhnet/slh.hpp"

#include <algorithm>
#include <set>

#include <Eigen/LU>

#include "slhnet/fock.hpp"

namespace slhnet {

namespace {

// Embeds every d x d block of a (br*d) x (bc*d) grid from `from` into `to`.
CMat embed_grid(const CMat& m, Index br, Index bc, const HilbertSpace& from,
                const HilbertSpace& to) {
    const Index d = from.total_dim();
    const Index dd = to.total_dim();
    CMat out(br * dd, bc * dd);
    for (Index i = 0; i < br; ++i) {
        for (Index j = 0; j < bc; ++j) {
            out.block(i * dd, j * dd, dd, dd) =
                embed_matrix(m.block(i * d, j * d, d, d), from, to);
        }
    }
    return out;
}

HilbertSpace merge_spaces(const HilbertSpace& a, const HilbertSpace& b) {
    std::vector<SpaceFactor> fs = a.factors();
    for (const auto& f : b.factors()) {
        if (a.has_factor(f.label)) {
            if (a.factors()[a.factor_index(f.label)].dim != f.dim) {
                throw InvalidArgument("shared factor '" + f.label +
                                      "' has mismatched dimensions");
            }
        } else {
            fs.push_back(f);
        }
    }
    return HilbertSpace(fs);
}

// Rows of a channel-blocked matrix restricted to the given channels.
CMat channel_rows(const CMat& m, const std::vector<int>& ch, Index d) {
    CMat out(static_cast<Index>(ch.size()) * d, m.cols());
    for (Index r = 0; r < static_cast<Index>(ch.size()); ++r) {
        out.middleRows(r * d, d) = m.middleRows(ch[r] * d, d);
    }
    return out;
}

CMat channel_cols(const CMat& m, const std::vector<int>& ch, Index d) {
    CMat out(m.rows(), static_cast<Index>(ch.size()) * d);
    for (Index c = 0; c < static_cast<Index>(ch.size()); ++c) {
        out.middleCols(c * d, d) = m.middleCols(ch[c] * d, d);
    }
    return out;
}

CMat channel_block(const CMat& m, const std::vector<int>& rows,
                   const std::vector<int>& cols, Index d) {
    return channel_cols(channel_rows(m, rows, d), cols, d);
}

double max_abs_diff(const CMat& a, const CMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidArgument("max_abs_diff: shape mismatch");
    }
    if (a.size() == 0) return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

bool kernel_equals_ground_sector(const CMat& a, int m, Index d, int cutoff,
                                 double margin) {
    const CMat y = fock::y_operator(a, m, d, cutoff);
    const auto sectors = fock::number_sectors(m, cutoff);
    const Index fdim = fock::fock_dim(m, cutoff);
    // Ground sector must be annihilated exactly (structural).
    for (Index i = 0; i < d; ++i) {
        if (y.col(i * fdim).norm() != 0.0) return false;
    }
    const double scale = 1.0 + a.norm();
    for (int sector = 1; sector < cutoff; ++sector) {
        const auto idx = fock::joint_indices(d, fdim, sectors[sector]);
        Eigen::JacobiSVD<CMat> svd(fock::restrict_to(y, idx));
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) <= margin * scale) return false;
    }
    return true;
}

}  // namespace

// --- SLHTriple --------------------------------------------------------------

SLHTriple::Residuals SLHTriple::residuals() const {
    Residuals r;
    const Index nd = S.rows();
    const CMat id = CMat::Identity(nd, nd);
    r.unitarity = std::max((S.adjoint() * S - id).norm(), (S * S.adjoint() - id).norm()) /
                  (1.0 + S.norm());
    r.damping = (K + K.adjoint() + L.adjoint() * L).norm() /
                (1.0 + K.norm() + L.norm() * L.norm());
    return r;
}

void SLHTriple::validate(double tol) const {
    const Index d = dim();
    if (n < 0) throw InvalidArgument("SLHTriple: negative channel count");
    if (S.rows() != n * d || S.cols() != n * d) {
        throw InvalidArgument("SLHTriple: S must be (n d) x (n d)");
    }
    if (L.rows() != n * d || L.cols() != d) {
        throw InvalidArgument("SLHTriple: L must be (n d) x d");
    }
    if (K.rows() != d || K.cols() != d) {
        throw InvalidArgument("SLHTriple: K must be d x d");
    }
    Residuals r = residuals();
    if (r.unitarity > tol) {
        throw InvalidArgument("SLHTriple: S is not unitary (residual " +
                              std::to_string(r.unitarity) + ")");
    }
    if (r.damping > tol) {
        throw InvalidArgument("SLHTriple: damping identity violated (residual " +
                              std::to_string(r.damping) + ")");
    }
}

CMat SLHTriple::hamiltonian() const {
    return Complex(0, 1) * (K + 0.5 * L.adjoint() * L);
}

SLHTriple SLHTriple::from_parts(HilbertSpace space, int n, CMat s, CMat l, CMat k,
                                double tol) {
    SLHTriple t{std::move(space), n, std::move(s), std::move(l), std::move(k)};
    t.validate(tol);
    return t;
}

SLHTriple SLHTriple::from_lh(HilbertSpace space, int n, CMat s, CMat l, CMat h,
                             double tol) {
    if ((h - h.adjoint()).norm() > tol * (1.0 + h.norm())) {
        throw InvalidArgument("SLHTriple: Hamiltonian must be Hermitian");
    }
    CMat k = -0.5 * (l.adjoint() * l) - Complex(0, 1) * h;
    return from_parts(std::move(space), n, std::move(s), std::move(l), std::move(k), tol);
}

// --- Ito matrix -------------------------------------------------------------

ItoMatrix ito_matrix(const SLHTriple& t) {
    const Index d = t.dim();
    const Index nd = t.n * d;
    CMat g = CMat::Zero(d + nd, d + nd);
    g.topLeftCorner(d, d) = t.K;
    g.topRightCorner(d, nd) = -(t.L.adjoint() * t.S);
    g.bottomLeftCorner(nd, d) = t.L;
    g.bottomRightCorner(nd, nd) = t.S - CMat::Identity(nd, nd);
    return ItoMatrix{t.space, t.n, std::move(g)};
}

SLHTriple from_ito(const ItoMatrix& g, double tol) {
    const Index d = g.space.total_dim();
    const Index nd = g.n * d;
    if (g.G.rows() != d + nd || g.G.cols() != d + nd) {
        throw InvalidArgument("from_ito: matrix shape does not match (1+n) d");
    }
    CMat s = g.G.bottomRightCorner(nd, nd) + CMat::Identity(nd, nd);
    CMat l = g.G.bottomLeftCorner(nd, d);
    CMat k = g.G.topLeftCorner(d, d);
    SLHTriple t = SLHTriple::from_parts(g.space, g.n, std::move(s), std::move(l),
                                        std::move(k), tol);
    const double cons = (g.G.topRightCorner(d, nd) + t.L.adjoint() * t.S).norm() /
                        (1.0 + t.L.norm() * t.S.norm());
    if (cons > tol) {
        throw InvalidArgument("from_ito: top-right block is not -L*S (residual " +
                              std::to_string(cons) + ")");
    }
    return t;
}

// --- composition ------------------------------------------------------------

namespace {

SLHTriple embed_triple(const SLHTriple& t, const HilbertSpace& to) {
    if (t.space == to) return t;
    SLHTriple out;
    out.space = to;
    out.n = t.n;
    out.S = embed_grid(t.S, t.n, t.n, t.space, to);
    out.L = embed_grid(t.L, t.n, 1, t.space, to);
    out.K = embed_matrix(t.K, t.space, to);
    return out;
}

}  // namespace

SLHTriple series_product(const SLHTriple& g2, const SLHTriple& g1) {
    if (g2.n != g1.n) {
        throw InvalidArgument("series_product: channel counts differ");
    }
    const HilbertSpace joint = merge_spaces(g1.space, g2.space);
    SLHTriple a = embed_triple(g1, joint);
    SLHTriple b = embed_triple(g2, joint);
    SLHTriple out;
    out.space = joint;
    out.n = a.n;
    out.S = b.S * a.S;
    out.L = b.L + b.S * a.L;
    out.K = a.K + b.K - b.L.adjoint() * b.S * a.L;
    return out;
}

SLHTriple concatenate(const std::vector<SLHTriple>& parts) {
    if (parts.empty()) throw InvalidArgument("concatenate: no components");
    HilbertSpace joint = parts[0].space;
    for (size_t i = 1; i < parts.size(); ++i) {
        for (const auto& f : parts[i].space.factors()) {
            if (joint.has_factor(f.label)) {
                throw InvalidArgument("concatenate: duplicate system label '" +
                                      f.label + "'");
            }
        }
        joint = joint.tensor(parts[i].space);
    }
    const Index dd = joint.total_dim();
    int n = 0;
    for (const auto& p : parts) n += p.n;
    SLHTriple out;
    out.space = joint;
    out.n = n;
    out.S = CMat::Zero(n * dd, n * dd);
    out.L = CMat::Zero(n * dd, dd);
    out.K = CMat::Zero(dd, dd);
    Index ch = 0;
    for (const auto& p : parts) {
        out.S.block(ch * dd, ch * dd, p.n * dd, p.n * dd) =
            embed_grid(p.S, p.n, p.n, p.space, joint);
        out.L.middleRows(ch * dd, p.n * dd) = embed_grid(p.L, p.n, 1, p.space, joint);
        out.K += embed_matrix(p.K, p.space, joint);
        ch += p.n;
    }
    return out;
}

// --- OscillatorModel --------------------------------------------------------

double OscillatorModel::identity_residual() const {
    const double r1 = (A + A.adjoint() + C.adjoint() * C).norm() /
                      (1.0 + A.norm() + C.norm() * C.norm());
    const double r2 = (X + Z.adjoint() + G.adjoint() * C).norm() /
                      (1.0 + X.norm() + G.norm() * C.norm());
    const double r3 = (R + R.adjoint() + G.adjoint() * G).norm() /
                      (1.0 + R.norm() + G.norm() * G.norm());
    return std::max({r1, r2, r3});
}

double OscillatorModel::a_condition() const { return condition_number(A); }

OscillatorModel OscillatorModel::from_slh(const SLHTriple& t) {
    const Index d = t.dim();
    OscillatorModel m;
    m.space = t.space;
    m.n = t.n;
    m.m = 0;
    m.S = t.S;
    m.C = CMat::Zero(t.n * d, 0);
    m.G = t.L;
    m.A = CMat::Zero(0, 0);
    m.Z = CMat::Zero(0, d);
    m.X = CMat::Zero(d, 0);
    m.R = t.K;
    return m;
}

SLHTriple OscillatorModel::as_slh(double tol) const {
    if (m != 0) {
        throw InvalidArgument("as_slh: model still carries oscillator modes");
    }
    return SLHTriple::from_parts(space, n, S, G, R, tol);
}

OscillatorModel from_hamiltonian(const HilbertSpace& space, int n, int m,
                                 const CMat& s, const CMat& c, const CMat& g,
                                 const CMat& omega, const CMat& gamma,
                                 const CMat& theta) {
    const Index d = space.total_dim();
    if (s.rows() != n * d || s.cols() != n * d || c.rows() != n * d ||
        c.cols() != m * d || g.rows() != n * d || g.cols() != d ||
        omega.rows() != m * d || omega.cols() != m * d || gamma.rows() != m * d ||
        gamma.cols() != d || theta.rows() != d || theta.cols() != d) {
        throw InvalidArgument("from_hamiltonian: block shape mismatch");
    }
    if ((omega - omega.adjoint()).norm() > 1e-9 * (1.0 + omega.norm())) {
        throw InvalidArgument("from_hamiltonian: Omega must be Hermitian");
    }
    if ((theta - theta.adjoint()).norm() > 1e-9 * (1.0 + theta.norm())) {
        throw InvalidArgument("from_hamiltonian: Theta must be Hermitian");
    }
    const CMat id = CMat::Identity(n * d, n * d);
    if ((s.adjoint() * s - id).norm() > kTripleTol * (1.0 + s.norm())) {
        throw InvalidArgument("from_hamiltonian: S must be unitary");
    }
    const Complex i1(0, 1);
    OscillatorModel model;
    model.space = space;
    model.n = n;
    model.m = m;
    model.S = s;
    model.C = c;
    model.G = g;
    model.A = -0.5 * (c.adjoint() * c) - i1 * omega;
    model.Z = -0.5 * (c.adjoint() * g) - i1 * gamma;
    model.X = -0.5 * (g.adjoint() * c) - i1 * gamma.adjoint();
    model.R = -0.5 * (g.adjoint() * g) - i1 * theta;
    if (m > 0 && condition_number(model.A) >= kConditionLimit) {
        throw PreconditionError("from_hamiltonian: A = -C*C/2 - i Omega is singular");
    }
    return model;
}

OscillatorModel concatenate_models(const std::vector<OscillatorModel>& parts) {
    if (parts.empty()) throw InvalidArgument("concatenate_models: no components");
    HilbertSpace joint = parts[0].space;
    for (size_t i = 1; i < parts.size(); ++i) {
        for (const auto& f : parts[i].space.factors()) {
            if (joint.has_factor(f.label)) {
                throw InvalidArgument("concatenate_models: duplicate system label '" +
                                      f.label + "'");
            }
        }
        joint = joint.tensor(parts[i].space);
    }
    const Index dd = joint.total_dim();
    int n = 0, m = 0;
    for (const auto& p : parts) {
        n += p.n;
        m += p.m;
    }
    OscillatorModel out;
    out.space = joint;
    out.n = n;
    out.m = m;
    out.S = CMat::Zero(n * dd, n * dd);
    out.C = CMat::Zero(n * dd, m * dd);
    out.G = CMat::Zero(n * dd, dd);
    out.A = CMat::Zero(m * dd, m * dd);
    out.Z = CMat::Zero(m * dd, dd);
    out.X = CMat::Zero(dd, m * dd);
    out.R = CMat::Zero(dd, dd);
    Index ch = 0, md = 0;
    for (const auto& p : parts) {
        out.S.block(ch * dd, ch * dd, p.n * dd, p.n * dd) =
            embed_grid(p.S, p.n, p.n, p.space, joint);
        out.G.middleRows(ch * dd, p.n * dd) = embed_grid(p.G, p.n, 1, p.space, joint);
        out.R += embed_matrix(p.R, p.space, joint);
        if (p.m > 0) {
            out.C.block(ch * dd, md * dd, p.n * dd, p.m * dd) =
                embed_grid(p.C, p.n, p.m, p.space, joint);
            out.A.block(md * dd, md * dd, p.m * dd, p.m * dd) =
                embed_grid(p.A, p.m, p.m, p.space, joint);
            out.Z.middleRows(md * dd, p.m * dd) = embed_grid(p.Z, p.m, 1, p.space, joint);
            out.X.middleCols(md * dd, p.m * dd) = embed_grid(p.X, 1, p.m, p.space, joint);
        }
        ch += p.n;
        md += p.m;
    }
    return out;
}

// --- channel split ----------------------------------------------------------

ChannelSplit make_channel_split(int n, const std::vector<Connection>& connections,
                                const std::vector<int>* external_in_order,
                                const std::vector<int>* external_out_order) {
    ChannelSplit split;
    std::set<int> outs, ins;
    for (const auto& c : connections) {
        if (c.out_channel < 0 || c.out_channel >= n || c.in_channel < 0 ||
            c.in_channel >= n) {
            throw InvalidArgument("connection channel index out of range");
        }
        if (!outs.insert(c.out_channel).second) {
            throw InvalidArgument("output channel " + std::to_string(c.out_channel) +
                                  " connected twice");
        }
        if (!ins.insert(c.in_channel).second) {
            throw InvalidArgument("input channel " + std::to_string(c.in_channel) +
                                  " connected twice");
        }
        split.internal_out.push_back(c.out_channel);
        split.internal_in.push_back(c.in_channel);
    }
    std::vector<int> free_out, free_in;
    for (int ch = 0; ch < n; ++ch) {
        if (!outs.count(ch)) free_out.push_back(ch);
        if (!ins.count(ch)) free_in.push_back(ch);
    }
    auto apply_order = [](const std::vector<int>& def, const std::vector<int>* given,
                          const char* what) {
        if (!given) return def;
        if (std::set<int>(given->begin(), given->end()) !=
                std::set<int>(def.begin(), def.end()) ||
            given->size() != def.size()) {
            throw InvalidArgument(std::string(what) +
                                  " order is not a permutation of the free ports");
        }
        return *given;
    };
    split.external_out = apply_order(free_out, external_out_order, "external output");
    split.external_in = apply_order(free_in, external_in_order, "external input");
    return split;
}

// --- feedback reduction -----------------------------------------------------

ItoMatrix feedback_reduce(const ItoMatrix& g, const std::vector<Connection>& connections,
                          const ChannelSplit* split_in, double cond_limit) {
    const Index d = g.space.total_dim();
    const Index nd = g.n * d;
    if (g.G.rows() != d + nd) throw InvalidArgument("feedback_reduce: bad Ito matrix");
    if (connections.empty() && !split_in) return g;
    ChannelSplit split =
        split_in ? *split_in : make_channel_split(g.n, connections);
    const Index p = static_cast<Index>(split.internal_out.size());
    if (p == 0) return g;
    const Index ne = g.n - p;

    const CMat s = g.G.bottomRightCorner(nd, nd) + CMat::Identity(nd, nd);
    const CMat l = g.G.bottomLeftCorner(nd, d);
    const CMat k = g.G.topLeftCorner(d, d);
    const CMat ls = -g.G.topRightCorner(d, nd);  // L*S

    // Internal block with the feedback pairing on the diagonal.
    CMat gii = channel_block(s, split.internal_out, split.internal_in, d) -
               CMat::Identity(p * d, p * d);
    const double cond = condition_number(gii);
    if (!(cond < cond_limit)) {
        throw IllPosedError(
            "feedback network is ill-posed: S_ii - I is numerically singular "
            "(condition number " + std::to_string(cond) + ")");
    }

    CMat gee(d + ne * d, d + ne * d);
    gee.topLeftCorner(d, d) = k;
    gee.topRightCorner(d, ne * d) = -channel_cols(ls, split.external_in, d);
    gee.bottomLeftCorner(ne * d, d) = channel_rows(l, split.external_out, d);
    gee.bottomRightCorner(ne * d, ne * d) =
        channel_block(s, split.external_out, split.external_in, d) -
        CMat::Identity(ne * d, ne * d);

    CMat gei(d + ne * d, p * d);
    gei.topRows(d) = -channel_cols(ls, split.internal_in, d);
    gei.bottomRows(ne * d) = channel_block(s, split.external_out, split.internal_in, d);

    CMat gie(p * d, d + ne * d);
    gie.leftCols(d) = channel_rows(l, split.internal_out, d);
    gie.rightCols(ne * d) = channel_block(s, split.internal_out, split.external_in, d);

    Eigen::PartialPivLU<CMat> lu(gii);
    CMat reduced = gee - gei * lu.solve(gie);
    return ItoMatrix{g.space, static_cast<int>(ne), std::move(reduced)};
}

schur::BlockMatrix g_matrix(const OscillatorModel& mo) {
    const Index d = mo.dim();
    const Index nd = mo.n * d, md = mo.m * d, fcd = mo.n * mo.m * d;
    auto part = schur::Partition::from_sizes(
        {{"s0", d}, {"sc", nd}, {"f0", md}, {"fc", fcd}});
    CMat e = CMat::Zero(part.total(), part.total());
    const Index o_sc = d, o_f0 = d + nd, o_fc = d + nd + md;
    e.block(0, 0, d, d) = mo.R;
    e.block(0, o_sc, d, nd) = -(mo.G.adjoint() * mo.S);
    e.block(0, o_f0, d, md) = mo.X;
    e.block(o_sc, 0, nd, d) = mo.G;
    e.block(o_sc, o_sc, nd, nd) = mo.S - CMat::Identity(nd, nd);
    e.block(o_sc, o_f0, nd, md) = mo.C;
    e.block(o_f0, 0, md, d) = mo.Z;
    e.block(o_f0, o_sc, md, nd) = -(mo.C.adjoint() * mo.S);
    e.block(o_f0, o_f0, md, md) = mo.A;
    (void)o_fc;
    return schur::BlockMatrix(part, part, std::move(e));
}

schur::BlockMatrix four_way_g(const OscillatorModel& mo, const ChannelSplit& split) {
    const Index d = mo.dim();
    const Index p = static_cast<Index>(split.internal_out.size());
    const Index ne = mo.n - p;
    const Index md = mo.m * d;
    auto part = schur::Partition::from_sizes({{"1", d + ne * d},
                                              {"2", p * d},
                                              {"3", md},
                                              {"4", mo.n * mo.m * d}});
    const CMat s_e = channel_cols(mo.S, split.external_in, d);   // nd x ne d
    const CMat s_i = channel_cols(mo.S, split.internal_in, d);   // nd x p d
    const CMat gs_e = mo.G.adjoint() * s_e;                      // d x ne d
    const CMat gs_i = mo.G.adjoint() * s_i;                      // d x p d
    const CMat cs_e = mo.C.adjoint() * s_e;                      // md x ne d
    const CMat cs_i = mo.C.adjoint() * s_i;                      // md x p d

    CMat e = CMat::Zero(part.total(), part.total());
    const Index o2 = d + ne * d, o3 = o2 + p * d;
    // Slow external rows: [R, -G*S_e; G_e, S_ee - I].
    e.block(0, 0, d, d) = mo.R;
    e.block(0, d, d, ne * d) = -gs_e;
    e.block(d, 0, ne * d, d) = channel_rows(mo.G, split.external_out, d);
    e.block(d, d, ne * d, ne * d) =
        channel_block(mo.S, split.external_out, split.external_in, d) -
        CMat::Identity(ne * d, ne * d);
    // Slow external x slow internal: M1 = [-G*S_i; S_ei].
    e.block(0, o2, d, p * d) = -gs_i;
    e.block(d, o2, ne * d, p * d) =
        channel_block(mo.S, split.external_out, split.internal_in, d);
    // Slow external x fast: X1 = [X; C_e].
    e.block(0, o3, d, md) = mo.X;
    e.block(d, o3, ne * d, md) = channel_rows(mo.C, split.external_out, d);
    // Slow internal rows: G1 = [G_i, S_ie], S_ii - I, C_i.
    e.block(o2, 0, p * d, d) = channel_rows(mo.G, split.internal_out, d);
    e.block(o2, d, p * d, ne * d) =
        channel_block(mo.S, split.internal_out, split.external_in, d);
    e.block(o2, o2, p * d, p * d) =
        channel_block(mo.S, split.internal_out, split.internal_in, d) -
        CMat::Identity(p * d, p * d);
    e.block(o2, o3, p * d, md) = channel_rows(mo.C, split.internal_out, d);
    // Fast rows: Z1 = [Z, -C*S_e], -C*S_i, A.
    e.block(o3, 0, md, d) = mo.Z;
    e.block(o3, d, md, ne * d) = -cs_e;
    e.block(o3, o2, md, p * d) = -cs_i;
    e.block(o3, o3, md, md) = mo.A;
    return schur::BlockMatrix(part, part, std::move(e));
}

OscillatorModel feedback_reduce(const OscillatorModel& model,
                                const std::vector<Connection>& connections,
                                const ChannelSplit* split_in, double cond_limit) {
    ChannelSplit split =
        split_in ? *split_in : make_channel_split(model.n, connections);
    const Index p = static_cast<Index>(split.internal_out.size());
    if (p == 0) return model;
    if (model.m == 0) {
        SLHTriple reduced = from_ito(
            feedback_reduce(ito_matrix(model.as_slh()), connections, &split, cond_limit));
        return OscillatorModel::from_slh(reduced);
    }
    const Index d = model.dim();
    const Index ne = model.n - p;

    const CMat sii = channel_block(model.S, split.internal_out, split.internal_in, d) -
                     CMat::Identity(p * d, p * d);
    const double cond = condition_number(sii);
    if (!(cond < cond_limit)) {
        throw IllPosedError(
            "feedback network is ill-posed: S_ii - I is numerically singular "
            "(condition number " + std::to_string(cond) + ")");
    }

    schur::BlockMatrix g4 = four_way_g(model, split);
    schur::BlockMatrix red = schur::generalized_schur(g4, {"2", "4"}, {"2", "4"});

    OscillatorModel out;
    out.space = model.space;
    out.n = static_cast<int>(ne);
    out.m = model.m;
    const Index md = model.m * d;
    const CMat r11 = red.block("1", "1");
    const CMat x1 = red.block("1", "3");
    const CMat z1 = red.block("3", "1");
    out.R = r11.topLeftCorner(d, d);
    out.G = r11.bottomLeftCorner(ne * d, d);
    out.S = r11.bottomRightCorner(ne * d, ne * d) + CMat::Identity(ne * d, ne * d);
    out.X = x1.topRows(d);
    out.C = x1.bottomRows(ne * d);
    out.Z = z1.leftCols(d);
    out.A = red.block("3", "3");
    (void)md;
    return out;
}

// --- adiabatic elimination ---------------------------------------------------

SLHTriple adiabatic_eliminate(const OscillatorModel& model, EliminationReport* report,
                              const EliminationOptions& opts) {
    EliminationReport rep;
    rep.identity_residual = model.identity_residual();
    if (model.m == 0) {
        SLHTriple t = model.as_slh(opts.validity_tol);
        rep.hurwitz = true;
        auto res = t.residuals();
        rep.unitarity_residual = res.unitarity;
        rep.damping_residual = res.damping;
        rep.a_condition = 1.0;
        if (report) *report = rep;
        return t;
    }
    if (rep.identity_residual > opts.identity_tol) {
        throw PreconditionError(
            "adiabatic_eliminate: structure identities violated (residual " +
            std::to_string(rep.identity_residual) + ")");
    }
    rep.a_condition = model.a_condition();
    if (!(rep.a_condition < opts.cond_limit)) {
        throw PreconditionError("adiabatic_eliminate: A is numerically singular "
                                "(condition number " +
                                std::to_string(rep.a_condition) + ")");
    }
    rep.hurwitz_eig = hermitian_part_max_eigenvalue(model.A);
    rep.hurwitz = rep.hurwitz_eig < -opts.hurwitz_margin;
    if (!rep.hurwitz) {
        rep.kernel_checked = true;
        rep.kernel_ok = kernel_equals_ground_sector(model.A, model.m, model.dim(),
                                                    opts.kernel_cutoff,
                                                    opts.hurwitz_margin);
        if (!rep.kernel_ok) {
            throw PreconditionError(
                "adiabatic_eliminate: A is not strictly Hurwitz and the excitation "
                "operator has extra kernel beyond the oscillator ground sector");
        }
        rep.non_hurwitz_warning = true;
    }

    Eigen::PartialPivLU<CMat> lu(model.A);
    const CMat ainv_cs = lu.solve(model.C.adjoint() * model.S);  // A^{-1} C* S
    const CMat ainv_z = lu.solve(model.Z);                       // A^{-1} Z
    SLHTriple t;
    t.space = model.space;
    t.n = model.n;
    t.S = model.S + model.C * ainv_cs;
    t.L = model.G - model.C * ainv_z;
    t.K = model.R - model.X * ainv_z;
    auto res = t.residuals();
    rep.unitarity_residual = res.unitarity;
    rep.damping_residual = res.damping;
    if (res.unitarity > opts.validity_tol || res.damping > opts.validity_tol) {
        throw PreconditionError(
            "adiabatic_eliminate: limit triple failed validation (unitarity " +
            std::to_string(res.unitarity) + ", damping " +
            std::to_string(res.damping) + ")");
    }
    if (report) *report = rep;
    return t;
}

// --- commutativity -----------------------------------------------------------

CommutativityReport check_commutativity(const OscillatorModel& open_loop,
                                        const std::vector<Connection>& connections,
                                        const ChannelSplit* split_in, double tol,
                                        const EliminationOptions& opts) {
    CommutativityReport rep;
    rep.tol = tol;
    ChannelSplit split =
        split_in ? *split_in : make_channel_split(open_loop.n, connections);
    const Index d = open_loop.dim();
    const Index p = static_cast<Index>(split.internal_out.size());

    rep.identity_residual = open_loop.identity_residual();
    rep.identities_ok = rep.identity_residual <= opts.identity_tol;

    rep.open_hurwitz = is_strictly_hurwitz(open_loop.A, opts.hurwitz_margin);
    if (!rep.open_hurwitz && open_loop.m > 0) {
        rep.open_kernel_ok = kernel_equals_ground_sector(
            open_loop.A, open_loop.m, d, opts.kernel_cutoff, opts.hurwitz_margin);
    }

    if (p > 0) {
        const CMat sii =
            channel_block(open_loop.S, split.internal_out, split.internal_in, d) -
            CMat::Identity(p * d, p * d);
        rep.sii_cond = condition_number(sii);
        rep.sii_invertible = rep.sii_cond < opts.cond_limit;

        CMat theorem = sii;
        if (open_loop.m > 0) {
            const CMat c_i = channel_rows(open_loop.C, split.internal_out, d);
            const CMat s_i = channel_cols(open_loop.S, split.internal_in, d);
            Eigen::PartialPivLU<CMat> lu(open_loop.A);
            theorem += c_i * lu.solve(open_loop.C.adjoint() * s_i);
        }
        rep.theorem_matrix_cond = condition_number(theorem);
        rep.theorem_matrix_invertible = rep.theorem_matrix_cond < opts.cond_limit;
    } else {
        rep.sii_invertible = true;
        rep.sii_cond = 1.0;
        rep.theorem_matrix_invertible = true;
        rep.theorem_matrix_cond = 1.0;
    }

    std::optional<OscillatorModel> reduced;
    if (rep.sii_invertible) {
        reduced = feedback_reduce(open_loop, connections, &split, opts.cond_limit);
        rep.reduced_hurwitz = is_strictly_hurwitz(reduced->A, opts.hurwitz_margin);
        if (!rep.reduced_hurwitz && reduced->m > 0) {
            rep.reduced_kernel_ok = kernel_equals_ground_sector(
                reduced->A, reduced->m, d, opts.kernel_cutoff, opts.hurwitz_margin);
        }
    }

    rep.preconditions_met = rep.identities_ok && rep.sii_invertible &&
                            rep.theorem_matrix_invertible &&
                            (rep.open_hurwitz || rep.open_kernel_ok) &&
                            (rep.reduced_hurwitz || rep.reduced_kernel_ok);
    rep.hurwitz_warning =
        rep.preconditions_met && (!rep.open_hurwitz || !rep.reduced_hurwitz);
    if (!rep.preconditions_met) return rep;

    // Eliminate then reduce.
    SLHTriple limit_open = adiabatic_eliminate(open_loop, nullptr, opts);
    SLHTriple t1 =
        from_ito(feedback_reduce(ito_matrix(limit_open), connections, &split,
                                 opts.cond_limit));
    // Reduce then eliminate.
    SLHTriple t2 = adiabatic_eliminate(*reduced, nullptr, opts);

    rep.diff_s = max_abs_diff(t1.S, t2.S);
    rep.diff_l = max_abs_diff(t1.L, t2.L);
    rep.diff_k = max_abs_diff(t1.K, t2.K);
    rep.verdict_available = true;
    rep.pass = rep.max_diff() <= tol;
    return rep;
}

}  // namespace slhnet

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/LU>

#include "slhnet/fock.hpp"
#include "slhnet/slh.hpp"
#include "test_support.hpp"

using namespace slhnet;
using testing::Rng;

namespace {

SLHTriple random_triple(Rng& rng, const HilbertSpace& space, int n) {
    const Index d = space.total_dim();
    return SLHTriple::from_lh(space, n, testing::random_unitary(rng, n * d),
                              testing::random_matrix(rng, n * d, d),
                              testing::random_hermitian(rng, d));
}

OscillatorModel random_model(Rng& rng, const HilbertSpace& space, int n, int m) {
    const Index d = space.total_dim();
    return from_hamiltonian(space, n, m, testing::random_unitary(rng, n * d),
                            testing::random_full_rank(rng, n * d, m * d),
                            testing::random_matrix(rng, n * d, d),
                            testing::random_hermitian(rng, m * d),
                            testing::random_matrix(rng, m * d, d),
                            testing::random_hermitian(rng, d));
}

/// Single-oscillator device in a loop: C0 = sqrt(gamma), A0 = -gamma/2.
OscillatorModel loop_cavity(Complex s0, double gamma) {
    CMat s(1, 1), c(1, 1), z11 = CMat::Zero(1, 1);
    s << s0;
    c << std::sqrt(gamma);
    return from_hamiltonian(HilbertSpace::scalar(), 1, 1, s, c, z11, z11, z11, z11);
}

SLHTriple beam_splitter(double alpha) {
    const double beta = std::sqrt(1.0 - alpha * alpha);
    CMat t(2, 2);
    t << alpha, beta, beta, -alpha;
    return SLHTriple::from_parts(HilbertSpace::scalar(), 2, t, CMat::Zero(2, 1),
                                 CMat::Zero(1, 1));
}

/// Beam splitter with the cavity in a loop; external ports are channel 0.
struct LoopNetwork {
    OscillatorModel open_loop;
    std::vector<Connection> connections;
};

LoopNetwork make_loop(double alpha, Complex s0, double gamma) {
    LoopNetwork net;
    net.open_loop = concatenate_models(
        {OscillatorModel::from_slh(beam_splitter(alpha)), loop_cavity(s0, gamma)});
    net.connections = {{1, 2}, {2, 1}};
    return net;
}

/// Lifts each d x d block of a (p d) x (q d) grid to (d F) x (d F) via
/// block (x) identity on a Fock factor of dimension F.
CMat blockwise_fock_lift(const CMat& m, Index d, Index f) {
    const Index p = m.rows() / d, q = m.cols() / d;
    CMat out(p * d * f, q * d * f);
    for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < q; ++j) {
            out.block(i * d * f, j * d * f, d * f, d * f) =
                kron(m.block(i * d, j * d, d, d), CMat::Identity(f, f));
        }
    }
    return out;
}

/// Direct finite-k instantiation of a model on hhat (x) Fock(cutoff)^m,
/// used as the oracle for the coefficient-matrix reassembly.
struct InstantiatedTriple {
    CMat s, l, k;
};

InstantiatedTriple instantiate(const OscillatorModel& mo, double kval, int cutoff) {
    const Index d = mo.dim();
    const Index fdim = fock::fock_dim(mo.m, cutoff);
    const Index df = d * fdim;
    InstantiatedTriple out;
    out.s = blockwise_fock_lift(mo.S, d, fdim);
    out.l = CMat::Zero(mo.n * df, df);
    out.k = kron(mo.R, CMat::Identity(fdim, fdim));
    for (int j = 0; j < mo.m; ++j) {
        CMat aj = fock::mode_annihilator(mo.m, cutoff, j);
        for (int l = 0; l < mo.m; ++l) {
            CMat al = fock::mode_annihilator(mo.m, cutoff, l);
            out.k += kval * kval *
                     kron(mo.A.block(j * d, l * d, d, d), CMat(aj.adjoint() * al));
        }
        out.k += kval * kron(mo.Z.middleRows(j * d, d), CMat(aj.adjoint()));
        out.k += kval * kron(mo.X.middleCols(j * d, d), aj);
        for (int r = 0; r < mo.n; ++r) {
            out.l.middleRows(r * df, df) +=
                kval * kron(mo.C.block(r * d, j * d, d, d), aj);
        }
    }
    for (int r = 0; r < mo.n; ++r) {
        out.l.middleRows(r * df, df) +=
            kron(mo.G.middleRows(r * d, d), CMat::Identity(fdim, fdim));
    }
    return out;
}

}  // namespace

TEST_CASE("from_hamiltonian: loop cavity coefficients") {
    const double gamma = 2.0;
    OscillatorModel m = loop_cavity(1.0, gamma);
    CHECK(m.A(0, 0) == Complex(-gamma / 2, 0));
    CHECK(m.C(0, 0) == Complex(std::sqrt(gamma), 0));
    CHECK(m.Z.norm() == 0.0);
    CHECK(m.X.norm() == 0.0);
    CHECK(m.R.norm() == 0.0);
    CHECK(m.identity_residual() <= 1e-15);
}

TEST_CASE("from_hamiltonian: zero coupling is rejected (A singular)") {
    CMat s = CMat::Identity(1, 1), z = CMat::Zero(1, 1);
    CHECK_THROWS_AS(from_hamiltonian(HilbertSpace::scalar(), 1, 1, s, z, z, z, z, z),
                    PreconditionError);
}

TEST_CASE("from_hamiltonian: identities hold by construction") {
    Rng rng(21);
    auto space = HilbertSpace::single("sys", 3);
    for (int trial = 0; trial < 10; ++trial) {
        OscillatorModel m = random_model(rng, space, 2, 1);
        CHECK((m.A + m.A.adjoint() + m.C.adjoint() * m.C).norm() <=
              1e-12 * (1.0 + m.C.norm() * m.C.norm()));
        CHECK((m.X + m.Z.adjoint() + m.G.adjoint() * m.C).norm() <=
              1e-12 * (1.0 + m.G.norm() * m.C.norm()));
        CHECK((m.R + m.R.adjoint() + m.G.adjoint() * m.G).norm() <=
              1e-12 * (1.0 + m.G.norm() * m.G.norm()));
        CHECK(m.identity_residual() <= 1e-12);
    }
}

TEST_CASE("from_hamiltonian: rejects non-Hermitian data") {
    Rng rng(22);
    auto space = HilbertSpace::single("sys", 2);
    CMat s = testing::random_unitary(rng, 2);
    CMat c = testing::random_full_rank(rng, 2, 2);
    CMat g = CMat::Zero(2, 2), gam = CMat::Zero(2, 2);
    CMat bad = testing::random_matrix(rng, 2, 2);
    bad(0, 1) += Complex(1.0, 1.0);  // make sure it is not Hermitian
    CHECK_THROWS_AS(from_hamiltonian(space, 1, 1, s, c, g, bad, gam, CMat::Zero(2, 2)),
                    InvalidArgument);
}

TEST_CASE("series_product: identity element") {
    Rng rng(23);
    auto space = HilbertSpace::single("sys", 2);
    SLHTriple t = random_triple(rng, space, 2);
    SLHTriple id = SLHTriple::from_parts(space, 2, CMat::Identity(4, 4),
                                         CMat::Zero(4, 2), CMat::Zero(2, 2));
    SLHTriple out = series_product(id, t);
    CHECK((out.S - t.S).norm() <= 1e-14);
    CHECK((out.L - t.L).norm() <= 1e-14);
    CHECK((out.K - t.K).norm() <= 1e-14);
}

TEST_CASE("series_product: scalar hand expansion") {
    // S2 = S1 = 1, L1 = alpha, L2 = beta: L = alpha + beta,
    // K = K1 + K2 - conj(beta) alpha.
    auto space = HilbertSpace::scalar();
    const Complex alpha(0.3, -0.4), beta(1.1, 0.25);
    CMat one = CMat::Identity(1, 1);
    CMat l1(1, 1), l2(1, 1);
    l1 << alpha;
    l2 << beta;
    SLHTriple t1 = SLHTriple::from_lh(space, 1, one, l1, CMat::Zero(1, 1));
    SLHTriple t2 = SLHTriple::from_lh(space, 1, one, l2, CMat::Zero(1, 1));
    SLHTriple out = series_product(t2, t1);
    CHECK(std::abs(out.L(0, 0) - (alpha + beta)) <= 1e-15);
    const Complex expected_k = t1.K(0, 0) + t2.K(0, 0) - std::conj(beta) * alpha;
    CHECK(std::abs(out.K(0, 0) - expected_k) <= 1e-15);
    out.validate();
}

TEST_CASE("series_product: associativity") {
    Rng rng(24);
    auto space = HilbertSpace::single("sys", 2);
    for (int trial = 0; trial < 10; ++trial) {
        SLHTriple a = random_triple(rng, space, 2);
        SLHTriple b = random_triple(rng, space, 2);
        SLHTriple c = random_triple(rng, space, 2);
        SLHTriple left = series_product(series_product(c, b), a);
        SLHTriple right = series_product(c, series_product(b, a));
        CHECK((left.S - right.S).norm() <= 1e-11 * (1.0 + left.S.norm()));
        CHECK((left.L - right.L).norm() <= 1e-11 * (1.0 + left.L.norm()));
        CHECK((left.K - right.K).norm() <= 1e-11 * (1.0 + left.K.norm()));
    }
}

TEST_CASE("series_product: effective Hamiltonian composition") {
    // H_ser = H1 + H2 + Im(L2* S2 L1) with Im(M) = (M - M*) / 2i.
    Rng rng(25);
    auto s1 = HilbertSpace::single("one", 2);
    auto s2 = HilbertSpace::single("two", 2);
    SLHTriple a = random_triple(rng, s1, 1);
    SLHTriple b = random_triple(rng, s2, 1);
    SLHTriple out = series_product(b, a);
    const HilbertSpace joint = out.space;
    CMat h1 = embed_matrix(a.hamiltonian(), s1, joint);
    CMat h2 = embed_matrix(b.hamiltonian(), s2, joint);
    CMat l1e = embed_matrix(a.L, s1, joint);
    CMat s2e = embed_matrix(b.S, s2, joint);
    CMat l2e = embed_matrix(b.L, s2, joint);
    CMat m = l2e.adjoint() * s2e * l1e;
    CMat expect = h1 + h2 + (m - m.adjoint()) / Complex(0, 2);
    CHECK((out.hamiltonian() - expect).norm() <= 1e-11 * (1.0 + expect.norm()));
}

TEST_CASE("concatenate: single component and two-component block structure") {
    Rng rng(26);
    auto s1 = HilbertSpace::single("one", 2);
    auto s2 = HilbertSpace::single("two", 2);
    SLHTriple a = random_triple(rng, s1, 1);
    SLHTriple b = random_triple(rng, s2, 1);

    SLHTriple solo = concatenate({a});
    CHECK((solo.S - a.S).norm() == 0.0);

    SLHTriple both = concatenate({a, b});
    CHECK(both.n == 2);
    CHECK(both.dim() == 4);
    CHECK((both.S.topLeftCorner(4, 4) - embed_matrix(a.S, s1, both.space)).norm() == 0.0);
    CHECK((both.S.bottomRightCorner(4, 4) - embed_matrix(b.S, s2, both.space)).norm() ==
          0.0);
    CHECK(both.S.topRightCorner(4, 4).norm() == 0.0);
    CMat k_oracle = embed_matrix(a.K, s1, both.space) + embed_matrix(b.K, s2, both.space);
    CHECK((both.K - k_oracle).norm() <= 1e-12 * (1.0 + k_oracle.norm()));

    CHECK_THROWS_AS(concatenate({a, a}), InvalidArgument);
}

TEST_CASE("ito_matrix: special values and round trip") {
    auto space = HilbertSpace::scalar();
    CMat one = CMat::Identity(1, 1);

    SLHTriple trivial = SLHTriple::from_parts(space, 1, one, CMat::Zero(1, 1),
                                              CMat::Zero(1, 1));
    CHECK(ito_matrix(trivial).G.norm() == 0.0);

    SLHTriple flip = SLHTriple::from_parts(space, 1, CMat(-one), CMat::Zero(1, 1),
                                           CMat::Zero(1, 1));
    CMat g = ito_matrix(flip).G;
    CHECK(g(0, 0) == Complex(0, 0));
    CHECK(g(0, 1) == Complex(0, 0));
    CHECK(g(1, 0) == Complex(0, 0));
    CHECK(g(1, 1) == Complex(-2, 0));

    Rng rng(27);
    auto sys = HilbertSpace::single("sys", 2);
    SLHTriple t = random_triple(rng, sys, 2);
    SLHTriple back = from_ito(ito_matrix(t));
    CHECK((back.S - t.S).norm() == 0.0);
    CHECK((back.L - t.L).norm() == 0.0);
    CHECK((back.K - t.K).norm() == 0.0);
}

TEST_CASE("feedback_reduce: no connections is the identity") {
    Rng rng(28);
    auto sys = HilbertSpace::single("sys", 2);
    SLHTriple t = random_triple(rng, sys, 2);
    ItoMatrix g = ito_matrix(t);
    ItoMatrix out = feedback_reduce(g, {});
    CHECK((out.G - g.G).norm() == 0.0);
}

TEST_CASE("feedback_reduce: beam splitter loop matches the closed form") {
    const double alpha = 0.6, gamma = 2.0;
    const Complex s0(1.0, 0.0);
    LoopNetwork net = make_loop(alpha, s0, gamma);

    OscillatorModel red = feedback_reduce(net.open_loop, net.connections);
    CHECK(red.n == 1);
    CHECK(red.m == 1);

    const Complex denom = 1.0 + alpha * s0;
    const Complex s_expect = alpha + (1.0 - alpha * alpha) * s0 / denom;
    const Complex c_expect = std::sqrt(1.0 - alpha * alpha) * std::sqrt(gamma) / denom;
    const Complex a_expect = -(gamma / 2.0) * (1.0 - alpha * s0) / denom;
    CHECK(std::abs(red.S(0, 0) - s_expect) <= 1e-12);
    CHECK(std::abs(red.C(0, 0) - c_expect) <= 1e-12);
    CHECK(std::abs(red.A(0, 0) - a_expect) <= 1e-12);
    CHECK(red.G.norm() <= 1e-14);
    CHECK(red.Z.norm() <= 1e-14);
    CHECK(red.X.norm() <= 1e-14);
    CHECK(red.R.norm() <= 1e-14);
    CHECK(red.identity_residual() <= 1e-12);
}

TEST_CASE("feedback_reduce: one cascade connection equals the series product") {
    Rng rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        auto s1 = HilbertSpace::single("one", 2);
        auto s2 = HilbertSpace::single("two", 2);
        SLHTriple up = random_triple(rng, s1, 1);
        SLHTriple down = random_triple(rng, s2, 1);
        SLHTriple open = concatenate({up, down});
        ItoMatrix reduced = feedback_reduce(ito_matrix(open), {{0, 1}});
        SLHTriple got = from_ito(reduced);
        SLHTriple expect = series_product(down, up);  // series-product oracle
        CHECK((got.S - expect.S).norm() <= 1e-11 * (1.0 + expect.S.norm()));
        CHECK((got.L - expect.L).norm() <= 1e-11 * (1.0 + expect.L.norm()));
        CHECK((got.K - expect.K).norm() <= 1e-11 * (1.0 + expect.K.norm()));
    }
}

TEST_CASE("feedback_reduce: ill-posed loop is rejected") {
    // Passthrough scatterer fed back onto itself: S_ii - I = 0.
    auto space = HilbertSpace::scalar();
    SLHTriple pass = SLHTriple::from_parts(space, 2, CMat::Identity(2, 2),
                                           CMat::Zero(2, 1), CMat::Zero(1, 1));
    CHECK_THROWS_AS(feedback_reduce(ito_matrix(pass), {{0, 0}}), IllPosedError);
}

TEST_CASE("g_matrix: loop cavity fast block") {
    OscillatorModel m = loop_cavity(1.0, 2.0);
    auto g = g_matrix(m);
    CHECK(g.block("f0", "f0")(0, 0) == Complex(-1.0, 0.0));  // -gamma/2
    CHECK(g.block("f0", "fc").norm() == 0.0);
    CHECK(g.block("fc", "f0").norm() == 0.0);
    CHECK(g.block("fc", "fc").norm() == 0.0);
    CHECK(g.block("sc", "f0")(0, 0) == m.C(0, 0));
}

TEST_CASE("g_matrix: reassembly reproduces the finite-k coefficients") {
    Rng rng(30);
    auto space = HilbertSpace::single("sys", 2);
    OscillatorModel mo = random_model(rng, space, 2, 2);
    const int cutoff = 3;
    const Index d = mo.dim();
    const Index fdim = fock::fock_dim(mo.m, cutoff);
    const Index df = d * fdim;

    auto g = g_matrix(mo);
    CMat g_inst = blockwise_fock_lift(g.entries, d, fdim);

    for (double kval : {1.0, 2.0}) {
        InstantiatedTriple inst = instantiate(mo, kval, cutoff);
        // Direct Ito matrix of the instantiated triple (oracle).
        const Index nd = mo.n * df;
        CMat g_direct(df + nd, df + nd);
        g_direct.topLeftCorner(df, df) = inst.k;
        g_direct.topRightCorner(df, nd) = -(inst.l.adjoint() * inst.s);
        g_direct.bottomLeftCorner(nd, df) = inst.l;
        g_direct.bottomRightCorner(nd, nd) = inst.s - CMat::Identity(nd, nd);

        // [I; k a] with the fast rows ordered like the g labels.
        const Index slow = (1 + mo.n) * df;
        const Index fast = (1 + mo.n) * mo.m * df;
        CMat j = CMat::Zero(slow + fast, slow);
        j.topLeftCorner(slow, slow).setIdentity();
        for (int mode = 0; mode < mo.m; ++mode) {
            CMat lift = kval * kron(CMat::Identity(d, d),
                                    fock::mode_annihilator(mo.m, cutoff, mode));
            j.block(slow + mode * df, 0, df, df) = lift;  // fast scalar rows
            for (int r = 0; r < mo.n; ++r) {              // fast channel rows
                j.block(slow + mo.m * df + (r * mo.m + mode) * df, (1 + r) * df, df, df) =
                    lift;
            }
        }
        CMat reassembled = j.adjoint() * g_inst * j;
        CHECK((reassembled - g_direct).norm() <= 1e-12 * (1.0 + g_direct.norm()));
    }
}

TEST_CASE("four_way_g: no internal channels reduces to the plain g matrix") {
    Rng rng(31);
    auto space = HilbertSpace::single("sys", 2);
    OscillatorModel mo = random_model(rng, space, 2, 1);
    ChannelSplit split = make_channel_split(mo.n, {});
    auto g4 = four_way_g(mo, split);
    auto g = g_matrix(mo);
    CHECK(g4.rows.size_of("2") == 0);
    CHECK((g4.entries - g.entries).norm() == 0.0);
}

TEST_CASE("adiabatic_eliminate: loop cavity gives (-S0, 0, 0)") {
    for (Complex s0 : {Complex(1, 0), Complex(0, 1)}) {
        OscillatorModel m = loop_cavity(s0, 2.0);
        EliminationReport rep;
        SLHTriple t = adiabatic_eliminate(m, &rep);
        CHECK(std::abs(t.S(0, 0) + s0) <= 1e-14);
        CHECK(t.L.norm() <= 1e-14);
        CHECK(t.K.norm() <= 1e-14);
        CHECK(rep.hurwitz);
        CHECK_FALSE(rep.non_hurwitz_warning);
    }
}

TEST_CASE("adiabatic_eliminate equals the Schur complement of g") {
    Rng rng(32);
    auto space = HilbertSpace::single("sys", 3);
    for (int trial = 0; trial < 10; ++trial) {
        OscillatorModel mo = random_model(rng, space, 2, 2);
        SLHTriple direct = adiabatic_eliminate(mo);
        auto red = schur::generalized_schur(g_matrix(mo), {"f0", "fc"}, {"f0", "fc"});
        SLHTriple via_schur = from_ito(ItoMatrix{mo.space, mo.n, red.entries});
        CHECK((direct.S - via_schur.S).norm() <= 1e-10 * (1.0 + direct.S.norm()));
        CHECK((direct.L - via_schur.L).norm() <= 1e-10 * (1.0 + direct.L.norm()));
        CHECK((direct.K - via_schur.K).norm() <= 1e-10 * (1.0 + direct.K.norm()));
    }
}

TEST_CASE("adiabatic_eliminate: limit triples are valid") {
    Rng rng(33);
    auto space = HilbertSpace::single("sys", 3);
    for (int trial = 0; trial < 10; ++trial) {
        OscillatorModel mo = random_model(rng, space, 2, 2);
        SLHTriple t = adiabatic_eliminate(mo);
        auto res = t.residuals();
        CHECK(res.unitarity <= 1e-10);
        CHECK(res.damping <= 1e-10);
    }
}

TEST_CASE("the resolvent identity behind the damping computation") {
    // A^{-*} C* (I + C A^{-1} C*) = -A^{-1} C*.
    Rng rng(34);
    auto space = HilbertSpace::single("sys", 2);
    for (int trial = 0; trial < 10; ++trial) {
        OscillatorModel mo = random_model(rng, space, 2, 1);
        CMat lhs = mo.A.adjoint().partialPivLu().solve(
            CMat(mo.C.adjoint() *
                 (CMat::Identity(mo.n * 2, mo.n * 2) +
                  mo.C * mo.A.partialPivLu().solve(mo.C.adjoint()))));
        CMat rhs = -mo.A.partialPivLu().solve(mo.C.adjoint());
        CHECK((lhs - rhs).norm() <= 1e-11 * (1.0 + rhs.norm()));
    }
}

TEST_CASE("adiabatic_eliminate: rejects singular A and identity violations") {
    OscillatorModel m = loop_cavity(1.0, 2.0);
    m.A(0, 0) = 0.0;
    CHECK_THROWS_AS(adiabatic_eliminate(m), PreconditionError);

    OscillatorModel m2 = loop_cavity(1.0, 2.0);
    m2.Z(0, 0) = 5.0;  // breaks X + Z* = -G*C
    CHECK_THROWS_AS(adiabatic_eliminate(m2), PreconditionError);
}

TEST_CASE("check_commutativity: beam splitter loop") {
    const double alpha = 0.6, gamma = 2.0;
    const Complex s0(1.0, 0.0);
    LoopNetwork net = make_loop(alpha, s0, gamma);
    CommutativityReport rep =
        check_commutativity(net.open_loop, net.connections, nullptr, 1e-9);
    CHECK(rep.preconditions_met);
    CHECK(rep.verdict_available);
    CHECK(rep.pass);
    CHECK(rep.max_diff() <= 1e-12);

    // Both paths give S^ = (alpha - S0)/(1 - alpha S0) = -1 here.
    SLHTriple limit = adiabatic_eliminate(
        feedback_reduce(net.open_loop, net.connections));
    CHECK(std::abs(limit.S(0, 0) - Complex(-1, 0)) <= 1e-12);
    CHECK(limit.L.norm() <= 1e-13);
    CHECK(limit.K.norm() <= 1e-13);
}

TEST_CASE("check_commutativity: conditionally stable loop is flagged, not judged") {
    // alpha = 1 reflects the in-loop channel perfectly; the reduced model has
    // A' = 0, which is not Hurwitz and has no valid kernel structure.
    LoopNetwork net = make_loop(1.0, Complex(1.0, 0.0), 2.0);
    CommutativityReport rep =
        check_commutativity(net.open_loop, net.connections, nullptr, 1e-9);
    CHECK(rep.open_hurwitz);
    CHECK(rep.sii_invertible);
    CHECK_FALSE(rep.reduced_hurwitz);
    CHECK_FALSE(rep.reduced_kernel_ok);
    CHECK_FALSE(rep.preconditions_met);
    CHECK_FALSE(rep.verdict_available);
}

TEST_CASE("check_commutativity: random cascade networks") {
    Rng rng(35);
    auto sp1 = HilbertSpace::single("one", 2);
    auto sp2 = HilbertSpace::single("two", 2);
    for (int trial = 0; trial < 20; ++trial) {
        OscillatorModel c1 = random_model(rng, sp1, 1, 1);
        OscillatorModel c2 = random_model(rng, sp2, 1, 1);
        OscillatorModel open = concatenate_models({c1, c2});
        CommutativityReport rep = check_commutativity(open, {{0, 1}}, nullptr, 1e-9);
        REQUIRE(rep.preconditions_met);
        CHECK(rep.pass);
    }
}

TEST_CASE("Theorem-style successive complementation on the four-way g") {
    const double alpha = 0.35, gamma = 1.4;
    const Complex s0 = std::polar(1.0, 0.7);
    LoopNetwork net = make_loop(alpha, s0, gamma);
    ChannelSplit split = make_channel_split(net.open_loop.n, net.connections);
    auto g4 = four_way_g(net.open_loop, split);

    auto lemma = schur::check_lemma_new(g4, {"1"}, {"2"}, {"3", "4"});
    CHECK(lemma.all());

    auto res = schur::successive_complement(g4, {"2"}, {"3", "4"});
    CHECK(res.max_deviation <= 1e-10 * (1.0 + g4.entries.norm()));

    // The double complement is the Ito matrix of the double limit.
    SLHTriple limit = adiabatic_eliminate(feedback_reduce(net.open_loop, net.connections));
    CMat ito = ito_matrix(limit).G;
    CHECK((res.one_shot.entries - ito).norm() <= 1e-10 * (1.0 + ito.norm()));
}

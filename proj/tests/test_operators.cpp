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

#include "slhnet/operators.hpp"
#include "test_support.hpp"

using namespace slhnet;
using testing::Rng;

TEST_CASE("annihilator: two-level truncation") {
    CMat a = annihilator(2);
    CHECK(a(0, 1) == Complex(1, 0));
    CHECK(a(0, 0) == Complex(0, 0));
    CHECK(a(1, 0) == Complex(0, 0));
    CHECK(a(1, 1) == Complex(0, 0));
}

TEST_CASE("annihilator: superdiagonal is sqrt(n)") {
    CMat a = annihilator(4);
    CHECK(a(0, 1).real() == doctest::Approx(1.0));
    CHECK(a(1, 2).real() == doctest::Approx(std::sqrt(2.0)));
    CHECK(a(2, 3).real() == doctest::Approx(std::sqrt(3.0)));
    CHECK(a.cwiseAbs().sum() == doctest::Approx(1.0 + std::sqrt(2.0) + std::sqrt(3.0)));
}

TEST_CASE("annihilator: a*a n is the number operator") {
    CMat a = annihilator(4);
    CMat num = a.adjoint() * a;  // direct product oracle
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            CHECK(std::abs(num(i, j) - Complex(i == j ? i : 0, 0)) <= 1e-15 * i);
        }
    }
}

TEST_CASE("annihilator: rejects cutoff below 2") {
    CHECK_THROWS_AS(annihilator(1), InvalidArgument);
}

TEST_CASE("number operator commutes exactly with number-diagonal operators") {
    CMat a = annihilator(5);
    CMat num = a.adjoint() * a;
    CMat diag = CMat::Zero(5, 5);
    for (int i = 0; i < 5; ++i) diag(i, i) = Complex(0.3 * i, -1.1 * i * i);
    CHECK((num * diag - diag * num).norm() == 0.0);
}

TEST_CASE("tensor_embed: identity case") {
    auto sub = HilbertSpace::single("a", 2);
    auto target = sub.tensor(HilbertSpace::single("b", 3));
    Operator id(sub, CMat::Identity(2, 2));
    CMat e = tensor_embed(id, target).mat;
    CHECK((e - CMat::Identity(6, 6)).norm() == 0.0);
}

TEST_CASE("tensor_embed: kron definition on the leading factor") {
    auto sys = HilbertSpace::single("sys", 2);
    auto target = sys.tensor(HilbertSpace::single("osc", 3));
    CMat sigma(2, 2);
    sigma << Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0);
    CMat e = embed_matrix(sigma, sys, target);
    CHECK((e - kron(sigma, CMat::Identity(3, 3))).norm() == 0.0);

    // Reversed factor order embeds on the right.
    auto target_rev = HilbertSpace::single("osc", 3).tensor(sys);
    CMat e2 = embed_matrix(sigma, sys, target_rev);
    CHECK((e2 - kron(CMat::Identity(3, 3), sigma)).norm() == 0.0);
}

TEST_CASE("tensor_embed: embedding then squaring equals embedding the square") {
    auto osc = HilbertSpace::single("osc", 3);
    auto target = HilbertSpace::single("sys", 2).tensor(osc);
    CMat a = annihilator(3);
    CMat e = embed_matrix(a, osc, target);
    CMat lhs = e * e;                            // direct 6x6 matrix product oracle
    CMat rhs = embed_matrix(a * a, osc, target);
    CHECK((lhs - rhs).norm() <= 1e-12);
}

TEST_CASE("tensor_embed is a homomorphism") {
    Rng rng(11);
    auto mid = HilbertSpace::single("b", 3);
    auto target = HilbertSpace::single("a", 2).tensor(mid).tensor(
        HilbertSpace::single("c", 2));
    for (int trial = 0; trial < 20; ++trial) {
        CMat x = testing::random_matrix(rng, 3, 3);
        CMat y = testing::random_matrix(rng, 3, 3);
        CMat lhs = embed_matrix(x * y, mid, target);
        CMat rhs = embed_matrix(x, mid, target) * embed_matrix(y, mid, target);
        CHECK((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
    }
}

TEST_CASE("tensor_embed: errors on unknown labels and dimension mismatch") {
    auto sub = HilbertSpace::single("a", 2);
    auto target = HilbertSpace::single("b", 3);
    Operator id(sub, CMat::Identity(2, 2));
    CHECK_THROWS_AS(tensor_embed(id, target), InvalidArgument);
    auto target2 = HilbertSpace::single("a", 3);
    CHECK_THROWS_AS(tensor_embed(id, target2), InvalidArgument);
}

TEST_CASE("moore_penrose: diagonal case") {
    CMat m = CMat::Zero(2, 2);
    m(0, 0) = 2.0;
    CMat p = moore_penrose(m);
    CHECK(std::abs(p(0, 0) - Complex(0.5, 0)) <= 1e-15);
    CHECK(std::abs(p(1, 1)) == 0.0);
}

TEST_CASE("moore_penrose: block diag(A, 0) inverts the invertible corner") {
    Rng rng(3);
    CMat a = testing::random_full_rank(rng, 2, 2);
    CMat m = CMat::Zero(4, 4);
    m.topLeftCorner(2, 2) = a;
    CMat p = moore_penrose(m);
    CHECK((p.topLeftCorner(2, 2) - a.inverse()).norm() <= 1e-10);
    CHECK(p.bottomRightCorner(2, 2).norm() <= 1e-12);
    CHECK(p.topRightCorner(2, 2).norm() <= 1e-12);
    CHECK(p.bottomLeftCorner(2, 2).norm() <= 1e-12);
}

TEST_CASE("moore_penrose: Penrose identities on random low-rank matrices") {
    Rng rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        Index r = 2 + static_cast<Index>(rng() % 5);
        Index c = 2 + static_cast<Index>(rng() % 5);
        Index rank = static_cast<Index>(rng() % (std::min(r, c) + 1));
        CMat m = rank == 0 ? CMat::Zero(r, c) : testing::random_rank(rng, r, c, rank);
        CMat p = moore_penrose(m);
        const double tol = 1e-10 * (1.0 + m.norm());
        CHECK((m * p * m - m).norm() <= tol);
        CHECK((p * m * p - p).norm() <= tol);
        CHECK(((m * p) - (m * p).adjoint()).norm() <= tol);
        CHECK(((p * m) - (p * m).adjoint()).norm() <= tol);
    }
}

TEST_CASE("moore_penrose: zero matrix maps to zero") {
    CMat z = CMat::Zero(3, 2);
    CMat p = moore_penrose(z);
    CHECK(p.rows() == 2);
    CHECK(p.cols() == 3);
    CHECK(p.norm() == 0.0);
}

TEST_CASE("image_inclusion basics") {
    Rng rng(5);
    CMat a = testing::random_rank(rng, 4, 4, 2);
    CHECK(image_inclusion(a, a));
    // A column orthogonal to im(A): a kernel vector of A*.
    CMat left_null = kernel_basis(a.adjoint());
    REQUIRE(left_null.cols() > 0);
    CMat b = left_null.col(0);
    CHECK_FALSE(image_inclusion(b, a));
    CHECK_THROWS_AS(image_inclusion(CMat::Zero(3, 1), a), InvalidArgument);
}

TEST_CASE("kernel_inclusion basics") {
    Rng rng(6);
    CMat a = testing::random_rank(rng, 4, 4, 3);
    CHECK(kernel_inclusion(a, a));
    CMat inv = testing::random_full_rank(rng, 4, 4);
    CMat any = testing::random_matrix(rng, 2, 4);
    CHECK(kernel_inclusion(inv, any));  // ker A = {0}
}

TEST_CASE("inclusions of the feedback-elimination block structure") {
    // im [-C*S_i; 0] within im [[A,0],[0,0]] and ker [[A,0],[0,0]] within
    // ker [C_i 0] for invertible A.
    Rng rng(8);
    CMat a = testing::random_full_rank(rng, 3, 3);
    CMat csi = testing::random_matrix(rng, 3, 2);
    CMat big = CMat::Zero(5, 5);
    big.topLeftCorner(3, 3) = a;
    CMat b = CMat::Zero(5, 2);
    b.topRows(3) = csi;
    CHECK(image_inclusion(b, big));

    CMat ci = testing::random_matrix(rng, 2, 3);
    CMat c = CMat::Zero(2, 5);
    c.leftCols(3) = ci;
    CHECK(kernel_inclusion(big, c));
}

TEST_CASE("generalized inverses agree on well-defined complements") {
    // With im(B) in im(A) and ker(A) in ker(C), D - C A^- B does not depend
    // on the choice of generalized inverse.
    Rng rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        CMat a = testing::random_rank(rng, 4, 4, 2);
        CMat b = a * testing::random_matrix(rng, 4, 3);
        CMat c = testing::random_matrix(rng, 3, 4) * a;
        CMat d = testing::random_matrix(rng, 3, 3);
        CMat ref = d - c * moore_penrose(a) * b;
        for (int k = 0; k < 20; ++k) {
            CMat gi = testing::random_generalized_inverse(rng, a);
            CHECK((a * gi * a - a).norm() <= 1e-9 * (1.0 + a.norm()));
            CHECK((d - c * gi * b - ref).norm() <= 1e-9 * (1.0 + ref.norm()));
        }
    }
}

TEST_CASE("is_strictly_hurwitz") {
    CMat neg(1, 1);
    neg(0, 0) = Complex(-0.5, 0);  // -gamma/2 with gamma = 1
    CHECK(is_strictly_hurwitz(neg));

    CMat imag(1, 1);
    imag(0, 0) = Complex(0, 1);
    CHECK_FALSE(is_strictly_hurwitz(imag));

    Rng rng(10);
    CMat c = testing::random_full_rank(rng, 4, 3);
    CMat a = testing::random_hurwitz(rng, c);
    // Eigenvalue oracle on the Hermitian part -C*C/2.
    Eigen::SelfAdjointEigenSolver<CMat> es(CMat(-0.5 * c.adjoint() * c));
    CHECK(es.eigenvalues().maxCoeff() < -1e-9);
    CHECK(is_strictly_hurwitz(a));

    CHECK_THROWS_AS(is_strictly_hurwitz(CMat::Zero(2, 3)), InvalidArgument);
}

TEST_CASE("kernel_basis") {
    CHECK(kernel_basis(CMat::Identity(3, 3)).cols() == 0);
    CMat z = kernel_basis(CMat::Zero(3, 3));
    CHECK(z.cols() == 3);
    CHECK((z.adjoint() * z - CMat::Identity(3, 3)).norm() <= 1e-12);

    CMat d = CMat::Zero(3, 3);
    d(0, 0) = 1.0;
    d(2, 2) = 2.0;
    CMat kb = kernel_basis(d);
    REQUIRE(kb.cols() == 1);
    CHECK(std::abs(kb(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(kb(0, 0)) <= 1e-14);
    CHECK(std::abs(kb(2, 0)) <= 1e-14);
}

TEST_CASE("kernel_basis columns are orthonormal and annihilated") {
    Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        CMat m = testing::random_rank(rng, 5, 6, 3);
        CMat kb = kernel_basis(m);
        CHECK(kb.cols() == 3);
        CHECK((kb.adjoint() * kb - CMat::Identity(3, 3)).norm() <= 1e-10);
        CHECK((m * kb).norm() <= 1e-10 * (1.0 + m.norm()));
    }
}

TEST_CASE("condition_number") {
    CMat d = CMat::Zero(2, 2);
    d(0, 0) = 4.0;
    d(1, 1) = 1.0;
    CHECK(condition_number(d) == doctest::Approx(4.0));
    d(1, 1) = 0.0;
    CHECK(std::isinf(condition_number(d)));
}

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

#include <optional>
#include <vector>

#include "slhnet/operators.hpp"
#include "slhnet/schur.hpp"

namespace slhnet {

inline constexpr double kTripleTol = 1e-9;
inline constexpr double kIdentityTol = 1e-8;
inline constexpr double kConditionLimit = 1e12;

/// An n-channel Markov model (S, L, K) over an auxiliary space of
/// dimension d. Channel-blocked storage: S is (n d) x (n d) with d x d
/// blocks S_jk, L is (n d) x d with blocks L_j, K is d x d. The damping
/// satisfies K + K* + sum_j L_j* L_j = 0 and S is unitary.
struct SLHTriple {
    HilbertSpace space;
    int n = 0;
    CMat S;
    CMat L;
    CMat K;

    Index dim() const { return space.total_dim(); }

    struct Residuals {
        double unitarity = 0.0;
        double damping = 0.0;
    };
    Residuals residuals() const;
    void validate(double tol = kTripleTol) const;

    /// H = i (K + 1/2 sum_j L_j* L_j); Hermitian for a valid triple.
    CMat hamiltonian() const;

    static SLHTriple from_parts(HilbertSpace space, int n, CMat s, CMat l, CMat k,
                                double tol = kTripleTol);
    /// Builds K = -1/2 sum_j L_j* L_j - i H from a Hamiltonian.
    static SLHTriple from_lh(HilbertSpace space, int n, CMat s, CMat l, CMat h,
                             double tol = kTripleTol);
};

/// The (1+n) x (1+n) block coefficient matrix [[K, -L*S], [L, S-I]].
struct ItoMatrix {
    HilbertSpace space;
    int n = 0;
    CMat G;
};

ItoMatrix ito_matrix(const SLHTriple& t);

/// Reads (S, L, K) back off an Ito matrix and validates the triple plus
/// the -L*S consistency of the top-right block.
SLHTriple from_ito(const ItoMatrix& g, double tol = kTripleTol);

/// Series composition: the downstream system g2 fed by g1.
/// S = S2 S1, L = L2 + S2 L1, K = K1 + K2 - L2* S2 L1. Operators are
/// embedded into the joint space when the factors differ.
SLHTriple series_product(const SLHTriple& g2, const SLHTriple& g1);

/// Open-loop composition: block-diagonal S, stacked L, summed K on the
/// tensor product of the component spaces (labels must be disjoint).
SLHTriple concatenate(const std::vector<SLHTriple>& parts);

/// A k-scaled oscillator model. The physical coefficients at scale k are
///   S(k) = S,  L(k) = k C a + G,
///   K(k) = k^2 a* A a + k a* Z + k X a + R,
/// with all blocks operators on the auxiliary space (dimension d) and m
/// oscillator modes: S (nd x nd), C (nd x md), G (nd x d), A (md x md),
/// Z (md x d), X (d x md), R (d x d). A model with m = 0 carries no
/// oscillators and is an ordinary (S, L = G, K = R) triple.
struct OscillatorModel {
    HilbertSpace space;
    int n = 0;
    int m = 0;
    CMat S, C, G, A, Z, X, R;

    Index dim() const { return space.total_dim(); }

    /// Largest relative residual of the three structure identities
    /// A + A* = -C*C,  X + Z* = -G*C,  R + R* = -G*G.
    double identity_residual() const;
    double a_condition() const;

    static OscillatorModel from_slh(const SLHTriple& t);
    SLHTriple as_slh(double tol = kTripleTol) const;  // requires m == 0
};

/// Builds the oscillator model whose Hamiltonian is
/// H(k) = k^2 a* Omega a + k a* Gamma + k Gamma* a + Theta:
///   A = -1/2 C*C - i Omega,  Z = -1/2 C*G - i Gamma,
///   X = -1/2 G*C - i Gamma*, R = -1/2 G*G - i Theta.
/// The structure identities then hold by construction. Omega and Theta
/// must be Hermitian, S unitary, and A invertible.
OscillatorModel from_hamiltonian(const HilbertSpace& space, int n, int m,
                                 const CMat& s, const CMat& c, const CMat& g,
                                 const CMat& omega, const CMat& gamma,
                                 const CMat& theta);

/// Open-loop composition of oscillator models (channels and modes stack,
/// blocks embed into the joint auxiliary space).
OscillatorModel concatenate_models(const std::vector<OscillatorModel>& parts);

// --- network plumbing ----------------------------------------------------

/// One internal connection: the given output channel feeds the given
/// input channel (0-based global channel indices).
struct Connection {
    int out_channel = 0;
    int in_channel = 0;
};

/// The channel bookkeeping of a connected network: internal outputs o_r
/// aligned with the internal inputs they feed, and the orderings of the
/// remaining external ports. Reduced channel r pairs external_out[r] with
/// external_in[r].
struct ChannelSplit {
    std::vector<int> internal_out;
    std::vector<int> internal_in;
    std::vector<int> external_out;
    std::vector<int> external_in;
};

/// Derives the split from a connection list. Each output and each input
/// may be used at most once. Optional explicit external orderings must be
/// permutations of the unconnected ports; the default order is ascending.
ChannelSplit make_channel_split(int n, const std::vector<Connection>& connections,
                                const std::vector<int>* external_in_order = nullptr,
                                const std::vector<int>* external_out_order = nullptr);

/// Instantaneous feedback limit: aligns connected channels, partitions the
/// Ito matrix into external/internal blocks and returns the Schur
/// complement G_ee - G_ei (G_ii)^{-1} G_ie on the external channels.
/// Throws IllPosedError when G_ii = S_ii - I is numerically singular.
ItoMatrix feedback_reduce(const ItoMatrix& g, const std::vector<Connection>& connections,
                          const ChannelSplit* split = nullptr,
                          double cond_limit = kConditionLimit);

/// Feedback reduction of a k-scaled model, carried out blockwise on the
/// k-polynomial coefficients (a Schur complement of the four-way g matrix
/// over the slow-internal and fast-internal labels). The reduced blocks
/// are read off exactly; no finite-k instantiation is involved.
OscillatorModel feedback_reduce(const OscillatorModel& model,
                                const std::vector<Connection>& connections,
                                const ChannelSplit* split = nullptr,
                                double cond_limit = kConditionLimit);

// --- the coefficient matrix g ---------------------------------------------

/// The coefficient matrix g of G(k) = [I, k a*] g [I; k a] as a block
/// matrix over labels {s0, sc, f0, fc} (slow scalar, slow channel, fast
/// scalar, fast channel):
///   g_ss = [[R, -G*S], [G, S-I]], g_sf = [[X, 0], [C, 0]],
///   g_fs = [[Z, -C*S], [0, 0]],   g_ff = [[A, 0], [0, 0]].
schur::BlockMatrix g_matrix(const OscillatorModel& model);

/// g refined over labels {1, 2, 3, 4} = (slow external, slow internal,
/// fast scalar, fast channel) for the given channel split:
///   [[R1, M1, X1, 0], [G1, S_ii - I, C_i, 0], [Z1, -C*S_i, A, 0], [0,0,0,0]].
schur::BlockMatrix four_way_g(const OscillatorModel& model, const ChannelSplit& split);

// --- adiabatic elimination -------------------------------------------------

struct EliminationOptions {
    double hurwitz_margin = 1e-9;
    double cond_limit = kConditionLimit;
    double identity_tol = kIdentityTol;
    double validity_tol = kTripleTol;
    int kernel_cutoff = 6;  // Fock truncation for the explicit kernel check
};

struct EliminationReport {
    bool hurwitz = false;
    double hurwitz_eig = 0.0;  // lambda_max of the Hermitian part of A
    bool kernel_checked = false;
    bool kernel_ok = false;
    bool non_hurwitz_warning = false;
    double a_condition = 0.0;
    double identity_residual = 0.0;
    double unitarity_residual = 0.0;
    double damping_residual = 0.0;
};

/// Strong-coupling limit of the oscillator modes:
///   S^ = (I + C A^{-1} C*) S,  L^ = G - C A^{-1} Z,  K^ = R - X A^{-1} Z.
/// Requires A invertible, the structure identities, and either A strictly
/// Hurwitz or an explicit numerical check that the number operator
/// Y = sum A_jl (x) a_j* a_l annihilates exactly the oscillator ground
/// sector (the non-Hurwitz pass is flagged in the report). The returned
/// triple is validated: S^ unitary and K^ + K^* + L^*L^ = 0.
SLHTriple adiabatic_eliminate(const OscillatorModel& model,
                              EliminationReport* report = nullptr,
                              const EliminationOptions& opts = {});

// --- commutativity of the two limits ---------------------------------------

struct CommutativityReport {
    // Hypotheses.
    bool identities_ok = false;
    double identity_residual = 0.0;
    bool open_hurwitz = false;
    bool open_kernel_ok = false;
    bool sii_invertible = false;
    double sii_cond = 0.0;
    bool theorem_matrix_invertible = false;
    double theorem_matrix_cond = 0.0;
    bool reduced_hurwitz = false;
    bool reduced_kernel_ok = false;
    bool preconditions_met = false;
    bool hurwitz_warning = false;  // proceeded on the kernel check alone

    // Verdict (only meaningful when preconditions_met).
    bool verdict_available = false;
    double diff_s = 0.0;
    double diff_l = 0.0;
    double diff_k = 0.0;
    double tol = 0.0;
    bool pass = false;

    double max_diff() const { return std::max({diff_s, diff_l, diff_k}); }
};

/// Evaluates both orders of the two limits on a connected network:
/// eliminate-then-reduce against reduce-then-eliminate, reporting the
/// per-block maximum absolute difference of the resulting (S, L, K).
/// Hypothesis failures are reported, not judged: the verdict is withheld
/// so that "limits disagree" is never conflated with "hypotheses not met".
CommutativityReport check_commutativity(const OscillatorModel& open_loop,
                                        const std::vector<Connection>& connections,
                                        const ChannelSplit* split = nullptr,
                                        double tol = 1e-9,
                                        const EliminationOptions& opts = {});

}  // namespace slhnet

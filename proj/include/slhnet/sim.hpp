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

#include "slhnet/slh.hpp"

namespace slhnet::sim {

/// Hamiltonian-form data recovered from the model blocks:
/// Omega = i (A + C*C/2), Gamma = i (Z + C*G/2), Theta = i (R + G*G/2).
/// Hermiticity of Omega and Theta is equivalent to the structure
/// identities; violation means the model has no Hamiltonian form.
struct HamiltonianData {
    CMat omega;
    CMat gamma;
    CMat theta;
};

HamiltonianData hamiltonian_data(const OscillatorModel& model,
                                 double tol = kIdentityTol);

/// Concrete operators at scale k on aux (x) Fock(cutoff)^m:
///   H(k) = k^2 a* Omega a + k a* Gamma + k Gamma* a + Theta,
///   L_r(k) = k sum_j C_rj (x) a_j + G_r (x) I.
struct FiniteKModel {
    double k = 0.0;
    int cutoff = 0;
    int m = 0;
    Index aux_dim = 0;
    CMat h;
    std::vector<CMat> ls;

    Index dim() const { return h.rows(); }
};

FiniteKModel build_finite_k(const OscillatorModel& model, double k, int cutoff);

/// The master-equation generator rho' = -i[H, rho]
/// + sum_l (L_l rho L_l* - 1/2 {L_l* L_l, rho}), vectorized column-major
/// as a dim^2 x dim^2 matrix.
struct LindbladGenerator {
    Index dim = 0;
    CMat superop;
};

LindbladGenerator lindblad(const CMat& h, const std::vector<CMat>& ls);

/// Serial reference for the generator assembly; kept for testing the
/// parallel kernel and for the benchmark comparison.
LindbladGenerator lindblad_serial(const CMat& h, const std::vector<CMat>& ls);

/// y = superop * x, row-parallel.
CVec apply_superop(const CMat& superop, const CVec& x);
CVec apply_superop_serial(const CMat& superop, const CVec& x);

struct TimeGrid {
    double start = 0.0;
    double stop = 5.0;
    double step = 0.1;

    std::vector<double> points() const;
};

/// rho(t) = exp(t gen) rho0 at each grid point, via scaling-and-squaring
/// of the propagator. The input must be a state (Hermitian, unit trace,
/// positive semidefinite); trace drift beyond 1e-9 is an error.
std::vector<CMat> evolve(const LindbladGenerator& gen, const CMat& rho0,
                         const std::vector<double>& t_grid);

/// Verification of the excitation operator Y = sum A_jl (x) a_j* a_l on a
/// truncated Fock space: Y must annihilate the ground sector exactly,
/// preserve every total-excitation sector exactly, and be nonsingular on
/// sectors 1 .. cutoff-1 (likewise its adjoint). Sectors above cutoff-1
/// feel the truncation and are not judged.
struct YKernelReport {
    int m = 0;
    int cutoff = 0;
    bool hurwitz = false;
    double slow_residual = 0.0;
    double max_offsector = 0.0;
    std::vector<double> sector_sigma_min;          // sectors 1 .. cutoff-1
    std::vector<double> adjoint_sector_sigma_min;  // same for Y*
    bool slow_ok = false;
    bool sectors_ok = false;
    bool fast_nonsingular = false;
    bool adjoint_nonsingular = false;
    bool pass = false;
    bool non_hurwitz_pass = false;  // passed without strict Hurwitz stability
};

YKernelReport y_kernel_check(const CMat& a, int m, Index d, int cutoff,
                             double margin = 1e-9);

/// Traceless Hermitian observable basis with unit spectral norm (the
/// Pauli matrices for d = 2).
std::vector<CMat> gell_mann_observables(Index d);

struct ConvergenceOptions {
    std::vector<double> ks{2.0, 4.0, 8.0, 16.0};
    int cutoff = 8;
    TimeGrid grid{0.0, 5.0, 0.1};
    double threshold = 5e-2;
    double top_sector_limit = 1e-6;
    bool parallel = true;
    bool self_check = false;  // compare the limit model against itself
    bool keep_samples = false;
};

struct ConvergenceReport {
    std::vector<double> ks;
    std::vector<double> errs;  // sup over time and observables, per k
    bool monotonicity_applicable = false;
    bool strictly_decreasing = false;
    double final_err = 0.0;
    double threshold = 0.0;
    bool pass = false;
    double top_sector_population = 0.0;
    bool cutoff_warning = false;
    bool hurwitz = false;
    bool kernel_ok = false;

    struct Sample {
        double k;
        double t;
        int observable;
        double value;
        double limit_value;
    };
    std::vector<Sample> samples;
};

/// Reduces the network at the k-polynomial level, evolves the finite-k
/// master equation on the truncated Fock space for each k, and measures
/// the sup-over-time deviation of the slow observables from the limit
/// model's evolution. The initial state is rho0_slow (x) oscillator
/// ground state.
ConvergenceReport convergence_study(const OscillatorModel& open_loop,
                                    const std::vector<Connection>& connections,
                                    const ChannelSplit* split,
                                    const std::vector<CMat>& observables,
                                    const CMat& rho0_slow,
                                    const ConvergenceOptions& opts = {});

}  // namespace slhnet::sim

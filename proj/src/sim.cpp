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

#include "slhnet/sim.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "slhnet/fock.hpp"

namespace slhnet::sim {

HamiltonianData hamiltonian_data(const OscillatorModel& model, double tol) {
    const Complex i1(0, 1);
    HamiltonianData h;
    h.omega = i1 * (model.A + 0.5 * model.C.adjoint() * model.C);
    h.gamma = i1 * (model.Z + 0.5 * model.C.adjoint() * model.G);
    h.theta = i1 * (model.R + 0.5 * model.G.adjoint() * model.G);
    const double res = std::max(
        (h.omega - h.omega.adjoint()).norm() / (1.0 + h.omega.norm()),
        (h.theta - h.theta.adjoint()).norm() / (1.0 + h.theta.norm()));
    if (res > tol) {
        throw PreconditionError(
            "hamiltonian_data: no Hamiltonian form, structure identities are "
            "violated (residual " + std::to_string(res) + ")");
    }
    // Symmetrize away the identity-level rounding so H(k) is exactly Hermitian.
    h.omega = 0.5 * (h.omega + h.omega.adjoint()).eval();
    h.theta = 0.5 * (h.theta + h.theta.adjoint()).eval();
    return h;
}

FiniteKModel build_finite_k(const OscillatorModel& model, double k, int cutoff) {
    if (cutoff < 2) throw InvalidArgument("build_finite_k: cutoff too small");
    if (k < 0) throw InvalidArgument("build_finite_k: k must be nonnegative");
    HamiltonianData ham = hamiltonian_data(model);
    const Index d = model.dim();
    const Index fdim = fock::fock_dim(model.m, cutoff);
    const CMat idf = CMat::Identity(fdim, fdim);

    FiniteKModel out;
    out.k = k;
    out.cutoff = cutoff;
    out.m = model.m;
    out.aux_dim = d;
    out.h = kron(ham.theta, idf);
    out.ls.reserve(model.n);
    std::vector<CMat> modes;
    for (int j = 0; j < model.m; ++j) {
        modes.push_back(fock::mode_annihilator(model.m, cutoff, j));
    }
    for (int j = 0; j < model.m; ++j) {
        for (int l = 0; l < model.m; ++l) {
            out.h += k * k * kron(ham.omega.block(j * d, l * d, d, d),
                                  CMat(modes[j].adjoint() * modes[l]));
        }
        out.h += k * kron(ham.gamma.middleRows(j * d, d), CMat(modes[j].adjoint()));
        out.h += k * kron(CMat(ham.gamma.middleRows(j * d, d).adjoint()), modes[j]);
    }
    for (int r = 0; r < model.n; ++r) {
        CMat lr = kron(model.G.middleRows(r * d, d), idf);
        for (int j = 0; j < model.m; ++j) {
            lr += k * kron(model.C.block(r * d, j * d, d, d), modes[j]);
        }
        out.ls.push_back(std::move(lr));
    }
    return out;
}

namespace {

void check_hermitian(const CMat& h, const char* who) {
    if (h.rows() != h.cols()) throw InvalidArgument(std::string(who) + ": H not square");
    if ((h - h.adjoint()).norm() > 1e-9 * (1.0 + h.norm())) {
        throw InvalidArgument(std::string(who) + ": H must be Hermitian");
    }
}

// Writes the generator entries for rows q*d+p with p, q in [0, d).
// Column-major vectorization: vec(rho)[q*d+p] = rho(p, q).
template <bool Parallel>
LindbladGenerator assemble_lindblad(const CMat& h, const std::vector<CMat>& ls) {
    check_hermitian(h, "lindblad");
    const Index d = h.rows();
    for (const auto& l : ls) {
        if (l.rows() != d || l.cols() != d) {
            throw InvalidArgument("lindblad: jump operator shape mismatch");
        }
    }
    std::vector<CMat> lsq;
    lsq.reserve(ls.size());
    for (const auto& l : ls) lsq.push_back(l.adjoint() * l);

    LindbladGenerator gen;
    gen.dim = d;
    gen.superop.resize(d * d, d * d);
    const Complex i1(0, 1);
#pragma omp parallel for collapse(2) schedule(static) if (Parallel)
    for (Index q = 0; q < d; ++q) {
        for (Index p = 0; p < d; ++p) {
            const Index row = q * d + p;
            for (Index s = 0; s < d; ++s) {
                for (Index r = 0; r < d; ++r) {
                    Complex v(0, 0);
                    if (q == s) v -= i1 * h(p, r);
                    if (p == r) v += i1 * h(s, q);
                    for (size_t l = 0; l < ls.size(); ++l) {
                        v += std::conj(ls[l](q, s)) * ls[l](p, r);
                        if (q == s) v -= 0.5 * lsq[l](p, r);
                        if (p == r) v -= 0.5 * lsq[l](s, q);
                    }
                    gen.superop(row, s * d + r) = v;
                }
            }
        }
    }
    return gen;
}

}  // namespace

LindbladGenerator lindblad(const CMat& h, const std::vector<CMat>& ls) {
    return assemble_lindblad<true>(h, ls);
}

LindbladGenerator lindblad_serial(const CMat& h, const std::vector<CMat>& ls) {
    return assemble_lindblad<false>(h, ls);
}

CVec apply_superop(const CMat& superop, const CVec& x) {
    const Index n = superop.rows();
    CVec y(n);
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) {
        Complex acc(0, 0);
        for (Index j = 0; j < superop.cols(); ++j) acc += superop(i, j) * x(j);
        y(i) = acc;
    }
    return y;
}

CVec apply_superop_serial(const CMat& superop, const CVec& x) {
    const Index n = superop.rows();
    CVec y(n);
    for (Index i = 0; i < n; ++i) {
        Complex acc(0, 0);
        for (Index j = 0; j < superop.cols(); ++j) acc += superop(i, j) * x(j);
        y(i) = acc;
    }
    return y;
}

std::vector<double> TimeGrid::points() const {
    if (step <= 0) throw InvalidArgument("TimeGrid: step must be positive");
    if (stop < start) throw InvalidArgument("TimeGrid: stop before start");
    std::vector<double> out;
    const double span = stop - start;
    const auto count = static_cast<long>(std::floor(span / step + 1e-9));
    out.reserve(count + 1);
    for (long i = 0; i <= count; ++i) out.push_back(start + step * i);
    return out;
}

namespace {

CVec vectorize(const CMat& rho) {
    CVec v(rho.size());
    Index k = 0;
    for (Index j = 0; j < rho.cols(); ++j) {
        for (Index i = 0; i < rho.rows(); ++i) v(k++) = rho(i, j);
    }
    return v;
}

CMat devectorize(const CVec& v, Index d) {
    CMat rho(d, d);
    Index k = 0;
    for (Index j = 0; j < d; ++j) {
        for (Index i = 0; i < d; ++i) rho(i, j) = v(k++);
    }
    return rho;
}

void check_state(const CMat& rho, Index d) {
    if (rho.rows() != d || rho.cols() != d) {
        throw InvalidArgument("evolve: state dimension mismatch");
    }
    if ((rho - rho.adjoint()).norm() > 1e-9 * (1.0 + rho.norm())) {
        throw InvalidArgument("evolve: state is not Hermitian");
    }
    if (std::abs(rho.trace().real() - 1.0) > 1e-9 || std::abs(rho.trace().imag()) > 1e-12) {
        throw InvalidArgument("evolve: state trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9) {
        throw InvalidArgument("evolve: state is not positive semidefinite");
    }
}

}  // namespace

std::vector<CMat> evolve(const LindbladGenerator& gen, const CMat& rho0,
                         const std::vector<double>& t_grid) {
    const Index d = gen.dim;
    check_state(rho0, d);
    if (t_grid.empty()) return {};
    for (size_t i = 0; i + 1 < t_grid.size(); ++i) {
        if (t_grid[i + 1] < t_grid[i]) {
            throw InvalidArgument("evolve: time grid must be nondecreasing");
        }
    }
    bool uniform = true;
    const double dt0 = t_grid.size() > 1 ? t_grid[1] - t_grid[0] : 0.0;
    for (size_t i = 0; i + 1 < t_grid.size(); ++i) {
        if (std::abs((t_grid[i + 1] - t_grid[i]) - dt0) > 1e-12 * (1.0 + std::abs(dt0))) {
            uniform = false;
            break;
        }
    }

    std::vector<CMat> out;
    out.reserve(t_grid.size());
    auto check_trace = [](const CMat& rho) {
        if (std::abs(rho.trace().real() - 1.0) > 1e-9) {
            throw Error("evolve: trace drift exceeded 1e-9");
        }
    };
    if (uniform) {
        CVec v = vectorize(rho0);
        if (t_grid[0] != 0.0) {
            CMat e0 = (gen.superop * Complex(t_grid[0], 0)).exp();
            v = apply_superop(e0, v);
        }
        CMat step = dt0 > 0 ? CMat((gen.superop * Complex(dt0, 0)).exp())
                            : CMat(CMat::Identity(d * d, d * d));
        for (size_t i = 0; i < t_grid.size(); ++i) {
            if (i > 0) v = apply_superop(step, v);
            CMat rho = devectorize(v, d);
            check_trace(rho);
            out.push_back(std::move(rho));
        }
    } else {
        CVec v0 = vectorize(rho0);
        for (double t : t_grid) {
            CMat et = (gen.superop * Complex(t, 0)).exp();
            CMat rho = devectorize(apply_superop(et, v0), d);
            check_trace(rho);
            out.push_back(std::move(rho));
        }
    }
    return out;
}

YKernelReport y_kernel_check(const CMat& a, int m, Index d, int cutoff, double margin) {
    YKernelReport rep;
    rep.m = m;
    rep.cutoff = cutoff;
    rep.hurwitz = is_strictly_hurwitz(a, margin);
    const CMat y = fock::y_operator(a, m, d, cutoff);
    const Index fdim = fock::fock_dim(m, cutoff);
    const auto sectors = fock::number_sectors(m, cutoff);

    for (Index i = 0; i < d; ++i) {
        rep.slow_residual = std::max(rep.slow_residual, y.col(i * fdim).norm());
        rep.slow_residual = std::max(rep.slow_residual, y.row(i * fdim).norm());
    }
    rep.slow_ok = rep.slow_residual == 0.0;

    // Sector labels per joint index; any entry across sectors breaks the
    // excitation-number invariance.
    std::vector<int> sector_of(d * fdim);
    for (size_t n = 0; n < sectors.size(); ++n) {
        for (Index f : sectors[n]) {
            for (Index i = 0; i < d; ++i) sector_of[i * fdim + f] = static_cast<int>(n);
        }
    }
    for (Index r = 0; r < y.rows(); ++r) {
        for (Index c = 0; c < y.cols(); ++c) {
            if (sector_of[r] != sector_of[c]) {
                rep.max_offsector = std::max(rep.max_offsector, std::abs(y(r, c)));
            }
        }
    }
    rep.sectors_ok = rep.max_offsector == 0.0;

    const double scale = 1.0 + a.norm();
    rep.fast_nonsingular = true;
    rep.adjoint_nonsingular = true;
    const CMat yadj = y.adjoint();
    for (int n = 1; n < cutoff && n < static_cast<int>(sectors.size()); ++n) {
        const auto idx = fock::joint_indices(d, fdim, sectors[n]);
        Eigen::JacobiSVD<CMat> svd(fock::restrict_to(y, idx));
        const double smin = svd.singularValues().minCoeff();
        rep.sector_sigma_min.push_back(smin);
        if (smin <= margin * scale) rep.fast_nonsingular = false;
        Eigen::JacobiSVD<CMat> svd2(fock::restrict_to(yadj, idx));
        const double smin2 = svd2.singularValues().minCoeff();
        rep.adjoint_sector_sigma_min.push_back(smin2);
        if (smin2 <= margin * scale) rep.adjoint_nonsingular = false;
    }
    rep.pass = rep.slow_ok && rep.sectors_ok && rep.fast_nonsingular &&
               rep.adjoint_nonsingular;
    rep.non_hurwitz_pass = rep.pass && !rep.hurwitz;
    return rep;
}

std::vector<CMat> gell_mann_observables(Index d) {
    std::vector<CMat> out;
    const Complex i1(0, 1);
    for (Index j = 0; j < d; ++j) {
        for (Index k = j + 1; k < d; ++k) {
            CMat sym = CMat::Zero(d, d);
            sym(j, k) = 1.0;
            sym(k, j) = 1.0;
            out.push_back(sym);
            CMat asym = CMat::Zero(d, d);
            asym(j, k) = -i1;
            asym(k, j) = i1;
            out.push_back(asym);
        }
    }
    for (Index k = 1; k < d; ++k) {
        CMat diag = CMat::Zero(d, d);
        for (Index j = 0; j < k; ++j) diag(j, j) = 1.0;
        diag(k, k) = -static_cast<double>(k);
        diag /= static_cast<double>(k);  // unit spectral norm
        out.push_back(diag);
    }
    return out;
}

ConvergenceReport convergence_study(const OscillatorModel& open_loop,
                                    const std::vector<Connection>& connections,
                                    const ChannelSplit* split,
                                    const std::vector<CMat>& observables,
                                    const CMat& rho0_slow,
                                    const ConvergenceOptions& opts) {
    if (observables.empty()) {
        throw InvalidArgument("convergence_study: no observables given");
    }
    ConvergenceReport rep;
    rep.ks = opts.ks;
    rep.threshold = opts.threshold;
    for (size_t i = 0; i + 1 < opts.ks.size(); ++i) {
        if (opts.ks[i + 1] <= opts.ks[i]) {
            throw InvalidArgument("convergence_study: k values must be increasing");
        }
    }

    OscillatorModel reduced =
        connections.empty() && !split
            ? open_loop
            : feedback_reduce(open_loop, connections, split);
    const Index d = reduced.dim();
    if (reduced.m > 0 && !(condition_number(reduced.A) < kConditionLimit)) {
        throw PreconditionError("convergence_study: A is singular after reduction");
    }
    rep.hurwitz = is_strictly_hurwitz(reduced.A);
    if (reduced.m > 0) {
        auto ycheck = y_kernel_check(reduced.A, reduced.m, d, opts.cutoff);
        rep.kernel_ok = ycheck.pass;
        if (!ycheck.pass) {
            throw PreconditionError(
                "convergence_study: the excitation operator does not annihilate "
                "exactly the oscillator ground sector");
        }
    } else {
        rep.kernel_ok = true;
    }

    // Limit-side evolution on the auxiliary space.
    SLHTriple limit = adiabatic_eliminate(reduced);
    std::vector<CMat> limit_ls;
    for (int r = 0; r < limit.n; ++r) limit_ls.push_back(limit.L.middleRows(r * d, d));
    LindbladGenerator limit_gen = lindblad(limit.hamiltonian(), limit_ls);
    const std::vector<double> ts = opts.grid.points();
    std::vector<CMat> limit_rho = evolve(limit_gen, rho0_slow, ts);
    std::vector<std::vector<double>> limit_expect(ts.size());
    for (size_t ti = 0; ti < ts.size(); ++ti) {
        for (const auto& obs : observables) {
            limit_expect[ti].push_back((obs * limit_rho[ti]).trace().real());
        }
    }

    const size_t nk = opts.ks.size();
    std::vector<double> errs(nk, 0.0), pops(nk, 0.0);
    std::vector<std::vector<ConvergenceReport::Sample>> samples(nk);
    std::vector<std::string> failures(nk);

#pragma omp parallel for schedule(dynamic) if (opts.parallel && !opts.self_check)
    for (size_t ki = 0; ki < nk; ++ki) {
        try {
            if (opts.self_check) {
                // The limit model against itself; deviations are pure rounding.
                std::vector<CMat> rhos = evolve(limit_gen, rho0_slow, ts);
                double err = 0.0;
                for (size_t ti = 0; ti < ts.size(); ++ti) {
                    for (size_t oi = 0; oi < observables.size(); ++oi) {
                        double v = (observables[oi] * rhos[ti]).trace().real();
                        err = std::max(err, std::abs(v - limit_expect[ti][oi]));
                    }
                }
                errs[ki] = err;
                continue;
            }
            FiniteKModel fk = build_finite_k(reduced, opts.ks[ki], opts.cutoff);
            LindbladGenerator gen = lindblad(fk.h, fk.ls);
            const Index fdim = fock::fock_dim(reduced.m, opts.cutoff);
            CMat vac = CMat::Zero(fdim, fdim);
            vac(0, 0) = 1.0;
            CMat rho0 = kron(rho0_slow, vac);
            std::vector<CMat> rhos = evolve(gen, rho0, ts);

            // Joint indices whose oscillator part touches the top Fock level.
            std::vector<Index> top;
            for (Index f = 0; f < fdim; ++f) {
                Index rem = f;
                bool at_top = false;
                for (int j = 0; j < reduced.m; ++j) {
                    if (rem % opts.cutoff == opts.cutoff - 1) at_top = true;
                    rem /= opts.cutoff;
                }
                if (at_top) {
                    for (Index i = 0; i < d; ++i) top.push_back(i * fdim + f);
                }
            }

            double err = 0.0, pop = 0.0;
            for (size_t ti = 0; ti < ts.size(); ++ti) {
                const CMat& rho = rhos[ti];
                for (size_t oi = 0; oi < observables.size(); ++oi) {
                    CMat lifted = kron(observables[oi], CMat::Identity(fdim, fdim));
                    double v = (lifted * rho).trace().real();
                    err = std::max(err, std::abs(v - limit_expect[ti][oi]));
                    if (opts.keep_samples) {
                        samples[ki].push_back({opts.ks[ki], ts[ti],
                                               static_cast<int>(oi), v,
                                               limit_expect[ti][oi]});
                    }
                }
                double p = 0.0;
                for (Index idx : top) p += rho(idx, idx).real();
                pop = std::max(pop, p);
            }
            errs[ki] = err;
            pops[ki] = pop;
        } catch (const std::exception& e) {
            failures[ki] = e.what();
        }
    }
    for (const auto& f : failures) {
        if (!f.empty()) throw Error("convergence_study: " + f);
    }

    rep.errs = errs;
    for (double p : pops) rep.top_sector_population = std::max(rep.top_sector_population, p);
    rep.cutoff_warning = rep.top_sector_population > opts.top_sector_limit;
    rep.monotonicity_applicable = nk > 1;
    rep.strictly_decreasing = nk > 1;
    for (size_t i = 0; i + 1 < nk; ++i) {
        if (!(errs[i + 1] < errs[i])) rep.strictly_decreasing = false;
    }
    rep.final_err = errs.empty() ? 0.0 : errs.back();
    rep.pass = rep.final_err < opts.threshold &&
               (!rep.monotonicity_applicable || rep.strictly_decreasing);
    for (auto& s : samples) {
        rep.samples.insert(rep.samples.end(), s.begin(), s.end());
    }
    return rep;
}

}  // namespace slhnet::sim

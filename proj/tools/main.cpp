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

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "slhnet/json_io.hpp"
#include "slhnet/netdsl.hpp"
#include "slhnet/sim.hpp"
#include "slhnet/slh.hpp"

namespace {

using namespace slhnet;

enum ExitCode {
    kOk = 0,
    kParseError = 1,
    kIllPosed = 2,
    kPrecondition = 3,
    kMismatch = 4,
    kInternal = 5,
};

struct ParseFailure {};  // diagnostics already printed

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << path << ": cannot open file\n";
        throw ParseFailure{};
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

dsl::CompiledNetwork load_network(const std::string& path) {
    const std::string source = read_file(path);
    dsl::ParseResult parsed = dsl::parse(source);
    if (!parsed.ok()) {
        for (const auto& d : parsed.diagnostics) {
            std::cerr << path << ":" << d.str() << "\n";
        }
        throw ParseFailure{};
    }
    try {
        return dsl::compile(*parsed.spec);
    } catch (const InvalidArgument& e) {
        std::cerr << path << ": " << e.what() << "\n";
        throw ParseFailure{};
    }
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot write to " + out_path);
    out << text;
}

std::vector<double> parse_k_list(const std::string& text) {
    std::vector<double> ks;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) ks.push_back(std::stod(item));
    }
    if (ks.empty()) throw CLI::ValidationError("--k", "empty k list");
    for (size_t i = 0; i + 1 < ks.size(); ++i) {
        if (ks[i + 1] <= ks[i]) {
            throw CLI::ValidationError("--k", "k values must be increasing");
        }
    }
    return ks;
}

sim::TimeGrid parse_time_grid(const std::string& text) {
    sim::TimeGrid grid;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &grid.start, &grid.stop, &grid.step) != 3) {
        throw CLI::ValidationError("--t", "expected start:stop:step");
    }
    return grid;
}

int cmd_reduce(const std::string& file, const std::string& out_path) {
    dsl::CompiledNetwork net = load_network(file);
    OscillatorModel reduced =
        feedback_reduce(net.open_loop, net.connections, &net.split);
    const std::string text = reduced.m == 0
                                 ? jsonio::triple_json(reduced.as_slh())
                                 : jsonio::model_json(reduced);
    write_output(text, out_path);
    return kOk;
}

int cmd_eliminate(const std::string& file, const std::string& out_path) {
    dsl::CompiledNetwork net = load_network(file);
    if (!net.connections.empty()) {
        throw PreconditionError(
            "eliminate expects an open-loop network; run 'reduce' first or use "
            "'check-commute' for the full pipeline");
    }
    EliminationReport rep;
    SLHTriple limit = adiabatic_eliminate(net.open_loop, &rep);
    write_output(jsonio::elimination_json(limit, rep), out_path);
    return kOk;
}

int cmd_check_commute(const std::string& file, double tol, const std::string& format,
                      const std::string& out_path) {
    dsl::CompiledNetwork net = load_network(file);
    CommutativityReport rep =
        check_commutativity(net.open_loop, net.connections, &net.split, tol);
    write_output(format == "table" ? jsonio::commutativity_report_table(rep)
                                   : jsonio::commutativity_report_json(rep),
                 out_path);
    if (!rep.preconditions_met) return kPrecondition;
    return rep.pass ? kOk : kMismatch;
}

int cmd_converge(const std::string& file, const sim::ConvergenceOptions& opts,
                 const std::string& format, const std::string& out_path,
                 const std::string& csv_path) {
    dsl::CompiledNetwork net = load_network(file);
    const Index d = net.open_loop.dim();
    if (d < 2) {
        throw PreconditionError(
            "converge needs a nontrivial auxiliary space to carry observables "
            "(all components have dim = 1)");
    }
    std::vector<CMat> observables = sim::gell_mann_observables(d);
    CVec psi = CVec::Ones(d) / std::sqrt(static_cast<double>(d));
    CMat rho0 = psi * psi.adjoint();
    sim::ConvergenceOptions run = opts;
    run.keep_samples = !csv_path.empty();
    sim::ConvergenceReport rep = sim::convergence_study(
        net.open_loop, net.connections, &net.split, observables, rho0, run);
    write_output(format == "table" ? jsonio::convergence_report_table(rep)
                                   : jsonio::convergence_report_json(rep),
                 out_path);
    if (!csv_path.empty()) write_output(jsonio::convergence_csv(rep), csv_path);
    return rep.pass ? kOk : kMismatch;
}

int cmd_validate_network(const std::string& file, double tol,
                         const std::string& out_path) {
    dsl::CompiledNetwork net = load_network(file);
    jsonio::JsonWriter w;
    w.obj_begin()
        .key("schema").str("slhnet/1")
        .key("kind").str("validation_report");
    w.key("open_loop").obj_begin()
        .key("channels").integer(net.open_loop.n)
        .key("oscillators").integer(net.open_loop.m)
        .key("identity_residual").num(net.open_loop.identity_residual())
        .key("a_condition").num(net.open_loop.a_condition())
        .key("hurwitz").boolean(is_strictly_hurwitz(net.open_loop.A))
        .obj_end();
    bool ok = net.open_loop.identity_residual() <= kIdentityTol;

    if (!net.connections.empty()) {
        CommutativityReport rep =
            check_commutativity(net.open_loop, net.connections, &net.split, tol);
        w.key("preconditions").obj_begin()
            .key("open_loop_hurwitz").boolean(rep.open_hurwitz)
            .key("open_loop_kernel_ok").boolean(rep.open_kernel_ok)
            .key("s_internal_minus_identity_invertible").boolean(rep.sii_invertible)
            .key("s_internal_condition").num(rep.sii_cond)
            .key("closed_loop_matrix_invertible").boolean(rep.theorem_matrix_invertible)
            .key("closed_loop_matrix_condition").num(rep.theorem_matrix_cond)
            .key("reduced_hurwitz").boolean(rep.reduced_hurwitz)
            .key("reduced_kernel_ok").boolean(rep.reduced_kernel_ok)
            .key("met").boolean(rep.preconditions_met)
            .obj_end();
        ok = ok && rep.preconditions_met;

        if (net.open_loop.m > 0) {
            auto g4 = four_way_g(net.open_loop, net.split);
            auto lemma = schur::check_lemma_new(g4, {"1"}, {"2"}, {"3", "4"});
            w.key("well_definedness_conditions").arr_begin();
            for (int i = 0; i < 6; ++i) w.boolean(lemma.ok[i]);
            w.arr_end();
            ok = ok && lemma.all();
        }
    } else if (net.open_loop.m > 0) {
        ok = ok && (is_strictly_hurwitz(net.open_loop.A) ||
                    sim::y_kernel_check(net.open_loop.A, net.open_loop.m,
                                        net.open_loop.dim(), 6)
                        .pass);
    }
    w.key("ok").boolean(ok);
    w.obj_end();
    write_output(w.out(), out_path);
    return ok ? kOk : kPrecondition;
}

int cmd_validate_block_matrix(const std::string& file, const std::string& b_labels,
                              const std::string& c_labels, const std::string& out_path) {
    auto split_labels = [](const std::string& text) {
        std::vector<std::string> out;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) out.push_back(item);
        }
        return out;
    };
    schur::BlockMatrix m;
    try {
        m = jsonio::block_matrix_from_json_text(read_file(file));
    } catch (const InvalidArgument& e) {
        std::cerr << file << ": " << e.what() << "\n";
        throw ParseFailure{};
    }
    auto b = split_labels(b_labels);
    auto c = split_labels(c_labels);
    jsonio::JsonWriter w;
    w.obj_begin()
        .key("schema").str("slhnet/1")
        .key("kind").str("schur_check_report");
    bool ok = true;
    {
        auto bc = b;
        bc.insert(bc.end(), c.begin(), c.end());
        auto rep = schur::check_well_defined(m, bc, bc);
        w.key("well_defined").obj_begin()
            .key("im_ok").boolean(rep.im_ok)
            .key("im_residual").num(rep.im_residual)
            .key("ker_ok").boolean(rep.ker_ok)
            .key("ker_residual").num(rep.ker_residual)
            .obj_end();
        ok = rep.ok();
    }
    auto a = m.rows.complement([&] {
        auto bc = b;
        bc.insert(bc.end(), c.begin(), c.end());
        return bc;
    }());
    if (!a.empty()) {
        auto lemma = schur::check_lemma_new(m, a, b, c);
        w.key("successive_conditions").arr_begin();
        for (int i = 0; i < 6; ++i) w.boolean(lemma.ok[i]);
        w.arr_end();
        w.key("failed_conditions").str(lemma.failed_list());
        ok = ok && lemma.all();
    }
    w.key("ok").boolean(ok);
    w.obj_end();
    write_output(w.out(), out_path);
    return ok ? kOk : kPrecondition;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"slhnet: quantum feedback network reduction and verification"};
    app.require_subcommand(1);

    std::string file, out_path, format = "json", csv_path;
    double tol = 1e-9;
    std::string k_list = "2,4,8,16", t_spec = "0:5:0.1";
    int cutoff = 8;
    std::string schur_b, schur_c;

    auto add_common = [&](CLI::App* sub, bool with_tol) {
        sub->add_option("file", file, "network description (.slh)")->required();
        sub->add_option("--out", out_path, "output path (default stdout)");
        sub->add_option("--format", format, "json or table")
            ->check(CLI::IsMember({"json", "table"}));
        if (with_tol) sub->add_option("--tol", tol, "comparison tolerance");
    };

    auto* reduce = app.add_subcommand("reduce", "instantaneous feedback limit");
    add_common(reduce, false);
    auto* eliminate = app.add_subcommand("eliminate", "adiabatic elimination limit");
    add_common(eliminate, false);
    auto* check = app.add_subcommand("check-commute",
                                     "verify the two limits commute on this network");
    add_common(check, true);
    auto* converge = app.add_subcommand(
        "converge", "finite-k master-equation convergence study");
    add_common(converge, false);
    converge->add_option("--k", k_list, "comma-separated increasing k ladder");
    converge->add_option("--cutoff", cutoff, "Fock truncation per oscillator");
    converge->add_option("--t", t_spec, "time grid start:stop:step");
    converge->add_option("--csv", csv_path, "write per-sample CSV here");
    auto* validate = app.add_subcommand(
        "validate", "run the precondition battery without reducing");
    add_common(validate, true);
    validate->add_option("--schur-b", schur_b,
                         "block-matrix mode: first eliminated label set");
    validate->add_option("--schur-c", schur_c,
                         "block-matrix mode: second eliminated label set");

    CLI11_PARSE(app, argc, argv);

    try {
        if (reduce->parsed()) return cmd_reduce(file, out_path);
        if (eliminate->parsed()) return cmd_eliminate(file, out_path);
        if (check->parsed()) return cmd_check_commute(file, tol, format, out_path);
        if (converge->parsed()) {
            sim::ConvergenceOptions opts;
            opts.ks = parse_k_list(k_list);
            opts.cutoff = cutoff;
            opts.grid = parse_time_grid(t_spec);
            return cmd_converge(file, opts, format, out_path, csv_path);
        }
        if (validate->parsed()) {
            if (file.size() > 5 && file.substr(file.size() - 5) == ".json") {
                return cmd_validate_block_matrix(file, schur_b, schur_c, out_path);
            }
            return cmd_validate_network(file, tol, out_path);
        }
    } catch (const ParseFailure&) {
        return kParseError;
    } catch (const IllPosedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIllPosed;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kPrecondition;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParseError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}

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

#include "slhnet/json_io.hpp"

#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

namespace slhnet::jsonio {

using nlohmann::json;

namespace {

json parse_or_throw(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("JSON parse error: ") + e.what());
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void JsonWriter::pre_value() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (!has_items_.empty()) {
        if (has_items_.back()) out_ += ',';
        has_items_.back() = true;
    }
}

JsonWriter& JsonWriter::obj_begin() {
    pre_value();
    out_ += '{';
    has_items_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::obj_end() {
    out_ += '}';
    has_items_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::arr_begin() {
    pre_value();
    out_ += '[';
    has_items_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::arr_end() {
    out_ += ']';
    has_items_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::key(std::string_view k) {
    if (has_items_.back()) out_ += ',';
    has_items_.back() = true;
    out_ += '"';
    out_ += k;
    out_ += "\":";
    pending_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::num(double v) {
    pre_value();
    out_ += format_double(v);
    return *this;
}

JsonWriter& JsonWriter::integer(long long v) {
    pre_value();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::boolean(bool v) {
    pre_value();
    out_ += v ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::str(std::string_view v) {
    pre_value();
    out_ += '"';
    for (char c : v) {
        if (c == '"' || c == '\\') out_ += '\\';
        out_ += c;
    }
    out_ += '"';
    return *this;
}

JsonWriter& JsonWriter::raw(std::string_view v) {
    pre_value();
    out_ += v;
    return *this;
}

void write_matrix(JsonWriter& w, const CMat& m) {
    w.arr_begin();
    for (Index i = 0; i < m.rows(); ++i) {
        w.arr_begin();
        for (Index j = 0; j < m.cols(); ++j) {
            w.arr_begin().num(m(i, j).real()).num(m(i, j).imag()).arr_end();
        }
        w.arr_end();
    }
    w.arr_end();
}

namespace {

void write_space(JsonWriter& w, const HilbertSpace& s) {
    w.obj_begin().key("factors").arr_begin();
    for (const auto& f : s.factors()) {
        w.obj_begin()
            .key("label").str(f.label)
            .key("dim").integer(f.dim)
            .obj_end();
    }
    w.arr_end().obj_end();
}

CMat matrix_from_json(const json& j) {
    if (!j.is_array()) throw InvalidArgument("matrix JSON: expected an array of rows");
    const Index rows = static_cast<Index>(j.size());
    if (rows == 0) return CMat(0, 0);
    const Index cols = static_cast<Index>(j.at(0).size());
    CMat m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const auto& row = j.at(i);
        if (static_cast<Index>(row.size()) != cols) {
            throw InvalidArgument("matrix JSON: ragged rows");
        }
        for (Index k = 0; k < cols; ++k) {
            const auto& cell = row.at(k);
            if (!cell.is_array() || cell.size() != 2) {
                throw InvalidArgument("matrix JSON: entries must be [re, im] pairs");
            }
            m(i, k) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
        }
    }
    return m;
}

HilbertSpace space_from_json(const json& j) {
    std::vector<SpaceFactor> fs;
    for (const auto& f : j.at("factors")) {
        fs.push_back({f.at("label").get<std::string>(), f.at("dim").get<Index>()});
    }
    return HilbertSpace(fs);
}

}  // namespace

std::string matrix_json(const CMat& m) {
    JsonWriter w;
    write_matrix(w, m);
    return w.out();
}

CMat matrix_from_json_text(const std::string& text) {
    return matrix_from_json(parse_or_throw(text));
}

std::string triple_json(const SLHTriple& t) {
    JsonWriter w;
    w.obj_begin()
        .key("schema").str("slhnet/1")
        .key("kind").str("slh_triple");
    w.key("space");
    write_space(w, t.space);
    w.key("channels").integer(t.n);
    w.key("S");
    write_matrix(w, t.S);
    w.key("L");
    write_matrix(w, t.L);
    w.key("K");
    write_matrix(w, t.K);
    w.obj_end();
    return w.out();
}

SLHTriple triple_from_json_text(const std::string& text) {
    json j = parse_or_throw(text);
    try {
        return SLHTriple::from_parts(space_from_json(j.at("space")),
                                     j.at("channels").get<int>(),
                                     matrix_from_json(j.at("S")),
                                     matrix_from_json(j.at("L")),
                                     matrix_from_json(j.at("K")));
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("slh_triple JSON: ") + e.what());
    }
}

std::string model_json(const OscillatorModel& m) {
    JsonWriter w;
    w.obj_begin()
        .key("schema").str("slhnet/1")
        .key("kind").str("oscillator_model");
    w.key("space");
    write_space(w, m.space);
    w.key("channels").integer(m.n);
    w.key("oscillators").integer(m.m);
    w.key("S");
    write_matrix(w, m.S);
    w.key("C");
    write_matrix(w, m.C);
    w.key("G");
    write_matrix(w, m.G);
    w.key("A");
    write_matrix(w, m.A);
    w.key("Z");
    write_matrix(w, m.Z);
    w.key("X");
    write_matrix(w, m.X);
    w.key("R");
    write_matrix(w, m.R);
    w.obj_end();
    return w.out();
}

OscillatorModel model_from_json_text(const std::string& text) {
    json j = parse_or_throw(text);
    try {
    OscillatorModel m;
    m.space = space_from_json(j.at("space"));
    m.n = j.at("channels").get<int>();
    m.m = j.at("oscillators").get<int>();
    m.S = matrix_from_json(j.at("S"));
    m.C = matrix_from_json(j.at("C"));
    m.G = matrix_from_json(j.at("G"));
    m.A = matrix_from_json(j.at("A"));
    m.Z = matrix_from_json(j.at("Z"));
    m.X = matrix_from_json(j.at("X"));
    m.R = matrix_from_json(j.at("R"));
    const Index d = m.dim();
    if (m.S.rows() != m.n * d || m.C.rows() != m.n * d || m.C.cols() != m.m * d ||
        m.A.rows() != m.m * d || m.G.rows() != m.n * d || m.G.cols() != d) {
        throw InvalidArgument("oscillator model JSON: block shapes inconsistent");
    }
    return m;
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("oscillator_model JSON: ") + e.what());
    }
}

std::string block_matrix_json(const schur::BlockMatrix& m) {
    JsonWriter w;
    w.obj_begin()
        .key("schema").str("slhnet/1")
        .key("kind").str("block_matrix");
    w.key("row_labels").arr_begin();
    for (const auto& l : m.rows.labels()) w.str(l);
    w.arr_end();
    w.key("col_labels").arr_begin();
    for (const auto& l : m.cols.labels()) w.str(l);
    w.arr_end();
    // Shared map label -> [offset, size]; a label used by both partitions
    // must have the same range in each.
    w.key("ranges").obj_begin();
    std::set<std::string> written;
    auto emit = [&](const schur::Partition& p) {
        for (const auto& l : p.labels()) {
            if (!written.insert(l).second) continue;
            w.key(l).arr_begin().integer(p.offset_of(l)).integer(p.size_of(l)).arr_end();
        }
    };
    emit(m.rows);
    for (const auto& l : m.cols.labels()) {
        if (written.count(l)) {
            if (m.rows.has(l) && (m.rows.offset_of(l) != m.cols.offset_of(l) ||
                                  m.rows.size_of(l) != m.cols.size_of(l))) {
                throw InvalidArgument(
                    "block matrix JSON: label '" + l +
                    "' has different row and column ranges; rename one side");
            }
        }
    }
    emit(m.cols);
    w.obj_end();
    w.key("entries");
    write_matrix(w, m.entries);
    w.obj_end();
    return w.out();
}

schur::BlockMatrix block_matrix_from_json_text(const std::string& text) {
    json j = parse_or_throw(text);
    try {
    auto read_partition = [&](const char* which) {
        std::vector<std::pair<std::string, Index>> parts;
        for (const auto& l : j.at(which)) {
            auto label = l.get<std::string>();
            const auto& range = j.at("ranges").at(label);
            parts.emplace_back(label, range.at(1).get<Index>());
        }
        return schur::Partition::from_sizes(parts);
    };
    return schur::BlockMatrix(read_partition("row_labels"), read_partition("col_labels"),
                              matrix_from_json(j.at("entries")));
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("block_matrix JSON: ") + e.what());
    }
}

std::string commutativity_report_json(const CommutativityReport& rep) {
    JsonWriter w;
    w.obj_begin()
        .key("schema").str("slhnet/1")
        .key("kind").str("commutativity_report");
    w.key("preconditions").obj_begin()
        .key("identities_ok").boolean(rep.identities_ok)
        .key("identity_residual").num(rep.identity_residual)
        .key("open_loop_hurwitz").boolean(rep.open_hurwitz)
        .key("open_loop_kernel_ok").boolean(rep.open_kernel_ok)
        .key("s_internal_minus_identity_invertible").boolean(rep.sii_invertible)
        .key("s_internal_condition").num(rep.sii_cond)
        .key("closed_loop_matrix_invertible").boolean(rep.theorem_matrix_invertible)
        .key("closed_loop_matrix_condition").num(rep.theorem_matrix_cond)
        .key("reduced_hurwitz").boolean(rep.reduced_hurwitz)
        .key("reduced_kernel_ok").boolean(rep.reduced_kernel_ok)
        .key("met").boolean(rep.preconditions_met)
        .key("hurwitz_warning").boolean(rep.hurwitz_warning)
        .obj_end();
    w.key("max_block_diff").obj_begin()
        .key("S").num(rep.diff_s)
        .key("L").num(rep.diff_l)
        .key("K").num(rep.diff_k)
        .obj_end();
    w.key("tol").num(rep.tol);
    w.key("verdict_available").boolean(rep.verdict_available);
    w.key("pass").boolean(rep.pass);
    w.obj_end();
    return w.out();
}

std::string elimination_json(const SLHTriple& t, const EliminationReport& rep) {
    JsonWriter w;
    w.obj_begin()
        .key("schema").str("slhnet/1")
        .key("kind").str("elimination_report");
    w.key("triple").raw(triple_json(t));
    w.key("report").obj_begin()
        .key("hurwitz").boolean(rep.hurwitz)
        .key("hurwitz_eig").num(rep.hurwitz_eig)
        .key("kernel_checked").boolean(rep.kernel_checked)
        .key("kernel_ok").boolean(rep.kernel_ok)
        .key("non_hurwitz_warning").boolean(rep.non_hurwitz_warning)
        .key("a_condition").num(rep.a_condition)
        .key("identity_residual").num(rep.identity_residual)
        .key("unitarity_residual").num(rep.unitarity_residual)
        .key("damping_residual").num(rep.damping_residual)
        .obj_end();
    w.obj_end();
    return w.out();
}

std::string convergence_report_json(const sim::ConvergenceReport& rep) {
    JsonWriter w;
    w.obj_begin()
        .key("schema").str("slhnet/1")
        .key("kind").str("convergence_report");
    w.key("ks").arr_begin();
    for (double k : rep.ks) w.num(k);
    w.arr_end();
    w.key("errs").arr_begin();
    for (double e : rep.errs) w.num(e);
    w.arr_end();
    w.key("monotonicity_applicable").boolean(rep.monotonicity_applicable)
        .key("strictly_decreasing").boolean(rep.strictly_decreasing)
        .key("final_err").num(rep.final_err)
        .key("threshold").num(rep.threshold)
        .key("top_sector_population").num(rep.top_sector_population)
        .key("cutoff_warning").boolean(rep.cutoff_warning)
        .key("hurwitz").boolean(rep.hurwitz)
        .key("kernel_ok").boolean(rep.kernel_ok)
        .key("pass").boolean(rep.pass);
    w.obj_end();
    return w.out();
}

std::string commutativity_report_table(const CommutativityReport& rep) {
    std::ostringstream os;
    auto yn = [](bool v) { return v ? "yes" : "no"; };
    os << "preconditions:\n"
       << "  identities            " << yn(rep.identities_ok)
       << "  (residual " << format_double(rep.identity_residual) << ")\n"
       << "  open-loop Hurwitz     " << yn(rep.open_hurwitz)
       << "  (kernel check " << yn(rep.open_kernel_ok) << ")\n"
       << "  S_ii - I invertible   " << yn(rep.sii_invertible)
       << "  (condition " << format_double(rep.sii_cond) << ")\n"
       << "  closed-loop matrix    " << yn(rep.theorem_matrix_invertible)
       << "  (condition " << format_double(rep.theorem_matrix_cond) << ")\n"
       << "  reduced Hurwitz       " << yn(rep.reduced_hurwitz)
       << "  (kernel check " << yn(rep.reduced_kernel_ok) << ")\n"
       << "  met                   " << yn(rep.preconditions_met) << "\n";
    if (rep.verdict_available) {
        os << "max block difference:   S " << format_double(rep.diff_s) << "  L "
           << format_double(rep.diff_l) << "  K " << format_double(rep.diff_k) << "\n"
           << "tolerance:              " << format_double(rep.tol) << "\n"
           << "limits commute:         " << yn(rep.pass) << "\n";
    } else {
        os << "verdict:                withheld (hypotheses not met)\n";
    }
    return os.str();
}

std::string convergence_report_table(const sim::ConvergenceReport& rep) {
    std::ostringstream os;
    os << "k        err\n";
    for (size_t i = 0; i < rep.ks.size(); ++i) {
        os << format_double(rep.ks[i]) << "    " << format_double(rep.errs[i]) << "\n";
    }
    if (rep.monotonicity_applicable) {
        os << "strictly decreasing:  " << (rep.strictly_decreasing ? "yes" : "no") << "\n";
    } else {
        os << "strictly decreasing:  n/a (single k)\n";
    }
    os << "final err:            " << format_double(rep.final_err) << " (threshold "
       << format_double(rep.threshold) << ")\n";
    if (rep.cutoff_warning) {
        os << "warning: top Fock sector population "
           << format_double(rep.top_sector_population) << " exceeds limit\n";
    }
    os << "pass:                 " << (rep.pass ? "yes" : "no") << "\n";
    return os.str();
}

std::string convergence_csv(const sim::ConvergenceReport& rep) {
    std::string out = "k,t,observable,value,limit_value\n";
    for (const auto& s : rep.samples) {
        out += format_double(s.k) + "," + format_double(s.t) + "," +
               std::to_string(s.observable) + "," + format_double(s.value) + "," +
               format_double(s.limit_value) + "\n";
    }
    return out;
}

}  // namespace slhnet::jsonio

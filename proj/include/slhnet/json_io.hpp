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
//
// Shared JSON formats. Complex matrices serialize as nested arrays of
// [re, im] pairs, row-major. Reports carry "schema": "slhnet/1". Output
// is deterministic: fixed field order and %.17g float formatting, so
// identical inputs produce byte-identical documents.

#pragma once

#include <string>

#include "slhnet/schur.hpp"
#include "slhnet/sim.hpp"
#include "slhnet/slh.hpp"

namespace slhnet::jsonio {

/// Minimal deterministic emitter (insertion-ordered keys, %.17g floats).
class JsonWriter {
public:
    JsonWriter& obj_begin();
    JsonWriter& obj_end();
    JsonWriter& arr_begin();
    JsonWriter& arr_end();
    JsonWriter& key(std::string_view k);
    JsonWriter& num(double v);
    JsonWriter& integer(long long v);
    JsonWriter& boolean(bool v);
    JsonWriter& str(std::string_view v);
    JsonWriter& raw(std::string_view v);

    const std::string& out() const { return out_; }

private:
    void pre_value();
    std::string out_;
    std::vector<bool> has_items_;
    bool pending_key_ = false;
};

std::string format_double(double v);

void write_matrix(JsonWriter& w, const CMat& m);

std::string matrix_json(const CMat& m);
CMat matrix_from_json_text(const std::string& text);

std::string triple_json(const SLHTriple& t);
SLHTriple triple_from_json_text(const std::string& text);

std::string model_json(const OscillatorModel& m);
OscillatorModel model_from_json_text(const std::string& text);

std::string block_matrix_json(const schur::BlockMatrix& m);
schur::BlockMatrix block_matrix_from_json_text(const std::string& text);

std::string commutativity_report_json(const CommutativityReport& rep);
std::string elimination_json(const SLHTriple& t, const EliminationReport& rep);
std::string convergence_report_json(const sim::ConvergenceReport& rep);

std::string commutativity_report_table(const CommutativityReport& rep);
std::string convergence_report_table(const sim::ConvergenceReport& rep);
std::string convergence_csv(const sim::ConvergenceReport& rep);

}  // namespace slhnet::jsonio

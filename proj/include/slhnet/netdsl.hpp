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
// Plain-text network description language (.slh files):
//
//   network    := stmt*
//   stmt       := compdecl | conndecl | externdecl
//   compdecl   := "component" IDENT "{" field* "}"
//   field      := KEY "=" value ";"       KEY in {dim, oscillators, inputs,
//                 S, C, G, A, Z, X, R, L, H, Omega, Gamma, Theta}
//   value      := number | cmatrix
//   cmatrix    := "[" row ("," row)* "]"
//   row        := "[" complex ("," complex)* "]"
//   complex    := SIGN? FLOAT (SIGN FLOAT "i")?
//   conndecl   := "connect" IDENT ".out[" INT "]" "->" IDENT ".in[" INT "]" ";"
//   externdecl := "external" portref ("," portref)* ";"
//   portref    := IDENT "." ("in" | "out") "[" INT "]"
//
// "#" starts a comment running to the end of the line. Each component
// carries at most one of the block sets {L, H}, {C, G, A, Z, X, R} or
// {C, G, Omega, Gamma, Theta}; a component with none is a pure scatterer.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slhnet/slh.hpp"

namespace slhnet::dsl {

struct ParseDiagnostic {
    enum class Severity { error, warning };
    int line = 0;
    int column = 0;
    std::string message;
    Severity severity = Severity::error;

    std::string str() const;
};

struct ComponentDecl {
    std::string name;
    int line = 0, column = 0;
    std::optional<Index> dim;        // auxiliary-space dimension, default 1
    std::optional<int> oscillators;  // default 0
    std::optional<int> inputs;       // channel count, required
    std::map<std::string, CMat> blocks;

    Index dim_or_default() const { return dim.value_or(1); }
    int oscillators_or_default() const { return oscillators.value_or(0); }
};

struct PortRef {
    std::string component;
    bool is_input = false;
    int index = 0;
    int line = 0, column = 0;

    bool operator==(const PortRef& o) const {
        return component == o.component && is_input == o.is_input && index == o.index;
    }
};

struct ConnectionDecl {
    PortRef from;  // an output port
    PortRef to;    // an input port
};

struct NetworkSpec {
    std::vector<ComponentDecl> components;
    std::vector<ConnectionDecl> connections;
    std::vector<PortRef> externals;

    const ComponentDecl* find(const std::string& name) const;
};

struct ParseResult {
    std::optional<NetworkSpec> spec;
    std::vector<ParseDiagnostic> diagnostics;

    bool ok() const { return spec.has_value(); }
};

/// Parses and semantically validates a network description. Malformed
/// input always yields at least one positioned diagnostic.
ParseResult parse(std::string_view source);

/// Canonical form: components, connections, externals in declaration
/// order, fields in a fixed key order, floats with 17 significant digits.
/// print-then-parse is the identity and parse-then-print is byte-stable.
std::string print(const NetworkSpec& spec);

struct CompiledNetwork {
    OscillatorModel open_loop;
    std::vector<Connection> connections;
    ChannelSplit split;
    std::vector<std::string> channel_names;

    bool pure_slh() const { return open_loop.m == 0; }
};

/// Assembles the open-loop model (components in declaration order, ports
/// in index order), the global connection list and the external port
/// ordering. Numeric constraints (unitary S, Hermitian data, identities)
/// are enforced here and reported as errors naming the component.
CompiledNetwork compile(const NetworkSpec& spec);

}  // namespace slhnet::dsl

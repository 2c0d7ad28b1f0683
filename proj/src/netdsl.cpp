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

#include "slhnet/netdsl.hpp"

#include <cctype>
#include <cstdio>
#include <set>
#include <sstream>

namespace slhnet::dsl {

namespace {

const char* const kMatrixKeys[] = {"S", "L", "H", "C", "G", "A", "Z", "X", "R",
                                   "Omega", "Gamma", "Theta"};
const char* const kScalarKeys[] = {"dim", "inputs", "oscillators"};

bool is_matrix_key(const std::string& k) {
    for (const char* m : kMatrixKeys) {
        if (k == m) return true;
    }
    return false;
}

bool is_scalar_key(const std::string& k) {
    for (const char* s : kScalarKeys) {
        if (k == s) return true;
    }
    return false;
}

// --- lexer -------------------------------------------------------------

enum class Tok {
    ident,
    number,       // unsigned float literal
    imag_number,  // unsigned float literal with an "i" suffix
    lbrace,
    rbrace,
    lbracket,
    rbracket,
    equals,
    semicolon,
    comma,
    dot,
    arrow,
    plus,
    minus,
    end,
    bad,
};

struct Token {
    Tok kind = Tok::end;
    std::string text;
    double value = 0.0;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run(std::vector<ParseDiagnostic>& diags) {
        std::vector<Token> out;
        while (true) {
            Token t = next(diags);
            out.push_back(t);
            if (t.kind == Tok::end) break;
        }
        return out;
    }

private:
    char peek(size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }
    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    Token next(std::vector<ParseDiagnostic>& diags) {
        while (pos_ < src_.size()) {
            char c = peek();
            if (c == '#') {
                while (pos_ < src_.size() && peek() != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
        Token t;
        t.line = line_;
        t.column = col_;
        if (pos_ >= src_.size()) {
            t.kind = Tok::end;
            return t;
        }
        char c = peek();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string ident;
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
                ident += advance();
            }
            t.kind = Tok::ident;
            t.text = ident;
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            std::string num;
            while (std::isdigit(static_cast<unsigned char>(peek()))) num += advance();
            if (peek() == '.') {
                num += advance();
                while (std::isdigit(static_cast<unsigned char>(peek()))) num += advance();
            }
            if (peek() == 'e' || peek() == 'E') {
                size_t save = pos_;
                int save_line = line_, save_col = col_;
                std::string exp;
                exp += advance();
                if (peek() == '+' || peek() == '-') exp += advance();
                if (std::isdigit(static_cast<unsigned char>(peek()))) {
                    while (std::isdigit(static_cast<unsigned char>(peek()))) {
                        exp += advance();
                    }
                    num += exp;
                } else {
                    pos_ = save;
                    line_ = save_line;
                    col_ = save_col;
                }
            }
            t.value = std::stod(num);
            t.text = num;
            t.kind = Tok::number;
            if (peek() == 'i' &&
                !(std::isalnum(static_cast<unsigned char>(peek(1))) || peek(1) == '_')) {
                advance();
                t.kind = Tok::imag_number;
            }
            return t;
        }
        switch (c) {
            case '{': advance(); t.kind = Tok::lbrace; return t;
            case '}': advance(); t.kind = Tok::rbrace; return t;
            case '[': advance(); t.kind = Tok::lbracket; return t;
            case ']': advance(); t.kind = Tok::rbracket; return t;
            case '=': advance(); t.kind = Tok::equals; return t;
            case ';': advance(); t.kind = Tok::semicolon; return t;
            case ',': advance(); t.kind = Tok::comma; return t;
            case '.': advance(); t.kind = Tok::dot; return t;
            case '+': advance(); t.kind = Tok::plus; return t;
            case '-':
                advance();
                if (peek() == '>') {
                    advance();
                    t.kind = Tok::arrow;
                } else {
                    t.kind = Tok::minus;
                }
                return t;
            default:
                diags.push_back({t.line, t.column,
                                 std::string("unexpected character '") + c + "'",
                                 ParseDiagnostic::Severity::error});
                advance();
                t.kind = Tok::bad;
                return t;
        }
    }

    std::string_view src_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

// --- parser ------------------------------------------------------------

class Parser {
public:
    Parser(std::vector<Token> tokens, std::vector<ParseDiagnostic>& diags)
        : toks_(std::move(tokens)), diags_(diags) {}

    NetworkSpec run() {
        NetworkSpec spec;
        while (!at(Tok::end)) {
            if (at(Tok::ident) && cur().text == "component") {
                parse_component(spec);
            } else if (at(Tok::ident) && cur().text == "connect") {
                parse_connect(spec);
            } else if (at(Tok::ident) && cur().text == "external") {
                parse_external(spec);
            } else {
                error(cur(), "expected 'component', 'connect' or 'external'");
                synchronize();
            }
        }
        return spec;
    }

private:
    const Token& cur() const { return toks_[pos_]; }
    bool at(Tok k) const { return cur().kind == k; }
    const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    void error(const Token& t, const std::string& msg) {
        diags_.push_back({t.line, t.column, msg, ParseDiagnostic::Severity::error});
    }

    bool expect(Tok k, const char* what) {
        if (at(k)) {
            take();
            return true;
        }
        error(cur(), std::string("expected ") + what);
        return false;
    }

    // Skips ahead to the next statement boundary after an error.
    void synchronize() {
        while (!at(Tok::end)) {
            Tok k = take().kind;
            if (k == Tok::semicolon || k == Tok::rbrace) return;
        }
    }

    std::optional<std::string> expect_ident(const char* what) {
        if (!at(Tok::ident)) {
            error(cur(), std::string("expected ") + what);
            return std::nullopt;
        }
        return take().text;
    }

    std::optional<int> expect_int(const char* what) {
        if (!at(Tok::number)) {
            error(cur(), std::string("expected ") + what);
            return std::nullopt;
        }
        const Token& t = take();
        double v = t.value;
        if (v != static_cast<double>(static_cast<long long>(v))) {
            error(t, std::string(what) + " must be an integer");
            return std::nullopt;
        }
        return static_cast<int>(v);
    }

    std::optional<Complex> parse_complex() {
        double sign = 1.0;
        if (at(Tok::plus) || at(Tok::minus)) {
            sign = at(Tok::minus) ? -1.0 : 1.0;
            take();
        }
        if (at(Tok::imag_number)) {
            error(cur(), "imaginary literal requires an explicit real part (write 0+1i)");
            return std::nullopt;
        }
        if (!at(Tok::number)) {
            error(cur(), "expected a number");
            return std::nullopt;
        }
        double re = sign * take().value;
        if (at(Tok::plus) || at(Tok::minus)) {
            double isign = at(Tok::minus) ? -1.0 : 1.0;
            take();
            if (!at(Tok::imag_number)) {
                error(cur(), "expected an imaginary part like 2i");
                return std::nullopt;
            }
            return Complex(re, isign * take().value);
        }
        return Complex(re, 0.0);
    }

    std::optional<CMat> parse_matrix() {
        if (!expect(Tok::lbracket, "'['")) return std::nullopt;
        std::vector<std::vector<Complex>> rows;
        while (true) {
            if (!expect(Tok::lbracket, "'[' starting a row")) return std::nullopt;
            std::vector<Complex> row;
            while (true) {
                auto c = parse_complex();
                if (!c) return std::nullopt;
                row.push_back(*c);
                if (at(Tok::comma)) {
                    take();
                    continue;
                }
                break;
            }
            if (!expect(Tok::rbracket, "']' ending a row")) return std::nullopt;
            if (!rows.empty() && rows.front().size() != row.size()) {
                error(cur(), "matrix rows have unequal lengths");
                return std::nullopt;
            }
            rows.push_back(std::move(row));
            if (at(Tok::comma)) {
                take();
                continue;
            }
            break;
        }
        if (!expect(Tok::rbracket, "']' ending the matrix")) return std::nullopt;
        CMat m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
        for (Index i = 0; i < m.rows(); ++i) {
            for (Index j = 0; j < m.cols(); ++j) {
                m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
            }
        }
        return m;
    }

    void parse_component(NetworkSpec& spec) {
        const Token& kw = take();  // 'component'
        ComponentDecl comp;
        comp.line = kw.line;
        comp.column = kw.column;
        auto name = expect_ident("a component name");
        if (!name) {
            synchronize();
            return;
        }
        comp.name = *name;
        if (!expect(Tok::lbrace, "'{'")) {
            synchronize();
            return;
        }
        while (!at(Tok::rbrace) && !at(Tok::end)) {
            const Token& key_tok = cur();
            auto key = expect_ident("a field name");
            if (!key) {
                synchronize();
                continue;
            }
            if (!is_matrix_key(*key) && !is_scalar_key(*key)) {
                error(key_tok, "unknown field '" + *key + "'");
                synchronize();
                continue;
            }
            if (!expect(Tok::equals, "'='")) {
                synchronize();
                continue;
            }
            if (is_scalar_key(*key)) {
                auto v = expect_int(("a value for '" + *key + "'").c_str());
                if (!v) {
                    synchronize();
                    continue;
                }
                if (*v < (*key == "oscillators" ? 0 : 1)) {
                    error(key_tok, "'" + *key + "' out of range");
                }
                if (*key == "dim") {
                    if (comp.dim) error(key_tok, "duplicate field 'dim'");
                    comp.dim = *v;
                } else if (*key == "inputs") {
                    if (comp.inputs) error(key_tok, "duplicate field 'inputs'");
                    comp.inputs = *v;
                } else {
                    if (comp.oscillators) error(key_tok, "duplicate field 'oscillators'");
                    comp.oscillators = *v;
                }
            } else {
                std::optional<CMat> m;
                if (at(Tok::lbracket)) {
                    m = parse_matrix();
                } else {
                    auto c = parse_complex();
                    if (c) {
                        CMat one(1, 1);
                        one << *c;
                        m = one;
                    }
                }
                if (!m) {
                    synchronize();
                    continue;
                }
                if (comp.blocks.count(*key)) {
                    error(key_tok, "duplicate field '" + *key + "'");
                } else {
                    comp.blocks[*key] = *m;
                }
            }
            if (!expect(Tok::semicolon, "';'")) {
                synchronize();
                continue;
            }
        }
        expect(Tok::rbrace, "'}'");
        spec.components.push_back(std::move(comp));
    }

    std::optional<PortRef> parse_port(bool required_input, bool any_direction) {
        PortRef port;
        port.line = cur().line;
        port.column = cur().column;
        auto name = expect_ident("a component name");
        if (!name) return std::nullopt;
        port.component = *name;
        if (!expect(Tok::dot, "'.'")) return std::nullopt;
        const Token& dir_tok = cur();
        auto dir = expect_ident("'in' or 'out'");
        if (!dir) return std::nullopt;
        if (*dir != "in" && *dir != "out") {
            error(dir_tok, "expected 'in' or 'out'");
            return std::nullopt;
        }
        port.is_input = (*dir == "in");
        if (!any_direction && port.is_input != required_input) {
            error(dir_tok, required_input ? "a connection target must be an input port"
                                          : "a connection source must be an output port");
            return std::nullopt;
        }
        if (!expect(Tok::lbracket, "'['")) return std::nullopt;
        auto idx = expect_int("a port index");
        if (!idx) return std::nullopt;
        port.index = *idx;
        if (!expect(Tok::rbracket, "']'")) return std::nullopt;
        return port;
    }

    void parse_connect(NetworkSpec& spec) {
        take();  // 'connect'
        auto from = parse_port(false, false);
        if (!from) {
            synchronize();
            return;
        }
        if (!expect(Tok::arrow, "'->'")) {
            synchronize();
            return;
        }
        auto to = parse_port(true, false);
        if (!to) {
            synchronize();
            return;
        }
        if (!expect(Tok::semicolon, "';'")) {
            synchronize();
            return;
        }
        spec.connections.push_back({*from, *to});
    }

    void parse_external(NetworkSpec& spec) {
        take();  // 'external'
        while (true) {
            auto port = parse_port(false, true);
            if (!port) {
                synchronize();
                return;
            }
            spec.externals.push_back(*port);
            if (at(Tok::comma)) {
                take();
                continue;
            }
            break;
        }
        expect(Tok::semicolon, "';'");
    }

    std::vector<Token> toks_;
    std::vector<ParseDiagnostic>& diags_;
    size_t pos_ = 0;
};

// --- semantic validation -------------------------------------------------

void check_component(const ComponentDecl& c, std::vector<ParseDiagnostic>& diags) {
    auto err = [&](const std::string& msg) {
        diags.push_back({c.line, c.column, "component '" + c.name + "': " + msg,
                         ParseDiagnostic::Severity::error});
    };
    if (!c.inputs) {
        err("missing required field 'inputs'");
        return;
    }
    const Index d = c.dim_or_default();
    const int n = *c.inputs;
    const int m = c.oscillators_or_default();

    const bool has_lh = c.blocks.count("L") || c.blocks.count("H");
    const bool has_raw = c.blocks.count("A") || c.blocks.count("Z") ||
                         c.blocks.count("X") || c.blocks.count("R");
    const bool has_ham = c.blocks.count("Omega") || c.blocks.count("Gamma") ||
                         c.blocks.count("Theta");
    const bool has_osc = has_raw || has_ham || c.blocks.count("C") || c.blocks.count("G");
    if (has_lh && has_osc) {
        err("fields L/H cannot be mixed with oscillator fields");
    }
    if (has_raw && has_ham) {
        err("fields A/Z/X/R cannot be mixed with Omega/Gamma/Theta");
    }
    if (m == 0 && has_osc) {
        err("oscillator fields require oscillators >= 1");
    }
    if (m > 0 && has_lh) {
        err("a component with oscillators uses C/G, not L/H");
    }
    if (m > 0 && !c.blocks.count("C")) {
        err("a component with oscillators requires the coupling block C");
    }

    auto check_shape = [&](const char* key, Index rows, Index cols) {
        auto it = c.blocks.find(key);
        if (it == c.blocks.end()) return;
        if (it->second.rows() != rows || it->second.cols() != cols) {
            err(std::string("field '") + key + "' must be " + std::to_string(rows) +
                "x" + std::to_string(cols) + ", got " +
                std::to_string(it->second.rows()) + "x" +
                std::to_string(it->second.cols()));
        }
    };
    check_shape("S", n * d, n * d);
    check_shape("L", n * d, d);
    check_shape("H", d, d);
    check_shape("C", n * d, m * d);
    check_shape("G", n * d, d);
    check_shape("A", m * d, m * d);
    check_shape("Z", m * d, d);
    check_shape("X", d, m * d);
    check_shape("R", d, d);
    check_shape("Omega", m * d, m * d);
    check_shape("Gamma", m * d, d);
    check_shape("Theta", d, d);
}

void check_network(const NetworkSpec& spec, std::vector<ParseDiagnostic>& diags) {
    std::set<std::string> names;
    for (const auto& c : spec.components) {
        if (!names.insert(c.name).second) {
            diags.push_back({c.line, c.column,
                             "duplicate component '" + c.name + "'",
                             ParseDiagnostic::Severity::error});
        }
        check_component(c, diags);
    }

    auto check_port = [&](const PortRef& p) -> bool {
        const ComponentDecl* c = spec.find(p.component);
        if (!c) {
            diags.push_back({p.line, p.column,
                             "unknown component '" + p.component + "'",
                             ParseDiagnostic::Severity::error});
            return false;
        }
        if (!c->inputs) return false;  // already reported
        if (p.index < 0 || p.index >= *c->inputs) {
            diags.push_back({p.line, p.column,
                             "port index " + std::to_string(p.index) +
                                 " out of range for '" + p.component + "'",
                             ParseDiagnostic::Severity::error});
            return false;
        }
        return true;
    };

    std::set<std::pair<std::string, int>> used_out, used_in;
    for (const auto& conn : spec.connections) {
        bool ok = check_port(conn.from) && check_port(conn.to);
        if (!ok) continue;
        if (!used_out.insert({conn.from.component, conn.from.index}).second) {
            diags.push_back({conn.from.line, conn.from.column,
                             "output port used twice",
                             ParseDiagnostic::Severity::error});
        }
        if (!used_in.insert({conn.to.component, conn.to.index}).second) {
            diags.push_back({conn.to.line, conn.to.column,
                             "input port used twice",
                             ParseDiagnostic::Severity::error});
        }
    }
    std::set<std::tuple<std::string, bool, int>> seen_ext;
    for (const auto& p : spec.externals) {
        if (!check_port(p)) continue;
        auto& used = p.is_input ? used_in : used_out;
        if (used.count({p.component, p.index})) {
            diags.push_back({p.line, p.column,
                             "port is connected and cannot be external",
                             ParseDiagnostic::Severity::error});
        }
        if (!seen_ext.insert({p.component, p.is_input, p.index}).second) {
            diags.push_back({p.line, p.column, "port listed twice",
                             ParseDiagnostic::Severity::error});
        }
    }
}

// --- printing ------------------------------------------------------------

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_complex(Complex c) {
    if (c.imag() == 0.0) return format_double(c.real());
    std::string out = format_double(c.real());
    out += c.imag() < 0 ? "-" : "+";
    out += format_double(std::abs(c.imag()));
    out += "i";
    return out;
}

std::string format_matrix(const CMat& m) {
    std::string out = "[";
    for (Index i = 0; i < m.rows(); ++i) {
        if (i) out += ", ";
        out += "[";
        for (Index j = 0; j < m.cols(); ++j) {
            if (j) out += ", ";
            out += format_complex(m(i, j));
        }
        out += "]";
    }
    out += "]";
    return out;
}

std::string format_port(const PortRef& p) {
    return p.component + (p.is_input ? ".in[" : ".out[") + std::to_string(p.index) + "]";
}

}  // namespace

std::string ParseDiagnostic::str() const {
    std::ostringstream os;
    os << line << ":" << column << ": "
       << (severity == Severity::error ? "error: " : "warning: ") << message;
    return os.str();
}

const ComponentDecl* NetworkSpec::find(const std::string& name) const {
    for (const auto& c : components) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

ParseResult parse(std::string_view source) {
    ParseResult result;
    Lexer lexer(source);
    std::vector<Token> toks = lexer.run(result.diagnostics);
    Parser parser(std::move(toks), result.diagnostics);
    NetworkSpec spec = parser.run();
    check_network(spec, result.diagnostics);
    for (const auto& d : result.diagnostics) {
        if (d.severity == ParseDiagnostic::Severity::error) return result;
    }
    result.spec = std::move(spec);
    return result;
}

std::string print(const NetworkSpec& spec) {
    std::string out;
    for (const auto& c : spec.components) {
        out += "component " + c.name + " {\n";
        if (c.dim) out += "  dim = " + std::to_string(*c.dim) + ";\n";
        if (c.inputs) out += "  inputs = " + std::to_string(*c.inputs) + ";\n";
        if (c.oscillators) {
            out += "  oscillators = " + std::to_string(*c.oscillators) + ";\n";
        }
        for (const char* key : kMatrixKeys) {
            auto it = c.blocks.find(key);
            if (it == c.blocks.end()) continue;
            out += std::string("  ") + key + " = " + format_matrix(it->second) + ";\n";
        }
        out += "}\n";
    }
    for (const auto& conn : spec.connections) {
        out += "connect " + format_port(conn.from) + " -> " + format_port(conn.to) + ";\n";
    }
    if (!spec.externals.empty()) {
        out += "external ";
        for (size_t i = 0; i < spec.externals.size(); ++i) {
            if (i) out += ", ";
            out += format_port(spec.externals[i]);
        }
        out += ";\n";
    }
    return out;
}

CompiledNetwork compile(const NetworkSpec& spec) {
    if (spec.components.empty()) {
        throw InvalidArgument("compile: network has no components");
    }
    std::vector<OscillatorModel> models;
    std::map<std::string, int> channel_offset;
    std::vector<std::string> channel_names;
    int next_channel = 0;
    for (const auto& c : spec.components) {
        const Index d = c.dim_or_default();
        const int n = c.inputs.value_or(0);
        const int m = c.oscillators_or_default();
        HilbertSpace space = d > 1 ? HilbertSpace::single(c.name, d)
                                   : HilbertSpace::scalar();
        auto block = [&](const char* key, Index rows, Index cols) -> CMat {
            auto it = c.blocks.find(key);
            return it != c.blocks.end() ? it->second : CMat::Zero(rows, cols);
        };
        CMat s = c.blocks.count("S") ? c.blocks.at("S")
                                     : CMat(CMat::Identity(n * d, n * d));
        try {
            if (m == 0) {
                SLHTriple t = SLHTriple::from_lh(space, n, s, block("L", n * d, d),
                                                 block("H", d, d));
                models.push_back(OscillatorModel::from_slh(t));
            } else if (c.blocks.count("A") || c.blocks.count("Z") ||
                       c.blocks.count("X") || c.blocks.count("R")) {
                OscillatorModel mo;
                mo.space = space;
                mo.n = n;
                mo.m = m;
                mo.S = s;
                mo.C = block("C", n * d, m * d);
                mo.G = block("G", n * d, d);
                mo.A = block("A", m * d, m * d);
                mo.Z = block("Z", m * d, d);
                mo.X = block("X", d, m * d);
                mo.R = block("R", d, d);
                const CMat id = CMat::Identity(n * d, n * d);
                if ((mo.S.adjoint() * mo.S - id).norm() > kTripleTol * (1.0 + s.norm())) {
                    throw InvalidArgument("S must be unitary");
                }
                if (mo.identity_residual() > kIdentityTol) {
                    throw PreconditionError(
                        "blocks violate the structure identities (residual " +
                        std::to_string(mo.identity_residual()) + ")");
                }
                models.push_back(std::move(mo));
            } else {
                models.push_back(from_hamiltonian(
                    space, n, m, s, block("C", n * d, m * d), block("G", n * d, d),
                    block("Omega", m * d, m * d), block("Gamma", m * d, d),
                    block("Theta", d, d)));
            }
        } catch (const Error& e) {
            throw InvalidArgument("component '" + c.name + "': " + e.what());
        }
        channel_offset[c.name] = next_channel;
        for (int k = 0; k < n; ++k) {
            channel_names.push_back(c.name + "." + std::to_string(k));
        }
        next_channel += n;
    }

    CompiledNetwork net;
    net.open_loop = concatenate_models(models);
    net.channel_names = std::move(channel_names);
    for (const auto& conn : spec.connections) {
        net.connections.push_back({channel_offset.at(conn.from.component) + conn.from.index,
                                   channel_offset.at(conn.to.component) + conn.to.index});
    }

    // External ordering: declared ports first, remaining free ports in
    // component declaration order.
    std::vector<int> ext_in, ext_out;
    std::set<int> seen_in, seen_out;
    for (const auto& p : spec.externals) {
        int ch = channel_offset.at(p.component) + p.index;
        if (p.is_input) {
            ext_in.push_back(ch);
            seen_in.insert(ch);
        } else {
            ext_out.push_back(ch);
            seen_out.insert(ch);
        }
    }
    std::set<int> conn_out, conn_in;
    for (const auto& conn : net.connections) {
        conn_out.insert(conn.out_channel);
        conn_in.insert(conn.in_channel);
    }
    for (int ch = 0; ch < net.open_loop.n; ++ch) {
        if (!conn_in.count(ch) && !seen_in.count(ch)) ext_in.push_back(ch);
        if (!conn_out.count(ch) && !seen_out.count(ch)) ext_out.push_back(ch);
    }
    net.split = make_channel_split(net.open_loop.n, net.connections, &ext_in, &ext_out);
    return net;
}

}  // namespace slhnet::dsl

#include "tpv/text.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>

#include "tpv/error.hpp"

namespace tpv {

namespace {

struct Token {
    std::string text;
    size_t line = 0;
    size_t col = 0;
};

using TokenLine = std::vector<Token>;

std::vector<TokenLine> tokenize(std::string_view text, bool hash_comment_anywhere) {
    std::vector<TokenLine> out;
    size_t line_no = 1;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, (nl == std::string_view::npos ? text.size() : nl) - pos);

        if (hash_comment_anywhere) {
            size_t hash = line.find('#');
            if (hash != std::string_view::npos) { line = line.substr(0, hash); }
        } else {
            size_t first = line.find_first_not_of(" \t\r");
            if (first != std::string_view::npos && line[first] == '#') { line = {}; }
        }

        TokenLine tokens;
        size_t i = 0;
        while (i < line.size()) {
            if (std::isspace(static_cast<unsigned char>(line[i]))) {
                ++i;
                continue;
            }
            size_t start = i;
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) { ++i; }
            tokens.push_back(Token{std::string(line.substr(start, i - start)), line_no, start + 1});
        }
        if (!tokens.empty()) { out.push_back(std::move(tokens)); }

        if (nl == std::string_view::npos) { break; }
        pos = nl + 1;
        ++line_no;
    }
    return out;
}

[[noreturn]] void fail(const Token& tok, const std::string& message) {
    throw ParseError(tok.line, tok.col, tok.text, message);
}

[[noreturn]] void fail_line(const TokenLine& line, const std::string& message) {
    fail(line.front(), message);
}

uint64_t parse_nat(const Token& tok, const std::string& what) {
    if (tok.text.empty() || tok.text.find_first_not_of("0123456789") != std::string::npos) {
        fail(tok, what + " must be a decimal natural number");
    }
    try {
        return std::stoull(tok.text);
    } catch (const std::exception&) {
        fail(tok, what + " is out of range");
    }
}

std::optional<Polarity> parse_polarity(std::string_view text) {
    if (text == "-1") { return Polarity::minus; }
    if (text == "0") { return Polarity::zero; }
    if (text == "+1" || text == "1") { return Polarity::plus; }
    return std::nullopt;
}

const char* polarity_token(Polarity p) {
    switch (p) {
        case Polarity::minus: return "-1";
        case Polarity::zero: return "0";
        case Polarity::plus: return "+1";
    }
    return "0";
}

} // namespace

// ---------------------------------------------------------------------------
// Machine format

MachineProgram parse_machine(std::string_view text) {
    MachineProgram p;
    std::optional<uint64_t> registers, outputs;
    std::optional<MachineKind> kind;
    std::optional<Token> init_tok;
    bool body_seen = false;

    struct Pending {
        Label at;
        Instruction ins;
    };
    std::vector<Pending> pending;

    auto intern_label = [&p](const Token& tok) {
        try {
            return p.labels.intern(tok.text);
        } catch (const ValidationError& e) {
            fail(tok, e.what());
        }
    };

    for (const TokenLine& line : tokenize(text, true)) {
        const std::string& head = line.front().text;
        if (head == "registers" || head == "outputs") {
            if (line.size() != 2) { fail_line(line, "expected '" + head + " <n>'"); }
            auto& slot = head == "registers" ? registers : outputs;
            if (slot) { fail_line(line, "duplicate '" + head + "' line"); }
            slot = parse_nat(line[1], head);
            continue;
        }
        if (head == "kind") {
            if (line.size() != 2) { fail_line(line, "expected 'kind general|blind'"); }
            if (kind) { fail_line(line, "duplicate 'kind' line"); }
            if (line[1].text == "general") {
                kind = MachineKind::general;
            } else if (line[1].text == "blind") {
                kind = MachineKind::partially_blind;
            } else {
                fail(line[1], "machine kind must be 'general' or 'blind'");
            }
            continue;
        }
        if (head == "init") {
            if (line.size() != 2) { fail_line(line, "expected 'init <label>'"); }
            if (init_tok) { fail_line(line, "duplicate 'init' line"); }
            init_tok = line[1];
            continue;
        }

        // Instruction line.
        if (!registers || !outputs || !kind) {
            fail_line(line, "'registers', 'outputs' and 'kind' must precede instructions");
        }
        body_seen = true;

        Token label_tok = line.front();
        size_t op_index = 1;
        if (label_tok.text.size() > 1 && label_tok.text.back() == ':') {
            label_tok.text.pop_back();
        } else {
            if (line.size() < 2 || line[1].text != ":") {
                fail(label_tok, "expected '<label>:' before the instruction");
            }
            op_index = 2;
        }
        if (line.size() <= op_index) { fail(label_tok, "missing instruction after label"); }
        Label at = intern_label(label_tok);

        const Token& op = line[op_index];
        auto arg = [&line, &op, op_index](size_t i) -> const Token& {
            if (op_index + 1 + i >= line.size()) { fail(op, "missing instruction operand"); }
            return line[op_index + 1 + i];
        };
        auto expect_arity = [&line, &op, op_index](size_t n, const std::string& msg) {
            if (line.size() != op_index + 1 + n) { fail(op, msg); }
        };
        auto parse_reg = [&](const Token& tok) {
            uint64_t r = parse_nat(tok, "register index");
            if (r < 1 || r > *registers) { fail(tok, "unknown register index"); }
            return static_cast<uint32_t>(r);
        };

        if (op.text == "ADD") {
            expect_arity(3, "expected 'ADD <register> <label> <label>'");
            uint32_t r = parse_reg(arg(0));
            Label q = intern_label(arg(1));
            Label s = intern_label(arg(2));
            pending.push_back({at, Instruction{InstructionKind::add, r, q, s}});
        } else if (op.text == "SUB") {
            if (*kind == MachineKind::general) {
                expect_arity(3, "SUB arity mismatched with kind: general SUB needs two branch labels");
                uint32_t r = parse_reg(arg(0));
                Label q = intern_label(arg(1));
                Label s = intern_label(arg(2));
                pending.push_back({at, Instruction{InstructionKind::sub, r, q, s}});
            } else {
                expect_arity(2, "SUB arity mismatched with kind: blind SUB takes one label");
                uint32_t r = parse_reg(arg(0));
                Label q = intern_label(arg(1));
                pending.push_back({at, Instruction{InstructionKind::sub_blind, r, q, Label{}}});
            }
        } else if (op.text == "HALT") {
            expect_arity(0, "HALT takes no operands");
            pending.push_back({at, Instruction{InstructionKind::halt, 0, Label{}, Label{}}});
        } else {
            fail(op, "unknown instruction (expected ADD, SUB or HALT)");
        }
    }

    if (!registers || !outputs || !kind) {
        throw ValidationError("machine file needs 'registers', 'outputs' and 'kind' lines");
    }
    if (!init_tok) { throw ValidationError("machine file needs an 'init <label>' line"); }
    if (!body_seen) { throw ValidationError("machine file has no instructions"); }
    if (*registers == 0 || *registers > 4096) {
        throw ValidationError("register count out of supported range");
    }
    if (*outputs == 0 || *outputs > *registers) {
        throw ValidationError("output register count must be in 1..registers");
    }

    p.registers = static_cast<uint32_t>(*registers);
    p.outputs = static_cast<uint32_t>(*outputs);
    p.kind = *kind;
    p.init = intern_label(*init_tok);

    std::optional<Label> halt_label;
    for (const Pending& pi : pending) {
        if (pi.ins.kind == InstructionKind::halt) {
            if (halt_label && *halt_label != pi.at) {
                throw ValidationError("HALT appears under two different labels");
            }
            halt_label = pi.at;
        }
    }
    if (!halt_label) { throw ValidationError("missing HALT instruction"); }
    p.halt_label = *halt_label;

    p.instructions.assign(p.labels.size(), {});
    for (const Pending& pi : pending) {
        // Relaxed labeling: duplicates of the same instruction collapse.
        auto& list = p.instructions[pi.at.id];
        bool dup = std::any_of(list.begin(), list.end(), [&pi](const Instruction& other) {
            return other.kind == pi.ins.kind && other.reg == pi.ins.reg &&
                   other.next1 == pi.ins.next1 && other.next2 == pi.ins.next2;
        });
        if (!dup) { list.push_back(pi.ins); }
    }

    p.validate();
    return p;
}

std::string print_machine(const MachineProgram& p) {
    std::ostringstream out;
    out << "registers " << p.registers << "\n";
    out << "outputs " << p.outputs << "\n";
    out << "kind " << (p.kind == MachineKind::general ? "general" : "blind") << "\n";
    out << "init " << p.labels.name(p.init) << "\n";

    // Blocks in label-name order: stable under re-parsing, whatever ids the
    // parser assigns.
    std::vector<uint32_t> ids(p.labels.size());
    for (uint32_t i = 0; i < ids.size(); ++i) { ids[i] = i; }
    std::sort(ids.begin(), ids.end(), [&p](uint32_t a, uint32_t b) {
        return p.labels.name(Label{a}) < p.labels.name(Label{b});
    });
    for (uint32_t id : ids) {
        for (const Instruction& ins : p.instructions[id]) {
            out << p.labels.name(Label{id}) << ": ";
            switch (ins.kind) {
                case InstructionKind::add:
                    out << "ADD " << ins.reg << " " << p.labels.name(ins.next1) << " "
                        << p.labels.name(ins.next2);
                    break;
                case InstructionKind::sub:
                    out << "SUB " << ins.reg << " " << p.labels.name(ins.next1) << " "
                        << p.labels.name(ins.next2);
                    break;
                case InstructionKind::sub_blind:
                    out << "SUB " << ins.reg << " " << p.labels.name(ins.next1);
                    break;
                case InstructionKind::halt: out << "HALT"; break;
            }
            out << "\n";
        }
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// System format

namespace {

struct RuleLine {
    Token src;
    Mutation mutation = Mutation::insertion(Symbol{});
    std::optional<Token> target;
};

} // namespace

ParsedSystem parse_system(std::string_view text) {
    std::vector<TokenLine> cells_lines, alphabet_lines, terminals_lines, output_lines, init_lines,
        cellpol_lines, edge_lines, rule_lines;
    bool terminals_present = false;

    for (TokenLine& line : tokenize(text, false)) {
        const std::string& head = line.front().text;
        if (head == "cells") {
            cells_lines.push_back(std::move(line));
        } else if (head == "alphabet") {
            alphabet_lines.push_back(std::move(line));
        } else if (head == "terminals") {
            terminals_present = true;
            terminals_lines.push_back(std::move(line));
        } else if (head == "output") {
            output_lines.push_back(std::move(line));
        } else if (head == "init") {
            init_lines.push_back(std::move(line));
        } else if (head == "cellpol") {
            cellpol_lines.push_back(std::move(line));
        } else if (head == "edge") {
            edge_lines.push_back(std::move(line));
        } else if (head == "rule") {
            rule_lines.push_back(std::move(line));
        } else {
            fail_line(line, "unknown directive");
        }
    }

    TpvSystem sys;

    if (cells_lines.empty()) { throw ValidationError("system file needs a 'cells' line"); }
    for (const TokenLine& line : cells_lines) {
        for (size_t i = 1; i < line.size(); ++i) {
            if (sys.cells.find(line[i].text)) { fail(line[i], "cell declared twice"); }
            try {
                sys.cells.intern(line[i].text);
            } catch (const ValidationError& e) {
                fail(line[i], e.what());
            }
        }
    }
    if (sys.cells.size() == 0) { fail_line(cells_lines.front(), "empty cell list"); }

    bool any_sym_pol = false;
    std::map<uint32_t, Polarity> sym_pol;
    if (alphabet_lines.empty()) { throw ValidationError("system file needs an 'alphabet' line"); }
    for (const TokenLine& line : alphabet_lines) {
        if (line.size() == 1) { fail_line(line, "empty alphabet line"); }
        for (size_t i = 1; i < line.size(); ++i) {
            std::string name = line[i].text;
            std::optional<Polarity> pol;
            if (size_t colon = name.find(':'); colon != std::string::npos) {
                pol = parse_polarity(name.substr(colon + 1));
                if (!pol) { fail(line[i], "polarization must be -1, 0 or +1"); }
                name = name.substr(0, colon);
                any_sym_pol = true;
            }
            if (sys.alphabet.find(name)) { fail(line[i], "symbol declared twice"); }
            Symbol s;
            try {
                s = sys.alphabet.intern(name);
            } catch (const ValidationError& e) {
                fail(line[i], e.what());
            }
            if (pol) { sym_pol[s.id] = *pol; }
        }
    }

    auto find_symbol = [&sys](const Token& tok) {
        auto s = sys.alphabet.find(tok.text);
        if (!s) { fail(tok, "symbol not in alphabet"); }
        return *s;
    };
    auto find_cell = [&sys](const Token& tok, std::string_view name) {
        auto c = sys.cells.find(name);
        if (!c) { fail(tok, "cell not declared"); }
        return *c;
    };

    for (const TokenLine& line : terminals_lines) {
        for (size_t i = 1; i < line.size(); ++i) {
            Symbol s = find_symbol(line[i]);
            if (std::find(sys.terminals.begin(), sys.terminals.end(), s) != sys.terminals.end()) {
                fail(line[i], "terminal declared twice");
            }
            sys.terminals.push_back(s);
        }
    }
    (void)terminals_present;

    if (output_lines.size() != 1 || output_lines.front().size() != 2) {
        throw ValidationError("system file needs exactly one 'output <cell>' line");
    }
    sys.output_cell = find_cell(output_lines.front()[1], output_lines.front()[1].text);

    if (init_lines.size() != 1) {
        throw ValidationError("system file needs exactly one 'init <cell> { ... }' line");
    }
    {
        const TokenLine& line = init_lines.front();
        if (line.size() < 4 || line[2].text != "{" || line.back().text != "}") {
            fail_line(line, "expected 'init <cell> { <symbol>[*count]... }'");
        }
        sys.init_cell = find_cell(line[1], line[1].text);
        std::vector<Multiset::Entry> entries;
        for (size_t i = 3; i + 1 < line.size(); ++i) {
            std::string name = line[i].text;
            uint64_t count = 1;
            if (size_t star = name.find('*'); star != std::string::npos) {
                Token count_tok = line[i];
                count_tok.text = name.substr(star + 1);
                count = parse_nat(count_tok, "multiplicity");
                if (count == 0) { fail(line[i], "multiplicity must be positive"); }
                name = name.substr(0, star);
            }
            Token sym_tok = line[i];
            sym_tok.text = name;
            entries.emplace_back(find_symbol(sym_tok), count);
        }
        sys.init_multiset = Multiset::from_entries(entries);
    }

    std::vector<RuleLine> rules;
    bool any_targetless = false;
    for (const TokenLine& line : rule_lines) {
        if (line.size() < 5 || line[2].text != ":") {
            fail_line(line, "expected 'rule <cell> : <mutation> [@<cell>]'");
        }
        RuleLine r{line[1], Mutation::insertion(Symbol{}), std::nullopt};
        size_t next;
        if (line[3].text == "+") {
            if (line.size() < 6 || line[5].text != "->") { fail(line[3], "expected '+ <symbol> ->'"); }
            r.mutation = Mutation::insertion(find_symbol(line[4]));
            next = 6;
        } else if (line.size() >= 6 && line[4].text == "-" && line[5].text == "->") {
            r.mutation = Mutation::deletion(find_symbol(line[3]));
            next = 6;
        } else if (line.size() >= 6 && line[4].text == "=>") {
            r.mutation = Mutation::substitution(find_symbol(line[3]), find_symbol(line[5]));
            next = 6;
        } else {
            fail(line[3], "unrecognized mutation (expected '+ b ->', 'a - ->' or 'a => b')");
        }
        if (next < line.size()) {
            const Token& tgt = line[next];
            if (tgt.text.size() < 2 || tgt.text.front() != '@') {
                fail(tgt, "expected rule target '@<cell>'");
            }
            if (next + 1 != line.size()) { fail(line[next + 1], "unexpected token after rule"); }
            r.target = tgt;
        } else {
            any_targetless = true;
        }
        rules.push_back(std::move(r));
    }

    bool undirected = !edge_lines.empty() || any_targetless;
    bool polarized = undirected || !cellpol_lines.empty() || any_sym_pol;

    if (!polarized) {
        for (const RuleLine& r : rules) {
            CellId src = find_cell(r.src, r.src.text);
            CellId tgt = find_cell(*r.target, r.target->text.substr(1));
            sys.rules.push_back(TpvRule{src, r.mutation, tgt});
        }
        sys.validate();
        return sys;
    }

    PtpvSystem psys;
    psys.pol.sym_pol.assign(sys.alphabet.size(), Polarity::zero);
    for (const auto& [id, pol] : sym_pol) { psys.pol.sym_pol[id] = pol; }
    psys.pol.cell_pol.assign(sys.cells.size(), Polarity::zero);
    for (const TokenLine& line : cellpol_lines) {
        if (line.size() != 3) { fail_line(line, "expected 'cellpol <cell> <pol>'"); }
        CellId c = find_cell(line[1], line[1].text);
        auto pol = parse_polarity(line[2].text);
        if (!pol) { fail(line[2], "polarization must be -1, 0 or +1"); }
        psys.pol.cell_pol[c.id] = *pol;
    }

    if (undirected) {
        psys.comm = CommKind::undirected;
        for (const TokenLine& line : edge_lines) {
            if (line.size() != 3) { fail_line(line, "expected 'edge <cell> <cell>'"); }
            psys.edges.emplace_back(find_cell(line[1], line[1].text),
                                    find_cell(line[2], line[2].text));
        }
        std::vector<std::vector<CellId>> adjacency(sys.cells.size());
        for (auto [a, b] : psys.edges) {
            adjacency[a.id].push_back(b);
            if (a != b) { adjacency[b.id].push_back(a); }
        }
        for (auto& list : adjacency) {
            std::sort(list.begin(), list.end());
            list.erase(std::unique(list.begin(), list.end()), list.end());
        }
        for (const RuleLine& r : rules) {
            if (r.target) { fail(*r.target, "target given in undirected file"); }
            CellId src = find_cell(r.src, r.src.text);
            // Targets come from the communication graph.
            for (CellId j : adjacency[src.id]) {
                sys.rules.push_back(TpvRule{src, r.mutation, j});
            }
        }
    } else {
        psys.comm = CommKind::directed;
        for (const RuleLine& r : rules) {
            CellId src = find_cell(r.src, r.src.text);
            CellId tgt = find_cell(*r.target, r.target->text.substr(1));
            sys.rules.push_back(TpvRule{src, r.mutation, tgt});
        }
    }

    psys.base = std::move(sys);
    psys.validate();
    return psys;
}

// ---------------------------------------------------------------------------
// Printers

namespace {

std::string mutation_text(const TpvSystem& sys, const Mutation& m) {
    switch (m.kind()) {
        case MutationKind::insert: return "+ " + sys.alphabet.name(*m.rhs()) + " ->";
        case MutationKind::erase: return sys.alphabet.name(*m.lhs()) + " - ->";
        case MutationKind::substitute:
            return sys.alphabet.name(*m.lhs()) + " => " + sys.alphabet.name(*m.rhs());
    }
    return {};
}

void print_common(std::ostringstream& out, const TpvSystem& sys, const std::map<uint32_t, Polarity>* sym_pol) {
    out << "cells";
    for (uint32_t id = 0; id < sys.cells.size(); ++id) { out << " " << sys.cells.name(CellId{id}); }
    out << "\n";

    out << "alphabet";
    for (uint32_t id = 0; id < sys.alphabet.size(); ++id) {
        out << " " << sys.alphabet.name(Symbol{id});
        if (sym_pol) { out << ":" << polarity_token(sym_pol->at(id)); }
    }
    out << "\n";

    out << "terminals";
    for (Symbol t : sys.terminals) { out << " " << sys.alphabet.name(t); }
    out << "\n";

    out << "output " << sys.cells.name(sys.output_cell) << "\n";

    out << "init " << sys.cells.name(sys.init_cell) << " {";
    for (const auto& [sym, count] : sys.init_multiset.entries()) {
        out << " " << sys.alphabet.name(sym);
        if (count > 1) { out << "*" << count; }
    }
    out << " }\n";
}

} // namespace

std::string format_rule(const TpvSystem& sys, const TpvRule& rule, bool with_target) {
    std::string out = sys.cells.name(rule.source) + " : " + mutation_text(sys, rule.mutation);
    if (with_target) { out += " @" + sys.cells.name(rule.target); }
    return out;
}

std::string print_system(const TpvSystem& sys) {
    std::ostringstream out;
    print_common(out, sys, nullptr);
    for (const TpvRule& r : sys.rules) { out << "rule " << format_rule(sys, r, true) << "\n"; }
    return out.str();
}

std::string print_system(const PtpvSystem& sys) {
    std::ostringstream out;
    std::map<uint32_t, Polarity> sym_pol;
    for (uint32_t id = 0; id < sys.base.alphabet.size(); ++id) {
        sym_pol[id] = sys.pol.sym_pol[id];
    }
    print_common(out, sys.base, &sym_pol);
    for (uint32_t id = 0; id < sys.base.cells.size(); ++id) {
        out << "cellpol " << sys.base.cells.name(CellId{id}) << " "
            << polarity_token(sys.pol.cell_pol[id]) << "\n";
    }
    if (sys.comm == CommKind::undirected) {
        for (auto [a, b] : sys.edges) {
            out << "edge " << sys.base.cells.name(a) << " " << sys.base.cells.name(b) << "\n";
        }
        // Rules are stored expanded over the graph; print each (cell,
        // mutation) once, in first-occurrence order, without targets.
        std::vector<std::pair<CellId, Mutation>> seen;
        for (const TpvRule& r : sys.base.rules) {
            auto key = std::make_pair(r.source, r.mutation);
            if (std::find(seen.begin(), seen.end(), key) != seen.end()) { continue; }
            seen.push_back(key);
            out << "rule " << format_rule(sys.base, r, false) << "\n";
        }
    } else {
        for (const TpvRule& r : sys.base.rules) {
            out << "rule " << format_rule(sys.base, r, true) << "\n";
        }
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Result and trace formatting

std::string format_multiset(const Multiset& w, const SymbolTable& alphabet) {
    std::string out = "{";
    bool first = true;
    for (const auto& [sym, count] : w.entries()) {
        if (!first) { out += ","; }
        first = false;
        out += alphabet.name(sym);
        if (count > 1) { out += "*" + std::to_string(count); }
    }
    out += "}";
    return out;
}

std::string format_vector(const ResultVector& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i > 0) { out += " "; }
        out += std::to_string(v[i]);
    }
    return out;
}

std::string format_result_set(const ResultSet& rs) {
    std::ostringstream out;
    for (const ResultVector& v : rs.vectors) { out << format_vector(v) << "\n"; }
    const Diagnostics& d = rs.diagnostics;
    out << "# steps_pruned=" << d.steps_pruned << " size_pruned=" << d.size_pruned
        << " states_pruned=" << d.states_pruned
        << " nonterminal_residue_results=" << d.nonterminal_residue_results
        << " eliminated_branches=" << d.eliminated_branches
        << " complete=" << (rs.complete ? "true" : "false") << " states=" << rs.states_visited
        << "\n";
    return out.str();
}

std::string format_trace_event(const TpvSystem& sys, const TraceEvent& ev) {
    std::string rules = "[";
    for (size_t i = 0; i < ev.rule_indices.size(); ++i) {
        if (i > 0) { rules += ","; }
        const Mutation& m = sys.rules[ev.rule_indices[i]].mutation;
        switch (m.kind()) {
            case MutationKind::insert: rules += "+" + sys.alphabet.name(*m.rhs()); break;
            case MutationKind::erase: rules += sys.alphabet.name(*m.lhs()) + "-"; break;
            case MutationKind::substitute:
                rules += sys.alphabet.name(*m.lhs()) + "->" + sys.alphabet.name(*m.rhs());
                break;
        }
    }
    rules += "]";
    return "step " + std::to_string(ev.depth) + ": cell " + sys.cells.name(ev.from.cell) + " " +
           format_multiset(ev.from.content, sys.alphabet) + " --" + rules + "--> cell " +
           sys.cells.name(ev.to.cell);
}

} // namespace tpv

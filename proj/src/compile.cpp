#include "tpv/compile.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "tpv/error.hpp"

namespace tpv {

namespace {

std::string reg_cell(const char* prefix, uint32_t r) {
    return std::string(prefix) + ":" + std::to_string(r);
}

std::string reg_symbol(uint32_t r) { return "a" + std::to_string(r); }

// The generated register symbols must not collide with the machine's label
// names.
void check_label_collisions(const MachineProgram& p, bool polarized) {
    std::set<std::string> taken;
    for (uint32_t id = 0; id < p.labels.size(); ++id) {
        const std::string& name = p.labels.name(Label{id});
        if (!taken.insert(name).second) {
            throw ValidationError("duplicate label name '" + name + "'");
        }
    }
    auto reject_if_taken = [&taken](const std::string& name) {
        if (taken.count(name)) {
            throw ValidationError("label '" + name + "' collides with a generated symbol name");
        }
        taken.insert(name);
    };
    for (uint32_t r = 1; r <= p.registers; ++r) {
        reject_if_taken(reg_symbol(r));
        if (polarized) {
            reject_if_taken(reg_symbol(r) + "+");
            reject_if_taken(reg_symbol(r) + "-");
        }
    }
    if (polarized) {
        for (uint32_t id = 0; id < p.labels.size(); ++id) {
            const std::string& name = p.labels.name(Label{id});
            reject_if_taken(name + "+");
            reject_if_taken(name + "-");
        }
    }
}

void reject_output_register_sub(const MachineProgram& p) {
    for (const auto& instrs : p.instructions) {
        for (const Instruction& ins : instrs) {
            if ((ins.kind == InstructionKind::sub || ins.kind == InstructionKind::sub_blind) &&
                ins.reg <= p.outputs) {
                throw ValidationError(
                    "construction does not support decrementing output register " +
                    std::to_string(ins.reg));
            }
        }
    }
}

// Appends a rule unless an identical one is already present; R is a set.
struct RuleBuilder {
    std::vector<TpvRule> rules;
    std::set<std::tuple<uint32_t, int, uint32_t, uint32_t, uint32_t>> seen;

    void add(CellId source, Mutation m, CellId target) {
        auto key = std::make_tuple(source.id, static_cast<int>(m.kind()),
                                   m.lhs() ? m.lhs()->id + 1 : 0, m.rhs() ? m.rhs()->id + 1 : 0,
                                   target.id);
        if (seen.insert(key).second) { rules.push_back(TpvRule{source, m, target}); }
    }
};

} // namespace

TpvSystem compile_rm_to_pv_smax(const MachineProgram& p, OutputStrategy strategy) {
    p.validate();
    if (p.kind != MachineKind::general) {
        throw ValidationError("set-maximal construction requires a general register machine");
    }
    reject_output_register_sub(p);
    check_label_collisions(p, false);

    TpvSystem sys;
    CellId root = sys.cells.intern("0");
    std::vector<CellId> reg_cells(p.registers + 1), minus_cells(p.registers + 1),
        zero_cells(p.registers + 1);
    for (uint32_t r = 1; r <= p.outputs; ++r) { reg_cells[r] = sys.cells.intern(reg_cell("r", r)); }
    for (uint32_t r = p.outputs + 1; r <= p.registers; ++r) {
        reg_cells[r] = sys.cells.intern(reg_cell("r", r));
        minus_cells[r] = sys.cells.intern(reg_cell("rm", r));
        zero_cells[r] = sys.cells.intern(reg_cell("r0", r));
    }
    CellId out_cell = sys.cells.intern("h");

    std::vector<Symbol> label_sym(p.labels.size());
    for (uint32_t id = 0; id < p.labels.size(); ++id) {
        label_sym[id] = sys.alphabet.intern(p.labels.name(Label{id}));
    }
    std::vector<Symbol> reg_sym(p.registers + 1);
    for (uint32_t r = 1; r <= p.registers; ++r) { reg_sym[r] = sys.alphabet.intern(reg_symbol(r)); }
    Symbol trap = sys.alphabet.intern("#");
    for (uint32_t r = 1; r <= p.outputs; ++r) { sys.terminals.push_back(reg_sym[r]); }

    RuleBuilder rb;
    for (uint32_t id = 0; id < p.labels.size(); ++id) {
        Symbol psym = label_sym[id];
        for (const Instruction& ins : p.instructions[id]) {
            if (ins.kind == InstructionKind::add) {
                rb.add(root, Mutation::substitution(psym, label_sym[ins.next1.id]), reg_cells[ins.reg]);
                rb.add(root, Mutation::substitution(psym, label_sym[ins.next2.id]), reg_cells[ins.reg]);
                rb.add(reg_cells[ins.reg], Mutation::insertion(reg_sym[ins.reg]), root);
            } else if (ins.kind == InstructionKind::sub) {
                rb.add(root, Mutation::substitution(psym, label_sym[ins.next1.id]), minus_cells[ins.reg]);
                rb.add(root, Mutation::substitution(psym, label_sym[ins.next2.id]), zero_cells[ins.reg]);
                rb.add(minus_cells[ins.reg], Mutation::deletion(reg_sym[ins.reg]), root);
                rb.add(zero_cells[ins.reg],
                       Mutation::substitution(label_sym[ins.next2.id], label_sym[ins.next2.id]), root);
                rb.add(zero_cells[ins.reg], Mutation::substitution(reg_sym[ins.reg], trap), root);
            }
        }
    }
    rb.add(root, Mutation::deletion(label_sym[p.halt_label.id]), out_cell);
    if (strategy != OutputStrategy::term) {
        rb.add(out_cell, Mutation::substitution(trap, trap), root);
        rb.add(root, Mutation::substitution(trap, trap), out_cell);
    }

    sys.rules = std::move(rb.rules);
    sys.init_cell = root;
    sys.init_multiset = Multiset::from_entries({{label_sym[p.init.id], 1}});
    sys.output_cell = out_cell;
    sys.validate();
    return sys;
}

TpvSystem compile_pbrm_to_pv_sequ(const MachineProgram& p, OutputStrategy strategy) {
    p.validate();
    if (p.kind != MachineKind::partially_blind) {
        throw ValidationError("sequential construction requires a partially blind register machine");
    }
    reject_output_register_sub(p);
    check_label_collisions(p, false);

    TpvSystem sys;
    CellId root = sys.cells.intern("0");
    std::vector<CellId> reg_cells(p.registers + 1), minus_cells(p.registers + 1);
    for (uint32_t r = 1; r <= p.outputs; ++r) { reg_cells[r] = sys.cells.intern(reg_cell("r", r)); }
    for (uint32_t r = p.outputs + 1; r <= p.registers; ++r) {
        reg_cells[r] = sys.cells.intern(reg_cell("r", r));
        minus_cells[r] = sys.cells.intern(reg_cell("rm", r));
    }
    CellId out_cell = sys.cells.intern("h");

    std::vector<Symbol> label_sym(p.labels.size());
    for (uint32_t id = 0; id < p.labels.size(); ++id) {
        label_sym[id] = sys.alphabet.intern(p.labels.name(Label{id}));
    }
    std::vector<Symbol> reg_sym(p.registers + 1);
    for (uint32_t r = 1; r <= p.registers; ++r) { reg_sym[r] = sys.alphabet.intern(reg_symbol(r)); }
    Symbol trap = sys.alphabet.intern("#");
    for (uint32_t r = 1; r <= p.outputs; ++r) { sys.terminals.push_back(reg_sym[r]); }

    RuleBuilder rb;
    for (uint32_t id = 0; id < p.labels.size(); ++id) {
        Symbol psym = label_sym[id];
        for (const Instruction& ins : p.instructions[id]) {
            if (ins.kind == InstructionKind::add) {
                rb.add(root, Mutation::substitution(psym, label_sym[ins.next1.id]), reg_cells[ins.reg]);
                rb.add(root, Mutation::substitution(psym, label_sym[ins.next2.id]), reg_cells[ins.reg]);
                rb.add(reg_cells[ins.reg], Mutation::insertion(reg_sym[ins.reg]), root);
            } else if (ins.kind == InstructionKind::sub_blind) {
                rb.add(root, Mutation::substitution(psym, label_sym[ins.next1.id]), minus_cells[ins.reg]);
                rb.add(minus_cells[ins.reg], Mutation::deletion(reg_sym[ins.reg]), root);
            }
        }
    }
    rb.add(root, Mutation::deletion(label_sym[p.halt_label.id]), out_cell);
    if (strategy != OutputStrategy::term) {
        rb.add(out_cell, Mutation::substitution(trap, trap), root);
        rb.add(root, Mutation::substitution(trap, trap), out_cell);
        for (uint32_t r = p.outputs + 1; r <= p.registers; ++r) {
            rb.add(out_cell, Mutation::substitution(reg_sym[r], trap), root);
        }
    }

    sys.rules = std::move(rb.rules);
    sys.init_cell = root;
    sys.init_multiset = Multiset::from_entries({{label_sym[p.init.id], 1}});
    sys.output_cell = out_cell;
    sys.validate();
    return sys;
}

MachineProgram compile_tpv_to_pbrm(const TpvSystem& sys) {
    if (sys.rules_by_cell.size() != sys.cells.size()) {
        throw ValidationError("system must be validated before compilation");
    }
    if (sys.terminals.empty()) {
        throw ValidationError("construction requires a non-empty terminal order");
    }

    MachineProgram m;
    m.kind = MachineKind::partially_blind;
    m.registers = sys.alphabet.size();
    m.outputs = static_cast<uint32_t>(sys.terminals.size());

    // Registers: terminals first, remaining symbols in declaration order.
    std::vector<uint32_t> reg_of(sys.alphabet.size(), 0);
    uint32_t next_reg = 1;
    for (Symbol t : sys.terminals) { reg_of[t.id] = next_reg++; }
    for (uint32_t id = 0; id < sys.alphabet.size(); ++id) {
        if (reg_of[id] == 0) { reg_of[id] = next_reg++; }
    }

    auto fresh = [&m](std::string candidate) {
        while (!valid_label_name(candidate) || m.labels.find(candidate)) { candidate += "'"; }
        return m.labels.intern(candidate);
    };

    std::vector<Label> cell_label(sys.cells.size());
    for (uint32_t id = 0; id < sys.cells.size(); ++id) {
        cell_label[id] = fresh(sys.cells.name(CellId{id}));
    }

    struct Pending {
        Label at;
        Instruction ins;
    };
    std::vector<Pending> pending;
    for (uint32_t idx = 0; idx < sys.rules.size(); ++idx) {
        const TpvRule& r = sys.rules[idx];
        Label src = cell_label[r.source.id];
        Label dst = cell_label[r.target.id];
        switch (r.mutation.kind()) {
            case MutationKind::insert:
                pending.push_back({src, Instruction{InstructionKind::add,
                                                    reg_of[r.mutation.rhs()->id], dst, dst}});
                break;
            case MutationKind::erase:
                pending.push_back({src, Instruction{InstructionKind::sub_blind,
                                                    reg_of[r.mutation.lhs()->id], dst, Label{}}});
                break;
            case MutationKind::substitute: {
                Label mid = fresh(sys.cells.name(r.source) + "'s" + std::to_string(idx));
                pending.push_back({src, Instruction{InstructionKind::sub_blind,
                                                    reg_of[r.mutation.lhs()->id], mid, Label{}}});
                pending.push_back({mid, Instruction{InstructionKind::add,
                                                    reg_of[r.mutation.rhs()->id], dst, dst}});
                break;
            }
        }
    }

    // Final sequence: bounce the first terminal register, then halt. The
    // implicit zero check over registers k+1..m is what enforces "terminal
    // symbols only".
    Label out_lbl = cell_label[sys.output_cell.id];
    Label tilde = fresh(sys.cells.name(sys.output_cell) + "~");
    Label hat = fresh(sys.cells.name(sys.output_cell) + "^");
    uint32_t t1 = reg_of[sys.terminals.front().id];
    pending.push_back({out_lbl, Instruction{InstructionKind::add, t1, tilde, tilde}});
    pending.push_back({tilde, Instruction{InstructionKind::sub_blind, t1, hat, Label{}}});
    pending.push_back({hat, Instruction{InstructionKind::halt, 0, Label{}, Label{}}});
    m.halt_label = hat;

    // Materialize the initial multiset with a chain of increments ending at
    // the initial cell's label.
    std::vector<uint32_t> init_regs;
    for (const auto& [sym, count] : sys.init_multiset.entries()) {
        for (uint64_t i = 0; i < count; ++i) { init_regs.push_back(reg_of[sym.id]); }
    }
    if (init_regs.empty()) {
        m.init = cell_label[sys.init_cell.id];
    } else {
        std::vector<Label> chain;
        for (size_t i = 0; i < init_regs.size(); ++i) {
            chain.push_back(fresh("w0:" + std::to_string(i)));
        }
        m.init = chain.front();
        for (size_t i = 0; i < init_regs.size(); ++i) {
            Label next = (i + 1 < init_regs.size()) ? chain[i + 1] : cell_label[sys.init_cell.id];
            pending.push_back({chain[i], Instruction{InstructionKind::add, init_regs[i], next, next}});
        }
    }

    m.instructions.assign(m.labels.size(), {});
    for (const Pending& pi : pending) { m.instructions[pi.at.id].push_back(pi.ins); }
    m.validate();
    return m;
}

PtpvSystem compile_rm_to_uptpv(const MachineProgram& p) {
    p.validate();
    if (p.kind != MachineKind::general) {
        throw ValidationError("polarized construction requires a general register machine");
    }
    check_label_collisions(p, true);

    PtpvSystem sys;
    TpvSystem& base = sys.base;

    CellId c0 = base.cells.intern("0");
    CellId c0p = base.cells.intern("0'");
    CellId c00 = base.cells.intern("00");
    CellId c0m = base.cells.intern("0-");
    CellId clh = base.cells.intern("lh");
    CellId cout = base.cells.intern("lh~");
    std::vector<CellId> rp(p.registers + 1), rpt(p.registers + 1), r0(p.registers + 1),
        r0t(p.registers + 1), rm(p.registers + 1), rmt(p.registers + 1), rmb(p.registers + 1);
    for (uint32_t r = 1; r <= p.registers; ++r) {
        rp[r] = base.cells.intern(reg_cell("rp", r));
        rpt[r] = base.cells.intern(reg_cell("rp~", r));
        r0[r] = base.cells.intern(reg_cell("r0", r));
        r0t[r] = base.cells.intern(reg_cell("r0~", r));
        rm[r] = base.cells.intern(reg_cell("rm", r));
        rmt[r] = base.cells.intern(reg_cell("rm~", r));
        rmb[r] = base.cells.intern(reg_cell("rmb", r));
    }

    sys.pol.cell_pol.assign(base.cells.size(), Polarity::zero);
    auto set_pol = [&sys](CellId c, Polarity q) { sys.pol.cell_pol[c.id] = q; };
    for (uint32_t r = 1; r <= p.registers; ++r) {
        set_pol(rp[r], Polarity::plus);
        set_pol(rpt[r], Polarity::plus);
        set_pol(r0[r], Polarity::minus);
        set_pol(r0t[r], Polarity::minus);
        set_pol(rm[r], Polarity::plus);
        set_pol(rmt[r], Polarity::zero);
        set_pol(rmb[r], Polarity::minus);
    }

    // Symbols: each machine label in the three polarization flavors, then the
    // register symbols in theirs. The suffix is the polarization.
    std::vector<Symbol> lbl(p.labels.size()), lbl_plus(p.labels.size()), lbl_minus(p.labels.size());
    for (uint32_t id = 0; id < p.labels.size(); ++id) {
        const std::string& name = p.labels.name(Label{id});
        lbl[id] = base.alphabet.intern(name);
        lbl_plus[id] = base.alphabet.intern(name + "+");
        lbl_minus[id] = base.alphabet.intern(name + "-");
    }
    std::vector<Symbol> areg(p.registers + 1), areg_plus(p.registers + 1), areg_minus(p.registers + 1);
    for (uint32_t r = 1; r <= p.registers; ++r) {
        areg[r] = base.alphabet.intern(reg_symbol(r));
        areg_plus[r] = base.alphabet.intern(reg_symbol(r) + "+");
        areg_minus[r] = base.alphabet.intern(reg_symbol(r) + "-");
    }
    sys.pol.sym_pol.assign(base.alphabet.size(), Polarity::zero);
    for (uint32_t id = 0; id < p.labels.size(); ++id) {
        sys.pol.sym_pol[lbl_plus[id].id] = Polarity::plus;
        sys.pol.sym_pol[lbl_minus[id].id] = Polarity::minus;
    }
    for (uint32_t r = 1; r <= p.registers; ++r) {
        sys.pol.sym_pol[areg_plus[r].id] = Polarity::plus;
        sys.pol.sym_pol[areg_minus[r].id] = Polarity::minus;
    }
    for (uint32_t r = 1; r <= p.outputs; ++r) { base.terminals.push_back(areg[r]); }

    // Undirected communication graph.
    auto edge = [&sys](CellId a, CellId b) { sys.edges.emplace_back(a, b); };
    edge(c0, c0p);
    edge(c00, c0);
    edge(c0m, c0);
    edge(c0, clh);
    edge(clh, cout);
    for (uint32_t r = 1; r <= p.registers; ++r) {
        edge(c0p, rp[r]);
        edge(rp[r], rpt[r]);
        edge(rpt[r], c0);
        edge(c0, r0[r]);
        edge(r0[r], r0t[r]);
        edge(r0t[r], c00);
        edge(c0, rm[r]);
        edge(rm[r], rmt[r]);
        edge(rmt[r], rmb[r]);
        edge(rmb[r], c0m);
    }
    std::vector<std::vector<CellId>> adjacency(base.cells.size());
    for (auto [a, b] : sys.edges) {
        adjacency[a.id].push_back(b);
        adjacency[b.id].push_back(a);
    }
    for (auto& list : adjacency) { std::sort(list.begin(), list.end()); }

    // Targetless rule sets, expanded over the graph neighbors of their cell.
    RuleBuilder rb;
    auto add_expanded = [&rb, &adjacency](CellId cell, Mutation mu) {
        for (CellId j : adjacency[cell.id]) { rb.add(cell, mu, j); }
    };
    for (uint32_t id = 0; id < p.labels.size(); ++id) {
        for (const Instruction& ins : p.instructions[id]) {
            if (ins.kind == InstructionKind::add) {
                add_expanded(c0, Mutation::substitution(lbl[id], lbl[id]));
                add_expanded(c0p, Mutation::substitution(lbl[id], lbl_plus[id]));
                add_expanded(rpt[ins.reg],
                             Mutation::substitution(lbl_plus[id], lbl[ins.next1.id]));
                add_expanded(rpt[ins.reg],
                             Mutation::substitution(lbl_plus[id], lbl[ins.next2.id]));
            } else if (ins.kind == InstructionKind::sub) {
                add_expanded(c0, Mutation::substitution(lbl[id], lbl_plus[id]));
                add_expanded(c0, Mutation::substitution(lbl[id], lbl_minus[id]));
                add_expanded(rmt[ins.reg],
                             Mutation::substitution(lbl_plus[id], lbl[ins.next1.id]));
                add_expanded(r0t[ins.reg],
                             Mutation::substitution(lbl_minus[id], lbl[ins.next2.id]));
            }
        }
    }
    add_expanded(c0, Mutation::substitution(lbl[p.halt_label.id], lbl[p.halt_label.id]));
    add_expanded(clh, Mutation::deletion(lbl[p.halt_label.id]));
    for (uint32_t r = 1; r <= p.registers; ++r) {
        add_expanded(rp[r], Mutation::insertion(areg[r]));
        add_expanded(r0[r], Mutation::substitution(areg[r], areg_plus[r]));
        add_expanded(rm[r], Mutation::substitution(areg[r], areg_minus[r]));
        add_expanded(rmb[r], Mutation::deletion(areg_minus[r]));
    }

    base.rules = std::move(rb.rules);
    base.init_cell = c0;
    base.init_multiset = Multiset::from_entries({{lbl[p.init.id], 1}});
    base.output_cell = cout;
    sys.comm = CommKind::undirected;
    sys.validate();
    return sys;
}

uint64_t BudgetMap::max_step_cost() const {
    return std::max({add_steps, sub_decrement_steps, sub_zero_steps});
}

BudgetMap budget_map(Construction c) {
    switch (c) {
        case Construction::rm_to_pv_smax: return BudgetMap{2, 2, 2, 1};
        case Construction::pbrm_to_pv_sequ: return BudgetMap{2, 2, 2, 1};
        case Construction::rm_to_uptpv: return BudgetMap{4, 5, 4, 2};
        case Construction::tpv_to_pbrm:
            throw ValidationError("no step map: system-to-machine comparisons run to completeness");
    }
    throw ValidationError("unknown construction");
}

SearchBudget matched_budgets(Construction c, const SearchBudget& machine_budget) {
    machine_budget.validate();
    BudgetMap map = budget_map(c);
    SearchBudget out;
    out.max_steps = map.max_step_cost() * (machine_budget.max_steps - 1) + map.closing_steps;
    out.max_state_size = machine_budget.max_state_size + 2;
    out.max_states = machine_budget.max_states;
    return out;
}

} // namespace tpv

#include "tpv/machine.hpp"

#include <algorithm>

#include "tpv/error.hpp"

namespace tpv {

const std::vector<Instruction>& MachineProgram::at(Label l) const {
    if (l.id >= instructions.size()) {
        throw Error("unknown label id " + std::to_string(l.id));
    }
    return instructions[l.id];
}

bool MachineProgram::strictly_labeled() const {
    for (const auto& instrs : instructions) {
        if (instrs.size() > 1) { return false; }
    }
    return true;
}

void MachineProgram::validate() const {
    if (registers == 0) { throw ValidationError("machine needs at least one register"); }
    if (outputs == 0 || outputs > registers) {
        throw ValidationError("output register count must be in 1..registers");
    }
    if (instructions.size() != labels.size()) {
        throw ValidationError("instruction table does not cover the label set");
    }
    if (init.id >= labels.size()) { throw ValidationError("initial label is not in the label set"); }
    if (halt_label.id >= labels.size()) { throw ValidationError("halt label is not in the label set"); }

    bool saw_halt = false;
    for (uint32_t id = 0; id < instructions.size(); ++id) {
        for (const Instruction& ins : instructions[id]) {
            if (ins.kind == InstructionKind::halt) {
                if (id != halt_label.id) {
                    throw ValidationError("HALT instruction outside the halt label '" +
                                          labels.name(Label{id}) + "'");
                }
                saw_halt = true;
                continue;
            }
            if (id == halt_label.id) {
                throw ValidationError("halt label '" + labels.name(Label{id}) +
                                      "' carries a non-HALT instruction");
            }
            if (ins.reg < 1 || ins.reg > registers) {
                throw ValidationError("instruction at '" + labels.name(Label{id}) +
                                      "' uses unknown register index " + std::to_string(ins.reg));
            }
            if (ins.next1.id >= labels.size()) {
                throw ValidationError("instruction at '" + labels.name(Label{id}) +
                                      "' references a label outside the label set");
            }
            switch (ins.kind) {
                case InstructionKind::add:
                    if (ins.next2.id >= labels.size()) {
                        throw ValidationError("ADD at '" + labels.name(Label{id}) +
                                              "' references a label outside the label set");
                    }
                    break;
                case InstructionKind::sub:
                    if (kind != MachineKind::general) {
                        throw ValidationError("two-branch SUB in a partially blind program");
                    }
                    if (ins.next2.id >= labels.size()) {
                        throw ValidationError("SUB at '" + labels.name(Label{id}) +
                                              "' references a label outside the label set");
                    }
                    break;
                case InstructionKind::sub_blind:
                    if (kind != MachineKind::partially_blind) {
                        throw ValidationError("abort-style SUB in a general program");
                    }
                    break;
                case InstructionKind::halt: break;
            }
        }
    }
    if (!saw_halt) { throw ValidationError("program has no HALT instruction"); }
}

uint64_t MachineConfig::register_sum() const {
    uint64_t sum = 0;
    for (uint64_t v : regs) { sum += v; }
    return sum;
}

size_t MachineConfigHash::operator()(const MachineConfig& c) const noexcept {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](uint64_t v) {
        h ^= v;
        h *= 1099511628211ull;
    };
    mix(c.label.id);
    for (uint64_t v : c.regs) { mix(v); }
    return static_cast<size_t>(h);
}

std::vector<MachineConfig> machine_step(const MachineProgram& p, const MachineConfig& c) {
    std::vector<MachineConfig> out;
    for (const Instruction& ins : p.at(c.label)) {
        switch (ins.kind) {
            case InstructionKind::add: {
                MachineConfig succ = c;
                succ.regs[ins.reg - 1] += 1;
                succ.label = ins.next1;
                out.push_back(succ);
                if (ins.next2 != ins.next1) {
                    succ.label = ins.next2;
                    out.push_back(std::move(succ));
                }
                break;
            }
            case InstructionKind::sub: {
                MachineConfig succ = c;
                if (succ.regs[ins.reg - 1] > 0) {
                    succ.regs[ins.reg - 1] -= 1;
                    succ.label = ins.next1;
                } else {
                    succ.label = ins.next2;
                }
                out.push_back(std::move(succ));
                break;
            }
            case InstructionKind::sub_blind: {
                // Decrementing an empty register aborts the computation.
                if (c.regs[ins.reg - 1] > 0) {
                    MachineConfig succ = c;
                    succ.regs[ins.reg - 1] -= 1;
                    succ.label = ins.next1;
                    out.push_back(std::move(succ));
                }
                break;
            }
            case InstructionKind::halt: break;
        }
    }
    // Distinct instructions can produce the same successor; keep one.
    std::vector<MachineConfig> dedup;
    for (MachineConfig& succ : out) {
        if (std::find(dedup.begin(), dedup.end(), succ) == dedup.end()) {
            dedup.push_back(std::move(succ));
        }
    }
    return dedup;
}

bool is_accepting(const MachineProgram& p, const MachineConfig& c) {
    if (c.label != p.halt_label) { return false; }
    if (p.kind == MachineKind::general) { return true; }
    for (uint32_t r = p.outputs; r < p.registers; ++r) {
        if (c.regs[r] != 0) { return false; }
    }
    return true;
}

MachineConfig initial_config(const MachineProgram& p) {
    return MachineConfig{p.init, std::vector<uint64_t>(p.registers, 0)};
}

ResultSet machine_enumerate(const MachineProgram& p, const SearchBudget& budget,
                            unsigned workers) {
    budget.validate();
    p.validate();
    // The halt execution counts as a step: a result at depth d costs d+1
    // steps, so the closure explores to depth max_steps - 1.
    SearchBudget inner = budget;
    inner.max_steps = budget.max_steps - 1;

    auto expand = [&p](const MachineConfig& c, uint64_t /*depth*/) {
        Expansion<MachineConfig> e;
        e.successors = machine_step(p, c);
        return e;
    };
    auto record = [&p](const MachineConfig& c, bool /*halting*/, uint64_t /*depth*/) {
        Recorded r;
        if (is_accepting(p, c)) {
            r.vector = ResultVector(c.regs.begin(), c.regs.begin() + p.outputs);
        }
        return r;
    };
    auto size = [](const MachineConfig& c) { return c.register_sum(); };

    return closure<MachineConfig, decltype(expand), decltype(record), decltype(size),
                   MachineConfigHash>(initial_config(p), std::move(expand), std::move(record),
                                      std::move(size), inner, workers);
}

} // namespace tpv

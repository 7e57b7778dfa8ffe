// machine.hpp -- register machines and partially blind register machines
// with relaxed labeling, their nondeterministic interpreter, and bounded
// enumeration of the generated vector sets. This is the oracle side of every
// construction equivalence test.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "tpv/search.hpp"
#include "tpv/symbol.hpp"

namespace tpv {

enum class MachineKind { general, partially_blind };

enum class InstructionKind {
    add,       // increment register, branch to next1 or next2
    sub,       // general: decrement/next1 if nonzero, else next2
    sub_blind, // partially blind: decrement/next1 if nonzero, else abort
    halt
};

struct Instruction {
    InstructionKind kind = InstructionKind::halt;
    uint32_t reg = 0; // 1-based; 0 for halt
    Label next1;      // unused for halt
    Label next2;      // second add branch / zero-test branch; unused for sub_blind and halt
};

/// A (partially blind) register machine in generating mode. Labeling is
/// relaxed: one label may carry several instructions, chosen
/// nondeterministically. A label with no instructions is a dead end.
struct MachineProgram {
    uint32_t registers = 0; // m
    uint32_t outputs = 0;   // k <= m; results are the first k registers
    MachineKind kind = MachineKind::general;
    LabelTable labels;
    std::vector<std::vector<Instruction>> instructions; // indexed by label id
    Label init;
    Label halt_label;

    const std::vector<Instruction>& at(Label l) const;
    bool strictly_labeled() const;

    /// Checks all structural invariants; throws ValidationError.
    void validate() const;
};

struct MachineConfig {
    Label label;
    std::vector<uint64_t> regs;

    uint64_t register_sum() const;
    bool operator==(const MachineConfig&) const = default;
};

struct MachineConfigHash {
    size_t operator()(const MachineConfig& c) const noexcept;
};

/// All successors of c under p, in deterministic order: instructions at the
/// current label in declaration order, add branches next1 before next2.
/// Throws Error for labels outside the program's label set.
std::vector<MachineConfig> machine_step(const MachineProgram& p, const MachineConfig& c);

/// A configuration is accepting when it sits at the halt label and, for
/// partially blind machines, every register beyond the first k is zero.
bool is_accepting(const MachineProgram& p, const MachineConfig& c);

MachineConfig initial_config(const MachineProgram& p);

/// Bounded enumeration of the generated k-vector set. A result at a
/// configuration reached after d instruction executions costs d+1 steps (the
/// halt execution counts), so budget.max_steps = N admits exactly the
/// computations with at most N executed instructions.
ResultSet machine_enumerate(const MachineProgram& p, const SearchBudget& budget,
                            unsigned workers = 1);

} // namespace tpv

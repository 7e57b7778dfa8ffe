// compile.hpp -- mechanical constructions between register machines and
// tissue systems, plus the budget mapping that lets a machine enumeration
// and the enumeration of its compiled system be compared under equivalent
// exploration depth.
#pragma once

#include "tpv/machine.hpp"
#include "tpv/polarized.hpp"
#include "tpv/system.hpp"

namespace tpv {

enum class Construction {
    rm_to_pv_smax,   // general machine -> hierarchical system, set-maximal mode
    pbrm_to_pv_sequ, // partially blind machine -> hierarchical system, sequential mode
    tpv_to_pbrm,     // sequential system -> partially blind machine
    rm_to_uptpv      // general machine -> polarized system on an undirected graph
};

/// Compiles a general register machine into a hierarchical system for the
/// set-maximal mode. Trap rules are omitted when the requested strategy is
/// `term`; they only matter for halting-based output. Rejects partially
/// blind programs and programs that decrement an output register.
TpvSystem compile_rm_to_pv_smax(const MachineProgram& p, OutputStrategy strategy);

/// Compiles a partially blind machine into a hierarchical system for the
/// sequential mode. Same trap-rule policy as above.
TpvSystem compile_pbrm_to_pv_sequ(const MachineProgram& p, OutputStrategy strategy);

/// Compiles a sequential tissue system (term output) into a partially blind
/// register machine with relaxed labeling. Registers are the alphabet
/// symbols with terminals first; substitution rules become a SUB/ADD pair
/// through a fresh intermediate label. Rejects systems without terminals.
MachineProgram compile_tpv_to_pbrm(const TpvSystem& sys);

/// Compiles a general register machine into a polarized system communicating
/// over an undirected graph, for the sequential mode.
PtpvSystem compile_rm_to_uptpv(const MachineProgram& p);

/// Derivation steps the compiled system spends per simulated machine
/// instruction, plus the steps of the closing (halting) group. The values
/// are pinned by trace tests before they are relied on.
struct BudgetMap {
    uint64_t add_steps = 0;
    uint64_t sub_decrement_steps = 0;
    uint64_t sub_zero_steps = 0;
    uint64_t closing_steps = 0;

    uint64_t max_step_cost() const;
};

BudgetMap budget_map(Construction c);

/// Maps a machine-side budget to a system-side budget that admits every
/// computation the machine budget admits: steps scale by the maximal
/// per-instruction cost (a machine budget of N covers N-1 instruction
/// executions plus the halt), and the multiset may exceed the register sum
/// by the label symbol plus one transient occurrence.
///
/// Comparisons for the system->machine construction run both sides to
/// completeness instead; requesting a mapping for it is an error.
SearchBudget matched_budgets(Construction c, const SearchBudget& machine_budget);

} // namespace tpv

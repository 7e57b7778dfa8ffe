// system.hpp -- tissue P systems on vesicles of multisets: system
// descriptors, the sequential and set-maximal successor relations, output
// strategies, the derived communication graph, and the structural
// hierarchical/hybrid predicates.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "tpv/multiset.hpp"
#include "tpv/mutation.hpp"
#include "tpv/search.hpp"
#include "tpv/symbol.hpp"

namespace tpv {

enum class DerivationMode { sequ, smax };
enum class OutputStrategy { halt, term, halt_term };

/// One rule (i, p, j): apply mutation p in cell i, then move the vesicle to
/// cell j.
struct TpvRule {
    CellId source;
    Mutation mutation;
    CellId target;

    friend auto operator<=>(const TpvRule&, const TpvRule&) = default;
};

/// A tissue system on vesicles. Rules keep their declaration order per cell;
/// that order fixes the (deterministic) branch order during enumeration.
struct TpvSystem {
    CellTable cells;
    SymbolTable alphabet;
    std::vector<Symbol> terminals; // declaration order = result vector order
    std::vector<TpvRule> rules;
    CellId init_cell;
    Multiset init_multiset;
    CellId output_cell;

    // Derived on validate():
    std::vector<std::vector<uint32_t>> rules_by_cell; // rule indices per source cell
    std::vector<bool> is_terminal;                    // indexed by symbol id

    void validate();

    bool all_terminal(const Multiset& w) const;
    std::vector<uint64_t> parikh_terminals(const Multiset& w) const;
};

/// Parikh projection of w onto an explicit symbol order; symbols outside the
/// order are ignored. Contract: `order` has no duplicates.
std::vector<uint64_t> parikh(const Multiset& w, std::span<const Symbol> order);

struct VesicleConfig {
    CellId cell;
    Multiset content;

    bool operator==(const VesicleConfig&) const = default;
};

struct VesicleConfigHash {
    size_t operator()(const VesicleConfig& c) const noexcept {
        return c.content.hash() * 1099511628211ull ^ c.cell.id;
    }
};

/// Directed communication graph implicit in the rule set: one edge (i, j)
/// per rule (i, p, j). Loops are permitted.
struct CommGraph {
    uint32_t cell_count = 0;
    std::vector<std::pair<CellId, CellId>> edges; // deduplicated, sorted
};

CommGraph comm_graph(const TpvSystem& sys);

/// True iff the communication graph, with loops removed and edge direction
/// collapsed, is a tree that spans every cell (reachable from the initial
/// cell).
bool is_hierarchical(const TpvSystem& sys);

/// True iff every cell uses at most one mutation kind.
bool is_hybrid(const TpvSystem& sys);

/// One set-maximal choice: a non-empty, non-extendable set of jointly
/// applicable rules of the current cell, all moving to the same target.
struct SmaxChoice {
    CellId target;
    std::vector<uint32_t> rule_indices; // ascending indices into sys.rules
};

/// All set-maximal choices for the current configuration, grouped per target
/// in first-declaration order. Empty iff no rule of the cell is applicable.
std::vector<SmaxChoice> smax_choices(const TpvSystem& sys, const VesicleConfig& cfg);

/// Successor configurations under the given mode. An empty result is a
/// halting configuration; both modes agree on halting.
std::vector<VesicleConfig> tpv_successors(const TpvSystem& sys, DerivationMode mode,
                                          const VesicleConfig& cfg);

/// Result recording. Under `halt` with nonterminal residue the terminal
/// projection is still emitted and the residue flag is set.
struct RecordedResult {
    std::vector<uint64_t> vector;
    bool nonterminal_residue = false;
};

std::optional<RecordedResult> record_result(const TpvSystem& sys, OutputStrategy strategy,
                                            const VesicleConfig& cfg, bool halting);

/// One trace event per explored derivation step.
struct TraceEvent {
    uint64_t depth = 0;
    VesicleConfig from;
    std::vector<uint32_t> rule_indices; // rules applied in this step (empty = polarized skip)
    VesicleConfig to;
};

using TraceFn = std::function<void(const TraceEvent&)>;

/// Bounded enumeration of Ps(sys, mode, strategy). When a trace callback is
/// given, worker parallelism is disabled so events arrive in expansion order.
ResultSet tpv_enumerate(const TpvSystem& sys, DerivationMode mode, OutputStrategy strategy,
                        const SearchBudget& budget, unsigned workers = 1,
                        const TraceFn& trace = nullptr);

} // namespace tpv

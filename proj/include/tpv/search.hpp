// search.hpp -- bounded, deduplicated, deterministic closure over a
// nondeterministic successor relation. Shared by the register machine
// interpreter and both tissue system engines.
//
// The closure explores breadth-first: a state's depth is the length of a
// shortest derivation reaching it, so step budgets compose with the
// per-instruction step counts used when comparing a machine against a
// compiled system. A global visited set keyed on the full state prevents
// re-expansion; this is sound because all client successor relations and
// result recorders are memoryless functions of the configuration.
//
// Determinism: states are processed in insertion order, successors in the
// order the callback returns them. Worker threads only evaluate the pure
// callbacks; all merging, counting, and visited-set updates happen serially
// in that fixed order, so results and diagnostics are identical for any
// worker count.
#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "tpv/error.hpp"

namespace tpv {

/// Hard limits for one enumeration. All limits must be positive.
struct SearchBudget {
    uint64_t max_steps = 0;      // BFS depth cap
    uint64_t max_state_size = 0; // multiset cardinality or register sum
    uint64_t max_states = 0;     // visited-set cap

    void validate() const {
        if (max_steps == 0 || max_state_size == 0 || max_states == 0) {
            throw ValidationError("search budget limits must be positive");
        }
    }
};

struct Diagnostics {
    uint64_t steps_pruned = 0;
    uint64_t size_pruned = 0;
    uint64_t states_pruned = 0;
    uint64_t nonterminal_residue_results = 0;
    uint64_t eliminated_branches = 0;

    bool operator==(const Diagnostics&) const = default;
};

using ResultVector = std::vector<uint64_t>;

/// Deduplicated, lexicographically ordered result vectors plus exploration
/// diagnostics. `complete` is true iff no budget limit fired, i.e. the set
/// equals the full reachable result set whenever the state space is finite.
struct ResultSet {
    std::set<ResultVector> vectors;
    Diagnostics diagnostics;
    bool complete = true;
    uint64_t states_visited = 0;

    bool same_vectors(const ResultSet& other) const { return vectors == other.vectors; }
};

/// What the expansion callback reports for one state: its successors in a
/// deterministic order, plus the number of evolution branches that died with
/// no admissible move (polarized elimination).
template <typename State>
struct Expansion {
    std::vector<State> successors;
    uint64_t eliminated_branches = 0;
};

/// Outcome of the result recorder for one visited state.
struct Recorded {
    std::optional<ResultVector> vector;
    bool nonterminal_residue = false;
};

/// Bounded breadth-first closure.
///
/// expand:     (State, depth) -> Expansion<State>; must be pure and
///             deterministic up to observable side effects such as tracing.
/// record:     (State, halting, depth) -> Recorded; halting is true iff the
///             state has no successors. Pure as well.
/// state_size: State -> uint64_t, compared against max_state_size.
///
/// States whose expansion would exceed max_steps are still visited and
/// recorded, but their successors are dropped (steps_pruned). Successors
/// larger than max_state_size are dropped (size_pruned); successors that
/// would grow the visited set past max_states are dropped (states_pruned).
template <typename State, typename ExpandFn, typename RecordFn, typename SizeFn,
          typename Hash = std::hash<State>>
ResultSet closure(const State& initial, ExpandFn&& expand, RecordFn&& record, SizeFn&& state_size,
                  const SearchBudget& budget, unsigned workers = 1) {
    // max_steps == 0 is allowed here (visit only the initial state); the
    // public enumeration entry points validate full positivity.
    if (budget.max_state_size == 0 || budget.max_states == 0) {
        throw ValidationError("search budget limits must be positive");
    }
    ResultSet out;

    if (state_size(initial) > budget.max_state_size) {
        out.diagnostics.size_pruned += 1;
        out.complete = false;
        return out;
    }

    std::unordered_set<State, Hash> visited;
    visited.insert(initial);
    std::vector<State> layer{initial};
    uint64_t depth = 0;
    out.states_visited = 1;

    struct Evaluated {
        Expansion<State> expansion;
        Recorded recorded;
    };

    while (!layer.empty()) {
        std::vector<Evaluated> evaluated(layer.size());
        auto evaluate_range = [&](size_t begin, size_t end) {
            for (size_t i = begin; i < end; ++i) {
                Evaluated& e = evaluated[i];
                e.expansion = expand(layer[i], depth);
                e.recorded = record(layer[i], e.expansion.successors.empty(), depth);
            }
        };
        if (workers <= 1 || layer.size() < 2) {
            evaluate_range(0, layer.size());
        } else {
            size_t n = layer.size();
            size_t nworkers = std::min<size_t>(workers, n);
            size_t chunk = (n + nworkers - 1) / nworkers;
            std::vector<std::thread> threads;
            for (size_t w = 0; w < nworkers; ++w) {
                size_t begin = w * chunk;
                size_t end = std::min(begin + chunk, n);
                if (begin >= end) { break; }
                threads.emplace_back(evaluate_range, begin, end);
            }
            for (auto& t : threads) { t.join(); }
        }

        // Serial merge in layer order: identical outcome for any worker count.
        std::vector<State> next;
        for (Evaluated& e : evaluated) {
            out.diagnostics.eliminated_branches += e.expansion.eliminated_branches;
            if (e.recorded.vector) {
                out.vectors.insert(std::move(*e.recorded.vector));
                if (e.recorded.nonterminal_residue) {
                    out.diagnostics.nonterminal_residue_results += 1;
                }
            }
            if (e.expansion.successors.empty()) { continue; }
            if (depth >= budget.max_steps) {
                out.diagnostics.steps_pruned += 1;
                continue;
            }
            for (State& succ : e.expansion.successors) {
                if (state_size(succ) > budget.max_state_size) {
                    out.diagnostics.size_pruned += 1;
                    continue;
                }
                if (visited.contains(succ)) { continue; }
                if (visited.size() >= budget.max_states) {
                    out.diagnostics.states_pruned += 1;
                    continue;
                }
                visited.insert(succ);
                next.push_back(std::move(succ));
            }
        }
        out.states_visited = visited.size();
        layer = std::move(next);
        depth += 1;
    }

    out.complete = out.diagnostics.steps_pruned == 0 && out.diagnostics.size_pruned == 0 &&
                   out.diagnostics.states_pruned == 0;
    return out;
}

} // namespace tpv

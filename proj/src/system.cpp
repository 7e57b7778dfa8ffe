#include "tpv/system.hpp"

#include <algorithm>
#include <map>

#include "tpv/error.hpp"

namespace tpv {

void TpvSystem::validate() {
    if (cells.size() == 0) { throw ValidationError("system needs at least one cell"); }
    if (init_cell.id >= cells.size()) { throw ValidationError("initial cell is not declared"); }
    if (output_cell.id >= cells.size()) { throw ValidationError("output cell is not declared"); }

    is_terminal.assign(alphabet.size(), false);
    for (Symbol t : terminals) {
        if (t.id >= alphabet.size()) { throw ValidationError("terminal symbol is not in the alphabet"); }
        if (is_terminal[t.id]) {
            throw ValidationError("terminal '" + alphabet.name(t) + "' declared twice");
        }
        is_terminal[t.id] = true;
    }

    rules_by_cell.assign(cells.size(), {});
    for (uint32_t i = 0; i < rules.size(); ++i) {
        const TpvRule& r = rules[i];
        if (r.source.id >= cells.size() || r.target.id >= cells.size()) {
            throw ValidationError("rule uses an undeclared cell");
        }
        auto in_alphabet = [this](std::optional<Symbol> s) {
            return !s || s->id < alphabet.size();
        };
        if (!in_alphabet(r.mutation.lhs()) || !in_alphabet(r.mutation.rhs())) {
            throw ValidationError("rule uses a symbol outside the alphabet");
        }
        rules_by_cell[r.source.id].push_back(i);
    }
    for (const auto& [sym, count] : init_multiset.entries()) {
        if (sym.id >= alphabet.size()) {
            throw ValidationError("initial multiset uses a symbol outside the alphabet");
        }
        (void)count;
    }
}

bool TpvSystem::all_terminal(const Multiset& w) const {
    for (const auto& [sym, count] : w.entries()) {
        (void)count;
        if (!is_terminal[sym.id]) { return false; }
    }
    return true;
}

std::vector<uint64_t> TpvSystem::parikh_terminals(const Multiset& w) const {
    return parikh(w, terminals);
}

std::vector<uint64_t> parikh(const Multiset& w, std::span<const Symbol> order) {
    std::vector<uint64_t> out;
    out.reserve(order.size());
    for (Symbol s : order) { out.push_back(w.count(s)); }
    return out;
}

CommGraph comm_graph(const TpvSystem& sys) {
    CommGraph g;
    g.cell_count = sys.cells.size();
    std::set<std::pair<uint32_t, uint32_t>> seen;
    for (const TpvRule& r : sys.rules) { seen.emplace(r.source.id, r.target.id); }
    for (const auto& [from, to] : seen) { g.edges.emplace_back(CellId{from}, CellId{to}); }
    return g;
}

bool is_hierarchical(const TpvSystem& sys) {
    std::set<std::pair<uint32_t, uint32_t>> undirected;
    for (const TpvRule& r : sys.rules) {
        if (r.source == r.target) { continue; }
        undirected.emplace(std::min(r.source.id, r.target.id), std::max(r.source.id, r.target.id));
    }
    uint32_t n = sys.cells.size();
    if (undirected.size() != static_cast<size_t>(n) - 1) { return false; }

    std::vector<std::vector<uint32_t>> adj(n);
    for (const auto& [a, b] : undirected) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<bool> seen(n, false);
    std::vector<uint32_t> stack{sys.init_cell.id};
    seen[sys.init_cell.id] = true;
    uint32_t reached = 0;
    while (!stack.empty()) {
        uint32_t c = stack.back();
        stack.pop_back();
        ++reached;
        for (uint32_t next : adj[c]) {
            if (!seen[next]) {
                seen[next] = true;
                stack.push_back(next);
            }
        }
    }
    // Connected with n-1 loop-free edges: a tree covering all cells.
    return reached == n;
}

bool is_hybrid(const TpvSystem& sys) {
    std::vector<std::optional<MutationKind>> kind_used(sys.cells.size());
    for (const TpvRule& r : sys.rules) {
        auto& used = kind_used[r.source.id];
        if (used && *used != r.mutation.kind()) { return false; }
        used = r.mutation.kind();
    }
    return true;
}

namespace {

// Enumerates all t-element subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<uint32_t>> combinations(uint32_t n, uint32_t t) {
    std::vector<std::vector<uint32_t>> out;
    std::vector<uint32_t> idx(t);
    for (uint32_t i = 0; i < t; ++i) { idx[i] = i; }
    while (true) {
        out.push_back(idx);
        if (t == 0) { break; }
        // advance
        int32_t pos = static_cast<int32_t>(t) - 1;
        while (pos >= 0 && idx[pos] == n - t + pos) { --pos; }
        if (pos < 0) { break; }
        idx[pos] += 1;
        for (uint32_t j = pos + 1; j < t; ++j) { idx[j] = idx[j - 1] + 1; }
    }
    return out;
}

} // namespace

std::vector<SmaxChoice> smax_choices(const TpvSystem& sys, const VesicleConfig& cfg) {
    std::vector<SmaxChoice> out;
    const auto& cell_rules = sys.rules_by_cell[cfg.cell.id];

    // Targets in first-declaration order.
    std::vector<CellId> targets;
    for (uint32_t idx : cell_rules) {
        CellId t = sys.rules[idx].target;
        if (std::find(targets.begin(), targets.end(), t) == targets.end()) { targets.push_back(t); }
    }

    for (CellId target : targets) {
        std::vector<uint32_t> inserts;
        std::map<Symbol, std::vector<uint32_t>> demanders; // per consumed symbol, declaration order
        for (uint32_t idx : cell_rules) {
            const TpvRule& r = sys.rules[idx];
            if (r.target != target) { continue; }
            if (r.mutation.consumes()) {
                demanders[*r.mutation.lhs()].push_back(idx);
            } else {
                inserts.push_back(idx);
            }
        }

        // A maximal jointly applicable set takes every insertion plus, for
        // each consumed symbol a, exactly min(count(a), demanders) of the
        // rules demanding a. Choices within one symbol are independent of
        // choices within another.
        std::vector<std::vector<std::vector<uint32_t>>> per_symbol; // symbol -> options -> rule indices
        uint64_t picked_total = 0;
        for (const auto& [sym, rules_for_sym] : demanders) {
            uint32_t n = static_cast<uint32_t>(rules_for_sym.size());
            uint32_t t = static_cast<uint32_t>(
                std::min<uint64_t>(cfg.content.count(sym), n));
            picked_total += t;
            if (t == 0) { continue; }
            std::vector<std::vector<uint32_t>> options;
            for (const auto& combo : combinations(n, t)) {
                std::vector<uint32_t> option;
                option.reserve(t);
                for (uint32_t c : combo) { option.push_back(rules_for_sym[c]); }
                options.push_back(std::move(option));
            }
            per_symbol.push_back(std::move(options));
        }
        if (inserts.empty() && picked_total == 0) { continue; } // no applicable rule for this target

        // Odometer over the per-symbol option lists.
        std::vector<size_t> pos(per_symbol.size(), 0);
        while (true) {
            SmaxChoice choice;
            choice.target = target;
            choice.rule_indices = inserts;
            for (size_t s = 0; s < per_symbol.size(); ++s) {
                const auto& option = per_symbol[s][pos[s]];
                choice.rule_indices.insert(choice.rule_indices.end(), option.begin(), option.end());
            }
            std::sort(choice.rule_indices.begin(), choice.rule_indices.end());
            out.push_back(std::move(choice));

            size_t wheel = 0;
            while (wheel < pos.size()) {
                if (++pos[wheel] < per_symbol[wheel].size()) { break; }
                pos[wheel] = 0;
                ++wheel;
            }
            if (wheel == pos.size()) { break; }
        }
    }
    return out;
}

namespace {

std::vector<Mutation> mutations_of(const TpvSystem& sys, const std::vector<uint32_t>& indices) {
    std::vector<Mutation> ms;
    ms.reserve(indices.size());
    for (uint32_t idx : indices) { ms.push_back(sys.rules[idx].mutation); }
    return ms;
}

struct SuccessorDetail {
    VesicleConfig config;
    std::vector<uint32_t> rule_indices;
};

std::vector<SuccessorDetail> successors_detail(const TpvSystem& sys, DerivationMode mode,
                                               const VesicleConfig& cfg) {
    std::vector<SuccessorDetail> out;
    auto push_unique = [&out](VesicleConfig config, std::vector<uint32_t> rule_indices) {
        for (const SuccessorDetail& d : out) {
            if (d.config == config) { return; }
        }
        out.push_back(SuccessorDetail{std::move(config), std::move(rule_indices)});
    };

    if (mode == DerivationMode::sequ) {
        for (uint32_t idx : sys.rules_by_cell[cfg.cell.id]) {
            const TpvRule& r = sys.rules[idx];
            if (!applicable(cfg.content, r.mutation)) { continue; }
            push_unique(VesicleConfig{r.target, apply_one(cfg.content, r.mutation)}, {idx});
        }
    } else {
        for (const SmaxChoice& choice : smax_choices(sys, cfg)) {
            auto ms = mutations_of(sys, choice.rule_indices);
            push_unique(VesicleConfig{choice.target, apply_set(cfg.content, ms)},
                        choice.rule_indices);
        }
    }
    return out;
}

} // namespace

std::vector<VesicleConfig> tpv_successors(const TpvSystem& sys, DerivationMode mode,
                                          const VesicleConfig& cfg) {
    std::vector<VesicleConfig> out;
    for (SuccessorDetail& d : successors_detail(sys, mode, cfg)) { out.push_back(std::move(d.config)); }
    return out;
}

std::optional<RecordedResult> record_result(const TpvSystem& sys, OutputStrategy strategy,
                                            const VesicleConfig& cfg, bool halting) {
    if (cfg.cell != sys.output_cell) { return std::nullopt; }
    bool terminal_only = sys.all_terminal(cfg.content);
    switch (strategy) {
        case OutputStrategy::halt:
            if (!halting) { return std::nullopt; }
            return RecordedResult{sys.parikh_terminals(cfg.content), !terminal_only};
        case OutputStrategy::term:
            if (!terminal_only) { return std::nullopt; }
            return RecordedResult{sys.parikh_terminals(cfg.content), false};
        case OutputStrategy::halt_term:
            if (!halting || !terminal_only) { return std::nullopt; }
            return RecordedResult{sys.parikh_terminals(cfg.content), false};
    }
    return std::nullopt;
}

ResultSet tpv_enumerate(const TpvSystem& sys, DerivationMode mode, OutputStrategy strategy,
                        const SearchBudget& budget, unsigned workers, const TraceFn& trace) {
    budget.validate();
    if (sys.rules_by_cell.size() != sys.cells.size()) {
        throw ValidationError("system must be validated before enumeration");
    }
    if (trace) { workers = 1; }

    auto expand = [&sys, mode, &trace](const VesicleConfig& cfg, uint64_t depth) {
        Expansion<VesicleConfig> e;
        for (SuccessorDetail& d : successors_detail(sys, mode, cfg)) {
            if (trace) { trace(TraceEvent{depth + 1, cfg, d.rule_indices, d.config}); }
            e.successors.push_back(std::move(d.config));
        }
        return e;
    };
    auto record = [&sys, strategy](const VesicleConfig& cfg, bool halting, uint64_t /*depth*/) {
        Recorded r;
        if (auto res = record_result(sys, strategy, cfg, halting)) {
            r.vector = std::move(res->vector);
            r.nonterminal_residue = res->nonterminal_residue;
        }
        return r;
    };
    auto size = [](const VesicleConfig& cfg) { return cfg.content.size(); };

    VesicleConfig initial{sys.init_cell, sys.init_multiset};
    return closure<VesicleConfig, decltype(expand), decltype(record), decltype(size),
                   VesicleConfigHash>(initial, std::move(expand), std::move(record),
                                      std::move(size), budget, workers);
}

} // namespace tpv

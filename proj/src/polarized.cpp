#include "tpv/polarized.hpp"

#include <algorithm>

#include "tpv/error.hpp"

namespace tpv {

void PtpvSystem::validate() {
    base.validate();
    if (pol.cell_pol.size() != base.cells.size()) {
        throw ValidationError("cell polarization table does not cover every cell");
    }
    if (pol.sym_pol.size() != base.alphabet.size()) {
        throw ValidationError("symbol polarization table does not cover the alphabet");
    }
    for (Symbol t : base.terminals) {
        if (pol.symbol(t) != Polarity::zero) {
            throw ValidationError("terminal symbol '" + base.alphabet.name(t) +
                                  "' must have polarization 0");
        }
    }
    if (pol.cell(base.output_cell) != Polarity::zero) {
        throw ValidationError("output cell must have polarization 0");
    }
    if (content_sign(base.init_multiset) != pol.cell(base.init_cell)) {
        throw ValidationError("initial multiset polarization does not match the initial cell");
    }

    neighbors.assign(base.cells.size(), {});
    if (comm == CommKind::directed) {
        for (const TpvRule& r : base.rules) {
            auto& out = neighbors[r.source.id];
            if (std::find(out.begin(), out.end(), r.target) == out.end()) { out.push_back(r.target); }
        }
    } else {
        std::set<std::pair<uint32_t, uint32_t>> seen;
        for (auto [a, b] : edges) {
            if (a.id >= base.cells.size() || b.id >= base.cells.size()) {
                throw ValidationError("edge uses an undeclared cell");
            }
            seen.emplace(std::min(a.id, b.id), std::max(a.id, b.id));
        }
        edges.clear();
        for (const auto& [a, b] : seen) {
            edges.emplace_back(CellId{a}, CellId{b});
            neighbors[a].push_back(CellId{b});
            if (a != b) { neighbors[b].push_back(CellId{a}); }
        }
        for (auto& list : neighbors) { std::sort(list.begin(), list.end()); }
        for (const TpvRule& r : base.rules) {
            auto key = std::make_pair(std::min(r.source.id, r.target.id),
                                      std::max(r.source.id, r.target.id));
            if (!seen.contains(key)) {
                throw ValidationError("rule between cells without a communication edge");
            }
        }
    }
}

std::vector<Multiset> evolution_substep(const PtpvSystem& sys, DerivationMode mode,
                                        const VesicleConfig& cfg) {
    std::vector<Multiset> out;
    auto push_unique = [&out](Multiset w) {
        if (std::find(out.begin(), out.end(), w) == out.end()) { out.push_back(std::move(w)); }
    };

    if (mode == DerivationMode::sequ) {
        for (uint32_t idx : sys.base.rules_by_cell[cfg.cell.id]) {
            const Mutation& m = sys.base.rules[idx].mutation;
            if (applicable(cfg.content, m)) { push_unique(apply_one(cfg.content, m)); }
        }
    } else {
        for (const SmaxChoice& choice : smax_choices(sys.base, cfg)) {
            std::vector<Mutation> ms;
            ms.reserve(choice.rule_indices.size());
            for (uint32_t idx : choice.rule_indices) { ms.push_back(sys.base.rules[idx].mutation); }
            push_unique(apply_set(cfg.content, ms));
        }
    }
    // The empty rule application: only when nothing else is possible, so that
    // rule-less cells are passable but applicable rules cannot be ignored.
    if (out.empty()) { out.push_back(cfg.content); }
    return out;
}

std::vector<CellId> candidate_cells(const PtpvSystem& sys, CellId from, const Multiset& w) {
    Polarity s = sys.content_sign(w);
    std::vector<CellId> out;
    for (CellId j : sys.neighbors[from.id]) {
        if (j == from) { continue; } // the vesicle must not stay, even if the sign fits
        if (sys.pol.cell(j) == s) { out.push_back(j); }
    }
    return out;
}

namespace {

struct PolarizedDetail {
    VesicleConfig config;
    std::vector<uint32_t> rule_indices;
};

// Evolution branches paired with the rules that produced them, for tracing.
std::vector<std::pair<Multiset, std::vector<uint32_t>>> evolution_detail(
    const PtpvSystem& sys, DerivationMode mode, const VesicleConfig& cfg) {
    std::vector<std::pair<Multiset, std::vector<uint32_t>>> out;
    auto push_unique = [&out](Multiset w, std::vector<uint32_t> rules) {
        for (const auto& [existing, r] : out) {
            if (existing == w) { return; }
        }
        out.emplace_back(std::move(w), std::move(rules));
    };

    if (mode == DerivationMode::sequ) {
        for (uint32_t idx : sys.base.rules_by_cell[cfg.cell.id]) {
            const Mutation& m = sys.base.rules[idx].mutation;
            if (applicable(cfg.content, m)) {
                push_unique(apply_one(cfg.content, m), {idx});
            }
        }
    } else {
        for (const SmaxChoice& choice : smax_choices(sys.base, cfg)) {
            std::vector<Mutation> ms;
            for (uint32_t idx : choice.rule_indices) { ms.push_back(sys.base.rules[idx].mutation); }
            push_unique(apply_set(cfg.content, ms), choice.rule_indices);
        }
    }
    if (out.empty()) { out.emplace_back(cfg.content, std::vector<uint32_t>{}); }
    return out;
}

} // namespace

std::vector<VesicleConfig> ptpv_successors(const PtpvSystem& sys, DerivationMode mode,
                                           const VesicleConfig& cfg) {
    std::vector<VesicleConfig> out;
    for (auto& [w, rules] : evolution_detail(sys, mode, cfg)) {
        for (CellId j : candidate_cells(sys, cfg.cell, w)) {
            VesicleConfig succ{j, w};
            if (std::find(out.begin(), out.end(), succ) == out.end()) { out.push_back(std::move(succ)); }
        }
    }
    return out;
}

ResultSet ptpv_enumerate(const PtpvSystem& sys, DerivationMode mode, OutputStrategy strategy,
                         const SearchBudget& budget, unsigned workers, const TraceFn& trace) {
    budget.validate();
    if (sys.neighbors.size() != sys.base.cells.size()) {
        throw ValidationError("polarized system must be validated before enumeration");
    }
    if (trace) { workers = 1; }

    auto expand = [&sys, mode, &trace](const VesicleConfig& cfg, uint64_t depth) {
        Expansion<VesicleConfig> e;
        for (auto& [w, rules] : evolution_detail(sys, mode, cfg)) {
            auto candidates = candidate_cells(sys, cfg.cell, w);
            if (candidates.empty()) {
                e.eliminated_branches += 1; // this branch dies; others are unaffected
                continue;
            }
            for (CellId j : candidates) {
                VesicleConfig succ{j, w};
                if (std::find(e.successors.begin(), e.successors.end(), succ) !=
                    e.successors.end()) {
                    continue;
                }
                if (trace) { trace(TraceEvent{depth + 1, cfg, rules, succ}); }
                e.successors.push_back(std::move(succ));
            }
        }
        return e;
    };
    auto record = [&sys, strategy](const VesicleConfig& cfg, bool halting, uint64_t /*depth*/) {
        Recorded r;
        if (auto res = record_result(sys.base, strategy, cfg, halting)) {
            r.vector = std::move(res->vector);
            r.nonterminal_residue = res->nonterminal_residue;
        }
        return r;
    };
    auto size = [](const VesicleConfig& cfg) { return cfg.content.size(); };

    VesicleConfig initial{sys.base.init_cell, sys.base.init_multiset};
    return closure<VesicleConfig, decltype(expand), decltype(record), decltype(size),
                   VesicleConfigHash>(initial, std::move(expand), std::move(record),
                                      std::move(size), budget, workers);
}

} // namespace tpv

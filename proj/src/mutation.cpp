#include "tpv/mutation.hpp"

#include "tpv/error.hpp"

namespace tpv {

bool applicable(const Multiset& w, const Mutation& m) {
    if (!m.consumes()) { return true; }
    return w.count(*m.lhs()) >= 1;
}

Multiset apply_one(const Multiset& w, const Mutation& m) {
    if (!applicable(w, m)) {
        throw ContractError("apply_one: mutation is not applicable");
    }
    switch (m.kind()) {
        case MutationKind::insert: return w.add(*m.rhs());
        case MutationKind::erase: return w.remove(*m.lhs());
        case MutationKind::substitute: return w.remove(*m.lhs()).add(*m.rhs());
    }
    throw ContractError("apply_one: unreachable");
}

namespace {

Multiset demand_of(std::span<const Mutation> ms) {
    std::vector<Multiset::Entry> demands;
    for (const Mutation& m : ms) {
        if (m.consumes()) { demands.emplace_back(*m.lhs(), 1); }
    }
    return Multiset::from_entries(demands);
}

} // namespace

bool jointly_applicable(const Multiset& w, std::span<const Mutation> ms) {
    return w.contains(demand_of(ms));
}

Multiset apply_set(const Multiset& w, std::span<const Mutation> ms) {
    Multiset demand = demand_of(ms);
    if (!w.contains(demand)) {
        throw ContractError("apply_set: mutation set is not jointly applicable");
    }
    std::vector<Multiset::Entry> produced;
    for (const Mutation& m : ms) {
        if (m.produces()) { produced.emplace_back(*m.rhs(), 1); }
    }
    Multiset out = w;
    for (const auto& [sym, count] : demand.entries()) { out = out.remove(sym, count); }
    return out.sum(Multiset::from_entries(produced));
}

} // namespace tpv

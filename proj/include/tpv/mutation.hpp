// mutation.hpp -- point mutations on multisets: insertion, deletion, and
// substitution of a single symbol occurrence, plus joint application of a
// set of distinct mutations in one step.
#pragma once

#include <compare>
#include <optional>
#include <span>
#include <vector>

#include "tpv/multiset.hpp"
#include "tpv/symbol.hpp"

namespace tpv {

enum class MutationKind { insert, erase, substitute };

/// One point mutation. Insertions have no left-hand side, deletions no
/// right-hand side, substitutions both.
class Mutation {
public:
    static Mutation insertion(Symbol rhs) { return Mutation(MutationKind::insert, std::nullopt, rhs); }
    static Mutation deletion(Symbol lhs) { return Mutation(MutationKind::erase, lhs, std::nullopt); }
    static Mutation substitution(Symbol lhs, Symbol rhs) { return Mutation(MutationKind::substitute, lhs, rhs); }

    MutationKind kind() const { return kind_; }
    std::optional<Symbol> lhs() const { return lhs_; }
    std::optional<Symbol> rhs() const { return rhs_; }

    /// True for deletions and substitutions: applying consumes one lhs.
    bool consumes() const { return kind_ != MutationKind::insert; }
    /// True for insertions and substitutions: applying produces one rhs.
    bool produces() const { return kind_ != MutationKind::erase; }

    friend auto operator<=>(const Mutation&, const Mutation&) = default;

private:
    Mutation(MutationKind kind, std::optional<Symbol> lhs, std::optional<Symbol> rhs)
        : kind_(kind), lhs_(lhs), rhs_(rhs) {}

    MutationKind kind_;
    std::optional<Symbol> lhs_;
    std::optional<Symbol> rhs_;
};

/// An insertion is always applicable; deletions and substitutions need one
/// occurrence of their lhs.
bool applicable(const Multiset& w, const Mutation& m);

/// Applies one mutation. Contract: applicable(w, m).
Multiset apply_one(const Multiset& w, const Mutation& m);

/// A set of distinct mutations is jointly applicable when the multiset of
/// their lhs demands is contained in w. Insertions demand nothing.
bool jointly_applicable(const Multiset& w, std::span<const Mutation> ms);

/// Applies every mutation of the set once; the result is independent of
/// application order. Contract: jointly_applicable(w, ms).
Multiset apply_set(const Multiset& w, std::span<const Mutation> ms);

} // namespace tpv

// multiset.hpp -- immutable multisets over interned symbols.
//
// A multiset is stored as a sorted vector of (symbol, count) pairs with all
// counts strictly positive; this is also the canonical form used for hashing
// and for deduplicating configurations during search. All operations return
// new values.
#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "tpv/symbol.hpp"

namespace tpv {

class Multiset {
public:
    using Entry = std::pair<Symbol, uint64_t>;

    Multiset() = default;

    /// Builds a multiset from arbitrary (symbol, count) pairs; repeated
    /// symbols are accumulated, zero counts dropped.
    static Multiset from_entries(std::span<const Entry> entries);
    static Multiset from_entries(std::initializer_list<Entry> entries);

    uint64_t count(Symbol s) const;
    uint64_t size() const { return size_; }
    bool empty() const { return entries_.empty(); }

    /// Number of distinct symbols (the support).
    size_t support_size() const { return entries_.size(); }

    const std::vector<Entry>& entries() const { return entries_; }

    /// Multiset inclusion: every count of `other` is available here.
    bool contains(const Multiset& other) const;

    Multiset add(Symbol s, uint64_t n = 1) const;

    /// Removes n occurrences of s. Contract: count(s) >= n.
    Multiset remove(Symbol s, uint64_t n = 1) const;

    /// Additive union.
    Multiset sum(const Multiset& other) const;

    bool operator==(const Multiset& other) const { return entries_ == other.entries_; }

    size_t hash() const { return hash_; }

private:
    void rehash();

    std::vector<Entry> entries_;
    uint64_t size_ = 0;
    size_t hash_ = 0;
};

} // namespace tpv

template <>
struct std::hash<tpv::Multiset> {
    size_t operator()(const tpv::Multiset& m) const noexcept { return m.hash(); }
};

#include "tpv/multiset.hpp"

#include <algorithm>

#include "tpv/error.hpp"

namespace tpv {

namespace {

// FNV-1a over the canonical entry sequence; stable across runs.
size_t hash_entries(const std::vector<Multiset::Entry>& entries) {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](uint64_t v) {
        h ^= v;
        h *= 1099511628211ull;
    };
    for (const auto& [sym, count] : entries) {
        mix(sym.id);
        mix(count);
    }
    return static_cast<size_t>(h);
}

} // namespace

void Multiset::rehash() {
    size_ = 0;
    for (const auto& [sym, count] : entries_) { size_ += count; }
    hash_ = hash_entries(entries_);
}

Multiset Multiset::from_entries(std::span<const Entry> entries) {
    Multiset out;
    std::vector<Entry> sorted(entries.begin(), entries.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const Entry& a, const Entry& b) { return a.first.id < b.first.id; });
    for (const auto& [sym, count] : sorted) {
        if (count == 0) { continue; }
        if (!out.entries_.empty() && out.entries_.back().first == sym) {
            out.entries_.back().second += count;
        } else {
            out.entries_.emplace_back(sym, count);
        }
    }
    out.rehash();
    return out;
}

Multiset Multiset::from_entries(std::initializer_list<Entry> entries) {
    return from_entries(std::span<const Entry>(entries.begin(), entries.size()));
}

uint64_t Multiset::count(Symbol s) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), s,
                               [](const Entry& e, Symbol sym) { return e.first.id < sym.id; });
    if (it == entries_.end() || it->first != s) { return 0; }
    return it->second;
}

bool Multiset::contains(const Multiset& other) const {
    auto it = entries_.begin();
    for (const auto& [sym, count] : other.entries_) {
        while (it != entries_.end() && it->first.id < sym.id) { ++it; }
        if (it == entries_.end() || it->first != sym || it->second < count) { return false; }
    }
    return true;
}

Multiset Multiset::add(Symbol s, uint64_t n) const {
    if (n == 0) { return *this; }
    Multiset out(*this);
    auto it = std::lower_bound(out.entries_.begin(), out.entries_.end(), s,
                               [](const Entry& e, Symbol sym) { return e.first.id < sym.id; });
    if (it != out.entries_.end() && it->first == s) {
        it->second += n;
    } else {
        out.entries_.insert(it, Entry{s, n});
    }
    out.rehash();
    return out;
}

Multiset Multiset::remove(Symbol s, uint64_t n) const {
    if (n == 0) { return *this; }
    Multiset out(*this);
    auto it = std::lower_bound(out.entries_.begin(), out.entries_.end(), s,
                               [](const Entry& e, Symbol sym) { return e.first.id < sym.id; });
    if (it == out.entries_.end() || it->first != s || it->second < n) {
        throw ContractError("multiset remove: fewer than requested occurrences present");
    }
    if (it->second == n) {
        out.entries_.erase(it);
    } else {
        it->second -= n;
    }
    out.rehash();
    return out;
}

Multiset Multiset::sum(const Multiset& other) const {
    std::vector<Entry> merged;
    merged.reserve(entries_.size() + other.entries_.size());
    auto a = entries_.begin();
    auto b = other.entries_.begin();
    while (a != entries_.end() && b != other.entries_.end()) {
        if (a->first.id < b->first.id) {
            merged.push_back(*a++);
        } else if (b->first.id < a->first.id) {
            merged.push_back(*b++);
        } else {
            merged.emplace_back(a->first, a->second + b->second);
            ++a;
            ++b;
        }
    }
    merged.insert(merged.end(), a, entries_.end());
    merged.insert(merged.end(), b, other.entries_.end());
    Multiset out;
    out.entries_ = std::move(merged);
    out.rehash();
    return out;
}

} // namespace tpv

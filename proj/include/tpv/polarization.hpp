// polarization.hpp -- elementary polarizations for cells and symbols and the
// sum evaluation of a multiset.
#pragma once

#include <cstdint>
#include <vector>

#include "tpv/multiset.hpp"
#include "tpv/symbol.hpp"

namespace tpv {

/// Elementary polarization value.
enum class Polarity : int8_t { minus = -1, zero = 0, plus = 1 };

inline int polarity_value(Polarity p) { return static_cast<int>(p); }

/// Sign of an integer, as a Polarity.
Polarity sign_of(int64_t value);

/// Dense polarization assignment, indexed by cell and symbol ids. Every cell
/// and every symbol of the system must have an entry.
struct PolarizationTable {
    std::vector<Polarity> cell_pol;
    std::vector<Polarity> sym_pol;

    Polarity cell(CellId c) const;
    Polarity symbol(Symbol s) const;
};

/// Sum of the polarization values of all symbol occurrences in w.
/// Throws ValidationError if some symbol of w has no entry.
int64_t evaluate_sum(const Multiset& w, const PolarizationTable& pol);

} // namespace tpv

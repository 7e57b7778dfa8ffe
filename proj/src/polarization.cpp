#include "tpv/polarization.hpp"

#include "tpv/error.hpp"

namespace tpv {

Polarity sign_of(int64_t value) {
    if (value < 0) { return Polarity::minus; }
    if (value > 0) { return Polarity::plus; }
    return Polarity::zero;
}

Polarity PolarizationTable::cell(CellId c) const {
    if (c.id >= cell_pol.size()) {
        throw ValidationError("polarization table has no entry for cell id " + std::to_string(c.id));
    }
    return cell_pol[c.id];
}

Polarity PolarizationTable::symbol(Symbol s) const {
    if (s.id >= sym_pol.size()) {
        throw ValidationError("polarization table has no entry for symbol id " + std::to_string(s.id));
    }
    return sym_pol[s.id];
}

int64_t evaluate_sum(const Multiset& w, const PolarizationTable& pol) {
    int64_t total = 0;
    for (const auto& [sym, count] : w.entries()) {
        total += static_cast<int64_t>(polarity_value(pol.symbol(sym))) * static_cast<int64_t>(count);
    }
    return total;
}

} // namespace tpv

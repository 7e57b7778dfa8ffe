// polarized.hpp -- polarized tissue systems: a derivation step is an
// evolution substep followed by a sign-gated communication substep. Movement
// goes to a cell whose polarization equals the sign of the evolved multiset;
// the current cell is never a candidate, and a vesicle with no candidate is
// eliminated.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tpv/polarization.hpp"
#include "tpv/search.hpp"
#include "tpv/system.hpp"

namespace tpv {

enum class CommKind { directed, undirected };

/// Evaluation function selector. Only the sum of symbol polarizations is
/// implemented; the enum is the seam for other evaluations.
enum class Evaluation { sum };

struct PtpvSystem {
    TpvSystem base;
    PolarizationTable pol;
    Evaluation eval = Evaluation::sum;
    CommKind comm = CommKind::directed;
    std::vector<std::pair<CellId, CellId>> edges; // undirected only; normalized pairs

    // Derived on validate():
    std::vector<std::vector<CellId>> neighbors; // movement candidates per cell (before sign gating)

    void validate();

    Polarity content_sign(const Multiset& w) const { return sign_of(evaluate_sum(w, pol)); }
};

/// Candidate multisets after the evolution substep. Sequential mode applies
/// at most one rule of the cell; set-maximal mode applies one maximal
/// choice. The unchanged multiset is offered only when no rule of the cell
/// is applicable, so cells with empty rule sets pass the vesicle through.
std::vector<Multiset> evolution_substep(const PtpvSystem& sys, DerivationMode mode,
                                        const VesicleConfig& cfg);

/// Cells the vesicle may move to with content w: neighbors of `from` (rule
/// targets when directed, graph neighbors when undirected) whose
/// polarization equals sign(w). Never contains `from`.
std::vector<CellId> candidate_cells(const PtpvSystem& sys, CellId from, const Multiset& w);

std::vector<VesicleConfig> ptpv_successors(const PtpvSystem& sys, DerivationMode mode,
                                           const VesicleConfig& cfg);

/// Bounded enumeration of Ps(sys, mode, strategy) for the polarized system.
/// Eliminated evolution branches are counted in the diagnostics.
ResultSet ptpv_enumerate(const PtpvSystem& sys, DerivationMode mode, OutputStrategy strategy,
                         const SearchBudget& budget, unsigned workers = 1,
                         const TraceFn& trace = nullptr);

} // namespace tpv

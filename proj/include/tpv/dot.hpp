// dot.hpp -- communication graph export in DOT text form.
#pragma once

#include <string>

#include "tpv/polarized.hpp"
#include "tpv/system.hpp"

namespace tpv {

/// Directed graph of a plain system: one edge per distinct (source, target)
/// rule pair, nodes and edges in deterministic order.
std::string emit_dot(const TpvSystem& sys);

/// Polarized systems additionally carry the cell polarization in the node
/// label, in angle brackets; undirected systems emit an undirected graph.
std::string emit_dot(const PtpvSystem& sys);

} // namespace tpv

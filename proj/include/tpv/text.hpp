// text.hpp -- line-oriented text formats for machines and systems, canonical
// printers, and result-set formatting.
//
// Machine files: '#' starts a comment anywhere. Header lines `registers`,
// `outputs`, `kind`, `init` must precede the instruction body; labels may
// repeat (relaxed labeling).
//
// System files: a line whose first non-blank character is '#' is a comment;
// elsewhere '#' is an ordinary symbol (the customary trap symbol). Polarized
// systems are recognized by `cellpol` lines, `:pol` suffixes in the
// alphabet, `edge` lines, or targetless rules; `edge` lines or targetless
// rules make the communication graph undirected.
#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "tpv/machine.hpp"
#include "tpv/polarized.hpp"
#include "tpv/search.hpp"
#include "tpv/system.hpp"

namespace tpv {

MachineProgram parse_machine(std::string_view text);

using ParsedSystem = std::variant<TpvSystem, PtpvSystem>;
ParsedSystem parse_system(std::string_view text);

// Canonical printers: parsing a printer's output and printing again is
// byte-identical.
std::string print_machine(const MachineProgram& p);
std::string print_system(const TpvSystem& sys);
std::string print_system(const PtpvSystem& sys);

/// Compact multiset rendering, e.g. "{l0,a1*3}"; entries in symbol order.
std::string format_multiset(const Multiset& w, const SymbolTable& alphabet);

/// Rule rendering as it appears in system files (without the "rule" keyword).
std::string format_rule(const TpvSystem& sys, const TpvRule& rule, bool with_target);

/// One result vector as space-separated decimal naturals.
std::string format_vector(const ResultVector& v);

/// Sorted result vectors one per line, then a '#'-prefixed diagnostics
/// footer. Identical across runs and worker counts.
std::string format_result_set(const ResultSet& rs);

std::string format_trace_event(const TpvSystem& sys, const TraceEvent& ev);

} // namespace tpv

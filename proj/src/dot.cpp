#include "tpv/dot.hpp"

#include <sstream>

namespace tpv {

namespace {

std::string quoted(const std::string& name) {
    std::string out = "\"";
    for (char c : name) {
        if (c == '"' || c == '\\') { out += '\\'; }
        out += c;
    }
    out += '"';
    return out;
}

const char* pol_mark(Polarity p) {
    switch (p) {
        case Polarity::minus: return "<->";
        case Polarity::zero: return "<0>";
        case Polarity::plus: return "<+>";
    }
    return "<0>";
}

} // namespace

std::string emit_dot(const TpvSystem& sys) {
    std::ostringstream out;
    out << "digraph system {\n";
    for (uint32_t id = 0; id < sys.cells.size(); ++id) {
        out << "  " << quoted(sys.cells.name(CellId{id})) << ";\n";
    }
    for (const auto& [from, to] : comm_graph(sys).edges) {
        out << "  " << quoted(sys.cells.name(from)) << " -> " << quoted(sys.cells.name(to)) << ";\n";
    }
    out << "}\n";
    return out.str();
}

std::string emit_dot(const PtpvSystem& sys) {
    std::ostringstream out;
    bool undirected = sys.comm == CommKind::undirected;
    out << (undirected ? "graph" : "digraph") << " system {\n";
    for (uint32_t id = 0; id < sys.base.cells.size(); ++id) {
        const std::string& name = sys.base.cells.name(CellId{id});
        out << "  " << quoted(name) << " [label=" << quoted(name + " " + pol_mark(sys.pol.cell_pol[id]))
            << "];\n";
    }
    if (undirected) {
        for (auto [a, b] : sys.edges) {
            out << "  " << quoted(sys.base.cells.name(a)) << " -- " << quoted(sys.base.cells.name(b))
                << ";\n";
        }
    } else {
        for (const auto& [from, to] : comm_graph(sys.base).edges) {
            out << "  " << quoted(sys.base.cells.name(from)) << " -> "
                << quoted(sys.base.cells.name(to)) << ";\n";
        }
    }
    out << "}\n";
    return out.str();
}

} // namespace tpv

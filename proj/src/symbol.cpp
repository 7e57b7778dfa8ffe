#include "tpv/symbol.hpp"

#include <cctype>

#include "tpv/error.hpp"

namespace tpv {

uint32_t NameTable::intern(std::string_view name) {
    auto it = index_.find(std::string(name));
    if (it != index_.end()) { return it->second; }
    uint32_t id = static_cast<uint32_t>(names_.size());
    names_.emplace_back(name);
    index_.emplace(names_.back(), id);
    return id;
}

std::optional<uint32_t> NameTable::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) { return std::nullopt; }
    return it->second;
}

const std::string& NameTable::name(uint32_t id) const { return names_.at(id); }

namespace {

bool printable_token(std::string_view name) {
    if (name.empty()) { return false; }
    for (unsigned char ch : name) {
        if (std::isspace(ch) || !std::isprint(ch)) { return false; }
    }
    return true;
}

// Characters with structural meaning in the system DSL.
bool has_any(std::string_view name, std::string_view banned) {
    return name.find_first_of(banned) != std::string_view::npos;
}

} // namespace

bool valid_symbol_name(std::string_view name) {
    if (!printable_token(name)) { return false; }
    if (has_any(name, ":@{}*")) { return false; }
    if (name == "+" || name == "-" || name == "->" || name == "=>") { return false; }
    return true;
}

bool valid_cell_name(std::string_view name) {
    if (!printable_token(name)) { return false; }
    if (has_any(name, "@{}*#")) { return false; }
    if (name == "+" || name == "-" || name == "->" || name == "=>") { return false; }
    return true;
}

bool valid_label_name(std::string_view name) {
    // '#' starts a comment in machine files; a label ending in ':' would be
    // ambiguous in instruction lines.
    if (!printable_token(name)) { return false; }
    if (has_any(name, "#{}@*")) { return false; }
    return name.back() != ':';
}

Symbol SymbolTable::intern(std::string_view name) {
    if (!valid_symbol_name(name)) {
        throw ValidationError("invalid symbol name '" + std::string(name) + "'");
    }
    return Symbol{names_.intern(name)};
}

std::optional<Symbol> SymbolTable::find(std::string_view name) const {
    auto id = names_.find(name);
    if (!id) { return std::nullopt; }
    return Symbol{*id};
}

CellId CellTable::intern(std::string_view name) {
    if (!valid_cell_name(name)) {
        throw ValidationError("invalid cell name '" + std::string(name) + "'");
    }
    return CellId{names_.intern(name)};
}

std::optional<CellId> CellTable::find(std::string_view name) const {
    auto id = names_.find(name);
    if (!id) { return std::nullopt; }
    return CellId{*id};
}

Label LabelTable::intern(std::string_view name) {
    if (!valid_label_name(name)) {
        throw ValidationError("invalid label name '" + std::string(name) + "'");
    }
    return Label{names_.intern(name)};
}

std::optional<Label> LabelTable::find(std::string_view name) const {
    auto id = names_.find(name);
    if (!id) { return std::nullopt; }
    return Label{*id};
}

} // namespace tpv

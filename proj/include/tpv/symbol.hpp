// symbol.hpp -- interned identifiers for alphabet symbols, cells, and
// machine labels. Names are interned once per system; all comparisons
// afterwards are on dense integer ids.
#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tpv {

struct Symbol {
    uint32_t id = 0;
    friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

struct CellId {
    uint32_t id = 0;
    friend auto operator<=>(const CellId&, const CellId&) = default;
};

struct Label {
    uint32_t id = 0;
    friend auto operator<=>(const Label&, const Label&) = default;
};

/// Order-preserving interning table. Ids are assigned densely in first-seen
/// order, so printing in id order reproduces declaration order.
class NameTable {
public:
    uint32_t intern(std::string_view name);
    std::optional<uint32_t> find(std::string_view name) const;
    const std::string& name(uint32_t id) const;
    uint32_t size() const { return static_cast<uint32_t>(names_.size()); }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, uint32_t> index_;
};

// Name validity. Symbols appear in the system DSL next to ':' (polarization
// suffix) and '*' (count suffix), so those characters are excluded; cells may
// contain ':' but not the rule-target marker '@'. "#" is an ordinary symbol.
bool valid_symbol_name(std::string_view name);
bool valid_cell_name(std::string_view name);
bool valid_label_name(std::string_view name);

/// Alphabet of a system. Wraps a NameTable and rejects invalid names.
class SymbolTable {
public:
    Symbol intern(std::string_view name);
    std::optional<Symbol> find(std::string_view name) const;
    const std::string& name(Symbol s) const { return names_.name(s.id); }
    uint32_t size() const { return names_.size(); }

private:
    NameTable names_;
};

class CellTable {
public:
    CellId intern(std::string_view name);
    std::optional<CellId> find(std::string_view name) const;
    const std::string& name(CellId c) const { return names_.name(c.id); }
    uint32_t size() const { return names_.size(); }

private:
    NameTable names_;
};

class LabelTable {
public:
    Label intern(std::string_view name);
    std::optional<Label> find(std::string_view name) const;
    const std::string& name(Label l) const { return names_.name(l.id); }
    uint32_t size() const { return names_.size(); }

private:
    NameTable names_;
};

} // namespace tpv

template <>
struct std::hash<tpv::Symbol> {
    size_t operator()(tpv::Symbol s) const noexcept { return std::hash<uint32_t>{}(s.id); }
};
template <>
struct std::hash<tpv::CellId> {
    size_t operator()(tpv::CellId c) const noexcept { return std::hash<uint32_t>{}(c.id); }
};
template <>
struct std::hash<tpv::Label> {
    size_t operator()(tpv::Label l) const noexcept { return std::hash<uint32_t>{}(l.id); }
};

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "tpv/error.hpp"
#include "tpv/multiset.hpp"
#include "tpv/mutation.hpp"
#include "tpv/polarization.hpp"
#include "tpv/symbol.hpp"
#include "tpv/system.hpp"

using namespace tpv;

namespace {

struct Fixture {
    SymbolTable table;
    Symbol a = table.intern("a");
    Symbol b = table.intern("b");
    Symbol c = table.intern("c");
    Symbol p = table.intern("p");
    Symbol q = table.intern("q");
    Symbol s = table.intern("s");
    Symbol trap = table.intern("#");
};

Multiset ms(std::initializer_list<Multiset::Entry> entries) { return Multiset::from_entries(entries); }

} // namespace

TEST_CASE("symbol interning and name validity") {
    SymbolTable t;
    Symbol a1 = t.intern("a");
    Symbol a2 = t.intern("a");
    CHECK(a1 == a2);
    CHECK(t.intern("b") != a1);
    CHECK(t.name(a1) == "a");

    // '#' is an ordinary symbol.
    CHECK(valid_symbol_name("#"));
    CHECK(valid_symbol_name("a1+"));
    CHECK(valid_symbol_name("p-"));
    CHECK_FALSE(valid_symbol_name(""));
    CHECK_FALSE(valid_symbol_name("a b"));
    CHECK_FALSE(valid_symbol_name("a:0"));
    CHECK_FALSE(valid_symbol_name("+"));
    CHECK_FALSE(valid_symbol_name("->"));
    CHECK_THROWS_AS(t.intern("has space"), ValidationError);

    CHECK(valid_cell_name("r:2"));
    CHECK(valid_cell_name("0'"));
    CHECK_FALSE(valid_cell_name("@x"));
    CHECK(valid_label_name("rm:2"));
    CHECK_FALSE(valid_label_name("x:"));
}

TEST_CASE("multiset basics") {
    Fixture f;
    Multiset w = ms({{f.a, 2}, {f.b, 1}});
    CHECK(w.size() == 3);
    CHECK(w.count(f.a) == 2);
    CHECK(w.count(f.c) == 0);
    CHECK(w.add(f.a).count(f.a) == 3);
    CHECK(w.remove(f.a, 2).count(f.a) == 0);
    CHECK_THROWS_AS(w.remove(f.c), ContractError);
    CHECK(w.contains(ms({{f.a, 1}})));
    CHECK_FALSE(w.contains(ms({{f.a, 3}})));
    CHECK(w.sum(ms({{f.b, 2}, {f.c, 1}})) == ms({{f.a, 2}, {f.b, 3}, {f.c, 1}}));
    CHECK(Multiset{}.empty());

    // Entry order does not matter for identity or hashing.
    Multiset w2 = ms({{f.b, 1}, {f.a, 2}});
    CHECK(w == w2);
    CHECK(w.hash() == w2.hash());
}

TEST_CASE("applicability") {
    Fixture f;
    CHECK(applicable(Multiset{}, Mutation::insertion(f.b)));
    CHECK_FALSE(applicable(Multiset{}, Mutation::deletion(f.a)));
    CHECK(applicable(ms({{f.a, 2}}), Mutation::substitution(f.a, f.b)));
}

TEST_CASE("apply_one") {
    Fixture f;
    CHECK(apply_one(ms({{f.p, 1}}), Mutation::substitution(f.p, f.q)) == ms({{f.q, 1}}));
    CHECK(apply_one(ms({{f.a, 3}}), Mutation::deletion(f.a)) == ms({{f.a, 2}}));
    CHECK(apply_one(ms({{f.a, 1}}), Mutation::insertion(f.a)) == ms({{f.a, 2}}));
    CHECK_THROWS_AS(apply_one(Multiset{}, Mutation::deletion(f.a)), ContractError);

    // Size delta per kind.
    Multiset w = ms({{f.a, 2}, {f.b, 1}});
    CHECK(apply_one(w, Mutation::insertion(f.c)).size() == w.size() + 1);
    CHECK(apply_one(w, Mutation::deletion(f.a)).size() == w.size() - 1);
    CHECK(apply_one(w, Mutation::substitution(f.a, f.c)).size() == w.size());

    // Purity: the input is unchanged.
    Multiset before = w;
    (void)apply_one(w, Mutation::deletion(f.a));
    CHECK(w == before);
}

TEST_CASE("jointly_applicable") {
    Fixture f;
    std::vector<Mutation> both{Mutation::substitution(f.s, f.s), Mutation::substitution(f.a, f.trap)};
    CHECK(jointly_applicable(ms({{f.s, 1}, {f.a, 2}}), both));

    std::vector<Mutation> two_demands{Mutation::deletion(f.a), Mutation::substitution(f.a, f.b)};
    CHECK_FALSE(jointly_applicable(ms({{f.a, 1}}), two_demands)); // demand 2 > supply 1

    std::vector<Mutation> inserts{Mutation::insertion(f.b), Mutation::insertion(f.c)};
    CHECK(jointly_applicable(Multiset{}, inserts));
}

TEST_CASE("apply_set") {
    Fixture f;
    std::vector<Mutation> swap_two{Mutation::substitution(f.s, f.s),
                                   Mutation::substitution(f.a, f.trap)};
    CHECK(apply_set(ms({{f.s, 1}, {f.a, 1}}), swap_two) == ms({{f.s, 1}, {f.trap, 1}}));

    CHECK(apply_set(ms({{f.a, 1}}), {}) == ms({{f.a, 1}})); // empty set is the identity

    std::vector<Mutation> del_ins{Mutation::deletion(f.a), Mutation::insertion(f.b)};
    CHECK(apply_set(ms({{f.a, 2}}), del_ins) == ms({{f.a, 1}, {f.b, 1}}));

    std::vector<Mutation> too_many{Mutation::deletion(f.a), Mutation::substitution(f.a, f.b)};
    CHECK_THROWS_AS(apply_set(ms({{f.a, 1}}), too_many), ContractError);
}

TEST_CASE("apply_set equals folding apply_one over any order") {
    Fixture f;
    std::mt19937_64 rng(7);
    std::vector<Symbol> syms{f.a, f.b, f.c, f.p, f.q};
    for (int round = 0; round < 300; ++round) {
        std::vector<Multiset::Entry> entries;
        for (Symbol s : syms) {
            uint64_t count = rng() % 4;
            if (count) { entries.emplace_back(s, count); }
        }
        Multiset w = Multiset::from_entries(entries);

        std::vector<Mutation> set;
        for (int i = 0; i < 5; ++i) {
            Symbol x = syms[rng() % syms.size()];
            Symbol y = syms[rng() % syms.size()];
            switch (rng() % 3) {
                case 0: set.push_back(Mutation::insertion(x)); break;
                case 1: set.push_back(Mutation::deletion(x)); break;
                default: set.push_back(Mutation::substitution(x, y)); break;
            }
        }
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
        if (!jointly_applicable(w, set)) { continue; }

        Multiset joint = apply_set(w, set);
        for (int perm = 0; perm < 4; ++perm) {
            std::shuffle(set.begin(), set.end(), rng);
            Multiset folded = w;
            for (const Mutation& m : set) { folded = apply_one(folded, m); }
            REQUIRE(folded == joint);
        }
    }
}

TEST_CASE("singleton joint applicability agrees with applicable") {
    Fixture f;
    std::mt19937_64 rng(11);
    std::vector<Symbol> syms{f.a, f.b, f.c};
    for (int round = 0; round < 200; ++round) {
        Multiset w = ms({{syms[rng() % 3], rng() % 3}});
        Mutation m = rng() % 2 ? Mutation::deletion(syms[rng() % 3])
                               : Mutation::substitution(syms[rng() % 3], syms[rng() % 3]);
        std::vector<Mutation> single{m};
        REQUIRE(jointly_applicable(w, single) == applicable(w, m));
    }
}

TEST_CASE("parikh projection") {
    Fixture f;
    std::vector<Symbol> order{f.a, f.b};
    CHECK(parikh(ms({{f.a, 2}, {f.b, 1}}), order) == std::vector<uint64_t>{2, 1});
    CHECK(parikh(Multiset{}, std::vector<Symbol>{f.a}) == std::vector<uint64_t>{0});
    CHECK(parikh(ms({{f.a, 1}, {f.p, 5}}), std::vector<Symbol>{f.a}) == std::vector<uint64_t>{1});
}

TEST_CASE("parikh is additive") {
    Fixture f;
    std::mt19937_64 rng(23);
    std::vector<Symbol> syms{f.a, f.b, f.c};
    for (int round = 0; round < 100; ++round) {
        auto random_ms = [&rng, &syms] {
            std::vector<Multiset::Entry> entries;
            for (Symbol s : syms) {
                uint64_t count = rng() % 5;
                if (count) { entries.emplace_back(s, count); }
            }
            return Multiset::from_entries(entries);
        };
        Multiset w1 = random_ms(), w2 = random_ms();
        auto v1 = parikh(w1, syms), v2 = parikh(w2, syms), vs = parikh(w1.sum(w2), syms);
        for (size_t i = 0; i < syms.size(); ++i) { REQUIRE(vs[i] == v1[i] + v2[i]); }
    }
}

TEST_CASE("evaluate_sum and sign") {
    Fixture f;
    PolarizationTable pol;
    pol.sym_pol.assign(f.table.size(), Polarity::zero);
    pol.sym_pol[f.p.id] = Polarity::plus;
    pol.sym_pol[f.q.id] = Polarity::minus;

    CHECK(evaluate_sum(Multiset{}, pol) == 0);
    CHECK(sign_of(evaluate_sum(Multiset{}, pol)) == Polarity::zero);

    CHECK(evaluate_sum(ms({{f.p, 1}, {f.a, 3}}), pol) == 1);
    CHECK(sign_of(1) == Polarity::plus);

    CHECK(evaluate_sum(ms({{f.q, 2}, {f.p, 1}}), pol) == -1);
    CHECK(sign_of(-1) == Polarity::minus);

    // Missing entry is a configuration error.
    PolarizationTable incomplete;
    incomplete.sym_pol.assign(2, Polarity::zero);
    CHECK_THROWS_AS(evaluate_sum(ms({{f.p, 1}}), incomplete), ValidationError);

    // Additivity over union.
    std::mt19937_64 rng(31);
    std::vector<Symbol> syms{f.a, f.p, f.q};
    for (int round = 0; round < 100; ++round) {
        auto random_ms = [&rng, &syms] {
            std::vector<Multiset::Entry> entries;
            for (Symbol s : syms) {
                uint64_t count = rng() % 4;
                if (count) { entries.emplace_back(s, count); }
            }
            return Multiset::from_entries(entries);
        };
        Multiset w1 = random_ms(), w2 = random_ms();
        REQUIRE(evaluate_sum(w1.sum(w2), pol) == evaluate_sum(w1, pol) + evaluate_sum(w2, pol));
    }
}

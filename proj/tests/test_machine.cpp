#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>
#include <sstream>

#include "tpv/error.hpp"
#include "tpv/machine.hpp"
#include "tpv/text.hpp"

using namespace tpv;

namespace {

MachineProgram parse(const std::string& body) { return parse_machine(body); }

const char* P1 =
    "registers 1\noutputs 1\nkind general\ninit l0\n"
    "l0: ADD 1 l0 l1\n"
    "l1: HALT\n";

const char* P2 = "registers 1\noutputs 1\nkind general\ninit l0\nl0: HALT\n";

const char* P3 =
    "registers 1\noutputs 1\nkind blind\ninit l0\n"
    "l0: SUB 1 l0\n"
    "lh: HALT\n";

// Independent oracle: exhaustive recursive simulation with inline instruction
// semantics and per-branch step counting. No sharing with machine_enumerate.
void brute_runs(const MachineProgram& p, const MachineConfig& c, uint64_t steps_left,
                std::set<ResultVector>& out, std::set<MachineConfig, bool (*)(const MachineConfig&, const MachineConfig&)>* accepting) {
    if (is_accepting(p, c) && steps_left >= 1) {
        out.insert(ResultVector(c.regs.begin(), c.regs.begin() + p.outputs));
        if (accepting) { accepting->insert(c); }
    }
    if (steps_left == 0) { return; }
    for (const Instruction& ins : p.at(c.label)) {
        switch (ins.kind) {
            case InstructionKind::add: {
                MachineConfig succ = c;
                succ.regs[ins.reg - 1] += 1;
                succ.label = ins.next1;
                brute_runs(p, succ, steps_left - 1, out, accepting);
                succ.label = ins.next2;
                brute_runs(p, succ, steps_left - 1, out, accepting);
                break;
            }
            case InstructionKind::sub: {
                MachineConfig succ = c;
                if (succ.regs[ins.reg - 1] > 0) {
                    succ.regs[ins.reg - 1] -= 1;
                    succ.label = ins.next1;
                } else {
                    succ.label = ins.next2;
                }
                brute_runs(p, succ, steps_left - 1, out, accepting);
                break;
            }
            case InstructionKind::sub_blind: {
                if (c.regs[ins.reg - 1] > 0) {
                    MachineConfig succ = c;
                    succ.regs[ins.reg - 1] -= 1;
                    succ.label = ins.next1;
                    brute_runs(p, succ, steps_left - 1, out, accepting);
                }
                break;
            }
            case InstructionKind::halt: break;
        }
    }
}

std::set<ResultVector> brute_force(const MachineProgram& p, uint64_t max_steps) {
    std::set<ResultVector> out;
    brute_runs(p, initial_config(p), max_steps, out, nullptr);
    return out;
}

bool config_less(const MachineConfig& a, const MachineConfig& b) {
    if (a.label != b.label) { return a.label < b.label; }
    return a.regs < b.regs;
}

} // namespace

TEST_CASE("machine_step follows the instruction semantics") {
    MachineProgram p = parse(P1);
    Label l0 = *p.labels.find("l0");
    Label l1 = *p.labels.find("l1");

    // ADD: both branches, incremented by one.
    auto succs = machine_step(p, MachineConfig{l0, {0}});
    REQUIRE(succs.size() == 2);
    CHECK(succs[0] == MachineConfig{l0, {1}});
    CHECK(succs[1] == MachineConfig{l1, {1}});

    // HALT: no successors.
    CHECK(machine_step(p, MachineConfig{l1, {3}}).empty());

    MachineProgram g = parse(
        "registers 1\noutputs 1\nkind general\ninit l\n"
        "l: SUB 1 q s\n"
        "q: HALT\n"
        "s: ADD 1 q q\n");
    Label l = *g.labels.find("l");
    // Zero register: the zero-test branch.
    auto zero = machine_step(g, MachineConfig{l, {0}});
    REQUIRE(zero.size() == 1);
    CHECK(zero[0] == MachineConfig{*g.labels.find("s"), {0}});
    // Nonzero register: decrement.
    auto dec = machine_step(g, MachineConfig{l, {2}});
    REQUIRE(dec.size() == 1);
    CHECK(dec[0] == MachineConfig{*g.labels.find("q"), {1}});

    // Blind SUB on an empty register aborts: no successor at all.
    MachineProgram b = parse(P3);
    CHECK(machine_step(b, initial_config(b)).empty());
}

TEST_CASE("is_accepting") {
    MachineProgram blind = parse(
        "registers 2\noutputs 1\nkind blind\ninit l0\n"
        "l0: SUB 2 lh\n"
        "lh: HALT\n");
    Label lh = *blind.labels.find("lh");
    CHECK(is_accepting(blind, MachineConfig{lh, {3, 0}}));
    CHECK_FALSE(is_accepting(blind, MachineConfig{lh, {3, 1}}));
    CHECK_FALSE(is_accepting(blind, MachineConfig{*blind.labels.find("l0"), {3, 0}}));

    MachineProgram general = parse(
        "registers 2\noutputs 1\nkind general\ninit l0\n"
        "l0: ADD 2 lh lh\n"
        "lh: HALT\n");
    CHECK(is_accepting(general, MachineConfig{*general.labels.find("lh"), {3, 1}}));
}

TEST_CASE("machine_enumerate frozen examples") {
    // One ADD costs one step and the halt costs another: budget 4 admits 1..3.
    auto rs = machine_enumerate(parse(P1), SearchBudget{4, 10, 1000});
    CHECK(rs.vectors == std::set<ResultVector>{{1}, {2}, {3}});

    auto rs2 = machine_enumerate(parse(P2), SearchBudget{4, 10, 1000});
    CHECK(rs2.vectors == std::set<ResultVector>{{0}});
    CHECK(rs2.complete);

    auto rs3 = machine_enumerate(parse(P3), SearchBudget{10, 10, 1000});
    CHECK(rs3.vectors.empty());
    CHECK(rs3.complete); // the abort is a dead end, not a budget cut
}

TEST_CASE("machine_enumerate matches the brute-force oracle") {
    std::mt19937_64 rng(2024);
    int checked = 0;
    for (int round = 0; round < 120; ++round) {
        bool blind = rng() % 2 == 0;
        uint32_t m = 1 + rng() % 2;
        std::ostringstream src;
        src << "registers " << m << "\noutputs 1\nkind " << (blind ? "blind" : "general")
            << "\ninit l0\n";
        std::vector<std::string> labels{"l0", "l1", "l2", "lh"};
        for (size_t i = 0; i + 1 < labels.size(); ++i) {
            uint32_t reg = 1 + rng() % m;
            const std::string& q = labels[rng() % labels.size()];
            const std::string& s = labels[rng() % labels.size()];
            switch (rng() % 3) {
                case 0: src << labels[i] << ": ADD " << reg << " " << q << " " << s << "\n"; break;
                case 1:
                    if (blind) {
                        src << labels[i] << ": SUB " << reg << " " << q << "\n";
                    } else {
                        src << labels[i] << ": SUB " << reg << " " << q << " " << s << "\n";
                    }
                    break;
                default: src << labels[i] << ": ADD " << reg << " " << s << " " << q << "\n"; break;
            }
        }
        src << "lh: HALT\n";
        MachineProgram p = parse(src.str());

        uint64_t budget = 2 + rng() % 7;
        auto expected = brute_force(p, budget);
        auto actual = machine_enumerate(p, SearchBudget{budget, 1000, 100000});
        REQUIRE(actual.vectors == expected);
        ++checked;
    }
    CHECK(checked == 120);
}

TEST_CASE("enumeration is monotone in the step budget") {
    MachineProgram p = parse(P1);
    std::set<ResultVector> previous;
    for (uint64_t steps = 1; steps <= 8; ++steps) {
        auto rs = machine_enumerate(p, SearchBudget{steps, 100, 1000});
        CHECK(std::includes(rs.vectors.begin(), rs.vectors.end(), previous.begin(), previous.end()));
        previous = rs.vectors;
    }
}

TEST_CASE("strictly labeled programs branch at most twice") {
    MachineProgram p = parse(P1);
    CHECK(p.strictly_labeled());
    for (uint64_t r = 0; r < 4; ++r) {
        auto succs = machine_step(p, MachineConfig{*p.labels.find("l0"), {r}});
        CHECK(succs.size() <= 2);
    }

    MachineProgram relaxed = parse(
        "registers 1\noutputs 1\nkind general\ninit l0\n"
        "l0: ADD 1 l0 l1\n"
        "l0: ADD 1 l1 l1\n"
        "l1: HALT\n");
    CHECK_FALSE(relaxed.strictly_labeled());
}

TEST_CASE("blind results re-checked for zeros beyond the output registers") {
    MachineProgram p = parse(
        "registers 2\noutputs 1\nkind blind\ninit l0\n"
        "l0: ADD 1 l1 l1\n"
        "l0: ADD 2 l1 l1\n"
        "l1: HALT\n");
    std::set<MachineConfig, bool (*)(const MachineConfig&, const MachineConfig&)> accepting(
        config_less);
    std::set<ResultVector> vectors;
    brute_runs(p, initial_config(p), 6, vectors, &accepting);
    for (const MachineConfig& c : accepting) {
        for (uint32_t r = p.outputs; r < p.registers; ++r) { REQUIRE(c.regs[r] == 0); }
    }
    // The branch that bumps the working register is rejected.
    auto rs = machine_enumerate(p, SearchBudget{6, 10, 1000});
    CHECK(rs.vectors == vectors);
    CHECK(rs.vectors == std::set<ResultVector>{{1}});
}

TEST_CASE("determinism across runs and workers") {
    MachineProgram p = parse(P1);
    auto a = machine_enumerate(p, SearchBudget{9, 100, 1000}, 1);
    auto b = machine_enumerate(p, SearchBudget{9, 100, 1000}, 1);
    auto c = machine_enumerate(p, SearchBudget{9, 100, 1000}, 4);
    CHECK(a.vectors == b.vectors);
    CHECK(a.diagnostics == b.diagnostics);
    CHECK(a.vectors == c.vectors);
    CHECK(a.diagnostics == c.diagnostics);
}

TEST_CASE("program validation") {
    CHECK_THROWS_AS(parse("registers 1\noutputs 1\nkind general\ninit l0\nl0: ADD 1 l0 l0\n"),
                    ValidationError); // missing HALT
    CHECK_THROWS_AS(parse("registers 1\noutputs 2\nkind general\ninit l0\nl0: HALT\n"),
                    ValidationError); // outputs > registers
    CHECK_THROWS_AS(parse("registers 1\noutputs 1\nkind blind\ninit l0\nl0: SUB 1 q s\nq: HALT\n"),
                    ParseError); // SUB arity mismatched with kind
    CHECK_THROWS_AS(parse("registers 1\noutputs 1\nkind general\ninit l0\nl0: ADD 2 l1 l1\nl1: HALT\n"),
                    ParseError); // unknown register index
}

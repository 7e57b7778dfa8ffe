// tpvsim -- command line front end: run machines and systems, compile the
// constructions, compare a machine against its compiled system, export
// communication graphs.
//
// Exit codes: 0 success (and set equality for `compare`), 1 comparison
// mismatch, 2 usage, parse, or validation errors.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "tpv/compile.hpp"
#include "tpv/dot.hpp"
#include "tpv/error.hpp"
#include "tpv/machine.hpp"
#include "tpv/polarized.hpp"
#include "tpv/search.hpp"
#include "tpv/system.hpp"
#include "tpv/text.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) { throw tpv::Error("cannot open '" + path + "'"); }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) { throw tpv::Error("cannot open '" + path + "' for writing"); }
    out << content;
}

tpv::DerivationMode parse_mode(const std::string& mode) {
    if (mode == "sequ") { return tpv::DerivationMode::sequ; }
    if (mode == "smax") { return tpv::DerivationMode::smax; }
    throw tpv::Error("mode must be 'sequ' or 'smax'");
}

tpv::OutputStrategy parse_strategy(const std::string& strategy) {
    if (strategy == "halt") { return tpv::OutputStrategy::halt; }
    if (strategy == "term") { return tpv::OutputStrategy::term; }
    if (strategy == "halt-term") { return tpv::OutputStrategy::halt_term; }
    throw tpv::Error("strategy must be 'halt', 'term' or 'halt-term'");
}

tpv::Construction parse_construction(const std::string& name) {
    if (name == "thm1") { return tpv::Construction::rm_to_pv_smax; }
    if (name == "thm2") { return tpv::Construction::pbrm_to_pv_sequ; }
    if (name == "thm4") { return tpv::Construction::tpv_to_pbrm; }
    if (name == "thm5") { return tpv::Construction::rm_to_uptpv; }
    throw tpv::Error("construction must be one of thm1, thm2, thm4, thm5");
}

struct RunMachineArgs {
    std::string program;
    uint64_t max_steps = 0;
    uint64_t max_sum = 0;
    uint64_t max_states = 1000000;
    unsigned workers = 1;
};

int run_machine(const RunMachineArgs& a) {
    tpv::MachineProgram p = tpv::parse_machine(read_file(a.program));
    tpv::SearchBudget budget{a.max_steps, a.max_sum, a.max_states};
    tpv::ResultSet rs = tpv::machine_enumerate(p, budget, a.workers);
    std::cout << tpv::format_result_set(rs);
    return 0;
}

struct RunSystemArgs {
    std::string system;
    std::string mode = "sequ";
    std::string strategy = "term";
    uint64_t max_steps = 0;
    uint64_t max_size = 0;
    uint64_t max_states = 1000000;
    unsigned workers = 1;
    bool trace = false;
};

int run_system(const RunSystemArgs& a) {
    tpv::ParsedSystem parsed = tpv::parse_system(read_file(a.system));
    tpv::DerivationMode mode = parse_mode(a.mode);
    tpv::OutputStrategy strategy = parse_strategy(a.strategy);
    tpv::SearchBudget budget{a.max_steps, a.max_size, a.max_states};

    tpv::ResultSet rs;
    if (std::holds_alternative<tpv::TpvSystem>(parsed)) {
        const auto& sys = std::get<tpv::TpvSystem>(parsed);
        tpv::TraceFn trace;
        if (a.trace) {
            trace = [&sys](const tpv::TraceEvent& ev) {
                std::cerr << tpv::format_trace_event(sys, ev) << "\n";
            };
        }
        rs = tpv::tpv_enumerate(sys, mode, strategy, budget, a.workers, trace);
    } else {
        const auto& sys = std::get<tpv::PtpvSystem>(parsed);
        tpv::TraceFn trace;
        if (a.trace) {
            trace = [&sys](const tpv::TraceEvent& ev) {
                std::cerr << tpv::format_trace_event(sys.base, ev) << "\n";
            };
        }
        rs = tpv::ptpv_enumerate(sys, mode, strategy, budget, a.workers, trace);
    }
    std::cout << tpv::format_result_set(rs);
    return 0;
}

struct CompileArgs {
    std::string construction;
    std::string in;
    std::string out;
    std::string strategy = "halt-term";
};

int run_compile(const CompileArgs& a) {
    tpv::Construction c = parse_construction(a.construction);
    tpv::OutputStrategy strategy = parse_strategy(a.strategy);
    switch (c) {
        case tpv::Construction::rm_to_pv_smax: {
            auto p = tpv::parse_machine(read_file(a.in));
            write_file(a.out, tpv::print_system(tpv::compile_rm_to_pv_smax(p, strategy)));
            break;
        }
        case tpv::Construction::pbrm_to_pv_sequ: {
            auto p = tpv::parse_machine(read_file(a.in));
            write_file(a.out, tpv::print_system(tpv::compile_pbrm_to_pv_sequ(p, strategy)));
            break;
        }
        case tpv::Construction::tpv_to_pbrm: {
            auto parsed = tpv::parse_system(read_file(a.in));
            if (!std::holds_alternative<tpv::TpvSystem>(parsed)) {
                throw tpv::Error("thm4 expects a plain system file");
            }
            const auto& sys = std::get<tpv::TpvSystem>(parsed);
            tpv::MachineProgram m = tpv::compile_tpv_to_pbrm(sys);
            std::string text = tpv::print_machine(m);
            // Register <-> symbol mapping, as a comment trailer.
            std::vector<std::string> reg_names(sys.alphabet.size() + 1);
            {
                uint32_t next = 1;
                for (tpv::Symbol t : sys.terminals) { reg_names[next++] = sys.alphabet.name(t); }
                for (uint32_t id = 0; id < sys.alphabet.size(); ++id) {
                    const std::string& n = sys.alphabet.name(tpv::Symbol{id});
                    bool is_term = false;
                    for (tpv::Symbol t : sys.terminals) {
                        if (t.id == id) { is_term = true; }
                    }
                    if (!is_term) { reg_names[next++] = n; }
                }
            }
            for (uint32_t r = 1; r < reg_names.size(); ++r) {
                text += "# register " + std::to_string(r) + " = " + reg_names[r] + "\n";
            }
            write_file(a.out, text);
            break;
        }
        case tpv::Construction::rm_to_uptpv: {
            auto p = tpv::parse_machine(read_file(a.in));
            write_file(a.out, tpv::print_system(tpv::compile_rm_to_uptpv(p)));
            break;
        }
    }
    return 0;
}

struct CompareArgs {
    std::string construction;
    std::string machine;
    std::string system;
    uint64_t machine_steps = 0;
    uint64_t machine_sum = 0; // 0 = default to machine_steps
    uint64_t max_states = 1000000;
    std::string strategy; // empty = per-construction default
    unsigned workers = 1;
};

int print_difference(const tpv::ResultSet& machine_rs, const tpv::ResultSet& system_rs) {
    for (const auto& v : machine_rs.vectors) {
        if (!system_rs.vectors.count(v)) { std::cout << "machine only: " << tpv::format_vector(v) << "\n"; }
    }
    for (const auto& v : system_rs.vectors) {
        if (!machine_rs.vectors.count(v)) { std::cout << "system only: " << tpv::format_vector(v) << "\n"; }
    }
    return 1;
}

int run_compare(const CompareArgs& a) {
    tpv::Construction c = parse_construction(a.construction);

    if (c == tpv::Construction::tpv_to_pbrm) {
        if (a.system.empty()) { throw tpv::Error("thm4 comparison needs --system"); }
        auto parsed = tpv::parse_system(read_file(a.system));
        if (!std::holds_alternative<tpv::TpvSystem>(parsed)) {
            throw tpv::Error("thm4 expects a plain system file");
        }
        const auto& sys = std::get<tpv::TpvSystem>(parsed);
        tpv::MachineProgram m = tpv::compile_tpv_to_pbrm(sys);
        uint64_t steps = a.machine_steps ? a.machine_steps : 1000000;
        tpv::SearchBudget budget{steps, 1000000, a.max_states};
        tpv::ResultSet system_rs =
            tpv::tpv_enumerate(sys, tpv::DerivationMode::sequ, tpv::OutputStrategy::term, budget,
                               a.workers);
        tpv::ResultSet machine_rs = tpv::machine_enumerate(m, budget, a.workers);
        if (!system_rs.complete || !machine_rs.complete) {
            std::cerr << "comparison inconclusive: enumeration hit a budget limit\n";
            return 1;
        }
        if (system_rs.same_vectors(machine_rs)) {
            std::cout << "equal: " << system_rs.vectors.size() << " vectors (complete)\n";
            return 0;
        }
        return print_difference(machine_rs, system_rs);
    }

    if (a.machine.empty()) { throw tpv::Error("comparison needs --machine"); }
    if (a.machine_steps == 0) { throw tpv::Error("comparison needs --machine-steps"); }
    tpv::MachineProgram p = tpv::parse_machine(read_file(a.machine));
    tpv::SearchBudget machine_budget{a.machine_steps,
                                     a.machine_sum ? a.machine_sum : a.machine_steps,
                                     a.max_states};
    tpv::SearchBudget system_budget = tpv::matched_budgets(c, machine_budget);
    tpv::ResultSet machine_rs = tpv::machine_enumerate(p, machine_budget, a.workers);

    tpv::ResultSet system_rs;
    switch (c) {
        case tpv::Construction::rm_to_pv_smax: {
            tpv::OutputStrategy strategy =
                a.strategy.empty() ? tpv::OutputStrategy::halt_term : parse_strategy(a.strategy);
            tpv::TpvSystem sys = tpv::compile_rm_to_pv_smax(p, strategy);
            system_rs = tpv::tpv_enumerate(sys, tpv::DerivationMode::smax, strategy, system_budget,
                                           a.workers);
            break;
        }
        case tpv::Construction::pbrm_to_pv_sequ: {
            tpv::OutputStrategy strategy =
                a.strategy.empty() ? tpv::OutputStrategy::term : parse_strategy(a.strategy);
            tpv::TpvSystem sys = tpv::compile_pbrm_to_pv_sequ(p, strategy);
            system_rs = tpv::tpv_enumerate(sys, tpv::DerivationMode::sequ, strategy, system_budget,
                                           a.workers);
            break;
        }
        case tpv::Construction::rm_to_uptpv: {
            if (!a.strategy.empty() && a.strategy != "term") {
                throw tpv::Error("thm5 comparison supports only the 'term' strategy");
            }
            tpv::PtpvSystem sys = tpv::compile_rm_to_uptpv(p);
            system_rs = tpv::ptpv_enumerate(sys, tpv::DerivationMode::sequ,
                                            tpv::OutputStrategy::term, system_budget, a.workers);
            break;
        }
        case tpv::Construction::tpv_to_pbrm: break; // handled above
    }

    if (machine_rs.same_vectors(system_rs)) {
        std::cout << "equal: " << machine_rs.vectors.size() << " vectors\n";
        return 0;
    }
    return print_difference(machine_rs, system_rs);
}

struct GraphArgs {
    std::string system;
    bool dot = true;
};

int run_graph(const GraphArgs& a) {
    auto parsed = tpv::parse_system(read_file(a.system));
    if (std::holds_alternative<tpv::TpvSystem>(parsed)) {
        std::cout << tpv::emit_dot(std::get<tpv::TpvSystem>(parsed));
    } else {
        std::cout << tpv::emit_dot(std::get<tpv::PtpvSystem>(parsed));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tissue P system vesicle simulator"};
    app.require_subcommand(1);

    RunMachineArgs rm;
    CLI::App* run_machine_cmd = app.add_subcommand("run-machine", "enumerate a register machine");
    run_machine_cmd->add_option("--program", rm.program, "machine file")->required();
    run_machine_cmd->add_option("--max-steps", rm.max_steps, "step budget")->required();
    run_machine_cmd->add_option("--max-sum", rm.max_sum, "register sum budget")->required();
    run_machine_cmd->add_option("--max-states", rm.max_states, "visited state cap");
    run_machine_cmd->add_option("--workers", rm.workers, "worker threads");

    RunSystemArgs rs;
    CLI::App* run_system_cmd = app.add_subcommand("run-system", "enumerate a tissue system");
    run_system_cmd->add_option("--system", rs.system, "system file")->required();
    run_system_cmd->add_option("--mode", rs.mode, "sequ|smax")->required();
    run_system_cmd->add_option("--strategy", rs.strategy, "halt|term|halt-term")->required();
    run_system_cmd->add_option("--max-steps", rs.max_steps, "step budget")->required();
    run_system_cmd->add_option("--max-size", rs.max_size, "multiset size budget")->required();
    run_system_cmd->add_option("--max-states", rs.max_states, "visited state cap");
    run_system_cmd->add_option("--workers", rs.workers, "worker threads");
    run_system_cmd->add_flag("--trace", rs.trace, "print derivation steps to stderr");

    CompileArgs co;
    CLI::App* compile_cmd = app.add_subcommand("compile", "run one of the constructions");
    compile_cmd->add_option("--construction", co.construction, "thm1|thm2|thm4|thm5")->required();
    compile_cmd->add_option("--in", co.in, "input file")->required();
    compile_cmd->add_option("--out", co.out, "output file")->required();
    compile_cmd->add_option("--strategy", co.strategy, "output strategy for trap rules");

    CompareArgs cp;
    CLI::App* compare_cmd =
        app.add_subcommand("compare", "compile and check oracle equivalence under matched budgets");
    compare_cmd->add_option("--construction", cp.construction, "thm1|thm2|thm4|thm5")->required();
    compare_cmd->add_option("--machine", cp.machine, "machine file (thm1, thm2, thm5)");
    compare_cmd->add_option("--system", cp.system, "system file (thm4)");
    compare_cmd->add_option("--machine-steps", cp.machine_steps, "machine step budget");
    compare_cmd->add_option("--machine-sum", cp.machine_sum, "machine register sum budget");
    compare_cmd->add_option("--max-states", cp.max_states, "visited state cap");
    compare_cmd->add_option("--strategy", cp.strategy, "output strategy override");
    compare_cmd->add_option("--workers", cp.workers, "worker threads");

    GraphArgs gr;
    CLI::App* graph_cmd = app.add_subcommand("graph", "emit the communication graph");
    graph_cmd->add_option("--system", gr.system, "system file")->required();
    graph_cmd->add_flag("--dot", gr.dot, "DOT output (the only format)");

    try {
        app.parse(argc, argv);
        if (run_machine_cmd->parsed()) { return run_machine(rm); }
        if (run_system_cmd->parsed()) { return run_system(rs); }
        if (compile_cmd->parsed()) { return run_compile(co); }
        if (compare_cmd->parsed()) { return run_compare(cp); }
        if (graph_cmd->parsed()) { return run_graph(gr); }
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { return app.exit(e); } // --help
        app.exit(e);
        return 2;
    } catch (const tpv::ContractError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

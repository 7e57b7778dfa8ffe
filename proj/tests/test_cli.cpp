// test_cli.cpp -- end-to-end checks of the command line surface: output
// bytes, exit codes, trace stream, and compile round trips through files.
//
// Usage: test_cli <path-to-tpvsim> <data-dir>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

std::string g_cli;
std::string g_data;
int g_failures = 0;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args, bool merge_stderr = false) {
    std::string cmd = g_cli + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    RunResult r;
    if (!pipe) { return r; }
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) { r.out.append(buf.data(), n); }
    int status = pclose(pipe);
    r.exit_code = WEXITSTATUS(status);
    return r;
}

void check(bool ok, const std::string& what) {
    if (!ok) {
        std::cerr << "FAIL: " << what << "\n";
        ++g_failures;
    }
}

std::string data(const std::string& name) { return g_data + "/" + name; }

} // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: test_cli <path-to-tpvsim> <data-dir>\n";
        return 64;
    }
    g_cli = argv[1];
    g_data = argv[2];

    // run-machine: sorted vectors plus diagnostics footer.
    {
        auto r = run("run-machine --program " + data("p1.rm") + " --max-steps 4 --max-sum 10");
        check(r.exit_code == 0, "run-machine exit code");
        check(r.out.substr(0, 6) == "1\n2\n3\n", "run-machine vectors: " + r.out);
        check(r.out.find("# steps_pruned=") != std::string::npos, "run-machine footer");
    }

    // run-system on the trivial one-cell system: the single line `1`.
    {
        auto r = run("run-system --system " + data("hand1.tpv") +
                     " --mode sequ --strategy halt --max-steps 5 --max-size 5");
        check(r.exit_code == 0, "run-system exit code");
        check(r.out.substr(0, 2) == "1\n", "run-system vector: " + r.out);
        check(r.out.find("complete=true") != std::string::npos, "run-system complete flag");
    }

    // Byte-identical output across runs and worker counts.
    {
        std::string args = "run-system --system " + data("hand2.tpv") +
                           " --mode sequ --strategy term --max-steps 20 --max-size 10";
        auto a = run(args + " --workers 1");
        auto b = run(args + " --workers 1");
        auto c = run(args + " --workers 4");
        check(a.out == b.out, "output differs between identical runs");
        check(a.out == c.out, "output differs between worker counts");
        check(a.out.substr(0, 6) == "0\n1\n2\n", "hand2 vectors: " + a.out);
    }

    // Trace goes to stderr and mentions each step.
    {
        auto quiet = run("run-system --system " + data("hand1.tpv") +
                         " --mode sequ --strategy halt --max-steps 5 --max-size 5 --trace");
        auto merged = run("run-system --system " + data("hand2.tpv") +
                              " --mode sequ --strategy term --max-steps 20 --max-size 10 --trace",
                          true);
        check(quiet.out.find("step ") == std::string::npos, "trace leaked into stdout");
        check(merged.out.find("step 1: cell c0 {f*3} --[") != std::string::npos,
              "trace line missing: " + merged.out.substr(0, 200));
    }

    // compare: equality exits 0; a genuine mismatch exits 1 and prints the
    // symmetric difference; usage errors exit 2.
    {
        auto ok = run("compare --construction thm1 --machine " + data("p1.rm") +
                      " --machine-steps 10");
        check(ok.exit_code == 0, "compare equal exit code");

        // A general machine that halts with a dirty working register: the
        // machine records the projection, the halt_term system refuses.
        std::string dirty = "/tmp/tpv_dirty.rm";
        std::ofstream(dirty) << "registers 2\noutputs 1\nkind general\ninit l0\n"
                                "l0: ADD 2 lh lh\nlh: HALT\n";
        auto bad = run("compare --construction thm1 --machine " + dirty + " --machine-steps 5");
        check(bad.exit_code == 1, "compare mismatch exit code");
        check(bad.out.find("machine only: 0") != std::string::npos,
              "compare difference: " + bad.out);

        auto usage = run("compare --construction thm9 --machine " + data("p1.rm") +
                         " --machine-steps 5");
        check(usage.exit_code == 2, "compare usage exit code");
        auto missing = run("compare --construction thm1 --machine /nonexistent --machine-steps 5");
        check(missing.exit_code == 2, "compare missing file exit code");
        auto no_steps = run("compare --construction thm1 --machine " + data("p1.rm"));
        check(no_steps.exit_code == 2, "compare without steps exit code");
    }

    // compare for the system-to-machine construction runs to completeness.
    {
        auto r = run("compare --construction thm4 --system " + data("hand3.tpv"));
        check(r.exit_code == 0, "thm4 compare exit code");
        check(r.out.find("complete") != std::string::npos, "thm4 compare report: " + r.out);
    }

    // compile writes files that parse and re-run.
    {
        auto c1 = run("compile --construction thm1 --in " + data("ztrap.rm") +
                      " --out /tmp/tpv_ztrap.tpv");
        check(c1.exit_code == 0, "compile thm1 exit code");
        auto rerun = run("run-system --system /tmp/tpv_ztrap.tpv --mode smax --strategy halt-term"
                         " --max-steps 21 --max-size 10");
        check(rerun.exit_code == 0, "compiled system runs");
        check(rerun.out.substr(0, 2) == "1\n", "compiled system result: " + rerun.out);

        auto c4 = run("compile --construction thm4 --in " + data("hand2.tpv") +
                      " --out /tmp/tpv_hand2.rm");
        check(c4.exit_code == 0, "compile thm4 exit code");
        auto rerun4 = run("run-machine --program /tmp/tpv_hand2.rm --max-steps 30 --max-sum 30");
        check(rerun4.exit_code == 0, "compiled machine runs");
        check(rerun4.out.substr(0, 6) == "0\n1\n2\n", "compiled machine result: " + rerun4.out);

        auto c5 = run("compile --construction thm5 --in " + data("ztrap.rm") +
                      " --out /tmp/tpv_ztrap_up.tpv");
        check(c5.exit_code == 0, "compile thm5 exit code");
        auto rerun5 = run("run-system --system /tmp/tpv_ztrap_up.tpv --mode sequ --strategy term"
                          " --max-steps 15 --max-size 7");
        check(rerun5.exit_code == 0, "compiled polarized system runs");
        check(rerun5.out.substr(0, 2) == "1\n", "compiled polarized result: " + rerun5.out);
    }

    // graph: DOT text on stdout, undirected for the polarized construction.
    {
        auto g = run("graph --system " + data("trap2.tpv") + " --dot");
        check(g.exit_code == 0, "graph exit code");
        check(g.out.find("digraph system {") == 0, "graph digraph header: " + g.out);
        auto gu = run("graph --system /tmp/tpv_ztrap_up.tpv --dot");
        check(gu.out.find("graph system {") == 0, "graph undirected header");
        check(gu.out.find("<+>") != std::string::npos, "graph polarization marks");
    }

    // Malformed input: exit 2 with a message on stderr.
    {
        std::string broken = "/tmp/tpv_broken.rm";
        std::ofstream(broken) << "registers 1\noutputs 1\nkind general\ninit l0\nl0: FOO\n";
        auto r = run("run-machine --program " + broken + " --max-steps 3 --max-sum 3", true);
        check(r.exit_code == 2, "malformed machine exit code");
        check(r.out.find("error:") != std::string::npos, "malformed machine message");
    }

    if (g_failures == 0) {
        std::cout << "cli surface ok\n";
        return 0;
    }
    std::cout << g_failures << " cli check(s) failed\n";
    return 1;
}

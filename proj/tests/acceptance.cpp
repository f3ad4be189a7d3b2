// Acceptance run: one PASS/FAIL line per criterion.
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "quon/dsl.hpp"
#include "quon/qudit_core.hpp"
#include "quon/suites.hpp"

using namespace quon;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string note;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char *f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

// Runs suites and summarizes: every record must pass.
Outcome suites(const std::vector<std::string> &names, const std::vector<int> &dims, int trials,
               const std::function<bool(const CheckRecord &)> &keep = nullptr) {
    SuiteOptions o;
    o.dims = dims;
    o.trials = trials;
    Outcome out;
    std::size_t count = 0;
    double worst = 0.0;
    for (const auto &name : names) {
        for (const auto &r : run_suite(name, o)) {
            if (keep && !keep(r)) {
                continue;
            }
            count++;
            worst = std::max(worst, r.max_error);
            if (r.status != CheckStatus::Pass) {
                out.pass = false;
                out.note += " [" + r.name + " " + to_string(r.status) + " " + r.detail + "]";
            }
        }
    }
    if (count == 0) {
        out.pass = false;
    }
    out.note = std::to_string(count) + " checks, max error " + fmt("%.2e", worst) + out.note;
    return out;
}

struct Run {
    int code = -1;
    std::string out;
};

Run run_cli(const std::string &args) {
    std::string cmd = std::string("'") + QUON_CLI_PATH + "' " + args + " 2>/dev/null";
    Run r;
    FILE *p = ::popen(cmd.c_str(), "r");
    if (p == nullptr) {
        return r;
    }
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) {
        r.out.append(buf, n);
    }
    int status = ::pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome timed(double limit_s, const std::function<Outcome()> &body) {
    auto t0 = Clock::now();
    Outcome o = body();
    double t = seconds_since(t0);
    if (limit_s > 0 && t >= limit_s) {
        o.pass = false;
        o.note += ", over the " + fmt("%.0f", limit_s) + " s budget";
    }
    o.note += ", " + fmt("%.2f", t) + " s";
    return o;
}

Outcome criterion_clifford() {
    Outcome o;
    auto c2 = clifford_order(2, 100000);
    auto c3 = clifford_order(3, 100000);
    o.pass = c2 == 24 && c3 == 216;
    o.note = "d=2: " + std::to_string(c2) + ", d=3: " + std::to_string(c3);
    return o;
}

Outcome criterion_cli() {
    const fs::path src = QUON_SOURCE_DIR;
    auto tmp = fs::temp_directory_path();
    auto a = tmp / ("quon_acceptance_a_" + std::to_string(::getpid()) + ".json");
    auto b = tmp / ("quon_acceptance_b_" + std::to_string(::getpid()) + ".json");
    const std::string args = "check --dims 2,3,4,5 --tol 1e-9 --seed 42 --no-runtime --report ";
    Outcome o;
    auto t0 = Clock::now();
    auto first = run_cli(args + "'" + a.string() + "'");
    double t = seconds_since(t0);
    auto second = run_cli(args + "'" + b.string() + "'");
    if (first.code != 0 || second.code != 0) {
        o.pass = false;
        o.note += " check exit codes " + std::to_string(first.code) + "/" + std::to_string(second.code) + ";";
    }
    if (t >= 120.0) {
        o.pass = false;
        o.note += " full check over 2 min;";
    }
    if (slurp(a) != slurp(b) || slurp(a).empty()) {
        o.pass = false;
        o.note += " reports differ;";
    }
    int goldens = 0;
    for (const auto &entry : fs::directory_iterator(src / "samples")) {
        if (entry.path().extension() != ".quon") {
            continue;
        }
        auto stem = entry.path().stem().string();
        auto quoted = "'" + entry.path().string() + "'";
        std::vector<std::pair<std::string, std::string>> got = {
            {".parse", render(parse_document(slurp(entry.path())))},
            {".eval", run_cli("eval " + quoted).out},
            {".normalize", run_cli("normalize --seed 42 " + quoted).out},
        };
        for (const auto &[ext, text] : got) {
            auto golden = src / "tests" / "golden" / (stem + ext);
            goldens++;
            if (!fs::exists(golden) || slurp(golden) != text) {
                o.pass = false;
                o.note += " golden mismatch " + stem + ext + ";";
            }
        }
    }
    fs::remove(a);
    fs::remove(b);
    o.note = "full check " + fmt("%.2f", t) + " s, reports identical, " + std::to_string(goldens) + " golden files" +
             o.note;
    return o;
}

}  // namespace

int main() {
    const std::vector<int> d2to5 = {2, 3, 4, 5};
    struct Criterion {
        int id;
        std::string title;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> criteria = {
        {1, "parafermion relations, para-isotopy, twisted product, adjoint, charge, JW",
         [&] { return timed(10.0, [&] { return suites({"pf", "jw"}, d2to5, 20); }); }},
        {2, "JW isomorphism independence and multiplicativity",
         [&] { return suites({"jw"}, {2, 3}, 20); }},
        {3, "Clifford group orders 24 and 216", [&] { return timed(30.0, criterion_clifford); }},
        {4, "quon bases, Pauli pictures, braids, F and G words, string Fourier",
         [&] { return suites({"quon"}, d2to5, 20); }},
        {5, "joint relation over random T and two ONBs", [&] { return suites({"joint"}, {2, 3}, 50); }},
        {6, "circles, charged circles, genus, Hopf both paths",
         [&] {
             auto genus = suites({"genus"}, d2to5, 20);
             auto hopf = suites({"rules"}, d2to5, 20, [](const CheckRecord &r) {
                 return r.name.rfind("rules.genus.", 0) == 0;
             });
             return Outcome{genus.pass && hopf.pass, genus.note + "; " + hopf.note};
         }},
        {7, "Hopf, Frobenius and duality rules", [&] { return suites({"rules"}, d2to5, 20); }},
        {8, "CNOT from spiders and from the compiled quon picture", [&] { return suites({"cnot"}, d2to5, 20); }},
        {9, "GHZ, Max and COPY compilations, Bell states", [&] { return suites({"resources"}, d2to5, 20); }},
        {10, "teleportation for d up to 7", [&] { return suites({"teleport"}, {2, 3, 4, 5, 6, 7}, 20); }},
        {11, "CLI check runtime, deterministic reports, golden files", criterion_cli},
    };
    int failed = 0;
    for (const auto &c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = Outcome{false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s  criterion %2d  %s (%s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), o.note.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}

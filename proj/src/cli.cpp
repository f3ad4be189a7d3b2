#include "quon/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "quon/dsl.hpp"
#include "quon/error.hpp"
#include "quon/pf_algebra.hpp"
#include "quon/quon_calculus.hpp"
#include "quon/qudit_core.hpp"
#include "quon/report.hpp"
#include "quon/spider_engine.hpp"
#include "quon/suites.hpp"

namespace quon {

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Options {
    std::string config;
    std::vector<int> dims{2, 3, 4, 5};
    int dim = 0;
    double tol = 1e-9;
    std::uint64_t seed = 42;
    std::size_t cap = 1000000;
    int max_len = 4;
    int trials = 20;
    std::string report;
    std::string target;
    std::vector<std::string> files;
    bool no_runtime = false;
};

struct UsageError : Error {
    using Error::Error;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot read '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw UsageError("cannot write '" + path + "'");
    }
    out << text;
}

std::vector<int> parse_dims(const std::string &text) {
    std::vector<int> dims;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            int d = std::stoi(item, &used);
            if (used != item.size() || d < 1) {
                throw std::invalid_argument(item);
            }
            dims.push_back(d);
        } catch (const std::exception &) {
            throw UsageError("bad dimension list '" + text + "'");
        }
    }
    if (dims.empty()) {
        throw UsageError("empty dimension list");
    }
    return dims;
}

// Values from the configuration file fill options the command line left unset.
void apply_config(Options &o, const CLI::App &sub) {
    if (o.config.empty()) {
        return;
    }
    for (const auto &[key, value] : parse_config(read_file(o.config))) {
        auto unset = [&](const std::string &flag) {
            auto *opt = sub.get_option_no_throw(flag);
            return opt == nullptr || opt->count() == 0;
        };
        try {
            if (key == "dims") {
                if (unset("--dims")) {
                    o.dims = parse_dims(value);
                }
            } else if (key == "tol") {
                if (unset("--tol")) {
                    o.tol = std::stod(value);
                }
            } else if (key == "seed") {
                if (unset("--seed")) {
                    o.seed = std::stoull(value);
                }
            } else if (key == "trials") {
                if (unset("--trials")) {
                    o.trials = std::stoi(value);
                }
            } else {
                throw UsageError("unknown configuration key '" + key + "'");
            }
        } catch (const std::logic_error &) {
            throw UsageError("bad value for configuration key '" + key + "'");
        }
    }
}

std::string sci(double x) {
    if (!std::isfinite(x)) {
        return "inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

void print_records(const std::vector<CheckRecord> &records) {
    std::size_t failed = 0;
    for (const auto &r : records) {
        std::string status = to_string(r.status);
        for (auto &c : status) {
            c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        }
        std::printf("%-5s  %-44s  %s", status.c_str(), r.name.c_str(), sci(r.max_error).c_str());
        if (!r.detail.empty()) {
            std::printf("  %s", r.detail.c_str());
        }
        std::printf("\n");
        failed += r.status != CheckStatus::Pass;
    }
    std::printf("%zu checks, %zu failed\n", records.size(), failed);
}

int finish(const Options &o, const std::string &command, const std::vector<CheckRecord> &records,
           const std::vector<int> &dims) {
    print_records(records);
    if (!o.report.empty()) {
        ReportInfo info{command, dims, o.tol, o.seed, o.files};
        write_file(o.report, report_json(info, records, !o.no_runtime));
    }
    return all_pass(records) ? kExitPass : kExitFail;
}

int cmd_check(const Options &o) {
    if (o.files.empty()) {
        SuiteOptions so;
        so.dims = o.dims;
        so.tol = Tolerance{o.tol};
        so.seed = o.seed;
        so.trials = o.trials;
        return finish(o, "check", run_all_suites(so), o.dims);
    }
    std::vector<CheckRecord> records;
    std::vector<int> dims;
    for (const auto &path : o.files) {
        auto doc = parse_document(read_file(path));
        std::optional<int> fallback;
        if (o.dim > 0) {
            fallback = o.dim;
        }
        auto outcomes = run_document_checks(doc, Tolerance{o.tol}, fallback);
        dims.push_back(doc.dim().value_or(o.dim));
        std::string stem = std::filesystem::path(path).filename().string();
        for (const auto &c : outcomes) {
            CheckRecord r;
            r.name = stem + ":" + std::to_string(c.line);
            r.status = c.error ? CheckStatus::Error : (c.pass ? CheckStatus::Pass : CheckStatus::Fail);
            r.max_error = c.max_error;
            r.scalar = c.scalar;
            r.detail = c.error ? c.message : c.name;
            records.push_back(std::move(r));
        }
    }
    return finish(o, "check", records, dims);
}

std::optional<int> fallback_dim(const Options &o) {
    if (o.dim > 0) {
        return o.dim;
    }
    return std::nullopt;
}

int cmd_eval(const Options &o) {
    for (const auto &path : o.files) {
        auto doc = parse_document(read_file(path));
        DocumentEvaluator ev(doc, fallback_dim(o));
        for (const auto &s : doc.statements) {
            if (s.kind != Statement::Kind::Eval) {
                continue;
            }
            auto t = eval_tensor(ev.lower(s.lhs));
            std::printf("eval %s\n", render(s.lhs).c_str());
            std::printf("shape %d -> %d\n", t.in_legs(), t.out_legs());
            std::printf("%s\n", format_tensor(t).c_str());
        }
    }
    return kExitPass;
}

int cmd_normalize(const Options &o) {
    bool ok = true;
    for (const auto &path : o.files) {
        auto doc = parse_document(read_file(path));
        DocumentEvaluator ev(doc, fallback_dim(o));
        for (const auto &s : doc.statements) {
            if (s.kind != Statement::Kind::Eval) {
                continue;
            }
            auto g = ev.lower(s.lhs);
            auto n = normalize(g);
            auto alt = normalize_randomized(g, o.seed);
            bool sound = max_deviation(eval_tensor(n.diagram), eval_tensor(g)) <= o.tol;
            bool confluent = diagram_signature(n.diagram) == diagram_signature(alt.diagram);
            ok = ok && sound && confluent;
            std::printf("normalize %s\n", render(s.lhs).c_str());
            std::printf("steps %d\n", n.steps);
            std::printf("%s", describe(n.diagram).c_str());
            std::printf("semantics %s\n", sound ? "preserved" : "CHANGED");
            std::printf("confluent %s\n", confluent ? "yes" : "no");
        }
    }
    return ok ? kExitPass : kExitFail;
}

int require_dim(const Options &o) {
    if (o.dim < 1) {
        throw UsageError("--dim is required");
    }
    return o.dim;
}

int cmd_clifford(const Options &o) {
    int d = require_dim(o);
    try {
        std::printf("%zu\n", clifford_order(d, o.cap));
    } catch (const CapExceeded &e) {
        std::fprintf(stderr, "quon: %s\n", e.what());
        return kExitFail;
    }
    return kExitPass;
}

int cmd_teleport(const Options &o) {
    int d = require_dim(o);
    auto fam = teleport_frozen_correction(d);
    std::printf("teleport d=%d trials=%d seed=%llu\n", d, o.trials, static_cast<unsigned long long>(o.seed));
    std::printf("correction X^(%d a + %d b) Z^(%d a + %d b)%s\n", fam.ua, fam.ub, fam.va, fam.vb,
                fam.c ? " F2" : "");
    std::vector<CheckRecord> records;
    for (int a = 0; a < d; a++) {
        for (int b = 0; b < d; b++) {
            CheckRecord r;
            r.name = "teleport.d" + std::to_string(d) + ".a" + std::to_string(a) + ".b" + std::to_string(b);
            double worst = 1.0;
            std::string word;
            for (int t = 0; t < o.trials; t++) {
                auto rep = teleport_run(d, random_state(d, o.seed + static_cast<std::uint64_t>(t)), a, b);
                worst = std::min(worst, rep.fidelity);
                word = rep.correction;
            }
            r.max_error = 1.0 - worst;
            r.status = r.max_error <= o.tol ? CheckStatus::Pass : CheckStatus::Fail;
            r.detail = word;
            std::printf("outcome (%d,%d)  min fidelity %.12f  correction %s\n", a, b, worst, word.c_str());
            records.push_back(std::move(r));
        }
    }
    bool pass = all_pass(records);
    std::printf("%s\n", pass ? "all outcomes pass" : "some outcomes FAIL");
    if (!o.report.empty()) {
        ReportInfo info{"teleport", {d}, o.tol, o.seed, {}};
        write_file(o.report, report_json(info, records, !o.no_runtime));
    }
    return pass ? kExitPass : kExitFail;
}

int cmd_search(const Options &o) {
    int d = require_dim(o);
    auto name = parse_gate_name(o.target);
    if (!name || *name == GateName::CNOT) {
        throw UsageError("--target must be one of X, Y, Z, F, G, F2");
    }
    auto target = gate(d, *name);
    try {
        auto w = find_word(d, target, o.max_len, Tolerance{o.tol});
        auto phase = compare_up_to_scalar(eval_word(w), target, Tolerance{o.tol});
        std::printf("word %s\n", w.gens.empty() ? "(empty)" : to_string(w).c_str());
        std::printf("length %zu\n", w.gens.size());
        std::printf("phase %s\n", format_complex(phase.value_or(cplx{0.0})).c_str());
    } catch (const NotFound &) {
        std::printf("no word of length <= %d\n", o.max_len);
        return kExitFail;
    }
    return kExitPass;
}

int cmd_pf(const Options &o) {
    int d = require_dim(o);
    auto r = roots(d);
    const int n = 2;
    auto c1 = pf_generator(d, n, 1, 1);
    auto c2 = pf_generator(d, n, 2, 1);
    std::printf("PF_%d of order %d, q = %s\n", n, d, format_complex(r.q).c_str());
    std::printf("c1^%d = %s\n", d, to_string(pf_power(c1, d)).c_str());
    std::printf("c1 c2 = %s\n", to_string(pf_mul(c1, c2)).c_str());
    std::printf("c2 c1 = %s\n", to_string(pf_mul(c2, c1)).c_str());
    std::printf("twisted(c1, c2) = %s\n", to_string(pf_twisted_mul(c1, c2)).c_str());
    std::printf("adjoint(c1 c2) = %s\n", to_string(pf_adjoint(pf_mul(c1, c2))).c_str());
    auto mixed = pf_add(c1, pf_power(c1, 2));
    auto ch = pf_charge(mixed);
    std::printf("charge(c1 + c1^2) = %s\n", ch.homogeneous() ? std::to_string(*ch.value).c_str() : "mixed");
    std::printf("charge(c1 c2^%d) = %d\n", d - 1, *pf_charge(pf_mul(c1, pf_power(c2, d - 1))).value);
    std::printf("jw(c1) = %s\n", format_tensor(jw_rep(c1)).c_str());
    std::printf("jw(c2) = %s\n", format_tensor(jw_rep(c2)).c_str());
    return kExitPass;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_config(const std::string &text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        lineno++;
        std::string t = trim(line.substr(0, line.find('#')));
        if (t.empty()) {
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ParseError(lineno, 1, "expected 'key = value'");
        }
        out.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return out;
}

int run_cli(int argc, const char *const *argv) {
    Options o;
    std::string dims_text;
    CLI::App app{"Quon diagram calculus: evaluation, rewriting and verification"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.require_subcommand(1);
    app.add_option("--config", o.config, "key = value file with dims, tol, seed, trials");

    auto add_dims = [&](CLI::App *s) { s->add_option("--dims", dims_text, "comma-separated dimensions"); };
    auto add_dim = [&](CLI::App *s, bool required) {
        auto *opt = s->add_option("--dim", o.dim, "qudit dimension")->check(CLI::Range(1, 64));
        if (required) {
            opt->required();
        }
    };
    auto add_tol = [&](CLI::App *s) { s->add_option("--tol", o.tol, "comparison tolerance")->check(CLI::PositiveNumber); };
    auto add_seed = [&](CLI::App *s) { s->add_option("--seed", o.seed, "random seed"); };
    auto add_report = [&](CLI::App *s) {
        s->add_option("--report", o.report, "write a JSON report here");
        s->add_flag("--no-runtime", o.no_runtime, "write runtime_ms as 0 in the report");
    };
    auto add_trials = [&](CLI::App *s) { s->add_option("--trials", o.trials, "random instances")->check(CLI::Range(1, 100000)); };

    auto *check = app.add_subcommand("check", "run the built-in suites, or the checks of .quon files");
    check->add_option("files", o.files, ".quon files")->check(CLI::ExistingFile);
    add_dims(check);
    add_dim(check, false);
    add_tol(check);
    add_seed(check);
    add_trials(check);
    add_report(check);

    auto *eval = app.add_subcommand("eval", "print the tensors of the eval statements of .quon files");
    eval->add_option("files", o.files, ".quon files")->required()->check(CLI::ExistingFile);
    add_dim(eval, false);

    auto *norm = app.add_subcommand("normalize", "normalize the eval statements of .quon files");
    norm->add_option("files", o.files, ".quon files")->required()->check(CLI::ExistingFile);
    add_dim(norm, false);
    add_tol(norm);
    add_seed(norm);

    auto *cliff = app.add_subcommand("clifford", "order of the one-qudit Clifford group");
    add_dim(cliff, true);
    cliff->add_option("--cap", o.cap, "give up beyond this many elements")->check(CLI::PositiveNumber);

    auto *tele = app.add_subcommand("teleport", "teleport random states through every outcome");
    add_dim(tele, true);
    add_trials(tele);
    add_seed(tele);
    add_tol(tele);
    add_report(tele);

    auto *search = app.add_subcommand("search", "shortest braid word for a one-qudit gate");
    add_dim(search, true);
    search->add_option("--target", o.target, "gate: X, Y, Z, F, G or F2")->required();
    search->add_option("--max-len", o.max_len, "longest word tried")->check(CLI::Range(0, 12));
    add_tol(search);

    auto *pf = app.add_subcommand("pf", "parafermion algebra demo on two sites");
    add_dim(pf, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        CLI::App *sub = app.get_subcommands().front();
        if (!dims_text.empty()) {
            o.dims = parse_dims(dims_text);
        }
        apply_config(o, *sub);
        if (!(o.tol > 0.0)) {
            throw UsageError("tolerance must be positive");
        }
        std::fflush(stdout);
        int code = kExitUsage;
        if (sub == check) {
            code = cmd_check(o);
        } else if (sub == eval) {
            code = cmd_eval(o);
        } else if (sub == norm) {
            code = cmd_normalize(o);
        } else if (sub == cliff) {
            code = cmd_clifford(o);
        } else if (sub == tele) {
            code = cmd_teleport(o);
        } else if (sub == search) {
            code = cmd_search(o);
        } else if (sub == pf) {
            code = cmd_pf(o);
        }
        std::fflush(stdout);
        return code;
    } catch (const ParseError &e) {
        std::fflush(stdout);
        std::fprintf(stderr, "quon: parse error: %s\n", e.what());
        return kExitUsage;
    } catch (const UsageError &e) {
        std::fflush(stdout);
        std::fprintf(stderr, "quon: %s\n", e.what());
        return kExitUsage;
    } catch (const InvalidDimension &e) {
        std::fflush(stdout);
        std::fprintf(stderr, "quon: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception &e) {
        std::fflush(stdout);
        std::fprintf(stderr, "quon: error: %s\n", e.what());
        return kExitFail;
    }
}

}  // namespace quon

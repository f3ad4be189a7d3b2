#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "quon/cli.hpp"
#include "quon/dsl.hpp"
#include "quon/error.hpp"

using namespace quon;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = QUON_SOURCE_DIR;
const std::string kCli = QUON_CLI_PATH;

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Run run(const std::string &args) {
    static int counter = 0;
    fs::path err_file = fs::temp_directory_path() / ("quon_cli_err_" + std::to_string(::getpid()) + "_" +
                                                     std::to_string(counter++));
    std::string cmd = "'" + kCli + "' " + args + " 2>'" + err_file.string() + "'";
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
    r.err = slurp(err_file);
    fs::remove(err_file);
    return r;
}

fs::path temp_file(const std::string &name, const std::string &content) {
    auto p = fs::temp_directory_path() / (std::to_string(::getpid()) + "_" + name);
    std::ofstream(p, std::ios::binary) << content;
    return p;
}

std::string sample(const std::string &name) {
    return (kSource / "samples" / name).string();
}

// Compares against tests/golden/<name>; QUON_UPDATE_GOLDEN=1 rewrites the file.
void expect_golden(const std::string &name, const std::string &actual) {
    auto path = kSource / "tests" / "golden" / name;
    if (std::getenv("QUON_UPDATE_GOLDEN") != nullptr) {
        fs::create_directories(path.parent_path());
        std::ofstream(path, std::ios::binary) << actual;
    }
    ASSERT_TRUE(fs::exists(path)) << path;
    EXPECT_EQ(slurp(path), actual) << name;
}

const std::vector<std::string> kSamples = {"spiders", "resources", "braids", "normalize"};

}  // namespace

TEST(Parse, Statements) {
    auto doc = parse_document("dim 3\nlet c = bspider(1,2)   # copy\n\ncheck c ; wspider(2,1) == id(1) scalar d^(1/2)\n");
    ASSERT_EQ(doc.statements.size(), 3u);
    EXPECT_EQ(doc.dim(), 3);
    const auto &chk = doc.statements[2];
    EXPECT_EQ(chk.kind, Statement::Kind::Check);
    EXPECT_EQ(chk.line, 4);
    ASSERT_EQ(chk.lhs.kind, Expr::Kind::Seq);
    EXPECT_EQ(chk.lhs.parts[0].kind, Expr::Kind::Ref);
    EXPECT_EQ(chk.lhs.parts[1].kind, Expr::Kind::WSpider);
    ASSERT_TRUE(chk.scalar.has_value());
    EXPECT_LT(std::abs(chk.scalar->eval(3) - std::sqrt(3.0)), 1e-15);
}

TEST(Parse, ScaledCheckRendersBack) {
    auto doc = parse_document("check wspider(2,1) ; F == bspider(2,1) scalar d^(1/2)");
    ASSERT_EQ(doc.statements.size(), 1u);
    EXPECT_EQ(render(doc.statements[0]), "check wspider(2,1) ; F == bspider(2,1) scalar d^(1/2)");
}

TEST(Parse, BarBindsTighterThanSemicolon) {
    auto e = parse_document("eval id(1) | X ; CNOT").statements[0].lhs;
    ASSERT_EQ(e.kind, Expr::Kind::Seq);
    EXPECT_EQ(e.parts[0].kind, Expr::Kind::Par);
    EXPECT_EQ(e.parts[1].kind, Expr::Kind::Gate);
}

TEST(Parse, ComplexScalars) {
    auto s = [](const std::string &lit) {
        return parse_document("check X == X scalar " + lit).statements[0].scalar->eval(2);
    };
    EXPECT_EQ(s("2"), cplx(2.0));
    EXPECT_EQ(s("-1+0.5i"), cplx(-1.0, 0.5));
    EXPECT_EQ(s("0.25-i"), cplx(0.25, -1.0));
    EXPECT_EQ(s("i"), cplx(0.0, 1.0));
    EXPECT_LT(std::abs(s("d^(-3/2)") - std::pow(2.0, -1.5)), 1e-15);
}

TEST(Parse, ErrorsCarryPosition) {
    auto position = [](const std::string &text) {
        try {
            parse_document(text);
        } catch (const ParseError &e) {
            return std::make_pair(e.line, e.column);
        }
        return std::make_pair(0, 0);
    };
    EXPECT_EQ(position("dim 2\ncheck id(1) == \n"), std::make_pair(2, 16));
    EXPECT_EQ(position("eval foo"), std::make_pair(1, 6));
    EXPECT_EQ(position("let a = X\nlet a = Z"), std::make_pair(2, 5));
    EXPECT_EQ(position("eval X\ndim 3").first, 2);
    EXPECT_EQ(position("let cap = X").first, 1);
    EXPECT_EQ(position("check X == Z scalar d^(1/0)").first, 1);
    EXPECT_EQ(position("let w = braid: b1 q2"), std::make_pair(1, 19));
}

TEST(Parse, RenderRoundTrips) {
    for (const auto &name : kSamples) {
        auto doc = parse_document(slurp(sample(name + ".quon")));
        auto text = render(doc);
        EXPECT_EQ(parse_document(text), doc) << name;
        EXPECT_EQ(render(parse_document(text)), text) << name;
    }
}

TEST(Golden, Parse) {
    for (const auto &name : kSamples) {
        expect_golden(name + ".parse", render(parse_document(slurp(sample(name + ".quon")))));
    }
}

TEST(Golden, Eval) {
    for (const auto &name : kSamples) {
        auto r = run("eval '" + sample(name + ".quon") + "'");
        EXPECT_EQ(r.code, 0) << r.err;
        expect_golden(name + ".eval", r.out);
    }
}

TEST(Golden, Normalize) {
    for (const auto &name : kSamples) {
        auto r = run("normalize --seed 42 '" + sample(name + ".quon") + "'");
        EXPECT_EQ(r.code, 0) << r.err;
        expect_golden(name + ".normalize", r.out);
    }
}

TEST(Evaluator, Lowering) {
    auto doc = parse_document("dim 2\nlet bp = bell+\neval bp ; X | id(1)\neval cup ; cap");
    DocumentEvaluator ev(doc);
    EXPECT_EQ(ev.dim(), 2);
    auto t = eval_tensor(ev.lower(doc.statements[2].lhs));
    const double h = 1.0 / std::sqrt(2.0);
    Tensor expected(2, 2, 0, {0.0, h, h, 0.0});
    EXPECT_LT(max_deviation(t, expected), 1e-15);
    EXPECT_EQ(eval_tensor(ev.lower(doc.statements[3].lhs)).entries()[0], cplx(2.0));
    EXPECT_THROW(DocumentEvaluator(parse_document("eval X")), InvalidDimension);
    EXPECT_EQ(DocumentEvaluator(parse_document("eval X"), 5).dim(), 5);
}

TEST(Evaluator, ChecksReportFailures) {
    auto doc = parse_document("dim 3\ncheck X ; Z == Z ; X\ncheck X ; Z == Z ; X scalar d^(0)\ncheck X == CNOT");
    auto res = run_document_checks(doc, Tolerance{});
    ASSERT_EQ(res.size(), 3u);
    EXPECT_FALSE(res[0].pass);
    EXPECT_FALSE(res[1].pass);
    EXPECT_TRUE(res[2].error);
    auto ok = run_document_checks(parse_document("dim 3\ncheck Z ; X == X ; Z scalar " +
                                                 std::string("-0.5-0.86602540378443865i")),
                                  Tolerance{});
    EXPECT_TRUE(ok[0].pass) << ok[0].max_error;
}

TEST(Config, KeyValue) {
    auto kv = parse_config("# defaults\ndims = 2,3\n\ntol=1e-10  \nseed = 9 # trailing\n");
    ASSERT_EQ(kv.size(), 3u);
    EXPECT_EQ(kv[0], std::make_pair(std::string("dims"), std::string("2,3")));
    EXPECT_EQ(kv[1].second, "1e-10");
    EXPECT_EQ(kv[2].second, "9");
    EXPECT_THROW(parse_config("dims 2,3"), ParseError);
}

TEST(Cli, Clifford) {
    auto r = run("clifford --dim 3 --cap 100000");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "216\n");
    EXPECT_EQ(run("clifford --dim 2").out, "24\n");
    EXPECT_EQ(run("clifford --dim 3 --cap 10").code, 1);
}

TEST(Cli, Teleport) {
    auto r = run("teleport --dim 5 --trials 20 --seed 42");
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("outcome (4,4)"), std::string::npos);
    EXPECT_NE(r.out.find("all outcomes pass"), std::string::npos);
}

TEST(Cli, Search) {
    auto r = run("search --dim 3 --target F --max-len 4");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("word b1 b2 b1"), std::string::npos);
    EXPECT_NE(r.out.find("length 3"), std::string::npos);
    EXPECT_EQ(run("search --dim 3 --target CNOT").code, 2);
}

TEST(Cli, Pf) {
    auto r = run("pf --dim 3");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("c1^3 = (1,0) * 1"), std::string::npos);
}

TEST(Cli, ChecksOnSamplesPass) {
    for (const auto &name : kSamples) {
        auto r = run("check '" + sample(name + ".quon") + "'");
        EXPECT_EQ(r.code, 0) << name << "\n" << r.out << r.err;
    }
}

TEST(Cli, FailingCheckExitsOne) {
    auto f = temp_file("fail.quon", "dim 2\ncheck X == Z\n");
    auto r = run("check '" + f.string() + "'");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("FAIL"), std::string::npos);
    fs::remove(f);
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("check --dims 2,x").code, 2);
    EXPECT_EQ(run("check --tol -1").code, 2);
    EXPECT_EQ(run("clifford").code, 2);
    EXPECT_EQ(run("check --bogus").code, 2);
    EXPECT_EQ(run("eval /nonexistent/file.quon").code, 2);
    EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, ParseErrorExitsTwoWithPosition) {
    auto f = temp_file("bad.quon", "dim 2\ncheck id(1) == \n");
    auto r = run("check '" + f.string() + "'");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("line 2, column 16"), std::string::npos) << r.err;
    fs::remove(f);
}

TEST(Cli, BuiltinSuitesWithReport) {
    auto report = fs::temp_directory_path() / (std::to_string(::getpid()) + "_small.json");
    auto r = run("check --dims 2,3 --trials 3 --report '" + report.string() + "'");
    EXPECT_EQ(r.code, 0) << r.out;
    auto j = nlohmann::json::parse(slurp(report));
    EXPECT_EQ(j["schema"], 1);
    EXPECT_EQ(j["command"], "check");
    EXPECT_EQ(j["dims"], nlohmann::json::array({2, 3}));
    EXPECT_EQ(j["pass"], true);
    EXPECT_GT(j["records"].size(), 50u);
    for (const auto &rec : j["records"]) {
        EXPECT_EQ(rec["status"], "pass") << rec["name"];
        EXPECT_TRUE(rec.contains("max_error"));
        EXPECT_TRUE(rec.contains("runtime_ms"));
    }
    fs::remove(report);
}

TEST(Cli, ReportsAreByteDeterministic) {
    auto a = fs::temp_directory_path() / (std::to_string(::getpid()) + "_a.json");
    auto b = fs::temp_directory_path() / (std::to_string(::getpid()) + "_b.json");
    const std::string args = "check --dims 2,3 --trials 3 --seed 11 --no-runtime --report ";
    EXPECT_EQ(run(args + "'" + a.string() + "'").code, 0);
    EXPECT_EQ(run(args + "'" + b.string() + "'").code, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    fs::remove(a);
    fs::remove(b);
}

TEST(Cli, ConfigFileAndFlagPrecedence) {
    auto cfg = temp_file("quon.cfg", "dims = 2,3\ntol = 1e-10\nseed = 5\n");
    auto report = fs::temp_directory_path() / (std::to_string(::getpid()) + "_cfg.json");
    auto r = run("--config '" + cfg.string() + "' check --dims 2 --trials 2 --report '" + report.string() + "'");
    EXPECT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(slurp(report));
    EXPECT_EQ(j["dims"], nlohmann::json::array({2}));
    EXPECT_EQ(j["tolerance"], 1e-10);
    EXPECT_EQ(j["seed"], 5);
    auto bad = temp_file("bad.cfg", "colour = blue\n");
    EXPECT_EQ(run("--config '" + bad.string() + "' check --dims 2").code, 2);
    fs::remove(cfg);
    fs::remove(bad);
    fs::remove(report);
}

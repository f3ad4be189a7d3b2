#include <cmath>
#include <functional>

#include "quon/error.hpp"
#include "quon/spider_engine.hpp"

namespace quon {

namespace {

struct Builder {
    int d;

    SpiderDiagram black(int ins, int outs) const {
        return diagram_spider(d, SpiderColor::Black, ins, outs);
    }
    SpiderDiagram white(int ins, int outs) const {
        return diagram_spider(d, SpiderColor::White, ins, outs);
    }
    SpiderDiagram id(int n) const {
        return diagram_identity(d, n);
    }
    SpiderDiagram f(int power) const {
        return diagram_fbox(d, power);
    }
    static SpiderDiagram then(const SpiderDiagram &a, const SpiderDiagram &b) {
        return diagram_then(a, b);
    }
    static SpiderDiagram beside(const SpiderDiagram &a, const SpiderDiagram &b) {
        return diagram_beside(a, b);
    }
    SpiderDiagram scaled(SpiderDiagram g, cplx s) const {
        g.scalar *= s;
        return g;
    }
    // n copies of a one-wire diagram side by side
    SpiderDiagram tensor_power(const SpiderDiagram &g, int n) const {
        SpiderDiagram out = id(0);
        for (int i = 0; i < n; i++) {
            out = beside(out, g);
        }
        return out;
    }
};

// Rewrites lhs at its first match and compares it with rhs and with the rewrite.
RuleReport check_rewrite(const std::string &name, RewriteRule rule, const SpiderDiagram &lhs,
                         const SpiderDiagram &rhs, Tolerance tol) {
    auto before = eval_tensor(lhs);
    auto expected = eval_tensor(rhs);
    auto matches = find_matches(lhs, rule);
    if (matches.empty()) {
        return RuleReport{name, rule, lhs.d, std::numeric_limits<double>::infinity(), 0.0, false};
    }
    auto after = apply_rule(lhs, rule, matches.front());
    double dev = std::max(max_deviation(before, expected), max_deviation(eval_tensor(after), before));
    cplx scalar = after.scalar / lhs.scalar;
    return RuleReport{name, rule, lhs.d, dev, scalar, dev <= tol.eps};
}

// Tensor-level identity checked through normalize.
RuleReport check_normal(const std::string &name, RewriteRule rule, const SpiderDiagram &lhs,
                        const SpiderDiagram &rhs, Tolerance tol) {
    auto before = eval_tensor(lhs);
    auto n = normalize(lhs);
    double dev = std::max(max_deviation(before, eval_tensor(rhs)), max_deviation(eval_tensor(n.diagram), before));
    return RuleReport{name, rule, lhs.d, dev, n.diagram.scalar / lhs.scalar, dev <= tol.eps};
}

RuleReport check_equal(const std::string &name, RewriteRule rule, const Tensor &a, const Tensor &b, cplx scalar,
                       Tolerance tol) {
    double dev = max_deviation(a, b);
    return RuleReport{name, rule, a.dim(), dev, scalar, dev <= tol.eps};
}

void suite_for(int d, Tolerance tol, std::vector<RuleReport> &out) {
    Builder b{d};
    const double sd = std::sqrt(static_cast<double>(d));

    // Frobenius structure of each color
    for (auto [color, rule, tag] : {std::tuple{SpiderColor::Black, RewriteRule::FuseBlack, "black"},
                                    std::tuple{SpiderColor::White, RewriteRule::FuseWhite, "white"}}) {
        auto sp = [&](int i, int o) { return diagram_spider(d, color, i, o); };
        auto left = b.then(sp(1, 2), b.beside(sp(1, 2), b.id(1)));
        auto right = b.then(sp(1, 2), b.beside(b.id(1), sp(1, 2)));
        out.push_back(check_rewrite(std::string("frobenius.coassociativity.") + tag, rule, left, right, tol));
        auto merge_left = b.then(b.beside(sp(2, 1), b.id(1)), sp(2, 1));
        auto merge_right = b.then(b.beside(b.id(1), sp(2, 1)), sp(2, 1));
        out.push_back(
            check_rewrite(std::string("frobenius.associativity.") + tag, rule, merge_left, merge_right, tol));
        auto frob = b.then(b.beside(sp(1, 2), b.id(1)), b.beside(b.id(1), sp(2, 1)));
        out.push_back(
            check_rewrite(std::string("frobenius.law.") + tag, rule, frob, b.then(sp(2, 1), sp(1, 2)), tol));
        auto counit = b.then(sp(1, 2), b.beside(sp(1, 0), b.id(1)));
        out.push_back(check_normal(std::string("frobenius.counit.") + tag, RewriteRule::UnitCancel, counit, b.id(1), tol));
        auto unit = b.then(b.beside(sp(0, 1), b.id(1)), sp(2, 1));
        out.push_back(check_normal(std::string("frobenius.unit.") + tag, RewriteRule::UnitCancel, unit, b.id(1), tol));
    }
    out.push_back(check_rewrite("unit.splice", RewriteRule::UnitCancel, b.then(b.black(1, 1), b.white(1, 1)),
                                b.white(1, 1), tol));
    // a closed loop through an identity spider is the trace of the identity
    out.push_back(check_normal("unit.loop", RewriteRule::UnitCancel, b.then(b.black(0, 2), b.black(2, 0)),
                               b.scaled(b.id(0), static_cast<double>(d)), tol));

    // copy laws
    out.push_back(check_rewrite("hopf.copy.white-unit", RewriteRule::Bialgebra, b.then(b.white(0, 1), b.black(1, 2)),
                                b.beside(b.white(0, 1), b.white(0, 1)), tol));
    out.push_back(check_rewrite("hopf.copy.black-counit", RewriteRule::Bialgebra,
                                b.then(b.white(2, 1), b.black(1, 0)), b.beside(b.black(1, 0), b.black(1, 0)), tol));
    out.push_back(check_rewrite("hopf.copy.black-unit", RewriteRule::Bialgebra,
                                b.then(b.beside(b.black(0, 1), b.id(1)), b.white(2, 1)),
                                b.then(b.black(1, 0), b.black(0, 1)), tol));
    out.push_back(check_rewrite("hopf.copy.white-counit", RewriteRule::Bialgebra,
                                b.then(b.black(1, 2), b.beside(b.white(1, 0), b.id(1))),
                                b.then(b.white(1, 0), b.white(0, 1)), tol));

    // antipode loop, with the F^2 box on either branch
    auto collapse = b.then(b.white(1, 0), b.black(0, 1));
    out.push_back(check_rewrite("hopf.antipode-loop.left", RewriteRule::AntipodeLoop,
                                b.then(b.then(b.white(1, 2), b.beside(b.f(2), b.id(1))), b.black(2, 1)), collapse,
                                tol));
    out.push_back(check_rewrite("hopf.antipode-loop.right", RewriteRule::AntipodeLoop,
                                b.then(b.then(b.white(1, 2), b.beside(b.id(1), b.f(2))), b.black(2, 1)), collapse,
                                tol));

    // the antipode is F^2: black cap against a white cup
    {
        auto snake = b.then(b.beside(b.id(1), b.white(0, 2)), b.beside(b.black(2, 0), b.id(1)));
        out.push_back(
            check_equal("antipode.snake", RewriteRule::AntipodeLoop, eval_tensor(snake), gate(d, GateName::F2), 1.0, tol));
    }

    // bialgebra square
    SpiderDiagram square(d);
    {
        SpiderDiagram &g = square;
        int x1 = g.add_input();
        int x2 = g.add_input();
        int w1 = g.add_spider(SpiderColor::White, 1, 2);
        int w2 = g.add_spider(SpiderColor::White, 1, 2);
        int b1 = g.add_spider(SpiderColor::Black, 2, 1);
        int b2 = g.add_spider(SpiderColor::Black, 2, 1);
        int y1 = g.add_output();
        int y2 = g.add_output();
        g.connect(x1, 0, w1, 0);
        g.connect(x2, 0, w2, 0);
        g.connect(w1, 0, b1, 0);
        g.connect(w1, 1, b2, 0);
        g.connect(w2, 0, b1, 1);
        g.connect(w2, 1, b2, 1);
        g.connect(b1, 0, y1, 0);
        g.connect(b2, 0, y2, 0);
    }
    auto path = b.then(b.black(2, 1), b.white(1, 2));
    out.push_back(check_rewrite("hopf.bialgebra-square", RewriteRule::HopfLaw, square, path, tol));

    // duality between the two spider families
    for (int n = 1; n <= 4; n++) {
        int ins = n / 2;
        int outs = n - ins;
        auto rhs = b.then(b.tensor_power(b.f(3), ins),
                          b.then(b.black(ins, outs), b.tensor_power(b.f(1), outs)));
        rhs.scalar *= std::pow(static_cast<double>(d), n / 2.0 - 1.0);
        out.push_back(check_rewrite("duality.white-to-black.n" + std::to_string(n), RewriteRule::ColorChange,
                                    b.white(ins, outs), rhs, tol));
        auto back = b.then(b.tensor_power(b.f(3), ins), b.then(b.white(ins, outs), b.tensor_power(b.f(1), outs)));
        back.scalar *= std::pow(static_cast<double>(d), 1.0 - n / 2.0);
        out.push_back(check_rewrite("duality.black-to-white.n" + std::to_string(n), RewriteRule::ColorChange,
                                    b.black(ins, outs), back, tol));
    }

    // string-genus relation against the bialgebra square
    {
        auto cs = compile_to_quon(square);
        auto cp = compile_to_quon(path);
        auto vs = eval_network(cs.network);
        auto vp = eval_network(cp.network);
        double dev = max_deviation(vs, vp * cplx{1.0 / sd});
        // the path picture with a neutral circle around the handle
        auto with_circle = cp.network;
        with_circle.genus_circles.push_back(GenusIncidence{1, 1});
        dev = std::max(dev, max_deviation(eval_network(with_circle), vs));
        // scalar bookkeeping on the spider side
        auto marked = path;
        marked.genus_marks = 1;
        marked.scalar *= sd;
        auto cancelled = apply_rule(marked, RewriteRule::GenusCancel, find_matches(marked, RewriteRule::GenusCancel).front());
        dev = std::max(dev, max_deviation(eval_tensor(cancelled), eval_tensor(path)));
        bool exps = cs.scale_exponent == 0 && cp.scale_exponent == 1 && cs.network.genus_marks == 1;
        out.push_back(RuleReport{"genus.hopf-both-paths", RewriteRule::GenusCancel, d, exps ? dev : 1.0,
                                 cplx{1.0 / sd}, exps && dev <= tol.eps});
    }
}

}  // namespace

std::vector<RuleReport> rule_suite(const std::vector<int> &dims, Tolerance tol) {
    std::vector<RuleReport> out;
    for (int d : dims) {
        suite_for(d, tol, out);
    }
    return out;
}

}  // namespace quon

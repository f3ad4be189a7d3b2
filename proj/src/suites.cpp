#include "quon/suites.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <random>

#include "quon/error.hpp"
#include "quon/pf_algebra.hpp"
#include "quon/planar.hpp"
#include "quon/quon_calculus.hpp"
#include "quon/qudit_core.hpp"
#include "quon/spider_engine.hpp"
#include "quon/tensor.hpp"

namespace quon {

namespace {

struct Measure {
    double err = 0.0;
    std::optional<cplx> scalar;
    std::string detail;
    bool ok = true;  // extra structural condition beyond the error threshold
};

CheckRecord cell(const std::string &name, double threshold, const std::function<Measure()> &fn) {
    CheckRecord r;
    r.name = name;
    auto t0 = std::chrono::steady_clock::now();
    try {
        Measure m = fn();
        r.max_error = m.err;
        r.scalar = m.scalar;
        r.detail = m.detail;
        r.status = (m.ok && m.err <= threshold) ? CheckStatus::Pass : CheckStatus::Fail;
    } catch (const std::exception &e) {
        r.status = CheckStatus::Error;
        r.max_error = std::numeric_limits<double>::infinity();
        r.detail = e.what();
    }
    r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::string tag(int d) {
    return ".d" + std::to_string(d);
}

std::vector<int> dims_upto(const std::vector<int> &dims, int hi) {
    std::vector<int> out;
    for (int d : dims) {
        if (d >= 2 && d <= hi) {
            out.push_back(d);
        }
    }
    return out;
}

Tensor random_tensor(int d, int out, int in, std::mt19937_64 &rng) {
    std::normal_distribution<double> normal;
    Tensor t(d, out, in);
    for (auto &z : t.entries()) {
        z = cplx{normal(rng), normal(rng)};
    }
    return t;
}

// Random element of PF_n with charge k whose terms live on sites lo..hi.
PFElement random_homogeneous(int d, int n, int lo, int hi, int k, std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> expo(0, d - 1);
    std::normal_distribution<double> normal;
    PFElement x = pf_zero(d, n);
    for (int t = 0; t < 3; t++) {
        std::vector<int> alpha(n, 0);
        int total = 0;
        for (int s = lo; s < hi; s++) {
            alpha[s - 1] = expo(rng);
            total += alpha[s - 1];
        }
        alpha[hi - 1] = mod(k - total, d);
        x = pf_add(x, pf_monomial(d, alpha, cplx{normal(rng), normal(rng)}));
    }
    return x;
}

PFElement random_element(int d, int n, std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> expo(0, d - 1);
    std::normal_distribution<double> normal;
    PFElement x = pf_zero(d, n);
    for (int t = 0; t < 4; t++) {
        std::vector<int> alpha(n);
        for (auto &a : alpha) {
            a = expo(rng);
        }
        x = pf_add(x, pf_monomial(d, alpha, cplx{normal(rng), normal(rng)}));
    }
    return x;
}

Tensor adjoint_of(const Tensor &t) {
    return t.adjoint();
}

double unitarity_error(const Tensor &u) {
    return max_deviation(tensor_compose(adjoint_of(u), u), Tensor::identity(u.dim(), u.in_legs()));
}

Tensor power(const Tensor &a, int k) {
    Tensor r = Tensor::identity(a.dim(), a.in_legs());
    for (int i = 0; i < k; i++) {
        r = tensor_compose(a, r);
    }
    return r;
}

// ---------------------------------------------------------------------------

void pf_suite(const SuiteOptions &o, std::vector<CheckRecord> &out) {
    const double eps = o.tol.eps;
    for (int d : dims_upto(o.dims, 5)) {
        auto r = roots(d);
        out.push_back(cell("pf.generators" + tag(d), eps, [&] {
            Measure m;
            for (int n = 1; n <= 4; n++) {
                for (int a = 1; a <= n; a++) {
                    auto ca = pf_generator(d, n, a, 1);
                    m.err = std::max(m.err, pf_distance(pf_power(ca, d), pf_unit(d, n)));
                    for (int b = a + 1; b <= n; b++) {
                        auto cb = pf_generator(d, n, b, 1);
                        m.err = std::max(m.err, pf_distance(pf_mul(ca, cb), pf_scale(pf_mul(cb, ca), r.q)));
                    }
                }
                if (n % 2 == 0) {
                    for (int a = 1; a <= n; a++) {
                        auto ja = jw_rep(pf_generator(d, n, a, 1));
                        m.err = std::max(m.err, max_deviation(power(ja, d), Tensor::identity(d, n / 2)));
                        m.err = std::max(m.err, unitarity_error(ja));
                        for (int b = a + 1; b <= n; b++) {
                            auto jb = jw_rep(pf_generator(d, n, b, 1));
                            m.err = std::max(m.err,
                                             max_deviation(tensor_compose(ja, jb), tensor_compose(jb, ja) * r.q));
                        }
                    }
                }
            }
            return m;
        }));
        std::mt19937_64 rng(o.seed + static_cast<std::uint64_t>(d));
        out.push_back(cell("pf.para-isotopy" + tag(d), eps, [&] {
            Measure m;
            const int n = 4;
            for (int split = 1; split < n; split++) {
                for (int k = 0; k < d; k++) {
                    for (int l = 0; l < d; l++) {
                        auto x = random_homogeneous(d, n, 1, split, k, rng);
                        auto y = random_homogeneous(d, n, split + 1, n, l, rng);
                        m.err = std::max(m.err, pf_distance(pf_mul(x, y), pf_scale(pf_mul(y, x), r.q_pow(k * l))));
                    }
                }
            }
            return m;
        }));
        out.push_back(cell("pf.twisted-product" + tag(d), eps, [&] {
            Measure m;
            const int n = 4;
            for (int split = 1; split < n; split++) {
                for (int k = 0; k < d; k++) {
                    for (int l = 0; l < d; l++) {
                        auto x = random_homogeneous(d, n, 1, split, k, rng);
                        auto y = random_homogeneous(d, n, split + 1, n, l, rng);
                        auto after = pf_scale(pf_mul(y, x), r.zeta_pow(k * l));
                        auto before = pf_scale(pf_mul(x, y), r.zeta_pow(-k * l));
                        m.err = std::max(m.err, pf_distance(after, before));
                        m.err = std::max(m.err, pf_distance(pf_twisted_mul(x, y), before));
                    }
                }
            }
            return m;
        }));
        out.push_back(cell("pf.adjoint" + tag(d), eps, [&] {
            Measure m;
            for (int t = 0; t < o.trials; t++) {
                auto x = random_element(d, 4, rng);
                auto y = random_element(d, 4, rng);
                m.err = std::max(m.err, pf_distance(pf_adjoint(pf_adjoint(x)), x));
                m.err = std::max(m.err, pf_distance(pf_adjoint(pf_mul(x, y)), pf_mul(pf_adjoint(y), pf_adjoint(x))));
                m.err = std::max(m.err, max_deviation(jw_rep(pf_adjoint(x)), jw_rep(x).adjoint()));
            }
            return m;
        }));
        out.push_back(cell("pf.charge" + tag(d), 0.0, [&] {
            Measure m;
            std::uniform_int_distribution<int> charge(0, d - 1);
            for (int t = 0; t < o.trials; t++) {
                int k = charge(rng);
                int l = charge(rng);
                auto x = random_homogeneous(d, 4, 1, 4, k, rng);
                auto y = random_homogeneous(d, 4, 1, 4, l, rng);
                auto xy = pf_mul(x, y);
                auto c = pf_charge(xy);
                if (xy.is_zero()) {
                    continue;
                }
                if (!c.homogeneous() || *c.value != mod(k + l, d)) {
                    m.err = 1.0;
                }
            }
            if (!pf_charge(pf_unit(d, 4)).homogeneous() || *pf_charge(pf_unit(d, 4)).value != 0) {
                m.err = 1.0;
            }
            return m;
        }));
    }
}

void jw_suite(const SuiteOptions &o, std::vector<CheckRecord> &out) {
    const double eps = o.tol.eps;
    for (int d : dims_upto(o.dims, 5)) {
        for (int half = 1; half <= 2; half++) {
            const int n = 2 * half;
            const std::string suffix = tag(d) + ".n" + std::to_string(half);
            out.push_back(cell("jw.independence" + suffix, 0.0, [&] {
                const auto count = static_cast<Eigen::Index>(ipow(d, n));
                Eigen::MatrixXcd images(count, count);
                for (Eigen::Index idx = 0; idx < count; idx++) {
                    auto alpha = digits(static_cast<std::size_t>(idx), d, n);
                    auto t = jw_rep(pf_monomial(d, alpha));
                    for (Eigen::Index e = 0; e < count; e++) {
                        images(e, idx) = t.entries()[static_cast<std::size_t>(e)];
                    }
                }
                Eigen::FullPivLU<Eigen::MatrixXcd> lu(images);
                lu.setThreshold(1e-9);
                Measure m;
                m.err = static_cast<double>(count - lu.rank());
                m.detail = "rank " + std::to_string(lu.rank()) + " of " + std::to_string(count);
                return m;
            }));
            out.push_back(cell("jw.multiplicative" + suffix, eps, [&] {
                std::mt19937_64 rng(o.seed + 100 * static_cast<std::uint64_t>(d) + half);
                Measure m;
                m.err = max_deviation(jw_rep(pf_unit(d, n)), Tensor::identity(d, half));
                for (int t = 0; t < o.trials; t++) {
                    auto x = random_element(d, n, rng);
                    auto y = random_element(d, n, rng);
                    m.err = std::max(m.err, max_deviation(jw_rep(pf_mul(x, y)), tensor_compose(jw_rep(x), jw_rep(y))));
                    m.err = std::max(m.err, max_deviation(jw_rep(pf_add(x, y)), jw_rep(x) + jw_rep(y)));
                }
                return m;
            }));
        }
    }
}

void qudit_suite(const SuiteOptions &o, std::vector<CheckRecord> &out) {
    const double eps = o.tol.eps;
    for (int d : dims_upto(o.dims, 8)) {
        auto r = roots(d);
        out.push_back(cell("qudit.gates" + tag(d), eps, [&] {
            Measure m;
            for (auto g : {GateName::X, GateName::Y, GateName::Z, GateName::F, GateName::G, GateName::F2,
                           GateName::CNOT}) {
                m.err = std::max(m.err, unitarity_error(gate(d, g)));
            }
            auto x = gate(d, GateName::X);
            auto z = gate(d, GateName::Z);
            auto f = gate(d, GateName::F);
            auto id = Tensor::identity(d, 1);
            m.err = std::max(m.err, max_deviation(power(x, d), id));
            m.err = std::max(m.err, max_deviation(power(z, d), id));
            m.err = std::max(m.err, max_deviation(tensor_compose(z, x), tensor_compose(x, z) * r.q));
            m.err = std::max(m.err, max_deviation(power(f, 4), id));
            m.err = std::max(m.err, max_deviation(tensor_compose(f, f), gate(d, GateName::F2)));
            for (int k = 0; k < d; k++) {
                int kk[] = {k};
                int nk[] = {mod(-k, d)};
                m.err = std::max(m.err,
                                 max_deviation(tensor_compose(gate(d, GateName::F2), Tensor::ket(d, kk)), Tensor::ket(d, nk)));
            }
            return m;
        }));
        out.push_back(cell("qudit.eigenbases" + tag(d), eps, [&] {
            Measure m;
            // Z: standard basis; X: Fourier image of it; Y: the quon Y family
            auto f = gate(d, GateName::F);
            std::vector<std::pair<GateName, Tensor>> pairs = {
                {GateName::Z, Tensor::identity(d, 1)}, {GateName::X, f}, {GateName::Y, quon_basis_matrix(d, Axis::Y)}};
            for (const auto &[g, basis] : pairs) {
                auto conj = tensor_compose(basis.adjoint(), tensor_compose(gate(d, g), basis));
                for (int i = 0; i < d; i++) {
                    for (int j = 0; j < d; j++) {
                        if (i != j) {
                            m.err = std::max(m.err, std::abs(conj.at(i, j)));
                        } else {
                            m.err = std::max(m.err, std::abs(std::abs(conj.at(i, i)) - 1.0));
                        }
                    }
                }
            }
            return m;
        }));
    }
}

void clifford_suite(const SuiteOptions &o, std::vector<CheckRecord> &out) {
    for (int d : dims_upto(o.dims, 5)) {
        out.push_back(cell("clifford.order" + tag(d), 0.0, [&] {
            Measure m;
            auto order = clifford_order(d, 1000000);
            auto expected = clifford_order_formula(d);
            m.err = std::abs(static_cast<double>(order) - static_cast<double>(expected));
            if (d == 2 && order != 24) {
                m.ok = false;
            }
            if (d == 3 && order != 216) {
                m.ok = false;
            }
            m.detail = "order " + std::to_string(order);
            return m;
        }));
    }
}

// Pauli charge words on the four strands of a quon.
StrandWord pauli_word(int d, GateName g) {
    switch (g) {
        case GateName::Z:
            return StrandWord{d, {StrandGen::charge(1, 1), StrandGen::charge(2, d - 1)}};
        case GateName::X:
            return StrandWord{d, {StrandGen::charge(1, 1), StrandGen::charge(4, d - 1)}};
        default:
            return StrandWord{d, {StrandGen::charge(1, d - 1), StrandGen::charge(3, 1)}};
    }
}

Measure up_to_phase(const Tensor &a, const Tensor &b, Tolerance tol) {
    Measure m;
    auto s = compare_up_to_scalar(a, b, tol);
    if (!s) {
        m.ok = false;
        m.err = max_deviation(a, b);
        return m;
    }
    m.scalar = *s;
    m.err = std::max(max_deviation(a, b * *s), std::abs(std::abs(*s) - 1.0));
    return m;
}

void quon_suite(const SuiteOptions &o, std::vector<CheckRecord> &out) {
    const double eps = o.tol.eps;
    for (int d : dims_upto(o.dims, 5)) {
        out.push_back(cell("quon.bases" + tag(d), eps, [&] {
            Measure m;
            for (auto [axis, g] : {std::pair{Axis::Z, GateName::Z}, std::pair{Axis::X, GateName::X},
                                   std::pair{Axis::Y, GateName::Y}}) {
                auto b = quon_basis_matrix(d, axis);
                m.err = std::max(m.err, max_deviation(tensor_compose(b.adjoint(), b), Tensor::identity(d, 1)));
                auto conj = tensor_compose(b.adjoint(), tensor_compose(gate(d, g), b));
                for (int i = 0; i < d; i++) {
                    for (int j = 0; j < d; j++) {
                        if (i != j) {
                            m.err = std::max(m.err, std::abs(conj.at(i, j)));
                        }
                    }
                }
            }
            return m;
        }));
        for (auto g : {GateName::Z, GateName::X, GateName::Y}) {
            out.push_back(cell("quon.pauli." + to_string(g) + tag(d), eps, [&] {
                Measure m = up_to_phase(eval_word(pauli_word(d, g)), gate(d, g), o.tol);
                // recorded phases: zeta for Y, zeta^(1-d) for Z and X
                const cplx recorded = roots(d).zeta_pow(g == GateName::Y ? 1 : 1 - d);
                m.err = std::max(m.err, std::abs(m.scalar.value_or(0.0) - recorded));
                return m;
            }));
        }
        out.push_back(cell("quon.braids" + tag(d), eps, [&] {
            Measure m;
            auto id = Tensor::identity(d, 1);
            for (int i = 1; i <= 3; i++) {
                auto bp = braid_matrix(d, i, 1);
                auto bm = braid_matrix(d, i, -1);
                m.err = std::max({m.err, unitarity_error(bp), unitarity_error(bm)});
                m.err = std::max(m.err, max_deviation(tensor_compose(bp, bm), id));
            }
            for (int i = 1; i <= 2; i++) {
                auto a = braid_matrix(d, i, 1);
                auto b = braid_matrix(d, i + 1, 1);
                m.err = std::max(m.err, max_deviation(tensor_compose(a, tensor_compose(b, a)),
                                                      tensor_compose(b, tensor_compose(a, b))));
            }
            auto b1 = braid_matrix(d, 1, 1);
            auto b3 = braid_matrix(d, 3, 1);
            m.err = std::max(m.err, max_deviation(tensor_compose(b1, b3), tensor_compose(b3, b1)));
            return m;
        }));
        out.push_back(cell("quon.charge-additivity" + tag(d), eps, [&] {
            Measure m;
            for (int s = 1; s <= 4; s++) {
                for (int g = 0; g < d; g++) {
                    for (int h = 0; h < d; h++) {
                        m.err = std::max(m.err, max_deviation(tensor_compose(charge_matrix(d, s, h), charge_matrix(d, s, g)),
                                                              charge_matrix(d, s, mod(g + h, d))));
                    }
                }
            }
            return m;
        }));
        out.push_back(cell("quon.completeness" + tag(d), eps, [&] {
            // (1/sqrt d) sum_j of a cap over a cup, charged j and -j on the left strand,
            // acting on two pairs of strands
            PlanarModel pm(d);
            const int dim = d * d;
            Tensor lhs(d, 2, 2);
            for (int col = 0; col < dim; col++) {
                PlanarModel::Vec v(dim, 0.0);
                v[col] = 1.0;
                PlanarModel::Vec acc(dim, 0.0);
                for (int j = 0; j < d; j++) {
                    auto w = pm.charge(v, 2, 2, -j);
                    w = pm.cap(w, 2, 2);
                    w = pm.cup(w, 1, 2);
                    w = pm.charge(w, 2, 2, j);
                    for (int i = 0; i < dim; i++) {
                        acc[i] += w[i] / std::sqrt(static_cast<double>(d));
                    }
                }
                for (int i = 0; i < dim; i++) {
                    lhs.at(i, col) = acc[i];
                }
            }
            Measure m;
            m.err = max_deviation(lhs, Tensor::identity(d, 2));
            return m;
        }));
        out.push_back(cell("quon.g-word" + tag(d), eps, [&] {
            auto w = find_word(d, gate(d, GateName::G), 2, o.tol);
            Measure m = up_to_phase(eval_word(w), gate(d, GateName::G), o.tol);
            m.ok = m.ok && w.gens.size() <= 2;
            m.detail = to_string(w);
            return m;
        }));
        out.push_back(cell("quon.f-word" + tag(d), eps, [&] {
            auto w = find_word(d, gate(d, GateName::F), 4, o.tol);
            Measure m = up_to_phase(eval_word(w), gate(d, GateName::F), o.tol);
            m.ok = m.ok && w.gens.size() <= 4;
            m.detail = to_string(w);
            return m;
        }));
        out.push_back(cell("quon.string-fourier" + tag(d), eps, [&] {
            auto fs = string_fourier(d);
            Measure m = up_to_phase(fs, gate(d, GateName::F), o.tol);
            Measure sq = up_to_phase(tensor_compose(fs, fs), gate(d, GateName::F2), o.tol);
            m.err = std::max(m.err, sq.err);
            m.ok = m.ok && sq.ok;
            return m;
        }));
    }
    if (std::find(o.dims.begin(), o.dims.end(), 2) != o.dims.end()) {
        out.push_back(cell("quon.bloch.d2", eps, [&] {
            const double h = 1.0 / std::sqrt(2.0);
            const cplx i{0.0, 1.0};
            Measure m;
            // each family is matched as a set: label order is a convention
            auto check = [&](Axis axis, std::vector<cplx> expected) {
                Tensor b(2, 1, 0, std::move(expected));
                double best = std::numeric_limits<double>::infinity();
                for (int k = 0; k < 2; k++) {
                    Tensor a(2, 1, 0, quon_basis(2, axis, k).coeffs);
                    auto r = up_to_phase(a, b, o.tol);
                    if (r.ok) {
                        best = std::min(best, r.err);
                    }
                }
                m.err = std::max(m.err, best);
            };
            check(Axis::X, {h, h});
            check(Axis::X, {h, -h});
            check(Axis::Y, {h, i * h});
            check(Axis::Y, {h, -i * h});
            return m;
        }));
    }
}

void joint_suite(const SuiteOptions &o, std::vector<CheckRecord> &out) {
    for (int d : dims_upto(o.dims, 3)) {
        for (int mm = 1; mm <= 2; mm++) {
            for (int nn = 1; nn <= 2; nn++) {
                std::string name = "joint" + tag(d) + ".m" + std::to_string(mm) + ".n" + std::to_string(nn);
                out.push_back(cell(name, o.tol.eps, [&] {
                    std::mt19937_64 rng(o.seed + 1000 * static_cast<std::uint64_t>(d) + 10 * mm + nn);
                    auto left = standard_basis(d, mm, mm);
                    auto right = standard_basis(d, nn, mm);
                    Measure m;
                    const int count = std::max(50, o.trials);
                    for (int t = 0; t < count; t++) {
                        auto tt = random_tensor(d, nn, mm, rng);
                        auto rep = joint_check(d, mm, nn, tt, left, right, o.tol, o.seed + t);
                        m.err = std::max({m.err, rep.deviation, rep.invariance});
                    }
                    m.detail = std::to_string(count) + " random maps";
                    return m;
                }));
            }
        }
    }
}

void genus_suite(const SuiteOptions &o, std::vector<CheckRecord> &out) {
    const double eps = o.tol.eps;
    for (int d : dims_upto(o.dims, 5)) {
        const double sd = std::sqrt(static_cast<double>(d));
        out.push_back(cell("genus.circles" + tag(d), eps, [&] {
            Measure m;
            m.err = std::abs(eval_network(circle_network(d, 0)).entries()[0] - sd);
            for (int j = 1; j < d; j++) {
                m.err = std::max(m.err, std::abs(eval_network(circle_network(d, j)).entries()[0]));
            }
            return m;
        }));
        out.push_back(cell("genus.incidence" + tag(d), eps, [&] {
            Measure m;
            auto base = circle_network(d, 0);
            auto v0 = eval_network(base).entries()[0];
            for (int a = 1; a <= 3; a++) {
                for (int b = 1; b <= 3; b++) {
                    auto net = base;
                    net.genus_circles.push_back(GenusIncidence{a, b});
                    cplx expected = (a % 2 == 1 && b % 2 == 1) ? v0 / sd : cplx{0.0};
                    m.err = std::max(m.err, std::abs(eval_network(net).entries()[0] - expected));
                }
            }
            return m;
        }));
    }
}

void rules_suite(const SuiteOptions &o, std::vector<CheckRecord> &out) {
    for (const auto &rep : rule_suite(dims_upto(o.dims, 5), o.tol)) {
        CheckRecord r;
        r.name = "rules." + rep.name + tag(rep.d);
        r.status = rep.pass ? CheckStatus::Pass : CheckStatus::Fail;
        r.max_error = rep.deviation;
        r.scalar = rep.scalar;
        r.detail = to_string(rep.rule);
        out.push_back(std::move(r));
    }
}

SpiderDiagram spider_cnot(int d) {
    // control on the second wire is copied, then summed onto the first
    auto copy = diagram_spider(d, SpiderColor::Black, 1, 2);
    auto sum = diagram_spider(d, SpiderColor::White, 2, 1);
    return diagram_then(diagram_beside(diagram_identity(d, 1), copy), diagram_beside(sum, diagram_identity(d, 1)));
}

Measure compiled_match(const SpiderDiagram &g) {
    auto comp = compile_to_quon(g);
    const double s = std::pow(static_cast<double>(g.d), comp.scale_exponent / 2.0);
    Measure m;
    m.err = max_deviation(eval_network(comp.network), eval_tensor(g) * cplx{s});
    m.scalar = cplx{s};
    m.detail = "a=" + std::to_string(comp.scale_exponent);
    return m;
}

void cnot_suite(const SuiteOptions &o, std::vector<CheckRecord> &out) {
    for (int d : dims_upto(o.dims, 5)) {
        out.push_back(cell("cnot.spiders" + tag(d), std::min(o.tol.eps, 1e-12), [&] {
            Measure m;
            m.err = max_deviation(eval_tensor(spider_cnot(d)), gate(d, GateName::CNOT));
            return m;
        }));
        out.push_back(cell("cnot.compiled" + tag(d), o.tol.eps, [&] { return compiled_match(spider_cnot(d)); }));
    }
}

void resources_suite(const SuiteOptions &o, std::vector<CheckRecord> &out) {
    const double eps = o.tol.eps;
    for (int d : dims_upto(o.dims, 5)) {
        const double sd = std::sqrt(static_cast<double>(d));
        out.push_back(cell("resources.ghz3.compiled" + tag(d), eps, [&] {
            auto g = diagram_spider(d, SpiderColor::Black, 0, 3);
            g.scalar = 1.0 / sd;
            Measure m = compiled_match(g);
            m.err = std::max(m.err, max_deviation(eval_tensor(g), resource_state(d, {ResourceKind::GHZ, 3})));
            return m;
        }));
        out.push_back(cell("resources.max3.compiled" + tag(d), eps, [&] {
            auto g = diagram_spider(d, SpiderColor::White, 0, 3);
            g.scalar = 1.0 / static_cast<double>(d);
            Measure m = compiled_match(g);
            m.err = std::max(m.err, max_deviation(eval_tensor(g), resource_state(d, {ResourceKind::Max, 3})));
            return m;
        }));
        out.push_back(cell("resources.copy.compiled" + tag(d), eps, [&] {
            return compiled_match(diagram_spider(d, SpiderColor::Black, 1, 2));
        }));
        out.push_back(cell("resources.bell" + tag(d), eps, [&] {
            Measure m;
            auto bp = resource_state(d, {ResourceKind::BellPlus});
            auto bm = resource_state(d, {ResourceKind::BellMinus});
            auto f2 = tensor_kron(Tensor::identity(d, 1), gate(d, GateName::F2));
            m.err = max_deviation(tensor_compose(f2, bp), bm);
            m.err = std::max(m.err, max_deviation(resource_state(d, {ResourceKind::Max, 2}), bm));
            for (auto kind : {ResourceKind::BellPlus, ResourceKind::BellMinus}) {
                m.err = std::max(m.err, std::abs(resource_state(d, {kind}).norm() - 1.0));
            }
            for (int n = 1; n <= 4; n++) {
                m.err = std::max(m.err, std::abs(resource_state(d, {ResourceKind::GHZ, n}).norm() - 1.0));
                m.err = std::max(m.err, std::abs(resource_state(d, {ResourceKind::Max, n}).norm() - 1.0));
            }
            return m;
        }));
        out.push_back(cell("resources.ghz-duality" + tag(d), eps, [&] {
            // Max(n) is GHZ(n) with F on every leg
            Measure m;
            for (int n = 1; n <= 3; n++) {
                auto fs = Tensor::identity(d, 0);
                for (int k = 0; k < n; k++) {
                    fs = tensor_kron(fs, gate(d, GateName::F));
                }
                m.err = std::max(m.err, max_deviation(tensor_compose(fs, resource_state(d, {ResourceKind::GHZ, n})),
                                                      resource_state(d, {ResourceKind::Max, n})));
            }
            return m;
        }));
    }
}

void teleport_suite(const SuiteOptions &o, std::vector<CheckRecord> &out) {
    for (int d : dims_upto(o.dims, 8)) {
        out.push_back(cell("teleport.fidelity" + tag(d), o.tol.eps, [&] {
            Measure m;
            double worst = 1.0;
            for (int t = 0; t < o.trials; t++) {
                auto state = random_state(d, o.seed + 7919 * static_cast<std::uint64_t>(d) + t);
                for (int a = 0; a < d; a++) {
                    for (int b = 0; b < d; b++) {
                        worst = std::min(worst, teleport_run(d, state, a, b).fidelity);
                    }
                }
            }
            m.err = 1.0 - worst;
            m.detail = std::to_string(o.trials) + " states x " + std::to_string(d * d) + " outcomes";
            return m;
        }));
        out.push_back(cell("teleport.correction" + tag(d), 0.0, [&] {
            Measure m;
            auto found = teleport_calibrate(d);
            auto frozen = teleport_frozen_correction(d);
            bool same = found.ua == frozen.ua && found.ub == frozen.ub && found.va == frozen.va &&
                        found.vb == frozen.vb && found.c == frozen.c;
            m.err = same ? 0.0 : 1.0;
            m.detail = "a'=" + std::to_string(found.ua) + "a+" + std::to_string(found.ub) + "b, b'=" +
                       std::to_string(found.va) + "a+" + std::to_string(found.vb) + "b, c=" + std::to_string(found.c);
            return m;
        }));
    }
}

using SuiteFn = void (*)(const SuiteOptions &, std::vector<CheckRecord> &);

const std::vector<std::pair<std::string, SuiteFn>> &suite_table() {
    static const std::vector<std::pair<std::string, SuiteFn>> table = {
        {"pf", pf_suite},         {"jw", jw_suite},         {"qudit", qudit_suite},
        {"clifford", clifford_suite}, {"quon", quon_suite},   {"joint", joint_suite},
        {"genus", genus_suite},   {"rules", rules_suite},   {"cnot", cnot_suite},
        {"resources", resources_suite}, {"teleport", teleport_suite}};
    return table;
}

}  // namespace

std::string to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass:
            return "pass";
        case CheckStatus::Fail:
            return "fail";
        case CheckStatus::Error:
            return "error";
    }
    return "error";
}

const std::vector<std::string> &suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto &[name, fn] : suite_table()) {
            v.push_back(name);
        }
        return v;
    }();
    return names;
}

std::vector<CheckRecord> run_suite(const std::string &name, const SuiteOptions &opts) {
    for (const auto &[n, fn] : suite_table()) {
        if (n == name) {
            std::vector<CheckRecord> out;
            fn(opts, out);
            return out;
        }
    }
    throw NotFound("unknown suite '" + name + "'");
}

std::vector<CheckRecord> run_all_suites(const SuiteOptions &opts) {
    std::vector<std::future<std::vector<CheckRecord>>> jobs;
    for (const auto &name : suite_names()) {
        jobs.push_back(std::async(std::launch::async, [name, &opts] { return run_suite(name, opts); }));
    }
    std::vector<CheckRecord> out;
    for (auto &job : jobs) {
        auto part = job.get();
        out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return out;
}

bool all_pass(const std::vector<CheckRecord> &records) {
    for (const auto &r : records) {
        if (r.status != CheckStatus::Pass) {
            return false;
        }
    }
    return true;
}

}  // namespace quon

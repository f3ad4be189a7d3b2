#include "quon/quon_calculus.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <random>

#include "quon/error.hpp"
#include "quon/contract.hpp"
#include "quon/qudit_core.hpp"

namespace quon {

namespace {

// Operator on both strand pairs of one quon from its action on basis vectors.
template <typename Fn>
Tensor full_operator(int d, Fn &&apply) {
    Tensor t(d, 2, 2);
    for (std::size_t col = 0; col < t.cols(); col++) {
        PlanarModel::Vec v(t.rows(), cplx{0});
        v[col] = 1.0;
        auto w = apply(v);
        for (std::size_t row = 0; row < t.rows(); row++) {
            t.at(row, col) = w[row];
        }
    }
    return t;
}

std::size_t neutral_index(int d, int g) {
    return static_cast<std::size_t>(mod(g, d)) * d + mod(-g, d);
}

}  // namespace

Tensor neutral_restriction(const Tensor &full) {
    const int d = full.dim();
    if (full.out_legs() != 2 || full.in_legs() != 2) {
        throw ShapeError("neutral restriction needs a two-pair operator");
    }
    return Tensor::from_fn(d, 1, 1, [&](std::size_t h, std::size_t g) {
        return full.at(neutral_index(d, static_cast<int>(h)), neutral_index(d, static_cast<int>(g)));
    });
}

Tensor braid_matrix_full(int d, int pos, int sign) {
    if (pos < 1 || pos > 3) {
        throw NetworkError("1-quon crossing position must be 1, 2 or 3");
    }
    PlanarModel model(d);
    return full_operator(d, [&](const PlanarModel::Vec &v) { return model.braid(v, 2, pos, sign); });
}

Tensor braid_matrix(int d, int pos, int sign) {
    return neutral_restriction(braid_matrix_full(d, pos, sign));
}

Tensor charge_matrix(int d, int strand, int g) {
    if (strand < 1 || strand > 4) {
        throw NetworkError("1-quon strand must be in 1..4");
    }
    PlanarModel model(d);
    return full_operator(d, [&](const PlanarModel::Vec &v) { return model.charge(v, 2, strand, g); });
}

int word_charge(const StrandWord &w) {
    std::int64_t total = 0;
    for (const auto &g : w.gens) {
        if (g.kind == StrandGen::Kind::Charge) {
            total += g.value;
        }
    }
    return mod(total, w.d);
}

Tensor eval_word_full(const StrandWord &w) {
    PlanarModel model(w.d);
    for (const auto &g : w.gens) {
        if (g.kind == StrandGen::Kind::Braid && (g.index < 1 || g.index > 3)) {
            throw NetworkError("1-quon crossing position must be 1, 2 or 3");
        }
        if (g.kind == StrandGen::Kind::Charge && (g.index < 1 || g.index > 4)) {
            throw NetworkError("1-quon strand must be in 1..4");
        }
    }
    return full_operator(w.d, [&](PlanarModel::Vec v) {
        for (const auto &g : w.gens) {
            if (g.kind == StrandGen::Kind::Braid) {
                v = model.braid(v, 2, g.index, g.value);
            } else {
                v = model.charge(v, 2, g.index, g.value);
            }
        }
        return v;
    });
}

Tensor eval_word(const StrandWord &w) {
    if (word_charge(w) != 0) {
        throw ChargedWord("word carries net charge " + std::to_string(word_charge(w)) + " and leaves the 1-quon space");
    }
    return neutral_restriction(eval_word_full(w));
}

StrandWord parse_word(int d, const std::string &text) {
    StrandWord w{d, {}};
    std::size_t i = 0;
    auto fail = [&](std::size_t at, const std::string &msg) {
        throw ParseError(1, static_cast<int>(at) + 1, msg);
    };
    auto read_int = [&](bool allow_sign) {
        std::size_t start = i;
        bool neg = false;
        if (allow_sign && i < text.size() && (text[i] == '-' || text[i] == '+')) {
            neg = text[i] == '-';
            i++;
        }
        if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) {
            fail(i, "expected a number");
        }
        long long v = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            v = v * 10 + (text[i] - '0');
            if (v > 1'000'000'000) {
                fail(start, "number out of range");
            }
            i++;
        }
        return static_cast<int>(neg ? -v : v);
    };
    while (true) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) {
            i++;
        }
        if (i >= text.size()) {
            break;
        }
        std::size_t start = i;
        if (text[i] == 'b') {
            i++;
            int pos = read_int(false);
            int sign = 1;
            if (i < text.size() && text[i] == '\'') {
                sign = -1;
                i++;
            }
            if (pos < 1 || pos > 3) {
                fail(start + 1, "crossing position must be 1, 2 or 3");
            }
            w.gens.push_back(StrandGen::braid(pos, sign));
        } else if (text[i] == 'c') {
            i++;
            int strand = read_int(false);
            if (strand < 1 || strand > 4) {
                fail(start + 1, "strand must be in 1..4");
            }
            if (i >= text.size() || text[i] != ':') {
                fail(i, "expected ':'");
            }
            i++;
            int g = read_int(true);
            w.gens.push_back(StrandGen::charge(strand, mod(g, d)));
        } else {
            fail(i, "expected 'b' or 'c' token");
        }
        if (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) {
            fail(i, "expected whitespace between tokens");
        }
    }
    return w;
}

std::string to_string(const StrandWord &w) {
    std::string out;
    for (const auto &g : w.gens) {
        if (!out.empty()) {
            out += ' ';
        }
        if (g.kind == StrandGen::Kind::Braid) {
            out += "b" + std::to_string(g.index) + (g.value < 0 ? "'" : "");
        } else {
            out += "c" + std::to_string(g.index) + ":" + std::to_string(g.value);
        }
    }
    return out;
}

StrandWord find_word(int d, const Tensor &target, int max_len, Tolerance tol) {
    if (target.dim() != d || target.out_legs() != 1 || target.in_legs() != 1) {
        throw ShapeError("find_word target must be a d x d matrix");
    }
    // crossings preserve the neutral sector, so restricted matrices multiply
    std::vector<StrandGen> alphabet;
    std::vector<Tensor> mats;
    for (int pos = 1; pos <= 3; pos++) {
        for (int sign : {1, -1}) {
            alphabet.push_back(StrandGen::braid(pos, sign));
            mats.push_back(braid_matrix(d, pos, sign));
        }
    }
    const int a = static_cast<int>(alphabet.size());
    for (int len = 0; len <= max_len; len++) {
        std::vector<int> word(len, 0);
        while (true) {
            Tensor m = Tensor::identity(d, 1);
            for (int x : word) {
                m = tensor_compose(mats[x], m);
            }
            auto lambda = compare_up_to_scalar(m, target, tol);
            if (lambda && std::abs(std::abs(*lambda) - 1) <= tol.eps) {
                StrandWord w{d, {}};
                for (int x : word) {
                    w.gens.push_back(alphabet[x]);
                }
                return w;
            }
            int i = len - 1;
            while (i >= 0 && ++word[i] == a) {
                word[i] = 0;
                i--;
            }
            if (i < 0) {
                break;
            }
        }
    }
    throw NotFound("no braid word of length <= " + std::to_string(max_len) + " matches the target");
}

StrandWord fourier_word(int d) {
    return StrandWord{d, {StrandGen::braid(3, 1), StrandGen::braid(2, 1), StrandGen::braid(1, 1)}};
}

Tensor string_fourier(int d) {
    // the rotation carries the Z pairing (12)(34) to (41)(23); read off overlaps
    // with the Z-pairing pictures
    StringNetwork net;
    net.d = d;
    Tensor out(d, 1, 1);
    for (int k = 0; k < d; k++) {
        NetworkComponent c;
        c.discs = 1;
        c.ops = {StrandOp::cup(1), StrandOp::cup(3), StrandOp::charge(3, -k), StrandOp::charge(1, k)};
        for (const auto &g : fourier_word(d).gens) {
            c.ops.push_back(StrandOp::braid(g.index, g.value));
        }
        net.components = {c};
        net.outputs = {DiscRef{0, 0}};
        net.scalar = 1.0 / std::sqrt(static_cast<double>(d));
        auto col = eval_network(net);
        for (int h = 0; h < d; h++) {
            out.at(h, k) = col.at(h, 0);
        }
    }
    return out;
}

cplx string_fourier_phase(int d) {
    auto lambda = compare_up_to_scalar(string_fourier(d), gate(d, GateName::F));
    if (!lambda) {
        throw NotFound("string Fourier transform is not proportional to F");
    }
    return *lambda;
}

// ---------------------------------------------------------------------------

NetworkComponent component_from_arcs(int points, const std::vector<std::pair<int, int>> &arcs) {
    if (points % 2 != 0 || static_cast<int>(arcs.size()) * 2 != points) {
        throw NetworkError("arcs must pair up every boundary point");
    }
    std::vector<std::pair<int, int>> remaining;
    for (auto [a, b] : arcs) {
        remaining.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::vector<int> current(points);
    for (int i = 0; i < points; i++) {
        current[i] = i + 1;
    }
    std::vector<int> order;
    while (!current.empty()) {
        bool found = false;
        for (std::size_t p = 0; p + 1 < current.size() && !found; p++) {
            auto it = std::find(remaining.begin(), remaining.end(), std::make_pair(current[p], current[p + 1]));
            if (it != remaining.end()) {
                order.push_back(static_cast<int>(p) + 1);
                remaining.erase(it);
                current.erase(current.begin() + static_cast<std::ptrdiff_t>(p),
                              current.begin() + static_cast<std::ptrdiff_t>(p) + 2);
                found = true;
            }
        }
        if (!found) {
            throw NetworkError("arcs cross or do not form a pairing");
        }
    }
    NetworkComponent c;
    c.discs = points / 4;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        c.ops.push_back(StrandOp::cup(*it));
    }
    return c;
}

std::vector<cplx> eval_component(const PlanarModel &model, const NetworkComponent &c) {
    const int d = model.dim();
    auto v = PlanarModel::vacuum();
    int pairs = 0;
    for (const auto &op : c.ops) {
        switch (op.kind) {
            case StrandOp::Kind::Cup:
                v = model.cup(v, pairs, op.pos);
                pairs++;
                break;
            case StrandOp::Kind::Cap:
                v = model.cap(v, pairs, op.pos);
                pairs--;
                break;
            case StrandOp::Kind::Charge:
                v = model.charge(v, pairs, op.pos, op.value);
                break;
            case StrandOp::Kind::Braid:
                v = model.braid(v, pairs, op.pos, op.value);
                break;
        }
    }
    if (pairs != 2 * c.discs) {
        throw NetworkError(
            "component ends with " + std::to_string(2 * pairs) + " strands but declares " + std::to_string(c.discs) +
            " quons");
    }
    std::vector<cplx> out(ipow(d, c.discs));
    std::vector<int> labels(2 * c.discs);
    for (std::size_t idx = 0; idx < out.size(); idx++) {
        auto g = digits(idx, d, c.discs);
        for (int j = 0; j < c.discs; j++) {
            labels[2 * j] = g[j];
            labels[2 * j + 1] = mod(-g[j], d);
        }
        out[idx] = v[undigits(labels, d)];
    }
    return out;
}

Tensor eval_network(const StringNetwork &net) {
    const int d = net.d;
    PlanarModel model(d);
    // one label per disc; tubes identify the labels of their two ends
    std::map<std::pair<int, int>, int> label;
    std::map<std::pair<int, int>, int> uses;
    int next = 0;
    for (std::size_t c = 0; c < net.components.size(); c++) {
        for (int j = 0; j < net.components[c].discs; j++) {
            label[{static_cast<int>(c), j}] = next++;
        }
    }
    auto key = [&](const DiscRef &r) {
        std::pair<int, int> k{r.component, r.disc};
        if (!label.contains(k)) {
            throw NetworkError(
                "reference to missing quon " + std::to_string(r.disc) + " of component " + std::to_string(r.component));
        }
        uses[k]++;
        return k;
    };
    for (const auto &t : net.tubes) {
        auto ka = key(t.a);
        auto kb = key(t.b);
        if (ka == kb) {
            throw NetworkError("tube joins a quon to itself");
        }
    }
    std::vector<int> out_labels;
    std::vector<int> in_labels;
    for (const auto &r : net.outputs) {
        out_labels.push_back(label[key(r)]);
    }
    for (const auto &r : net.inputs) {
        in_labels.push_back(label[key(r)]);
    }
    for (const auto &[k, l] : label) {
        if (uses[k] != 1) {
            throw NetworkError(
                "quon " + std::to_string(k.second) + " of component " + std::to_string(k.first) + " is used " +
                std::to_string(uses[k]) + " times");
        }
    }
    // merge tube ends: relabel b to a
    std::map<int, int> alias;
    for (const auto &t : net.tubes) {
        alias[label[{t.b.component, t.b.disc}]] = label[{t.a.component, t.a.disc}];
    }
    std::vector<LabeledTensor> parts;
    for (std::size_t c = 0; c < net.components.size(); c++) {
        LabeledTensor lt;
        lt.data = eval_component(model, net.components[c]);
        for (int j = 0; j < net.components[c].discs; j++) {
            int l = label[{static_cast<int>(c), j}];
            lt.labels.push_back(alias.contains(l) ? alias[l] : l);
        }
        parts.push_back(std::move(lt));
    }
    auto result = contract_all(std::move(parts), d);
    cplx scalar = net.scalar * std::pow(static_cast<double>(d), -0.5 * static_cast<double>(net.tubes.size()));
    for (const auto &g : net.genus_circles) {
        if (g.m % 2 != 0 && g.n % 2 != 0) {
            scalar /= std::sqrt(static_cast<double>(d));
        } else {
            scalar = 0;
        }
    }
    return to_tensor(result, out_labels, in_labels, d) * scalar;
}

StringNetwork circle_network(int d, int charge) {
    StringNetwork net;
    net.d = d;
    NetworkComponent c;
    c.ops = {StrandOp::cup(1), StrandOp::charge(1, charge), StrandOp::cap(1)};
    net.components = {c};
    return net;
}

QuonVector quon_basis(int d, Axis axis, int k) {
    NetworkComponent c;
    c.discs = 1;
    switch (axis) {
        case Axis::Z:
            c.ops = {StrandOp::cup(1), StrandOp::cup(3), StrandOp::charge(3, -k), StrandOp::charge(1, k)};
            break;
        case Axis::X:
            // outer arc 1-4 around inner arc 2-3
            c.ops = {StrandOp::cup(1), StrandOp::cup(2), StrandOp::charge(2, -k), StrandOp::charge(1, k)};
            break;
        case Axis::Y:
            c.ops = {StrandOp::cup(1), StrandOp::cup(3), StrandOp::braid(2, -1), StrandOp::charge(2, -k),
                     StrandOp::charge(1, k)};
            break;
    }
    StringNetwork net;
    net.d = d;
    net.components = {c};
    net.outputs = {DiscRef{0, 0}};
    net.scalar = 1.0 / std::sqrt(static_cast<double>(d));
    auto t = eval_network(net);
    auto e = t.entries();
    return QuonVector{d, 1, std::vector<cplx>(e.begin(), e.end())};
}

Tensor quon_basis_matrix(int d, Axis axis) {
    Tensor m(d, 1, 1);
    for (int k = 0; k < d; k++) {
        auto v = quon_basis(d, axis, k);
        for (int h = 0; h < d; h++) {
            m.at(h, k) = v.coeffs[h];
        }
    }
    return m;
}

// ---------------------------------------------------------------------------

BasisSet standard_basis(int d, int out_legs, int in_legs) {
    BasisSet b{d, out_legs, in_legs, {}};
    Tensor shape(d, out_legs, in_legs);
    for (std::size_t i = 0; i < shape.size(); i++) {
        Tensor t(d, out_legs, in_legs);
        t.entries()[i] = 1.0;
        b.vectors.push_back(std::move(t));
    }
    return b;
}

BasisSet random_basis(int d, int out_legs, int in_legs, std::uint64_t seed) {
    auto base = standard_basis(d, out_legs, in_legs);
    const auto n = static_cast<Eigen::Index>(base.vectors.size());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXcd g(n, n);
    for (Eigen::Index i = 0; i < n; i++) {
        for (Eigen::Index j = 0; j < n; j++) {
            g(i, j) = cplx{normal(rng), normal(rng)};
        }
    }
    Eigen::MatrixXcd u = Eigen::HouseholderQR<Eigen::MatrixXcd>(g).householderQ();
    BasisSet b{d, out_legs, in_legs, {}};
    for (Eigen::Index i = 0; i < n; i++) {
        Tensor t(d, out_legs, in_legs);
        for (Eigen::Index j = 0; j < n; j++) {
            t.entries()[j] = u(j, i);
        }
        b.vectors.push_back(std::move(t));
    }
    return b;
}

namespace {

cplx hs_inner(const Tensor &a, const Tensor &b) {
    cplx s = 0;
    auto ea = a.entries();
    auto eb = b.entries();
    for (std::size_t i = 0; i < ea.size(); i++) {
        s += std::conj(ea[i]) * eb[i];
    }
    return s;
}

}  // namespace

void validate_basis(const BasisSet &b, Tolerance tol) {
    const std::size_t dim = ipow(b.d, b.out_legs + b.in_legs);
    if (b.vectors.size() != dim) {
        throw BasisError(
            "basis has " + std::to_string(b.vectors.size()) + " elements, space has dimension " + std::to_string(dim));
    }
    for (std::size_t i = 0; i < b.vectors.size(); i++) {
        const auto &v = b.vectors[i];
        if (v.dim() != b.d || v.out_legs() != b.out_legs || v.in_legs() != b.in_legs) {
            throw BasisError("basis element " + std::to_string(i) + " has the wrong shape");
        }
        for (std::size_t j = i; j < b.vectors.size(); j++) {
            cplx expect = i == j ? 1.0 : 0.0;
            if (std::abs(hs_inner(v, b.vectors[j]) - expect) > tol.eps) {
                throw BasisError(
                    "basis elements " + std::to_string(i) + " and " + std::to_string(j) + " are not orthonormal");
            }
        }
    }
}

namespace {

// Both sides as matrices over (operators m -> n) x (operators m -> m).
Eigen::MatrixXcd joint_left(const Tensor &t, const BasisSet &left) {
    const auto rows = static_cast<Eigen::Index>(t.rows() * t.cols());
    const auto cols = static_cast<Eigen::Index>(left.vectors.size());
    Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(rows, cols);
    for (const auto &alpha : left.vectors) {
        auto ta = tensor_compose(t, alpha);
        auto ea = alpha.entries();
        auto et = ta.entries();
        for (Eigen::Index r = 0; r < rows; r++) {
            if (et[r] == cplx{0}) {
                continue;
            }
            for (Eigen::Index c = 0; c < cols; c++) {
                k(r, c) += et[r] * std::conj(ea[c]);
            }
        }
    }
    return k;
}

Eigen::MatrixXcd joint_right(const Tensor &t, const BasisSet &left, const BasisSet &right) {
    // M_T: X -> T X on the standard operator basis
    const auto rows = static_cast<Eigen::Index>(t.rows() * t.cols());
    const auto cols = static_cast<Eigen::Index>(left.vectors.size());
    Eigen::MatrixXcd mt(rows, cols);
    auto units = standard_basis(left.d, left.out_legs, left.in_legs);
    for (Eigen::Index c = 0; c < cols; c++) {
        auto tx = tensor_compose(t, units.vectors[c]);
        for (Eigen::Index r = 0; r < rows; r++) {
            mt(r, c) = tx.entries()[r];
        }
    }
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(rows, rows);
    for (const auto &beta : right.vectors) {
        Eigen::VectorXcd v(rows);
        for (Eigen::Index r = 0; r < rows; r++) {
            v(r) = beta.entries()[r];
        }
        proj += v * v.adjoint();
    }
    return proj * mt;
}

}  // namespace

JointReport joint_check(int d, int m, int n, const Tensor &t, const BasisSet &left, const BasisSet &right,
                        Tolerance tol, std::uint64_t seed) {
    if (t.dim() != d || t.in_legs() != m || t.out_legs() != n) {
        throw ShapeError("joint_check: T must map m qudits to n qudits");
    }
    if (left.d != d || left.out_legs != m || left.in_legs != m) {
        throw ShapeError("joint_check: left basis must span operators on m qudits");
    }
    if (right.d != d || right.out_legs != n || right.in_legs != m) {
        throw ShapeError("joint_check: right basis must span maps from m to n qudits");
    }
    validate_basis(left, tol);
    validate_basis(right, tol);
    auto lhs = joint_left(t, left);
    auto rhs = joint_right(t, left, right);
    double deviation = (lhs - rhs).cwiseAbs().maxCoeff();

    auto left2 = random_basis(d, m, m, seed);
    auto right2 = random_basis(d, n, m, seed + 1);
    auto lhs2 = joint_left(t, left2);
    auto rhs2 = joint_right(t, left2, right2);
    double invariance = std::max((lhs - lhs2).cwiseAbs().maxCoeff(), (rhs - rhs2).cwiseAbs().maxCoeff());
    return JointReport{deviation, invariance, deviation <= tol.eps && invariance <= tol.eps};
}

}  // namespace quon

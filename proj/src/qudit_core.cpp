#include "quon/qudit_core.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <unordered_set>

#include "quon/error.hpp"

namespace quon {

std::string to_string(GateName g) {
    switch (g) {
        case GateName::X:
            return "X";
        case GateName::Y:
            return "Y";
        case GateName::Z:
            return "Z";
        case GateName::F:
            return "F";
        case GateName::G:
            return "G";
        case GateName::F2:
            return "F2";
        case GateName::CNOT:
            return "CNOT";
    }
    return "?";
}

std::optional<GateName> parse_gate_name(const std::string &s) {
    static const std::map<std::string, GateName> names = {
        {"X", GateName::X}, {"Y", GateName::Y},   {"Z", GateName::Z},      {"F", GateName::F},
        {"G", GateName::G}, {"F2", GateName::F2}, {"CNOT", GateName::CNOT}};
    auto it = names.find(s);
    if (it == names.end()) {
        return std::nullopt;
    }
    return it->second;
}

Tensor gate(int d, GateName name) {
    const auto r = roots(d);
    switch (name) {
        case GateName::X:
            return Tensor::from_fn(d, 1, 1, [&](std::size_t row, std::size_t col) {
                return row == (col + 1) % d ? cplx{1} : cplx{0};
            });
        case GateName::Y:
            return Tensor::from_fn(d, 1, 1, [&](std::size_t row, std::size_t col) {
                auto k = static_cast<std::int64_t>(col);
                return row == static_cast<std::size_t>(mod(k - 1, d)) ? r.zeta_pow(1 - 2 * k) : cplx{0};
            });
        case GateName::Z:
            return Tensor::from_fn(d, 1, 1, [&](std::size_t row, std::size_t col) {
                return row == col ? r.q_pow(static_cast<std::int64_t>(col)) : cplx{0};
            });
        case GateName::F:
            return Tensor::from_fn(d, 1, 1, [&](std::size_t row, std::size_t col) {
                return r.q_pow(static_cast<std::int64_t>(row * col)) / r.sqrt_d;
            });
        case GateName::G:
            return Tensor::from_fn(d, 1, 1, [&](std::size_t row, std::size_t col) {
                auto k = static_cast<std::int64_t>(col);
                return row == col ? r.zeta_pow(k * k) : cplx{0};
            });
        case GateName::F2: {
            auto f = gate(d, GateName::F);
            return tensor_compose(f, f);
        }
        case GateName::CNOT:
            return Tensor::from_fn(d, 2, 2, [&](std::size_t row, std::size_t col) {
                std::size_t k = col / d;
                std::size_t j = col % d;
                return row == ((k + j) % d) * d + j ? cplx{1} : cplx{0};
            });
    }
    throw std::logic_error("unhandled gate");
}

Tensor spider(int d, SpiderSpec spec) {
    Tensor t(d, spec.out_legs, spec.in_legs);
    if (spec.color == SpiderColor::Black) {
        for (int k = 0; k < d; k++) {
            std::size_t row = 0;
            std::size_t col = 0;
            for (int i = 0; i < spec.out_legs; i++) {
                row = row * d + k;
            }
            for (int i = 0; i < spec.in_legs; i++) {
                col = col * d + k;
            }
            t.at(row, col) += 1.0;
        }
        return t;
    }
    // The digit sum of a flat index mod d, computed incrementally.
    auto digit_sum = [d](std::size_t idx) {
        int s = 0;
        while (idx > 0) {
            s += static_cast<int>(idx % d);
            idx /= d;
        }
        return s % d;
    };
    for (std::size_t row = 0; row < t.rows(); row++) {
        int so = digit_sum(row);
        for (std::size_t col = 0; col < t.cols(); col++) {
            if (so == digit_sum(col)) {
                t.at(row, col) = 1.0;
            }
        }
    }
    return t;
}

Tensor resource_state(int d, ResourceName name) {
    const double sd = std::sqrt(static_cast<double>(d));
    switch (name.kind) {
        case ResourceKind::BellPlus:
            return spider(d, {SpiderColor::Black, 0, 2}) * cplx{1.0 / sd};
        case ResourceKind::BellMinus:
            return spider(d, {SpiderColor::White, 0, 2}) * cplx{1.0 / sd};
        case ResourceKind::GHZ:
            if (name.n < 1) {
                throw ShapeError("GHZ state needs at least one party");
            }
            return spider(d, {SpiderColor::Black, 0, name.n}) * cplx{1.0 / sd};
        case ResourceKind::Max:
            if (name.n < 1) {
                throw ShapeError("Max state needs at least one party");
            }
            return spider(d, {SpiderColor::White, 0, name.n}) * cplx{std::pow(d, (1.0 - name.n) / 2.0)};
    }
    throw std::logic_error("unhandled resource");
}

namespace {

// Global phase removed: the first entry with magnitude above the noise floor becomes positive real.
Tensor canonical_phase(const Tensor &m) {
    for (const auto &z : m.entries()) {
        if (std::abs(z) > 1e-9) {
            return m * (std::abs(z) / z);
        }
    }
    return m;
}

std::string phase_key(const Tensor &m) {
    std::string key;
    key.reserve(m.size() * 16);
    for (const auto &z : m.entries()) {
        auto re = static_cast<long long>(std::llround(z.real() * 1e6));
        auto im = static_cast<long long>(std::llround(z.imag() * 1e6));
        key += std::to_string(re);
        key += ',';
        key += std::to_string(im);
        key += ';';
    }
    return key;
}

}  // namespace

std::size_t clifford_order(int d, std::size_t cap) {
    const std::vector<Tensor> gens = {
        gate(d, GateName::X), gate(d, GateName::Z), gate(d, GateName::F), gate(d, GateName::G)};
    std::unordered_set<std::string> seen;
    std::deque<Tensor> frontier;
    auto start = Tensor::identity(d, 1);
    seen.insert(phase_key(start));
    frontier.push_back(start);
    while (!frontier.empty()) {
        auto m = std::move(frontier.front());
        frontier.pop_front();
        for (const auto &g : gens) {
            auto next = canonical_phase(tensor_compose(g, m));
            if (seen.insert(phase_key(next)).second) {
                if (seen.size() > cap) {
                    throw CapExceeded("Clifford closure exceeded " + std::to_string(cap) + " elements");
                }
                frontier.push_back(std::move(next));
            }
        }
    }
    return seen.size();
}

std::size_t clifford_order_formula(int d) {
    double order = std::pow(d, 5);
    int n = d;
    for (int p = 2; p <= n; p++) {
        if (n % p == 0) {
            order *= 1.0 - 1.0 / (static_cast<double>(p) * p);
            while (n % p == 0) {
                n /= p;
            }
        }
    }
    return static_cast<std::size_t>(std::llround(order));
}

Tensor random_state(int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Tensor v(d, 1, 0);
    for (auto &z : v.entries()) {
        z = cplx{normal(rng), normal(rng)};
    }
    return v * cplx{1.0 / v.norm()};
}

Tensor teleport_branch(int d, const Tensor &input_state, int a, int b) {
    if (input_state.dim() != d || input_state.out_legs() != 1 || input_state.in_legs() != 0) {
        throw ShapeError("teleport input must be a single-qudit ket");
    }
    // wires: 0 input, 1 Alice's half of B_-, 2 Bob
    auto state = tensor_kron(input_state, resource_state(d, {ResourceKind::BellMinus}));
    // CNOT controlled by the input wire onto Alice's wire; gate(CNOT) has the target first
    auto swap = Tensor::from_fn(d, 2, 2, [d](std::size_t row, std::size_t col) {
        return row == (col % d) * d + col / d ? cplx{1} : cplx{0};
    });
    auto cnot = tensor_compose(swap, tensor_compose(gate(d, GateName::CNOT), swap));
    state = tensor_compose(tensor_kron(cnot, Tensor::identity(d, 1)), state);
    state = tensor_compose(tensor_kron(gate(d, GateName::F), Tensor::identity(d, 2)), state);

    Tensor bob(d, 1, 0);
    const std::size_t base = (static_cast<std::size_t>(mod(a, d)) * d + mod(b, d)) * d;
    for (int k = 0; k < d; k++) {
        bob.at(k, 0) = state.at(base + k, 0);
    }
    double n = bob.norm();
    if (n < 1e-12) {
        throw ImpossibleOutcome(
            "outcome (" + std::to_string(a) + "," + std::to_string(b) + ") has zero probability");
    }
    return bob * cplx{1.0 / n};
}

Tensor teleport_correction_matrix(int d, const TeleportCorrection &f, int a, int b) {
    int xa = mod(static_cast<std::int64_t>(f.ua) * a + static_cast<std::int64_t>(f.ub) * b, d);
    int zb = mod(static_cast<std::int64_t>(f.va) * a + static_cast<std::int64_t>(f.vb) * b, d);
    auto m = tensor_power(gate(d, GateName::F2), f.c);
    m = tensor_compose(tensor_power(gate(d, GateName::Z), zb), m);
    return tensor_compose(tensor_power(gate(d, GateName::X), xa), m);
}

namespace {

double fidelity(const Tensor &a, const Tensor &b) {
    cplx overlap = 0;
    for (std::size_t i = 0; i < a.rows(); i++) {
        overlap += std::conj(a.at(i, 0)) * b.at(i, 0);
    }
    return std::norm(overlap);
}

std::string describe(int d, const TeleportCorrection &f, int a, int b) {
    int xa = mod(static_cast<std::int64_t>(f.ua) * a + static_cast<std::int64_t>(f.ub) * b, d);
    int zb = mod(static_cast<std::int64_t>(f.va) * a + static_cast<std::int64_t>(f.vb) * b, d);
    std::string s = "X^" + std::to_string(xa) + " Z^" + std::to_string(zb);
    if (f.c != 0) {
        s += " F2";
    }
    return s;
}

}  // namespace

TeleportCorrection teleport_calibrate(int d, std::uint64_t seed) {
    std::vector<Tensor> inputs = {random_state(d, seed), random_state(d, seed + 1)};
    std::vector<std::vector<Tensor>> branches;
    for (const auto &in : inputs) {
        std::vector<Tensor> per;
        for (int a = 0; a < d; a++) {
            for (int b = 0; b < d; b++) {
                per.push_back(teleport_branch(d, in, a, b));
            }
        }
        branches.push_back(std::move(per));
    }
    for (int c = 0; c <= 1; c++) {
        for (int ua = 0; ua < d; ua++) {
            for (int ub = 0; ub < d; ub++) {
                for (int va = 0; va < d; va++) {
                    for (int vb = 0; vb < d; vb++) {
                        TeleportCorrection f{ua, ub, va, vb, c};
                        bool ok = true;
                        for (int a = 0; a < d && ok; a++) {
                            for (int b = 0; b < d && ok; b++) {
                                auto w = teleport_correction_matrix(d, f, a, b);
                                for (std::size_t s = 0; s < inputs.size() && ok; s++) {
                                    auto out = tensor_compose(w, branches[s][a * d + b]);
                                    ok = fidelity(inputs[s], out) >= 1 - 1e-9;
                                }
                            }
                        }
                        if (ok) {
                            return f;
                        }
                    }
                }
            }
        }
    }
    throw NotFound("no correction family restores the input state");
}

TeleportCorrection teleport_frozen_correction(int d) {
    // Bob receives X^-b Z^a |phi> up to phase; undo with X^b Z^-a.
    return TeleportCorrection{0, 1, mod(-1, d), 0, 0};
}

TeleportReport teleport_run(int d, const Tensor &input_state, int a, int b) {
    double norm = input_state.norm();
    if (std::abs(norm - 1) > 1e-9) {
        throw ShapeError("teleport input must have unit norm");
    }
    auto family = teleport_frozen_correction(d);
    auto bob = teleport_branch(d, input_state, a, b);
    auto out = tensor_compose(teleport_correction_matrix(d, family, a, b), bob);
    return TeleportReport{d, mod(a, d), mod(b, d), fidelity(input_state, out), describe(d, family, a, b)};
}

}  // namespace quon

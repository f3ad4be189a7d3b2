#include "quon/contract.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "quon/error.hpp"

namespace quon {

namespace {

std::vector<std::size_t> strides_of(std::size_t rank, int d) {
    std::vector<std::size_t> s(rank, 1);
    for (std::size_t i = rank; i-- > 1;) {
        s[i - 1] = s[i] * d;
    }
    return s;
}

}  // namespace

LabeledTensor permute(const LabeledTensor &t, const std::vector<int> &order, int d) {
    const std::size_t rank = t.labels.size();
    if (order.size() != rank) {
        throw ShapeError("permutation of the wrong rank");
    }
    if (order == t.labels) {
        return t;
    }
    std::vector<std::size_t> src_pos(rank);
    std::vector<bool> used(rank, false);
    for (std::size_t i = 0; i < rank; i++) {
        bool found = false;
        for (std::size_t j = 0; j < rank; j++) {
            if (!used[j] && t.labels[j] == order[i]) {
                src_pos[i] = j;
                used[j] = true;
                found = true;
                break;
            }
        }
        if (!found) {
            throw ShapeError("permutation names a missing label");
        }
    }
    auto src_strides = strides_of(rank, d);
    // stride in the source for each destination leg
    std::vector<std::size_t> step(rank);
    for (std::size_t i = 0; i < rank; i++) {
        step[i] = src_strides[src_pos[i]];
    }
    LabeledTensor out{order, std::vector<cplx>(t.data.size())};
    std::vector<int> counter(rank, 0);
    std::size_t src = 0;
    for (std::size_t dst = 0; dst < out.data.size(); dst++) {
        out.data[dst] = t.data[src];
        for (std::size_t i = rank; i-- > 0;) {
            if (++counter[i] < d) {
                src += step[i];
                break;
            }
            counter[i] = 0;
            src -= step[i] * (d - 1);
        }
    }
    return out;
}

LabeledTensor trace_repeated(const LabeledTensor &t, int d) {
    std::map<int, int> count;
    for (int l : t.labels) {
        count[l]++;
    }
    std::vector<int> keep;
    std::vector<int> traced;
    for (int l : t.labels) {
        if (count[l] == 1) {
            keep.push_back(l);
        } else if (count[l] == 2) {
            if (std::find(traced.begin(), traced.end(), l) == traced.end()) {
                traced.push_back(l);
            }
        } else {
            throw GraphError("label " + std::to_string(l) + " occurs more than twice");
        }
    }
    if (traced.empty()) {
        return t;
    }
    std::vector<int> order = keep;
    for (int l : traced) {
        order.push_back(l);
        order.push_back(l);
    }
    auto p = permute(t, order, d);
    const std::size_t inner = ipow(d, static_cast<int>(2 * traced.size()));
    LabeledTensor out{keep, std::vector<cplx>(p.data.size() / inner, cplx{0})};
    // diagonal entries of each traced pair: both digits equal
    std::vector<std::size_t> diag;
    for (std::size_t idx = 0; idx < inner; idx++) {
        auto ds = digits(idx, d, static_cast<int>(2 * traced.size()));
        bool ok = true;
        for (std::size_t k = 0; k < traced.size(); k++) {
            ok = ok && ds[2 * k] == ds[2 * k + 1];
        }
        if (ok) {
            diag.push_back(idx);
        }
    }
    for (std::size_t i = 0; i < out.data.size(); i++) {
        cplx s = 0;
        for (auto idx : diag) {
            s += p.data[i * inner + idx];
        }
        out.data[i] = s;
    }
    return out;
}

LabeledTensor contract_pair(const LabeledTensor &a0, const LabeledTensor &b0, int d) {
    auto a = trace_repeated(a0, d);
    auto b = trace_repeated(b0, d);
    std::vector<int> shared;
    std::vector<int> free_a;
    std::vector<int> free_b;
    for (int l : a.labels) {
        if (std::find(b.labels.begin(), b.labels.end(), l) != b.labels.end()) {
            shared.push_back(l);
        } else {
            free_a.push_back(l);
        }
    }
    for (int l : b.labels) {
        if (std::find(shared.begin(), shared.end(), l) == shared.end()) {
            free_b.push_back(l);
        }
    }
    std::vector<int> order_a = free_a;
    order_a.insert(order_a.end(), shared.begin(), shared.end());
    std::vector<int> order_b = shared;
    order_b.insert(order_b.end(), free_b.begin(), free_b.end());
    auto pa = permute(a, order_a, d);
    auto pb = permute(b, order_b, d);
    const std::size_t m = ipow(d, static_cast<int>(free_a.size()));
    const std::size_t k = ipow(d, static_cast<int>(shared.size()));
    const std::size_t n = ipow(d, static_cast<int>(free_b.size()));
    LabeledTensor out;
    out.labels = free_a;
    out.labels.insert(out.labels.end(), free_b.begin(), free_b.end());
    out.data.assign(m * n, cplx{0});
    for (std::size_t i = 0; i < m; i++) {
        for (std::size_t s = 0; s < k; s++) {
            cplx x = pa.data[i * k + s];
            if (x == cplx{0}) {
                continue;
            }
            const cplx *row = &pb.data[s * n];
            cplx *dst = &out.data[i * n];
            for (std::size_t j = 0; j < n; j++) {
                dst[j] += x * row[j];
            }
        }
    }
    return out;
}

LabeledTensor contract_all(std::vector<LabeledTensor> parts, int d) {
    if (parts.empty()) {
        return LabeledTensor{{}, {cplx{1}}};
    }
    for (auto &p : parts) {
        p = trace_repeated(p, d);
    }
    while (parts.size() > 1) {
        std::size_t best_i = 0;
        std::size_t best_j = 1;
        std::size_t best_rank = std::numeric_limits<std::size_t>::max();
        bool best_shares = false;
        for (std::size_t i = 0; i < parts.size(); i++) {
            for (std::size_t j = i + 1; j < parts.size(); j++) {
                std::size_t shared = 0;
                for (int l : parts[i].labels) {
                    shared += static_cast<std::size_t>(
                        std::count(parts[j].labels.begin(), parts[j].labels.end(), l));
                }
                std::size_t rank = parts[i].labels.size() + parts[j].labels.size() - 2 * shared;
                bool shares = shared > 0;
                // prefer pairs that actually contract; among them the smallest result
                if ((shares && !best_shares) || (shares == best_shares && rank < best_rank)) {
                    best_i = i;
                    best_j = j;
                    best_rank = rank;
                    best_shares = shares;
                }
            }
        }
        auto merged = contract_pair(parts[best_i], parts[best_j], d);
        parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(best_j));
        parts[best_i] = std::move(merged);
    }
    return parts.front();
}

Tensor to_tensor(const LabeledTensor &t, const std::vector<int> &out_labels, const std::vector<int> &in_labels, int d) {
    std::vector<int> order = out_labels;
    order.insert(order.end(), in_labels.begin(), in_labels.end());
    auto p = permute(t, order, d);
    return Tensor(d, static_cast<int>(out_labels.size()), static_cast<int>(in_labels.size()), std::move(p.data));
}

LabeledTensor from_tensor(const Tensor &t, std::vector<int> out_labels, const std::vector<int> &in_labels) {
    if (static_cast<int>(out_labels.size()) != t.out_legs() || static_cast<int>(in_labels.size()) != t.in_legs()) {
        throw ShapeError("label count does not match tensor legs");
    }
    out_labels.insert(out_labels.end(), in_labels.begin(), in_labels.end());
    auto e = t.entries();
    return LabeledTensor{std::move(out_labels), std::vector<cplx>(e.begin(), e.end())};
}

}  // namespace quon

#include "quon/planar.hpp"

#include <cmath>

#include "quon/error.hpp"
#include "quon/pf_algebra.hpp"

namespace quon {

PlanarModel::PlanarModel(int d) : r_(roots(d)) {
    // lambda = zeta^(d-1), mu = lambda q
    mu_ = r_.zeta_pow(d - 1) * r_.q;
    quarter_ = std::pow(static_cast<double>(d), 0.25);
    // crossing = sum_j omega^(-1/2) zeta^(j^2) P_j(u), P_j = (1/d) sum_k q^(-jk) u^k
    const cplx s = r_.sqrt_omega();
    beta_pos_.assign(d, 0);
    beta_neg_.assign(d, 0);
    for (int k = 0; k < d; k++) {
        for (int j = 0; j < d; j++) {
            auto jj = static_cast<std::int64_t>(j) * j;
            auto jk = static_cast<std::int64_t>(j) * k;
            beta_pos_[k] += r_.zeta_pow(jj) * r_.q_pow(-jk);
            beta_neg_[k] += r_.zeta_pow(-jj) * r_.q_pow(-jk);
        }
        beta_pos_[k] /= s * static_cast<double>(d);
        beta_neg_[k] *= s / static_cast<double>(d);
    }
}

void PlanarModel::check(const Vec &v, int pairs) const {
    if (pairs < 0 || v.size() != ipow(r_.d, pairs)) {
        throw NetworkError("planar vector does not hold " + std::to_string(pairs) + " strand pairs");
    }
}

PlanarModel::Vec PlanarModel::charge(const Vec &v, int pairs, int strand, int g) const {
    check(v, pairs);
    if (strand < 1 || strand > 2 * pairs) {
        throw NetworkError("charge on strand " + std::to_string(strand) + " of " + std::to_string(2 * pairs));
    }
    Vec out(v.size());
    jw_apply(r_, pairs, strand, g, v, out);
    return out;
}

PlanarModel::Vec PlanarModel::pair_charge(const Vec &v, int pairs, int pos) const {
    auto w = charge(v, pairs, pos + 1, -1);
    w = charge(w, pairs, pos, 1);
    for (auto &z : w) {
        z *= mu_;
    }
    return w;
}

PlanarModel::Vec PlanarModel::braid(const Vec &v, int pairs, int pos, int sign) const {
    if (pos < 1 || pos + 1 > 2 * pairs) {
        throw NetworkError("crossing at position " + std::to_string(pos) + " of " + std::to_string(2 * pairs));
    }
    const auto &beta = sign > 0 ? beta_pos_ : beta_neg_;
    Vec out(v.size(), cplx{0});
    Vec w = v;
    for (int k = 0; k < r_.d; k++) {
        for (std::size_t i = 0; i < w.size(); i++) {
            out[i] += beta[k] * w[i];
        }
        if (k + 1 < r_.d) {
            w = pair_charge(w, pairs, pos);
        }
    }
    return out;
}

PlanarModel::Vec PlanarModel::jones(const Vec &v, int pairs, int pos) const {
    if (pos < 1 || pos + 1 > 2 * pairs) {
        throw NetworkError("Jones projection at position " + std::to_string(pos));
    }
    Vec out(v.size(), cplx{0});
    Vec w = v;
    for (int k = 0; k < r_.d; k++) {
        for (std::size_t i = 0; i < w.size(); i++) {
            out[i] += w[i];
        }
        if (k + 1 < r_.d) {
            w = pair_charge(w, pairs, pos);
        }
    }
    for (auto &z : out) {
        z /= r_.sqrt_d;
    }
    return out;
}

PlanarModel::Vec PlanarModel::cup(const Vec &v, int pairs, int pos) const {
    check(v, pairs);
    if (pos < 1 || pos > 2 * pairs + 1) {
        throw NetworkError("cup at position " + std::to_string(pos) + " with " + std::to_string(2 * pairs) + " strands");
    }
    if (pos % 2 == 0) {
        return jones(cup(v, pairs, pos - 1), pairs + 1, pos);
    }
    // new pair j at neutral label 0
    const int j = (pos + 1) / 2;
    const std::size_t lo_size = ipow(r_.d, pairs - j + 1);
    Vec out(v.size() * r_.d, cplx{0});
    for (std::size_t idx = 0; idx < v.size(); idx++) {
        std::size_t hi = idx / lo_size;
        std::size_t lo = idx % lo_size;
        out[hi * lo_size * r_.d + lo] = quarter_ * v[idx];
    }
    return out;
}

PlanarModel::Vec PlanarModel::cap(const Vec &v, int pairs, int pos) const {
    check(v, pairs);
    if (pos < 1 || pos + 1 > 2 * pairs) {
        throw NetworkError("cap at position " + std::to_string(pos) + " with " + std::to_string(2 * pairs) + " strands");
    }
    if (pos % 2 == 0) {
        return cap(jones(v, pairs, pos), pairs, pos - 1);
    }
    const int j = (pos + 1) / 2;
    const std::size_t lo_size = ipow(r_.d, pairs - j);
    Vec out(v.size() / r_.d, cplx{0});
    for (std::size_t idx = 0; idx < out.size(); idx++) {
        std::size_t hi = idx / lo_size;
        std::size_t lo = idx % lo_size;
        out[idx] = quarter_ * v[hi * lo_size * r_.d + lo];
    }
    return out;
}

}  // namespace quon

#include "quon/pf_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "quon/error.hpp"

namespace quon {

namespace {

void check_compatible(const PFElement &a, const PFElement &b) {
    if (a.d != b.d || a.n_sites != b.n_sites) {
        throw AlgebraMismatch(
            "PF elements of order " + std::to_string(a.d) + " on " + std::to_string(a.n_sites) + " sites and order " +
            std::to_string(b.d) + " on " + std::to_string(b.n_sites) + " sites");
    }
}

void accumulate(PFElement &e, const PFElement::Exponents &alpha, cplx c) {
    auto [it, inserted] = e.terms.try_emplace(alpha, c);
    if (!inserted) {
        it->second += c;
    }
}

void prune(PFElement &e) {
    std::erase_if(e.terms, [](const auto &kv) { return std::abs(kv.second) < kPruneThreshold; });
}

}  // namespace

PFElement pf_zero(int d, int n_sites) {
    if (d < 1) {
        throw InvalidDimension("PF order must be >= 1");
    }
    return PFElement{d, n_sites, {}};
}

PFElement pf_unit(int d, int n_sites) {
    auto e = pf_zero(d, n_sites);
    e.terms[PFElement::Exponents(n_sites, 0)] = 1.0;
    return e;
}

PFElement pf_generator(int d, int n_sites, int m, int k) {
    if (m < 1 || m > n_sites) {
        throw SiteError("site " + std::to_string(m) + " outside 1.." + std::to_string(n_sites));
    }
    auto e = pf_zero(d, n_sites);
    PFElement::Exponents alpha(n_sites, 0);
    alpha[m - 1] = mod(k, d);
    e.terms[alpha] = 1.0;
    return e;
}

PFElement pf_monomial(int d, std::span<const int> alpha, cplx coeff) {
    auto e = pf_zero(d, static_cast<int>(alpha.size()));
    PFElement::Exponents a(alpha.begin(), alpha.end());
    for (auto &x : a) {
        x = mod(x, d);
    }
    e.terms[a] = coeff;
    prune(e);
    return e;
}

PFElement pf_add(const PFElement &a, const PFElement &b) {
    check_compatible(a, b);
    PFElement r = a;
    for (const auto &[alpha, c] : b.terms) {
        accumulate(r, alpha, c);
    }
    prune(r);
    return r;
}

PFElement pf_scale(const PFElement &a, cplx s) {
    PFElement r = a;
    for (auto &[alpha, c] : r.terms) {
        c *= s;
    }
    prune(r);
    return r;
}

PFElement pf_mul(const PFElement &a, const PFElement &b) {
    check_compatible(a, b);
    const auto r = roots(a.d);
    const int n = a.n_sites;
    PFElement out = pf_zero(a.d, n);
    for (const auto &[alpha, ca] : a.terms) {
        for (const auto &[beta, cb] : b.terms) {
            // c^alpha c^beta = q^(-sum_{m<m'} beta_m alpha_m') c^(alpha+beta)
            std::int64_t twist = 0;
            std::int64_t alpha_right = 0;
            for (int m = n - 1; m >= 0; m--) {
                twist += static_cast<std::int64_t>(beta[m]) * alpha_right;
                alpha_right += alpha[m];
            }
            PFElement::Exponents sum(n);
            for (int m = 0; m < n; m++) {
                sum[m] = (alpha[m] + beta[m]) % a.d;
            }
            accumulate(out, sum, ca * cb * r.q_pow(-twist));
        }
    }
    prune(out);
    return out;
}

PFElement pf_power(const PFElement &a, int k) {
    PFElement r = pf_unit(a.d, a.n_sites);
    for (int i = 0; i < k; i++) {
        r = pf_mul(r, a);
    }
    return r;
}

PFElement pf_adjoint(const PFElement &a) {
    PFElement out = pf_zero(a.d, a.n_sites);
    for (const auto &[alpha, c] : a.terms) {
        // (c_1^a1 ... c_n^an)^* = c_n^-an ... c_1^-a1, then reorder
        PFElement term = pf_scale(pf_unit(a.d, a.n_sites), std::conj(c));
        for (int m = a.n_sites; m >= 1; m--) {
            if (alpha[m - 1] != 0) {
                term = pf_mul(term, pf_generator(a.d, a.n_sites, m, -alpha[m - 1]));
            }
        }
        out = pf_add(out, term);
    }
    return out;
}

ChargeValue pf_charge(const PFElement &a) {
    std::optional<int> charge;
    for (const auto &[alpha, c] : a.terms) {
        int total = 0;
        for (int x : alpha) {
            total += x;
        }
        total = mod(total, a.d);
        if (charge && *charge != total) {
            return ChargeValue{};
        }
        charge = total;
    }
    return ChargeValue{charge.value_or(0)};
}

std::vector<int> pf_support(const PFElement &a) {
    std::set<int> sites;
    for (const auto &[alpha, c] : a.terms) {
        for (int m = 0; m < a.n_sites; m++) {
            if (alpha[m] != 0) {
                sites.insert(m + 1);
            }
        }
    }
    return {sites.begin(), sites.end()};
}

PFElement pf_twisted_mul(const PFElement &a, const PFElement &b) {
    check_compatible(a, b);
    auto ca = pf_charge(a);
    auto cb = pf_charge(b);
    if (!ca.homogeneous() || !cb.homogeneous()) {
        throw TwistError("twisted product needs charge-homogeneous factors");
    }
    auto sa = pf_support(a);
    auto sb = pf_support(b);
    if (!sa.empty() && !sb.empty() && sa.back() >= sb.front()) {
        throw TwistError("left factor must be supported strictly left of the right factor");
    }
    auto r = roots(a.d);
    return pf_scale(pf_mul(a, b), r.zeta_pow(-static_cast<std::int64_t>(*ca.value) * *cb.value));
}

double pf_distance(const PFElement &a, const PFElement &b) {
    check_compatible(a, b);
    double m = 0;
    for (const auto &[alpha, c] : a.terms) {
        auto it = b.terms.find(alpha);
        m = std::max(m, std::abs(c - (it == b.terms.end() ? cplx{0} : it->second)));
    }
    for (const auto &[alpha, c] : b.terms) {
        if (!a.terms.contains(alpha)) {
            m = std::max(m, std::abs(c));
        }
    }
    return m;
}

std::string to_string(const PFElement &a) {
    if (a.terms.empty()) {
        return "0";
    }
    std::ostringstream out;
    bool first = true;
    for (const auto &[alpha, c] : a.terms) {
        if (!first) {
            out << " + ";
        }
        first = false;
        out << "(" << format_complex(c, 10) << ") *";
        bool any = false;
        for (int m = 0; m < a.n_sites; m++) {
            if (alpha[m] != 0) {
                out << " c" << (m + 1) << "^" << alpha[m];
                any = true;
            }
        }
        if (!any) {
            out << " 1";
        }
    }
    return out.str();
}

void jw_apply(const RootSystem &r, int pairs, int site, int g, std::span<const cplx> in, std::span<cplx> out) {
    const int d = r.d;
    const int j = (site + 1) / 2;  // 1-based qudit carrying the site
    g = mod(g, d);
    std::fill(out.begin(), out.end(), cplx{0});
    // stride of qudit j in the flat index (qudit 1 most significant)
    const std::size_t stride = ipow(d, pairs - j);
    cplx even_phase = 1.0;
    if (site % 2 == 0) {
        // (lambda X Z^-1)^g = lambda^g q^(-g(g-1)/2) X^g Z^-g
        even_phase = r.zeta_pow(static_cast<std::int64_t>(g) * (d - 1)) *
                     r.q_pow(-static_cast<std::int64_t>(g) * (g - 1) / 2);
    }
    for (std::size_t idx = 0; idx < in.size(); idx++) {
        if (in[idx] == cplx{0}) {
            continue;
        }
        std::size_t rest = idx;
        std::int64_t prefix = 0;
        int aj = 0;
        for (int i = pairs; i >= 1; i--) {
            int digit = static_cast<int>(rest % d);
            rest /= d;
            if (i < j) {
                prefix += digit;
            } else if (i == j) {
                aj = digit;
            }
        }
        std::int64_t exponent = -static_cast<std::int64_t>(g) * prefix;
        cplx phase = 1.0;
        if (site % 2 == 0) {
            exponent -= static_cast<std::int64_t>(g) * aj;
            phase = even_phase;
        }
        int shifted = (aj + g) % d;
        std::size_t target = idx + static_cast<std::size_t>(shifted - aj) * stride;
        if (shifted < aj) {
            target = idx - static_cast<std::size_t>(aj - shifted) * stride;
        }
        out[target] += phase * r.q_pow(exponent) * in[idx];
    }
}

Tensor jw_rep(const PFElement &a) {
    if (a.n_sites % 2 != 0) {
        throw OddSiteError("Jordan-Wigner image needs an even number of sites, got " + std::to_string(a.n_sites));
    }
    const int pairs = a.n_sites / 2;
    const auto r = roots(a.d);
    Tensor out(a.d, pairs, pairs);
    const std::size_t dim = out.rows();
    std::vector<cplx> v(dim), w(dim);
    for (const auto &[alpha, c] : a.terms) {
        for (std::size_t col = 0; col < dim; col++) {
            std::fill(v.begin(), v.end(), cplx{0});
            v[col] = 1.0;
            for (int m = a.n_sites; m >= 1; m--) {
                if (alpha[m - 1] == 0) {
                    continue;
                }
                jw_apply(r, pairs, m, alpha[m - 1], v, w);
                std::swap(v, w);
            }
            for (std::size_t row = 0; row < dim; row++) {
                out.at(row, col) += c * v[row];
            }
        }
    }
    return out;
}

}  // namespace quon

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quon/numerics.hpp"
#include "quon/tensor.hpp"

namespace quon {

/// Element of the parafermion algebra PF_n of order d in normal form
/// sum_alpha coeff * c_1^alpha_1 ... c_n^alpha_n.
struct PFElement {
    using Exponents = std::vector<int>;

    int d = 1;
    int n_sites = 0;
    std::map<Exponents, cplx> terms;

    bool is_zero() const {
        return terms.empty();
    }
};

inline constexpr double kPruneThreshold = 1e-14;

/// Charge of a homogeneous element; empty for a mix of charges.
struct ChargeValue {
    std::optional<int> value;

    bool homogeneous() const {
        return value.has_value();
    }
};

PFElement pf_zero(int d, int n_sites);
PFElement pf_unit(int d, int n_sites);
/// c_m^(k mod d); throws SiteError unless 1 <= m <= n_sites.
PFElement pf_generator(int d, int n_sites, int m, int k);
/// coeff * c^alpha with alpha reduced mod d.
PFElement pf_monomial(int d, std::span<const int> alpha, cplx coeff = 1.0);

PFElement pf_add(const PFElement &a, const PFElement &b);
PFElement pf_scale(const PFElement &a, cplx s);
PFElement pf_mul(const PFElement &a, const PFElement &b);
PFElement pf_power(const PFElement &a, int k);
PFElement pf_adjoint(const PFElement &a);
ChargeValue pf_charge(const PFElement &a);
/// zeta^(-|a||b|) a*b for homogeneous a supported strictly left of b.
PFElement pf_twisted_mul(const PFElement &a, const PFElement &b);

/// Largest coefficient difference over the union of supports.
double pf_distance(const PFElement &a, const PFElement &b);

/// Sites carrying a nonzero exponent in some term, 1-based and sorted.
std::vector<int> pf_support(const PFElement &a);

/// "coeff * c1^a1 c2^a2 ..." terms joined by " + ", or "0".
std::string to_string(const PFElement &a);

/// Jordan-Wigner image: a d^(n/2) x d^(n/2) matrix. Throws OddSiteError for odd n.
Tensor jw_rep(const PFElement &a);

/// Applies c_site^g in the Jordan-Wigner representation to a vector over
/// `pairs` qudits, writing the result into `out` (same size, overwritten).
///
/// Site 2j-1 acts as Z^-1 x ... x Z^-1 x X on qudit j, site 2j as the same
/// string times lambda X Z^-1 with lambda = zeta^(d-1).
void jw_apply(const RootSystem &r, int pairs, int site, int g, std::span<const cplx> in, std::span<cplx> out);

}  // namespace quon

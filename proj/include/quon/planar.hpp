#pragma once

#include <vector>

#include "quon/numerics.hpp"

namespace quon {

/// Vectors of planar string diagrams with 2k open strands in the
/// Jordan-Wigner chart: the basis state |a_1 ... a_k> is
/// c_1^a_1 c_3^a_2 ... c_{2k-1}^a_k applied to the vacuum, a_1 most significant.
///
/// Strands and positions are 1-based. Every operation takes the current pair
/// count k and returns a new vector; nothing is cached.
class PlanarModel {
   public:
    using Vec = std::vector<cplx>;

    explicit PlanarModel(int d);

    int dim() const {
        return r_.d;
    }
    const RootSystem &root_system() const {
        return r_;
    }

    /// Vacuum: the empty diagram, a single coefficient 1.
    static Vec vacuum() {
        return {cplx{1}};
    }

    /// Charge g inserted at the top of a strand.
    Vec charge(const Vec &v, int pairs, int strand, int g) const;
    /// u_i = mu c_i c_{i+1}^-1, the neutral pair charge across positions i, i+1.
    Vec pair_charge(const Vec &v, int pairs, int pos) const;
    /// Crossing of strands pos, pos+1; sign +1 or -1.
    Vec braid(const Vec &v, int pairs, int pos, int sign) const;
    /// Temperley-Lieb element e_pos = cup after cap, normalized so e^2 = sqrt(d) e.
    Vec jones(const Vec &v, int pairs, int pos) const;
    /// Cup whose endpoints become strands pos, pos+1; returns pairs+1 pairs.
    Vec cup(const Vec &v, int pairs, int pos) const;
    /// Cap joining strands pos, pos+1; returns pairs-1 pairs.
    Vec cap(const Vec &v, int pairs, int pos) const;

   private:
    void check(const Vec &v, int pairs) const;

    RootSystem r_;
    cplx mu_;
    double quarter_;  // d^(1/4)
    std::vector<cplx> beta_pos_;
    std::vector<cplx> beta_neg_;
};

}  // namespace quon

#pragma once

#include <complex>
#include <cstdint>

namespace quon {

using cplx = std::complex<double>;

/// Comparison slack for floating-point identities.
struct Tolerance {
    explicit Tolerance(double eps = 1e-9);
    double eps;
};

/// The scalars attached to a qudit dimension d.
///
/// q = exp(2 pi i / d) and zeta is a square root of q with zeta^(d^2) = 1:
/// zeta = q^((d+1)/2) for odd d and exp(pi i / d) for even d. In both cases
/// zeta = exp(pi i s / d) for an integer s, so every power of zeta (and of q)
/// is evaluated from an exact integer exponent reduced mod 2d.
struct RootSystem {
    int d;
    cplx q;
    cplx zeta;
    cplx omega;
    double sqrt_d;

    /// zeta^k for any integer k.
    cplx zeta_pow(std::int64_t k) const;
    /// q^k for any integer k.
    cplx q_pow(std::int64_t k) const;
    /// omega^(1/2) on the principal branch.
    cplx sqrt_omega() const;

    int zeta_step;  // s in zeta = exp(pi i s / d)
};

/// Throws InvalidDimension for d < 1.
RootSystem roots(int d);

/// Non-negative remainder.
inline int mod(std::int64_t a, std::int64_t m) {
    auto r = a % m;
    return static_cast<int>(r < 0 ? r + m : r);
}

/// Integer power d^k.
std::size_t ipow(int d, int k);

}  // namespace quon

#include "quon/numerics.hpp"

#include <cmath>
#include <numbers>

#include "quon/error.hpp"

namespace quon {

Tolerance::Tolerance(double eps) : eps(eps) {
    if (!(eps > 0)) {
        throw std::invalid_argument("tolerance must be positive");
    }
}

cplx RootSystem::zeta_pow(std::int64_t k) const {
    // zeta^k = exp(pi i (s k mod 2d) / d)
    int e = mod(static_cast<std::int64_t>(zeta_step) * mod(k, 2 * d), 2 * d);
    if (e == 0) {
        return 1.0;
    }
    if (e == d) {
        return -1.0;
    }
    return std::polar(1.0, std::numbers::pi * e / d);
}

cplx RootSystem::q_pow(std::int64_t k) const {
    return zeta_pow(2 * mod(k, d));
}

cplx RootSystem::sqrt_omega() const {
    return std::sqrt(omega);
}

RootSystem roots(int d) {
    if (d < 1) {
        throw InvalidDimension("qudit dimension must be >= 1, got " + std::to_string(d));
    }
    RootSystem r{};
    r.d = d;
    r.zeta_step = (d % 2 == 0) ? 1 : d + 1;
    r.q = r.zeta_pow(2);
    r.zeta = r.zeta_pow(1);
    r.sqrt_d = std::sqrt(static_cast<double>(d));
    cplx gauss = 0;
    for (int j = 0; j < d; j++) {
        gauss += r.zeta_pow(static_cast<std::int64_t>(j) * j);
    }
    r.omega = gauss / r.sqrt_d;
    return r;
}

std::size_t ipow(int d, int k) {
    std::size_t r = 1;
    for (int i = 0; i < k; i++) {
        r *= static_cast<std::size_t>(d);
    }
    return r;
}

}  // namespace quon

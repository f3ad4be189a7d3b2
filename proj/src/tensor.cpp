#include "quon/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "quon/error.hpp"

namespace quon {

Tensor::Tensor(int d, int out_legs, int in_legs)
    : d_(d), out_(out_legs), in_(in_legs), rows_(ipow(d, out_legs)), cols_(ipow(d, in_legs)) {
    if (d < 1) {
        throw InvalidDimension("tensor dimension must be >= 1");
    }
    if (out_legs < 0 || in_legs < 0) {
        throw ShapeError("negative leg count");
    }
    data_.assign(rows_ * cols_, cplx{0});
}

Tensor::Tensor(int d, int out_legs, int in_legs, std::vector<cplx> entries) : Tensor(d, out_legs, in_legs) {
    if (entries.size() != data_.size()) {
        throw ShapeError(
            "expected " + std::to_string(data_.size()) + " entries, got " + std::to_string(entries.size()));
    }
    data_ = std::move(entries);
}

Tensor Tensor::identity(int d, int legs) {
    Tensor t(d, legs, legs);
    for (std::size_t i = 0; i < t.rows(); i++) {
        t.at(i, i) = 1;
    }
    return t;
}

Tensor Tensor::scalar(int d, cplx value) {
    return Tensor(d, 0, 0, {value});
}

Tensor Tensor::ket(int d, std::span<const int> indices) {
    Tensor t(d, static_cast<int>(indices.size()), 0);
    t.at(undigits(indices, d), 0) = 1;
    return t;
}

Tensor Tensor::adjoint() const {
    Tensor t(d_, in_, out_);
    for (std::size_t r = 0; r < rows_; r++) {
        for (std::size_t c = 0; c < cols_; c++) {
            t.at(c, r) = std::conj(at(r, c));
        }
    }
    return t;
}

Tensor Tensor::operator*(cplx s) const {
    Tensor t = *this;
    for (auto &x : t.data_) {
        x *= s;
    }
    return t;
}

Tensor Tensor::operator+(const Tensor &other) const {
    if (!same_shape(other)) {
        throw ShapeError("tensor sum of different shapes");
    }
    Tensor t = *this;
    for (std::size_t i = 0; i < data_.size(); i++) {
        t.data_[i] += other.data_[i];
    }
    return t;
}

Tensor Tensor::operator-(const Tensor &other) const {
    return *this + other * cplx{-1};
}

double Tensor::norm() const {
    double s = 0;
    for (const auto &x : data_) {
        s += std::norm(x);
    }
    return std::sqrt(s);
}

double Tensor::max_abs() const {
    double m = 0;
    for (const auto &x : data_) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

bool Tensor::same_shape(const Tensor &other) const {
    return d_ == other.d_ && out_ == other.out_ && in_ == other.in_;
}

Tensor tensor_compose(const Tensor &a, const Tensor &b) {
    if (a.dim() != b.dim()) {
        throw ShapeError("compose: dimension mismatch");
    }
    if (a.in_legs() != b.out_legs()) {
        throw ShapeError(
            "compose: outer tensor has " + std::to_string(a.in_legs()) + " inputs but inner tensor has " +
            std::to_string(b.out_legs()) + " outputs");
    }
    Tensor t(a.dim(), a.out_legs(), b.in_legs());
    for (std::size_t r = 0; r < a.rows(); r++) {
        for (std::size_t k = 0; k < a.cols(); k++) {
            cplx x = a.at(r, k);
            if (x == cplx{0}) {
                continue;
            }
            for (std::size_t c = 0; c < b.cols(); c++) {
                t.at(r, c) += x * b.at(k, c);
            }
        }
    }
    return t;
}

Tensor tensor_kron(const Tensor &a, const Tensor &b) {
    if (a.dim() != b.dim()) {
        throw ShapeError("kron: dimension mismatch");
    }
    Tensor t(a.dim(), a.out_legs() + b.out_legs(), a.in_legs() + b.in_legs());
    for (std::size_t ra = 0; ra < a.rows(); ra++) {
        for (std::size_t ca = 0; ca < a.cols(); ca++) {
            cplx x = a.at(ra, ca);
            if (x == cplx{0}) {
                continue;
            }
            for (std::size_t rb = 0; rb < b.rows(); rb++) {
                for (std::size_t cb = 0; cb < b.cols(); cb++) {
                    t.at(ra * b.rows() + rb, ca * b.cols() + cb) = x * b.at(rb, cb);
                }
            }
        }
    }
    return t;
}

Tensor tensor_power(const Tensor &a, int k) {
    if (a.in_legs() != a.out_legs()) {
        throw ShapeError("power of a non-square tensor");
    }
    Tensor r = Tensor::identity(a.dim(), a.in_legs());
    for (int i = 0; i < k; i++) {
        r = tensor_compose(a, r);
    }
    return r;
}

double max_deviation(const Tensor &a, const Tensor &b) {
    if (!a.same_shape(b)) {
        throw ShapeError("deviation between tensors of different shapes");
    }
    double m = 0;
    auto ea = a.entries();
    auto eb = b.entries();
    for (std::size_t i = 0; i < ea.size(); i++) {
        m = std::max(m, std::abs(ea[i] - eb[i]));
    }
    return m;
}

std::optional<cplx> compare_up_to_scalar(const Tensor &a, const Tensor &b, Tolerance tol) {
    if (!a.same_shape(b)) {
        throw ShapeError("compare_up_to_scalar: shape mismatch");
    }
    auto eb = b.entries();
    std::size_t best = 0;
    for (std::size_t i = 1; i < eb.size(); i++) {
        if (std::abs(eb[i]) > std::abs(eb[best])) {
            best = i;
        }
    }
    if (std::abs(eb[best]) <= tol.eps) {
        if (a.max_abs() <= tol.eps) {
            return cplx{1};
        }
        return std::nullopt;
    }
    cplx lambda = a.entries()[best] / eb[best];
    if (max_deviation(a, b * lambda) <= tol.eps) {
        return lambda;
    }
    return std::nullopt;
}

bool is_unitary(const Tensor &a, Tolerance tol) {
    if (a.rows() != a.cols()) {
        return false;
    }
    auto p = tensor_compose(a.adjoint(), a);
    return max_deviation(p, Tensor::identity(a.dim(), a.in_legs())) <= tol.eps;
}

std::vector<int> digits(std::size_t index, int d, int count) {
    std::vector<int> out(count);
    for (int i = count - 1; i >= 0; i--) {
        out[i] = static_cast<int>(index % d);
        index /= d;
    }
    return out;
}

std::size_t undigits(std::span<const int> ds, int d) {
    std::size_t r = 0;
    for (int x : ds) {
        r = r * d + static_cast<std::size_t>(mod(x, d));
    }
    return r;
}

std::string format_complex(cplx z, int precision) {
    auto clean = [](double x) { return std::abs(x) < 1e-15 ? 0.0 : x; };
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.*g,%.*g", precision, clean(z.real()), precision, clean(z.imag()));
    return buf;
}

std::string format_tensor(const Tensor &t, int precision) {
    std::ostringstream out;
    bool first = true;
    for (const auto &z : t.entries()) {
        if (!first) {
            out << ' ';
        }
        first = false;
        out << format_complex(z, precision);
    }
    return out.str();
}

}  // namespace quon

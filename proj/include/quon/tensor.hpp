#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quon/numerics.hpp"

namespace quon {

/// Dense complex array over (C^d)^(out+in), viewed as a d^out x d^in matrix.
///
/// Entries are row-major with the output multi-index selecting the row and
/// the input multi-index selecting the column; within a multi-index the first
/// leg is the most significant digit.
class Tensor {
   public:
    Tensor() = default;
    Tensor(int d, int out_legs, int in_legs);
    Tensor(int d, int out_legs, int in_legs, std::vector<cplx> entries);

    static Tensor identity(int d, int legs);
    static Tensor scalar(int d, cplx value);
    /// Column vector |i_1 ... i_k>.
    static Tensor ket(int d, std::span<const int> indices);
    /// Build a d^out x d^in matrix entrywise from f(row, col).
    template <typename Fn>
    static Tensor from_fn(int d, int out_legs, int in_legs, Fn &&f) {
        Tensor t(d, out_legs, in_legs);
        for (std::size_t r = 0; r < t.rows(); r++) {
            for (std::size_t c = 0; c < t.cols(); c++) {
                t.at(r, c) = f(r, c);
            }
        }
        return t;
    }

    int dim() const {
        return d_;
    }
    int out_legs() const {
        return out_;
    }
    int in_legs() const {
        return in_;
    }
    std::size_t rows() const {
        return rows_;
    }
    std::size_t cols() const {
        return cols_;
    }
    std::size_t size() const {
        return data_.size();
    }

    cplx &at(std::size_t row, std::size_t col) {
        return data_[row * cols_ + col];
    }
    const cplx &at(std::size_t row, std::size_t col) const {
        return data_[row * cols_ + col];
    }
    std::span<const cplx> entries() const {
        return data_;
    }
    std::span<cplx> entries() {
        return data_;
    }

    Tensor adjoint() const;
    Tensor operator*(cplx s) const;
    Tensor operator+(const Tensor &other) const;
    Tensor operator-(const Tensor &other) const;

    double norm() const;
    double max_abs() const;
    bool same_shape(const Tensor &other) const;

   private:
    int d_ = 1;
    int out_ = 0;
    int in_ = 0;
    std::size_t rows_ = 1;
    std::size_t cols_ = 1;
    std::vector<cplx> data_ = {cplx{0}};
};

inline Tensor operator*(cplx s, const Tensor &t) {
    return t * s;
}

/// Vertical composition a after b; requires a.in_legs == b.out_legs.
Tensor tensor_compose(const Tensor &a, const Tensor &b);
/// Horizontal juxtaposition; a's legs come first on both sides.
Tensor tensor_kron(const Tensor &a, const Tensor &b);
/// Integer matrix power for square tensors.
Tensor tensor_power(const Tensor &a, int k);

/// Largest entrywise deviation; throws ShapeError when shapes differ.
double max_deviation(const Tensor &a, const Tensor &b);

/// Returns lambda with a = lambda * b entrywise within tol, if one exists.
///
/// lambda is read off the largest-magnitude entry of b. Two zero tensors
/// compare equal with lambda = 1.
std::optional<cplx> compare_up_to_scalar(const Tensor &a, const Tensor &b, Tolerance tol = Tolerance{});

bool is_unitary(const Tensor &a, Tolerance tol = Tolerance{});

/// Multi-index digits of a flat index, most significant first.
std::vector<int> digits(std::size_t index, int d, int count);
std::size_t undigits(std::span<const int> digits, int d);

std::string format_complex(cplx z, int precision = 12);
/// Flat "re,im" pairs, row-major; stable decimal text for reports and golden files.
std::string format_tensor(const Tensor &t, int precision = 12);

}  // namespace quon

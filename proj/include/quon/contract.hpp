#pragma once

#include <vector>

#include "quon/numerics.hpp"
#include "quon/tensor.hpp"

namespace quon {

/// Dense tensor whose legs carry integer labels; every leg has dimension d.
/// Data is row-major with the first label most significant.
struct LabeledTensor {
    std::vector<int> labels;
    std::vector<cplx> data;
};

/// Sums over every label that occurs twice within t.
LabeledTensor trace_repeated(const LabeledTensor &t, int d);

/// Contracts all labels shared by a and b; remaining legs are a's then b's.
LabeledTensor contract_pair(const LabeledTensor &a, const LabeledTensor &b, int d);

/// Contracts a whole network, greedily picking the pair with the smallest
/// result at each step. Each label must occur at most twice overall.
LabeledTensor contract_all(std::vector<LabeledTensor> parts, int d);

/// Reorders t so its legs follow `order`, which must be a permutation of t.labels.
LabeledTensor permute(const LabeledTensor &t, const std::vector<int> &order, int d);

/// Reads a fully contracted network as a Tensor with the given output and input labels.
Tensor to_tensor(const LabeledTensor &t, const std::vector<int> &out_labels, const std::vector<int> &in_labels, int d);

/// Wraps a Tensor; outputs get out_labels and inputs in_labels.
LabeledTensor from_tensor(const Tensor &t, std::vector<int> out_labels, const std::vector<int> &in_labels);

}  // namespace quon

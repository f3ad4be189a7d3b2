#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "quon/numerics.hpp"
#include "quon/tensor.hpp"

namespace quon {

enum class GateName { X, Y, Z, F, G, F2, CNOT };

std::string to_string(GateName g);
std::optional<GateName> parse_gate_name(const std::string &s);

/// Matrix of a named gate; CNOT is the two-qudit map |k,j> -> |k+j,j>.
Tensor gate(int d, GateName name);

enum class SpiderColor { Black, White };

struct SpiderSpec {
    SpiderColor color;
    int in_legs;
    int out_legs;
};

/// Black: sum_k |k..k><k..k|. White: 1 where the output indices sum to the input indices mod d.
Tensor spider(int d, SpiderSpec spec);

enum class ResourceKind { BellPlus, BellMinus, GHZ, Max };

struct ResourceName {
    ResourceKind kind;
    int n = 2;  // party count for GHZ and Max
};

/// Unit-norm resource state as an n-output tensor; throws ShapeError for n = 0.
Tensor resource_state(int d, ResourceName name);

/// Order of the group generated by X, Z, F, G modulo global phase.
/// Throws CapExceeded when the closure grows past cap elements.
std::size_t clifford_order(int d, std::size_t cap);

/// d^2 |SL(2, Z_d)| = d^5 prod_{p | d} (1 - p^-2).
std::size_t clifford_order_formula(int d);

/// Correction family X^a' Z^b' (F^2)^c' with a' = ua*a + ub*b, b' = va*a + vb*b (mod d).
struct TeleportCorrection {
    int ua = 0;
    int ub = 0;
    int va = 0;
    int vb = 0;
    int c = 0;

    bool operator==(const TeleportCorrection &) const = default;
};

struct TeleportReport {
    int d;
    int a;
    int b;
    double fidelity;
    std::string correction;
};

/// Bob's state for measurement outcome (a, b) before any correction, renormalized.
/// Throws ImpossibleOutcome when the branch has zero probability.
Tensor teleport_branch(int d, const Tensor &input_state, int a, int b);

/// First correction family, in a fixed enumeration order, that restores random inputs on every outcome.
TeleportCorrection teleport_calibrate(int d, std::uint64_t seed = 7);

/// The family used by teleport_run.
TeleportCorrection teleport_frozen_correction(int d);

Tensor teleport_correction_matrix(int d, const TeleportCorrection &family, int a, int b);

TeleportReport teleport_run(int d, const Tensor &input_state, int a, int b);

/// Haar-like random unit vector in C^d.
Tensor random_state(int d, std::uint64_t seed);

}  // namespace quon

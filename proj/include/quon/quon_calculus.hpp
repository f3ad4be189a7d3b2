#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quon/numerics.hpp"
#include "quon/planar.hpp"
#include "quon/tensor.hpp"

namespace quon {

/// Coordinates of an n-quon vector in the Z-pairing basis: quon label g means
/// strands (1,2) carry charge g and strands (3,4) carry -g.
struct QuonVector {
    int d;
    int n_quons;
    std::vector<cplx> coeffs;
};

enum class Axis { X, Y, Z };

/// k-th basis vector of the given axis in Z-pairing coordinates.
QuonVector quon_basis(int d, Axis axis, int k);

/// Column matrix [v_0 ... v_{d-1}] of a basis family.
Tensor quon_basis_matrix(int d, Axis axis);

struct StrandGen {
    enum class Kind { Braid, Charge };
    Kind kind;
    int index;  // braid position 1..3 or strand 1..4
    int value;  // braid sign +1/-1 or charge in Z_d

    static StrandGen braid(int pos, int sign) {
        return {Kind::Braid, pos, sign};
    }
    static StrandGen charge(int strand, int g) {
        return {Kind::Charge, strand, g};
    }
    bool operator==(const StrandGen &) const = default;
};

/// Generators acting on the four strands of one quon, first applied first.
struct StrandWord {
    int d;
    std::vector<StrandGen> gens;

    bool operator==(const StrandWord &) const = default;
};

/// Parses "b1 b2' c1:2 c4:-1"; throws ParseError with a 1-based column.
StrandWord parse_word(int d, const std::string &text);
std::string to_string(const StrandWord &w);

/// Crossing on the neutral 1-quon space (d x d).
Tensor braid_matrix(int d, int pos, int sign);
/// Crossing on both strand pairs of a quon, all charge sectors (d^2 x d^2).
Tensor braid_matrix_full(int d, int pos, int sign);
/// Charge inserted at the bottom of a strand, all charge sectors (d^2 x d^2).
/// Only neutral combinations map the 1-quon space to itself.
Tensor charge_matrix(int d, int strand, int g);

/// Net charge a word carries, mod d.
int word_charge(const StrandWord &w);
/// Neutral restriction; throws ChargedWord when the word's net charge is nonzero.
Tensor eval_word(const StrandWord &w);
/// Action on all charge sectors of the two strand pairs.
Tensor eval_word_full(const StrandWord &w);

/// First braid word (b1, b1', b2, b2', b3, b3' in lexicographic order, shortest
/// first) equal to target up to a global phase; throws NotFound.
StrandWord find_word(int d, const Tensor &target, int max_len, Tolerance tol = Tolerance{});

/// The quarter rotation of a quon, strand 4 carried to strand 1.
StrandWord fourier_word(int d);
/// Matrix of the quarter rotation on the 1-quon space.
Tensor string_fourier(int d);
/// c with string_fourier(d) = c * gate(F).
cplx string_fourier_phase(int d);

/// Restricts a d^2 x d^2 operator to the neutral sector labels |g, -g>.
Tensor neutral_restriction(const Tensor &full);

// ---------------------------------------------------------------------------
// String networks

struct StrandOp {
    enum class Kind { Cup, Cap, Charge, Braid };
    Kind kind;
    int pos;
    int value = 0;  // charge g or crossing sign

    static StrandOp cup(int pos) {
        return {Kind::Cup, pos, 0};
    }
    static StrandOp cap(int pos) {
        return {Kind::Cap, pos, 0};
    }
    static StrandOp charge(int strand, int g) {
        return {Kind::Charge, strand, g};
    }
    static StrandOp braid(int pos, int sign) {
        return {Kind::Braid, pos, sign};
    }
};

/// A planar piece drawn bottom to top from the empty diagram; its top
/// boundary is read as `discs` quons of four strands each.
struct NetworkComponent {
    std::vector<StrandOp> ops;
    int discs = 0;
};

struct DiscRef {
    int component;
    int disc;
};

/// Two discs glued by a tube; each tube contributes d^(-1/2).
struct Tube {
    DiscRef a;
    DiscRef b;
};

/// A neutral circle around a genus with m and n strands on either side.
struct GenusIncidence {
    int m = 1;
    int n = 1;
};

struct StringNetwork {
    int d = 1;
    std::vector<NetworkComponent> components;
    std::vector<Tube> tubes;
    std::vector<DiscRef> outputs;
    std::vector<DiscRef> inputs;
    std::vector<GenusIncidence> genus_circles;
    int genus_marks = 0;  // handles of the ambient manifold, bookkeeping only
    cplx scalar = 1.0;
};

/// Non-crossing pairing of 2k points built from cups, charges placed on top.
/// Arcs are 1-based point pairs; throws NetworkError for crossing or partial pairings.
NetworkComponent component_from_arcs(int points, const std::vector<std::pair<int, int>> &arcs);

/// Evaluates the component to a vector of Z-pairing coordinates over its discs.
std::vector<cplx> eval_component(const PlanarModel &model, const NetworkComponent &c);

/// Tensor with one output leg per entry of net.outputs and one input leg per net.inputs.
Tensor eval_network(const StringNetwork &net);

/// Single closed circle carrying the given charge (0 for neutral).
StringNetwork circle_network(int d, int charge);

// ---------------------------------------------------------------------------
// Joint relation

/// Orthonormal (Hilbert-Schmidt) family of operators with fixed leg counts.
struct BasisSet {
    int d;
    int out_legs;
    int in_legs;
    std::vector<Tensor> vectors;
};

BasisSet standard_basis(int d, int out_legs, int in_legs);
/// standard_basis rotated by a seeded random unitary.
BasisSet random_basis(int d, int out_legs, int in_legs, std::uint64_t seed);
/// Throws BasisError unless the family is a complete orthonormal set.
void validate_basis(const BasisSet &b, Tolerance tol = Tolerance{});

struct JointReport {
    double deviation;    // max |sum_alpha (T alpha) alpha^* - sum_beta beta beta^* T|
    double invariance;   // change of the left side under a random change of both bases
    bool pass;
};

/// Compares the two basis expansions of T attached through a handle: the sum
/// over B_m (operators on m qudits) and the sum over B_n (maps m -> n).
JointReport joint_check(int d, int m, int n, const Tensor &t, const BasisSet &left, const BasisSet &right,
                        Tolerance tol = Tolerance{}, std::uint64_t seed = 1);

}  // namespace quon

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "quon/numerics.hpp"
#include "quon/quon_calculus.hpp"
#include "quon/qudit_core.hpp"
#include "quon/tensor.hpp"

namespace quon {

enum class NodeKind { Black, White, FBox, Named, Box, Input, Output };

struct Node {
    NodeKind kind = NodeKind::Black;
    int power = 1;                        // FBox: F^power
    GateName gate = GateName::X;          // Named
    std::shared_ptr<const Tensor> tensor;  // Box: explicit matrix
    std::string label;                     // Box: display name
    std::vector<int> in_edges;             // edge id per input port, -1 when open
    std::vector<int> out_edges;            // edge id per output port

    int ins() const {
        return static_cast<int>(in_edges.size());
    }
    int outs() const {
        return static_cast<int>(out_edges.size());
    }
    int degree() const {
        return ins() + outs();
    }
    bool is_spider() const {
        return kind == NodeKind::Black || kind == NodeKind::White;
    }
};

/// Directed wire from an output port of one node to an input port of another.
struct Edge {
    int from;
    int from_port;
    int to;
    int to_port;
};

/// Open graph of spiders and boxes. Input nodes feed the diagram (one output
/// port each) and Output nodes drain it (one input port each); their order in
/// `inputs` and `outputs` is the leg order of the evaluated tensor.
class SpiderDiagram {
   public:
    explicit SpiderDiagram(int d = 1);

    int d;
    cplx scalar = 1.0;
    int genus_marks = 0;
    std::map<int, Node> nodes;
    std::map<int, Edge> edges;
    std::vector<int> inputs;
    std::vector<int> outputs;

    /// Adds a node with the given port counts, all ports open.
    int add_node(NodeKind kind, int ins, int outs);
    int add_spider(SpiderColor color, int ins, int outs);
    int add_fbox(int power);
    int add_gate(GateName g);
    int add_box(const std::string &label, std::shared_ptr<const Tensor> t);
    int add_input();
    int add_output();

    int connect(int from, int from_port, int to, int to_port);
    void disconnect(int edge);
    /// Removes a node after disconnecting all its edges.
    void remove_node(int id);

    /// Throws GraphError on dangling ports or inconsistent bookkeeping.
    void validate() const;

    std::size_t node_count() const;  // excluding Input/Output nodes
    int peek_next_id() const {
        return next_id_;
    }

   private:
    int fresh_id();
    int next_id_ = 0;
};

// Diagram builders; every builder returns a diagram with open boundary ports.
SpiderDiagram diagram_identity(int d, int wires);
SpiderDiagram diagram_spider(int d, SpiderColor color, int ins, int outs);
SpiderDiagram diagram_fbox(int d, int power);
SpiderDiagram diagram_gate(int d, GateName g);
SpiderDiagram diagram_box(int d, const std::string &label, const Tensor &t);
/// first, then second on top; throws ShapeError on a leg mismatch.
SpiderDiagram diagram_then(const SpiderDiagram &first, const SpiderDiagram &second);
/// Side by side, a's legs first.
SpiderDiagram diagram_beside(const SpiderDiagram &a, const SpiderDiagram &b);

/// Tensor value including the global scalar and d^(-1/2) per genus mark.
Tensor eval_tensor(const SpiderDiagram &diag);

enum class RewriteRule { FuseBlack, FuseWhite, UnitCancel, Bialgebra, AntipodeLoop, HopfLaw, ColorChange, GenusCancel };

std::string to_string(RewriteRule r);
std::optional<RewriteRule> parse_rule(const std::string &s);
const std::vector<RewriteRule> &all_rules();

/// Where a rule applies: a primary node and, for two-node patterns, its partner.
struct Site {
    int node = -1;
    int partner = -1;

    auto operator<=>(const Site &) const = default;
};

/// All sites where the rule's left-hand side matches, sorted.
std::vector<Site> find_matches(const SpiderDiagram &diag, RewriteRule rule);

/// Rewrites one match, folding the rule's scalar into diag.scalar; throws NoMatch.
SpiderDiagram apply_rule(const SpiderDiagram &diag, RewriteRule rule, Site site);

struct NormalizeResult {
    SpiderDiagram diagram;
    int steps = 0;
};

/// Applies FuseBlack, FuseWhite, UnitCancel and GenusCancel to a fixed point,
/// always taking the first rule with a match and its lowest site.
NormalizeResult normalize(const SpiderDiagram &diag);
/// Same rule set, picking among all matches with a seeded generator.
NormalizeResult normalize_randomized(const SpiderDiagram &diag, std::uint64_t seed);

/// Order-independent structural summary, used to compare normal forms.
std::string diagram_signature(const SpiderDiagram &diag, int precision = 9);
/// Human-readable node and edge listing.
std::string describe(const SpiderDiagram &diag);

struct RuleReport {
    std::string name;
    RewriteRule rule;
    int d;
    double deviation;
    cplx scalar;
    bool pass;
};

/// Checks the canonical instances of every rule for each dimension.
std::vector<RuleReport> rule_suite(const std::vector<int> &dims, Tolerance tol = Tolerance{});

/// Top-view string network of a diagram of spiders and F boxes.
struct CompiledNetwork {
    StringNetwork network;
    /// eval_network(network) = d^(scale_exponent/2) eval_tensor(diag)
    int scale_exponent = 0;
};

/// Throws NotCompilable for gate and matrix boxes other than F powers.
CompiledNetwork compile_to_quon(const SpiderDiagram &diag);

}  // namespace quon

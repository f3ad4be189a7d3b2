#include "quon/spider_engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "quon/contract.hpp"
#include "quon/error.hpp"

namespace quon {

SpiderDiagram::SpiderDiagram(int d) : d(d) {
    if (d < 1) {
        throw InvalidDimension("diagram dimension must be >= 1");
    }
}

int SpiderDiagram::fresh_id() {
    return next_id_++;
}

int SpiderDiagram::add_node(NodeKind kind, int ins, int outs) {
    if (ins < 0 || outs < 0) {
        throw GraphError("negative port count");
    }
    Node n;
    n.kind = kind;
    n.in_edges.assign(ins, -1);
    n.out_edges.assign(outs, -1);
    int id = fresh_id();
    nodes.emplace(id, std::move(n));
    return id;
}

int SpiderDiagram::add_spider(SpiderColor color, int ins, int outs) {
    return add_node(color == SpiderColor::Black ? NodeKind::Black : NodeKind::White, ins, outs);
}

int SpiderDiagram::add_fbox(int power) {
    int id = add_node(NodeKind::FBox, 1, 1);
    nodes.at(id).power = mod(power, 4);
    return id;
}

int SpiderDiagram::add_gate(GateName g) {
    if (g == GateName::F) {
        return add_fbox(1);
    }
    if (g == GateName::F2) {
        return add_fbox(2);
    }
    int legs = g == GateName::CNOT ? 2 : 1;
    int id = add_node(NodeKind::Named, legs, legs);
    nodes.at(id).gate = g;
    return id;
}

int SpiderDiagram::add_box(const std::string &label, std::shared_ptr<const Tensor> t) {
    if (t->dim() != d) {
        throw ShapeError("box dimension differs from the diagram");
    }
    int id = add_node(NodeKind::Box, t->in_legs(), t->out_legs());
    nodes.at(id).tensor = std::move(t);
    nodes.at(id).label = label;
    return id;
}

int SpiderDiagram::add_input() {
    int id = add_node(NodeKind::Input, 0, 1);
    inputs.push_back(id);
    return id;
}

int SpiderDiagram::add_output() {
    int id = add_node(NodeKind::Output, 1, 0);
    outputs.push_back(id);
    return id;
}

int SpiderDiagram::connect(int from, int from_port, int to, int to_port) {
    auto &a = nodes.at(from);
    auto &b = nodes.at(to);
    if (from_port < 0 || from_port >= a.outs() || to_port < 0 || to_port >= b.ins()) {
        throw GraphError("port index out of range");
    }
    if (a.out_edges[from_port] != -1 || b.in_edges[to_port] != -1) {
        throw GraphError("port already connected");
    }
    int id = fresh_id();
    edges.emplace(id, Edge{from, from_port, to, to_port});
    a.out_edges[from_port] = id;
    b.in_edges[to_port] = id;
    return id;
}

void SpiderDiagram::disconnect(int edge) {
    auto it = edges.find(edge);
    if (it == edges.end()) {
        throw GraphError("no edge " + std::to_string(edge));
    }
    nodes.at(it->second.from).out_edges[it->second.from_port] = -1;
    nodes.at(it->second.to).in_edges[it->second.to_port] = -1;
    edges.erase(it);
}

void SpiderDiagram::remove_node(int id) {
    auto &n = nodes.at(id);
    for (int e : n.in_edges) {
        if (e != -1) {
            disconnect(e);
        }
    }
    for (int e : nodes.at(id).out_edges) {
        if (e != -1) {
            disconnect(e);
        }
    }
    std::erase(inputs, id);
    std::erase(outputs, id);
    nodes.erase(id);
}

void SpiderDiagram::validate() const {
    for (const auto &[id, n] : nodes) {
        for (std::size_t p = 0; p < n.in_edges.size(); p++) {
            int e = n.in_edges[p];
            if (e == -1) {
                throw GraphError("node " + std::to_string(id) + " has an open input port");
            }
            const auto &edge = edges.at(e);
            if (edge.to != id || edge.to_port != static_cast<int>(p)) {
                throw GraphError("edge bookkeeping mismatch at node " + std::to_string(id));
            }
        }
        for (std::size_t p = 0; p < n.out_edges.size(); p++) {
            int e = n.out_edges[p];
            if (e == -1) {
                throw GraphError("node " + std::to_string(id) + " has an open output port");
            }
            const auto &edge = edges.at(e);
            if (edge.from != id || edge.from_port != static_cast<int>(p)) {
                throw GraphError("edge bookkeeping mismatch at node " + std::to_string(id));
            }
        }
        if (n.kind == NodeKind::Box && !n.tensor) {
            throw GraphError("box without a matrix");
        }
    }
    for (const auto &[id, e] : edges) {
        if (!nodes.contains(e.from) || !nodes.contains(e.to)) {
            throw GraphError("edge " + std::to_string(id) + " references a missing node");
        }
    }
    std::size_t n_in = 0;
    std::size_t n_out = 0;
    for (const auto &[id, n] : nodes) {
        n_in += n.kind == NodeKind::Input;
        n_out += n.kind == NodeKind::Output;
    }
    if (n_in != inputs.size() || n_out != outputs.size()) {
        throw GraphError("boundary lists disagree with boundary nodes");
    }
}

std::size_t SpiderDiagram::node_count() const {
    std::size_t c = 0;
    for (const auto &[id, n] : nodes) {
        c += n.kind != NodeKind::Input && n.kind != NodeKind::Output;
    }
    return c;
}

// ---------------------------------------------------------------------------
// builders

namespace {

SpiderDiagram wrap_node(int d, const std::function<int(SpiderDiagram &)> &make) {
    SpiderDiagram g(d);
    int id = make(g);
    const int ins = g.nodes.at(id).ins();
    const int outs = g.nodes.at(id).outs();
    for (int i = 0; i < ins; i++) {
        g.connect(g.add_input(), 0, id, i);
    }
    for (int i = 0; i < outs; i++) {
        g.connect(id, i, g.add_output(), 0);
    }
    return g;
}

// Copies b's nodes and edges into a with fresh ids; returns the id map.
std::map<int, int> absorb(SpiderDiagram &a, const SpiderDiagram &b) {
    std::map<int, int> remap;
    for (const auto &[id, n] : b.nodes) {
        int nid = a.add_node(n.kind, n.ins(), n.outs());
        auto &m = a.nodes.at(nid);
        m.power = n.power;
        m.gate = n.gate;
        m.tensor = n.tensor;
        m.label = n.label;
        remap[id] = nid;
    }
    for (const auto &[id, e] : b.edges) {
        a.connect(remap.at(e.from), e.from_port, remap.at(e.to), e.to_port);
    }
    a.scalar *= b.scalar;
    a.genus_marks += b.genus_marks;
    return remap;
}

}  // namespace

SpiderDiagram diagram_identity(int d, int wires) {
    SpiderDiagram g(d);
    std::vector<int> ins;
    for (int i = 0; i < wires; i++) {
        ins.push_back(g.add_input());
    }
    for (int i = 0; i < wires; i++) {
        g.connect(ins[i], 0, g.add_output(), 0);
    }
    return g;
}

SpiderDiagram diagram_spider(int d, SpiderColor color, int ins, int outs) {
    return wrap_node(d, [&](SpiderDiagram &g) { return g.add_spider(color, ins, outs); });
}

SpiderDiagram diagram_fbox(int d, int power) {
    return wrap_node(d, [&](SpiderDiagram &g) { return g.add_fbox(power); });
}

SpiderDiagram diagram_gate(int d, GateName name) {
    return wrap_node(d, [&](SpiderDiagram &g) { return g.add_gate(name); });
}

SpiderDiagram diagram_box(int d, const std::string &label, const Tensor &t) {
    auto shared = std::make_shared<const Tensor>(t);
    return wrap_node(d, [&](SpiderDiagram &g) { return g.add_box(label, shared); });
}

SpiderDiagram diagram_then(const SpiderDiagram &first, const SpiderDiagram &second) {
    if (first.d != second.d) {
        throw ShapeError("composing diagrams of different dimension");
    }
    if (first.outputs.size() != second.inputs.size()) {
        throw ShapeError(
            "cannot stack " + std::to_string(second.inputs.size()) + " inputs on " +
            std::to_string(first.outputs.size()) + " outputs");
    }
    SpiderDiagram g = first;
    auto outs = g.outputs;
    auto remap = absorb(g, second);
    std::vector<int> ins;
    for (int id : second.inputs) {
        ins.push_back(remap.at(id));
    }
    std::vector<int> new_outputs;
    for (int id : second.outputs) {
        new_outputs.push_back(remap.at(id));
    }
    for (std::size_t i = 0; i < outs.size(); i++) {
        const auto lower = g.edges.at(g.nodes.at(outs[i]).in_edges[0]);
        const auto upper = g.edges.at(g.nodes.at(ins[i]).out_edges[0]);
        g.remove_node(outs[i]);
        g.remove_node(ins[i]);
        g.connect(lower.from, lower.from_port, upper.to, upper.to_port);
    }
    g.outputs = new_outputs;
    g.inputs = first.inputs;
    return g;
}

SpiderDiagram diagram_beside(const SpiderDiagram &a, const SpiderDiagram &b) {
    if (a.d != b.d) {
        throw ShapeError("juxtaposing diagrams of different dimension");
    }
    SpiderDiagram g = a;
    auto remap = absorb(g, b);
    for (int id : b.inputs) {
        g.inputs.push_back(remap.at(id));
    }
    for (int id : b.outputs) {
        g.outputs.push_back(remap.at(id));
    }
    return g;
}

// ---------------------------------------------------------------------------
// evaluation

namespace {

Tensor node_tensor(int d, const Node &n) {
    switch (n.kind) {
        case NodeKind::Black:
            return spider(d, {SpiderColor::Black, n.ins(), n.outs()});
        case NodeKind::White:
            return spider(d, {SpiderColor::White, n.ins(), n.outs()});
        case NodeKind::FBox:
            return tensor_power(gate(d, GateName::F), n.power);
        case NodeKind::Named:
            return gate(d, n.gate);
        case NodeKind::Box:
            return *n.tensor;
        case NodeKind::Input:
        case NodeKind::Output:
            break;
    }
    throw GraphError("boundary nodes have no tensor");
}

}  // namespace

Tensor eval_tensor(const SpiderDiagram &diag) {
    diag.validate();
    const int d = diag.d;
    std::vector<LabeledTensor> parts;
    for (const auto &[id, n] : diag.nodes) {
        if (n.kind == NodeKind::Input || n.kind == NodeKind::Output) {
            continue;
        }
        parts.push_back(from_tensor(node_tensor(d, n), n.out_edges, n.in_edges));
    }
    int fresh = diag.peek_next_id();
    std::vector<int> out_labels;
    for (int o : diag.outputs) {
        int e = diag.nodes.at(o).in_edges[0];
        if (diag.nodes.at(diag.edges.at(e).from).kind == NodeKind::Input) {
            // bare wire: give the output its own label joined by an identity
            int f = fresh++;
            parts.push_back(from_tensor(Tensor::identity(d, 1), {f}, {e}));
            out_labels.push_back(f);
        } else {
            out_labels.push_back(e);
        }
    }
    std::vector<int> in_labels;
    for (int i : diag.inputs) {
        in_labels.push_back(diag.nodes.at(i).out_edges[0]);
    }
    auto result = contract_all(std::move(parts), d);
    cplx s = diag.scalar * std::pow(static_cast<double>(d), -0.5 * diag.genus_marks);
    return to_tensor(result, out_labels, in_labels, d) * s;
}

// ---------------------------------------------------------------------------
// rewriting

std::string to_string(RewriteRule r) {
    switch (r) {
        case RewriteRule::FuseBlack:
            return "FuseBlack";
        case RewriteRule::FuseWhite:
            return "FuseWhite";
        case RewriteRule::UnitCancel:
            return "UnitCancel";
        case RewriteRule::Bialgebra:
            return "Bialgebra";
        case RewriteRule::AntipodeLoop:
            return "AntipodeLoop";
        case RewriteRule::HopfLaw:
            return "HopfLaw";
        case RewriteRule::ColorChange:
            return "ColorChange";
        case RewriteRule::GenusCancel:
            return "GenusCancel";
    }
    return "?";
}

const std::vector<RewriteRule> &all_rules() {
    static const std::vector<RewriteRule> rules = {
        RewriteRule::FuseBlack,    RewriteRule::FuseWhite, RewriteRule::UnitCancel,  RewriteRule::Bialgebra,
        RewriteRule::AntipodeLoop, RewriteRule::HopfLaw,   RewriteRule::ColorChange, RewriteRule::GenusCancel};
    return rules;
}

std::optional<RewriteRule> parse_rule(const std::string &s) {
    for (auto r : all_rules()) {
        if (to_string(r) == s) {
            return r;
        }
    }
    return std::nullopt;
}

namespace {

bool is_color(const Node &n, NodeKind c) {
    return n.kind == c;
}

NodeKind opposite(NodeKind c) {
    return c == NodeKind::Black ? NodeKind::White : NodeKind::Black;
}

// Distinct neighbor ids of a node, in edge order.
std::vector<int> neighbors(const SpiderDiagram &g, int id) {
    std::vector<int> out;
    const auto &n = g.nodes.at(id);
    for (int e : n.out_edges) {
        out.push_back(g.edges.at(e).to);
    }
    for (int e : n.in_edges) {
        out.push_back(g.edges.at(e).from);
    }
    return out;
}

bool has_self_loop(const SpiderDiagram &g, int id) {
    for (int e : g.nodes.at(id).out_edges) {
        if (g.edges.at(e).to == id) {
            return true;
        }
    }
    return false;
}

// Target node of the single edge leaving output port p.
int target_of(const SpiderDiagram &g, int id, int p) {
    return g.edges.at(g.nodes.at(id).out_edges[p]).to;
}

int source_of(const SpiderDiagram &g, int id, int p) {
    return g.edges.at(g.nodes.at(id).in_edges[p]).from;
}

bool is_split(const SpiderDiagram &g, int id, NodeKind color) {
    const auto &n = g.nodes.at(id);
    return n.kind == color && n.ins() == 1 && n.outs() == 2;
}

bool is_merge(const SpiderDiagram &g, int id, NodeKind color) {
    const auto &n = g.nodes.at(id);
    return n.kind == color && n.ins() == 2 && n.outs() == 1;
}

// For the antipode loop at white split w: the black merge m and the F^2 box f.
std::optional<std::pair<int, int>> antipode_pattern(const SpiderDiagram &g, int w) {
    if (!is_split(g, w, NodeKind::White)) {
        return std::nullopt;
    }
    for (int direct = 0; direct < 2; direct++) {
        int m = target_of(g, w, direct);
        int f = target_of(g, w, 1 - direct);
        if (m == w || f == w || m == f) {
            continue;
        }
        const auto &fb = g.nodes.at(f);
        if (fb.kind != NodeKind::FBox || fb.power != 2 || !is_merge(g, m, NodeKind::Black)) {
            continue;
        }
        if (target_of(g, f, 0) != m) {
            continue;
        }
        std::set<int> inner = {w, f, m};
        if (inner.contains(source_of(g, w, 0)) || inner.contains(target_of(g, m, 0))) {
            continue;
        }
        return std::make_pair(m, f);
    }
    return std::nullopt;
}

// For the Hopf square with white splits w1 < w2: the black merges (b1, b2)
// reached from w1's output ports 0 and 1.
std::optional<std::pair<int, int>> hopf_pattern(const SpiderDiagram &g, int w1, int w2) {
    if (w1 == w2 || !is_split(g, w1, NodeKind::White) || !is_split(g, w2, NodeKind::White)) {
        return std::nullopt;
    }
    int b1 = target_of(g, w1, 0);
    int b2 = target_of(g, w1, 1);
    if (b1 == b2 || !is_merge(g, b1, NodeKind::Black) || !is_merge(g, b2, NodeKind::Black)) {
        return std::nullopt;
    }
    std::set<int> w2_targets = {target_of(g, w2, 0), target_of(g, w2, 1)};
    if (w2_targets != std::set<int>{b1, b2}) {
        return std::nullopt;
    }
    std::set<int> inner = {w1, w2, b1, b2};
    if (inner.contains(source_of(g, w1, 0)) || inner.contains(source_of(g, w2, 0)) ||
        inner.contains(target_of(g, b1, 0)) || inner.contains(target_of(g, b2, 0))) {
        return std::nullopt;
    }
    return std::make_pair(b1, b2);
}

std::vector<Site> fuse_matches(const SpiderDiagram &g, NodeKind color) {
    std::set<Site> out;
    for (const auto &[id, n] : g.nodes) {
        if (!is_color(n, color)) {
            continue;
        }
        for (int other : neighbors(g, id)) {
            if (other == id) {
                out.insert(Site{id, id});
            } else if (is_color(g.nodes.at(other), color)) {
                out.insert(Site{std::min(id, other), std::max(id, other)});
            }
        }
    }
    return {out.begin(), out.end()};
}

}  // namespace

std::vector<Site> find_matches(const SpiderDiagram &g, RewriteRule rule) {
    g.validate();
    std::vector<Site> out;
    switch (rule) {
        case RewriteRule::FuseBlack:
            return fuse_matches(g, NodeKind::Black);
        case RewriteRule::FuseWhite:
            return fuse_matches(g, NodeKind::White);
        case RewriteRule::UnitCancel:
            for (const auto &[id, n] : g.nodes) {
                if (!n.is_spider()) {
                    continue;
                }
                if ((n.ins() == 1 && n.outs() == 1) || n.degree() == 0) {
                    out.push_back(Site{id, -1});
                } else if (n.degree() == 1) {
                    int other = neighbors(g, id).front();
                    if (other > id && g.nodes.at(other).is_spider() && g.nodes.at(other).degree() == 1) {
                        out.push_back(Site{id, other});
                    }
                }
            }
            break;
        case RewriteRule::Bialgebra:
            for (const auto &[id, n] : g.nodes) {
                if (!n.is_spider() || n.degree() != 1) {
                    continue;
                }
                int s = neighbors(g, id).front();
                const auto &sn = g.nodes.at(s);
                if (sn.kind == opposite(n.kind) && sn.degree() >= 2 && !has_self_loop(g, s)) {
                    out.push_back(Site{id, s});
                }
            }
            break;
        case RewriteRule::AntipodeLoop:
            for (const auto &[id, n] : g.nodes) {
                if (auto p = antipode_pattern(g, id)) {
                    out.push_back(Site{id, p->first});
                }
            }
            break;
        case RewriteRule::HopfLaw:
            for (const auto &[id, n] : g.nodes) {
                for (const auto &[id2, n2] : g.nodes) {
                    if (id < id2 && hopf_pattern(g, id, id2)) {
                        out.push_back(Site{id, id2});
                    }
                }
            }
            break;
        case RewriteRule::ColorChange:
            for (const auto &[id, n] : g.nodes) {
                if (n.is_spider()) {
                    out.push_back(Site{id, -1});
                }
            }
            break;
        case RewriteRule::GenusCancel:
            if (g.genus_marks > 0) {
                out.push_back(Site{-1, -1});
            }
            break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

struct PortEnd {
    int node;
    int port;
};

// Replaces the member nodes by one spider of the given color carrying all
// ports not joined to each other; returns the new id.
int merge_nodes(SpiderDiagram &g, const std::vector<int> &members, NodeKind color, int &internal_edges) {
    std::set<int> mset(members.begin(), members.end());
    std::vector<std::pair<int, int>> out_ports;  // (member, port) in new order
    std::vector<std::pair<int, int>> in_ports;
    std::set<int> internal;
    for (int m : members) {
        const auto &n = g.nodes.at(m);
        for (int p = 0; p < n.outs(); p++) {
            int e = n.out_edges[p];
            if (mset.contains(g.edges.at(e).to)) {
                internal.insert(e);
            } else {
                out_ports.emplace_back(m, p);
            }
        }
        for (int p = 0; p < n.ins(); p++) {
            int e = n.in_edges[p];
            if (mset.contains(g.edges.at(e).from)) {
                internal.insert(e);
            } else {
                in_ports.emplace_back(m, p);
            }
        }
    }
    internal_edges = static_cast<int>(internal.size());
    std::vector<PortEnd> out_targets;
    std::vector<PortEnd> in_sources;
    for (auto [m, p] : out_ports) {
        const auto &e = g.edges.at(g.nodes.at(m).out_edges[p]);
        out_targets.push_back({e.to, e.to_port});
    }
    for (auto [m, p] : in_ports) {
        const auto &e = g.edges.at(g.nodes.at(m).in_edges[p]);
        in_sources.push_back({e.from, e.from_port});
    }
    for (int m : members) {
        g.remove_node(m);
    }
    int id = g.add_node(color, static_cast<int>(in_ports.size()), static_cast<int>(out_ports.size()));
    for (std::size_t i = 0; i < out_targets.size(); i++) {
        g.connect(id, static_cast<int>(i), out_targets[i].node, out_targets[i].port);
    }
    for (std::size_t i = 0; i < in_sources.size(); i++) {
        g.connect(in_sources[i].node, in_sources[i].port, id, static_cast<int>(i));
    }
    return id;
}

void rewrite_fuse(SpiderDiagram &g, Site site, NodeKind color) {
    std::vector<int> members = {site.node};
    if (site.partner != site.node) {
        members.push_back(site.partner);
    }
    int internal = 0;
    merge_nodes(g, members, color, internal);
    if (color == NodeKind::White) {
        // each independent cycle through white spiders frees one summation
        int cycles = internal - (static_cast<int>(members.size()) - 1);
        g.scalar *= std::pow(static_cast<double>(g.d), cycles);
    }
}

void rewrite_unit(SpiderDiagram &g, Site site) {
    const auto n = g.nodes.at(site.node);
    if (site.partner != -1) {
        bool both_black = n.kind == NodeKind::Black && g.nodes.at(site.partner).kind == NodeKind::Black;
        g.scalar *= both_black ? static_cast<double>(g.d) : 1.0;
        g.remove_node(site.node);
        g.remove_node(site.partner);
        return;
    }
    if (n.degree() == 0) {
        g.scalar *= n.kind == NodeKind::Black ? static_cast<double>(g.d) : 1.0;
        g.remove_node(site.node);
        return;
    }
    int ein = n.in_edges[0];
    int eout = n.out_edges[0];
    if (ein == eout) {
        g.scalar *= static_cast<double>(g.d);
        g.remove_node(site.node);
        return;
    }
    const auto src = g.edges.at(ein);
    const auto dst = g.edges.at(eout);
    g.remove_node(site.node);
    g.connect(src.from, src.from_port, dst.to, dst.to_port);
}

void rewrite_bialgebra(SpiderDiagram &g, Site site) {
    const NodeKind color = g.nodes.at(site.node).kind;
    const int s = site.partner;
    const auto sn = g.nodes.at(s);
    const auto &un = g.nodes.at(site.node);
    const int link = un.outs() == 1 ? un.out_edges[0] : un.in_edges[0];
    std::vector<PortEnd> targets;
    std::vector<PortEnd> sources;
    for (int e : sn.out_edges) {
        if (e != link) {
            targets.push_back({g.edges.at(e).to, g.edges.at(e).to_port});
        }
    }
    for (int e : sn.in_edges) {
        if (e != link) {
            sources.push_back({g.edges.at(e).from, g.edges.at(e).from_port});
        }
    }
    g.remove_node(site.node);
    g.remove_node(s);
    for (auto t : targets) {
        g.connect(g.add_node(color, 0, 1), 0, t.node, t.port);
    }
    for (auto src : sources) {
        g.connect(src.node, src.port, g.add_node(color, 1, 0), 0);
    }
}

void rewrite_antipode(SpiderDiagram &g, Site site) {
    auto pattern = antipode_pattern(g, site.node);
    const int w = site.node;
    const auto [m, f] = *pattern;
    const auto src = g.edges.at(g.nodes.at(w).in_edges[0]);
    const auto dst = g.edges.at(g.nodes.at(m).out_edges[0]);
    g.remove_node(w);
    g.remove_node(f);
    g.remove_node(m);
    g.connect(src.from, src.from_port, g.add_node(NodeKind::White, 1, 0), 0);
    g.connect(g.add_node(NodeKind::Black, 0, 1), 0, dst.to, dst.to_port);
}

void rewrite_hopf(SpiderDiagram &g, Site site) {
    const auto [b1, b2] = *hopf_pattern(g, site.node, site.partner);
    const auto s1 = g.edges.at(g.nodes.at(site.node).in_edges[0]);
    const auto s2 = g.edges.at(g.nodes.at(site.partner).in_edges[0]);
    const auto t1 = g.edges.at(g.nodes.at(b1).out_edges[0]);
    const auto t2 = g.edges.at(g.nodes.at(b2).out_edges[0]);
    for (int id : {site.node, site.partner, b1, b2}) {
        g.remove_node(id);
    }
    int merge = g.add_node(NodeKind::Black, 2, 1);
    int split = g.add_node(NodeKind::White, 1, 2);
    g.connect(s1.from, s1.from_port, merge, 0);
    g.connect(s2.from, s2.from_port, merge, 1);
    g.connect(merge, 0, split, 0);
    g.connect(split, 0, t1.to, t1.to_port);
    g.connect(split, 1, t2.to, t2.to_port);
}

void rewrite_color(SpiderDiagram &g, Site site) {
    auto &n = g.nodes.at(site.node);
    const int legs = n.degree();
    const double d = g.d;
    // white = d^(n/2-1) F^(outs) black F^-1(ins), and the inverse
    if (n.kind == NodeKind::White) {
        g.scalar *= std::pow(d, legs / 2.0 - 1.0);
        n.kind = NodeKind::Black;
    } else {
        g.scalar *= std::pow(d, 1.0 - legs / 2.0);
        n.kind = NodeKind::White;
    }
    std::set<int> touching(n.out_edges.begin(), n.out_edges.end());
    touching.insert(n.in_edges.begin(), n.in_edges.end());
    for (int e : touching) {
        auto edge = g.edges.at(e);
        g.disconnect(e);
        PortEnd src{edge.from, edge.from_port};
        PortEnd dst{edge.to, edge.to_port};
        if (edge.from == site.node) {
            int f = g.add_fbox(1);
            g.connect(edge.from, edge.from_port, f, 0);
            src = {f, 0};
        }
        if (edge.to == site.node) {
            int f = g.add_fbox(3);
            g.connect(f, 0, edge.to, edge.to_port);
            dst = {f, 0};
        }
        g.connect(src.node, src.port, dst.node, dst.port);
    }
}

}  // namespace

SpiderDiagram apply_rule(const SpiderDiagram &diag, RewriteRule rule, Site site) {
    auto matches = find_matches(diag, rule);
    if (!std::binary_search(matches.begin(), matches.end(), site)) {
        throw NoMatch(to_string(rule) + " does not match at node " + std::to_string(site.node));
    }
    SpiderDiagram g = diag;
    switch (rule) {
        case RewriteRule::FuseBlack:
            rewrite_fuse(g, site, NodeKind::Black);
            break;
        case RewriteRule::FuseWhite:
            rewrite_fuse(g, site, NodeKind::White);
            break;
        case RewriteRule::UnitCancel:
            rewrite_unit(g, site);
            break;
        case RewriteRule::Bialgebra:
            rewrite_bialgebra(g, site);
            break;
        case RewriteRule::AntipodeLoop:
            rewrite_antipode(g, site);
            break;
        case RewriteRule::HopfLaw:
            rewrite_hopf(g, site);
            break;
        case RewriteRule::ColorChange:
            rewrite_color(g, site);
            break;
        case RewriteRule::GenusCancel:
            g.genus_marks -= 1;
            g.scalar /= std::sqrt(static_cast<double>(g.d));
            break;
    }
    return g;
}

namespace {

const std::vector<RewriteRule> kNormalizing = {
    RewriteRule::FuseBlack, RewriteRule::FuseWhite, RewriteRule::UnitCancel, RewriteRule::GenusCancel};

}  // namespace

NormalizeResult normalize(const SpiderDiagram &diag) {
    NormalizeResult r{diag, 0};
    while (true) {
        bool applied = false;
        for (auto rule : kNormalizing) {
            auto m = find_matches(r.diagram, rule);
            if (!m.empty()) {
                r.diagram = apply_rule(r.diagram, rule, m.front());
                r.steps++;
                applied = true;
                break;
            }
        }
        if (!applied) {
            return r;
        }
    }
}

NormalizeResult normalize_randomized(const SpiderDiagram &diag, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    NormalizeResult r{diag, 0};
    while (true) {
        std::vector<std::pair<RewriteRule, Site>> all;
        for (auto rule : kNormalizing) {
            for (auto s : find_matches(r.diagram, rule)) {
                all.emplace_back(rule, s);
            }
        }
        if (all.empty()) {
            return r;
        }
        std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
        auto [rule, site] = all[pick(rng)];
        r.diagram = apply_rule(r.diagram, rule, site);
        r.steps++;
    }
}

namespace {

std::string kind_name(const Node &n) {
    switch (n.kind) {
        case NodeKind::Black:
            return "black";
        case NodeKind::White:
            return "white";
        case NodeKind::FBox:
            return "F^" + std::to_string(n.power);
        case NodeKind::Named:
            return to_string(n.gate);
        case NodeKind::Box:
            return "box:" + n.label;
        case NodeKind::Input:
            return "in";
        case NodeKind::Output:
            return "out";
    }
    return "?";
}

}  // namespace

std::string diagram_signature(const SpiderDiagram &diag, int precision) {
    std::vector<std::string> parts;
    for (const auto &[id, n] : diag.nodes) {
        if (n.kind == NodeKind::Input || n.kind == NodeKind::Output) {
            continue;
        }
        parts.push_back(kind_name(n) + "(" + std::to_string(n.ins()) + "->" + std::to_string(n.outs()) + ")");
    }
    std::sort(parts.begin(), parts.end());
    std::ostringstream out;
    for (const auto &p : parts) {
        out << p << ' ';
    }
    out << "edges=" << diag.edges.size() << " genus=" << diag.genus_marks
        << " scalar=" << format_complex(diag.scalar, precision);
    return out.str();
}

std::string describe(const SpiderDiagram &diag) {
    std::ostringstream out;
    out << "scalar " << format_complex(diag.scalar, 12) << "\n";
    out << "genus " << diag.genus_marks << "\n";
    // renumber nodes densely in id order so output is stable across rewrites
    std::map<int, int> dense;
    for (const auto &[id, n] : diag.nodes) {
        int k = static_cast<int>(dense.size());
        dense[id] = k;
    }
    for (const auto &[id, n] : diag.nodes) {
        out << "node " << dense[id] << " " << kind_name(n) << " " << n.ins() << "->" << n.outs() << "\n";
    }
    std::vector<std::string> lines;
    for (const auto &[id, e] : diag.edges) {
        lines.push_back(
            "edge " + std::to_string(dense[e.from]) + ":" + std::to_string(e.from_port) + " -> " +
            std::to_string(dense[e.to]) + ":" + std::to_string(e.to_port));
    }
    std::sort(lines.begin(), lines.end());
    for (const auto &l : lines) {
        out << l << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// top view

namespace {

std::vector<std::pair<int, int>> ring_arcs(int legs) {
    std::vector<std::pair<int, int>> arcs;
    for (int j = 0; j + 1 < legs; j++) {
        arcs.emplace_back(4 * j + 3, 4 * (j + 1) + 2);
        arcs.emplace_back(4 * j + 4, 4 * (j + 1) + 1);
    }
    arcs.emplace_back(1, 4 * legs);
    arcs.emplace_back(2, 4 * legs - 1);
    return arcs;
}

void rotate_disc(NetworkComponent &c, int disc, int turns) {
    const int base = 4 * disc;
    // fourier_word: b3 b2 b1
    for (int t = 0; t < turns; t++) {
        for (int pos : {3, 2, 1}) {
            c.ops.push_back(StrandOp::braid(base + pos, 1));
        }
    }
    for (int t = 0; t < -turns; t++) {
        for (int pos : {1, 2, 3}) {
            c.ops.push_back(StrandOp::braid(base + pos, -1));
        }
    }
}

}  // namespace

CompiledNetwork compile_to_quon(const SpiderDiagram &diag) {
    diag.validate();
    const int d = diag.d;
    const double sd = std::sqrt(static_cast<double>(d));
    const cplx c = string_fourier_phase(d);
    CompiledNetwork out;
    StringNetwork &net = out.network;
    net.d = d;
    net.scalar = diag.scalar;
    for (int i = 0; i < diag.genus_marks; i++) {
        net.genus_circles.push_back(GenusIncidence{1, 1});
    }
    int vertices = 0;
    int tubes = 0;
    std::map<int, int> component_of;
    for (const auto &[id, n] : diag.nodes) {
        if (n.kind == NodeKind::Named || n.kind == NodeKind::Box) {
            throw NotCompilable("only spiders and F boxes have a top view; found " + kind_name(n));
        }
        if (n.kind == NodeKind::Input || n.kind == NodeKind::Output) {
            continue;
        }
        vertices++;
        // every vertex is drawn as sqrt(d) times its spider
        net.scalar *= sd;
        const int legs = n.degree();
        if (legs == 0) {
            net.scalar *= n.kind == NodeKind::Black ? static_cast<double>(d) : 1.0;
            continue;
        }
        NetworkComponent comp = component_from_arcs(4 * legs, ring_arcs(legs));
        if (n.kind == NodeKind::White) {
            // white spiders are black spiders turned a quarter on every leg
            for (int j = 0; j < n.outs(); j++) {
                rotate_disc(comp, j, 1);
            }
            for (int j = 0; j < n.ins(); j++) {
                rotate_disc(comp, n.outs() + j, -1);
            }
            net.scalar *= std::pow(static_cast<double>(d), legs / 2.0 - 1.0) * std::pow(c, n.ins() - n.outs());
        } else if (n.kind == NodeKind::FBox) {
            rotate_disc(comp, 0, n.power);
            net.scalar *= std::pow(c, -n.power);
        }
        component_of[id] = static_cast<int>(net.components.size());
        net.components.push_back(std::move(comp));
    }
    auto out_disc = [&](int node, int port) { return DiscRef{component_of.at(node), port}; };
    auto in_disc = [&](int node, int port) {
        return DiscRef{component_of.at(node), diag.nodes.at(node).outs() + port};
    };
    std::map<int, DiscRef> boundary_out;
    std::map<int, DiscRef> boundary_in;
    for (const auto &[eid, e] : diag.edges) {
        const auto from_kind = diag.nodes.at(e.from).kind;
        const auto to_kind = diag.nodes.at(e.to).kind;
        if (from_kind == NodeKind::Input && to_kind == NodeKind::Output) {
            // a bare wire becomes an identity spider
            vertices++;
            net.scalar *= sd;
            int k = static_cast<int>(net.components.size());
            net.components.push_back(component_from_arcs(8, ring_arcs(2)));
            boundary_out[e.to] = DiscRef{k, 0};
            boundary_in[e.from] = DiscRef{k, 1};
        } else if (from_kind == NodeKind::Input) {
            boundary_in[e.from] = in_disc(e.to, e.to_port);
        } else if (to_kind == NodeKind::Output) {
            boundary_out[e.to] = out_disc(e.from, e.from_port);
        } else {
            tubes++;
            net.tubes.push_back(Tube{out_disc(e.from, e.from_port), in_disc(e.to, e.to_port)});
        }
    }
    for (int o : diag.outputs) {
        net.outputs.push_back(boundary_out.at(o));
    }
    for (int i : diag.inputs) {
        net.inputs.push_back(boundary_in.at(i));
    }
    // handles of the thickened graph: independent cycles among the tubes
    std::map<int, int> parent;
    std::function<int(int)> find = [&](int x) {
        if (!parent.contains(x)) {
            parent[x] = x;
        }
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    int cycles = 0;
    for (const auto &t : net.tubes) {
        int a = find(t.a.component);
        int b = find(t.b.component);
        if (a == b) {
            cycles++;
        } else {
            parent[a] = b;
        }
    }
    net.genus_marks = cycles + diag.genus_marks;
    out.scale_exponent = vertices - tubes;
    return out;
}

}  // namespace quon

#include "csrnbrw/graph.hpp"

#include "csrnbrw/error.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace csrnbrw {

Graph Graph::from_edges(std::span<const WeightedEdge> edges,
                        std::optional<std::size_t> node_count) {
    std::size_t n = node_count.value_or(0);
    std::vector<Edge> sorted;
    sorted.reserve(edges.size());
    for (const auto& e : edges) {
        if (e.u == e.v) {
            throw ValidationError(fmt::format("self-loop on node {}", e.u));
        }
        if (!std::isfinite(e.weight) || e.weight < 0.0) {
            throw ValidationError(
                fmt::format("edge ({}, {}) has invalid weight {}", e.u, e.v, e.weight));
        }
        const NodeId hi = std::max(e.u, e.v);
        if (node_count && hi >= *node_count) {
            throw ValidationError(
                fmt::format("edge ({}, {}) references a node outside [0, {})", e.u, e.v, n));
        }
        if (!node_count) {
            n = std::max<std::size_t>(n, static_cast<std::size_t>(hi) + 1);
        }
        sorted.push_back({std::min(e.u, e.v), hi, e.weight});
    }
    std::stable_sort(sorted.begin(), sorted.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });

    Graph g;
    g.node_count_ = n;
    for (const auto& e : sorted) {
        if (!g.edges_.empty() && g.edges_.back().u == e.u && g.edges_.back().v == e.v) {
            g.edges_.back().weight += e.weight;
        } else {
            g.edges_.push_back(e);
        }
    }

    std::vector<std::size_t> degree(n, 0);
    for (const auto& e : g.edges_) {
        ++degree[e.u];
        ++degree[e.v];
    }
    g.offsets_.assign(n + 1, 0);
    std::partial_sum(degree.begin(), degree.end(), g.offsets_.begin() + 1);
    g.adjacency_.resize(g.offsets_[n]);
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    // Edges are sorted by (u, v), so filling in edge order leaves every
    // adjacency list sorted by neighbor.
    for (EdgeId id = 0; id < g.edges_.size(); ++id) {
        const auto& e = g.edges_[id];
        g.adjacency_[cursor[e.u]++] = {e.v, id};
    }
    for (EdgeId id = 0; id < g.edges_.size(); ++id) {
        const auto& e = g.edges_[id];
        g.adjacency_[cursor[e.v]++] = {e.u, id};
    }
    for (NodeId v = 0; v < n; ++v) {
        auto first = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
        auto last = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
        std::sort(first, last,
                  [](const Adjacent& a, const Adjacent& b) { return a.neighbor < b.neighbor; });
    }
    return g;
}

double Graph::weighted_degree(NodeId v) const {
    double sum = 0.0;
    for (const auto& a : neighbors(v)) {
        sum += edges_[a.edge].weight;
    }
    return sum;
}

double Graph::total_weight() const noexcept {
    double sum = 0.0;
    for (const auto& e : edges_) {
        sum += e.weight;
    }
    return sum;
}

std::optional<EdgeId> Graph::find_edge(NodeId u, NodeId v) const {
    if (u >= node_count_ || v >= node_count_) {
        return std::nullopt;
    }
    const auto adj = neighbors(u);
    const auto it = std::lower_bound(adj.begin(), adj.end(), v,
                                     [](const Adjacent& a, NodeId x) { return a.neighbor < x; });
    if (it != adj.end() && it->neighbor == v) {
        return it->edge;
    }
    return std::nullopt;
}

Graph Graph::with_weights(std::span<const double> weights) const {
    if (weights.size() != edges_.size()) {
        throw ValidationError(fmt::format("weight vector has {} entries for {} edges",
                                          weights.size(), edges_.size()));
    }
    Graph g = *this;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!std::isfinite(weights[i]) || weights[i] < 0.0) {
            throw ValidationError(fmt::format("edge {} has invalid weight {}", i, weights[i]));
        }
        g.edges_[i].weight = weights[i];
    }
    return g;
}

std::vector<double> Graph::weights() const {
    std::vector<double> out;
    out.reserve(edges_.size());
    for (const auto& e : edges_) {
        out.push_back(e.weight);
    }
    return out;
}

double density(const Graph& g) {
    const auto n = static_cast<double>(g.node_count());
    if (g.node_count() < 2) {
        throw UndefinedMetricError("density needs at least 2 nodes");
    }
    return 2.0 * static_cast<double>(g.edge_count()) / (n * (n - 1.0));
}

std::size_t triangle_count(const Graph& g) {
    // Orient each edge from lower to higher (degree, id) rank and intersect
    // forward neighborhoods; each triangle is found exactly once.
    const std::size_t n = g.node_count();
    auto before = [&](NodeId a, NodeId b) {
        const auto da = g.degree(a);
        const auto db = g.degree(b);
        return da != db ? da < db : a < b;
    };
    std::vector<std::vector<NodeId>> forward(n);
    for (const auto& e : g.edges()) {
        if (before(e.u, e.v)) {
            forward[e.u].push_back(e.v);
        } else {
            forward[e.v].push_back(e.u);
        }
    }
    std::vector<std::uint32_t> mark(n, 0);
    std::uint32_t stamp = 0;
    std::size_t triangles = 0;
    for (NodeId u = 0; u < n; ++u) {
        ++stamp;
        for (const NodeId v : forward[u]) {
            mark[v] = stamp;
        }
        for (const NodeId v : forward[u]) {
            for (const NodeId w : forward[v]) {
                if (mark[w] == stamp) {
                    ++triangles;
                }
            }
        }
    }
    return triangles;
}

double transitivity(const Graph& g) {
    double triplets = 0.0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const auto d = static_cast<double>(g.degree(v));
        triplets += d * (d - 1.0) / 2.0;
    }
    if (triplets == 0.0) {
        return 0.0;
    }
    return 3.0 * static_cast<double>(triangle_count(g)) / triplets;
}

Partition connected_components(const Graph& g) {
    constexpr auto kUnset = static_cast<CommunityId>(-1);
    std::vector<CommunityId> label(g.node_count(), kUnset);
    std::vector<NodeId> stack;
    CommunityId next = 0;
    for (NodeId root = 0; root < g.node_count(); ++root) {
        if (label[root] != kUnset) {
            continue;
        }
        label[root] = next;
        stack.push_back(root);
        while (!stack.empty()) {
            const NodeId v = stack.back();
            stack.pop_back();
            for (const auto& a : g.neighbors(v)) {
                if (label[a.neighbor] == kUnset) {
                    label[a.neighbor] = next;
                    stack.push_back(a.neighbor);
                }
            }
        }
        ++next;
    }
    return Partition(std::move(label));
}

Subgraph induced_subgraph(const Graph& g, const std::vector<bool>& keep) {
    if (keep.size() != g.node_count()) {
        throw ValidationError("keep mask does not match node count");
    }
    constexpr auto kDropped = static_cast<NodeId>(-1);
    Subgraph out;
    std::vector<NodeId> remap(g.node_count(), kDropped);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (keep[v]) {
            remap[v] = static_cast<NodeId>(out.original.size());
            out.original.push_back(v);
        }
    }
    std::vector<WeightedEdge> edges;
    for (const auto& e : g.edges()) {
        if (remap[e.u] != kDropped && remap[e.v] != kDropped) {
            edges.push_back({remap[e.u], remap[e.v], e.weight});
        }
    }
    out.graph = Graph::from_edges(edges, out.original.size());
    return out;
}

Subgraph remove_isolates(const Graph& g) {
    std::vector<bool> keep(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) {
        keep[v] = g.degree(v) > 0;
    }
    return induced_subgraph(g, keep);
}

namespace {

template <typename T>
bool parse_number(std::string_view token, T& value) {
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    return ec == std::errc{} && ptr == end;
}

} // namespace

Graph read_edge_list(std::istream& in, std::optional<std::size_t> node_count) {
    std::vector<WeightedEdge> edges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string a;
        if (!(fields >> a)) {
            continue;
        }
        if (a.front() == '#') {
            std::string key;
            std::size_t declared = 0;
            std::istringstream header(line.substr(line.find('#') + 1));
            if (!node_count && header >> key >> declared && key == "nodes") {
                node_count = declared;
            }
            continue;
        }
        std::string b;
        std::string w;
        WeightedEdge e;
        if (!(fields >> b >> w) || !parse_number(a, e.u) || !parse_number(b, e.v) ||
            !parse_number(w, e.weight)) {
            throw ValidationError(fmt::format("edge list line {}: expected `u v w`", line_no));
        }
        std::string extra;
        if (fields >> extra) {
            throw ValidationError(fmt::format("edge list line {}: trailing field", line_no));
        }
        edges.push_back(e);
    }
    return Graph::from_edges(edges, node_count);
}

void write_edge_list(std::ostream& out, const Graph& g) {
    fmt::print(out, "# nodes {}\n", g.node_count());
    for (const auto& e : g.edges()) {
        fmt::print(out, "{} {} {}\n", e.u, e.v, e.weight);
    }
}

} // namespace csrnbrw

#include "csrnbrw/louvain.hpp"

#include "csrnbrw/error.hpp"
#include "csrnbrw/rng.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>

namespace csrnbrw {

double modularity(const Graph& g, const Partition& p) {
    if (p.node_count() != g.node_count()) {
        throw ValidationError(fmt::format("partition covers {} nodes, graph has {}",
                                          p.node_count(), g.node_count()));
    }
    const double m = g.total_weight();
    if (!(m > 0.0)) {
        throw UndefinedMetricError("modularity is undefined for zero total edge weight");
    }
    std::vector<double> internal(p.community_count(), 0.0);
    std::vector<double> total(p.community_count(), 0.0);
    for (const auto& e : g.edges()) {
        total[p[e.u]] += e.weight;
        total[p[e.v]] += e.weight;
        if (p[e.u] == p[e.v]) {
            internal[p[e.u]] += e.weight;
        }
    }
    double q = 0.0;
    for (std::size_t c = 0; c < internal.size(); ++c) {
        const double share = total[c] / (2.0 * m);
        q += internal[c] / m - share * share;
    }
    return q;
}

LevelGraph LevelGraph::from_graph(const Graph& g) {
    LevelGraph lg;
    const std::size_t n = g.node_count();
    lg.loop_.assign(n, 0.0);
    lg.offsets_.assign(n + 1, 0);
    for (NodeId v = 0; v < n; ++v) {
        for (const auto& a : g.neighbors(v)) {
            const double w = g.edge(a.edge).weight;
            if (w > 0.0) {
                lg.arcs_.push_back({a.neighbor, w});
            }
        }
        lg.offsets_[v + 1] = lg.arcs_.size();
    }
    lg.finish();
    return lg;
}

void LevelGraph::finish() {
    const std::size_t n = loop_.size();
    strength_.assign(n, 0.0);
    total_strength_ = 0.0;
    for (std::uint32_t v = 0; v < n; ++v) {
        double s = loop_[v];
        for (const auto& arc : arcs(v)) {
            s += arc.weight;
        }
        strength_[v] = s;
        total_strength_ += s;
    }
}

LevelGraph LevelGraph::aggregate(std::span<const std::uint32_t> labels,
                                 std::size_t community_count) const {
    struct Entry {
        std::uint32_t from;
        std::uint32_t to;
        double weight;
    };
    std::vector<Entry> entries;
    entries.reserve(arcs_.size());
    LevelGraph out;
    out.loop_.assign(community_count, 0.0);
    for (std::uint32_t v = 0; v < node_count(); ++v) {
        const auto cv = labels[v];
        out.loop_[cv] += loop_[v];
        for (const auto& arc : arcs(v)) {
            const auto ct = labels[arc.target];
            if (ct == cv) {
                // Seen once from each endpoint, so the loop gains 2w per edge.
                out.loop_[cv] += arc.weight;
            } else {
                entries.push_back({cv, ct, arc.weight});
            }
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.from != b.from ? a.from < b.from : a.to < b.to;
    });
    out.offsets_.assign(community_count + 1, 0);
    std::size_t i = 0;
    for (std::uint32_t c = 0; c < community_count; ++c) {
        const std::size_t first = out.arcs_.size();
        for (; i < entries.size() && entries[i].from == c; ++i) {
            if (out.arcs_.size() > first && out.arcs_.back().target == entries[i].to) {
                out.arcs_.back().weight += entries[i].weight;
            } else {
                out.arcs_.push_back({entries[i].to, entries[i].weight});
            }
        }
        out.offsets_[c + 1] = out.arcs_.size();
    }
    out.finish();
    return out;
}

double LevelGraph::modularity(std::span<const std::uint32_t> labels) const {
    if (!(total_strength_ > 0.0)) {
        throw UndefinedMetricError("modularity is undefined for zero total edge weight");
    }
    const std::size_t count =
        labels.empty() ? 0 : static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end())) + 1;
    std::vector<double> internal(count, 0.0);
    std::vector<double> total(count, 0.0);
    for (std::uint32_t v = 0; v < node_count(); ++v) {
        const auto c = labels[v];
        total[c] += strength_[v];
        internal[c] += loop_[v];
        for (const auto& arc : arcs(v)) {
            if (labels[arc.target] == c) {
                internal[c] += arc.weight;
            }
        }
    }
    double q = 0.0;
    for (std::size_t c = 0; c < count; ++c) {
        const double share = total[c] / total_strength_;
        q += internal[c] / total_strength_ - share * share;
    }
    return q;
}

namespace {

// Moves nodes between communities until a sweep gains less than min_gain.
// labels must start as singletons. Returns the total modularity gained.
double local_move(const LevelGraph& lg, std::vector<std::uint32_t>& labels, Rng& rng,
                  double min_gain) {
    const std::size_t n = lg.node_count();
    const double m2 = lg.total_strength();
    std::vector<double> total(n);
    for (std::uint32_t v = 0; v < n; ++v) {
        total[labels[v]] += lg.strength(v);
    }
    std::vector<double> link(n, 0.0);
    std::vector<char> seen(n, 0);
    std::vector<std::uint32_t> touched;
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0U);

    double level_gain = 0.0;
    while (true) {
        shuffle(order, rng);
        double sweep_gain = 0.0;
        for (const auto v : order) {
            const double k = lg.strength(v);
            if (k <= 0.0) {
                continue;
            }
            const auto home = labels[v];
            touched.clear();
            touched.push_back(home);
            seen[home] = 1;
            for (const auto& arc : lg.arcs(v)) {
                const auto c = labels[arc.target];
                if (!seen[c]) {
                    seen[c] = 1;
                    touched.push_back(c);
                }
                link[c] += arc.weight;
            }
            total[home] -= k;

            // Scaled gain of inserting v into c: link_c - total_c * k / 2m.
            const double stay = link[home] - total[home] * k / m2;
            auto best = home;
            double best_gain = stay;
            for (const auto c : touched) {
                if (c == home) {
                    continue;
                }
                const double gain = link[c] - total[c] * k / m2;
                if (gain > best_gain || (gain == best_gain && best != home && c < best)) {
                    best = c;
                    best_gain = gain;
                }
            }
            total[best] += k;
            if (best != home) {
                labels[v] = best;
                sweep_gain += 2.0 * (best_gain - stay) / m2;
            }
            for (const auto c : touched) {
                link[c] = 0.0;
                seen[c] = 0;
            }
        }
        level_gain += sweep_gain;
        if (sweep_gain < min_gain) {
            break;
        }
    }
    return level_gain;
}

// Renumbers labels densely in order of first occurrence; returns the count.
std::size_t compact(std::vector<std::uint32_t>& labels) {
    constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> remap(labels.size(), kUnset);
    std::uint32_t next = 0;
    for (auto& label : labels) {
        if (remap[label] == kUnset) {
            remap[label] = next++;
        }
        label = remap[label];
    }
    return next;
}

} // namespace

LouvainResult louvain(const Graph& g, const LouvainOptions& options) {
    LevelGraph level = LevelGraph::from_graph(g);
    if (!(level.total_strength() > 0.0)) {
        throw UndefinedMetricError("louvain needs positive total edge weight");
    }
    Rng rng(options.seed);
    std::vector<std::uint32_t> assignment(g.node_count());
    std::iota(assignment.begin(), assignment.end(), 0U);

    LouvainResult result;
    for (std::size_t depth = 0; depth < options.max_levels; ++depth) {
        std::vector<std::uint32_t> labels(level.node_count());
        std::iota(labels.begin(), labels.end(), 0U);
        const double gain = local_move(level, labels, rng, options.min_gain);
        const std::size_t count = compact(labels);
        for (auto& a : assignment) {
            a = labels[a];
        }
        result.levels.push_back({count, level.modularity(labels)});
        if (gain < options.min_gain || count == level.node_count()) {
            break;
        }
        level = level.aggregate(labels, count);
    }
    result.partition = Partition(std::move(assignment));
    result.modularity = modularity(g, result.partition);
    return result;
}

LouvainResult louvain_best_of(const Graph& g, const LouvainOptions& options, std::size_t runs) {
    LouvainResult best;
    bool have = false;
    for (std::size_t r = 0; r < std::max<std::size_t>(runs, 1); ++r) {
        LouvainOptions run = options;
        run.seed = r == 0 ? options.seed : derive_seed(options.seed, r);
        auto result = louvain(g, run);
        if (!have || result.modularity > best.modularity) {
            best = std::move(result);
            have = true;
        }
    }
    return best;
}

double nmi(const Partition& a, const Partition& b) {
    if (a.node_count() != b.node_count()) {
        throw ValidationError(fmt::format("partitions cover {} and {} nodes", a.node_count(),
                                          b.node_count()));
    }
    const auto n = static_cast<double>(a.node_count());
    if (a.node_count() == 0) {
        return 1.0;
    }
    std::unordered_map<std::uint64_t, std::size_t> joint;
    for (NodeId v = 0; v < a.node_count(); ++v) {
        ++joint[(static_cast<std::uint64_t>(a[v]) << 32) | b[v]];
    }
    const auto sa = a.sizes();
    const auto sb = b.sizes();
    auto entropy = [n](const std::vector<std::size_t>& sizes) {
        double h = 0.0;
        for (const auto s : sizes) {
            const double q = static_cast<double>(s) / n;
            h -= q * std::log(q);
        }
        return h;
    };
    const double ha = entropy(sa);
    const double hb = entropy(sb);
    if (ha == 0.0 && hb == 0.0) {
        return 1.0;
    }
    double mutual = 0.0;
    for (const auto& [key, count] : joint) {
        const auto c = static_cast<double>(count);
        const auto ka = static_cast<double>(sa[key >> 32]);
        const auto kb = static_cast<double>(sb[key & 0xffffffffU]);
        mutual += (c / n) * std::log(c * n / (ka * kb));
    }
    return std::clamp(2.0 * mutual / (ha + hb), 0.0, 1.0);
}

void write_partition(std::ostream& out, const Partition& p, const PartitionHeader& header) {
    if (!header.method.empty()) {
        fmt::print(out, "# method {}\n", header.method);
    }
    fmt::print(out, "# seed {}\n# min_gain {}\n# modularity {}\n# communities {}\n", header.seed,
               header.min_gain, header.modularity, p.community_count());
    for (NodeId v = 0; v < p.node_count(); ++v) {
        fmt::print(out, "{} {}\n", v, p[v]);
    }
}

Partition read_partition(std::istream& in) {
    std::vector<std::pair<NodeId, CommunityId>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string first;
        if (!(fields >> first) || first.front() == '#') {
            continue;
        }
        NodeId node = 0;
        CommunityId community = 0;
        std::istringstream head(first);
        if (!(head >> node) || !(fields >> community)) {
            throw ValidationError(fmt::format("partition line {}: expected `node community`", line_no));
        }
        rows.emplace_back(node, community);
    }
    std::sort(rows.begin(), rows.end());
    std::vector<CommunityId> labels(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].first != i) {
            throw ValidationError(fmt::format("partition is missing node {}", i));
        }
        labels[i] = rows[i].second;
    }
    return Partition(std::move(labels));
}

} // namespace csrnbrw

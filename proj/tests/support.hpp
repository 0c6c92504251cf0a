#pragma once

#include "csrnbrw/graph.hpp"
#include "csrnbrw/ingest.hpp"
#include "csrnbrw/partition.hpp"
#include "csrnbrw/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace testing_support {

using namespace csrnbrw;

inline CommitRecord commit(std::string repo, std::string login) {
    using namespace std::chrono;
    return CommitRecord{std::move(repo), std::move(login), year{2020} / January / 1, 1, 0};
}

inline void add_commits(std::vector<CommitRecord>& out, const std::string& repo, const std::string& login,
                        int times = 1) {
    for (int i = 0; i < times; ++i) {
        out.push_back(commit(repo, login));
    }
}

// Two cliques: {a,b,c,d} from repo1 and {alpha..rho} from repo2, tied together
// by a third repository shared by alpha, beta and d.
inline std::vector<CommitRecord> bridged_cliques_commits() {
    std::vector<CommitRecord> rows;
    for (const char* u : {"a", "b", "c", "d"}) {
        add_commits(rows, "team/repo1", u);
    }
    for (const char* u : {"alpha", "beta", "gamma", "delta", "rho"}) {
        add_commits(rows, "team/repo2", u);
    }
    for (const char* u : {"alpha", "beta", "d"}) {
        add_commits(rows, "team/repo3", u);
    }
    return rows;
}

inline const std::vector<std::string>& red_team() {
    static const std::vector<std::string> v{"a", "b", "c", "d"};
    return v;
}

inline const std::vector<std::string>& blue_team() {
    static const std::vector<std::string> v{"alpha", "beta", "delta", "gamma", "rho"};
    return v;
}

// A star centred on b with leaves a, c..i, each pair from its own repository,
// next to one five-person repository {alpha..rho}.
inline std::vector<CommitRecord> star_and_team_commits() {
    std::vector<CommitRecord> rows;
    for (const char* leaf : {"a", "c", "d", "e", "f", "g", "h", "i"}) {
        const std::string repo = std::string("star/") + leaf;
        add_commits(rows, repo, "b");
        add_commits(rows, repo, leaf);
    }
    for (const char* u : {"alpha", "beta", "gamma", "delta", "rho"}) {
        add_commits(rows, "ring/core", u);
    }
    return rows;
}

inline const std::vector<std::string>& star_members() {
    static const std::vector<std::string> v{"a", "b", "c", "d", "e", "f", "g", "h", "i"};
    return v;
}

// Blocks of logins as a Partition over the sorted login index.
inline Partition partition_of(const std::vector<std::string>& logins,
                              const std::vector<std::vector<std::string>>& blocks) {
    std::vector<CommunityId> labels(logins.size(), 0);
    std::vector<bool> placed(logins.size(), false);
    CommunityId next = 0;
    for (const auto& block : blocks) {
        for (const auto& name : block) {
            const auto it = std::find(logins.begin(), logins.end(), name);
            if (it == logins.end()) {
                throw std::runtime_error("unknown login " + name);
            }
            const auto v = static_cast<std::size_t>(it - logins.begin());
            labels[v] = next;
            placed[v] = true;
        }
        ++next;
    }
    for (std::size_t v = 0; v < logins.size(); ++v) {
        if (!placed[v]) {
            labels[v] = next++;
        }
    }
    return Partition(std::move(labels));
}

inline std::vector<std::string> block_logins(const std::vector<std::string>& logins, const Partition& p,
                                             CommunityId c) {
    std::vector<std::string> out;
    for (NodeId v = 0; v < logins.size(); ++v) {
        if (p[v] == c) {
            out.push_back(logins[v]);
        }
    }
    return out;
}

inline Graph cycle_graph(std::size_t n) {
    std::vector<WeightedEdge> edges;
    for (NodeId v = 0; v < n; ++v) {
        edges.push_back({v, static_cast<NodeId>((v + 1) % n), 1.0});
    }
    return Graph::from_edges(edges, n);
}

inline Graph complete_graph(std::size_t n) {
    std::vector<WeightedEdge> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            edges.push_back({u, v, 1.0});
        }
    }
    return Graph::from_edges(edges, n);
}

// G(n, p) with optional random positive weights.
inline Graph random_graph(std::size_t n, double p, Rng& rng, bool weighted = false) {
    std::vector<WeightedEdge> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            if (rng.uniform() < p) {
                edges.push_back({u, v, weighted ? 0.5 + 3.0 * rng.uniform() : 1.0});
            }
        }
    }
    return Graph::from_edges(edges, n);
}

// Random labelled tree (random parent among earlier nodes).
inline Graph random_tree(std::size_t n, Rng& rng) {
    std::vector<WeightedEdge> edges;
    for (NodeId v = 1; v < n; ++v) {
        edges.push_back({static_cast<NodeId>(rng.below(v)), v, 1.0});
    }
    return Graph::from_edges(edges, n);
}

inline bool is_connected(const Graph& g) {
    if (g.node_count() == 0) {
        return true;
    }
    std::vector<bool> seen(g.node_count(), false);
    std::vector<NodeId> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        for (const auto& a : g.neighbors(v)) {
            if (!seen[a.neighbor]) {
                seen[a.neighbor] = true;
                ++count;
                stack.push_back(a.neighbor);
            }
        }
    }
    return count == g.node_count();
}

// Q = 1/2m sum_ij (A_ij - k_i k_j / 2m) [c_i == c_j], straight from a dense
// adjacency matrix.
inline double dense_modularity(const Graph& g, const std::vector<CommunityId>& labels) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (const auto& e : g.edges()) {
        a[e.u][e.v] += e.weight;
        a[e.v][e.u] += e.weight;
    }
    std::vector<double> k(n, 0.0);
    double two_m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            k[i] += a[i][j];
        }
        two_m += k[i];
    }
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (labels[i] == labels[j]) {
                q += a[i][j] - k[i] * k[j] / two_m;
            }
        }
    }
    return q / two_m;
}

// Every set partition of {0..n-1} as a restricted growth string.
inline void for_each_set_partition(std::size_t n, const std::function<void(const std::vector<CommunityId>&)>& f) {
    std::vector<CommunityId> labels(n, 0);
    std::function<void(std::size_t, CommunityId)> rec = [&](std::size_t i, CommunityId used) {
        if (i == n) {
            f(labels);
            return;
        }
        for (CommunityId c = 0; c <= used && c < n; ++c) {
            labels[i] = c;
            rec(i + 1, std::max<CommunityId>(used, c + 1));
        }
    };
    if (n == 0) {
        f(labels);
        return;
    }
    labels[0] = 0;
    rec(1, 1);
}

inline double brute_force_max_modularity(const Graph& g) {
    double best = -1.0;
    for_each_set_partition(g.node_count(),
                           [&](const std::vector<CommunityId>& labels) { best = std::max(best, dense_modularity(g, labels)); });
    return best;
}

// Two-sided exact signed-rank p by enumerating all 2^n sign assignments of
// the ranks of |x - y| (tie-free input).
inline double exhaustive_signed_rank_p(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<std::pair<double, int>> d;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double diff = x[i] - y[i];
        if (diff != 0.0) {
            d.emplace_back(std::abs(diff), diff > 0 ? 1 : -1);
        }
    }
    std::sort(d.begin(), d.end());
    const std::size_t n = d.size();
    int observed = 0;
    for (std::size_t r = 0; r < n; ++r) {
        if (d[r].second > 0) {
            observed += static_cast<int>(r + 1);
        }
    }
    const int total = static_cast<int>(n * (n + 1) / 2);
    const double centre = total / 2.0;
    const double dev = std::abs(observed - centre);
    std::uint64_t extreme = 0;
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        int w = 0;
        for (std::size_t r = 0; r < n; ++r) {
            if (mask >> r & 1U) {
                w += static_cast<int>(r + 1);
            }
        }
        if (std::abs(w - centre) >= dev - 1e-9) {
            ++extreme;
        }
    }
    return static_cast<double>(extreme) / static_cast<double>(count);
}

// Discrete power law P(x) = x^-alpha / zeta(alpha) for x >= 1, drawn by
// inverting a CDF table built by direct summation. Beyond the table the
// continuous approximation takes over; that region carries ~1e-6 of the mass.
class PowerLawSampler {
public:
    explicit PowerLawSampler(double alpha, std::size_t table = 200'000) : alpha_(alpha) {
        std::vector<double> mass(table);
        for (std::size_t x = 1; x <= table; ++x) {
            mass[x - 1] = std::pow(static_cast<double>(x), -alpha);
        }
        // Tail beyond the table by the integral bound plus midpoint correction.
        const double t = static_cast<double>(table) + 0.5;
        const double tail = std::pow(t, 1.0 - alpha) / (alpha - 1.0);
        double zeta = tail;
        for (auto it = mass.rbegin(); it != mass.rend(); ++it) {
            zeta += *it;
        }
        cdf_.resize(table);
        double acc = 0.0;
        for (std::size_t i = 0; i < table; ++i) {
            acc += mass[i] / zeta;
            cdf_[i] = acc;
        }
    }

    std::uint64_t operator()(Rng& rng) const {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        if (it != cdf_.end()) {
            return static_cast<std::uint64_t>(it - cdf_.begin()) + 1;
        }
        const double base = static_cast<double>(cdf_.size()) + 0.5;
        const double rest = (1.0 - u) / (1.0 - cdf_.back());
        return static_cast<std::uint64_t>(base * std::pow(rest, -1.0 / (alpha_ - 1.0)) + 0.5);
    }

private:
    double alpha_;
    std::vector<double> cdf_;
};

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

inline std::string commits_csv(const std::vector<CommitRecord>& rows) {
    std::ostringstream out;
    out << "repo,login,date,added,deleted\n";
    for (const auto& r : rows) {
        out << r.repo << ',' << r.login << ",2020-01-01," << r.lines_added << ',' << r.lines_deleted << '\n';
    }
    return out.str();
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("csrnbrw_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace testing_support

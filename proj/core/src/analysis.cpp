#include "csrnbrw/analysis.hpp"

#include "csrnbrw/error.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <unordered_map>

namespace csrnbrw {

SizeHistogram community_sizes(const Partition& p) {
    SizeHistogram h;
    for (const auto s : p.sizes()) {
        ++h[s];
    }
    return h;
}

Graph community_network(const Graph& g, const Partition& p) {
    if (p.node_count() != g.node_count()) {
        throw ValidationError("partition does not cover the graph");
    }
    std::unordered_map<std::uint64_t, double> crossing;
    for (const auto& e : g.edges()) {
        auto a = p[e.u];
        auto b = p[e.v];
        if (a == b) {
            continue;
        }
        if (a > b) {
            std::swap(a, b);
        }
        crossing[(static_cast<std::uint64_t>(a) << 32) | b] += e.weight;
    }
    std::vector<WeightedEdge> edges;
    for (const auto& [key, w] : crossing) {
        if (w > 0.0) {
            edges.push_back({static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffU), w});
        }
    }
    return Graph::from_edges(edges, p.community_count());
}

double hurwitz_zeta(double s, double q) {
    if (!(s > 1.0) || !(q > 0.0)) {
        throw ValidationError(fmt::format("hurwitz_zeta needs s > 1 and q > 0 (s={}, q={})", s, q));
    }
    // Euler-Maclaurin summation: direct terms up to q + N, integral tail and
    // Bernoulli corrections beyond it.
    constexpr int kDirect = 12;
    static constexpr std::array<double, 7> kBernoulli = {
        1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0};
    double sum = 0.0;
    for (int k = 0; k < kDirect; ++k) {
        sum += std::pow(q + k, -s);
    }
    const double a = q + kDirect;
    sum += std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
    // term_j = B_2j / (2j)! * s (s+1) ... (s+2j-2) * a^(-s-2j+1)
    double rising = s;          // s (s+1) ... (s+2j-2)
    double factorial = 2.0;     // (2j)!
    double power = std::pow(a, -s - 1.0);
    for (std::size_t j = 0; j < kBernoulli.size(); ++j) {
        sum += kBernoulli[j] / factorial * rising * power;
        const double m = 2.0 * static_cast<double>(j + 1);
        rising *= (s + m - 1.0) * (s + m);
        factorial *= (m + 1.0) * (m + 2.0);
        power /= a * a;
    }
    return sum;
}

namespace {

// KS distance between the tail's empirical CDF and the fitted discrete
// power-law CDF F(x) = 1 - zeta(alpha, x + 1) / zeta(alpha, xmin).
// values/cumulative describe the distinct tail values and running counts.
double ks_distance(std::span<const std::uint64_t> values, std::span<const std::size_t> cumulative,
                   double alpha, std::uint64_t xmin) {
    const double norm = hurwitz_zeta(alpha, static_cast<double>(xmin));
    const auto n = static_cast<double>(cumulative.back());
    // Tail sum zeta(alpha, x) maintained while x walks up the distinct values.
    std::uint64_t x = xmin;
    double tail = norm;
    auto advance_to = [&](std::uint64_t target) {
        if (target - x > 64) {
            tail = hurwitz_zeta(alpha, static_cast<double>(target));
        } else {
            for (; x < target; ++x) {
                tail -= std::pow(static_cast<double>(x), -alpha);
            }
        }
        x = target;
    };
    double d = 0.0;
    double previous_emp = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) {
        // Just below values[j] the empirical CDF still equals the previous step.
        advance_to(values[j]);
        const double fit_below = 1.0 - tail / norm;
        d = std::max(d, std::abs(previous_emp - fit_below));
        advance_to(values[j] + 1);
        const double fit_at = 1.0 - tail / norm;
        const double emp = static_cast<double>(cumulative[j]) / n;
        d = std::max(d, std::abs(emp - fit_at));
        previous_emp = emp;
    }
    return d;
}

} // namespace

PowerLawFit fit_power_law(std::span<const std::uint64_t> samples, const PowerLawOptions& options) {
    if (samples.size() < options.min_samples) {
        throw InsufficientDataError(fmt::format("power-law fit needs at least {} samples, got {}",
                                                options.min_samples, samples.size()));
    }
    std::vector<std::uint64_t> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == 0) {
        throw ValidationError("power-law samples must be positive");
    }
    if (sorted.front() == sorted.back()) {
        throw InsufficientDataError("power-law fit is degenerate: all samples are equal");
    }

    std::vector<std::uint64_t> values;
    std::vector<std::size_t> counts;
    for (const auto x : sorted) {
        if (values.empty() || values.back() != x) {
            values.push_back(x);
            counts.push_back(0);
        }
        ++counts.back();
    }
    // suffix_log[j] = sum of ln x over samples >= values[j]; suffix_n likewise.
    const std::size_t distinct = values.size();
    std::vector<double> suffix_log(distinct + 1, 0.0);
    std::vector<std::size_t> suffix_n(distinct + 1, 0);
    for (std::size_t j = distinct; j-- > 0;) {
        suffix_log[j] = suffix_log[j + 1] + static_cast<double>(counts[j]) * std::log(static_cast<double>(values[j]));
        suffix_n[j] = suffix_n[j + 1] + counts[j];
    }

    PowerLawFit best;
    best.ks_distance = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> cumulative;
    const std::size_t min_tail = std::max<std::size_t>(options.min_tail, 2);
    for (std::size_t j = 0; j + 1 < distinct && suffix_n[j] >= min_tail; ++j) {
        const auto xmin = values[j];
        const auto n = static_cast<double>(suffix_n[j]);
        const double shift = static_cast<double>(xmin) - 0.5;
        const double denom = suffix_log[j] - n * std::log(shift);
        const double alpha = 1.0 + n / denom;
        cumulative.clear();
        std::size_t running = 0;
        for (std::size_t t = j; t < distinct; ++t) {
            running += counts[t];
            cumulative.push_back(running);
        }
        const double d = ks_distance(std::span(values).subspan(j), cumulative, alpha, xmin);
        if (d < best.ks_distance) {
            best = {alpha, xmin, d, suffix_n[j]};
        }
    }
    if (best.xmin == 0) {
        throw InsufficientDataError(
            fmt::format("no candidate xmin leaves {} tail samples with two distinct values", min_tail));
    }
    return best;
}

double ResolutionAudit::node_fraction() const {
    return communities ? static_cast<double>(above_node_threshold) / static_cast<double>(communities) : 0.0;
}

double ResolutionAudit::edge_fraction() const {
    return communities ? static_cast<double>(above_edge_threshold) / static_cast<double>(communities) : 0.0;
}

ResolutionAudit resolution_audit(const Graph& g, const Partition& p) {
    if (p.node_count() != g.node_count()) {
        throw ValidationError("partition does not cover the graph");
    }
    ResolutionAudit audit;
    audit.edge_count = g.edge_count();
    const auto edges = static_cast<double>(g.edge_count());
    audit.node_threshold = std::sqrt(edges / 2.0);
    audit.edge_threshold = std::sqrt(2.0 * edges);
    audit.communities = p.community_count();

    std::vector<std::size_t> internal(p.community_count(), 0);
    for (const auto& e : g.edges()) {
        if (p[e.u] == p[e.v]) {
            ++internal[p[e.u]];
        }
    }
    const auto sizes = p.sizes();
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        if (static_cast<double>(sizes[c]) > audit.node_threshold) {
            ++audit.above_node_threshold;
        }
        if (static_cast<double>(internal[c]) > audit.edge_threshold) {
            ++audit.above_edge_threshold;
        }
    }
    return audit;
}

double size_set_similarity(const SizeHistogram& a, const SizeHistogram& b) {
    std::size_t lo = 0;
    std::size_t hi = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            hi += ia++->second;
        } else if (ia == a.end() || ib->first < ia->first) {
            hi += ib++->second;
        } else {
            lo += std::min(ia->second, ib->second);
            hi += std::max(ia->second, ib->second);
            ++ia;
            ++ib;
        }
    }
    return hi == 0 ? 1.0 : static_cast<double>(lo) / static_cast<double>(hi);
}

double dunbar_coverage(const Partition& p, std::size_t lo, std::size_t hi) {
    if (lo > hi) {
        throw ValidationError(fmt::format("dunbar range [{}, {}] is empty", lo, hi));
    }
    if (p.node_count() == 0) {
        return 0.0;
    }
    std::size_t covered = 0;
    for (const auto s : p.sizes()) {
        if (s >= lo && s <= hi) {
            covered += s;
        }
    }
    return static_cast<double>(covered) / static_cast<double>(p.node_count());
}

std::map<std::size_t, std::size_t> degree_histogram(const Graph& g) {
    std::map<std::size_t, std::size_t> h;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        ++h[g.degree(v)];
    }
    return h;
}

nlohmann::json to_json(const SizeHistogram& h) {
    auto out = nlohmann::json::array();
    for (const auto& [size, count] : h) {
        out.push_back({{"size", size}, {"count", count}});
    }
    return out;
}

nlohmann::json to_json(const PowerLawFit& fit) {
    return {{"alpha", fit.alpha}, {"xmin", fit.xmin}, {"ks_distance", fit.ks_distance},
            {"tail_size", fit.tail_size}};
}

nlohmann::json to_json(const ResolutionAudit& audit) {
    return {{"edge_count", audit.edge_count},
            {"node_threshold", audit.node_threshold},
            {"edge_threshold", audit.edge_threshold},
            {"communities", audit.communities},
            {"above_node_threshold", audit.above_node_threshold},
            {"above_node_threshold_percent", 100.0 * audit.node_fraction()},
            {"above_edge_threshold", audit.above_edge_threshold},
            {"above_edge_threshold_percent", 100.0 * audit.edge_fraction()}};
}

void write_histogram_csv(std::ostream& out, const std::map<std::size_t, std::size_t>& h,
                         std::string_view key_name, std::string_view value_name) {
    fmt::print(out, "{},{}\n", key_name, value_name);
    for (const auto& [key, value] : h) {
        fmt::print(out, "{},{}\n", key, value);
    }
}

} // namespace csrnbrw

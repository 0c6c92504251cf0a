#pragma once

#include "csrnbrw/graph.hpp"
#include "csrnbrw/partition.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string_view>
#include <vector>

namespace csrnbrw {

/// size -> number of communities of that size.
using SizeHistogram = std::map<std::size_t, std::size_t>;

SizeHistogram community_sizes(const Partition& p);

/// Quotient graph: one node per community, edge weight = summed weight of the
/// original edges crossing the pair. Intra-community edges and crossings of
/// zero total weight are dropped.
Graph community_network(const Graph& g, const Partition& p);

/// Hurwitz zeta function sum_{k>=0} (k + q)^-s for s > 1, q > 0.
double hurwitz_zeta(double s, double q);

struct PowerLawFit {
    double alpha = 0.0;
    std::uint64_t xmin = 0;
    double ks_distance = 0.0;
    std::size_t tail_size = 0;
};

struct PowerLawOptions {
    std::size_t min_samples = 50;
    std::size_t min_tail = 50;
};

/// Discrete power-law fit. For each candidate xmin the exponent is the
/// approximate discrete MLE 1 + n / sum ln(x / (xmin - 1/2)) over x >= xmin;
/// the reported xmin minimizes the Kolmogorov-Smirnov distance between the
/// tail's empirical CDF and the fitted discrete CDF. Throws
/// InsufficientDataError below min_samples or when all samples are equal;
/// ValidationError on a zero sample.
PowerLawFit fit_power_law(std::span<const std::uint64_t> samples, const PowerLawOptions& options = {});

struct ResolutionAudit {
    std::size_t edge_count = 0;
    double node_threshold = 0.0;  // sqrt(|E| / 2)
    double edge_threshold = 0.0;  // sqrt(2 |E|)
    std::size_t communities = 0;
    std::size_t above_node_threshold = 0;
    std::size_t above_edge_threshold = 0;

    double node_fraction() const;
    double edge_fraction() const;
};

/// Counts communities whose node count exceeds sqrt(|E|/2) and whose internal
/// edge count exceeds sqrt(2|E|), with |E| the number of edges of g.
ResolutionAudit resolution_audit(const Graph& g, const Partition& p);

/// Multiset Jaccard: sum_s min(a_s, b_s) / sum_s max(a_s, b_s); 1 when both are empty.
double size_set_similarity(const SizeHistogram& a, const SizeHistogram& b);

/// Fraction of nodes in communities of size lo..hi inclusive.
double dunbar_coverage(const Partition& p, std::size_t lo = 3, std::size_t hi = 150);

/// Number of nodes with each degree.
std::map<std::size_t, std::size_t> degree_histogram(const Graph& g);

nlohmann::json to_json(const SizeHistogram& h);
nlohmann::json to_json(const PowerLawFit& fit);
nlohmann::json to_json(const ResolutionAudit& audit);

/// Two-column CSV with the given header, one row per histogram entry.
void write_histogram_csv(std::ostream& out, const std::map<std::size_t, std::size_t>& h,
                         std::string_view key_name, std::string_view value_name);

} // namespace csrnbrw

#include "csrnbrw/stats.hpp"

#include "csrnbrw/error.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace csrnbrw {

namespace {

// Two-sided exact p-value: P(|T - mu| >= |t - mu|) where T sums a random
// subset of the doubled ranks, each included with probability 1/2.
double exact_signed_rank_p(const std::vector<std::uint64_t>& doubled_ranks, std::uint64_t observed) {
    const std::uint64_t total = std::accumulate(doubled_ranks.begin(), doubled_ranks.end(), std::uint64_t{0});
    std::vector<double> dist(total + 1, 0.0);
    dist[0] = 1.0;
    std::uint64_t reach = 0;
    for (const auto r : doubled_ranks) {
        for (std::uint64_t s = reach + 1; s-- > 0;) {
            const double half = dist[s] * 0.5;
            dist[s] = half;
            dist[s + r] += half;
        }
        reach += r;
    }
    // Compare 2T against total to stay in integers: |2T - total| >= |2t - total|.
    const auto deviation = [total](std::uint64_t t) {
        const auto twice = static_cast<std::int64_t>(2 * t);
        return std::llabs(twice - static_cast<std::int64_t>(total));
    };
    const auto cut = deviation(observed);
    double p = 0.0;
    for (std::uint64_t s = 0; s <= total; ++s) {
        if (dist[s] > 0.0 && deviation(s) >= cut) {
            p += dist[s];
        }
    }
    return std::min(p, 1.0);
}

} // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                    const WilcoxonOptions& options) {
    if (x.size() != y.size()) {
        throw ValidationError(fmt::format("paired samples differ in length ({} vs {})", x.size(), y.size()));
    }
    std::vector<double> diffs;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        if (d != 0.0) {
            diffs.push_back(d);
        }
    }
    const std::size_t n = diffs.size();
    if (n < 6) {
        throw InsufficientDataError(fmt::format("signed-rank test needs 6 nonzero differences, got {}", n));
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return std::abs(diffs[a]) < std::abs(diffs[b]); });

    // Doubled midranks: a tie group covering positions i..j-1 (1-based i+1..j)
    // shares rank (i + 1 + j) / 2, i.e. doubled rank i + 1 + j.
    std::vector<std::uint64_t> doubled(n);
    double tie_term = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i + 1;
        while (j < n && std::abs(diffs[order[j]]) == std::abs(diffs[order[i]])) {
            ++j;
        }
        for (std::size_t t = i; t < j; ++t) {
            doubled[order[t]] = i + 1 + j;
        }
        const auto tied = static_cast<double>(j - i);
        tie_term += tied * tied * tied - tied;
        i = j;
    }

    WilcoxonResult r;
    r.n = n;
    std::uint64_t plus2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (diffs[i] > 0.0) {
            plus2 += doubled[i];
        }
    }
    const auto nd = static_cast<double>(n);
    r.w_plus = static_cast<double>(plus2) / 2.0;
    r.w_minus = nd * (nd + 1.0) / 2.0 - r.w_plus;
    r.statistic = std::min(r.w_plus, r.w_minus);

    const double mean = nd * (nd + 1.0) / 4.0;
    const double variance = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie_term / 48.0;
    const double sd = std::sqrt(std::max(variance, 0.0));
    r.z = sd > 0.0 ? std::max(std::abs(r.w_plus - mean) - 0.5, 0.0) / sd : 0.0;

    const bool use_exact = options.method == WilcoxonMethod::exact ||
                           (options.method == WilcoxonMethod::automatic && n <= options.exact_max_n);
    if (use_exact) {
        r.exact = true;
        r.p = exact_signed_rank_p(doubled, plus2);
    } else {
        r.p = sd > 0.0 ? std::min(1.0, std::erfc(r.z / std::sqrt(2.0))) : 1.0;
    }
    return r;
}

ChiSquareResult chi_square_homogeneity(const ContingencyTable& table) {
    const std::size_t rows = table.counts.size();
    const std::size_t cols = rows ? table.counts.front().size() : 0;
    for (const auto& row : table.counts) {
        if (row.size() != cols) {
            throw ValidationError("contingency table rows differ in length");
        }
    }
    std::vector<double> row_sum(rows, 0.0);
    std::vector<double> col_sum(cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const auto c = static_cast<double>(table.counts[i][j]);
            row_sum[i] += c;
            col_sum[j] += c;
        }
    }
    std::vector<std::size_t> keep_rows;
    std::vector<std::size_t> keep_cols;
    for (std::size_t i = 0; i < rows; ++i) {
        if (row_sum[i] > 0.0) {
            keep_rows.push_back(i);
        }
    }
    for (std::size_t j = 0; j < cols; ++j) {
        if (col_sum[j] > 0.0) {
            keep_cols.push_back(j);
        }
    }
    if (keep_rows.size() < 2 || keep_cols.size() < 2) {
        throw InsufficientDataError(fmt::format(
            "chi-square needs a 2x2 table after pruning empty margins, got {}x{}", keep_rows.size(),
            keep_cols.size()));
    }

    const double total = std::accumulate(row_sum.begin(), row_sum.end(), 0.0);
    ChiSquareResult r;
    r.rows = keep_rows.size();
    r.columns = keep_cols.size();
    r.dof = (r.rows - 1) * (r.columns - 1);
    std::size_t low = 0;
    for (const auto i : keep_rows) {
        for (const auto j : keep_cols) {
            const double expected = row_sum[i] * col_sum[j] / total;
            const double diff = static_cast<double>(table.counts[i][j]) - expected;
            r.statistic += diff * diff / expected;
            if (expected < 5.0) {
                ++low;
            }
        }
    }
    r.low_expected_fraction = static_cast<double>(low) / static_cast<double>(r.rows * r.columns);
    r.p = r.statistic > 0.0
              ? boost::math::gamma_q(static_cast<double>(r.dof) / 2.0, r.statistic / 2.0)
              : 1.0;
    return r;
}

std::vector<double> bonferroni(std::span<const double> p_values, std::size_t m) {
    if (m < p_values.size()) {
        throw ValidationError(fmt::format("bonferroni: m = {} is below the {} tests given", m, p_values.size()));
    }
    std::vector<double> out;
    out.reserve(p_values.size());
    for (const double p : p_values) {
        out.push_back(std::min(1.0, p * static_cast<double>(m)));
    }
    return out;
}

nlohmann::json to_json(const WilcoxonResult& r) {
    return {{"statistic", r.statistic}, {"w_plus", r.w_plus}, {"w_minus", r.w_minus}, {"n", r.n},
            {"z", r.z},                 {"p", r.p},           {"exact", r.exact}};
}

nlohmann::json to_json(const ChiSquareResult& r) {
    return {{"statistic", r.statistic}, {"dof", r.dof},         {"p", r.p},
            {"rows", r.rows},           {"columns", r.columns}, {"low_expected_fraction", r.low_expected_fraction}};
}

} // namespace csrnbrw

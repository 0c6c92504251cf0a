#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace csrnbrw {

enum class WilcoxonMethod { automatic, exact, normal };

struct WilcoxonOptions {
    WilcoxonMethod method = WilcoxonMethod::automatic;
    // automatic uses the exact null distribution up to this many usable pairs.
    std::size_t exact_max_n = 50;
};

struct WilcoxonResult {
    double statistic = 0.0;  // min(W+, W-)
    double w_plus = 0.0;
    double w_minus = 0.0;
    std::size_t n = 0;       // pairs left after dropping zero differences
    double z = 0.0;          // normal-approximation score (reported for both methods)
    double p = 1.0;          // two-sided
    bool exact = false;
};

/// Wilcoxon signed-rank test on paired samples.
///
/// Zero differences are discarded and |d| is ranked with midranks for ties.
/// The exact p-value enumerates the sign-flip null distribution of W+ given
/// the observed ranks (ties included), by dynamic programming over doubled
/// ranks. The normal approximation uses the tie-corrected variance and a
/// continuity correction of 1/2. Throws InsufficientDataError with fewer than
/// 6 usable pairs and ValidationError on unequal lengths.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                    const WilcoxonOptions& options = {});

struct ContingencyTable {
    std::vector<std::string> row_labels;
    std::vector<std::string> column_labels;
    std::vector<std::vector<std::uint64_t>> counts;  // [row][column]
};

struct ChiSquareResult {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p = 1.0;
    std::size_t rows = 0;      // after pruning
    std::size_t columns = 0;   // after pruning
    double low_expected_fraction = 0.0;  // share of cells with expected count < 5
};

/// Chi-square test of homogeneity. All-zero rows and columns are pruned
/// first; fewer than 2 rows or columns left throws InsufficientDataError.
ChiSquareResult chi_square_homogeneity(const ContingencyTable& table);

/// min(1, p * m) for each p. Throws ValidationError when m < p_values.size().
std::vector<double> bonferroni(std::span<const double> p_values, std::size_t m);

nlohmann::json to_json(const WilcoxonResult& r);
nlohmann::json to_json(const ChiSquareResult& r);

} // namespace csrnbrw

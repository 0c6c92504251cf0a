#include "csrnbrw/ingest.hpp"

#include "csrnbrw/error.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <set>
#include <unordered_map>

namespace csrnbrw {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

bool parse_u64(std::string_view s, std::uint64_t& value) {
    if (s.empty()) {
        return false;
    }
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

// YYYY-MM-DD, optionally followed by a `T...` time part.
std::optional<std::chrono::year_month_day> parse_day(std::string_view s) {
    if (s.size() > 10 && s[10] == 'T') {
        s = s.substr(0, 10);
    }
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') {
        return std::nullopt;
    }
    std::uint64_t y = 0;
    std::uint64_t m = 0;
    std::uint64_t d = 0;
    if (!parse_u64(s.substr(0, 4), y) || !parse_u64(s.substr(5, 2), m) ||
        !parse_u64(s.substr(8, 2), d)) {
        return std::nullopt;
    }
    const std::chrono::year_month_day ymd{std::chrono::year{static_cast<int>(y)},
                                          std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        return std::nullopt;
    }
    return ymd;
}

bool valid_country_code(std::string_view code) {
    return code.size() == 2 && std::isupper(static_cast<unsigned char>(code[0])) &&
           std::isupper(static_cast<unsigned char>(code[1])) &&
           static_cast<unsigned char>(code[0]) < 0x80 && static_cast<unsigned char>(code[1]) < 0x80;
}

// Reads the header, then hands each data row's fields to parse_row. Rows the
// callback rejects are tallied with their 1-based line number.
template <typename Record, typename RowParser>
ParseResult<Record> parse_table(std::istream& in, std::string_view expected_header,
                                std::size_t field_count, RowParser parse_row) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            have_header = true;
            break;
        }
    }
    std::string_view header = trim(line);
    if (header.starts_with("\xEF\xBB\xBF")) {
        header.remove_prefix(3);
    }
    if (!have_header || header != expected_header) {
        throw ValidationError(fmt::format("expected header `{}`", expected_header));
    }

    ParseResult<Record> result;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_fields(line);
        std::optional<Record> record;
        if (fields.size() == field_count) {
            record = parse_row(fields);
        }
        if (record) {
            result.records.push_back(std::move(*record));
        } else {
            ++result.skipped;
            result.skipped_lines.push_back(line_no);
        }
    }
    return result;
}

} // namespace

ParseResult<CommitRecord> parse_commits(std::istream& in) {
    return parse_table<CommitRecord>(
        in, "repo,login,date,added,deleted", 5,
        [](const std::vector<std::string_view>& f) -> std::optional<CommitRecord> {
            CommitRecord r;
            if (f[0].empty() || f[1].empty()) {
                return std::nullopt;
            }
            const auto day = parse_day(f[2]);
            if (!day || !parse_u64(f[3], r.lines_added) || !parse_u64(f[4], r.lines_deleted)) {
                return std::nullopt;
            }
            r.repo = f[0];
            r.login = f[1];
            r.date = *day;
            return r;
        });
}

ParseResult<UserCountryRecord> parse_countries(std::istream& in) {
    return parse_table<UserCountryRecord>(
        in, "login,country_code", 2,
        [](const std::vector<std::string_view>& f) -> std::optional<UserCountryRecord> {
            if (f[0].empty() || !valid_country_code(f[1])) {
                return std::nullopt;
            }
            return UserCountryRecord{std::string(f[0]), std::string(f[1])};
        });
}

ParseResult<RepoLanguageRecord> parse_repo_languages(std::istream& in) {
    return parse_table<RepoLanguageRecord>(
        in, "repo,language,bytes", 3,
        [](const std::vector<std::string_view>& f) -> std::optional<RepoLanguageRecord> {
            RepoLanguageRecord r;
            if (f[0].empty() || f[1].empty() || !parse_u64(f[2], r.bytes)) {
                return std::nullopt;
            }
            r.repo = f[0];
            r.language = f[1];
            return r;
        });
}

bool is_bot_login(std::string_view login, std::string_view suffix) {
    if (suffix.empty() || login.size() < suffix.size()) {
        return false;
    }
    const auto tail = login.substr(login.size() - suffix.size());
    return std::equal(tail.begin(), tail.end(), suffix.begin(), [](char a, char b) {
        return std::tolower(static_cast<unsigned char>(a)) ==
               std::tolower(static_cast<unsigned char>(b));
    });
}

BotFilterResult filter_bots(std::vector<CommitRecord> records, std::string_view suffix) {
    std::set<std::string> removed;
    BotFilterResult out;
    out.records.reserve(records.size());
    for (auto& r : records) {
        if (is_bot_login(r.login, suffix)) {
            removed.insert(r.login);
        } else {
            out.records.push_back(std::move(r));
        }
    }
    out.removed_users = removed.size();
    return out;
}

Collaboration project_collaboration(const std::vector<CommitRecord>& records,
                                    const ProjectionOptions& options) {
    // repo -> distinct contributors; std::map keeps repo order independent of
    // input order.
    std::map<std::string, std::set<std::string>> contributors;
    for (const auto& r : records) {
        contributors[r.repo].insert(r.login);
    }

    Collaboration net;
    std::set<std::string> linked;
    for (const auto& [repo, users] : contributors) {
        if (users.size() > options.max_repo_contributors) {
            net.skipped_repos.push_back(repo);
        } else if (users.size() >= 2) {
            linked.insert(users.begin(), users.end());
        }
    }
    net.logins.assign(linked.begin(), linked.end());
    std::unordered_map<std::string_view, NodeId> index;
    for (NodeId v = 0; v < net.logins.size(); ++v) {
        index.emplace(net.logins[v], v);
    }

    std::unordered_map<std::uint64_t, std::uint32_t> shared;
    std::vector<NodeId> ids;
    for (const auto& [repo, users] : contributors) {
        if (users.size() < 2 || users.size() > options.max_repo_contributors) {
            continue;
        }
        ids.clear();
        for (const auto& login : users) {
            ids.push_back(index.at(login));
        }
        // `users` is sorted and node ids follow login order, so ids ascend.
        for (std::size_t i = 0; i < ids.size(); ++i) {
            for (std::size_t j = i + 1; j < ids.size(); ++j) {
                ++shared[(static_cast<std::uint64_t>(ids[i]) << 32) | ids[j]];
            }
        }
    }
    std::vector<WeightedEdge> edges;
    edges.reserve(shared.size());
    for (const auto& [key, count] : shared) {
        edges.push_back({static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffU),
                         static_cast<double>(count)});
    }
    net.graph = Graph::from_edges(edges, net.logins.size());
    return net;
}

std::map<std::string, std::string> unique_countries(const std::vector<UserCountryRecord>& rows) {
    std::map<std::string, std::set<std::string>> seen;
    for (const auto& r : rows) {
        if (valid_country_code(r.country_code)) {
            seen[r.login].insert(r.country_code);
        }
    }
    std::map<std::string, std::string> out;
    for (const auto& [login, codes] : seen) {
        if (codes.size() == 1) {
            out.emplace(login, *codes.begin());
        }
    }
    return out;
}

Collaboration subset_international(const Collaboration& net,
                                   const std::vector<UserCountryRecord>& countries) {
    const auto unique = unique_countries(countries);
    std::vector<bool> keep(net.graph.node_count());
    for (NodeId v = 0; v < keep.size(); ++v) {
        keep[v] = unique.contains(net.logins[v]);
    }
    const auto cut = induced_subgraph(net.graph, keep);
    const auto trimmed = remove_isolates(cut.graph);

    Collaboration out;
    out.graph = trimmed.graph;
    out.skipped_repos = net.skipped_repos;
    out.logins.reserve(trimmed.original.size());
    for (const NodeId v : trimmed.original) {
        out.logins.push_back(net.logins[cut.original[v]]);
    }
    return out;
}

AttributeMap join_attributes(const std::vector<std::string>& logins,
                             const std::vector<UserCountryRecord>& countries,
                             const std::map<std::string, std::string>& languages) {
    std::unordered_map<std::string_view, NodeId> index;
    for (NodeId v = 0; v < logins.size(); ++v) {
        index.emplace(logins[v], v);
    }
    AttributeMap out;
    out.country.resize(logins.size());
    out.language.resize(logins.size());

    std::set<std::string> conflicting;
    for (const auto& r : countries) {
        const auto it = index.find(r.login);
        if (it == index.end()) {
            continue;
        }
        auto& slot = out.country[it->second];
        if (slot && *slot != r.country_code) {
            conflicting.insert(r.login);
        }
        slot = r.country_code;
    }
    if (!conflicting.empty()) {
        throw ValidationError(
            fmt::format("conflicting country rows for: {}", fmt::join(conflicting, ", ")));
    }
    for (const auto& [login, language] : languages) {
        const auto it = index.find(login);
        if (it != index.end()) {
            out.language[it->second] = language;
        }
    }
    return out;
}

} // namespace csrnbrw

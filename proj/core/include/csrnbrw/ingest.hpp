#pragma once

#include "csrnbrw/graph.hpp"

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace csrnbrw {

/// One commit event from the commit table.
struct CommitRecord {
    std::string repo;
    std::string login;
    std::chrono::year_month_day date;
    std::uint64_t lines_added = 0;
    std::uint64_t lines_deleted = 0;
};

struct RepoLanguageRecord {
    std::string repo;
    std::string language;
    std::uint64_t bytes = 0;
};

struct UserCountryRecord {
    std::string login;
    std::string country_code;
};

template <typename Record>
struct ParseResult {
    std::vector<Record> records;
    std::size_t skipped = 0;
    std::vector<std::size_t> skipped_lines;
};

/// Comma-delimited tables with a mandatory header row. A missing or wrong
/// header throws ValidationError; malformed rows are skipped and tallied.
ParseResult<CommitRecord> parse_commits(std::istream& in);
ParseResult<UserCountryRecord> parse_countries(std::istream& in);
ParseResult<RepoLanguageRecord> parse_repo_languages(std::istream& in);

struct BotFilterResult {
    std::vector<CommitRecord> records;
    std::size_t removed_users = 0;
};

bool is_bot_login(std::string_view login, std::string_view suffix = "bot");

/// Drops every record whose login ends with suffix, compared case-insensitively.
BotFilterResult filter_bots(std::vector<CommitRecord> records, std::string_view suffix = "bot");

/// Collaboration network with the login of every node.
struct Collaboration {
    Graph graph;                      // edge weight = shared repository count
    std::vector<std::string> logins;  // node id -> login, sorted ascending
    std::vector<std::string> skipped_repos;
};

struct ProjectionOptions {
    std::size_t max_repo_contributors = 10'000;
};

/// Projects the user-repository bipartite data onto users. Two users are linked
/// when they committed to a common repository; the weight counts distinct
/// shared repositories. Users without any co-contributor are omitted, and
/// repositories above the contributor cap are skipped and listed.
Collaboration project_collaboration(const std::vector<CommitRecord>& records,
                                    const ProjectionOptions& options = {});

/// Logins with exactly one distinct valid country code.
std::map<std::string, std::string> unique_countries(const std::vector<UserCountryRecord>& rows);

/// Induced subgraph on users with exactly one valid country; users reporting
/// several countries are dropped, as are nodes isolated by the cut.
Collaboration subset_international(const Collaboration& net,
                                   const std::vector<UserCountryRecord>& countries);

/// Per-node optional attributes, indexed by NodeId of the collaboration graph.
struct AttributeMap {
    std::vector<std::optional<std::string>> country;
    std::vector<std::optional<std::string>> language;

    std::size_t size() const noexcept { return country.size(); }
};

/// Joins country rows and a login -> language map onto the node index.
/// Throws ValidationError naming every in-graph user with conflicting
/// country rows.
AttributeMap join_attributes(const std::vector<std::string>& logins,
                             const std::vector<UserCountryRecord>& countries,
                             const std::map<std::string, std::string>& languages);

} // namespace csrnbrw

#pragma once

#include "csrnbrw/ingest.hpp"
#include "csrnbrw/partition.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace csrnbrw {

struct RepoLanguage {
    std::string language;
    std::uint64_t bytes = 0;
};

struct SingleLanguageRepos {
    std::map<std::string, RepoLanguage> repos;
    std::size_t total_repos = 0;

    double retained_fraction() const;
};

/// Keeps the repositories that report exactly one language.
SingleLanguageRepos single_language_repos(const std::vector<RepoLanguageRecord>& rows);

enum class LanguageRule : int { bytes = 1, commits = 2, majority = 3, ownership = 4 };

/// login -> primary language under one assignment rule. Only users with at
/// least one commit to a single-language repository appear.
struct UserLanguageMap {
    LanguageRule rule = LanguageRule::bytes;
    std::map<std::string, std::string> language;
};

// All rules break ties toward the lexicographically smallest language.

/// Language of the largest (by bytes) single-language repo the user committed to.
UserLanguageMap rule1_bytes(const std::vector<CommitRecord>& commits, const SingleLanguageRepos& repos);

/// Language with the most commits, summed over the user's repos in that language.
UserLanguageMap rule2_commits(const std::vector<CommitRecord>& commits, const SingleLanguageRepos& repos);

/// Most common language among the distinct repos the user touched; each repo
/// votes once regardless of how many commits it received.
UserLanguageMap rule3_majority(const std::vector<CommitRecord>& commits, const SingleLanguageRepos& repos);

/// repo -> owner login taken from the `owner/name` prefix; repos without a
/// slash have no owner.
std::map<std::string, std::string> owners_from_names(const SingleLanguageRepos& repos);

/// Owners get the most common language over the single-language repos they
/// own; everyone else falls back to rule 1.
UserLanguageMap rule4_ownership(const std::vector<CommitRecord>& commits, const SingleLanguageRepos& repos,
                                const std::map<std::string, std::string>& repo_owners);

UserLanguageMap assign_languages(LanguageRule rule, const std::vector<CommitRecord>& commits,
                                 const SingleLanguageRepos& repos);

/// language -> share of users. Throws InsufficientDataError on an empty map.
std::map<std::string, double> language_proportions(const UserLanguageMap& m);

/// Per-node language under a map, for nodes listed by login.
std::vector<std::optional<std::string>> node_languages(const std::vector<std::string>& logins,
                                                       const UserLanguageMap& m);

struct DistinctLanguages {
    std::vector<std::size_t> counts;        // per community
    std::vector<CommunityId> no_languages;  // communities without a labeled member
};

/// Distinct assigned languages per community; unlabeled members are ignored.
DistinctLanguages distinct_languages_per_community(const Partition& p,
                                                   const std::vector<std::optional<std::string>>& languages);

/// `login,language,rule_id` rows with a header.
void write_language_csv(std::ostream& out, const UserLanguageMap& m);

/// Reads the format written by write_language_csv. The rule id must agree
/// across rows; malformed rows throw ValidationError with the line number.
UserLanguageMap read_language_csv(std::istream& in);

} // namespace csrnbrw

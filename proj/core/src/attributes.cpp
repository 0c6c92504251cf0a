#include "csrnbrw/attributes.hpp"

#include "csrnbrw/error.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace csrnbrw {

double SingleLanguageRepos::retained_fraction() const {
    return total_repos ? static_cast<double>(repos.size()) / static_cast<double>(total_repos) : 0.0;
}

SingleLanguageRepos single_language_repos(const std::vector<RepoLanguageRecord>& rows) {
    std::map<std::string, std::vector<const RepoLanguageRecord*>> by_repo;
    for (const auto& r : rows) {
        by_repo[r.repo].push_back(&r);
    }
    SingleLanguageRepos out;
    out.total_repos = by_repo.size();
    for (const auto& [repo, records] : by_repo) {
        std::set<std::string_view> languages;
        for (const auto* r : records) {
            languages.insert(r->language);
        }
        if (languages.size() == 1) {
            std::uint64_t bytes = 0;
            for (const auto* r : records) {
                bytes += r->bytes;
            }
            out.repos.emplace(repo, RepoLanguage{records.front()->language, bytes});
        }
    }
    return out;
}

namespace {

// Highest score wins; std::map iteration order makes the first maximum the
// lexicographically smallest language.
template <typename Score>
std::string argmax_language(const std::map<std::string, Score>& scores) {
    const std::string* best = nullptr;
    Score best_score{};
    for (const auto& [language, score] : scores) {
        if (best == nullptr || score > best_score) {
            best = &language;
            best_score = score;
        }
    }
    return *best;
}

// login -> (repo -> commit count), restricted to single-language repos.
std::map<std::string, std::map<std::string, std::size_t>> commits_by_user(
    const std::vector<CommitRecord>& commits, const SingleLanguageRepos& repos) {
    std::map<std::string, std::map<std::string, std::size_t>> out;
    for (const auto& c : commits) {
        if (repos.repos.contains(c.repo)) {
            ++out[c.login][c.repo];
        }
    }
    return out;
}

} // namespace

UserLanguageMap rule1_bytes(const std::vector<CommitRecord>& commits, const SingleLanguageRepos& repos) {
    UserLanguageMap m{LanguageRule::bytes, {}};
    for (const auto& [login, touched] : commits_by_user(commits, repos)) {
        std::map<std::string, std::uint64_t> largest;
        for (const auto& [repo, count] : touched) {
            const auto& info = repos.repos.at(repo);
            auto& slot = largest[info.language];
            slot = std::max(slot, info.bytes);
        }
        m.language.emplace(login, argmax_language(largest));
    }
    return m;
}

UserLanguageMap rule2_commits(const std::vector<CommitRecord>& commits, const SingleLanguageRepos& repos) {
    UserLanguageMap m{LanguageRule::commits, {}};
    for (const auto& [login, touched] : commits_by_user(commits, repos)) {
        std::map<std::string, std::size_t> per_language;
        for (const auto& [repo, count] : touched) {
            per_language[repos.repos.at(repo).language] += count;
        }
        m.language.emplace(login, argmax_language(per_language));
    }
    return m;
}

UserLanguageMap rule3_majority(const std::vector<CommitRecord>& commits, const SingleLanguageRepos& repos) {
    UserLanguageMap m{LanguageRule::majority, {}};
    for (const auto& [login, touched] : commits_by_user(commits, repos)) {
        std::map<std::string, std::size_t> votes;
        for (const auto& entry : touched) {
            ++votes[repos.repos.at(entry.first).language];
        }
        m.language.emplace(login, argmax_language(votes));
    }
    return m;
}

std::map<std::string, std::string> owners_from_names(const SingleLanguageRepos& repos) {
    std::map<std::string, std::string> out;
    for (const auto& entry : repos.repos) {
        const auto slash = entry.first.find('/');
        if (slash != std::string::npos && slash > 0) {
            out.emplace(entry.first, entry.first.substr(0, slash));
        }
    }
    return out;
}

UserLanguageMap rule4_ownership(const std::vector<CommitRecord>& commits, const SingleLanguageRepos& repos,
                                const std::map<std::string, std::string>& repo_owners) {
    std::map<std::string, std::map<std::string, std::size_t>> owned_votes;
    for (const auto& [repo, owner] : repo_owners) {
        const auto it = repos.repos.find(repo);
        if (it != repos.repos.end()) {
            ++owned_votes[owner][it->second.language];
        }
    }
    UserLanguageMap m = rule1_bytes(commits, repos);
    m.rule = LanguageRule::ownership;
    for (auto& [login, language] : m.language) {
        const auto it = owned_votes.find(login);
        if (it != owned_votes.end()) {
            language = argmax_language(it->second);
        }
    }
    return m;
}

UserLanguageMap assign_languages(LanguageRule rule, const std::vector<CommitRecord>& commits,
                                 const SingleLanguageRepos& repos) {
    switch (rule) {
    case LanguageRule::bytes:
        return rule1_bytes(commits, repos);
    case LanguageRule::commits:
        return rule2_commits(commits, repos);
    case LanguageRule::majority:
        return rule3_majority(commits, repos);
    case LanguageRule::ownership:
        return rule4_ownership(commits, repos, owners_from_names(repos));
    }
    throw ValidationError(fmt::format("unknown language rule {}", static_cast<int>(rule)));
}

std::map<std::string, double> language_proportions(const UserLanguageMap& m) {
    if (m.language.empty()) {
        throw InsufficientDataError("no users have an assigned language");
    }
    std::map<std::string, double> out;
    for (const auto& entry : m.language) {
        out[entry.second] += 1.0;
    }
    const auto total = static_cast<double>(m.language.size());
    for (auto& entry : out) {
        entry.second /= total;
    }
    return out;
}

std::vector<std::optional<std::string>> node_languages(const std::vector<std::string>& logins,
                                                       const UserLanguageMap& m) {
    std::vector<std::optional<std::string>> out(logins.size());
    for (std::size_t v = 0; v < logins.size(); ++v) {
        const auto it = m.language.find(logins[v]);
        if (it != m.language.end()) {
            out[v] = it->second;
        }
    }
    return out;
}

DistinctLanguages distinct_languages_per_community(const Partition& p,
                                                   const std::vector<std::optional<std::string>>& languages) {
    if (languages.size() != p.node_count()) {
        throw ValidationError("language vector does not cover the partition");
    }
    std::vector<std::set<std::string_view>> seen(p.community_count());
    for (NodeId v = 0; v < p.node_count(); ++v) {
        if (languages[v]) {
            seen[p[v]].insert(*languages[v]);
        }
    }
    DistinctLanguages out;
    out.counts.reserve(seen.size());
    for (CommunityId c = 0; c < seen.size(); ++c) {
        out.counts.push_back(seen[c].size());
        if (seen[c].empty()) {
            out.no_languages.push_back(c);
        }
    }
    return out;
}

void write_language_csv(std::ostream& out, const UserLanguageMap& m) {
    fmt::print(out, "login,language,rule_id\n");
    for (const auto& [login, language] : m.language) {
        fmt::print(out, "{},{},{}\n", login, language, static_cast<int>(m.rule));
    }
}

UserLanguageMap read_language_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line) && line.find_first_not_of(" \t\r") == std::string::npos) {
        ++line_no;
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != "login,language,rule_id") {
        throw ValidationError("expected header `login,language,rule_id`");
    }
    UserLanguageMap m;
    std::optional<int> rule;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto first = line.find(',');
        const auto last = line.rfind(',');
        int id = 0;
        if (first == std::string::npos || first == last || first == 0 || last == first + 1 ||
            !(std::istringstream(line.substr(last + 1)) >> id) || id < 1 || id > 4 ||
            (rule && *rule != id)) {
            throw ValidationError(fmt::format("language table line {} is malformed", line_no));
        }
        rule = id;
        m.language[line.substr(0, first)] = line.substr(first + 1, last - first - 1);
    }
    if (rule) {
        m.rule = static_cast<LanguageRule>(*rule);
    }
    return m;
}

} // namespace csrnbrw

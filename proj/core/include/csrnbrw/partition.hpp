#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace csrnbrw {

using NodeId = std::uint32_t;
using CommunityId = std::uint32_t;

/// Node -> community labeling with dense ids.
///
/// Labels are renumbered on construction so that community ids are contiguous
/// in [0, community_count) and appear in order of their first node. Two
/// partitions with the same blocks therefore compare equal regardless of the
/// labels they were built from.
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<CommunityId> labels);

    static Partition singletons(std::size_t node_count);
    static Partition single_block(std::size_t node_count);

    std::size_t node_count() const noexcept { return labels_.size(); }
    std::size_t community_count() const noexcept { return community_count_; }
    CommunityId operator[](NodeId node) const { return labels_[node]; }
    std::span<const CommunityId> labels() const noexcept { return labels_; }

    /// Member lists per community, each sorted ascending.
    std::vector<std::vector<NodeId>> members() const;
    std::vector<std::size_t> sizes() const;

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<CommunityId> labels_;
    std::size_t community_count_ = 0;
};

} // namespace csrnbrw

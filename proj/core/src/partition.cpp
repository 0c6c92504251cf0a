#include "csrnbrw/partition.hpp"

#include <limits>
#include <numeric>

namespace csrnbrw {

Partition::Partition(std::vector<CommunityId> labels) : labels_(std::move(labels)) {
    constexpr auto kUnset = std::numeric_limits<CommunityId>::max();
    std::vector<CommunityId> remap;
    for (auto& label : labels_) {
        if (label >= remap.size()) {
            remap.resize(static_cast<std::size_t>(label) + 1, kUnset);
        }
        if (remap[label] == kUnset) {
            remap[label] = static_cast<CommunityId>(community_count_++);
        }
        label = remap[label];
    }
}

Partition Partition::singletons(std::size_t node_count) {
    std::vector<CommunityId> labels(node_count);
    std::iota(labels.begin(), labels.end(), CommunityId{0});
    return Partition(std::move(labels));
}

Partition Partition::single_block(std::size_t node_count) {
    return Partition(std::vector<CommunityId>(node_count, 0));
}

std::vector<std::vector<NodeId>> Partition::members() const {
    std::vector<std::vector<NodeId>> out(community_count_);
    for (NodeId v = 0; v < labels_.size(); ++v) {
        out[labels_[v]].push_back(v);
    }
    return out;
}

std::vector<std::size_t> Partition::sizes() const {
    std::vector<std::size_t> out(community_count_, 0);
    for (const auto label : labels_) {
        ++out[label];
    }
    return out;
}

} // namespace csrnbrw

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <vector>

namespace iclust {

using ClusterId = std::size_t;

/// Disjoint cover of observations 0..n-1 by nonempty clusters.
class Partition {
public:
    Partition() = default;
    /// One cluster id per observation; ids need not be contiguous.
    explicit Partition(std::vector<ClusterId> assignment);

    std::size_t size() const noexcept { return assignment_.size(); }
    std::size_t k() const noexcept { return clusters_.size(); }

    ClusterId operator[](std::size_t i) const { return assignment_[i]; }
    const std::vector<ClusterId>& assignment() const noexcept { return assignment_; }
    /// Cluster id -> sorted member indices.
    const std::map<ClusterId, std::vector<std::size_t>>& clusters() const noexcept { return clusters_; }
    const std::vector<std::size_t>& members(ClusterId id) const;
    bool contains(ClusterId id) const { return clusters_.count(id) != 0; }

    /// Moves every member of `from` into `into`.
    void merge(ClusterId into, ClusterId from);

    /// Same grouping with ids renumbered 0..k-1 by first appearance.
    Partition relabeled() const;

    friend bool operator==(const Partition& a, const Partition& b) { return a.assignment_ == b.assignment_; }

private:
    std::vector<ClusterId> assignment_;
    std::map<ClusterId, std::vector<std::size_t>> clusters_;
};

/// True when both partitions group the observations identically (ids may differ).
bool same_grouping(const Partition& a, const Partition& b);

/// Two-column CSV "row_index,cluster_id" with a header row.
void write_partition_csv(const std::filesystem::path& path, const Partition& part);
/// Reads the format above; rows may appear in any order but must cover 0..n-1 exactly once.
Partition read_partition_csv(const std::filesystem::path& path);

}  // namespace iclust

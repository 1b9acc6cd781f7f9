#ifndef PLATOON_PLATOON_CONFIG_H_
#define PLATOON_PLATOON_CONFIG_H_

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "platoon/road_graph.h"
#include "platoon/timing.h"

namespace platoon {

inline constexpr std::size_t kDefaultMaxConfigs = 10000;

/// Who platoons with whom on which edge. predecessors[k-1][i] is the
/// predecessor of truck k on edge i of its route: k itself when driving solo
/// or leading, otherwise the smallest higher id in its platoon.
struct PlatoonConfiguration {
  std::vector<std::vector<int>> predecessors;

  static PlatoonConfiguration all_solo(std::span<const Route> routes);
  bool is_all_solo() const;
  bool operator==(const PlatoonConfiguration&) const = default;
};

/// Inclusive range of edges of a pair's shared sub-path.
struct MergeInterval {
  std::size_t first_edge = 0;
  std::size_t last_edge = 0;

  std::size_t length() const { return last_edge - first_edge + 1; }
  auto operator<=>(const MergeInterval&) const = default;
};

/// Compact pairwise encoding: where (if anywhere) two trucks platoon.
struct MergeChoice {
  int first_truck = 0;   // lower id
  int second_truck = 0;  // higher id
  std::optional<MergeInterval> interval;

  std::size_t merged_edges() const {
    return interval ? interval->length() : 0;
  }
  bool operator==(const MergeChoice&) const = default;
};

class InvalidConfiguration : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A set of pairwise choices whose transitive closure makes some pair of
/// trucks meet and split more than once.
class InconsistentChoices : public InvalidConfiguration {
 public:
  using InvalidConfiguration::InvalidConfiguration;
};

/// Two trucks (first < second) with at least one common edge.
struct TruckPair {
  int first = 0;
  int second = 0;
  SharedPath shared;
};

/// The common sub-path of two routes. When the common edges are not
/// contiguous (non-unique shortest paths) the longest run is used and a
/// warning is appended.
std::optional<SharedPath> pair_shared_path(const Route& r1, const Route& r2,
                                           std::vector<std::string>* warnings);

/// All truck pairs that share edges, ordered by (first, second).
std::vector<TruckPair> sharing_pairs(std::span<const Route> routes,
                                     std::vector<std::string>* warnings);

/// No-merge first, then every interval [a, b] of the shared sub-path whose
/// arrival windows overlap at each node a..b+1, in lexicographic order.
std::vector<MergeChoice> candidate_merge_intervals(int k1, int k2,
                                                   const SharedPath& shared,
                                                   const TimeWindows& w1,
                                                   const TimeWindows& w2);

/// Builds predecessor sequences from pairwise choices. Per edge, groups are
/// the transitive closure of the pairs merged there.
PlatoonConfiguration compose_configuration(std::span<const MergeChoice> choices,
                                           std::span<const Route> routes);

/// Throws InvalidConfiguration (or InconsistentChoices for a pair grouped on
/// more than one interval) when `config` breaks an invariant.
void check_configuration(const PlatoonConfiguration& config,
                         std::span<const Route> routes);

/// One choice per pair: the edges on which the pair is grouped.
std::vector<MergeChoice> encode_configuration(const PlatoonConfiguration& config,
                                              std::span<const Route> routes,
                                              std::span<const TruckPair> pairs);

/// Deterministic generator over composed configurations. Order: all-solo,
/// then by total number of merged pair-edges, then lexicographic in the
/// per-pair choice encoding.
class ConfigurationEnumerator {
 public:
  ConfigurationEnumerator(std::vector<Route> routes,
                          std::span<const TimeWindows> windows,
                          std::size_t max_configs = kDefaultMaxConfigs);

  std::optional<PlatoonConfiguration> next();

  /// True once the cap stopped the enumeration before it was exhausted.
  bool truncated() const { return truncated_; }
  std::size_t yielded() const { return yielded_; }
  const std::vector<TruckPair>& pairs() const { return pairs_; }
  const std::vector<std::vector<MergeChoice>>& candidates() const {
    return candidates_;
  }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  bool first_at_level(std::size_t level);
  bool advance(std::size_t level);
  bool fill_from(std::size_t pos, std::size_t remaining);
  std::optional<PlatoonConfiguration> compose_current() const;
  std::optional<PlatoonConfiguration> produce();

  std::vector<Route> routes_;
  std::vector<TruckPair> pairs_;
  std::vector<std::vector<MergeChoice>> candidates_;
  std::vector<std::vector<bool>> reachable_;  // [pos][sum]
  std::vector<std::size_t> index_;
  std::size_t level_ = 0;
  std::size_t max_level_ = 0;
  bool started_ = false;
  bool exhausted_ = false;
  std::size_t max_configs_;
  std::size_t yielded_ = 0;
  bool truncated_ = false;
  std::vector<std::string> warnings_;
};

}  // namespace platoon

#endif  // PLATOON_PLATOON_CONFIG_H_

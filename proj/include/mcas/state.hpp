#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mcas {

inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

/// 64-bit FNV-1a over raw bytes. Every stable digest in the project (state
/// digests, observation keys, BFS memoization) goes through this function;
/// it must never change.
constexpr std::uint64_t fnv1a(std::string_view bytes,
                              std::uint64_t h = kFnvOffsetBasis) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

/// Hierarchical property identifier, e.g. `PC1.processes.agents.agent1`.
/// Stored in canonical dotted form; segments are non-empty and contain no
/// separator, so string equality coincides with segment-list equality.
class PropertyId {
 public:
  PropertyId() = default;
  /// Throws std::invalid_argument on empty ids or empty segments.
  explicit PropertyId(std::string dotted);

  static std::optional<PropertyId> try_parse(std::string_view dotted);
  static bool valid(std::string_view dotted);

  const std::string& str() const { return dotted_; }

  /// Leading segment: the node name, or "agents" for agent knowledge.
  std::string_view head() const;
  std::string_view segment(std::size_t i) const;
  std::size_t segment_count() const;
  std::vector<std::string_view> segments() const;

  /// True when this id extends `prefix` by at least one segment.
  bool has_prefix(const PropertyId& prefix) const;

  auto operator<=>(const PropertyId&) const = default;

 private:
  std::string dotted_;
};

/// Property value: a UTF-8 text payload, or the Absent sentinel, which is
/// legal only inside action postconditions and means "delete this id".
class PropertyValue {
 public:
  PropertyValue() : text_(std::in_place) {}
  static PropertyValue text(std::string s);
  static PropertyValue absent();

  bool is_absent() const { return !text_.has_value(); }
  /// Precondition: !is_absent().
  const std::string& str() const { return *text_; }

  bool operator==(const PropertyValue&) const = default;

 private:
  std::optional<std::string> text_;
};

/// The couple (identifier, value). With an Absent value it is only meaningful
/// as a postcondition entry.
struct Property {
  PropertyId id;
  PropertyValue value;

  bool operator==(const Property&) const = default;
};

/// One environment state: the function id -> value over all nodes (node
/// membership is the id's leading segment). Never holds Absent values.
class EnvState {
 public:
  using Map = std::map<PropertyId, std::string>;
  using const_iterator = Map::const_iterator;

  EnvState() = default;

  bool contains(const PropertyId& id) const { return entries_.count(id) > 0; }
  /// nullptr when the id is unbound.
  const std::string* find(const PropertyId& id) const;

  void set(PropertyId id, std::string value);
  bool erase(const PropertyId& id) { return entries_.erase(id) > 0; }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }

  /// Stable content hash over the sorted entries.
  std::uint64_t digest() const;

  bool operator==(const EnvState&) const = default;

 private:
  Map entries_;
};

}  // namespace mcas

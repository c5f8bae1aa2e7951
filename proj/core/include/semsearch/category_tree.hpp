#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace semsearch {

using CategoryPath = std::vector<std::string>;

/// "sports/cricket"; the root path is the empty string.
std::string path_key(std::span<const std::string> path);
CategoryPath parse_path_key(std::string_view key);

/// The seven top-level categories used when no corpus dictates otherwise.
std::span<const std::string_view> default_top_categories() noexcept;

/// Repository taxonomy. Node 0 is the root; children are kept sorted by
/// name so child positions double as classifier category indices.
class CategoryTree {
 public:
  using NodeId = std::size_t;
  static constexpr NodeId kRoot = 0;

  struct Node {
    std::string name;
    NodeId parent = kRoot;
    std::vector<NodeId> children;
    std::vector<std::string> sentence_ids;  // leaves only
  };

  CategoryTree();

  /// Root with one leaf per default top-level category.
  static CategoryTree with_default_categories();

  /// Creates missing nodes along `path` and returns the final node.
  /// Throws Error(kData) for an empty path or empty segment.
  NodeId add_path(std::span<const std::string> path);

  /// Files a sentence under the leaf at `path` (created if needed). Throws
  /// Error(kData) when the path ends at an interior node or the path
  /// would turn a leaf holding sentences into an interior node.
  NodeId add_sentence(std::span<const std::string> path, const std::string& sentence_id);

  std::optional<NodeId> find(std::span<const std::string> path) const;
  std::optional<NodeId> child(NodeId node, std::string_view name) const;

  const Node& node(NodeId id) const { return nodes_.at(id); }
  std::size_t size() const noexcept { return nodes_.size(); }
  bool is_leaf(NodeId id) const { return nodes_.at(id).children.empty(); }
  CategoryPath path_of(NodeId id) const;
  std::string key_of(NodeId id) const { return path_key(path_of(id)); }
  std::vector<std::string> child_names(NodeId id) const;

  /// Leaves in the subtree of `id` (itself when a leaf), depth-first in
  /// child order.
  std::vector<NodeId> leaves_under(NodeId id) const;
  /// Interior nodes with at least two children, parents before children.
  std::vector<NodeId> decision_nodes() const;
  /// Position of `descendant`'s ancestor among `ancestor`'s children.
  std::optional<std::size_t> child_index_toward(NodeId ancestor, NodeId descendant) const;

  friend bool operator==(const CategoryTree& a, const CategoryTree& b);

 private:
  std::vector<Node> nodes_;
};

bool operator==(const CategoryTree::Node& a, const CategoryTree::Node& b);

}  // namespace semsearch

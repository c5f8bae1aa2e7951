#include "semsearch/category_tree.hpp"

#include <algorithm>
#include <array>

#include "io_util.hpp"
#include "semsearch/error.hpp"

namespace semsearch {
namespace {

constexpr std::array<std::string_view, 7> kDefaultTop = {
    "art & culture", "economics", "entertainment", "literature", "politics", "sports", "tourism"};

}  // namespace

std::string path_key(std::span<const std::string> path) {
  std::string key;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0) key += '/';
    key += path[i];
  }
  return key;
}

CategoryPath parse_path_key(std::string_view key) {
  CategoryPath path;
  if (key.empty()) return path;
  for (std::string_view part : detail::split(key, '/')) path.emplace_back(part);
  return path;
}

std::span<const std::string_view> default_top_categories() noexcept { return kDefaultTop; }

CategoryTree::CategoryTree() { nodes_.push_back(Node{}); }

CategoryTree CategoryTree::with_default_categories() {
  CategoryTree tree;
  for (std::string_view name : kDefaultTop) {
    const std::string segment(name);
    tree.add_path(std::span<const std::string>(&segment, 1));
  }
  return tree;
}

std::optional<CategoryTree::NodeId> CategoryTree::child(NodeId node, std::string_view name) const {
  for (NodeId c : nodes_.at(node).children) {
    if (nodes_[c].name == name) return c;
  }
  return std::nullopt;
}

CategoryTree::NodeId CategoryTree::add_path(std::span<const std::string> path) {
  if (path.empty()) throw Error(ErrorCode::kData, "empty category path");
  NodeId at = kRoot;
  for (const std::string& segment : path) {
    if (segment.empty() || segment.find('/') != std::string::npos) {
      throw Error(ErrorCode::kData, "invalid category name '" + segment + "' in path '" +
                                        path_key(path) + "'");
    }
    if (const auto existing = child(at, segment)) {
      at = *existing;
      continue;
    }
    if (!nodes_[at].sentence_ids.empty()) {
      throw Error(ErrorCode::kData, "category '" + key_of(at) +
                                        "' holds sentences and cannot gain subcategory '" +
                                        segment + "'");
    }
    const NodeId id = nodes_.size();
    nodes_.push_back(Node{segment, at, {}, {}});
    auto& siblings = nodes_[at].children;
    const auto pos = std::lower_bound(siblings.begin(), siblings.end(), segment,
                                      [&](NodeId n, const std::string& s) { return nodes_[n].name < s; });
    siblings.insert(pos, id);
    at = id;
  }
  return at;
}

CategoryTree::NodeId CategoryTree::add_sentence(std::span<const std::string> path,
                                                const std::string& sentence_id) {
  const NodeId leaf = add_path(path);
  if (!is_leaf(leaf)) {
    throw Error(ErrorCode::kData, "sentence '" + sentence_id + "' filed under '" + key_of(leaf) +
                                      "', which has subcategories");
  }
  nodes_[leaf].sentence_ids.push_back(sentence_id);
  return leaf;
}

std::optional<CategoryTree::NodeId> CategoryTree::find(std::span<const std::string> path) const {
  NodeId at = kRoot;
  for (const std::string& segment : path) {
    const auto next = child(at, segment);
    if (!next) return std::nullopt;
    at = *next;
  }
  return at;
}

CategoryPath CategoryTree::path_of(NodeId id) const {
  CategoryPath path;
  for (NodeId at = id; at != kRoot; at = nodes_.at(at).parent) path.push_back(nodes_[at].name);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<std::string> CategoryTree::child_names(NodeId id) const {
  std::vector<std::string> names;
  for (NodeId c : nodes_.at(id).children) names.push_back(nodes_[c].name);
  return names;
}

std::vector<CategoryTree::NodeId> CategoryTree::leaves_under(NodeId id) const {
  std::vector<NodeId> out;
  std::vector<NodeId> stack{id};
  while (!stack.empty()) {
    const NodeId at = stack.back();
    stack.pop_back();
    const auto& children = nodes_.at(at).children;
    if (children.empty()) {
      out.push_back(at);
    } else {
      for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(*it);
    }
  }
  return out;
}

std::vector<CategoryTree::NodeId> CategoryTree::decision_nodes() const {
  std::vector<NodeId> out;
  std::vector<NodeId> queue{kRoot};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const auto& children = nodes_[queue[i]].children;
    if (children.size() >= 2) out.push_back(queue[i]);
    queue.insert(queue.end(), children.begin(), children.end());
  }
  return out;
}

std::optional<std::size_t> CategoryTree::child_index_toward(NodeId ancestor,
                                                            NodeId descendant) const {
  NodeId at = descendant;
  while (at != kRoot && nodes_.at(at).parent != ancestor) at = nodes_[at].parent;
  if (at == kRoot) return std::nullopt;
  const auto& children = nodes_[ancestor].children;
  return static_cast<std::size_t>(std::find(children.begin(), children.end(), at) -
                                  children.begin());
}

bool operator==(const CategoryTree::Node& a, const CategoryTree::Node& b) {
  return a.name == b.name && a.parent == b.parent && a.children == b.children &&
         a.sentence_ids == b.sentence_ids;
}

bool operator==(const CategoryTree& a, const CategoryTree& b) { return a.nodes_ == b.nodes_; }

}  // namespace semsearch

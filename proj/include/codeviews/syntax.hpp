#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "codeviews/diagnostic.hpp"
#include "codeviews/preprocessor.hpp"

namespace codeviews {

// Pre-order index of a concrete-syntax node, or a synthetic id >= kSyntheticBase
// for nodes that exist only in derived graphs (function entry/exit, collapsed
// variables). The same id denotes the same construct in every view.
struct NodeId {
  std::uint64_t value = 0;

  friend auto operator<=>(NodeId, NodeId) = default;
};

inline constexpr std::uint64_t kSyntheticBase = 1'000'000'000ULL;
inline constexpr std::uint64_t kFunctionNodeBase = kSyntheticBase;
inline constexpr std::uint64_t kGlobalInitId = 1'999'999'999ULL;
inline constexpr std::uint64_t kCollapsedBase = 2'000'000'000ULL;

inline bool is_synthetic(NodeId id) { return id.value >= kSyntheticBase; }

struct Span {
  std::uint32_t file = 0;  // index into SourceUnit::files
  int line_start = 0;      // 1-based normalized line
  int col_start = 0;       // 1-based column
  int line_end = 0;
  int col_end = 0;         // exclusive

  bool operator==(const Span&) const = default;
};

struct SyntaxNode {
  NodeId id;
  std::string kind;
  std::string field;  // role in the parent ("condition", "body", ...), may be empty
  bool named = true;  // false for punctuation, operators and bare keywords
  Span span;
  std::uint32_t begin = 0;  // byte offsets into the normalized file text
  std::uint32_t end = 0;
  std::vector<NodeId> children;
  std::optional<NodeId> parent;

  bool is_leaf() const { return children.empty(); }
};

class SyntaxTree {
 public:
  SyntaxTree() = default;
  SyntaxTree(std::shared_ptr<const SourceUnit> unit, std::vector<SyntaxNode> nodes)
      : unit_(std::move(unit)), nodes_(std::move(nodes)) {}

  const SyntaxNode& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id.value)); }
  const SyntaxNode& root() const { return nodes_.front(); }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<SyntaxNode>& nodes() const { return nodes_; }
  const SourceUnit& unit() const { return *unit_; }
  std::shared_ptr<const SourceUnit> unit_ptr() const { return unit_; }
  bool contains(NodeId id) const { return id.value < nodes_.size(); }

  // Verbatim normalized source of the node (empty for the root).
  std::string_view text(NodeId id) const;
  std::optional<NodeId> child(NodeId id, std::string_view field) const;
  std::vector<NodeId> children_with_field(NodeId id, std::string_view field) const;
  std::vector<NodeId> named_children(NodeId id) const;
  std::optional<NodeId> first_child_of_kind(NodeId id, std::string_view kind) const;

  // Original (file, line) of the node's first and last line.
  LineOrigin origin_start(NodeId id) const;
  LineOrigin origin_end(NodeId id) const;

  // Pre-order walk; returning false from the visitor skips the subtree.
  void walk(NodeId from, const std::function<bool(const SyntaxNode&)>& visit) const;

 private:
  std::shared_ptr<const SourceUnit> unit_;
  std::vector<SyntaxNode> nodes_;
};

struct ParseResult {
  SyntaxTree tree;
  Diagnostics diagnostics;
};

// Parses every file of the unit into one translation_unit. Files with an
// unrecoverable syntax error are excluded and reported as SyntaxError.
ParseResult parse(std::shared_ptr<const SourceUnit> unit);
ParseResult parse(const SourceUnit& unit);

// Node kinds the parser can produce; used to validate blacklists.
const std::vector<std::string>& known_node_kinds();

}  // namespace codeviews

template <>
struct std::hash<codeviews::NodeId> {
  std::size_t operator()(codeviews::NodeId id) const noexcept { return std::hash<std::uint64_t>{}(id.value); }
};

#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace codeviews {

enum class View : std::uint8_t { Ast = 0, Cfg = 1, Dfg = 2 };

std::string_view view_name(View v);
// Accepts "ast", "cfg", "dfg" in any case; throws Error{BadArguments} otherwise.
View parse_view(std::string_view name);

// Small bitset over the three views. Iteration order is always AST, CFG, DFG.
class ViewSet {
 public:
  constexpr ViewSet() = default;
  constexpr ViewSet(std::initializer_list<View> views) {
    for (View v : views) insert(v);
  }

  constexpr void insert(View v) { bits_ |= bit(v); }
  constexpr void erase(View v) { bits_ &= static_cast<std::uint8_t>(~bit(v)); }
  constexpr bool contains(View v) const { return (bits_ & bit(v)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }

  constexpr ViewSet operator|(ViewSet o) const { return from_bits(bits_ | o.bits_); }
  constexpr ViewSet operator&(ViewSet o) const { return from_bits(bits_ & o.bits_); }
  constexpr bool operator==(const ViewSet&) const = default;

  std::vector<View> members() const;
  // Sorted lowercase names, e.g. {"cfg", "dfg"}.
  std::vector<std::string> names() const;

  static constexpr ViewSet all() { return {View::Ast, View::Cfg, View::Dfg}; }

 private:
  static constexpr std::uint8_t bit(View v) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(v));
  }
  static constexpr ViewSet from_bits(unsigned b) {
    ViewSet s;
    s.bits_ = static_cast<std::uint8_t>(b);
    return s;
  }
  std::uint8_t bits_ = 0;
};

// The first five categories correspond one-to-one to the failure classes the
// tool is known to struggle with; the rest are artifact-level conditions.
enum class DiagnosticCategory : std::uint8_t {
  GotoUnsupportedPattern,
  Multithreading,
  PointerArithmetic,
  OperatorOverloading,
  StaticVariables,
  UnsupportedMacro,
  SyntaxError,
  DroppedConditionalBranch,
  UnresolvedPointerCall,
  PathExplosion,
  Other,
};

inline constexpr DiagnosticCategory kAllCategories[] = {
    DiagnosticCategory::GotoUnsupportedPattern,
    DiagnosticCategory::Multithreading,
    DiagnosticCategory::PointerArithmetic,
    DiagnosticCategory::OperatorOverloading,
    DiagnosticCategory::StaticVariables,
    DiagnosticCategory::UnsupportedMacro,
    DiagnosticCategory::SyntaxError,
    DiagnosticCategory::DroppedConditionalBranch,
    DiagnosticCategory::UnresolvedPointerCall,
    DiagnosticCategory::PathExplosion,
    DiagnosticCategory::Other,
};

std::string_view category_name(DiagnosticCategory c);

// Views that a diagnostic of this category makes incomplete.
ViewSet default_fatal_views(DiagnosticCategory c);

struct Diagnostic {
  DiagnosticCategory category = DiagnosticCategory::Other;
  std::string file;
  int line = 0;  // original source line, 0 when unknown
  std::string message;
  ViewSet fatal_for;

  bool is_fatal() const { return !fatal_for.empty(); }
};

Diagnostic make_diagnostic(DiagnosticCategory c, std::string file, int line, std::string message);

using Diagnostics = std::vector<Diagnostic>;

}  // namespace codeviews

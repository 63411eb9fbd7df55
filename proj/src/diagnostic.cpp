#include "codeviews/diagnostic.hpp"

#include <cctype>

#include "codeviews/error.hpp"

namespace codeviews {

std::string_view view_name(View v) {
  switch (v) {
    case View::Ast: return "ast";
    case View::Cfg: return "cfg";
    case View::Dfg: return "dfg";
  }
  return "?";
}

View parse_view(std::string_view name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "ast") return View::Ast;
  if (lower == "cfg") return View::Cfg;
  if (lower == "dfg") return View::Dfg;
  throw Error(ErrorCode::BadArguments, "unknown view '" + std::string(name) + "'");
}

std::vector<View> ViewSet::members() const {
  std::vector<View> out;
  for (View v : {View::Ast, View::Cfg, View::Dfg}) {
    if (contains(v)) out.push_back(v);
  }
  return out;
}

std::vector<std::string> ViewSet::names() const {
  std::vector<std::string> out;
  for (View v : members()) out.emplace_back(view_name(v));
  return out;
}

std::string_view category_name(DiagnosticCategory c) {
  switch (c) {
    case DiagnosticCategory::GotoUnsupportedPattern: return "GotoUnsupportedPattern";
    case DiagnosticCategory::Multithreading: return "Multithreading";
    case DiagnosticCategory::PointerArithmetic: return "PointerArithmetic";
    case DiagnosticCategory::OperatorOverloading: return "OperatorOverloading";
    case DiagnosticCategory::StaticVariables: return "StaticVariables";
    case DiagnosticCategory::UnsupportedMacro: return "UnsupportedMacro";
    case DiagnosticCategory::SyntaxError: return "SyntaxError";
    case DiagnosticCategory::DroppedConditionalBranch: return "DroppedConditionalBranch";
    case DiagnosticCategory::UnresolvedPointerCall: return "UnresolvedPointerCall";
    case DiagnosticCategory::PathExplosion: return "PathExplosion";
    case DiagnosticCategory::Other: return "Other";
  }
  return "Other";
}

ViewSet default_fatal_views(DiagnosticCategory c) {
  switch (c) {
    case DiagnosticCategory::GotoUnsupportedPattern:
    case DiagnosticCategory::Multithreading:
    case DiagnosticCategory::OperatorOverloading:
      return {View::Cfg, View::Dfg};
    case DiagnosticCategory::PointerArithmetic:
    case DiagnosticCategory::StaticVariables:
      return {View::Dfg};
    case DiagnosticCategory::UnresolvedPointerCall:
      return {View::Cfg};
    case DiagnosticCategory::SyntaxError:
      return ViewSet::all();
    case DiagnosticCategory::UnsupportedMacro:
    case DiagnosticCategory::DroppedConditionalBranch:
    case DiagnosticCategory::PathExplosion:
    case DiagnosticCategory::Other:
      return {};
  }
  return {};
}

Diagnostic make_diagnostic(DiagnosticCategory c, std::string file, int line, std::string message) {
  return Diagnostic{c, std::move(file), line, std::move(message), default_fatal_views(c)};
}

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyProject: return "EmptyProject";
    case ErrorCode::CyclicInclude: return "CyclicInclude";
    case ErrorCode::UnterminatedComment: return "UnterminatedComment";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::DanglingGoto: return "DanglingGoto";
    case ErrorCode::UnknownFunction: return "UnknownFunction";
    case ErrorCode::ViewNotBuilt: return "ViewNotBuilt";
    case ErrorCode::RendererMissing: return "RendererMissing";
    case ErrorCode::RenderFailed: return "RenderFailed";
    case ErrorCode::BadArguments: return "BadArguments";
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::Io: return "Io";
  }
  return "Error";
}

}  // namespace codeviews

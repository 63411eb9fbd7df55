#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "codeviews/cfg.hpp"

namespace codeviews {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::size_t kDotLabelMax = 60;

// Canonical JSON: nodes ascending by id, edges by (view, src, dst, label).
std::string to_json(const CodeGraph& g);
// Inverse of to_json. Throws Error{InvalidGraph} on malformed input.
CodeGraph from_json(std::string_view text);

// Colors: AST black, CFG red, DFG blue. Labels are "L<line>: <text>",
// truncated to kDotLabelMax characters.
std::string to_dot(const CodeGraph& g);

// Enumerated paths as JSON: node id sequences plus the bounds used.
std::string paths_to_json(const PathBundle& bundle);

// Escapes text for a double-quoted DOT string.
std::string dot_escape(std::string_view text);

// Runs `<renderer> -Tpng -o <out> <in>`. The renderer is looked up on PATH
// unless it contains a slash. Throws Error{RendererMissing} or
// Error{RenderFailed} (with the renderer's stderr).
void render_png(const std::string& dot_text, const std::filesystem::path& out_path,
                const std::string& renderer = "dot");

// Resolves a renderer name to an executable path, if any.
std::optional<std::filesystem::path> find_renderer(const std::string& renderer);

}  // namespace codeviews

#include "codeviews/exporter.hpp"

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "codeviews/error.hpp"
#include "json.hpp"

extern char** environ;

namespace codeviews {

using ojson = nlohmann::ordered_json;

std::string to_json(const CodeGraph& g) {
  ojson root;
  root["schema_version"] = kSchemaVersion;
  root["project"] = g.meta.project;
  root["lang"] = std::string(lang_name(g.meta.lang));
  root["views"] = g.views().names();
  ojson options = ojson::object();
  for (const auto& [k, v] : g.meta.options) options[k] = v;
  root["options"] = options;
  ojson nodes = ojson::array();
  for (const auto& [id, n] : g.nodes()) {
    ojson o;
    o["id"] = id.value;
    o["kind"] = n.kind;
    o["label"] = n.label;
    o["file"] = n.file;
    o["line_start"] = n.line_start;
    o["col_start"] = n.col_start;
    o["line_end"] = n.line_end;
    o["col_end"] = n.col_end;
    o["views"] = n.views.names();
    nodes.push_back(std::move(o));
  }
  root["nodes"] = std::move(nodes);
  std::vector<GraphEdge> edges = g.edges();
  std::sort(edges.begin(), edges.end(), edge_less);
  ojson es = ojson::array();
  for (const GraphEdge& e : edges) {
    ojson o;
    o["src"] = e.src.value;
    o["dst"] = e.dst.value;
    o["view"] = std::string(view_name(e.view));
    o["label"] = e.label;
    es.push_back(std::move(o));
  }
  root["edges"] = std::move(es);
  return root.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

namespace {

ViewSet views_from(const ojson& arr) {
  ViewSet out;
  for (const auto& v : arr) out.insert(parse_view(v.get<std::string>()));
  return out;
}

}  // namespace

CodeGraph from_json(std::string_view text) {
  CodeGraph g;
  try {
    const ojson root = ojson::parse(text);
    if (root.at("schema_version").get<int>() != kSchemaVersion) {
      throw Error(ErrorCode::InvalidGraph, "unsupported schema_version");
    }
    g.meta.project = root.at("project").get<std::string>();
    g.meta.lang = parse_lang(root.at("lang").get<std::string>());
    if (root.contains("options")) {
      for (const auto& [k, v] : root.at("options").items()) g.meta.options[k] = v.get<std::string>();
    }
    g.set_views(views_from(root.at("views")));
    for (const auto& o : root.at("nodes")) {
      GraphNode n;
      n.id = NodeId{o.at("id").get<std::uint64_t>()};
      n.kind = o.at("kind").get<std::string>();
      n.label = o.at("label").get<std::string>();
      n.file = o.at("file").get<std::string>();
      n.line_start = o.at("line_start").get<int>();
      n.col_start = o.at("col_start").get<int>();
      n.line_end = o.at("line_end").get<int>();
      n.col_end = o.at("col_end").get<int>();
      n.views = views_from(o.at("views"));
      g.upsert(std::move(n));
    }
    std::vector<GraphEdge> edges;
    for (const auto& o : root.at("edges")) {
      edges.push_back({NodeId{o.at("src").get<std::uint64_t>()}, NodeId{o.at("dst").get<std::uint64_t>()},
                       parse_view(o.at("view").get<std::string>()), o.at("label").get<std::string>()});
    }
    const ViewSet views = g.views();
    g.replace_edges(std::move(edges));
    g.set_views(views);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidGraph, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidGraph) throw;
    throw Error(ErrorCode::InvalidGraph, e.what());
  }
  g.canonicalize();
  g.validate();
  return g;
}

std::string paths_to_json(const PathBundle& bundle) {
  ojson root;
  root["schema_version"] = kSchemaVersion;
  root["function"] = bundle.function;
  root["bounds"] = {{"loop_iterations_max", bundle.bounds.loop_iterations_max},
                    {"recursion_depth_max", bundle.bounds.recursion_depth_max},
                    {"max_paths", bundle.bounds.max_paths}};
  root["truncated"] = bundle.truncated;
  ojson paths = ojson::array();
  for (const auto& p : bundle.paths) {
    ojson ids = ojson::array();
    for (NodeId id : p) ids.push_back(id.value);
    paths.push_back(std::move(ids));
  }
  root["paths"] = std::move(paths);
  return root.dump(2) + "\n";
}

std::string dot_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': break;
      default:
        if (static_cast<unsigned char>(c) < 0x20 || c == 0x7f) {
          out += ' ';
        } else {
          out += c;
        }
    }
  }
  return out;
}

namespace {

// First max code points of a UTF-8 string, with "..." when cut.
std::string truncate_utf8(const std::string& s, std::size_t max) {
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) starts.push_back(i);
  }
  if (starts.size() <= max) return s;
  return s.substr(0, starts[max - 3]) + "...";
}

std::string_view edge_color(View v) {
  switch (v) {
    case View::Ast: return "black";
    case View::Cfg: return "red";
    case View::Dfg: return "blue";
  }
  return "black";
}

}  // namespace

std::string to_dot(const CodeGraph& g) {
  std::ostringstream out;
  out << "digraph \"" << dot_escape(g.meta.project.empty() ? "codeviews" : g.meta.project) << "\" {\n";
  out << "  node [shape=box, fontname=\"Courier\", fontsize=10];\n";
  out << "  edge [fontname=\"Courier\", fontsize=9];\n";
  for (const auto& [id, n] : g.nodes()) {
    const std::string label = truncate_utf8("L" + std::to_string(n.line_start) + ": " + n.label, kDotLabelMax);
    out << "  n" << id.value << " [label=\"" << dot_escape(label) << "\"";
    if (n.kind == "entry" || n.kind == "exit") out << ", shape=ellipse";
    out << "];\n";
  }
  std::vector<GraphEdge> edges = g.edges();
  std::sort(edges.begin(), edges.end(), edge_less);
  for (const GraphEdge& e : edges) {
    out << "  n" << e.src.value << " -> n" << e.dst.value << " [color=" << edge_color(e.view);
    if (e.view != View::Ast && !e.label.empty()) {
      out << ", fontcolor=" << edge_color(e.view) << ", label=\"" << dot_escape(e.label) << "\"";
    }
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::optional<std::filesystem::path> find_renderer(const std::string& renderer) {
  namespace fs = std::filesystem;
  auto executable = [](const fs::path& p) {
    std::error_code ec;
    return fs::is_regular_file(p, ec) && ::access(p.c_str(), X_OK) == 0;
  };
  if (renderer.empty()) return std::nullopt;
  if (renderer.find('/') != std::string::npos) {
    if (executable(renderer)) return fs::path(renderer);
    return std::nullopt;
  }
  const char* path = std::getenv("PATH");
  if (!path) return std::nullopt;
  std::stringstream dirs(path);
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (dir.empty()) dir = ".";
    fs::path candidate = fs::path(dir) / renderer;
    if (executable(candidate)) return candidate;
  }
  return std::nullopt;
}

void render_png(const std::string& dot_text, const std::filesystem::path& out_path, const std::string& renderer) {
  namespace fs = std::filesystem;
  const auto exe = find_renderer(renderer);
  if (!exe) {
    throw Error(ErrorCode::RendererMissing, "renderer '" + renderer +
                                                "' not found; install Graphviz or pass --renderer "
                                                "(JSON and DOT outputs are unaffected)");
  }
  std::random_device rd;
  const fs::path tmp_dir = fs::temp_directory_path();
  const std::string tag = std::to_string(::getpid()) + "-" + std::to_string(rd());
  const fs::path dot_file = tmp_dir / ("codeviews-" + tag + ".dot");
  const fs::path err_file = tmp_dir / ("codeviews-" + tag + ".err");
  {
    std::ofstream f(dot_file, std::ios::binary);
    f << dot_text;
  }
  std::error_code ec;
  fs::remove(out_path, ec);

  const std::string exe_s = exe->string();
  const std::string out_s = out_path.string();
  const std::string in_s = dot_file.string();
  std::vector<char*> argv{const_cast<char*>(exe_s.c_str()), const_cast<char*>("-Tpng"), const_cast<char*>("-o"),
                          const_cast<char*>(out_s.c_str()), const_cast<char*>(in_s.c_str()), nullptr};
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, 1, "/dev/null", O_WRONLY, 0);
  posix_spawn_file_actions_addopen(&actions, 2, err_file.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  pid_t pid = 0;
  const int rc = posix_spawn(&pid, exe_s.c_str(), &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) {
    fs::remove(dot_file, ec);
    fs::remove(err_file, ec);
    throw Error(ErrorCode::RendererMissing, "cannot start renderer '" + exe_s + "'");
  }
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  std::string err;
  {
    std::ifstream f(err_file, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    err = ss.str();
  }
  fs::remove(dot_file, ec);
  fs::remove(err_file, ec);
  const bool ok = WIFEXITED(status) && WEXITSTATUS(status) == 0;
  if (!ok) {
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    throw Error(ErrorCode::RenderFailed, "renderer exited with status " + std::to_string(code) + ": " + err);
  }
  if (!fs::exists(out_path, ec) || fs::file_size(out_path, ec) == 0) {
    throw Error(ErrorCode::RenderFailed, "renderer produced no output: " + err);
  }
}

}  // namespace codeviews

"""Aligned AST, CFG and DFG graphs for C/C++ source."""

import json as _json

from ._codeviews import (  # noqa: F401
    Error,
    analyze_file,
    analyze_folder,
    analyze_source,
    enumerate_paths,
    run_cli,
    to_dot,
)

__all__ = [
    "Error",
    "analyze_file",
    "analyze_folder",
    "analyze_source",
    "enumerate_paths",
    "graph",
    "run_cli",
    "to_dot",
]


def graph(code, lang="c", graphs=("cfg",), **kwargs):
    """Analyze a source string and return the graph as a parsed JSON dict."""
    result = analyze_source(code, lang, list(graphs), **kwargs)
    return _json.loads(result["json"])

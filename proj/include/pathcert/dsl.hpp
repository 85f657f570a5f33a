#pragma once

#include "pathcert/family.hpp"
#include "pathcert/graph.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace pathcert {

struct NamedPath {
    std::string name;
    InfinitePath path;
};

/// A graph file: one graph followed by optional path and family declarations.
struct Document {
    StagedGraph graph;
    std::vector<NamedPath> paths;
    std::vector<PathFamily> families;

    /// Throws ResolutionError for unknown names.
    const InfinitePath& path(std::string_view name) const;
    const PathFamily& family(std::string_view name) const;
};

/// Syntax only; no name resolution. Throws SyntaxError.
GraphSpec parse_graph_spec(std::string_view text);

/// Parses and validates the graph section of a graph file. Throws
/// SyntaxError, ResolutionError or DuplicateIdError.
StagedGraph parse_graph_dsl(std::string_view text);

/// Parses the whole file, resolving paths and families against the graph.
Document parse_document(std::string_view text);

/// Canonical pretty-printer; parse_graph_spec(render(s)) == s.
std::string render(const GraphSpec& spec);

/// Reads a file into memory; throws InputError when unreadable.
std::string read_file(const std::string& path);

}  // namespace pathcert

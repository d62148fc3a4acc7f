#pragma once

// Recursive-descent checker for the DOT language (graphviz grammar),
// independent of the library's emitters.

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace dotcheck {

struct Edge {
  std::string from, to;
  std::map<std::string, std::string> attrs;
};

struct Node {
  std::string id;
  std::map<std::string, std::string> attrs;
};

struct Graph {
  bool directed = false;
  std::vector<Node> nodes;  // node statements, in order
  std::vector<Edge> edges;  // one entry per edge operator
};

/// Throws std::runtime_error with a position on a syntax error.
Graph parse(std::string_view text);

}  // namespace dotcheck

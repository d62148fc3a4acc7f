#include "dot_check.hpp"

#include <cctype>
#include <stdexcept>

namespace dotcheck {
namespace {

struct Tok {
  enum Kind { Id, Sym, Edge, End } kind;
  std::string text;
  std::size_t pos;
};

std::vector<Tok> lex(std::string_view s) {
  std::vector<Tok> out;
  std::size_t i = 0;
  auto fail = [&](const std::string& m) { throw std::runtime_error("DOT lex error at " + std::to_string(i) + ": " + m); };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '/' && i + 1 < s.size() && s[i + 1] == '/') {
      while (i < s.size() && s[i] != '\n') ++i;
    } else if (c == '/' && i + 1 < s.size() && s[i + 1] == '*') {
      const auto e = s.find("*/", i + 2);
      if (e == std::string_view::npos) fail("unterminated comment");
      i = e + 2;
    } else if (c == '#' && (i == 0 || s[i - 1] == '\n')) {
      while (i < s.size() && s[i] != '\n') ++i;
    } else if (c == '"') {
      std::string v;
      const std::size_t start = i++;
      for (;;) {
        if (i >= s.size()) fail("unterminated string");
        if (s[i] == '\\' && i + 1 < s.size()) {
          if (s[i + 1] == '"') v += '"';
          else v += s.substr(i, 2);
          i += 2;
          continue;
        }
        if (s[i] == '"') break;
        v += s[i++];
      }
      ++i;
      out.push_back({Tok::Id, v, start});
    } else if (c == '<') {
      int depth = 0;
      const std::size_t start = i;
      do {
        if (i >= s.size()) fail("unterminated HTML string");
        if (s[i] == '<') ++depth;
        if (s[i] == '>') --depth;
        ++i;
      } while (depth > 0);
      out.push_back({Tok::Id, std::string(s.substr(start, i - start)), start});
    } else if (c == '-' && i + 1 < s.size() && (s[i + 1] == '>' || s[i + 1] == '-')) {
      out.push_back({Tok::Edge, std::string(s.substr(i, 2)), i});
      i += 2;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || static_cast<unsigned char>(c) >= 0x80) {
      const std::size_t start = i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' ||
                              static_cast<unsigned char>(s[i]) >= 0x80))
        ++i;
      out.push_back({Tok::Id, std::string(s.substr(start, i - start)), start});
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-') {
      const std::size_t start = i++;
      while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) ++i;
      out.push_back({Tok::Id, std::string(s.substr(start, i - start)), start});
    } else if (std::string_view("{}[];,=:").find(c) != std::string_view::npos) {
      out.push_back({Tok::Sym, std::string(1, c), i++});
    } else {
      fail(std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

bool keyword(const Tok& t, std::string_view kw) {
  if (t.kind != Tok::Id || t.text.size() != kw.size()) return false;
  for (std::size_t i = 0; i < kw.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(t.text[i])) != kw[i]) return false;
  return true;
}

class Parser {
 public:
  explicit Parser(std::vector<Tok> toks) : t_(std::move(toks)) {}

  Graph graph() {
    Graph g;
    if (keyword(peek(), "strict")) ++p_;
    if (keyword(peek(), "digraph")) g.directed = true;
    else if (!keyword(peek(), "graph")) fail("expected graph or digraph");
    ++p_;
    if (peek().kind == Tok::Id) ++p_;
    expect("{");
    stmt_list(g);
    expect("}");
    if (peek().kind != Tok::End) fail("trailing input");
    return g;
  }

 private:
  const Tok& peek(std::size_t k = 0) const { return t_[std::min(p_ + k, t_.size() - 1)]; }
  bool sym(std::string_view s) const { return peek().kind == Tok::Sym && peek().text == s; }
  [[noreturn]] void fail(const std::string& m) const {
    throw std::runtime_error("DOT syntax error at " + std::to_string(peek().pos) + ": " + m);
  }
  void expect(std::string_view s) {
    if (!sym(s)) fail("expected '" + std::string(s) + "'");
    ++p_;
  }
  std::string id() {
    if (peek().kind != Tok::Id) fail("expected identifier");
    return t_[p_++].text;
  }

  void stmt_list(Graph& g) {
    while (!sym("}") && peek().kind != Tok::End) {
      stmt(g);
      if (sym(";")) ++p_;
    }
  }

  std::map<std::string, std::string> attr_list() {
    std::map<std::string, std::string> attrs;
    while (sym("[")) {
      ++p_;
      while (!sym("]")) {
        const auto k = id();
        expect("=");
        attrs[k] = id();
        if (sym(";") || sym(",")) ++p_;
      }
      ++p_;
    }
    return attrs;
  }

  // Returns the node ids of an edge endpoint.
  std::vector<std::string> endpoint(Graph& g) {
    if (sym("{") || keyword(peek(), "subgraph")) return subgraph(g);
    auto n = id();
    if (sym(":")) {
      ++p_;
      id();
      if (sym(":")) {
        ++p_;
        id();
      }
    }
    return {n};
  }

  std::vector<std::string> subgraph(Graph& g) {
    if (keyword(peek(), "subgraph")) {
      ++p_;
      if (peek().kind == Tok::Id) ++p_;
    }
    const auto before = g.nodes.size();
    expect("{");
    stmt_list(g);
    expect("}");
    std::vector<std::string> ids;
    for (auto i = before; i < g.nodes.size(); ++i) ids.push_back(g.nodes[i].id);
    return ids;
  }

  void stmt(Graph& g) {
    if (keyword(peek(), "graph") || keyword(peek(), "node") || keyword(peek(), "edge")) {
      ++p_;
      if (!sym("[")) fail("expected attribute list");
      attr_list();
      return;
    }
    if (peek().kind == Tok::Id && peek(1).kind == Tok::Sym && peek(1).text == "=") {
      p_ += 2;
      id();
      return;
    }
    const bool is_sub = sym("{") || keyword(peek(), "subgraph");
    auto left = endpoint(g);
    if (peek().kind != Tok::Edge) {
      if (is_sub) return;
      g.nodes.push_back({left.front(), attr_list()});
      return;
    }
    std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> hops;
    while (peek().kind == Tok::Edge) {
      if ((peek().text == "->") != g.directed) fail("edge operator does not match graph kind");
      ++p_;
      auto right = endpoint(g);
      hops.push_back({left, right});
      left = right;
    }
    const auto attrs = attr_list();
    for (const auto& [from, to] : hops)
      for (const auto& f : from)
        for (const auto& t : to) g.edges.push_back({f, t, attrs});
  }

  std::vector<Tok> t_;
  std::size_t p_ = 0;
};

}  // namespace

Graph parse(std::string_view text) { return Parser(lex(text)).graph(); }

}  // namespace dotcheck

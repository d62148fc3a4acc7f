#include "pmllm/petri_net.hpp"

#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <charconv>
#include <sstream>

#include "pmllm/error.hpp"
#include "pmllm/log_io.hpp"

namespace pmllm {
namespace {

namespace pt = boost::property_tree;

std::int64_t token_count(const std::string& raw, const std::string& where) {
  const auto text = boost::algorithm::trim_copy(raw);
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || p != text.data() + text.size() || v < 0)
    throw Error(ErrorCode::XmlParse, "bad token count '" + text + "' at " + where, where);
  return v;
}

bool is_invisible(const pt::ptree& node) {
  for (const auto& [tag, child] : node)
    if (tag == "toolspecific" && child.get<std::string>("<xmlattr>.activity", "") == "$invisible$")
      return true;
  return false;
}

void collect(const pt::ptree& node, PetriNet& net,
             std::vector<std::pair<std::string, std::string>>& arcs) {
  for (const auto& [tag, child] : node) {
    if (tag == "page") {
      collect(child, net, arcs);
    } else if (tag == "place") {
      const auto id = child.get<std::string>("<xmlattr>.id", "");
      if (id.empty()) throw Error(ErrorCode::XmlParse, "place without id", "place");
      net.places.insert(id);
      if (auto m = child.get_optional<std::string>("initialMarking.text")) {
        const auto tokens = token_count(*m, id);
        if (tokens > 0) net.initial_marking[id] = tokens;
      }
    } else if (tag == "transition") {
      const auto id = child.get<std::string>("<xmlattr>.id", "");
      if (id.empty()) throw Error(ErrorCode::XmlParse, "transition without id", "transition");
      std::optional<std::string> label;
      if (auto name = child.get_optional<std::string>("name.text"); name && !is_invisible(child))
        label = boost::algorithm::trim_copy(*name);
      net.transitions[id] = label;
    } else if (tag == "arc") {
      arcs.emplace_back(child.get<std::string>("<xmlattr>.source", ""),
                        child.get<std::string>("<xmlattr>.target", ""));
    } else if (tag == "finalmarkings") {
      // Only the first marking is kept.
      if (auto marking = child.get_child_optional("marking")) {
        for (const auto& [ptag, place] : *marking) {
          if (ptag != "place") continue;
          const auto ref = place.get<std::string>("<xmlattr>.idref", "");
          const auto tokens = token_count(place.get<std::string>("text", "0"), ref);
          if (tokens > 0) net.final_marking[ref] = tokens;
        }
      }
    }
  }
}

}  // namespace

void PetriNet::validate() const {
  for (const auto& [src, dst] : arcs) {
    const bool known = (is_place(src) || is_transition(src)) && (is_place(dst) || is_transition(dst));
    if (!known)
      throw Error(ErrorCode::InvalidArgument, "arc " + src + " -> " + dst + " names an unknown node",
                  src + "->" + dst);
    if (is_place(src) == is_place(dst))
      throw Error(ErrorCode::NonBipartiteArc, "arc " + src + " -> " + dst + " is not place<->transition",
                  src + "->" + dst);
  }
  for (const auto* marking : {&initial_marking, &final_marking})
    for (const auto& [place, _] : *marking)
      if (!is_place(place))
        throw Error(ErrorCode::InvalidArgument, "marking names unknown place '" + place + "'", place);
}

PetriNet parse_pnml(std::string_view text) {
  pt::ptree doc;
  try {
    std::istringstream in{std::string(text)};
    pt::read_xml(in, doc, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::XmlParse, e.what(), "line " + std::to_string(e.line()));
  }
  auto net_node = doc.get_child_optional("pnml.net");
  if (!net_node) throw Error(ErrorCode::XmlParse, "document has no pnml/net element", "pnml");
  PetriNet net;
  std::vector<std::pair<std::string, std::string>> arcs;
  collect(*net_node, net, arcs);
  for (auto& a : arcs) {
    if (a.first.empty() || a.second.empty())
      throw Error(ErrorCode::XmlParse, "arc without source or target", "arc");
    net.arcs.insert(std::move(a));
  }
  try {
    net.validate();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NonBipartiteArc) throw;
    throw Error(ErrorCode::XmlParse, e.what(), e.subject());
  }
  return net;
}

PetriNet import_pnml(const std::filesystem::path& path) { return parse_pnml(read_text_file(path)); }

}  // namespace pmllm

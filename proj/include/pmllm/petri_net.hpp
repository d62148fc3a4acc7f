#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>

namespace pmllm {

using Marking = std::map<std::string, std::int64_t>;  // place id -> tokens

struct PetriNet {
  std::set<std::string> places;
  std::map<std::string, std::optional<std::string>> transitions;  // id -> label, nullopt = silent
  std::set<std::pair<std::string, std::string>> arcs;             // (source, target)
  Marking initial_marking;
  Marking final_marking;

  bool is_place(std::string_view id) const { return places.contains(std::string(id)); }
  bool is_transition(std::string_view id) const { return transitions.contains(std::string(id)); }

  /// Throws NonBipartiteArc / InvalidArgument when the structure is inconsistent.
  void validate() const;
};

/// PNML place/transition/arc structure (pages are flattened). Transitions
/// without a name, or marked invisible by tool-specific data, are silent.
/// The final marking comes from a `finalmarkings` section when present.
PetriNet parse_pnml(std::string_view text);
PetriNet import_pnml(const std::filesystem::path& path);

}  // namespace pmllm

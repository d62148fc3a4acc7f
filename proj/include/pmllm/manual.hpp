#pragma once

#include <string>
#include <vector>

namespace pmllm {

struct ManualEntry {
  std::string module;
  std::string name;
  std::string signature;
  std::string description;
  std::string example;
};

/// Every public operation and CLI subcommand, ordered by module then name.
std::vector<ManualEntry> api_entries();

/// Plain-text manual of api_entries(), meant to be handed to an assistant
/// as reference material.
std::string export_api_manual();

}  // namespace pmllm

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "cms/instances.hpp"

namespace cms {

// An instance file is a UTF-8 JSON document:
//   { "kind": "cms" | "cabinets" | "pandora_cabinets" | "noi_pandora",
//     "matroid": { "type": "uniform" | "partition" | "explicit", ... },
//     "processes" | "cabinets" | "boxes": [...] }
// MSPs are written as { "states": [{"id", "value"}], "start",
// "actions": [{"state", "cost", "transitions": [{"to", "p"}]}] } and cabinet
// scenarios as [{"p", "values": [...]}]. Parse errors carry the offending
// field path.
struct ParsedInstance {
  std::variant<CmsInstance, CabinetsInstance, PandoraCabinetsInstance,
               NoiPandoraInstance>
      value;

  const char* kind() const;
  std::vector<std::string> validate() const;
  int arrival_count() const;
};

ParsedInstance parse_instance_text(const std::string& text);
ParsedInstance load_instance(const std::string& path);

// Canonical serialization; parse(serialize(x)) reproduces x exactly.
std::string serialize_instance(const ParsedInstance& inst);
void save_instance(const std::string& path, const ParsedInstance& inst);

}  // namespace cms

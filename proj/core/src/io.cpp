#include "cms/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace cms {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParameterError(path + ": " + what);
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

const json& get_field(const json& j, const char* name, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(name);
  if (it == j.end()) fail(path + "/" + name, "missing field");
  return *it;
}

Msp parse_msp(const json& j, const std::string& path) {
  Msp m;
  const json& states = get_field(j, "states", path);
  if (!states.is_array() || states.empty()) {
    fail(path + "/states", "expected a nonempty array");
  }
  std::map<int, int> id_to_index;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const std::string spath = path + "/states/" + std::to_string(k);
    const int id = get_int(get_field(states[k], "id", spath), spath + "/id");
    if (!id_to_index.emplace(id, static_cast<int>(k)).second) {
      fail(spath + "/id", "duplicate state id");
    }
    MspState st;
    st.value = get_number(get_field(states[k], "value", spath), spath + "/value");
    m.states.push_back(st);
  }
  const auto lookup = [&](int id, const std::string& where) {
    const auto it = id_to_index.find(id);
    if (it == id_to_index.end()) fail(where, "unknown state id");
    return it->second;
  };
  m.start = lookup(get_int(get_field(j, "start", path), path + "/start"),
                   path + "/start");
  if (const auto it = j.find("actions"); it != j.end()) {
    if (!it->is_array()) fail(path + "/actions", "expected an array");
    for (std::size_t k = 0; k < it->size(); ++k) {
      const std::string apath = path + "/actions/" + std::to_string(k);
      const json& ja = (*it)[k];
      const int s = lookup(get_int(get_field(ja, "state", apath), apath + "/state"),
                           apath + "/state");
      MspAction act;
      act.cost = get_number(get_field(ja, "cost", apath), apath + "/cost");
      const json& jt = get_field(ja, "transitions", apath);
      if (!jt.is_array()) fail(apath + "/transitions", "expected an array");
      for (std::size_t r = 0; r < jt.size(); ++r) {
        const std::string tpath = apath + "/transitions/" + std::to_string(r);
        Transition t;
        t.target = lookup(get_int(get_field(jt[r], "to", tpath), tpath + "/to"),
                          tpath + "/to");
        t.probability = get_number(get_field(jt[r], "p", tpath), tpath + "/p");
        act.transitions.push_back(t);
      }
      m.states[static_cast<std::size_t>(s)].actions.push_back(std::move(act));
    }
  }
  return m;
}

json dump_msp(const Msp& m) {
  json j;
  j["states"] = json::array();
  for (int s = 0; s < m.num_states(); ++s) {
    j["states"].push_back({{"id", s}, {"value", m.state(s).value}});
  }
  j["start"] = m.start;
  j["actions"] = json::array();
  for (int s = 0; s < m.num_states(); ++s) {
    for (const MspAction& act : m.state(s).actions) {
      json ja{{"state", s}, {"cost", act.cost}};
      ja["transitions"] = json::array();
      for (const Transition& t : act.transitions) {
        ja["transitions"].push_back({{"to", t.target}, {"p", t.probability}});
      }
      j["actions"].push_back(std::move(ja));
    }
  }
  return j;
}

Matroid parse_matroid(const json& j, const std::string& path) {
  const std::string type =
      get_field(j, "type", path).get<std::string>();
  const int n = get_int(get_field(j, "n", path), path + "/n");
  if (type == "uniform") {
    return Matroid::uniform(n, get_int(get_field(j, "rank", path), path + "/rank"));
  }
  if (type == "partition") {
    std::vector<std::vector<int>> blocks;
    for (const json& jb : get_field(j, "blocks", path)) {
      blocks.push_back(jb.get<std::vector<int>>());
    }
    return Matroid::partition(
        n, std::move(blocks),
        get_field(j, "capacities", path).get<std::vector<int>>());
  }
  if (type == "explicit") {
    std::vector<std::vector<int>> sets;
    for (const json& js : get_field(j, "independent_sets", path)) {
      sets.push_back(js.get<std::vector<int>>());
    }
    return Matroid::explicit_family(n, std::move(sets));
  }
  fail(path + "/type", "unknown matroid type '" + type + "'");
}

json dump_matroid(const Matroid& m) {
  json j;
  j["n"] = m.ground_size();
  switch (m.kind()) {
    case Matroid::Kind::kUniform:
      j["type"] = "uniform";
      j["rank"] = m.uniform_rank();
      break;
    case Matroid::Kind::kPartition:
      j["type"] = "partition";
      j["blocks"] = m.blocks();
      j["capacities"] = m.capacities();
      break;
    case Matroid::Kind::kExplicit:
      j["type"] = "explicit";
      j["independent_sets"] = m.independent_family();
      break;
  }
  return j;
}

DiscreteDistribution parse_distribution(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of atoms");
  std::vector<DiscreteDistribution::Atom> atoms;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string apath = path + "/" + std::to_string(k);
    atoms.push_back({get_number(get_field(j[k], "value", apath), apath + "/value"),
                     get_number(get_field(j[k], "p", apath), apath + "/p")});
  }
  try {
    return DiscreteDistribution(std::move(atoms));
  } catch (const ParameterError& e) {
    fail(path, e.what());
  }
}

}  // namespace

const char* ParsedInstance::kind() const {
  switch (value.index()) {
    case 0: return "cms";
    case 1: return "cabinets";
    case 2: return "pandora_cabinets";
    default: return "noi_pandora";
  }
}

std::vector<std::string> ParsedInstance::validate() const {
  return std::visit([](const auto& inst) { return validate_instance(inst); },
                    value);
}

int ParsedInstance::arrival_count() const {
  return std::visit(
      [](const auto& inst) -> int {
        using T = std::decay_t<decltype(inst)>;
        if constexpr (std::is_same_v<T, CmsInstance>) {
          return static_cast<int>(inst.processes.size());
        } else if constexpr (std::is_same_v<T, NoiPandoraInstance>) {
          return static_cast<int>(inst.boxes.size());
        } else {
          return static_cast<int>(inst.cabinets.size());
        }
      },
      value);
}

ParsedInstance parse_instance_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParameterError(std::string("not valid JSON: ") + e.what());
  }
  const std::string kind = get_field(j, "kind", "").get<std::string>();
  ParsedInstance out;
  if (kind == "cms") {
    CmsInstance inst;
    inst.matroid = parse_matroid(get_field(j, "matroid", ""), "/matroid");
    const json& procs = get_field(j, "processes", "");
    for (std::size_t i = 0; i < procs.size(); ++i) {
      inst.processes.push_back(
          parse_msp(procs[i], "/processes/" + std::to_string(i)));
    }
    out.value = std::move(inst);
  } else if (kind == "cabinets") {
    CabinetsInstance inst;
    inst.matroid = parse_matroid(get_field(j, "matroid", ""), "/matroid");
    const json& cabs = get_field(j, "cabinets", "");
    for (std::size_t i = 0; i < cabs.size(); ++i) {
      const std::string cpath = "/cabinets/" + std::to_string(i);
      Cabinet cab;
      const json& scenarios = get_field(cabs[i], "scenarios", cpath);
      for (std::size_t k = 0; k < scenarios.size(); ++k) {
        const std::string spath = cpath + "/scenarios/" + std::to_string(k);
        Scenario sc;
        sc.probability = get_number(get_field(scenarios[k], "p", spath), spath + "/p");
        sc.values =
            get_field(scenarios[k], "values", spath).get<std::vector<double>>();
        cab.scenarios.push_back(std::move(sc));
      }
      inst.cabinets.push_back(std::move(cab));
    }
    out.value = std::move(inst);
  } else if (kind == "pandora_cabinets") {
    PandoraCabinetsInstance inst;
    inst.matroid = parse_matroid(get_field(j, "matroid", ""), "/matroid");
    const json& cabs = get_field(j, "cabinets", "");
    for (std::size_t i = 0; i < cabs.size(); ++i) {
      const std::string cpath = "/cabinets/" + std::to_string(i);
      PandoraCabinet cab;
      const json& drawers = get_field(cabs[i], "drawers", cpath);
      for (std::size_t k = 0; k < drawers.size(); ++k) {
        cab.drawers.push_back(
            parse_msp(drawers[k], cpath + "/drawers/" + std::to_string(k)));
      }
      inst.cabinets.push_back(std::move(cab));
    }
    out.value = std::move(inst);
  } else if (kind == "noi_pandora") {
    NoiPandoraInstance inst;
    const json& boxes = get_field(j, "boxes", "");
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      const std::string bpath = "/boxes/" + std::to_string(i);
      NoiBox box;
      box.cost = get_number(get_field(boxes[i], "cost", bpath), bpath + "/cost");
      box.dist = parse_distribution(get_field(boxes[i], "dist", bpath),
                                    bpath + "/dist");
      inst.boxes.push_back(std::move(box));
    }
    out.value = std::move(inst);
  } else {
    fail("/kind", "unknown instance kind '" + kind + "'");
  }
  return out;
}

ParsedInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_instance_text(buffer.str());
}

std::string serialize_instance(const ParsedInstance& inst) {
  json j;
  j["kind"] = inst.kind();
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, CmsInstance>) {
          j["matroid"] = dump_matroid(v.matroid);
          j["processes"] = json::array();
          for (const Msp& m : v.processes) j["processes"].push_back(dump_msp(m));
        } else if constexpr (std::is_same_v<T, CabinetsInstance>) {
          j["matroid"] = dump_matroid(v.matroid);
          j["cabinets"] = json::array();
          for (const Cabinet& cab : v.cabinets) {
            json jc;
            jc["scenarios"] = json::array();
            for (const Scenario& sc : cab.scenarios) {
              jc["scenarios"].push_back({{"p", sc.probability},
                                         {"values", sc.values}});
            }
            j["cabinets"].push_back(std::move(jc));
          }
        } else if constexpr (std::is_same_v<T, PandoraCabinetsInstance>) {
          j["matroid"] = dump_matroid(v.matroid);
          j["cabinets"] = json::array();
          for (const PandoraCabinet& cab : v.cabinets) {
            json jc;
            jc["drawers"] = json::array();
            for (const Msp& m : cab.drawers) jc["drawers"].push_back(dump_msp(m));
            j["cabinets"].push_back(std::move(jc));
          }
        } else {
          j["boxes"] = json::array();
          for (const NoiBox& box : v.boxes) {
            json jb{{"cost", box.cost}};
            jb["dist"] = json::array();
            for (const auto& atom : box.dist.atoms()) {
              jb["dist"].push_back({{"value", atom.value}, {"p", atom.probability}});
            }
            j["boxes"].push_back(std::move(jb));
          }
        }
      },
      inst.value);
  return j.dump(2) + "\n";
}

void save_instance(const std::string& path, const ParsedInstance& inst) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write '" + path + "'");
  out << serialize_instance(inst);
}

}  // namespace cms

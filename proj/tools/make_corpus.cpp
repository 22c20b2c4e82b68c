// Regenerates the bundled instance corpus: the worked examples plus small
// random suites with fixed seeds. Usage: cms_make_corpus <output dir>

#include <filesystem>
#include <iostream>

#include "cms/io.hpp"
#include "support/generators.hpp"

using namespace cms;
using namespace cms::testing;

namespace {

void write(const std::string& dir, const std::string& name,
           ParsedInstance inst) {
  save_instance(dir + "/" + name, inst);
  std::cout << name << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: cms_make_corpus <output dir>\n";
    return 2;
  }
  const std::string dir = argv[1];
  std::filesystem::create_directories(dir);

  {
    CmsInstance inst;
    inst.processes.push_back(box_msp(0.1, {{0.0, 0.5}, {1.0, 0.5}}));
    inst.matroid = Matroid::uniform(1, 1);
    write(dir, "coin_box.json", {inst});
  }
  {
    CmsInstance inst;
    inst.processes.push_back(box_msp(0.1, {{0.0, 0.5}, {1.0, 0.5}}));
    inst.processes.push_back(box_msp(0.1, {{0.0, 0.5}, {1.0, 0.5}}));
    inst.matroid = Matroid::uniform(2, 1);
    write(dir, "coin_box_pair.json", {inst});
  }
  {
    CmsInstance inst;
    inst.processes.push_back(two_action_msp());
    inst.matroid = Matroid::uniform(1, 1);
    write(dir, "risky_or_safe.json", {inst});
  }
  {
    CmsInstance inst;
    inst.processes.push_back(two_stage_bandit());
    inst.processes.push_back(sink_msp(0.5));
    inst.matroid = Matroid::uniform(2, 1);
    write(dir, "two_stage_pair.json", {inst});
  }
  {
    CabinetsInstance inst;
    Cabinet cab;
    cab.scenarios = {{0.5, {0.0, 6.0}}, {0.5, {10.0, 6.0}}};
    inst.cabinets.push_back(cab);
    inst.matroid = Matroid::uniform(1, 1);
    write(dir, "risky_or_steady_cabinet.json", {inst});
  }
  {
    // Cabinet 0 pays 1 for sure; cabinet 1 pays 100 with probability 1/100.
    // The online welfare sits near half the relaxation value here.
    CabinetsInstance inst;
    Cabinet sure;
    sure.scenarios = {{1.0, {1.0}}};
    Cabinet longshot;
    longshot.scenarios = {{0.99, {0.0}}, {0.01, {100.0}}};
    inst.cabinets = {sure, longshot};
    inst.matroid = Matroid::uniform(2, 1);
    write(dir, "halving_pair.json", {inst});
  }
  {
    NoiPandoraInstance inst;
    inst.boxes.push_back({2.0, DiscreteDistribution({{0.0, 0.5}, {10.0, 0.5}})});
    inst.boxes.push_back({1.0, DiscreteDistribution({{3.0, 1.0}})});
    write(dir, "inspect_or_take.json", {inst});
  }
  {
    PandoraCabinetsInstance inst;
    PandoraCabinet cab;
    cab.drawers = {box_msp(0.1, {{0.0, 0.5}, {1.0, 0.5}}), sink_msp(0.3)};
    inst.cabinets = {cab};
    inst.matroid = Matroid::uniform(1, 1);
    write(dir, "bandit_drawer.json", {inst});
  }
  {
    // Intentionally broken: a two-cycle. Exercises validation failure paths.
    CmsInstance inst;
    Msp cyclic;
    cyclic.start = 0;
    cyclic.states.resize(2);
    cyclic.states[0].actions = {{0.1, {{1, 1.0}}}};
    cyclic.states[1].actions = {{0.1, {{0, 1.0}}}};
    inst.processes.push_back(cyclic);
    inst.matroid = Matroid::uniform(1, 1);
    write(dir, "invalid_cycle.json", {inst});
  }

  // Random suites with committed seeds.
  Rng cms_rng(20240801);
  for (int k = 0; k < 3; ++k) {
    write(dir, "random_cms_" + std::to_string(k) + ".json",
          {random_cms_instance(cms_rng, 3, {4, 2, 2}, 2)});
  }
  Rng cab_rng(20240802);
  for (int k = 0; k < 3; ++k) {
    write(dir, "random_cabinets_" + std::to_string(k) + ".json",
          {random_cabinets_instance(cab_rng, 4, 2)});
  }
  Rng noi_rng(20240803);
  for (int k = 0; k < 2; ++k) {
    write(dir, "random_noi_" + std::to_string(k) + ".json",
          {random_noi_instance(noi_rng, 3, 3)});
  }
  return 0;
}

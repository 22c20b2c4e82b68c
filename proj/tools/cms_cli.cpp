// Command-line surface over the library: validate, index, saup, exante,
// prophet, oracle, convert, bench. Single commands print JSON to stdout;
// bench writes CSV. Exit codes: 0 success, 2 invalid input, 3 budget
// overrun, 1 anything else.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cms/exante.hpp"
#include "cms/indices.hpp"
#include "cms/io.hpp"
#include "cms/oracles.hpp"
#include "cms/prophet.hpp"
#include "cms/saup.hpp"

using nlohmann::json;
using namespace cms;

namespace {

json dump_distribution(const DiscreteDistribution& d) {
  json out = json::array();
  for (const auto& atom : d.atoms()) {
    out.push_back({{"value", atom.value}, {"p", atom.probability}});
  }
  return out;
}

json dump_policy(const StationaryPolicy& pi) {
  json out = json::array();
  for (std::size_t s = 0; s < pi.size(); ++s) {
    json d{{"state", s}};
    switch (pi[s].kind) {
      case PolicyDecision::Kind::kAdvance:
        d["decision"] = "advance";
        d["action"] = pi[s].action;
        break;
      case PolicyDecision::Kind::kClaim:
        d["decision"] = "claim";
        break;
      case PolicyDecision::Kind::kDiscard:
        d["decision"] = "discard";
        break;
    }
    out.push_back(std::move(d));
  }
  return out;
}

json index_table(const Msp& bandit) {
  const CappedValueTable table = compute_indices(bandit);
  json states = json::array();
  for (int s = 0; s < bandit.num_states(); ++s) {
    states.push_back({{"state", s},
                      {"sigma", table.sigma[static_cast<std::size_t>(s)]},
                      {"kappa", dump_distribution(
                                    table.kappa[static_cast<std::size_t>(s)])}});
  }
  return states;
}

// The capped-value embedding of a Pandora cabinet: one scenario per joint
// draw of the independent drawers' capped values. Negative capped values are
// clipped to zero: a nonnegative threshold never advances past them, and
// raising values keeps the embedding an upper bound on the search optimum.
CabinetsInstance kappa_instance(const PandoraCabinetsInstance& inst) {
  CabinetsInstance out;
  out.matroid = inst.matroid;
  for (const PandoraCabinet& cab : inst.cabinets) {
    std::vector<DiscreteDistribution> laws;
    for (const Msp& drawer : cab.drawers) {
      const CappedValueTable table = compute_indices(drawer);
      std::vector<DiscreteDistribution::Atom> clipped;
      for (const auto& atom :
           table.kappa[static_cast<std::size_t>(drawer.start)].atoms()) {
        clipped.push_back({std::max(atom.value, 0.0), atom.probability});
      }
      laws.push_back(DiscreteDistribution(std::move(clipped)));
    }
    Cabinet joint;
    joint.scenarios = {{1.0, {}}};
    for (const DiscreteDistribution& law : laws) {
      std::vector<Scenario> expanded;
      for (const Scenario& sc : joint.scenarios) {
        for (const auto& atom : law.atoms()) {
          Scenario next = sc;
          next.probability *= atom.probability;
          next.values.push_back(atom.value);
          expanded.push_back(std::move(next));
        }
      }
      if (expanded.size() > 100000) {
        throw SizeLimitError("kappa cabinet expansion too large");
      }
      joint.scenarios = std::move(expanded);
    }
    out.cabinets.push_back(std::move(joint));
  }
  return out;
}

struct ProphetOptions {
  double eps = 0.1;
  int trials = 1000;
  std::uint64_t seed = 12345;
  std::string threshold_mode = "exact";
  int mc_samples = 2000;
  bool exact_curves = false;
};

ThresholdSpec threshold_spec(const ProphetOptions& opt) {
  ThresholdSpec spec;
  spec.mode = opt.threshold_mode == "mc" ? ThresholdMode::kMonteCarlo
                                         : ThresholdMode::kExact;
  spec.samples = opt.mc_samples;
  return spec;
}

struct ProphetOutcome {
  double exante_objective = 0.0;
  WelfareEstimate estimate;
};

ProphetOutcome run_prophet(const ParsedInstance& inst, const ProphetOptions& opt) {
  ProphetOutcome out;
  const ThresholdSpec spec = threshold_spec(opt);
  if (const auto* cms_inst = std::get_if<CmsInstance>(&inst.value)) {
    const CmsProphetPlan plan(*cms_inst, opt.eps, opt.exact_curves, spec);
    out.exante_objective = plan.exante_objective();
    out.estimate = estimate_welfare(
        [&](std::uint64_t seed) { return plan.run(seed); }, opt.trials, opt.seed);
  } else if (const auto* cabs = std::get_if<CabinetsInstance>(&inst.value)) {
    const ExAnteSolution sol = solve_exante_cabinets(*cabs);
    out.exante_objective = sol.objective;
    ThresholdEngine engine(cabs->matroid, sol.q, sol.z, spec);
    out.estimate = estimate_welfare(
        [&](std::uint64_t seed) { return run_cabinets_prophet(*cabs, engine, seed); },
        opt.trials, opt.seed);
  } else {
    PandoraCabinetsInstance pandora;
    if (const auto* noi = std::get_if<NoiPandoraInstance>(&inst.value)) {
      pandora = convert_noi_to_cabinets(*noi);
    } else {
      pandora = std::get<PandoraCabinetsInstance>(inst.value);
    }
    const ExAnteSolution sol = solve_exante_cabinets(kappa_instance(pandora));
    out.exante_objective = sol.objective;
    out.estimate = estimate_welfare(
        [&](std::uint64_t seed) {
          return run_pandora_prophet(pandora, sol.q, sol.z, spec, seed);
        },
        opt.trials, opt.seed);
  }
  return out;
}

double run_oracle(const ParsedInstance& inst) {
  return std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, CmsInstance>) {
          return brute_force_opt_cms(v);
        } else if constexpr (std::is_same_v<T, CabinetsInstance>) {
          return brute_force_opt_cabinets(v);
        } else if constexpr (std::is_same_v<T, PandoraCabinetsInstance>) {
          return brute_force_opt_pandora_cabinets(v);
        } else {
          return brute_force_opt_noi(v);
        }
      },
      inst.value);
}

std::string csv_number(double v) {
  std::ostringstream out;
  out.precision(12);
  out << v;
  return out.str();
}

int require_valid_or_report(const ParsedInstance& inst) {
  const auto violations = inst.validate();
  if (violations.empty()) return 0;
  json out{{"valid", false}, {"violations", violations}};
  std::cout << out.dump(2) << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Markov search processes, capped-value indices, and matroid "
               "prophet algorithms"};
  app.require_subcommand(1);

  std::string path, out_path, to_kind, out_file;
  double tau = 0.0;
  bool use_fptas = false;
  double fptas_c = 1e-3, fptas_eps = 0.1;
  double convert_eps = -1.0;
  bool no_timing = false;
  ProphetOptions popt;

  auto* validate = app.add_subcommand("validate", "check an instance file");
  validate->add_option("file", path)->required();

  auto* index = app.add_subcommand("index", "index and capped-value tables");
  index->add_option("file", path)->required();

  auto* saup = app.add_subcommand("saup", "optimal priced-search policies");
  saup->add_option("file", path)->required();
  saup->add_option("--tau", tau, "posted price")->required();

  auto* exante = app.add_subcommand("exante", "ex-ante relaxation optimum");
  exante->add_option("file", path)->required();
  exante->add_flag("--fptas", use_fptas, "use the grid approximation");
  exante->add_option("--c", fptas_c, "additive scale of the approximation");
  exante->add_option("--eps", fptas_eps, "relative error of the approximation");

  auto* prophet = app.add_subcommand("prophet", "online algorithm Monte Carlo");
  prophet->add_option("file", path)->required();
  prophet->add_option("--eps", popt.eps, "target slack in the 1/2 - eps bound");
  prophet->add_option("--trials", popt.trials);
  prophet->add_option("--seed", popt.seed);
  prophet->add_option("--threshold-mode", popt.threshold_mode)
      ->check(CLI::IsMember({"exact", "mc"}));
  prophet->add_option("--mc-samples", popt.mc_samples);
  prophet->add_flag("--exact-curves", popt.exact_curves,
                    "exact value curves instead of the grid approximation");

  auto* oracle = app.add_subcommand("oracle", "brute-force adaptive optimum");
  oracle->add_option("file", path)->required();

  auto* convert = app.add_subcommand("convert", "instance reductions");
  convert->add_option("file", path)->required();
  convert->add_option("--to", to_kind, "pandora_cabinets or cms")->required();
  convert->add_option("--eps", convert_eps,
                      "cost shift (default: half the minimum advance cost)");
  convert->add_option("-o,--out", out_path, "output file")->required();

  auto* bench = app.add_subcommand("bench", "CSV benchmark over a directory");
  bench->add_option("dir", path)->required();
  bench->add_option("--out", out_file, "CSV output path")->required();
  bench->add_option("--trials", popt.trials);
  bench->add_option("--seed", popt.seed);
  bench->add_option("--eps", popt.eps);
  bench->add_flag("--no-timing", no_timing,
                  "leave wall_ms empty for byte-reproducible output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      const ParsedInstance inst = load_instance(path);
      const auto violations = inst.validate();
      json out{{"valid", violations.empty()},
               {"kind", inst.kind()},
               {"violations", violations}};
      std::cout << out.dump(2) << "\n";
      return violations.empty() ? 0 : 2;
    }

    if (index->parsed()) {
      const ParsedInstance inst = load_instance(path);
      if (int rc = require_valid_or_report(inst)) return rc;
      json tables = json::array();
      if (const auto* cms_inst = std::get_if<CmsInstance>(&inst.value)) {
        for (std::size_t i = 0; i < cms_inst->processes.size(); ++i) {
          if (!is_bandit(cms_inst->processes[i])) {
            throw ParameterError("process " + std::to_string(i) +
                                 " is not a bandit; no index table");
          }
          tables.push_back({{"process", i},
                            {"states", index_table(cms_inst->processes[i])}});
        }
      } else if (const auto* pandora =
                     std::get_if<PandoraCabinetsInstance>(&inst.value)) {
        for (std::size_t i = 0; i < pandora->cabinets.size(); ++i) {
          for (std::size_t j = 0; j < pandora->cabinets[i].drawers.size(); ++j) {
            tables.push_back(
                {{"cabinet", i},
                 {"drawer", j},
                 {"states", index_table(pandora->cabinets[i].drawers[j])}});
          }
        }
      } else {
        throw ParameterError("index applies to cms or pandora_cabinets files");
      }
      std::cout << json{{"tables", tables}}.dump(2) << "\n";
      return 0;
    }

    if (saup->parsed()) {
      const ParsedInstance inst = load_instance(path);
      if (int rc = require_valid_or_report(inst)) return rc;
      json out;
      out["tau"] = tau;
      if (const auto* cms_inst = std::get_if<CmsInstance>(&inst.value)) {
        json rows = json::array();
        for (std::size_t i = 0; i < cms_inst->processes.size(); ++i) {
          const SaupSolution sol = solve_saup(cms_inst->processes[i], tau);
          rows.push_back(
              {{"process", i},
               {"value", sol.value},
               {"claim_probability",
                claim_probability(cms_inst->processes[i], sol.policy)},
               {"policy", dump_policy(sol.policy)}});
        }
        out["processes"] = std::move(rows);
      } else if (const auto* cabs = std::get_if<CabinetsInstance>(&inst.value)) {
        json rows = json::array();
        for (std::size_t i = 0; i < cabs->cabinets.size(); ++i) {
          const CabinetSaup pick = solve_cabinet_saup(cabs->cabinets[i], tau);
          rows.push_back(
              {{"cabinet", i}, {"drawer", pick.drawer}, {"value", pick.value}});
        }
        out["cabinets"] = std::move(rows);
      } else {
        throw ParameterError("saup applies to cms or cabinets files");
      }
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (exante->parsed()) {
      const ParsedInstance inst = load_instance(path);
      if (int rc = require_valid_or_report(inst)) return rc;
      ExAnteSolution sol;
      if (const auto* cms_inst = std::get_if<CmsInstance>(&inst.value)) {
        sol = solve_exante_cms(
            *cms_inst, use_fptas
                           ? std::optional<FptasParams>{{fptas_c, fptas_eps}}
                           : std::nullopt);
      } else if (const auto* cabs = std::get_if<CabinetsInstance>(&inst.value)) {
        sol = solve_exante_cabinets(*cabs);
      } else {
        throw ParameterError("exante applies to cms or cabinets files");
      }
      json out{{"q", sol.q.q}, {"objective", sol.objective}, {"z", sol.z}};
      if (!sol.drawer_mixtures.empty()) {
        json mixtures = json::array();
        for (const DrawerMixture& mix : sol.drawer_mixtures) {
          json parts = json::array();
          for (const auto& part : mix.parts) {
            parts.push_back({{"weight", part.weight},
                             {"drawer", part.drawer},
                             {"quantile", part.quantile}});
          }
          mixtures.push_back(std::move(parts));
        }
        out["drawer_mixtures"] = std::move(mixtures);
      }
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (prophet->parsed()) {
      const ParsedInstance inst = load_instance(path);
      if (int rc = require_valid_or_report(inst)) return rc;
      const ProphetOutcome outcome = run_prophet(inst, popt);
      json out{{"mean", outcome.estimate.mean},
               {"se", outcome.estimate.std_error},
               {"exante_objective", outcome.exante_objective},
               {"trials", popt.trials},
               {"seed", popt.seed}};
      if (outcome.exante_objective > 0.0) {
        out["ratio"] = outcome.estimate.mean / outcome.exante_objective;
      } else {
        out["ratio"] = nullptr;
      }
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (oracle->parsed()) {
      const ParsedInstance inst = load_instance(path);
      if (int rc = require_valid_or_report(inst)) return rc;
      std::cout << json{{"opt", run_oracle(inst)}}.dump(2) << "\n";
      return 0;
    }

    if (convert->parsed()) {
      const ParsedInstance inst = load_instance(path);
      if (int rc = require_valid_or_report(inst)) return rc;
      ParsedInstance out;
      if (to_kind == "pandora_cabinets") {
        const auto* noi = std::get_if<NoiPandoraInstance>(&inst.value);
        if (!noi) throw ParameterError("--to pandora_cabinets needs a noi_pandora file");
        out.value = convert_noi_to_cabinets(*noi);
      } else if (to_kind == "cms") {
        PandoraCabinetsInstance pandora;
        if (const auto* noi = std::get_if<NoiPandoraInstance>(&inst.value)) {
          pandora = convert_noi_to_cabinets(*noi);
        } else if (const auto* pc =
                       std::get_if<PandoraCabinetsInstance>(&inst.value)) {
          pandora = *pc;
        } else {
          throw ParameterError("--to cms needs a noi_pandora or pandora_cabinets file");
        }
        const double eps =
            convert_eps > 0.0 ? convert_eps
                              : 0.5 * std::min(1.0, min_first_advance_cost(pandora));
        out.value = convert_cabinets_to_cms(pandora, eps);
      } else {
        throw ParameterError("unknown conversion target '" + to_kind + "'");
      }
      save_instance(out_path, out);
      std::cout << json{{"written", out_path}, {"kind", out.kind()}}.dump(2)
                << "\n";
      return 0;
    }

    if (bench->parsed()) {
      std::vector<std::filesystem::path> files;
      for (const auto& entry : std::filesystem::directory_iterator(path)) {
        if (entry.path().extension() == ".json") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      std::ofstream csv(out_file);
      if (!csv) throw ParameterError("cannot write '" + out_file + "'");
      csv << "instance,kind,n,exante_obj,oracle_opt,alg_mean,alg_se,ratio,wall_ms\n";
      std::size_t rows = 0;
      for (const auto& file : files) {
        ParsedInstance inst;
        try {
          inst = load_instance(file.string());
          if (!inst.validate().empty()) continue;
        } catch (const ParameterError&) {
          continue;
        }
        const auto start = std::chrono::steady_clock::now();
        const ProphetOutcome outcome = run_prophet(inst, popt);
        std::string oracle_text;
        try {
          oracle_text = csv_number(run_oracle(inst));
        } catch (const SizeLimitError&) {
          oracle_text.clear();
        }
        const auto stop = std::chrono::steady_clock::now();
        const auto ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(stop - start);
        csv << file.filename().string() << "," << inst.kind() << ","
            << inst.arrival_count() << "," << csv_number(outcome.exante_objective)
            << "," << oracle_text << "," << csv_number(outcome.estimate.mean)
            << "," << csv_number(outcome.estimate.std_error) << ",";
        if (outcome.exante_objective > 0.0) {
          csv << csv_number(outcome.estimate.mean / outcome.exante_objective);
        }
        csv << ",";
        if (!no_timing) csv << ms.count();
        csv << "\n";
        ++rows;
      }
      std::cout << json{{"written", out_file}, {"instances", rows}}.dump(2)
                << "\n";
      return 0;
    }
  } catch (const SizeLimitError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return 3;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

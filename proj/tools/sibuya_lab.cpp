// sibuya_lab: command-line access to the library.
//
// Exit codes: 0 success, 1 parameter/domain error, 2 operation unsupported for
// the family, 3 numeric failure.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sibuya/bd.hpp"
#include "sibuya/branching.hpp"
#include "sibuya/distributions.hpp"
#include "sibuya/errors.hpp"
#include "sibuya/gf.hpp"
#include "sibuya/moments.hpp"
#include "sibuya/numeric.hpp"
#include "sibuya/sampling.hpp"
#include "sibuya/selfdecomp.hpp"

using namespace sibuya;
using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Defaults from the file named by SIBUYA_LAB_CONFIG. Keys are option names
// with '-' or '_'; family parameters may also sit under "params".
class Config {
 public:
  Config() {
    const char* path = std::getenv("SIBUYA_LAB_CONFIG");
    if (!path || !*path) return;
    std::ifstream in(path);
    if (!in) throw ParameterError(std::string("cannot read SIBUYA_LAB_CONFIG file ") + path);
    try {
      data_ = json::parse(in);
    } catch (const json::exception& e) {
      throw ParameterError(std::string("SIBUYA_LAB_CONFIG: ") + e.what());
    }
    if (!data_.is_object()) throw ParameterError("SIBUYA_LAB_CONFIG must hold a JSON object");
  }

  const json* find(const std::string& name) const {
    for (const std::string& key : {name, underscored(name)}) {
      if (auto it = data_.find(key); it != data_.end()) return &*it;
    }
    return nullptr;
  }

  const json* find_param(const std::string& name) const {
    if (auto it = data_.find("params"); it != data_.end() && it->is_object()) {
      if (auto p = it->find(name); p != it->end()) return &*p;
    }
    return find(name);
  }

 private:
  static std::string underscored(std::string s) {
    for (char& c : s) {
      if (c == '-') c = '_';
    }
    return s;
  }
  json data_ = json::object();
};

const Config& config() {
  static const Config c;
  return c;
}

// flag > config > built-in
template <class T>
T setting(const CLI::Option* opt, const T& flag_value, const std::string& name, const T& builtin) {
  if (opt && opt->count() > 0) return flag_value;
  if (const json* v = config().find(name)) {
    try {
      return v->get<T>();
    } catch (const json::exception&) {
      throw ParameterError("config value for '" + name + "' has the wrong type");
    }
  }
  return builtin;
}

struct FamilyArgs {
  std::string family;
  std::vector<std::pair<std::string, CLI::Option*>> flags;
  std::vector<double> values = std::vector<double>(11, 0.0);

  void attach(CLI::App* app, bool need_family = true) {
    if (need_family) app->add_option("family", family, "distribution family")->required();
    // --p is the Bernoulli success probability ("a" internally; --a is the thinning factor)
    static const std::vector<std::pair<std::string, std::string>> names = {
        {"gamma", "gamma"}, {"lambda", "lambda"}, {"nu", "nu"}, {"b", "b"},     {"theta", "theta"}, {"q", "q"},
        {"k", "k"},         {"mean", "mean"},     {"ell", "ell"}, {"m", "m"}, {"p", "a"}};
    for (std::size_t i = 0; i < names.size(); ++i) {
      flags.emplace_back(names[i].second, app->add_option("--" + names[i].first, values[i]));
    }
  }

  DistributionSpec spec() const {
    ParamMap params;
    for (std::size_t i = 0; i < flags.size(); ++i) {
      const auto& [key, opt] = flags[i];
      if (opt->count() > 0) {
        params[key] = values[i];
      } else if (const json* v = config().find_param(key); v && v->is_number()) {
        params[key] = v->get<double>();
      }
    }
    return make_spec(family_from_name(family), params);
  }
};

json spec_json(const DistributionSpec& spec) {
  json params = json::object();
  for (const auto& [k, v] : spec.as_map()) params[k] = v;
  return {{"family", std::string(family_name(spec.family()))}, {"params", params}};
}

void print_table(const PmfTable& t, const std::string& format, json header) {
  if (format == "json") {
    header["schema_version"] = kSchemaVersion;
    header["probs"] = t.probs;
    header["tail_mass"] = t.tail_mass;
    header["provenance"] = t.provenance;
    std::cout << header.dump(2) << "\n";
    return;
  }
  if (format != "csv") throw ParameterError("format must be csv or json");
  std::cout << "n,p\n";
  for (std::size_t n = 0; n < t.size(); ++n) std::cout << n << "," << num(t.probs[n]) << "\n";
}

void print_json(json j) {
  j["schema_version"] = kSchemaVersion;
  std::cout << j.dump(2) << "\n";
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> w;
  if (text.find(':') != std::string::npos) {
    double lo = 0.0, hi = 0.0;
    long count = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 1) {
      throw ParameterError("grid must be 'w1,w2,...' or 'start:stop:count'");
    }
    for (long i = 0; i < count; ++i) w.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    return w;
  }
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      w.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParameterError("bad grid value '" + item + "'");
    }
  }
  if (w.empty()) throw ParameterError("empty grid");
  return w;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int exit_code(const Error& e) { return static_cast<int>(e.category()); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sibuya-type discrete distributions: tables, operators, tests and simulation"};
  app.require_subcommand(1);

  // pmf
  FamilyArgs pmf_args;
  long pmf_n = 0;
  std::string pmf_format;
  auto* pmf_cmd = app.add_subcommand("pmf", "probability table");
  pmf_args.attach(pmf_cmd);
  auto* pmf_n_opt = pmf_cmd->add_option("--n-max", pmf_n, "largest state");
  auto* pmf_fmt_opt = pmf_cmd->add_option("--format", pmf_format, "csv or json");

  // pgf-eval
  FamilyArgs eval_args;
  std::string eval_grid, eval_format;
  auto* eval_cmd = app.add_subcommand("pgf-eval", "evaluate the pgf on a grid");
  eval_args.attach(eval_cmd);
  auto* eval_grid_opt = eval_cmd->add_option("--w", eval_grid, "w1,w2,... or start:stop:count");
  auto* eval_fmt_opt = eval_cmd->add_option("--format", eval_format, "csv or json");

  // thin
  FamilyArgs thin_args;
  double thin_a = 0.0;
  long thin_n = 0;
  std::string thin_format;
  auto* thin_cmd = app.add_subcommand("thin", "pmf of the thinned law Q(1 - a + a w)");
  thin_args.attach(thin_cmd);
  thin_cmd->add_option("--a", thin_a, "thinning factor")->required();
  auto* thin_n_opt = thin_cmd->add_option("--n-max", thin_n, "largest state");
  auto* thin_fmt_opt = thin_cmd->add_option("--format", thin_format, "csv or json");

  // bd
  auto* bd_cmd = app.add_subcommand("bd", "birth-death chains");
  bd_cmd->require_subcommand(1);
  std::string solve_model, solve_format;
  long solve_n = 0;
  auto* solve_cmd = bd_cmd->add_subcommand("solve", "stationary law of a model");
  solve_cmd->add_option("--model", solve_model, "model JSON file")->required();
  auto* solve_n_opt = solve_cmd->add_option("--n-max", solve_n, "largest state");
  auto* solve_fmt_opt = solve_cmd->add_option("--format", solve_format, "csv or json");
  std::string sim_model, sim_format;
  double sim_t = 0.0;
  std::uint64_t sim_seed = 0;
  int sim_replicas = 0;
  long sim_initial = 0;
  auto* sim_cmd = bd_cmd->add_subcommand("simulate", "event-driven simulation of a model");
  sim_cmd->add_option("--model", sim_model, "model JSON file")->required();
  auto* sim_t_opt = sim_cmd->add_option("--t-end", sim_t, "simulated time per replica");
  auto* sim_seed_opt = sim_cmd->add_option("--seed", sim_seed, "RNG seed");
  auto* sim_rep_opt = sim_cmd->add_option("--replicas", sim_replicas, "independent replicas");
  auto* sim_init_opt = sim_cmd->add_option("--initial", sim_initial, "starting state");
  auto* sim_fmt_opt = sim_cmd->add_option("--format", sim_format, "csv or json");

  // moments
  FamilyArgs mom_args;
  int mom_j = 0;
  auto* mom_cmd = app.add_subcommand("moments", "factorial moments");
  mom_args.attach(mom_cmd);
  auto* mom_j_opt = mom_cmd->add_option("--j-max", mom_j, "highest order");

  // moment-finite
  FamilyArgs fin_args;
  double fin_r = 0.0;
  auto* fin_cmd = app.add_subcommand("moment-finite", "is E N^r finite (0 < r < 1)");
  fin_args.attach(fin_cmd);
  fin_cmd->add_option("--r", fin_r, "moment order")->required();

  // check-sd
  FamilyArgs sd_args;
  long sd_j = 0;
  std::string sd_method;
  double sd_a = 0.0;
  auto* sd_cmd = app.add_subcommand("check-sd", "self-decomposability checks");
  sd_args.attach(sd_cmd);
  auto* sd_j_opt = sd_cmd->add_option("--j-max", sd_j, "check range");
  auto* sd_method_opt = sd_cmd->add_option("--method", sd_method, "bondesson or residual");
  auto* sd_a_opt = sd_cmd->add_option("--a", sd_a, "thinning factor for the residual method");

  // progeny
  double prog_b = 0.0, prog_gamma = 0.0;
  bool prog_sim = false;
  long prog_replicas = 0, prog_n = 0;
  std::uint64_t prog_seed = 0;
  auto* prog_cmd = app.add_subcommand("progeny", "extended Sibuya as a branching-process progeny");
  prog_cmd->add_option("--b", prog_b, "b in (0, 1]")->required();
  prog_cmd->add_option("--gamma", prog_gamma, "gamma < 1")->required();
  auto* prog_n_opt = prog_cmd->add_option("--n-max", prog_n, "offspring coefficients to expand");
  prog_cmd->add_flag("--simulate", prog_sim, "run the Galton-Watson simulation");
  auto* prog_rep_opt = prog_cmd->add_option("--replicas", prog_replicas, "simulated trees");
  auto* prog_seed_opt = prog_cmd->add_option("--seed", prog_seed, "RNG seed");

  // sample
  FamilyArgs samp_args;
  long samp_n = 0;
  std::uint64_t samp_seed = 0;
  std::string samp_format;
  double samp_thin = 0.0;
  auto* samp_cmd = app.add_subcommand("sample", "random variates");
  samp_args.attach(samp_cmd);
  auto* samp_n_opt = samp_cmd->add_option("-n,--count", samp_n, "number of variates");
  auto* samp_seed_opt = samp_cmd->add_option("--seed", samp_seed, "RNG seed");
  auto* samp_fmt_opt = samp_cmd->add_option("--format", samp_format, "lines or csv (binned)");
  auto* samp_thin_opt = samp_cmd->add_option("--thin", samp_thin, "thin each draw with factor in (0, 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (pmf_cmd->parsed()) {
      const auto spec = pmf_args.spec();
      const long n = setting<long>(pmf_n_opt, pmf_n, "n-max", 50);
      if (n < 0) throw ParameterError("n-max must be >= 0");
      print_table(pmf_table(spec, n), setting<std::string>(pmf_fmt_opt, pmf_format, "format", "csv"),
                  spec_json(spec));
    } else if (eval_cmd->parsed()) {
      const auto spec = eval_args.spec();
      const auto grid = parse_grid(setting<std::string>(eval_grid_opt, eval_grid, "w", "0:1:11"));
      const Pgf q = Pgf::closed_form(spec);
      std::vector<double> values;
      for (double w : grid) values.push_back(pgf_eval(q, w));
      if (setting<std::string>(eval_fmt_opt, eval_format, "format", "csv") == "json") {
        json j = spec_json(spec);
        j["w"] = grid;
        j["value"] = values;
        print_json(j);
      } else {
        std::cout << "w,value\n";
        for (std::size_t i = 0; i < grid.size(); ++i) std::cout << num(grid[i]) << "," << num(values[i]) << "\n";
      }
    } else if (thin_cmd->parsed()) {
      const auto spec = thin_args.spec();
      const long n = setting<long>(thin_n_opt, thin_n, "n-max", 50);
      if (n < 0) throw ParameterError("n-max must be >= 0");
      const Pgf thinned = pgf_thin(Pgf::closed_form(spec), thin_a);
      json header = spec_json(spec);
      header["a"] = thin_a;
      if (auto closed = thinned_spec(spec, thin_a)) header["thinned"] = spec_json(*closed);
      print_table(pgf_coefficients(thinned, static_cast<int>(n)),
                  setting<std::string>(thin_fmt_opt, thin_format, "format", "csv"), header);
    } else if (solve_cmd->parsed()) {
      const BdModel model = bd_model_from_json(read_file(solve_model));
      const long n = setting<long>(solve_n_opt, solve_n, "n-max", 50);
      const auto sol = stationary_solve(model, n);
      json header = {{"floor", sol.floor},
                     {"tail_kind", sol.tail_kind},
                     {"normalizer", sol.normalizer},
                     {"max_balance_residual", sol.max_balance_residual}};
      print_table(sol.pmf, setting<std::string>(solve_fmt_opt, solve_format, "format", "csv"), header);
    } else if (sim_cmd->parsed()) {
      const BdModel model = bd_model_from_json(read_file(sim_model));
      SimulationOptions opts;
      opts.t_end = setting<double>(sim_t_opt, sim_t, "t-end", 1e5);
      opts.seed = setting<std::uint64_t>(sim_seed_opt, sim_seed, "seed", 1);
      opts.replicas = setting<int>(sim_rep_opt, sim_replicas, "replicas", 1);
      if (sim_init_opt->count() > 0) opts.initial = sim_initial;
      const auto stats = simulate_ctmc(model, opts);
      const auto probs = stats.probabilities();
      std::optional<double> tv;
      try {
        const auto sol = stationary_solve(model, static_cast<long>(probs.size()) - 1);
        tv = total_variation(probs, sol.pmf.probs) + 0.5 * sol.pmf.tail_mass;
      } catch (const Error&) {
        // no analytic table; report the histogram alone
      }
      if (setting<std::string>(sim_fmt_opt, sim_format, "format", "csv") == "json") {
        json j = {{"t_end", opts.t_end},     {"seed", opts.seed},
                  {"replicas", opts.replicas}, {"events", stats.events},
                  {"observed_time", stats.observed_time}, {"occupancy", stats.occupancy},
                  {"probability", probs}};
        j["tv_distance"] = tv ? json(*tv) : json(nullptr);
        print_json(j);
      } else {
        std::cout << "state,occupancy,probability\n";
        for (std::size_t s = 0; s < probs.size(); ++s) {
          std::cout << s << "," << num(stats.occupancy[s]) << "," << num(probs[s]) << "\n";
        }
        if (tv) std::cerr << "tv_distance " << num(*tv) << "\n";
      }
    } else if (mom_cmd->parsed()) {
      const auto spec = mom_args.spec();
      const auto m = factorial_moments(spec, setting<int>(mom_j_opt, mom_j, "j-max", 4));
      json j = spec_json(spec);
      j["raw"] = m.raw;
      j["scaled"] = m.scaled;
      j["error"] = m.error;
      j["method"] = m.method;
      print_json(j);
    } else if (fin_cmd->parsed()) {
      const auto spec = fin_args.spec();
      json j = json::parse(to_json(abs_moment_classify(Pgf::closed_form(spec), fin_r)));
      print_json(j);
    } else if (sd_cmd->parsed()) {
      const auto spec = sd_args.spec();
      const long jm = setting<long>(sd_j_opt, sd_j, "j-max", 100);
      const auto method = setting<std::string>(sd_method_opt, sd_method, "method", "bondesson");
      json j;
      if (method == "bondesson") {
        j = json::parse(to_json(bondesson_check(pmf_table(spec, jm + 3), jm)));
      } else if (method == "residual") {
        const double a = setting<double>(sd_a_opt, sd_a, "a", 0.5);
        j = json::parse(to_json(residual_pgf(Pgf::closed_form(spec), a, jm)));
        j["a"] = a;
      } else {
        throw ParameterError("method must be bondesson or residual");
      }
      j.update(spec_json(spec));
      print_json(j);
    } else if (prog_cmd->parsed()) {
      const long n = setting<long>(prog_n_opt, prog_n, "n-max", 50);
      const auto diag = progeny_sign_diagnosis(prog_b, prog_gamma, n);
      json j = json::parse(to_json(diag, n + 1));
      j["b"] = prog_b;
      j["gamma"] = prog_gamma;
      if (prog_gamma != 0.0) {
        const auto [mean, second] = offspring_moments(prog_b, prog_gamma);
        j["mean_offspring"] = std::isfinite(mean) ? json(mean) : json(nullptr);
        j["second_factorial"] = std::isfinite(second) ? json(second) : json("inf");
      }
      if (prog_sim) {
        const auto model = extended_branching_model(prog_b, prog_gamma);
        const long replicas = setting<long>(prog_rep_opt, prog_replicas, "replicas", 100000);
        const auto sim = simulate_progeny(model, replicas, setting<std::uint64_t>(prog_seed_opt, prog_seed, "seed", 1));
        const auto want = pmf_table(DistributionSpec::extended_sibuya(prog_b, prog_gamma),
                                    static_cast<long>(sim.progeny.size()) - 1);
        j["criticality"] = to_string(model.criticality);
        j["simulation"] = {{"replicas", sim.replicas},
                           {"budget_hits", sim.budget_hits},
                           {"tv_distance", total_variation(sim.progeny.probs, want.probs)},
                           {"probs", std::vector<double>(sim.progeny.probs.begin(),
                                                         sim.progeny.probs.begin() +
                                                             std::min<std::size_t>(sim.progeny.size(), 51))}};
      }
      print_json(j);
    } else if (samp_cmd->parsed()) {
      const auto spec = samp_args.spec();
      const long n = setting<long>(samp_n_opt, samp_n, "count", 10);
      const auto seed = setting<std::uint64_t>(samp_seed_opt, samp_seed, "seed", 1);
      const auto xs = samp_thin_opt->count() > 0 ? sample_thinned(spec, samp_thin, n, seed) : sample(spec, n, seed);
      if (setting<std::string>(samp_fmt_opt, samp_format, "format", "lines") == "csv") {
        std::map<std::int64_t, long> bins;
        for (auto x : xs) ++bins[x];
        std::cout << "state,count\n";
        for (const auto& [x, c] : bins) std::cout << x << "," << c << "\n";
      } else {
        for (auto x : xs) std::cout << x << "\n";
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

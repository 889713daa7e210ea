// Command-line front-end: table validation, closed-form pricing, oracle
// cross-checks and plot-data export.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "balducci/fractional_age.hpp"
#include "balducci/mortality.hpp"
#include "balducci/oracle.hpp"
#include "balducci/premiums.hpp"

using nlohmann::json;
using namespace balducci;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitTolerance = 2;
constexpr int kExitIo = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::pair<int, double>> read_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument(path + ": empty file");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "age,lx") {
    throw std::invalid_argument(path + ":1: expected header \"age,lx\"");
  }
  std::vector<std::pair<int, double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": missing comma");
    }
    try {
      std::size_t used = 0;
      const int age = std::stoi(line.substr(0, comma), &used);
      if (used != comma) throw std::invalid_argument("trailing junk");
      const double l = std::stod(line.substr(comma + 1), &used);
      if (used != line.size() - comma - 1) throw std::invalid_argument("trailing junk");
      rows.emplace_back(age, l);
    } catch (const std::exception&) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": bad row \"" + line + "\"");
    }
  }
  return rows;
}

// "weibull:alpha:beta[:omega]"
std::unique_ptr<MortalityModel> parse_law(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() < 3 || parts.size() > 4 || parts[0] != "weibull") {
    throw std::invalid_argument("--law expects weibull:alpha:beta[:omega]");
  }
  const double alpha = std::stod(parts[1]);
  const double beta = std::stod(parts[2]);
  const int omega = parts.size() == 4 ? std::stoi(parts[3]) : 0;
  return std::make_unique<WeibullLaw>(alpha, beta, omega);
}

struct CommonOptions {
  std::string table_path;
  std::string law;
  double interest = 0.0;
  int x = 0;
  std::string defer = "0";  // "L" or "L*N1"
  std::optional<int> term;
  bool to_omega = false;
  int m = 1;
  int j = 1;
  std::string kind = "level";
  std::string format = "json";
  int precision = 10;
};

void add_model_options(CLI::App* cmd, CommonOptions& opt) {
  auto* table = cmd->add_option("--table", opt.table_path, "CSV mortality table (age,lx)");
  auto* law = cmd->add_option("--law", opt.law, "parametric law, weibull:alpha:beta[:omega]");
  table->excludes(law);
}

void add_contract_options(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("-x,--age", opt.x, "issue age");
  cmd->add_option("--defer", opt.defer, "deferment: L whole years, or L*N1 adding N1 periods");
  auto* term = cmd->add_option("--term", opt.term, "term in whole years");
  cmd->add_flag("--to-omega", opt.to_omega, "run the contract to the terminal/truncation age")
      ->excludes(term);
  cmd->add_option("-m,--moment", opt.m, "moment order");
  cmd->add_option("-j,--periods", opt.j, "periods per year");
}

void add_output_options(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--format", opt.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--precision", opt.precision, "significant digits")
      ->check(CLI::Range(1, 17));
}

std::unique_ptr<MortalityModel> build_model(const CommonOptions& opt) {
  if (opt.table_path.empty() == opt.law.empty()) {
    throw std::invalid_argument("provide exactly one of --table / --law");
  }
  if (!opt.law.empty()) return parse_law(opt.law);
  auto table = load_table(read_table_csv(opt.table_path));
  return std::make_unique<MortalityTable>(std::move(table));
}

ContractSpec build_spec(const CommonOptions& opt) {
  ContractSpec spec;
  spec.x = opt.x;
  const auto star = opt.defer.find('*');
  spec.l = std::stoi(opt.defer.substr(0, star));
  if (star != std::string::npos) spec.n1 = std::stoi(opt.defer.substr(star + 1));
  if (opt.term) spec.n = *opt.term;
  spec.m = opt.m;
  spec.j = opt.j;
  return spec;
}

double round_to_precision(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

json spec_json(const CommonOptions& opt, const ContractSpec& spec) {
  json out{{"x", spec.x}, {"l", spec.l},      {"m", spec.m},
           {"j", spec.j}, {"n1", spec.n1},    {"interest", opt.interest},
           {"kind", opt.kind}};
  if (spec.n) {
    out["n"] = *spec.n;
  } else {
    out["n"] = "to-omega";
  }
  if (!opt.table_path.empty()) out["table"] = opt.table_path;
  if (!opt.law.empty()) out["law"] = opt.law;
  return out;
}

json result_json(const std::string& kind, int m, const MomentResult& r, int precision) {
  return json{{"kind", kind},
              {"m", m},
              {"value", round_to_precision(r.value, precision)},
              {"truncation_age", r.truncation_age},
              {"limit_branches_used", r.limit_branches_used}};
}

void emit(const json& doc, const CommonOptions& opt) {
  if (opt.format == "json") {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::cout << "kind,m,value,truncation_age,limit_branches_used\n";
  for (const auto& r : doc.at("results")) {
    std::cout << r.at("kind").get<std::string>() << "," << r.at("m").get<int>() << ","
              << r.at("value").get<double>() << "," << r.at("truncation_age").get<int>()
              << "," << r.at("limit_branches_used").get<int>() << "\n";
  }
}

MomentResult dispatch(const std::string& kind, const MortalityModel& model,
                      const InterestEnvironment& env, const ContractSpec& spec) {
  if (kind == "level") {
    return spec.n ? term_insurance_moment(model, env, spec)
                  : whole_life_moment(model, env, spec);
  }
  ContractSpec resolved = spec;
  if (!resolved.n) {
    // reuse the level-contract truncation rule
    ContractSpec probe = spec;
    probe.j = 1;
    probe.n1 = 0;
    probe.m = 1;
    resolved.n = whole_life_moment(model, InterestEnvironment(0.0), probe).truncation_age;
  }
  if (kind == "lifetime") return lifetime_moment(model, resolved);
  if (kind == "increasing-continuous") return increasing_continuous_moment(model, env, resolved);
  if (kind == "increasing-annual") return annually_increasing_moment(model, env, resolved);
  if (kind == "mthly") return mthly_insurance_moment(model, env, resolved);
  if (kind == "mthly-increasing") return mthly_increasing_moment(model, env, resolved);
  if (kind == "payment-time") return mthly_mean_payment_time(model, resolved);
  throw std::invalid_argument("unknown kind: " + kind);
}

int cmd_validate(const CommonOptions& opt) {
  const auto rows = read_table_csv(opt.table_path);
  const MortalityTable table = load_table(rows);  // throws on any violation
  std::cout << "valid: ages " << table.base_age() << ".."
            << table.base_age() + static_cast<int>(table.survivors().size()) - 1
            << ", omega " << table.omega()
            << (table.has_terminal_age() ? " (terminal)" : " (truncation)") << "\n";
  return 0;
}

int cmd_price(const CommonOptions& opt) {
  const auto model = build_model(opt);
  const ContractSpec spec = build_spec(opt);
  const InterestEnvironment env(opt.interest);
  const MomentResult r = dispatch(opt.kind, *model, env, spec);
  json doc{{"command", "price"}, {"spec", spec_json(opt, spec)}};
  doc["results"] = json::array({result_json(opt.kind, spec.m, r, opt.precision)});
  emit(doc, opt);
  return 0;
}

int cmd_moments(const CommonOptions& opt) {
  const auto model = build_model(opt);
  ContractSpec spec = build_spec(opt);
  json results = json::array();
  for (int m = 0; m <= opt.m; ++m) {
    ContractSpec s = spec;
    s.m = m;
    s.j = 1;
    if (m == 0) {
      results.push_back(result_json("lifetime", 0, lifetime_moment(*model, s), opt.precision));
      continue;
    }
    results.push_back(result_json("lifetime", m, lifetime_moment(*model, s), opt.precision));
    if (spec.j > 1) {
      ContractSpec pt = spec;
      pt.m = m;
      results.push_back(
          result_json("payment-time", m, mthly_mean_payment_time(*model, pt), opt.precision));
    }
  }
  json doc{{"command", "moments"}, {"spec", spec_json(opt, spec)}, {"results", results}};
  emit(doc, opt);
  return 0;
}

int cmd_compare(const CommonOptions& opt, std::int64_t samples, std::uint64_t seed) {
  const auto model = build_model(opt);
  const ContractSpec spec = build_spec(opt);
  const InterestEnvironment env(opt.interest);
  const MomentResult closed = dispatch(opt.kind, *model, env, spec);

  ContractSpec resolved = spec;
  resolved.n = closed.truncation_age;
  const ContractPayoff cp = contract_payoff(opt.kind, env.nu, resolved);
  const double quad = quadrature_expectation(*model, FractionalAssumption::kBalducci,
                                             cp.payoff, cp.window, cp.config);
  const MonteCarloResult mc = monte_carlo_expectation(
      *model, FractionalAssumption::kBalducci, cp.payoff, cp.window, samples, seed);

  const double abs_delta = std::abs(closed.value - quad);
  const double rel_delta = abs_delta / std::max(std::abs(quad), 1e-300);
  json doc{{"command", "compare"}, {"spec", spec_json(opt, spec)}};
  doc["results"] = json::array({result_json(opt.kind, spec.m, closed, opt.precision)});
  doc["oracle"] = json{{"quadrature", round_to_precision(quad, opt.precision)},
                       {"monte_carlo", round_to_precision(mc.estimate, opt.precision)},
                       {"monte_carlo_std_error", round_to_precision(mc.std_error, 6)},
                       {"samples", samples},
                       {"seed", seed},
                       {"abs_delta", round_to_precision(abs_delta, 6)},
                       {"rel_delta", round_to_precision(rel_delta, 6)}};
  emit(doc, opt);
  return rel_delta > 1e-6 ? kExitTolerance : 0;
}

int cmd_plot_data(const CommonOptions& opt, const std::string& mode, double step) {
  const auto model = build_model(opt);
  const ContractSpec spec = build_spec(opt);
  ContractSpec resolved = spec;
  if (!resolved.n) {
    ContractSpec probe = spec;
    probe.j = 1;
    probe.n1 = 0;
    probe.m = 1;
    resolved.n = whole_life_moment(*model, InterestEnvironment(0.0), probe).truncation_age;
  }
  const bool density = mode == "density";
  std::cout << (density ? "t,f_udd,f_balducci\n" : "t,s_udd,s_balducci\n");
  const double t_end = resolved.l + *resolved.n;
  char buf[128];
  for (double t = resolved.l; t <= t_end + 1e-12; t += step) {
    int k = static_cast<int>(std::floor(t + 1e-12));
    double frac = t - k;
    if (k > resolved.l + *resolved.n - 1 && !density) {
      k = resolved.l + *resolved.n - 1;
      frac = 1.0;
    } else if (k >= resolved.l + *resolved.n) {
      break;
    }
    const FractionalAge fa{spec.x, k, frac};
    const double udd = density
                           ? conditional_density(*model, FractionalAssumption::kUdd, fa)
                           : survival_fraction(*model, FractionalAssumption::kUdd, fa);
    const double bal = density
                           ? conditional_density(*model, FractionalAssumption::kBalducci, fa)
                           : survival_fraction(*model, FractionalAssumption::kBalducci, fa);
    std::snprintf(buf, sizeof buf, "%.*g,%.*g,%.*g\n", opt.precision, t, opt.precision,
                  udd, opt.precision, bal);
    std::cout << buf;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"net single premiums under the Balducci fractional-age assumption"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::int64_t samples = 1000000;
  std::uint64_t seed = 20240901;
  std::string plot_mode = "survival";
  double plot_step = 0.01;

  auto* validate = app.add_subcommand("validate", "validate a CSV mortality table");
  validate->add_option("--table", opt.table_path, "CSV mortality table (age,lx)")->required();

  auto* price = app.add_subcommand("price", "closed-form contract pricing");
  add_model_options(price, opt);
  add_contract_options(price, opt);
  add_output_options(price, opt);
  price->add_option("-i,--interest", opt.interest, "annual effective rate");
  price->add_option("--kind", opt.kind, "payoff kind")
      ->check(CLI::IsMember({"level", "lifetime", "increasing-continuous",
                             "increasing-annual", "mthly", "mthly-increasing",
                             "payment-time"}));

  auto* moments = app.add_subcommand("moments", "undiscounted lifetime moments 0..m");
  add_model_options(moments, opt);
  add_contract_options(moments, opt);
  add_output_options(moments, opt);

  auto* compare = app.add_subcommand("compare", "closed form vs quadrature and Monte Carlo");
  add_model_options(compare, opt);
  add_contract_options(compare, opt);
  add_output_options(compare, opt);
  compare->add_option("-i,--interest", opt.interest, "annual effective rate");
  compare->add_option("--kind", opt.kind, "payoff kind")
      ->check(CLI::IsMember({"level", "lifetime", "increasing-continuous",
                             "increasing-annual", "mthly", "mthly-increasing",
                             "payment-time"}));
  compare->add_option("--samples", samples, "Monte Carlo sample count");
  compare->add_option("--seed", seed, "Monte Carlo seed (BALDUCCI_SEED overrides)");

  auto* plot = app.add_subcommand("plot-data", "CSV export of interpolated curves");
  add_model_options(plot, opt);
  add_contract_options(plot, opt);
  add_output_options(plot, opt);
  plot->add_option("--mode", plot_mode, "survival or density")
      ->check(CLI::IsMember({"survival", "density"}));
  plot->add_option("--step", plot_step, "grid step in years")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  if (const char* env_seed = std::getenv("BALDUCCI_SEED")) {
    seed = std::strtoull(env_seed, nullptr, 10);
  }

  try {
    if (validate->parsed()) return cmd_validate(opt);
    if (price->parsed()) return cmd_price(opt);
    if (moments->parsed()) return cmd_moments(opt);
    if (compare->parsed()) return cmd_compare(opt, samples, seed);
    if (plot->parsed()) return cmd_plot_data(opt, plot_mode, plot_step);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}

#include "thetacf/cli.hpp"

#include "thetacf/chain.hpp"
#include "thetacf/errors.hpp"
#include "thetacf/experiments.hpp"
#include "thetacf/expansion.hpp"
#include "thetacf/measures.hpp"
#include "thetacf/natural_extension.hpp"
#include "thetacf/transfer_operator.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <regex>
#include <sstream>
#include <unistd.h>

namespace thetacf {

namespace {

const std::vector<std::string> kCommands = {"expand", "gk", "chain", "operator", "levy", "extension", "khinchin", "digits"};

std::vector<std::size_t> parse_checkpoints(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw ValidationError("bad checkpoint list '" + text + "'");
    }
  }
  return out;
}

Real parse_positive(const std::string& text, const char* what) {
  Real v;
  try {
    v = parse_real(text);
  } catch (const std::exception&) {
    throw ValidationError(std::string("cannot parse ") + what + " '" + text + "'");
  }
  if (!(v > 0)) throw ValidationError(std::string(what) + " must be positive");
  return v;
}

Real parse_state(const std::string& text, const ThetaContext& ctx) {
  // Exact input is rounded once; plain decimals are read directly.
  Real v;
  try {
    const SurdNumber exact = parse_surd(text, ctx.m());
    if (exact.sign() < 0 || exact > ctx.theta()) throw DomainError("value " + text + " outside [0, theta]");
    v = exact.to_real();
  } catch (const ValidationError&) {
    try {
      v = parse_real(text);
    } catch (const std::exception&) {
      throw ValidationError("cannot parse state '" + text + "'");
    }
    if (!(v >= 0) || v > ctx.theta_r()) throw DomainError("value " + text + " outside [0, theta]");
  }
  return v > ctx.theta_r() ? ctx.theta_r() : v;
}

std::string decimal(const SurdNumber& x) { return x.to_float(160).str(30); }

void add_context(ExperimentReport& r, const ThetaContext& ctx) {
  r.add_meta("theta", format_real(ctx.theta_r(), kReportDigits));
  r.add_meta("log_norm", format_real(ctx.log_norm_r(), kReportDigits));
}

ExperimentReport expand_report(const RunConfig& cfg, const ThetaContext& ctx) {
  const SurdNumber x = parse_surd(cfg.x, cfg.m);
  const DigitSequence digits = expand(x, cfg.n, ctx);
  const auto conv = convergents(digits, ctx);
  ExperimentReport r;
  r.columns = {"n", "digit", "remainder", "p", "q", "convergent", "abs_error", "bound_lower", "bound_upper"};
  SurdNumber remainder = x;
  for (std::size_t k = 0; k < conv.size(); ++k) {
    const SurdNumber value = conv[k].p / conv[k].q;
    SurdNumber err = x - value;
    if (err.sign() < 0) err = -err;
    std::vector<Cell> row = {static_cast<std::int64_t>(k),
                             k == 0 ? std::string("") : to_string(digits.digits[k - 1]),
                             remainder.str(), conv[k].p.str(), conv[k].q.str(), decimal(value), decimal(err)};
    if (k + 1 < conv.size()) {
      const auto [lo, hi] = approx_error_bounds(conv[k], conv[k + 1], ctx);
      row.push_back(decimal(lo));
      row.push_back(decimal(hi));
    } else {
      row.push_back(std::string(""));
      row.push_back(std::string(""));
    }
    r.rows.push_back(std::move(row));
    if (k < digits.size()) remainder = gauss_map(remainder, ctx);
  }
  std::string list;
  for (std::size_t k = 0; k < digits.size(); ++k) list += (k ? " " : "") + to_string(digits.digits[k]);
  r.add_summary("digits", "[" + list + "]");
  r.add_summary("terminated", digits.terminated ? "true" : "false");
  r.add_summary("ends_with_m", digits.ends_with_minimal_digit(cfg.m) ? "true" : "false");
  r.add_summary("final_remainder", remainder.str());
  return r;
}

ExperimentReport chain_report(const RunConfig& cfg, const ThetaContext& ctx) {
  const Real a = parse_state(cfg.start, ctx);
  ChainOptions options;
  if (!cfg.force_digit.empty()) {
    if (cfg.force_digit == "m") {
      options.force_digit = cfg.m;
    } else {
      try {
        options.force_digit = std::stoll(cfg.force_digit);
      } catch (const std::exception&) {
        throw ValidationError("bad --force-digit '" + cfg.force_digit + "'");
      }
    }
  }
  const ChainTrajectory t = simulate_chain(a, cfg.steps, cfg.seed, ctx, options);
  ExperimentReport r;
  r.columns = {"k", "digit", "state"};
  for (std::size_t k = 0; k < t.states.size(); ++k) {
    r.rows.push_back({static_cast<std::int64_t>(k), k == 0 ? Cell(std::string("")) : Cell(t.digits[k - 1]),
                      t.states[k]});
  }
  r.add_summary("fixed_point", rscc_fixed_point_real(ctx));
  r.add_summary("final_state", t.states.back());
  return r;
}

ExperimentReport operator_report(const RunConfig& cfg, const ThetaContext& ctx, std::ostream& diagnostics) {
  OperatorConfig oc;
  oc.grid_size = cfg.grid;
  oc.tail_eps = parse_positive(cfg.tail_eps, "tail_eps");
  oc.norm = parse_norm(cfg.norm);
  oc.validate();
  const TransferOperator op(ctx, oc);
  const MeasureKind mu = parse_measure(cfg.measure, ctx);
  const GridFunction h = GridFunction::sample(op.nodes(), [&](const Real& x) { return measure_density(mu, x, ctx); });
  const DecayEstimate d = estimate_decay_rate(op, h, cfg.n_max, oc.norm, ctx);
  ExperimentReport r;
  r.columns = {"n", "residual"};
  for (std::size_t k = 0; k < d.residuals.size(); ++k) {
    r.rows.push_back({static_cast<std::int64_t>(k + 1), d.residuals[k]});
  }
  r.add_summary("q_hat", d.q_hat);
  r.add_summary("fit_first", std::to_string(d.fit_first));
  r.add_summary("fitted_points", std::to_string(d.fitted_points));
  r.add_summary("discrete_limit", d.limit);
  r.add_summary("continuum_limit", d.continuum_limit);
  if (cfg.fixed_point_check) {
    const GridFunction rho = invariant_density(ctx, op.nodes());
    const Real density_residual = (op.apply_density(rho) - rho).sup_norm();
    const GridFunction one = GridFunction::constant(op.nodes(), 1);
    const Real constant_residual = (op.apply(one) - one).sup_norm();
    r.add_summary("fixed_point_residual", density_residual);
    r.add_summary("constant_residual", constant_residual);
    diagnostics << "fixed_point_residual=" << format_real(density_residual, 6) << '\n'
                << "constant_residual=" << format_real(constant_residual, 6) << '\n';
  }
  return r;
}

ExperimentReport extension_report(const RunConfig& cfg, const ThetaContext& ctx) {
  const PreservationSweep sweep = preservation_sweep(cfg.depth, cfg.max_offset, ctx);
  ExperimentReport r;
  r.columns = {"quantity", "value"};
  r.rows.push_back({std::string("rectangles"), static_cast<std::int64_t>(sweep.rectangles)});
  r.rows.push_back({std::string("max_residual"), sweep.max_residual});
  auto word = [](const DigitSequence& d) {
    std::string s;
    for (std::size_t k = 0; k < d.size(); ++k) s += (k ? " " : "") + to_string(d.digits[k]);
    return "[" + s + "]";
  };
  r.add_summary("max_residual", sweep.max_residual);
  r.add_summary("worst_horizontal", word(sweep.worst_h));
  r.add_summary("worst_vertical", word(sweep.worst_v));
  return r;
}

void write_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) throw ValidationError("cannot open output file '" + path + "'");
    file << content;
    file.flush();
    if (!file) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw NumericError("failed writing output file '" + path + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ValidationError("cannot move output into place at '" + path + "'");
  }
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T v{};
  in >> v;
  if (!in || !in.eof()) throw ValidationError("metadata key " + key + " has bad value '" + text + "'");
  return v;
}

}  // namespace

SurdNumber parse_surd(const std::string& text, std::int64_t m) {
  static const std::regex grammar(
      R"(^\s*(?:([+-]?\d+(?:/\d+)?)\s*)?(?:([+-]?)\s*(\d+(?:/\d+)?)\s*\*\s*sqrt\(\s*(\d+)\s*\))?\s*$)");
  std::smatch match;
  if (!std::regex_match(text, match, grammar) || (!match[1].matched && !match[3].matched)) {
    throw ValidationError("cannot parse '" + text + "' (expected A/B or A/B+C/D*sqrt(M))");
  }
  if (match[1].matched && match[3].matched && match[2].length() == 0) {
    throw ValidationError("missing sign before the surd part in '" + text + "'");
  }
  const Rational a = match[1].matched ? parse_rational(match[1].str()) : Rational(0);
  if (!match[3].matched) return SurdNumber(a);
  Rational b = parse_rational(match[3].str());
  if (match[2].str() == "-") b = -b;
  std::int64_t radicand = 0;
  try {
    radicand = std::stoll(match[4].str());
  } catch (const std::exception&) {
    throw ValidationError("radicand out of range in '" + text + "'");
  }
  if (radicand != m) {
    throw ValidationError("radicand " + std::to_string(radicand) + " differs from m = " + std::to_string(m));
  }
  return SurdNumber(a, b, radicand);
}

RunConfig RunConfig::defaults_for(const std::string& command) {
  RunConfig c;
  c.command = command;
  if (command == "expand") {
    c.n = 10;
  } else if (command == "gk") {
    c.n_max = 12;
    c.samples = 100000;
    c.grid = 64;
  } else if (command == "operator") {
    c.grid = 2048;
    c.n_max = 25;
  } else if (command == "levy") {
    c.samples = 200;
    c.n = 10000;
  } else if (command == "khinchin") {
    c.samples = 100;
  } else if (command == "digits") {
    c.samples = 100000;
    c.n = 10;
  } else if (command != "chain" && command != "extension") {
    throw ValidationError("unknown command '" + command + "'");
  }
  return c;
}

void RunConfig::validate() const {
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
    throw ValidationError("unknown command '" + command + "'");
  }
  if (m < 1) throw ValidationError("m must be a positive integer, got " + std::to_string(m));
  if (format != "csv" && format != "json") throw ValidationError("format must be csv or json");
  if (threads < 1) throw ValidationError("threads must be at least 1");
  parse_positive(tail_eps, "tail_eps");
  parse_norm(norm);
}

KeyValues RunConfig::to_metadata() const {
  return {
      {"config.command", command},
      {"config.m", std::to_string(m)},
      {"config.x", x},
      {"config.n", std::to_string(n)},
      {"config.n_max", std::to_string(n_max)},
      {"config.samples", std::to_string(samples)},
      {"config.grid", std::to_string(grid)},
      {"config.seed", std::to_string(seed)},
      {"config.threads", std::to_string(threads)},
      {"config.out", out},
      {"config.format", format},
      {"config.tail_eps", tail_eps},
      {"config.measure", measure},
      {"config.norm", norm},
      {"config.start", start},
      {"config.steps", std::to_string(steps)},
      {"config.force_digit", force_digit},
      {"config.fixed_point_check", fixed_point_check ? "true" : "false"},
      {"config.depth", std::to_string(depth)},
      {"config.max_offset", std::to_string(max_offset)},
      {"config.checkpoints", checkpoints},
  };
}

RunConfig RunConfig::from_metadata(const KeyValues& meta) {
  std::map<std::string, std::string> kv;
  for (const auto& [k, v] : meta) {
    if (k.rfind("config.", 0) == 0) kv[k.substr(7)] = v;
  }
  auto get = [&kv](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw ValidationError("metadata lacks config." + key);
    return it->second;
  };
  RunConfig c;
  c.command = get("command");
  c.m = parse_number<std::int64_t>("m", get("m"));
  c.x = get("x");
  c.n = parse_number<std::size_t>("n", get("n"));
  c.n_max = parse_number<std::size_t>("n_max", get("n_max"));
  c.samples = parse_number<std::size_t>("samples", get("samples"));
  c.grid = parse_number<std::size_t>("grid", get("grid"));
  c.seed = parse_number<std::uint64_t>("seed", get("seed"));
  c.threads = parse_number<unsigned>("threads", get("threads"));
  c.out = get("out");
  c.format = get("format");
  c.tail_eps = get("tail_eps");
  c.measure = get("measure");
  c.norm = get("norm");
  c.start = get("start");
  c.steps = parse_number<std::size_t>("steps", get("steps"));
  c.force_digit = get("force_digit");
  c.fixed_point_check = get("fixed_point_check") == "true";
  c.depth = parse_number<std::size_t>("depth", get("depth"));
  c.max_offset = parse_number<std::int64_t>("max_offset", get("max_offset"));
  c.checkpoints = get("checkpoints");
  return c;
}

ExperimentReport run_command(const RunConfig& cfg, std::ostream& diagnostics) {
  cfg.validate();
  const ThetaContext ctx(cfg.m);
  ExperimentReport r;
  if (cfg.command == "expand") {
    r = expand_report(cfg, ctx);
  } else if (cfg.command == "gk") {
    const MeasureKind mu = parse_measure(cfg.measure, ctx);
    r = gk_report(gk_error_curve(mu, cfg.n_max, cfg.samples, default_x_grid(cfg.grid, ctx), cfg.seed, ctx, cfg.threads));
  } else if (cfg.command == "chain") {
    r = chain_report(cfg, ctx);
  } else if (cfg.command == "operator") {
    r = operator_report(cfg, ctx, diagnostics);
  } else if (cfg.command == "levy") {
    r = levy_report(levy_beta(cfg.samples, cfg.n, cfg.seed, ctx, cfg.threads));
  } else if (cfg.command == "extension") {
    r = extension_report(cfg, ctx);
  } else if (cfg.command == "khinchin") {
    r = khinchin_report(khinchin_mean(cfg.samples, parse_checkpoints(cfg.checkpoints), cfg.seed, ctx, cfg.threads));
  } else {
    r = digit_report(digit_frequency(cfg.samples, cfg.n, cfg.seed, ctx, 20, cfg.threads));
  }
  KeyValues meta = cfg.to_metadata();
  ExperimentReport framed;
  framed.metadata = std::move(meta);
  add_context(framed, ctx);
  framed.summary = std::move(r.summary);
  framed.columns = std::move(r.columns);
  framed.rows = std::move(r.rows);
  return framed;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"theta-expansions: digits, invariant measures, transfer operator and Gauss-Kuzmin experiments",
               "thetacf"};
  app.require_subcommand(1);
  std::map<std::string, RunConfig> configs;
  for (const auto& name : kCommands) configs.emplace(name, RunConfig::defaults_for(name));

  auto common = [](CLI::App* sub, RunConfig& c) {
    sub->add_option("--m", c.m, "positive integer m, theta = 1/sqrt(m)")->capture_default_str();
    sub->add_option("--seed", c.seed, "master 64-bit seed")->capture_default_str();
    sub->add_option("--threads", c.threads, "worker thread cap")->capture_default_str();
    sub->add_option("--out", c.out, "output file (default: stdout)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  };

  struct Spec {
    const char* name;
    const char* help;
  };
  const std::vector<Spec> specs = {
      {"expand", "digits, convergents and error bounds of an exact x"},
      {"gk", "Monte-Carlo Gauss-Kuzmin error curve"},
      {"chain", "simulate the digit Markov chain"},
      {"operator", "transfer operator decay and fixed-point checks"},
      {"levy", "Levy growth rate of convergent denominators"},
      {"extension", "natural-extension measure preservation sweep"},
      {"khinchin", "digit-average divergence"},
      {"digits", "first and n-th digit frequencies"},
  };
  for (const auto& s : specs) {
    RunConfig& c = configs.at(s.name);
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    common(sub, c);
    const std::string name = s.name;
    if (name == "expand") {
      sub->add_option("--x", c.x, "A/B or A/B+C/D*sqrt(M) in [0, theta]")->required();
      sub->add_option("--n", c.n, "maximum number of digits")->capture_default_str();
    } else if (name == "gk") {
      sub->add_option("--n-max", c.n_max, "largest iterate")->capture_default_str();
      sub->add_option("--samples", c.samples, "Monte-Carlo samples")->capture_default_str();
      sub->add_option("--grid", c.grid, "number of x points")->capture_default_str();
      sub->add_option("--measure", c.measure, "lebesgue, gamma or gamma-a:<a>")->capture_default_str();
    } else if (name == "chain") {
      sub->add_option("--start", c.start, "initial state a")->capture_default_str();
      sub->add_option("--steps", c.steps, "number of transitions")->capture_default_str();
      sub->add_option("--force-digit", c.force_digit, "force every digit ('m' or an integer)");
    } else if (name == "operator") {
      sub->add_option("--grid", c.grid, "grid size N")->capture_default_str();
      sub->add_option("--tail-eps", c.tail_eps, "branch tail accuracy")->capture_default_str();
      sub->add_option("--n-max", c.n_max, "decay iterations")->capture_default_str();
      sub->add_option("--measure", c.measure, "starting measure")->capture_default_str();
      sub->add_option("--norm", c.norm, "sup or lipschitz")->capture_default_str();
      sub->add_flag("--fixed-point-check", c.fixed_point_check, "report fixed-point residuals");
    } else if (name == "levy") {
      sub->add_option("--samples", c.samples, "trajectories")->capture_default_str();
      sub->add_option("--n", c.n, "trajectory length")->capture_default_str();
    } else if (name == "extension") {
      sub->add_option("--depth", c.depth, "largest digit-word length")->capture_default_str();
      sub->add_option("--max-offset", c.max_offset, "digits range over m .. m+offset")->capture_default_str();
    } else if (name == "khinchin") {
      sub->add_option("--samples", c.samples, "trajectories")->capture_default_str();
      sub->add_option("--checkpoints", c.checkpoints, "comma-separated n values")->capture_default_str();
    } else if (name == "digits") {
      sub->add_option("--samples", c.samples, "samples")->capture_default_str();
      sub->add_option("--n", c.n, "digit index for the second column")->capture_default_str();
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string chosen = app.get_subcommands().front()->get_name();
  const RunConfig& cfg = configs.at(chosen);
  try {
    const ExperimentReport report = run_command(cfg, err);
    const std::string body = cfg.format == "json" ? report.to_json() : report.to_csv();
    if (cfg.out.empty()) {
      out << body;
    } else {
      write_atomically(cfg.out, body);
    }
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("thetacf");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace thetacf

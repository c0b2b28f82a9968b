// bblab: search campaigns, certificate round-trips, expression evaluation,
// and ratio reports from one binary. Results go to stdout and are
// byte-identical for a fixed query regardless of worker count; the resolved
// configuration and timings go to stderr. Exit codes: 0 exact/valid,
// 2 completed but inexact (lower bound / budget ran out), 1 data errors,
// 64 usage errors.
#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <bblab/deciders.hpp>
#include <bblab/engine.hpp>
#include <bblab/enumerate.hpp>
#include <bblab/machine.hpp>
#include <bblab/maxmin.hpp>
#include <bblab/oracle.hpp>
#include <bblab/rewrite.hpp>
#include <bblab/store.hpp>

namespace {

constexpr int kOk = 0;
constexpr int kData = 1;
constexpr int kInexact = 2;
constexpr int kUsage = 64;

struct Config {
  std::string s;
  int m = 0;
  int n = 1;
  std::uint64_t budget = 256;
  int oracle_depth = 2;
  std::string store;
  int workers = 1;
  std::string format = "table";
  std::uint64_t limit = 200000;
  std::vector<std::string> seeds;
  std::string machine;
  std::string cert_path;
  std::string out_path;
  std::string expr;
  std::string expr_path;
  std::string args;
  std::uint64_t horizon = 64;
  std::uint64_t verify = 64;
  std::string t = "1";
  int lo = 1;
  int hi = 1;
};

// One flag scales the whole pipeline, keeping the stage ratios of the
// defaults; --budget 256 is exactly the default pipeline.
bblab::PipelineBudgets budgets_from(std::uint64_t budget) {
  bblab::PipelineBudgets b;
  b.sim = budget;
  b.cycler = budget * 4;
  b.translated = budget * 8;
  return b;
}

char field_sep(const Config& c) { return c.format == "table" ? ' ' : '\t'; }

void echo_config(const std::string& sub, const Config& c) {
  std::ostringstream line;
  line << "config: " << sub << " s='" << c.s << "' m=" << c.m << " n=" << c.n
       << " budget=" << c.budget << " oracle-depth=" << c.oracle_depth
       << " store=" << (c.store.empty() ? "-" : c.store)
       << " workers=" << c.workers << " format=" << c.format;
  std::cerr << line.str() << "\n";
}

std::string ratio_text(double v) {
  std::ostringstream out;
  out << std::setprecision(6) << v;
  return out.str();
}

void print_result(const Config& c, const bblab::BBResult& r,
                  const std::string& key) {
  const char sep = field_sep(c);
  std::ostream& out = std::cout;
  out << "query" << sep << key << "\n";
  out << "value" << sep << r.value;
  if (!r.exact) out << sep << "LOWER-BOUND";
  out << "\n";
  out << "exact" << sep << (r.exact ? "yes" : "no") << "\n";
  out << "champion" << sep << (r.champion.empty() ? "-" : r.champion) << "\n";
  out << "champion-at" << sep << r.champion_at << "\n";
  out << "classified" << sep << r.classified << "\n";
  out << "halted" << sep << r.halted << "\n";
  out << "unknown" << sep << r.unknown << "\n";
  out << "unresolved" << sep << r.unresolved << "\n";
  if (!r.oracle_provenance.empty())
    out << "oracle" << sep << r.oracle_provenance << "\n";
}

int run_search(const Config& c) {
  bblab::ResultsStore* store = nullptr;
  std::optional<bblab::ResultsStore> owned;
  if (!c.store.empty()) {
    owned.emplace(c.store);
    store = &*owned;
  }
  bblab::BBResult r =
      bblab::compute_bb(c.s, c.n, budgets_from(c.budget), store, c.workers);
  print_result(c, r, bblab::query_key(c.s, 0, c.n));
  return r.exact ? kOk : kInexact;
}

int run_search_higher(const Config& c) {
  bblab::BBResult r =
      bblab::compute_bb_higher(c.s, c.m, c.n, c.oracle_depth,
                               budgets_from(c.budget), c.seeds, c.limit);
  print_result(c, r, bblab::query_key(c.s, c.m, c.n));
  return r.exact ? kOk : kInexact;
}

int run_count(const Config& c) {
  if (c.m == 0)
    std::cout << bblab::space_size(c.n) << "\n";
  else
    std::cout << bblab::oracle_space_size(c.m, c.n) << "\n";
  return kOk;
}

int run_make_cert(const Config& c) {
  std::string text;
  if (c.m == 0) {
    bblab::MachineTable m = bblab::parse_machine(c.machine);
    text = bblab::serialize_certificate(
        bblab::trace_certificate(m, c.s, c.budget));
  } else {
    bblab::OracleMachineTable m = bblab::parse_oracle_machine(c.machine, c.m);
    text = bblab::serialize_certificate(bblab::trace_certificate(
        m, c.s, c.budget, bblab::bb_oracle_set(c.oracle_depth)));
  }
  if (c.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(c.out_path, std::ios::binary | std::ios::trunc);
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("cannot write " + c.out_path);
  }
  return kOk;
}

int run_verify_cert(const Config& c) {
  std::ifstream in(c.cert_path, std::ios::binary);
  if (!in.is_open())
    throw std::runtime_error("cannot read " + c.cert_path);
  std::ostringstream buffer;
  buffer << in.rdbuf();

  bblab::DerivationCertificate d;
  try {
    d = bblab::parse_certificate(buffer.str());
  } catch (const std::invalid_argument& e) {
    std::cout << "INVALID (" << e.what() << ")\n";
    return kData;
  }
  bblab::CertCheck check;
  const bool dual = !d.configs.empty() && d.configs.front().oracle.has_value();
  if (dual) {
    int order = bblab::infer_oracle_order(d.machine);
    bblab::OracleMachineTable m = bblab::parse_oracle_machine(d.machine, order);
    check = bblab::check_deriv(bblab::compile_rules(m), d, d.input, d.output,
                               bblab::bb_oracle_set(c.oracle_depth));
  } else {
    bblab::MachineTable m = bblab::parse_machine(d.machine);
    check = bblab::check_deriv(bblab::compile_rules(m), d, d.input, d.output);
  }
  if (check) {
    std::cout << "VALID\n";
    return kOk;
  }
  std::cout << "INVALID ("
            << (check.kind == bblab::CertCheck::Kind::Malformed ? "malformed: "
                                                                : "broken: ")
            << check.detail << ")\n";
  return kData;
}

std::vector<std::uint64_t> parse_args_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  if (text.empty()) return out;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw std::runtime_error("arguments must be comma-separated naturals");
    out.push_back(std::stoull(part));
  }
  return out;
}

int run_eval(const Config& c) {
  std::string text = c.expr;
  if (!c.expr_path.empty()) {
    std::ifstream in(c.expr_path, std::ios::binary);
    if (!in.is_open())
      throw std::runtime_error("cannot read " + c.expr_path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
  }
  bblab::Expr expr = bblab::parse_expr(text);
  bblab::EvalBudget budget{c.horizon, c.verify, c.budget};
  bblab::EvalOutcome out =
      bblab::eval(expr, parse_args_list(c.args), budget);
  const char sep = field_sep(c);
  switch (out.kind) {
    case bblab::EvalOutcome::Kind::Value:
      std::cout << "value" << sep << out.value << "\n";
      return kOk;
    case bblab::EvalOutcome::Kind::Undefined:
      std::cout << "undefined\n";
      return kOk;
    case bblab::EvalOutcome::Kind::BudgetExceeded:
      std::cout << "budget-exceeded" << sep << out.horizon << "\n";
      return kInexact;
  }
  return kData;
}

int run_report(const Config& c) {
  bblab::RatioReport rep =
      bblab::ratio_report(c.s, c.t, c.lo, c.hi, budgets_from(c.budget));
  const char sep = field_sep(c);
  for (const bblab::RatioRow& row : rep.growth)
    std::cout << "growth" << sep << "n=" << row.n << sep << "f=" << row.f
              << sep << "a=" << row.a << sep << "b=" << row.b << sep
              << "f(a)=" << ratio_text(row.f_of_a) << sep
              << "ratio=" << ratio_text(row.ratio) << sep << row.label << "\n";
  for (const bblab::RatioRow& row : rep.cross)
    std::cout << "cross" << sep << "n=" << row.n << sep << "a=" << row.a << sep
              << "b=" << row.b << sep << "ratio=" << ratio_text(row.ratio)
              << sep << row.label << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"busy beaver laboratory"};
  app.require_subcommand(1);
  Config c;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--budget", c.budget, "simulation step budget")
        ->envname("BBLAB_BUDGET")
        ->capture_default_str();
    sub->add_option("--format", c.format, "table or line-records")
        ->envname("BBLAB_FORMAT")
        ->check(CLI::IsMember({"table", "line-records"}))
        ->capture_default_str();
  };

  CLI::App* search = app.add_subcommand("search", "order-0 campaign");
  search->add_option("--s", c.s, "input bit-string")->envname("BBLAB_S");
  search->add_option("--n", c.n, "state count")
      ->envname("BBLAB_N")
      ->required();
  search->add_option("--store", c.store, "results store path")
      ->envname("BBLAB_STORE");
  search->add_option("--workers", c.workers, "classification threads")
      ->envname("BBLAB_WORKERS")
      ->capture_default_str();
  add_common(search);

  CLI::App* higher = app.add_subcommand("search-higher", "order-1 sweep");
  higher->add_option("--s", c.s, "input bit-string")->envname("BBLAB_S");
  higher->add_option("--m", c.m, "oracle machine order")
      ->envname("BBLAB_M")
      ->required();
  higher->add_option("--n", c.n, "state count")
      ->envname("BBLAB_N")
      ->required();
  higher->add_option("--oracle-depth", c.oracle_depth,
                     "largest state count answered by the oracle table")
      ->envname("BBLAB_ORACLE_DEPTH")
      ->capture_default_str();
  higher->add_option("--limit", c.limit, "sweep at most this many machines")
      ->capture_default_str();
  higher->add_option("--seed", c.seeds,
                     "extra machine text to try beyond the sweep");
  add_common(higher);

  CLI::App* count = app.add_subcommand("count", "machine space size");
  count->add_option("--n", c.n, "state count")
      ->envname("BBLAB_N")
      ->required();
  count->add_option("--m", c.m, "oracle machine order (0 = plain)")
      ->envname("BBLAB_M")
      ->capture_default_str();

  CLI::App* make_cert = app.add_subcommand(
      "make-cert", "trace a halting run into a derivation certificate");
  make_cert->add_option("--machine", c.machine, "machine text")->required();
  make_cert->add_option("--s", c.s, "input bit-string")->envname("BBLAB_S");
  make_cert->add_option("--m", c.m, "oracle machine order (0 = plain)")
      ->capture_default_str();
  make_cert->add_option("--oracle-depth", c.oracle_depth,
                        "oracle table depth for inquiring machines")
      ->capture_default_str();
  make_cert->add_option("--out", c.out_path, "write the certificate here");
  add_common(make_cert);

  CLI::App* verify_cert =
      app.add_subcommand("verify-cert", "re-check a derivation certificate");
  verify_cert->add_option("cert", c.cert_path, "certificate file")
      ->required();
  verify_cert->add_option("--oracle-depth", c.oracle_depth,
                          "oracle table depth for inquiring machines")
      ->capture_default_str();
  add_common(verify_cert);

  CLI::App* eval_cmd =
      app.add_subcommand("eval", "evaluate a search expression");
  eval_cmd->add_option("--expr", c.expr, "expression text");
  eval_cmd->add_option("--file", c.expr_path, "expression file");
  eval_cmd->add_option("--args", c.args, "comma-separated naturals");
  eval_cmd->add_option("--horizon", c.horizon, "search horizon")
      ->envname("BBLAB_HORIZON")
      ->capture_default_str();
  eval_cmd->add_option("--verify", c.verify, "verified window past a witness")
      ->capture_default_str();
  add_common(eval_cmd);

  CLI::App* report = app.add_subcommand("report", "growth and cross ratios");
  report->add_option("--s", c.s, "input bit-string")->envname("BBLAB_S");
  report->add_option("--t", c.t, "comparison input bit-string")
      ->capture_default_str();
  report->add_option("--lo", c.lo, "first state count")->required();
  report->add_option("--hi", c.hi, "last state count")->required();
  add_common(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  echo_config(sub->get_name(), c);
  const auto started = std::chrono::steady_clock::now();
  int code = kData;
  try {
    if (sub == search) {
      code = run_search(c);
    } else if (sub == higher) {
      code = run_search_higher(c);
    } else if (sub == count) {
      code = run_count(c);
    } else if (sub == make_cert) {
      code = run_make_cert(c);
    } else if (sub == verify_cert) {
      code = run_verify_cert(c);
    } else if (sub == eval_cmd) {
      if (c.expr.empty() == c.expr_path.empty()) {
        std::cerr << "error: pass exactly one of --expr and --file\n";
        return kUsage;
      }
      code = run_eval(c);
    } else if (sub == report) {
      code = run_report(c);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = kData;
  }
  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - started;
  std::cerr << "elapsed: " << std::setprecision(3) << std::fixed
            << elapsed.count() << "s\n";
  return code;
}

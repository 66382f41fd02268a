#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "relmaj/divergence.hpp"
#include "relmaj/json_io.hpp"
#include "relmaj/majorize.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using relmaj::Json;

// exit codes: 0 ok/true, 1 false/inconclusive/fail, 2 input or hypothesis
// error, 3 internal cross-method disagreement
enum ExitCode { kOk = 0, kNo = 1, kError = 2, kInternal = 3 };

std::string read_input(const std::string& file) {
  if (file == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(file);
  if (!in) throw relmaj::Error(relmaj::ErrorKind::ParseError, "cannot open '" + file + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw relmaj::Error(relmaj::ErrorKind::ParseError, e.what());
  }
}

struct ReportEnvelope {
  Json body;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  ReportEnvelope(const std::string& command, unsigned seed) {
    body["tool"] = "relmaj";
    body["version"] = kVersion;
    body["command"] = command;
    body["seed"] = seed;
  }
  void finish(bool timing) {
    if (timing) {
      auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - start)
                    .count();
      body["timing_ms"] = ms;
    }
    std::cout << body.dump(2) << "\n";
  }
};

std::vector<relmaj::Order> parse_alphas(const std::vector<std::string>& items) {
  if (items.empty()) return relmaj::standard_alpha_grid();
  std::vector<relmaj::Order> out;
  for (const auto& s : items) {
    if (s == "inf" || s == "+inf")
      out.push_back(relmaj::Order::infinity());
    else if (s == "-inf")
      out.push_back(relmaj::Order::minus_infinity());
    else
      out.push_back(relmaj::Order(std::stod(s)));
  }
  return out;
}

Json order_to_json(const relmaj::Order& a) {
  if (a.is_pos_inf()) return Json("inf");
  if (a.is_neg_inf()) return Json("-inf");
  return Json(a.value());
}

int cmd_divergence(const std::string& file, const std::vector<std::string>& alpha_args,
                   unsigned seed, bool timing) {
  ReportEnvelope rep("divergence", seed);
  relmaj::ConversionInstance inst = relmaj::instance_from_json(parse_json(read_input(file)));
  auto alphas = parse_alphas(alpha_args);

  Json table;
  Json ja = Json::array(), dpq = Json::array(), dpq2 = Json::array();
  Json hp = Json::array(), hp2 = Json::array();
  for (const auto& a : alphas) {
    ja.push_back(order_to_json(a));
    dpq.push_back(relmaj::extended_real_to_json(
        relmaj::renyi_divergence(a, inst.source.p, inst.source.q)));
    dpq2.push_back(relmaj::extended_real_to_json(
        relmaj::renyi_divergence(a, inst.target.p, inst.target.q)));
    hp.push_back(relmaj::extended_real_to_json(relmaj::renyi_entropy(a, inst.source.p)));
    hp2.push_back(relmaj::extended_real_to_json(relmaj::renyi_entropy(a, inst.target.p)));
  }
  table["alpha"] = std::move(ja);
  table["D(p||q)"] = std::move(dpq);
  table["D(p'||q')"] = std::move(dpq2);
  table["H(p)"] = std::move(hp);
  table["H(p')"] = std::move(hp2);
  rep.body["table"] = std::move(table);
  rep.finish(timing);
  return kOk;
}

int cmd_check(const std::string& file, unsigned seed, bool timing) {
  ReportEnvelope rep("check", seed);
  relmaj::ConversionInstance inst = relmaj::instance_from_json(parse_json(read_input(file)));
  relmaj::ConditionReport cond;
  switch (inst.mode) {
    case relmaj::ConversionMode::Exact: cond = relmaj::check_exact_conditions(inst); break;
    case relmaj::ConversionMode::Approximate: cond = relmaj::check_approximate_conditions(inst); break;
    case relmaj::ConversionMode::Unital: cond = relmaj::check_unital_conditions(inst); break;
  }
  rep.body["mode"] = relmaj::conversion_mode_name(inst.mode);
  rep.body["conditions"] = relmaj::condition_report_to_json(cond);
  rep.finish(timing);
  return cond.verdict ? kOk : kNo;
}

int cmd_relmaj(const std::string& file, bool emit_witness, unsigned seed, bool timing) {
  ReportEnvelope rep("relmaj", seed);
  relmaj::ConversionInstance inst = relmaj::instance_from_json(parse_json(read_input(file)));
  relmaj::RelmajDecision lp = relmaj::relatively_majorizes(inst.source, inst.target);
  bool blackwell = relmaj::blackwell_criterion(inst.source, inst.target);

  rep.body["lp_feasible"] = lp.feasible;
  rep.body["blackwell"] = blackwell;
  rep.body["rationalized"] = lp.rationalized;
  if (lp.rationalized) {
    Json used;
    used["p"] = relmaj::distribution_to_json(lp.source_used.p);
    used["q"] = relmaj::distribution_to_json(lp.source_used.q);
    used["p_prime"] = relmaj::distribution_to_json(lp.target_used.p);
    used["q_prime"] = relmaj::distribution_to_json(lp.target_used.q);
    rep.body["rationalization"] = std::move(used);
  }
  if (lp.feasible != blackwell) {
    rep.body["error"] = "LP and Blackwell criteria disagree; this is a bug";
    rep.finish(timing);
    std::cerr << "internal error: cross-method disagreement\n";
    return kInternal;
  }
  if (emit_witness && lp.witness) rep.body["witness"] = relmaj::channel_to_json(*lp.witness);
  rep.finish(timing);
  return lp.feasible ? kOk : kNo;
}

int cmd_catalyze(const std::string& file, int max_dim, long long budget, int threads,
                 const std::string& out_path, unsigned seed, bool timing) {
  ReportEnvelope rep("catalyze", seed);
  relmaj::ConversionInstance inst = relmaj::instance_from_json(parse_json(read_input(file)));
  relmaj::SearchOptions opts;
  opts.max_catalyst_dim = max_dim;
  opts.budget = budget;
  opts.threads = threads;

  relmaj::SearchOutcome outcome = relmaj::search_catalyst(inst, opts);
  rep.body["found"] = outcome.found();
  rep.body["search_log"] = relmaj::search_log_to_json(outcome.log);
  if (outcome.found()) {
    const auto& cert = *outcome.certificate;
    relmaj::VerifyReport ver = relmaj::verify_certificate(inst, cert);
    rep.body["verify"] = relmaj::verify_report_to_json(ver);
    rep.body["certificate"] = relmaj::certificate_to_json(cert);
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      if (!out) {
        std::cerr << "cannot write '" << out_path << "'\n";
        return kError;
      }
      out << relmaj::certificate_to_json(cert).dump(2) << "\n";
    }
    rep.finish(timing);
    return ver.pass ? kOk : kInternal;
  }
  rep.finish(timing);
  return kNo;
}

int cmd_verify(const std::string& file, unsigned seed, bool timing) {
  ReportEnvelope rep("verify", seed);
  relmaj::ConversionCertificate cert = relmaj::certificate_from_json(parse_json(read_input(file)));
  relmaj::VerifyReport ver = relmaj::verify_certificate(cert.instance, cert);
  relmaj::ConverseAuditReport audit = relmaj::converse_audit(cert.instance, cert);
  rep.body["pass"] = ver.pass;
  rep.body["verify"] = relmaj::verify_report_to_json(ver);
  rep.body["converse_audit"] = relmaj::converse_report_to_json(audit);
  if (!ver.pass) {
    for (const auto& c : ver.checks)
      if (!c.passed) {
        rep.body["first_failing_check"] = c.name;
        break;
      }
  }
  rep.finish(timing);
  return ver.pass ? kOk : kNo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decision procedures and verifiable certificates for (catalytic) relative majorization"};
  app.require_subcommand(1);
  unsigned seed = 0;
  bool timing = false;
  app.add_option("--seed", seed, "seed for any randomized vector generation (reports record it)");
  app.add_flag("--timing", timing, "include wall-clock timing in reports (breaks byte-stability)");

  std::string file, out_path;
  std::vector<std::string> alpha_args;
  bool emit_witness = false;
  int max_dim = 8, threads = 1;
  long long budget = 2000;

  auto* divergence =
      app.add_subcommand("divergence", "Rényi divergence/entropy table for an instance file");
  divergence->add_option("file", file, "instance JSON ('-' for stdin)")->required();
  divergence->add_option("--alpha", alpha_args, "orders, e.g. --alpha -2 0 0.5 1 inf")
      ->expected(-1);

  auto* check = app.add_subcommand("check", "decide the mode's transformation conditions");
  check->add_option("file", file, "instance JSON ('-' for stdin)")->required();

  auto* rm = app.add_subcommand("relmaj", "decide relative majorization two independent ways");
  rm->add_option("file", file, "instance JSON ('-' for stdin)")->required();
  rm->add_flag("--emit-witness", emit_witness, "include the witness channel in the report");

  auto* cat = app.add_subcommand("catalyze", "search for a catalytic conversion certificate");
  cat->add_option("file", file, "instance JSON ('-' for stdin)")->required();
  cat->add_option("--max-dim", max_dim, "largest catalyst dimension to try")->check(CLI::PositiveNumber);
  cat->add_option("--budget", budget, "candidate-evaluation budget")->check(CLI::PositiveNumber);
  cat->add_option("--threads", threads, "parallel candidate evaluation")->check(CLI::PositiveNumber);
  cat->add_option("--out", out_path, "write the certificate JSON here");

  auto* verify = app.add_subcommand("verify", "re-verify a certificate file");
  verify->add_option("file", file, "certificate JSON ('-' for stdin)")->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kError;  // usage problems share the input-error code
  }

  try {
    if (divergence->parsed()) return cmd_divergence(file, alpha_args, seed, timing);
    if (check->parsed()) return cmd_check(file, seed, timing);
    if (rm->parsed()) return cmd_relmaj(file, emit_witness, seed, timing);
    if (cat->parsed()) return cmd_catalyze(file, max_dim, budget, threads, out_path, seed, timing);
    if (verify->parsed()) return cmd_verify(file, seed, timing);
  } catch (const relmaj::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

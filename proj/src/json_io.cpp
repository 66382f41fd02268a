#include "relmaj/json_io.hpp"

#include <cmath>
#include <limits>

namespace relmaj {

namespace {

[[noreturn]] void parse_fail(const std::string& path, const std::string& what) {
  throw_error(ErrorKind::ParseError, path + ": " + what);
}

const Json& field(const Json& j, const char* name, const std::string& path) {
  if (!j.is_object()) parse_fail(path, "expected an object");
  auto it = j.find(name);
  if (it == j.end()) parse_fail(path, std::string("missing field '") + name + "'");
  return *it;
}

}  // namespace

Json scalar_to_json(const Scalar& s) {
  if (s.is_exact()) return Json(s.rational().to_fraction_string());
  return Json(s.as_double());
}

Scalar scalar_from_json(const Json& j, bool rational_backend, const std::string& path) {
  if (j.is_string()) {
    try {
      return Scalar(Rational::parse(j.get<std::string>()));
    } catch (const Error& e) {
      parse_fail(path, e.what());
    }
  }
  if (j.is_number_integer()) {
    long v = j.get<long>();
    return rational_backend ? Scalar(Rational(v)) : Scalar(static_cast<double>(v));
  }
  if (j.is_number()) {
    double v = j.get<double>();
    // the rational backend keeps the exact binary value of the literal
    return rational_backend ? Scalar(Rational::from_double(v)) : Scalar(v);
  }
  parse_fail(path, "expected a number or a \"num/den\" string");
}

Json distribution_to_json(const Distribution& d) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < d.size(); ++i) arr.push_back(scalar_to_json(d[i]));
  return arr;
}

Distribution distribution_from_json(const Json& j, bool rational_backend, const std::string& path) {
  if (!j.is_array() || j.empty()) parse_fail(path, "expected a non-empty array");
  std::vector<Scalar> w;
  w.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    w.push_back(scalar_from_json(j[i], rational_backend, path + "[" + std::to_string(i) + "]"));
  try {
    return Distribution(std::move(w));
  } catch (const Error& e) {
    parse_fail(path, e.what());
  }
}

Json channel_to_json(const StochasticChannel& ch) {
  Json out;
  out["orientation"] = "output-major";
  out["out_size"] = ch.out_size();
  out["in_size"] = ch.in_size();
  Json rows = Json::array();
  for (std::size_t j = 0; j < ch.out_size(); ++j) {
    Json row = Json::array();
    for (std::size_t i = 0; i < ch.in_size(); ++i) row.push_back(scalar_to_json(ch.entry(j, i)));
    rows.push_back(std::move(row));
  }
  out["entries"] = std::move(rows);
  return out;
}

Json raw_matrix_to_json(const RawMatrix& m) {
  Json out;
  out["orientation"] = "output-major";
  out["out_size"] = m.rows;
  out["in_size"] = m.cols;
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows; ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols; ++c) row.push_back(scalar_to_json(m.at(r, c)));
    rows.push_back(std::move(row));
  }
  out["entries"] = std::move(rows);
  return out;
}

RawMatrix raw_matrix_from_json(const Json& j, const std::string& path) {
  RawMatrix m;
  const Json& entries = field(j, "entries", path);
  if (!entries.is_array() || entries.empty()) parse_fail(path + ".entries", "expected a non-empty array");
  m.rows = entries.size();
  m.cols = entries[0].is_array() ? entries[0].size() : 0;
  if (m.cols == 0) parse_fail(path + ".entries[0]", "expected a non-empty array");
  for (std::size_t r = 0; r < m.rows; ++r) {
    const Json& row = entries[r];
    std::string rp = path + ".entries[" + std::to_string(r) + "]";
    if (!row.is_array() || row.size() != m.cols) parse_fail(rp, "ragged matrix");
    for (std::size_t c = 0; c < m.cols; ++c)
      m.entries.push_back(scalar_from_json(row[c], true, rp + "[" + std::to_string(c) + "]"));
  }
  return m;
}

Json embedding_spec_to_json(const EmbeddingSpec& spec) {
  Json out;
  out["d"] = spec.d;
  out["N"] = spec.total;
  return out;
}

Json lp_problem_to_json(const LpProblem& lp) {
  Json out;
  out["num_vars"] = lp.num_vars();
  Json cons = Json::array();
  for (const auto& c : lp.constraints()) {
    Json jc;
    Json coeffs = Json::array();
    for (const auto& x : c.coeffs) coeffs.push_back(x.to_fraction_string());
    jc["coeffs"] = std::move(coeffs);
    jc["rel"] = c.rel == Relation::Eq ? "==" : c.rel == Relation::Le ? "<=" : ">=";
    jc["rhs"] = c.rhs.to_fraction_string();
    cons.push_back(std::move(jc));
  }
  out["constraints"] = std::move(cons);
  if (lp.objective()) {
    Json obj = Json::array();
    for (const auto& x : *lp.objective()) obj.push_back(x.to_fraction_string());
    out["minimize"] = std::move(obj);
  }
  return out;
}

Json instance_to_json(const ConversionInstance& inst) {
  Json out;
  bool rational = inst.source.is_exact() && inst.target.is_exact();
  out["p"] = distribution_to_json(inst.source.p);
  out["q"] = distribution_to_json(inst.source.q);
  out["p_prime"] = distribution_to_json(inst.target.p);
  out["q_prime"] = distribution_to_json(inst.target.q);
  out["gamma"] = inst.gamma;
  if (inst.epsilon) out["epsilon"] = *inst.epsilon;
  out["mode"] = conversion_mode_name(inst.mode);
  out["backend"] = rational ? "rational" : "float";
  return out;
}

ConversionInstance instance_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) parse_fail(path, "instance must be an object");
  std::string backend = j.value("backend", std::string("rational"));
  if (backend != "rational" && backend != "float")
    parse_fail(path + ".backend", "expected \"rational\" or \"float\"");
  bool rational = backend == "rational";

  std::string mode_name = j.value("mode", std::string("exact"));
  ConversionMode mode;
  try {
    mode = conversion_mode_from_name(mode_name);
  } catch (const Error& e) {
    parse_fail(path + ".mode", e.what());
  }

  Distribution p = distribution_from_json(field(j, "p", path), rational, path + ".p");
  Distribution pp = distribution_from_json(field(j, "p_prime", path), rational, path + ".p_prime");

  auto optional_dist = [&](const char* name, std::size_t k) {
    auto it = j.find(name);
    if (it == j.end()) {
      if (mode != ConversionMode::Unital)
        parse_fail(path, std::string("missing field '") + name + "'");
      return Distribution::uniform(k);
    }
    return distribution_from_json(*it, rational, path + "." + name);
  };
  Distribution q = optional_dist("q", p.size());
  Distribution qp = optional_dist("q_prime", pp.size());

  ConversionInstance inst{DistPair(p, q), DistPair(pp, qp), 0.1, std::nullopt, mode};
  if (auto it = j.find("gamma"); it != j.end()) {
    if (!it->is_number()) parse_fail(path + ".gamma", "expected a number");
    inst.gamma = it->get<double>();
  }
  if (auto it = j.find("epsilon"); it != j.end()) {
    if (!it->is_number()) parse_fail(path + ".epsilon", "expected a number");
    inst.epsilon = it->get<double>();
  }
  return inst;
}

Json extended_real_to_json(double x) {
  if (std::isinf(x)) return Json(x > 0 ? "inf" : "-inf");
  if (std::isnan(x)) return Json("nan");
  return Json(x);
}

double extended_real_from_json(const Json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    parse_fail(path, "expected a number, \"inf\" or \"-inf\"");
  }
  if (!j.is_number()) parse_fail(path, "expected a number");
  return j.get<double>();
}

Json search_log_to_json(const SearchLog& log) {
  Json out;
  out["candidates_tried"] = log.candidates_tried;
  out["lp_solves"] = log.lp_solves;
  out["fw_iterations"] = log.fw_iterations;
  out["highest_m"] = log.highest_m;
  out["budget_exhausted"] = log.budget_exhausted;
  out["notes"] = log.notes;
  return out;
}

SearchLog search_log_from_json(const Json& j) {
  SearchLog log;
  if (!j.is_object()) return log;
  log.candidates_tried = j.value("candidates_tried", 0LL);
  log.lp_solves = j.value("lp_solves", 0LL);
  log.fw_iterations = j.value("fw_iterations", 0LL);
  log.highest_m = j.value("highest_m", 0);
  log.budget_exhausted = j.value("budget_exhausted", false);
  log.notes = j.value("notes", std::string());
  return log;
}

Json certificate_to_json(const ConversionCertificate& cert) {
  Json out;
  out["format"] = "relmaj-certificate/1";
  out["instance"] = instance_to_json(cert.instance);
  Json r = Json::array(), eta = Json::array(), peps = Json::array();
  for (const auto& s : cert.catalyst_r) r.push_back(scalar_to_json(s));
  for (const auto& s : cert.eta) eta.push_back(scalar_to_json(s));
  for (const auto& s : cert.p_prime_eps) peps.push_back(scalar_to_json(s));
  out["catalyst_r"] = std::move(r);
  out["eta"] = std::move(eta);
  out["joint_t_prime"] = raw_matrix_to_json(cert.joint_t_prime);
  out["channel"] = raw_matrix_to_json(cert.channel);
  out["achieved_gamma"] = extended_real_to_json(cert.achieved_gamma);
  out["achieved_epsilon"] = extended_real_to_json(cert.achieved_epsilon);
  out["p_prime_eps"] = std::move(peps);
  out["search_log"] = search_log_to_json(cert.search_log);
  return out;
}

ConversionCertificate certificate_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) parse_fail(path, "certificate must be an object");
  std::string format = j.value("format", std::string());
  if (format != "relmaj-certificate/1")
    parse_fail(path + ".format", "unsupported certificate format '" + format + "'");
  ConversionInstance inst = instance_from_json(field(j, "instance", path), path + ".instance");

  auto scalars = [&](const char* name) {
    const Json& arr = field(j, name, path);
    if (!arr.is_array()) parse_fail(path + "." + name, "expected an array");
    std::vector<Scalar> out;
    out.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i)
      out.push_back(scalar_from_json(arr[i], true, path + "." + name + "[" + std::to_string(i) + "]"));
    return out;
  };

  ConversionCertificate cert{inst,
                             scalars("catalyst_r"),
                             scalars("eta"),
                             raw_matrix_from_json(field(j, "joint_t_prime", path), path + ".joint_t_prime"),
                             raw_matrix_from_json(field(j, "channel", path), path + ".channel"),
                             extended_real_from_json(field(j, "achieved_gamma", path), path + ".achieved_gamma"),
                             extended_real_from_json(field(j, "achieved_epsilon", path), path + ".achieved_epsilon"),
                             scalars("p_prime_eps"),
                             SearchLog{}};
  if (auto it = j.find("search_log"); it != j.end()) cert.search_log = search_log_from_json(*it);
  return cert;
}

Json condition_report_to_json(const ConditionReport& rep) {
  Json out;
  out["verdict"] = rep.verdict;
  out["D(p||q)"] = extended_real_to_json(rep.d_source);
  out["D(p'||q')"] = extended_real_to_json(rep.d_target);
  out["D0(p||q)"] = extended_real_to_json(rep.d0_source);
  out["D0(p'||q')"] = extended_real_to_json(rep.d0_target);
  out["H(p)"] = extended_real_to_json(rep.h_source);
  out["H(p')"] = extended_real_to_json(rep.h_target);
  out["spectra_differ"] = rep.spectra_differ;
  out["note"] = rep.note;
  return out;
}

Json verify_report_to_json(const VerifyReport& rep) {
  Json out;
  out["pass"] = rep.pass;
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    Json jc;
    jc["name"] = c.name;
    jc["passed"] = c.passed;
    if (!c.detail.empty()) jc["detail"] = c.detail;
    checks.push_back(std::move(jc));
  }
  out["checks"] = std::move(checks);
  return out;
}

Json converse_report_to_json(const ConverseAuditReport& rep) {
  Json out;
  out["pass"] = rep.pass;
  Json links = Json::array();
  for (const auto& l : rep.links) {
    Json jl;
    jl["name"] = l.name;
    jl["alpha"] = extended_real_to_json(l.alpha);
    jl["value"] = extended_real_to_json(l.value);
    jl["ok"] = l.ok;
    links.push_back(std::move(jl));
  }
  out["links"] = std::move(links);
  return out;
}

}  // namespace relmaj

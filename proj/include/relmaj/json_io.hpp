#ifndef RELMAJ_JSON_IO_HPP
#define RELMAJ_JSON_IO_HPP

#include <string>

#include "json.hpp"
#include "relmaj/catalysis.hpp"
#include "relmaj/lp.hpp"

namespace relmaj {

/// Insertion-ordered JSON so emitted documents are byte-stable.
using Json = nlohmann::ordered_json;

// Exact rationals serialize as "num/den" strings, floats as JSON numbers.
Json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const Json& j, bool rational_backend, const std::string& path);

Json distribution_to_json(const Distribution& d);
Distribution distribution_from_json(const Json& j, bool rational_backend, const std::string& path);

/// Row-major nested arrays plus an "orientation":"output-major" marker.
Json channel_to_json(const StochasticChannel& ch);
Json raw_matrix_to_json(const RawMatrix& m);
RawMatrix raw_matrix_from_json(const Json& j, const std::string& path);

Json embedding_spec_to_json(const EmbeddingSpec& spec);

Json lp_problem_to_json(const LpProblem& lp);

Json instance_to_json(const ConversionInstance& inst);
ConversionInstance instance_from_json(const Json& j, const std::string& path = "$");

Json certificate_to_json(const ConversionCertificate& cert);
ConversionCertificate certificate_from_json(const Json& j, const std::string& path = "$");

// ±∞ encode as the strings "inf"/"-inf"; finite values as numbers.
Json extended_real_to_json(double x);
double extended_real_from_json(const Json& j, const std::string& path);

Json search_log_to_json(const SearchLog& log);
SearchLog search_log_from_json(const Json& j);
Json condition_report_to_json(const ConditionReport& rep);
Json verify_report_to_json(const VerifyReport& rep);
Json converse_report_to_json(const ConverseAuditReport& rep);

}  // namespace relmaj

#endif

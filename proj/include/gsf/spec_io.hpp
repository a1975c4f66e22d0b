#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "gsf/cmtest.hpp"
#include "gsf/function.hpp"
#include "gsf/operators.hpp"
#include "gsf/represent.hpp"

namespace gsf::io {

using Json = nlohmann::ordered_json;

// Parsed function/measure spec. A function spec embeds a measure spec:
// {"lambda", "c", "zero_atom", "side": "laplace|stieltjes", "atoms", "density",
//  "closed_form": {"terms": [...]}, "grid": {"min", "max", "points", "tolerance"}}.
struct Spec {
  std::optional<double> lam;
  double c = 0.0;
  double zero_atom = 0.0;
  std::string side = "laplace";
  Measure measure;
  std::vector<ClosedFormTerm> closed_form;
  ScanGrid grid = ScanGrid::standard();
  bool grid_given = false;
  Json normalized;

  // Throws SpecError("lambda", ...) when no order is known.
  GSFunction function() const;
  double lambda() const;
};

// Throws SpecError with a field path on schema violations; lambda_override
// replaces the lambda given in the file.
Spec parse_spec(const nlohmann::json& doc, std::optional<double> lambda_override = std::nullopt);
Spec parse_spec_text(const std::string& text, std::optional<double> lambda_override = std::nullopt);
Spec load_spec(const std::string& path, std::optional<double> lambda_override = std::nullopt);

Measure parse_measure(const nlohmann::json& doc, const std::string& where = "");

// Doubles rounded to 12 significant digits; non-finite values as strings.
Json number(double v);

Json to_json(const CMReport& r);
Json to_json(const ClassReport& r);
Json to_json(const PositivityReport& r);
Json to_json(const SignLimitReport& r);
Json to_json(const OperatorTable& t);
Json to_json(const DecayProbe& p);
Json to_json(const ChainSignReport& r);
Json to_json(const NChainReport& r);
Json to_json(const RhoReport& r);

}  // namespace gsf::io

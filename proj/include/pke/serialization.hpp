#pragma once

#include <optional>
#include <string>

#include "pke/cases.hpp"

namespace pke {

/// Case + parameter selection document:
/// { "case": "a32", "lambda": 1.0, "m0": .., "alpha0": .., "zeta0": ..,
///   "z0": .., "F0": .., "G0": .., "seed": [u, du] | "auto", "span": [a, b] }
struct CaseDocument {
  AlgebraTag tag = AlgebraTag::A32;
  ModelParams params;
  bool seed_auto = true;
  Eigen::Vector2d seed{0, 0};  // reduced variables when seed_auto is false
  double span_lo = 0, span_hi = 1;
  bool has_span = false;
};

struct SchemaError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

CaseDocument parse_case_document(const std::string& json_text);
std::string case_document_json(const CaseDocument& doc);

}  // namespace pke

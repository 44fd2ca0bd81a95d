#include "pke/serialization.hpp"

#include <json.hpp>

namespace pke {

using nlohmann::json;

CaseDocument parse_case_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("case document: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("case document: expected an object");
  if (!j.contains("case") || !j["case"].is_string())
    throw SchemaError("case document: missing string field 'case'");

  CaseDocument doc;
  try {
    doc.tag = algebra_from_string(j["case"].get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }

  auto num = [&](const char* key, double& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) throw SchemaError(std::string("case document: '") + key +
                                               "' must be a number");
    out = j[key].get<double>();
  };
  num("lambda", doc.params.lambda);
  num("m0", doc.params.m0);
  num("alpha0", doc.params.alpha0);
  num("zeta0", doc.params.zeta0);
  num("z0", doc.params.z0);
  num("F0", doc.params.F0);
  num("G0", doc.params.G0);

  if (j.contains("seed")) {
    const auto& s = j["seed"];
    if (s.is_string() && s.get<std::string>() == "auto") {
      doc.seed_auto = true;
    } else if (s.is_array() && s.size() == 2 && s[0].is_number() && s[1].is_number()) {
      doc.seed_auto = false;
      doc.seed << s[0].get<double>(), s[1].get<double>();
    } else {
      throw SchemaError("case document: 'seed' must be \"auto\" or [u, du]");
    }
  }
  if (j.contains("span")) {
    const auto& s = j["span"];
    if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number())
      throw SchemaError("case document: 'span' must be [a, b]");
    doc.span_lo = s[0].get<double>();
    doc.span_hi = s[1].get<double>();
    if (doc.span_lo == doc.span_hi) throw SchemaError("case document: degenerate span");
    doc.has_span = true;
  }

  try {
    validate_params(doc.tag, doc.params);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("case document: ") + e.what());
  }
  return doc;
}

std::string case_document_json(const CaseDocument& doc) {
  json j;
  j["case"] = to_string(doc.tag);
  j["lambda"] = doc.params.lambda;
  switch (doc.tag) {
    case AlgebraTag::A35: j["m0"] = doc.params.m0; break;
    case AlgebraTag::A37: j["alpha0"] = doc.params.alpha0; break;
    case AlgebraTag::A35Half:
      j["zeta0"] = doc.params.zeta0;
      j["z0"] = doc.params.z0;
      break;
    case AlgebraTag::A33:
      j["F0"] = doc.params.F0;
      j["G0"] = doc.params.G0;
      break;
    default: break;
  }
  if (doc.seed_auto)
    j["seed"] = "auto";
  else
    j["seed"] = {doc.seed[0], doc.seed[1]};
  if (doc.has_span) j["span"] = {doc.span_lo, doc.span_hi};
  return j.dump();
}

}  // namespace pke

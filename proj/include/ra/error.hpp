#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ra {

// Error codes cover every failure the library raises on purpose. Each code
// maps to one contract violation so callers can branch without string
// matching.
enum class errc {
  syntax_error,
  unknown_symbol,
  type_error,
  arity_mismatch,
  unknown_sort,
  unknown_relation,
  type_mismatch,
  duplicate_element,
  unvalued_constant,
  unbound_variable,
  sort_too_large,
  extra_free_variables,
  parameter_out_of_range,
  nondegenerate_parameters,
  unsupported_supremum,
  budget_explosion,
  validation_error,
  parse_error,
  io_error,
  internal_error,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::syntax_error: return "SyntaxError";
    case errc::unknown_symbol: return "UnknownSymbol";
    case errc::type_error: return "TypeError";
    case errc::arity_mismatch: return "ArityMismatch";
    case errc::unknown_sort: return "UnknownSort";
    case errc::unknown_relation: return "UnknownRelation";
    case errc::type_mismatch: return "TypeMismatch";
    case errc::duplicate_element: return "DuplicateElement";
    case errc::unvalued_constant: return "UnvaluedConstant";
    case errc::unbound_variable: return "UnboundVariable";
    case errc::sort_too_large: return "SortTooLarge";
    case errc::extra_free_variables: return "ExtraFreeVariables";
    case errc::parameter_out_of_range: return "ParameterOutOfRange";
    case errc::nondegenerate_parameters: return "NondegenerateParameters";
    case errc::unsupported_supremum: return "UnsupportedSupremum";
    case errc::budget_explosion: return "BudgetExplosion";
    case errc::validation_error: return "ValidationError";
    case errc::parse_error: return "ParseError";
    case errc::io_error: return "IoError";
    case errc::internal_error: return "InternalError";
  }
  return "UnknownError";
}

class error : public std::runtime_error {
 public:
  error(errc code, std::string message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

// One structure-validation defect. Validation never stops at the first
// problem; a ValidationError carries every issue found.
struct ValidationIssue {
  errc code = errc::validation_error;
  std::string subject;  // offending name or element id
  std::string where;    // location, e.g. "sort Person" or "relation Owns, tuple 3"
  std::string message;

  std::string render() const {
    std::string out = errc_name(code);
    out += ": ";
    out += message;
    if (!where.empty()) {
      out += " (at ";
      out += where;
      out += ")";
    }
    return out;
  }
};

inline error validation_failure(const std::vector<ValidationIssue>& issues) {
  std::string msg = std::to_string(issues.size()) + " issue(s):";
  for (const auto& issue : issues) {
    msg += "\n  - ";
    msg += issue.render();
  }
  return error(errc::validation_error, msg);
}

}  // namespace ra

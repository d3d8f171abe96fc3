#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ra/error.hpp"
#include "ra/rational.hpp"
#include "ra/vocabulary.hpp"

namespace ra {

// A carrier is how a sort's elements come into existence. Explicit and
// IntRange carriers list their elements directly; Functions and Subsets
// carriers are implicit: their elements are derived tuples over other
// carriers and are never stored.
struct SortCarrier {
  enum class Kind : std::uint8_t { Explicit, IntRange, Functions, Subsets };

  Kind kind = Kind::Explicit;
  std::vector<std::string> elements;     // Explicit
  std::int64_t lo = 0;                   // IntRange
  std::int64_t hi = -1;                  // IntRange
  std::string index_sort;                // Functions: f : index_sort -> value_sort
  std::string value_sort;                // Functions
  std::string base_sort;                 // Subsets: k-subsets of base_sort
  std::uint32_t subset_k = 0;            // Subsets

  bool operator==(const SortCarrier&) const = default;

  bool implicit() const {
    return kind == Kind::Functions || kind == Kind::Subsets;
  }
};

// One element of one sort. Explicit/IntRange elements are a carrier index.
// Functions elements hold one value index per index-sort element, in carrier
// order. Subsets elements hold k strictly increasing base indices.
struct Element {
  std::uint32_t index = 0;
  std::vector<std::uint32_t> parts;

  auto operator<=>(const Element&) const = default;

  bool composite() const { return !parts.empty(); }
};

struct SortSize {
  Integer count = 0;
  bool over_limit = false;  // count > the enumeration limit in effect
};

// Structure data as declared, before any checking. Relation tuples and
// constant values refer to elements by id string.
struct RawStructure {
  std::map<std::string, SortCarrier> carriers;
  std::map<std::string, std::vector<std::vector<std::string>>> relation_tuples;
  std::map<std::string, std::string> constant_values;
};

class Structure;
inline SortSize sort_size(const Structure& s, const std::string& sort,
                          std::uint64_t limit);

// A validated structure. Only validate() builds one, so every accessor can
// assume the invariants: carriers nonempty, extensions well-typed, builtins
// extension-free, constants valued.
class Structure {
 public:
  Vocabulary vocabulary;
  std::map<std::string, SortCarrier> carriers;
  std::map<std::string, std::set<std::vector<std::uint32_t>>> extensions;
  std::map<std::string, Element> constant_values;
  // Membership relations: member index -> base-sort index.
  std::map<std::string, std::vector<std::uint32_t>> member_to_base;

  bool operator==(const Structure&) const = default;

  const SortCarrier& carrier(const std::string& sort) const {
    auto it = carriers.find(sort);
    if (it == carriers.end())
      throw error(errc::unknown_sort, "no carrier for sort " + sort);
    return it->second;
  }

  // Explicit/IntRange carriers only.
  std::uint64_t explicit_size(const SortCarrier& c) const {
    if (c.kind == SortCarrier::Kind::Explicit) return c.elements.size();
    if (c.kind == SortCarrier::Kind::IntRange)
      return static_cast<std::uint64_t>(c.hi - c.lo + 1);
    throw error(errc::internal_error, "explicit_size on an implicit carrier");
  }

  std::string element_id(const std::string& sort, std::uint32_t index) const {
    const SortCarrier& c = carrier(sort);
    if (c.kind == SortCarrier::Kind::Explicit) return c.elements.at(index);
    if (c.kind == SortCarrier::Kind::IntRange)
      return std::to_string(c.lo + static_cast<std::int64_t>(index));
    throw error(errc::internal_error, "element_id on an implicit carrier");
  }

  std::uint32_t element_index(const std::string& sort,
                              const std::string& id) const {
    const SortCarrier& c = carrier(sort);
    if (c.kind == SortCarrier::Kind::Explicit) {
      for (std::uint32_t i = 0; i < c.elements.size(); ++i)
        if (c.elements[i] == id) return i;
      throw error(errc::type_mismatch,
                  "no element \"" + id + "\" in sort " + sort);
    }
    if (c.kind == SortCarrier::Kind::IntRange) {
      std::int64_t v = 0;
      bool ok = !id.empty();
      bool neg = ok && id[0] == '-';
      for (size_t i = neg ? 1 : 0; i < id.size() && ok; ++i) {
        if (id[i] < '0' || id[i] > '9') ok = false;
        v = v * 10 + (id[i] - '0');
      }
      if (neg) v = -v;
      if (!ok || v < c.lo || v > c.hi)
        throw error(errc::type_mismatch,
                    "no element \"" + id + "\" in sort " + sort);
      return static_cast<std::uint32_t>(v - c.lo);
    }
    throw error(errc::internal_error, "element_index on an implicit carrier");
  }

  // Canonical text form of an element. Functions render as the value ids
  // concatenated when every value id is a single character (else comma
  // separated); subsets render as the base ids comma separated in braces.
  std::string element_text(const std::string& sort, const Element& e) const {
    const SortCarrier& c = carrier(sort);
    switch (c.kind) {
      case SortCarrier::Kind::Explicit:
      case SortCarrier::Kind::IntRange:
        return element_id(sort, e.index);
      case SortCarrier::Kind::Functions: {
        const SortCarrier& vc = carrier(c.value_sort);
        bool compact = vc.kind == SortCarrier::Kind::Explicit;
        if (compact)
          for (const auto& id : vc.elements) compact = compact && id.size() == 1;
        std::string out;
        for (size_t i = 0; i < e.parts.size(); ++i) {
          if (!compact && i) out += ",";
          out += element_id(c.value_sort, e.parts[i]);
        }
        return out;
      }
      case SortCarrier::Kind::Subsets: {
        std::string out = "{";
        for (size_t i = 0; i < e.parts.size(); ++i) {
          if (i) out += ",";
          out += element_id(c.base_sort, e.parts[i]);
        }
        out += "}";
        return out;
      }
    }
    throw error(errc::internal_error, "bad carrier kind");
  }
};

inline Integer carrier_count(const Structure& s, const SortCarrier& c) {
  switch (c.kind) {
    case SortCarrier::Kind::Explicit:
      return Integer(c.elements.size());
    case SortCarrier::Kind::IntRange:
      return Integer(c.hi - c.lo + 1);
    case SortCarrier::Kind::Functions: {
      Integer values = carrier_count(s, s.carrier(c.value_sort));
      Integer indices = carrier_count(s, s.carrier(c.index_sort));
      Integer out = 1;
      for (Integer i = 0; i < indices; ++i) out *= values;
      return out;
    }
    case SortCarrier::Kind::Subsets: {
      Integer base = carrier_count(s, s.carrier(c.base_sort));
      return binomial(base.convert_to<std::uint64_t>(), c.subset_k);
    }
  }
  throw error(errc::internal_error, "bad carrier kind");
}

inline SortSize sort_size(const Structure& s, const std::string& sort,
                          std::uint64_t limit) {
  Integer n = carrier_count(s, s.carrier(sort));
  return {n, n > limit};
}

// Visits every element of the sort in canonical order: carrier order for
// explicit sorts, value-vector lexicographic order (first index position
// most significant) for functions, lexicographic combinations for subsets.
// The visitor returns false to stop; for_each_element returns false iff
// stopped early. Callers bound the size beforehand; this walks regardless.
template <class F>
bool for_each_element(const Structure& s, const std::string& sort, F&& visit) {
  const SortCarrier& c = s.carrier(sort);
  switch (c.kind) {
    case SortCarrier::Kind::Explicit:
    case SortCarrier::Kind::IntRange: {
      std::uint64_t n = s.explicit_size(c);
      for (std::uint64_t i = 0; i < n; ++i) {
        Element e;
        e.index = static_cast<std::uint32_t>(i);
        if (!visit(static_cast<const Element&>(e))) return false;
      }
      return true;
    }
    case SortCarrier::Kind::Functions: {
      std::uint64_t positions = s.explicit_size(s.carrier(c.index_sort));
      std::uint64_t values = s.explicit_size(s.carrier(c.value_sort));
      Element e;
      e.parts.assign(positions, 0);
      while (true) {
        if (!visit(static_cast<const Element&>(e))) return false;
        std::size_t i = positions;
        while (i > 0) {
          --i;
          if (++e.parts[i] < values) break;
          e.parts[i] = 0;
          if (i == 0) return true;
        }
        if (positions == 0) return true;
      }
    }
    case SortCarrier::Kind::Subsets: {
      std::uint64_t base = s.explicit_size(s.carrier(c.base_sort));
      std::uint32_t k = c.subset_k;
      Element e;
      e.parts.resize(k);
      for (std::uint32_t i = 0; i < k; ++i) e.parts[i] = i;
      while (true) {
        if (!visit(static_cast<const Element&>(e))) return false;
        // next combination
        std::int64_t i = static_cast<std::int64_t>(k) - 1;
        while (i >= 0 &&
               e.parts[static_cast<size_t>(i)] ==
                   base - k + static_cast<std::uint64_t>(i))
          --i;
        if (i < 0) return true;
        ++e.parts[static_cast<size_t>(i)];
        for (std::size_t j = static_cast<size_t>(i) + 1; j < k; ++j)
          e.parts[j] = e.parts[j - 1] + 1;
      }
    }
  }
  throw error(errc::internal_error, "bad carrier kind");
}

inline std::vector<Element> enumerate_elements(const Structure& s,
                                               const std::string& sort,
                                               std::uint64_t limit) {
  SortSize size = sort_size(s, sort, limit);
  if (size.over_limit)
    throw error(errc::sort_too_large,
                "sort " + sort + " has " + size.count.str() +
                    " elements, over enumeration limit " +
                    std::to_string(limit));
  std::vector<Element> out;
  out.reserve(size.count.convert_to<std::size_t>());
  for_each_element(s, sort, [&](const Element& e) {
    out.push_back(e);
    return true;
  });
  return out;
}

// Parses an element from its text form: a bare id for explicit sorts; for a
// functions sort, either the compact single-character encoding or comma
// separated value ids; for a subsets sort, comma separated base ids with
// optional braces, in any order, duplicates rejected.
inline Element parse_element(const Structure& s, const std::string& sort,
                             std::string_view text) {
  const SortCarrier& c = s.carrier(sort);
  auto split_commas = [](std::string_view t) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : t) {
      if (ch == ',') {
        out.push_back(cur);
        cur.clear();
      } else if (!std::isspace(static_cast<unsigned char>(ch))) {
        cur += ch;
      }
    }
    out.push_back(cur);
    return out;
  };
  switch (c.kind) {
    case SortCarrier::Kind::Explicit:
    case SortCarrier::Kind::IntRange: {
      Element e;
      e.index = s.element_index(sort, std::string(text));
      return e;
    }
    case SortCarrier::Kind::Functions: {
      std::uint64_t positions = s.explicit_size(s.carrier(c.index_sort));
      Element e;
      if (text.find(',') != std::string_view::npos) {
        auto ids = split_commas(text);
        if (ids.size() != positions)
          throw error(errc::type_mismatch,
                      "expected " + std::to_string(positions) +
                          " values for sort " + sort + ", got " +
                          std::to_string(ids.size()));
        for (const auto& id : ids)
          e.parts.push_back(s.element_index(c.value_sort, id));
      } else {
        if (text.size() != positions)
          throw error(errc::type_mismatch,
                      "expected " + std::to_string(positions) +
                          " single-character values for sort " + sort +
                          ", got " + std::to_string(text.size()));
        for (char ch : text)
          e.parts.push_back(s.element_index(c.value_sort, std::string(1, ch)));
      }
      return e;
    }
    case SortCarrier::Kind::Subsets: {
      std::string_view t = text;
      if (!t.empty() && t.front() == '{') t.remove_prefix(1);
      if (!t.empty() && t.back() == '}') t.remove_suffix(1);
      auto ids = split_commas(t);
      if (ids.size() != c.subset_k)
        throw error(errc::type_mismatch,
                    "expected " + std::to_string(c.subset_k) +
                        " members for sort " + sort + ", got " +
                        std::to_string(ids.size()));
      Element e;
      for (const auto& id : ids)
        e.parts.push_back(s.element_index(c.base_sort, id));
      std::sort(e.parts.begin(), e.parts.end());
      for (size_t i = 1; i < e.parts.size(); ++i)
        if (e.parts[i] == e.parts[i - 1])
          throw error(errc::duplicate_element,
                      "duplicate member in subset element of sort " + sort);
      return e;
    }
  }
  throw error(errc::internal_error, "bad carrier kind");
}

namespace detail {

inline bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

}  // namespace detail

struct ValidationResult {
  Structure structure;  // meaningful only when issues is empty
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
};

// Checks the vocabulary and raw data together and collects every defect
// rather than stopping at the first. On success the returned structure
// carries index-resolved extensions and constant values.
inline ValidationResult validate(const Vocabulary& vocab,
                                 const RawStructure& raw) {
  ValidationResult result;
  auto& issues = result.issues;
  auto issue = [&](errc code, std::string subject, std::string where,
                   std::string message) {
    issues.push_back({code, std::move(subject), std::move(where),
                      std::move(message)});
  };

  // vocabulary self-consistency: unique names, declared arg/constant sorts
  {
    std::set<std::string> seen;
    auto check_name = [&](const std::string& name, const char* role) {
      if (!detail::valid_identifier(name))
        issue(errc::syntax_error, name, std::string(role) + " " + name,
              "name is not a valid identifier");
      if (!seen.insert(name).second)
        issue(errc::duplicate_element, name, std::string(role) + " " + name,
              "name declared more than once in the vocabulary");
    };
    for (const auto& s : vocab.sorts) check_name(s, "sort");
    for (const auto& r : vocab.relations) check_name(r.name, "relation");
    for (const auto& c : vocab.constants) check_name(c.name, "constant");
  }
  for (const auto& r : vocab.relations)
    for (const auto& a : r.arg_sorts)
      if (!vocab.has_sort(a))
        issue(errc::unknown_sort, a, "relation " + r.name,
              "argument sort " + a + " is not declared");
  for (const auto& c : vocab.constants)
    if (!vocab.has_sort(c.sort))
      issue(errc::unknown_sort, c.sort, "constant " + c.name,
            "constant sort " + c.sort + " is not declared");

  // carriers: one per declared sort, none extra, each well-formed
  for (const auto& s : vocab.sorts)
    if (!raw.carriers.count(s))
      issue(errc::unknown_sort, s, "sort " + s, "sort has no carrier");
  for (const auto& [name, c] : raw.carriers) {
    if (!vocab.has_sort(name)) {
      issue(errc::unknown_sort, name, "carrier " + name,
            "carrier given for undeclared sort");
      continue;
    }
    switch (c.kind) {
      case SortCarrier::Kind::Explicit: {
        if (c.elements.empty())
          issue(errc::validation_error, name, "sort " + name,
                "explicit carrier is empty; sorts must be nonempty");
        std::set<std::string> seen;
        for (const auto& id : c.elements)
          if (!seen.insert(id).second)
            issue(errc::duplicate_element, id, "sort " + name,
                  "element \"" + id + "\" listed more than once");
        break;
      }
      case SortCarrier::Kind::IntRange:
        if (c.lo > c.hi)
          issue(errc::validation_error, name, "sort " + name,
                "integer range is empty; sorts must be nonempty");
        break;
      case SortCarrier::Kind::Functions: {
        for (const std::string* dep : {&c.index_sort, &c.value_sort}) {
          auto it = raw.carriers.find(*dep);
          if (!vocab.has_sort(*dep) || it == raw.carriers.end())
            issue(errc::unknown_sort, *dep, "sort " + name,
                  "function carrier refers to undeclared sort " + *dep);
          else if (it->second.implicit())
            issue(errc::type_mismatch, *dep, "sort " + name,
                  "function carrier over implicit sort " + *dep +
                      " is not supported");
        }
        break;
      }
      case SortCarrier::Kind::Subsets: {
        auto it = raw.carriers.find(c.base_sort);
        if (!vocab.has_sort(c.base_sort) || it == raw.carriers.end()) {
          issue(errc::unknown_sort, c.base_sort, "sort " + name,
                "subset carrier refers to undeclared sort " + c.base_sort);
        } else if (it->second.implicit()) {
          issue(errc::type_mismatch, c.base_sort, "sort " + name,
                "subset carrier over implicit sort " + c.base_sort +
                    " is not supported");
        } else if (c.subset_k < 1) {
          issue(errc::parameter_out_of_range, name, "sort " + name,
                "subset size k must be at least 1");
        } else {
          const SortCarrier& bc = it->second;
          std::uint64_t n = bc.kind == SortCarrier::Kind::Explicit
                                ? bc.elements.size()
                                : (bc.lo <= bc.hi ? static_cast<std::uint64_t>(
                                                        bc.hi - bc.lo + 1)
                                                  : 0);
          if (c.subset_k > n)
            issue(errc::parameter_out_of_range, name, "sort " + name,
                  "subset size k exceeds the base sort's size; the carrier "
                  "would be empty");
        }
        break;
      }
    }
  }

  if (!issues.empty()) return result;  // carrier layer must hold before data

  Structure s;
  s.vocabulary = vocab;
  s.carriers = raw.carriers;

  auto lookup = [&](const std::string& sort,
                    const std::string& id) -> std::optional<std::uint32_t> {
    try {
      return s.element_index(sort, id);
    } catch (const error&) {
      return std::nullopt;
    }
  };

  // relation extensions and builtin typing
  for (const auto& [name, tuples] : raw.relation_tuples)
    if (!vocab.find_relation(name))
      issue(errc::unknown_relation, name, "relation " + name,
            "tuples given for undeclared relation");
  for (const auto& r : vocab.relations) {
    bool args_ok = true;
    for (const auto& a : r.arg_sorts) args_ok = args_ok && vocab.has_sort(a);
    if (!args_ok) continue;
    switch (r.builtin) {
      case BuiltinKind::None: {
        for (const auto& a : r.arg_sorts)
          if (s.carrier(a).implicit())
            issue(errc::type_mismatch, a, "relation " + r.name,
                  "explicit extensions over implicit sort " + a +
                      " are not supported; use a builtin relation");
        auto it = raw.relation_tuples.find(r.name);
        std::set<std::vector<std::uint32_t>> ext;
        if (it != raw.relation_tuples.end()) {
          for (size_t t = 0; t < it->second.size(); ++t) {
            const auto& tuple = it->second[t];
            std::string where =
                "relation " + r.name + ", tuple " + std::to_string(t + 1);
            if (tuple.size() != r.arg_sorts.size()) {
              issue(errc::arity_mismatch, r.name, where,
                    "tuple has " + std::to_string(tuple.size()) +
                        " components, relation has arity " +
                        std::to_string(r.arg_sorts.size()));
              continue;
            }
            std::vector<std::uint32_t> idx;
            bool ok = true;
            for (size_t i = 0; i < tuple.size(); ++i) {
              if (s.carrier(r.arg_sorts[i]).implicit()) {
                ok = false;
                continue;
              }
              auto found = lookup(r.arg_sorts[i], tuple[i]);
              if (!found) {
                issue(errc::type_mismatch, tuple[i], where,
                      "\"" + tuple[i] + "\" is not an element of sort " +
                          r.arg_sorts[i]);
                ok = false;
              } else {
                idx.push_back(*found);
              }
            }
            if (ok) ext.insert(std::move(idx));
          }
        }
        s.extensions[r.name] = std::move(ext);
        break;
      }
      case BuiltinKind::Membership: {
        if (raw.relation_tuples.count(r.name) &&
            !raw.relation_tuples.at(r.name).empty())
          issue(errc::validation_error, r.name, "relation " + r.name,
                "builtin membership relations take no explicit extension");
        if (r.arg_sorts.size() != 2) {
          issue(errc::arity_mismatch, r.name, "relation " + r.name,
                "membership relations have arity 2");
          break;
        }
        const SortCarrier& subject = s.carrier(r.arg_sorts[1]);
        if (subject.kind != SortCarrier::Kind::Subsets) {
          issue(errc::type_mismatch, r.arg_sorts[1], "relation " + r.name,
                "second argument sort must have a subset carrier");
          break;
        }
        const SortCarrier& member = s.carrier(r.arg_sorts[0]);
        if (member.implicit()) {
          issue(errc::type_mismatch, r.arg_sorts[0], "relation " + r.name,
                "first argument sort must be explicit");
          break;
        }
        // member ids must name elements of the subset's base sort
        std::vector<std::uint32_t> mapping;
        std::uint64_t mcount = s.explicit_size(member);
        bool ok = true;
        for (std::uint64_t i = 0; i < mcount; ++i) {
          std::string id =
              s.element_id(r.arg_sorts[0], static_cast<std::uint32_t>(i));
          auto found = lookup(subject.base_sort, id);
          if (!found) {
            issue(errc::type_mismatch, id, "relation " + r.name,
                  "member \"" + id + "\" is not an element of base sort " +
                      subject.base_sort);
            ok = false;
          } else {
            mapping.push_back(*found);
          }
        }
        if (ok) s.member_to_base[r.name] = std::move(mapping);
        break;
      }
      case BuiltinKind::Application: {
        if (raw.relation_tuples.count(r.name) &&
            !raw.relation_tuples.at(r.name).empty())
          issue(errc::validation_error, r.name, "relation " + r.name,
                "builtin application relations take no explicit extension");
        if (r.arg_sorts.size() != 2 && r.arg_sorts.size() != 3) {
          issue(errc::arity_mismatch, r.name, "relation " + r.name,
                "application relations have arity 2 or 3");
          break;
        }
        const SortCarrier& fn = s.carrier(r.arg_sorts[0]);
        if (fn.kind != SortCarrier::Kind::Functions) {
          issue(errc::type_mismatch, r.arg_sorts[0], "relation " + r.name,
                "first argument sort must have a function carrier");
          break;
        }
        if (r.arg_sorts[1] != fn.index_sort)
          issue(errc::type_mismatch, r.arg_sorts[1], "relation " + r.name,
                "second argument sort must be the function's index sort " +
                    fn.index_sort);
        if (r.arg_sorts.size() == 3) {
          if (r.arg_sorts[2] != fn.value_sort)
            issue(errc::type_mismatch, r.arg_sorts[2], "relation " + r.name,
                  "third argument sort must be the function's value sort " +
                      fn.value_sort);
          if (!r.success_value.empty())
            issue(errc::validation_error, r.name, "relation " + r.name,
                  "ternary application relations take no designated value");
        } else {
          if (r.success_value.empty())
            issue(errc::unvalued_constant, r.name, "relation " + r.name,
                  "binary application relations need a designated value of "
                  "the value sort");
          else if (!lookup(fn.value_sort, r.success_value))
            issue(errc::type_mismatch, r.success_value, "relation " + r.name,
                  "designated value \"" + r.success_value +
                      "\" is not an element of sort " + fn.value_sort);
        }
        break;
      }
    }
  }

  // constants
  for (const auto& [name, value] : raw.constant_values)
    if (!vocab.find_constant(name))
      issue(errc::unknown_symbol, name, "constant " + name,
            "value given for undeclared constant");
  for (const auto& c : vocab.constants) {
    if (!vocab.has_sort(c.sort)) continue;  // already reported
    if (s.carrier(c.sort).implicit()) {
      issue(errc::type_mismatch, c.name, "constant " + c.name,
            "constants of implicit sorts are not supported");
      continue;
    }
    auto it = raw.constant_values.find(c.name);
    if (it == raw.constant_values.end()) {
      issue(errc::unvalued_constant, c.name, "constant " + c.name,
            "constant has no value");
      continue;
    }
    auto found = lookup(c.sort, it->second);
    if (!found)
      issue(errc::type_mismatch, it->second, "constant " + c.name,
            "\"" + it->second + "\" is not an element of sort " + c.sort);
    else
      s.constant_values[c.name] = Element{*found, {}};
  }

  if (issues.empty()) result.structure = std::move(s);
  return result;
}

inline Structure validate_or_throw(const Vocabulary& vocab,
                                   const RawStructure& raw) {
  ValidationResult r = validate(vocab, raw);
  if (!r.ok()) throw validation_failure(r.issues);
  return std::move(r.structure);
}

// Truth of one relation application. Tuples are checked against the
// relation's type before lookup.
inline bool holds(const Structure& s, const std::string& relation,
                  std::span<const Element> args) {
  const RelationDecl* decl = s.vocabulary.find_relation(relation);
  if (!decl)
    throw error(errc::unknown_relation,
                "relation " + relation + " is not declared");
  if (args.size() != decl->arg_sorts.size())
    throw error(errc::arity_mismatch,
                "relation " + relation + " has arity " +
                    std::to_string(decl->arg_sorts.size()) + ", got " +
                    std::to_string(args.size()) + " arguments");
  for (size_t i = 0; i < args.size(); ++i) {
    const SortCarrier& c = s.carrier(decl->arg_sorts[i]);
    if (c.implicit()) {
      if (!args[i].composite())
        throw error(errc::type_mismatch,
                    "argument " + std::to_string(i + 1) + " of " + relation +
                        " must be a composite element");
    } else {
      if (args[i].composite() || args[i].index >= s.explicit_size(c))
        throw error(errc::type_mismatch,
                    "argument " + std::to_string(i + 1) + " of " + relation +
                        " is not an element of sort " + decl->arg_sorts[i]);
    }
  }
  switch (decl->builtin) {
    case BuiltinKind::None: {
      std::vector<std::uint32_t> key;
      key.reserve(args.size());
      for (const auto& a : args) key.push_back(a.index);
      return s.extensions.at(relation).count(key) > 0;
    }
    case BuiltinKind::Membership: {
      std::uint32_t base_idx = s.member_to_base.at(relation)[args[0].index];
      const auto& parts = args[1].parts;
      return std::binary_search(parts.begin(), parts.end(), base_idx);
    }
    case BuiltinKind::Application: {
      const auto& f = args[0].parts;
      std::uint32_t at = args[1].index;
      if (at >= f.size())
        throw error(errc::type_mismatch,
                    "index argument of " + relation + " is out of range");
      if (decl->arg_sorts.size() == 3) return f[at] == args[2].index;
      const SortCarrier& fc = s.carrier(decl->arg_sorts[0]);
      std::uint32_t success = s.element_index(fc.value_sort,
                                              decl->success_value);
      return f[at] == success;
    }
  }
  throw error(errc::internal_error, "bad builtin kind");
}

}  // namespace ra

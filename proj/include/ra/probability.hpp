#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ra/error.hpp"
#include "ra/eval.hpp"
#include "ra/formula.hpp"
#include "ra/rational.hpp"
#include "ra/structure.hpp"

namespace ra {

// The innate distribution families. WeightedCategorical and UniformKSubset
// each describe exactly one distribution; IndependentBinary describes the
// whole box of product-Bernoulli distributions with per-position success
// probability anywhere in [lo_i, hi_i].
struct WeightedCategorical {
  std::map<std::string, Rational> weights;  // outcome element id -> weight

  bool operator==(const WeightedCategorical&) const = default;
};

struct UniformKSubset {
  std::uint64_t population = 0;  // N
  std::uint64_t pool = 0;        // n, the drawn subset's size
  std::uint64_t marked = 0;      // K

  bool operator==(const UniformKSubset&) const = default;
};

struct IndependentBinary {
  std::vector<Rational> lo, hi;

  bool operator==(const IndependentBinary&) const = default;

  bool degenerate() const {
    for (size_t i = 0; i < lo.size(); ++i)
      if (lo[i] != hi[i]) return false;
    return true;
  }
};

using TrialModel =
    std::variant<WeightedCategorical, UniformKSubset, IndependentBinary>;

enum class Comparator : std::uint8_t { GreaterEqual, LessEqual, Equal };

inline const char* comparator_text(Comparator c) {
  switch (c) {
    case Comparator::GreaterEqual: return ">=";
    case Comparator::LessEqual: return "<=";
    case Comparator::Equal: return "==";
  }
  return "?";
}

// "the success count compares to k": successes are marked elements in the
// drawn pool (UniformKSubset) or positions mapped to the designated value
// (IndependentBinary)
struct CountEvent {
  Comparator cmp = Comparator::GreaterEqual;
  std::uint64_t k = 0;

  bool operator==(const CountEvent&) const = default;
};

struct ExtensionalEvent {
  FormulaPtr formula;  // exactly one free variable, of the outcome sort
};

using EventSpec = std::variant<CountEvent, ExtensionalEvent>;

// Ties a trial model to the structure's outcome sort so events can be
// enumerated. success_value names the function-value element counted as a
// success by IndependentBinary models.
struct OutcomeSpace {
  const Structure* structure = nullptr;
  std::string outcome_sort;
  std::string success_value;
};

struct ProbabilityBound {
  Rational sup;
  Rational inf;
  std::string sup_attained_at;
};

// P(event) under a weighted single-draw distribution; the event is a set of
// outcome ids. Weights are nonnegative with positive total and every event
// id must carry a weight.
inline Rational categorical_event_probability(
    const WeightedCategorical& model, const std::set<std::string>& event) {
  Rational total = 0;
  for (const auto& [id, w] : model.weights) {
    if (w < 0)
      throw error(errc::parameter_out_of_range,
                  "negative weight for outcome \"" + id + "\"");
    total += w;
  }
  if (total == 0)
    throw error(errc::parameter_out_of_range, "total outcome weight is zero");
  Rational hit = 0;
  for (const auto& id : event) {
    auto it = model.weights.find(id);
    if (it == model.weights.end())
      throw error(errc::type_mismatch,
                  "event names outcome \"" + id + "\" which has no weight");
    hit += it->second;
  }
  return hit / total;
}

// P(number of marked elements in the pool cmp k) for a uniform n-element pool from a
// population of N with K marked elements.
inline Rational hypergeometric_count_probability(std::uint64_t N,
                                                 std::uint64_t K,
                                                 std::uint64_t n, Comparator cmp,
                                                 std::uint64_t k) {
  if (K > N)
    throw error(errc::parameter_out_of_range,
                "marked count exceeds the population");
  if (n > N)
    throw error(errc::parameter_out_of_range,
                "pool size exceeds the population");
  if (k > n)
    throw error(errc::parameter_out_of_range,
                "count bound k exceeds the pool size");
  Integer denom = binomial(N, n);
  std::uint64_t i_max = std::min(K, n);
  // i < i_min is infeasible: the pool cannot avoid marked elements once
  // n > N - K
  std::uint64_t i_min = n > N - K ? n - (N - K) : 0;
  std::uint64_t from = i_min, to = i_max;
  switch (cmp) {
    case Comparator::GreaterEqual:
      from = std::max(i_min, k);
      break;
    case Comparator::LessEqual:
      to = std::min(i_max, k);
      break;
    case Comparator::Equal:
      if (k < i_min || k > i_max) return 0;
      from = to = k;
      break;
  }
  if (from > to) return 0;
  Integer num = 0;
  for (std::uint64_t i = from; i <= to; ++i)
    num += binomial(K, i) * binomial(N - K, n - i);
  return Rational(num, denom);
}

namespace detail {

// Distribution of the success count for independent Bernoulli draws,
// truncated at cap. Saturating: dp[cap] accumulates P(count >= cap);
// otherwise dp[cap] is the exact pmf value and the upper tail is dropped.
inline std::vector<Rational> pb_distribution(const std::vector<Rational>& p,
                                             size_t cap, bool saturate) {
  std::vector<Rational> dp(cap + 1, Rational(0));
  dp[0] = 1;
  size_t reached = 0;
  for (const Rational& pi : p) {
    size_t top = std::min(reached + 1, cap);
    for (size_t j = top; j > 0; --j) {
      if (saturate && j == cap)
        dp[j] = dp[j] + dp[j - 1] * pi;  // stay once reached
      else
        dp[j] = dp[j] * (1 - pi) + dp[j - 1] * pi;
    }
    dp[0] = dp[0] * (1 - pi);
    reached = top;
  }
  return dp;
}

inline void check_probabilities(const std::vector<Rational>& p) {
  for (const Rational& pi : p)
    if (pi < 0 || pi > 1)
      throw error(errc::parameter_out_of_range,
                  "success probability " + to_fraction_string(pi) +
                      " is outside [0,1]");
}

}  // namespace detail

// P(success count cmp k) for independent draws with the given per-position
// success probabilities. O(n*k) exact arithmetic.
inline Rational poisson_binomial_count_probability(
    const std::vector<Rational>& probs, Comparator cmp, std::uint64_t k) {
  detail::check_probabilities(probs);
  if (k > probs.size())
    throw error(errc::parameter_out_of_range,
                "count bound k exceeds the number of positions");
  size_t kk = static_cast<size_t>(k);
  switch (cmp) {
    case Comparator::GreaterEqual: {
      if (kk == 0) return 1;
      auto dp = detail::pb_distribution(probs, kk, true);
      return dp[kk];
    }
    case Comparator::LessEqual: {
      auto dp = detail::pb_distribution(probs, kk + 1, true);
      Rational out = 0;
      for (size_t j = 0; j <= kk; ++j) out += dp[j];
      return out;
    }
    case Comparator::Equal: {
      auto dp = detail::pb_distribution(probs, kk, false);
      return dp[kk];
    }
  }
  throw error(errc::internal_error, "bad comparator");
}

// P(outcome satisfies phi): direct enumeration of the outcome sort, exact.
// The formula must have exactly one free variable, of the outcome sort.
inline Rational extensional_event_probability(const TrialModel& model,
                                              const OutcomeSpace& space,
                                              const FormulaPtr& formula,
                                              const EvalOptions& options = {}) {
  if (!space.structure)
    throw error(errc::internal_error, "extensional events need a structure");
  const Structure& s = *space.structure;
  auto frees = free_variables(formula);
  if (frees.size() != 1)
    throw error(errc::extra_free_variables,
                "an event formula needs exactly one free variable, found " +
                    std::to_string(frees.size()));
  const auto& [fv_name, fv_sort] = *frees.begin();
  if (fv_sort != space.outcome_sort)
    throw error(errc::type_error,
                "the event formula's free variable ranges over " + fv_sort +
                    ", not the outcome sort " + space.outcome_sort);
  SortSize size = sort_size(s, space.outcome_sort, options.enum_limit);
  if (size.over_limit)
    throw error(errc::sort_too_large,
                "cannot enumerate outcome sort " + space.outcome_sort +
                    " with " + size.count.str() + " elements (limit " +
                    std::to_string(options.enum_limit) + ")");

  const SortCarrier& carrier = s.carrier(space.outcome_sort);
  return std::visit(
      [&](const auto& m) -> Rational {
        using M = std::decay_t<decltype(m)>;
        Rational hit = 0;
        if constexpr (std::is_same_v<M, WeightedCategorical>) {
          if (carrier.implicit())
            throw error(errc::type_mismatch,
                        "a weighted single-draw model needs an explicit "
                        "outcome sort");
          std::set<std::string> event;
          Valuation v;
          for_each_element(s, space.outcome_sort, [&](const Element& e) {
            v.bind(fv_name, e);
            if (eval(s, formula, v, options))
              event.insert(s.element_id(space.outcome_sort, e.index));
            v.unbind();
            return true;
          });
          return categorical_event_probability(m, event);
        } else if constexpr (std::is_same_v<M, UniformKSubset>) {
          if (carrier.kind != SortCarrier::Kind::Subsets)
            throw error(errc::type_mismatch,
                        "a subset-draw model needs a subset outcome sort");
          Integer count = 0, total = 0;
          Valuation v;
          for_each_element(s, space.outcome_sort, [&](const Element& e) {
            ++total;
            v.bind(fv_name, e);
            if (eval(s, formula, v, options)) ++count;
            v.unbind();
            return true;
          });
          return Rational(count, total);
        } else {
          if (!m.degenerate())
            throw error(errc::nondegenerate_parameters,
                        "extensional probabilities need point parameters; "
                        "this model has an interval of distributions");
          if (carrier.kind != SortCarrier::Kind::Functions)
            throw error(errc::type_mismatch,
                        "an independent-positions model needs a function "
                        "outcome sort");
          detail::check_probabilities(m.lo);
          std::uint64_t positions = s.explicit_size(s.carrier(carrier.index_sort));
          if (m.lo.size() != positions)
            throw error(errc::parameter_out_of_range,
                        "model has " + std::to_string(m.lo.size()) +
                            " positions, outcome sort has " +
                            std::to_string(positions));
          std::uint32_t success =
              s.element_index(carrier.value_sort, space.success_value);
          Valuation v;
          for_each_element(s, space.outcome_sort, [&](const Element& e) {
            v.bind(fv_name, e);
            bool in = eval(s, formula, v, options);
            v.unbind();
            if (in) {
              Rational pr = 1;
              for (size_t i = 0; i < e.parts.size(); ++i)
                pr *= e.parts[i] == success ? m.lo[i] : 1 - m.lo[i];
              hit += pr;
            }
            return true;
          });
          return hit;
        }
      },
      model);
}

// Exact supremum (and infimum) of P(event) over every innate distribution.
// Count events over IndependentBinary boxes use monotonicity: P(count >= k)
// is nondecreasing in every per-position probability, P(count <= k) is
// nonincreasing, so both extrema sit at a box corner; P(count == k) is
// multilinear in the probabilities, so its extrema also sit at corners,
// found by enumerating the nondegenerate coordinates (at most 20).
inline ProbabilityBound event_probability_sup(
    const TrialModel& model, const EventSpec& event,
    const OutcomeSpace* space = nullptr, const EvalOptions& options = {}) {
  if (const auto* ext = std::get_if<ExtensionalEvent>(&event)) {
    if (const auto* ib = std::get_if<IndependentBinary>(&model);
        ib && !ib->degenerate())
      throw error(errc::nondegenerate_parameters,
                  "extensional events need point parameters; express the "
                  "event as a success-count bound instead");
    if (!space)
      throw error(errc::internal_error, "extensional events need a structure");
    Rational p =
        extensional_event_probability(model, *space, ext->formula, options);
    return {p, p, "the unique innate distribution"};
  }

  const CountEvent& count = std::get<CountEvent>(event);
  return std::visit(
      [&](const auto& m) -> ProbabilityBound {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, WeightedCategorical>) {
          throw error(errc::unsupported_supremum,
                      "count events need a subset-draw or "
                      "independent-positions model");
        } else if constexpr (std::is_same_v<M, UniformKSubset>) {
          Rational p = hypergeometric_count_probability(
              m.population, m.marked, m.pool, count.cmp, count.k);
          return {p, p, "the unique innate distribution (uniform pools)"};
        } else {
          if (m.lo.size() != m.hi.size())
            throw error(errc::parameter_out_of_range,
                        "lo and hi bound lists differ in length");
          detail::check_probabilities(m.lo);
          detail::check_probabilities(m.hi);
          for (size_t i = 0; i < m.lo.size(); ++i)
            if (m.lo[i] > m.hi[i])
              throw error(errc::parameter_out_of_range,
                          "position " + std::to_string(i + 1) +
                              " has lo > hi");
          if (count.k > m.lo.size())
            throw error(errc::parameter_out_of_range,
                        "count bound k exceeds the number of positions");
          switch (count.cmp) {
            case Comparator::GreaterEqual:
              return {poisson_binomial_count_probability(
                          m.hi, Comparator::GreaterEqual, count.k),
                      poisson_binomial_count_probability(
                          m.lo, Comparator::GreaterEqual, count.k),
                      "every per-position probability at its upper bound"};
            case Comparator::LessEqual:
              return {poisson_binomial_count_probability(
                          m.lo, Comparator::LessEqual, count.k),
                      poisson_binomial_count_probability(
                          m.hi, Comparator::LessEqual, count.k),
                      "every per-position probability at its lower bound"};
            case Comparator::Equal: {
              std::vector<size_t> open;
              for (size_t i = 0; i < m.lo.size(); ++i)
                if (m.lo[i] != m.hi[i]) open.push_back(i);
              if (open.size() > 20)
                throw error(errc::unsupported_supremum,
                            "box corner search over " +
                                std::to_string(open.size()) +
                                " open positions exceeds the 2^20 cap");
              std::vector<Rational> point = m.lo;
              ProbabilityBound best;
              bool first = true;
              for (std::uint64_t mask = 0;
                   mask < (std::uint64_t(1) << open.size()); ++mask) {
                for (size_t b = 0; b < open.size(); ++b)
                  point[open[b]] =
                      (mask >> b) & 1 ? m.hi[open[b]] : m.lo[open[b]];
                Rational p = poisson_binomial_count_probability(
                    point, Comparator::Equal, count.k);
                if (first || p > best.sup) {
                  best.sup = p;
                  std::string at = "box corner with upper bounds at {";
                  bool comma = false;
                  for (size_t b = 0; b < open.size(); ++b)
                    if ((mask >> b) & 1) {
                      if (comma) at += ",";
                      at += std::to_string(open[b] + 1);
                      comma = true;
                    }
                  best.sup_attained_at = at + "}";
                }
                if (first || p < best.inf) best.inf = p;
                first = false;
              }
              return best;
            }
          }
          throw error(errc::internal_error, "bad comparator");
        }
      },
      model);
}

}  // namespace ra

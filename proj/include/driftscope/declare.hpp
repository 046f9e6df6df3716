#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "driftscope/event_log.hpp"

namespace driftscope {

// The eight default templates, in canonical enumeration order. AtMostOne is
// unary; the rest take an ordered pair of distinct activities. The Response
// family and NotSuccession activate on the first parameter, the Precedence
// family on the second.
enum class TemplateKind : int {
  AtMostOne = 0,
  Response,
  AlternateResponse,
  ChainResponse,
  Precedence,
  AlternatePrecedence,
  ChainPrecedence,
  NotSuccession,
};

inline constexpr int kTemplateCount = 8;

bool is_unary(TemplateKind kind);
std::string_view template_name(TemplateKind kind);
std::optional<TemplateKind> template_from_name(std::string_view name);

struct Constraint {
  TemplateKind kind = TemplateKind::AtMostOne;
  ActivityId a = -1;  // first parameter
  ActivityId b = -1;  // second parameter, -1 for unary templates

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

// Textual form used in reports: "Response(a, b)", "AtMostOne(a)".
std::string constraint_text(const Constraint& c, const EventLog& log);

std::vector<TemplateKind> all_templates();

// Every instantiation of the repertoire over an alphabet of n activities:
// kinds in enumeration order, pairs in lexicographic order, (a,a) excluded.
// Size is u*n + b*n*(n-1) for u unary and b binary kinds.
std::vector<Constraint> constraint_space(
    std::size_t alphabet_size,
    const std::vector<TemplateKind>& repertoire = all_templates());

struct TraceEval {
  std::int64_t activations = 0;
  std::int64_t satisfied = 0;
};

// Counts activations of c in the trace and how many of them are satisfied.
// Single pass over the activity sequence.
TraceEval evaluate_trace(const Constraint& c, std::span<const ActivityId> trace);

// support = total satisfied / total activations over the sub-log's traces,
// 0 when nothing activates. confidence scales support by the fraction of
// traces containing at least one activation.
double support(const Constraint& c, const SubLog& s);
double confidence(const Constraint& c, const SubLog& s);

// Strength chains for redundancy removal: ChainResponse implies
// AlternateResponse implies Response over the same parameters, and likewise
// for the Precedence family. Returns the kinds strictly implied by `kind`
// (the weaker templates), or an empty list.
std::span<const TemplateKind> weaker_kinds(TemplateKind kind);

// Drops a constraint when a strictly stronger one over the same parameters
// has a confidence series matching it within epsilon at every index.
// Returns the kept positions, preserving input order.
std::vector<std::size_t> subsumption_reduce(
    const std::vector<Constraint>& constraints,
    const std::vector<std::vector<double>>& series, double epsilon = 0.01);

}  // namespace driftscope

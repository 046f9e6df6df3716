#include "driftscope/declare.hpp"

#include <array>
#include <cmath>

#include "driftscope/errors.hpp"

namespace driftscope {

bool is_unary(TemplateKind kind) { return kind == TemplateKind::AtMostOne; }

std::string_view template_name(TemplateKind kind) {
  switch (kind) {
    case TemplateKind::AtMostOne: return "AtMostOne";
    case TemplateKind::Response: return "Response";
    case TemplateKind::AlternateResponse: return "AlternateResponse";
    case TemplateKind::ChainResponse: return "ChainResponse";
    case TemplateKind::Precedence: return "Precedence";
    case TemplateKind::AlternatePrecedence: return "AlternatePrecedence";
    case TemplateKind::ChainPrecedence: return "ChainPrecedence";
    case TemplateKind::NotSuccession: return "NotSuccession";
  }
  return "?";
}

std::optional<TemplateKind> template_from_name(std::string_view name) {
  for (int i = 0; i < kTemplateCount; ++i) {
    const auto kind = static_cast<TemplateKind>(i);
    if (template_name(kind) == name) return kind;
  }
  return std::nullopt;
}

std::string constraint_text(const Constraint& c, const EventLog& log) {
  std::string out(template_name(c.kind));
  out += '(';
  out += log.activity_name(c.a);
  if (!is_unary(c.kind)) {
    out += ", ";
    out += log.activity_name(c.b);
  }
  out += ')';
  return out;
}

std::vector<TemplateKind> all_templates() {
  std::vector<TemplateKind> out;
  out.reserve(kTemplateCount);
  for (int i = 0; i < kTemplateCount; ++i)
    out.push_back(static_cast<TemplateKind>(i));
  return out;
}

std::vector<Constraint> constraint_space(
    std::size_t alphabet_size, const std::vector<TemplateKind>& repertoire) {
  if (alphabet_size == 0)
    throw ConfigError("constraint space requires a non-empty alphabet");
  const auto n = static_cast<ActivityId>(alphabet_size);
  std::vector<Constraint> out;
  for (TemplateKind kind : repertoire) {
    if (is_unary(kind)) {
      for (ActivityId a = 0; a < n; ++a) out.push_back({kind, a, -1});
    } else {
      for (ActivityId a = 0; a < n; ++a)
        for (ActivityId b = 0; b < n; ++b)
          if (a != b) out.push_back({kind, a, b});
    }
  }
  return out;
}

TraceEval evaluate_trace(const Constraint& c, std::span<const ActivityId> t) {
  TraceEval r;
  const ActivityId a = c.a;
  const ActivityId b = c.b;
  const std::size_t n = t.size();

  switch (c.kind) {
    case TemplateKind::AtMostOne: {
      for (ActivityId x : t) r.activations += x == a;
      r.satisfied = r.activations == 1 ? 1 : 0;
      break;
    }
    case TemplateKind::Response: {
      // Backward scan: an a is satisfied iff a b was seen strictly after it.
      bool seen_b = false;
      for (std::size_t i = n; i-- > 0;) {
        if (t[i] == a) {
          ++r.activations;
          r.satisfied += seen_b;
        } else if (t[i] == b) {
          seen_b = true;
        }
      }
      break;
    }
    case TemplateKind::AlternateResponse: {
      // An activation stays pending until a b closes it; a new a while
      // pending leaves the previous activation unsatisfied.
      bool pending = false;
      for (ActivityId x : t) {
        if (x == a) {
          ++r.activations;
          pending = true;
        } else if (x == b && pending) {
          ++r.satisfied;
          pending = false;
        }
      }
      break;
    }
    case TemplateKind::ChainResponse: {
      for (std::size_t i = 0; i < n; ++i)
        if (t[i] == a) {
          ++r.activations;
          r.satisfied += i + 1 < n && t[i + 1] == b;
        }
      break;
    }
    case TemplateKind::Precedence: {
      bool seen_a = false;
      for (ActivityId x : t) {
        if (x == b) {
          ++r.activations;
          r.satisfied += seen_a;
        } else if (x == a) {
          seen_a = true;
        }
      }
      break;
    }
    case TemplateKind::AlternatePrecedence: {
      // armed: an a occurred since the previous b (or the trace start).
      bool armed = false;
      for (ActivityId x : t) {
        if (x == a) {
          armed = true;
        } else if (x == b) {
          ++r.activations;
          r.satisfied += armed;
          armed = false;
        }
      }
      break;
    }
    case TemplateKind::ChainPrecedence: {
      for (std::size_t i = 0; i < n; ++i)
        if (t[i] == b) {
          ++r.activations;
          r.satisfied += i > 0 && t[i - 1] == a;
        }
      break;
    }
    case TemplateKind::NotSuccession: {
      bool seen_b = false;
      for (std::size_t i = n; i-- > 0;) {
        if (t[i] == a) {
          ++r.activations;
          r.satisfied += !seen_b;
        } else if (t[i] == b) {
          seen_b = true;
        }
      }
      break;
    }
  }
  return r;
}

namespace {

struct SubLogStats {
  std::int64_t activations = 0;
  std::int64_t satisfied = 0;
  std::int64_t activating_traces = 0;
};

SubLogStats accumulate(const Constraint& c, const SubLog& s) {
  SubLogStats out;
  for (std::size_t i = 0; i < s.count; ++i) {
    const TraceEval e = evaluate_trace(c, s.trace(i).activities);
    out.activations += e.activations;
    out.satisfied += e.satisfied;
    out.activating_traces += e.activations > 0;
  }
  return out;
}

}  // namespace

double support(const Constraint& c, const SubLog& s) {
  const SubLogStats st = accumulate(c, s);
  if (st.activations == 0) return 0.0;
  return static_cast<double>(st.satisfied) / static_cast<double>(st.activations);
}

double confidence(const Constraint& c, const SubLog& s) {
  const SubLogStats st = accumulate(c, s);
  if (st.activations == 0 || s.count == 0) return 0.0;
  const double sup =
      static_cast<double>(st.satisfied) / static_cast<double>(st.activations);
  return sup * static_cast<double>(st.activating_traces) /
         static_cast<double>(s.count);
}

std::span<const TemplateKind> weaker_kinds(TemplateKind kind) {
  static constexpr std::array<TemplateKind, 2> chain_response = {
      TemplateKind::AlternateResponse, TemplateKind::Response};
  static constexpr std::array<TemplateKind, 1> alt_response = {
      TemplateKind::Response};
  static constexpr std::array<TemplateKind, 2> chain_precedence = {
      TemplateKind::AlternatePrecedence, TemplateKind::Precedence};
  static constexpr std::array<TemplateKind, 1> alt_precedence = {
      TemplateKind::Precedence};
  switch (kind) {
    case TemplateKind::ChainResponse: return chain_response;
    case TemplateKind::AlternateResponse: return alt_response;
    case TemplateKind::ChainPrecedence: return chain_precedence;
    case TemplateKind::AlternatePrecedence: return alt_precedence;
    default: return {};
  }
}

std::vector<std::size_t> subsumption_reduce(
    const std::vector<Constraint>& constraints,
    const std::vector<std::vector<double>>& series, double epsilon) {
  if (constraints.size() != series.size())
    throw ConfigError("subsumption reduce: constraint/series count mismatch");
  const std::size_t n = constraints.size();
  for (std::size_t i = 1; i < n; ++i)
    if (series[i].size() != series[0].size())
      throw ConfigError("subsumption reduce: series lengths are ragged");

  const auto matches = [&](std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < series[i].size(); ++k)
      if (std::abs(series[i][k] - series[j][k]) > epsilon) return false;
    return true;
  };

  std::vector<bool> dropped(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const auto weaker = weaker_kinds(constraints[i].kind);
    if (weaker.empty()) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || dropped[j]) continue;
      if (constraints[j].a != constraints[i].a ||
          constraints[j].b != constraints[i].b)
        continue;
      for (TemplateKind w : weaker)
        if (constraints[j].kind == w && matches(i, j)) {
          dropped[j] = true;
          break;
        }
    }
  }

  std::vector<std::size_t> kept;
  kept.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    if (!dropped[i]) kept.push_back(i);
  return kept;
}

}  // namespace driftscope

// The five refinement passes over constant candidates. Each removal is
// attributed to the first pass (in RI-I..RI-V order) whose predicate matches.
#pragma once

#include "cryptoslice/slicer.h"

#include <array>

namespace cryptoslice {

enum class ValueKind { ByteArrayLike, CharArrayLike, StringLike, IntLike, UrlLike };

const char *valueKindName(ValueKind k);

struct RefinementContext {
  int ruleId = 0;
  ValueKind expectedValueKind = ValueKind::ByteArrayLike;
  bool forbidNull = false;
  bool forbidEmptyString = false;

  // Expected kind given by the caller; null/empty contracts from the rule.
  static RefinementContext forRule(int ruleId, ValueKind kind);
};

// 1..5 for RI-I..RI-V.
enum class Ri : int { StateIndicator = 1, SourceIdentifier, Bookkeeping, TypeIncompatible, InfeasiblePath };

constexpr int kRiCount = 5;
const char *riName(Ri ri);

struct RemovalEntry {
  ConstantCandidate candidate;
  Ri ri;
  std::string reason;
};

struct RemovedPredictable {
  PredictableCall call;
  Ri ri;
};

struct RemovalLog {
  std::vector<RemovalEntry> entries;
  std::vector<RemovedPredictable> predictables;

  // Removed constants plus predictable calls per RI, indexed by RI - 1.
  std::array<size_t, kRiCount> counts() const;
};

bool riStateIndicator(const ConstantCandidate &c);
bool riSourceIdentifier(const ConstantCandidate &c);
bool riBookkeeping(const ConstantCandidate &c);
bool riTypeIncompatible(const ConstantCandidate &c, const RefinementContext &ctx);
bool riInfeasiblePath(const ConstantCandidate &c, const RefinementContext &ctx);

// The first matching RI, if any.
std::optional<Ri> firstMatchingRi(const ConstantCandidate &c,
                                  const RefinementContext &ctx);

struct Refined {
  std::vector<ConstantCandidate> kept;
  RemovalLog log;
};

Refined applyRefinements(const std::vector<ConstantCandidate> &candidates,
                         const RefinementContext &ctx);

// Predictable calls are judged only by their invoke context (RI-I, RI-II).
std::vector<PredictableCall> refinePredictables(const std::vector<PredictableCall> &calls,
                                                RemovalLog &log);

} // namespace cryptoslice

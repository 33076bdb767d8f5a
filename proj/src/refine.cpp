#include "cryptoslice/refine.h"

namespace cryptoslice {

const char *valueKindName(ValueKind k) {
  switch (k) {
  case ValueKind::ByteArrayLike:
    return "byteArrayLike";
  case ValueKind::CharArrayLike:
    return "charArrayLike";
  case ValueKind::StringLike:
    return "stringLike";
  case ValueKind::IntLike:
    return "intLike";
  case ValueKind::UrlLike:
    return "urlLike";
  }
  return "?";
}

const char *riName(Ri ri) {
  static const char *names[] = {"RI-I", "RI-II", "RI-III", "RI-IV", "RI-V"};
  return names[static_cast<int>(ri) - 1];
}

RefinementContext RefinementContext::forRule(int ruleId, ValueKind kind) {
  RefinementContext c;
  c.ruleId = ruleId;
  c.expectedValueKind = kind;
  // SecretKeySpec, PBEKeySpec, KeyStore passwords reject null and empty
  // values; salts and IVs only null.
  switch (ruleId) {
  case 1:
  case 2:
  case 3:
    c.forbidNull = c.forbidEmptyString = true;
    break;
  case 10:
  case 12:
    c.forbidNull = true;
    break;
  default:
    break;
  }
  return c;
}

std::array<size_t, kRiCount> RemovalLog::counts() const {
  std::array<size_t, kRiCount> n{};
  for (const auto &e : entries)
    ++n[static_cast<int>(e.ri) - 1];
  for (const auto &p : predictables)
    ++n[static_cast<int>(p.ri) - 1];
  return n;
}

namespace {

bool stateIndicatorContext(const FlowContext &c) {
  return c.invokeKind == InvokeKind::Virtual && c.inAssignment;
}

bool sourceIdentifierContext(const FlowContext &c) {
  return (c.invokeKind == InvokeKind::Static ||
          c.invokeKind == InvokeKind::Interface) &&
         c.inAssignment;
}

bool numeric(Value::Kind k) {
  return k == Value::Kind::Int || k == Value::Kind::Long || k == Value::Kind::Char;
}

} // namespace

bool riStateIndicator(const ConstantCandidate &c) {
  return stateIndicatorContext(c.context);
}

bool riSourceIdentifier(const ConstantCandidate &c) {
  return sourceIdentifierContext(c.context);
}

bool riBookkeeping(const ConstantCandidate &c) {
  return c.context.viaArrayIndex || c.context.viaArraySize ||
         c.context.viaCollectionIndex;
}

bool riTypeIncompatible(const ConstantCandidate &c, const RefinementContext &ctx) {
  Value::Kind k = c.value.kind;
  switch (ctx.expectedValueKind) {
  case ValueKind::IntLike:
    return k == Value::Kind::String || k == Value::Kind::Bool ||
           k == Value::Kind::Char;
  case ValueKind::ByteArrayLike:
  case ValueKind::CharArrayLike:
    // A number is plausible only as an element of the array itself.
    return k == Value::Kind::Bool || (numeric(k) && !c.context.viaArrayElement);
  case ValueKind::StringLike:
  case ValueKind::UrlLike:
    return k == Value::Kind::Bool || numeric(k);
  }
  return false;
}

bool riInfeasiblePath(const ConstantCandidate &c, const RefinementContext &ctx) {
  if (c.value.kind == Value::Kind::Null)
    return ctx.forbidNull;
  if (c.value.kind == Value::Kind::String && c.value.text.empty())
    return ctx.forbidEmptyString;
  return false;
}

std::optional<Ri> firstMatchingRi(const ConstantCandidate &c,
                                  const RefinementContext &ctx) {
  if (riStateIndicator(c))
    return Ri::StateIndicator;
  if (riSourceIdentifier(c))
    return Ri::SourceIdentifier;
  if (riBookkeeping(c))
    return Ri::Bookkeeping;
  if (riTypeIncompatible(c, ctx))
    return Ri::TypeIncompatible;
  if (riInfeasiblePath(c, ctx))
    return Ri::InfeasiblePath;
  return std::nullopt;
}

namespace {

std::string reasonFor(Ri ri, const ConstantCandidate &c,
                      const RefinementContext &ctx) {
  switch (ri) {
  case Ri::StateIndicator:
    return "argument of an assigned virtual invoke";
  case Ri::SourceIdentifier:
    return std::string("argument of an assigned ") +
           invokeKindName(*c.context.invokeKind) + " invoke";
  case Ri::Bookkeeping:
    return c.context.viaArraySize    ? "array size"
           : c.context.viaArrayIndex ? "array index"
                                     : "collection index";
  case Ri::TypeIncompatible:
    return std::string("incompatible with ") + valueKindName(ctx.expectedValueKind);
  case Ri::InfeasiblePath:
    return c.value.kind == Value::Kind::Null ? "null initializer"
                                             : "empty string initializer";
  }
  return "";
}

} // namespace

Refined applyRefinements(const std::vector<ConstantCandidate> &candidates,
                         const RefinementContext &ctx) {
  Refined out;
  for (const auto &c : candidates) {
    if (auto ri = firstMatchingRi(c, ctx))
      out.log.entries.push_back({c, *ri, reasonFor(*ri, c, ctx)});
    else
      out.kept.push_back(c);
  }
  return out;
}

std::vector<PredictableCall> refinePredictables(const std::vector<PredictableCall> &calls,
                                                RemovalLog &log) {
  std::vector<PredictableCall> kept;
  for (const auto &p : calls) {
    if (stateIndicatorContext(p.context))
      log.predictables.push_back({p, Ri::StateIndicator});
    else if (sourceIdentifierContext(p.context))
      log.predictables.push_back({p, Ri::SourceIdentifier});
    else
      kept.push_back(p);
  }
  return kept;
}

} // namespace cryptoslice

#include "cryptoslice/forward.h"

#include <algorithm>
#include <map>

namespace cryptoslice {

bool ForwardSlice::contains(int index) const {
  return std::any_of(influenced.begin(), influenced.end(),
                     [&](const InstrRef &r) { return r.index == index; });
}

ForwardSlice intraForwardSlice(const AnalysisContext &ctx, const MethodSig &method,
                               int originIndex) {
  const MethodDef *m = ctx.method(method);
  if (!m || !m->body)
    throw std::invalid_argument("no body: " + method.str());
  if (originIndex < 0 || originIndex >= static_cast<int>(m->body->size()))
    throw std::invalid_argument("origin not in method");
  Effects e = instructionEffects((*m->body)[originIndex]);
  if (e.strongDefs.empty() && e.weakDefs.empty())
    throw std::invalid_argument("origin defines nothing");

  const DefUseGraph &du = ctx.defUse(method);
  std::vector<bool> seen(du.size(), false);
  std::vector<int> work{originIndex};
  seen[originIndex] = true;
  std::vector<int> hit;
  while (!work.empty()) {
    int d = work.back();
    work.pop_back();
    for (int u : du.usesOf(d)) {
      if (seen[u])
        continue;
      seen[u] = true;
      hit.push_back(u);
      work.push_back(u);
    }
  }
  std::sort(hit.begin(), hit.end());
  ForwardSlice out{{method, originIndex}, {}};
  for (int u : hit)
    out.influenced.push_back({method, u});
  return out;
}

namespace {

std::string allocatedClass(const AnalysisContext &ctx, const std::string &method,
                           const std::string &local) {
  for (const auto &sig : ctx.bodies()) {
    if (sig.str() != method)
      continue;
    for (const auto &ins : *ctx.method(sig)->body)
      if (ins.kind == Instruction::Kind::Assign &&
          ins.target.kind == Value::Kind::Local && ins.target.text == local &&
          ins.rhs.kind == Expr::Kind::New)
        return ins.rhs.type;
  }
  return "?";
}

} // namespace

std::vector<DataOnlyBinding> dataOnlyBindings(const AnalysisContext &ctx,
                                              const std::vector<SliceResult> &slices) {
  std::map<std::pair<std::string, std::string>, DataOnlyBinding> byObject;
  for (const auto &s : slices)
    for (const auto &c : s.constants) {
      if (!c.context.setter)
        continue;
      const SetterSite &st = *c.context.setter;
      auto &b = byObject[{st.method, st.object}];
      b.method = st.method;
      b.objectLocal = st.object;
      b.taintedFields.insert(st.property);
    }
  std::vector<DataOnlyBinding> out;
  for (auto &[k, b] : byObject) {
    b.cls = allocatedClass(ctx, b.method, b.objectLocal);
    out.push_back(std::move(b));
  }
  return out;
}

bool trackDataOnlyConstant(const std::vector<SliceResult> &slices,
                           const ConstantCandidate &constant) {
  if (!constant.context.setter)
    return true;
  const SetterSite &st = *constant.context.setter;
  for (const auto &s : slices)
    for (const auto &g : s.getters)
      if (g.method.str() == st.method && g.object == st.object &&
          g.property == st.property && g.instructionIndex > st.instructionIndex)
        return true;
  return false;
}

} // namespace cryptoslice

#include "cryptoslice/callgraph.h"

#include <algorithm>
#include <sstream>

namespace cryptoslice {

std::string CallSite::key() const {
  return caller.str() + "#" + std::to_string(instructionIndex);
}

std::vector<std::string> directSubtypes(const Program &program,
                                        const std::string &cls) {
  std::vector<std::string> out;
  for (const auto &[name, c] : program.classes) {
    bool direct = c.superclass && *c.superclass == cls;
    if (!direct)
      direct = std::find(c.interfaces.begin(), c.interfaces.end(), cls) !=
               c.interfaces.end();
    if (direct)
      out.push_back(name);
  }
  return out;
}

namespace {

std::vector<MethodSig> resolve(const Program &program, const Instruction &ins,
                               const std::map<std::string, std::vector<std::string>>
                                   &subtypes) {
  std::vector<MethodSig> out;
  auto addIfBody = [&](const std::string &owner) {
    MethodSig s = ins.callee;
    s.owner = owner;
    const MethodDef *m = program.findMethod(s);
    if (m && m->hasBody())
      out.push_back(s);
  };
  addIfBody(ins.callee.owner);
  if (ins.invokeKind == InvokeKind::Virtual ||
      ins.invokeKind == InvokeKind::Interface) {
    auto it = subtypes.find(ins.callee.owner);
    if (it != subtypes.end())
      for (const auto &sub : it->second)
        addIfBody(sub);
  }
  return out;
}

} // namespace

CallGraph buildCallGraph(const Program &program) {
  CallGraph g;
  std::map<std::string, std::vector<std::string>> subtypes;
  for (const auto &[name, c] : program.classes) {
    if (c.superclass)
      subtypes[*c.superclass].push_back(name);
    for (const auto &i : c.interfaces)
      if (!c.superclass || *c.superclass != i)
        subtypes[i].push_back(name);
  }
  for (const auto &[name, c] : program.classes) {
    for (const auto &m : c.methods) {
      if (!m.body)
        continue;
      for (size_t i = 0; i < m.body->size(); ++i) {
        const Instruction &ins = (*m.body)[i];
        if (ins.kind != Instruction::Kind::Invoke)
          continue;
        CallSite s;
        s.caller = m.sig;
        s.instructionIndex = static_cast<int>(i);
        s.callee = ins.callee;
        s.kind = ins.invokeKind;
        s.file = c.file;
        s.line = ins.line;
        g.sites_.push_back(std::move(s));
      }
    }
  }
  std::stable_sort(g.sites_.begin(), g.sites_.end(),
                   [](const CallSite &a, const CallSite &b) {
                     if (a.file != b.file)
                       return a.file < b.file;
                     if (a.line != b.line)
                       return a.line < b.line;
                     if (a.caller.str() != b.caller.str())
                       return a.caller.str() < b.caller.str();
                     return a.instructionIndex < b.instructionIndex;
                   });
  for (size_t id = 0; id < g.sites_.size(); ++id) {
    const CallSite &s = g.sites_[id];
    const MethodDef *m = program.findMethod(s.caller);
    const Instruction &ins = (*m->body)[s.instructionIndex];
    g.targets_.push_back(resolve(program, ins, subtypes));
    for (const auto &t : g.targets_.back())
      g.callers_[t.str()].push_back(id);
    g.declared_[s.callee.str()].push_back(id);
    g.byKey_[s.key()] = id;
  }
  return g;
}

const std::vector<MethodSig> &
CallGraph::resolvedTargets(const CallSite &site) const {
  static const std::vector<MethodSig> empty;
  auto it = byKey_.find(site.key());
  return it == byKey_.end() ? empty : targets_[it->second];
}

std::vector<CallSite> CallGraph::callersOf(const MethodSig &callee) const {
  std::vector<CallSite> out;
  auto it = callers_.find(callee.str());
  if (it != callers_.end())
    for (size_t id : it->second)
      out.push_back(sites_[id]);
  return out;
}

long CallGraph::siteAt(const MethodSig &caller, int instructionIndex) const {
  auto it = byKey_.find(caller.str() + "#" + std::to_string(instructionIndex));
  return it == byKey_.end() ? -1 : static_cast<long>(it->second);
}

std::string CallGraph::dump() const {
  std::ostringstream os;
  for (size_t id = 0; id < sites_.size(); ++id) {
    const CallSite &s = sites_[id];
    if (targets_[id].empty()) {
      os << s.caller.str() << " @" << s.line << " -> " << s.callee.str()
         << " phantom\n";
      continue;
    }
    for (const auto &t : targets_[id])
      os << s.caller.str() << " @" << s.line << " -> " << t.str() << "\n";
  }
  return os.str();
}

std::vector<CallSite> callSitesOf(const CallGraph &graph,
                                  const MethodSig &target) {
  std::vector<size_t> ids;
  auto r = graph.callers_.find(target.str());
  if (r != graph.callers_.end())
    ids = r->second;
  auto d = graph.declared_.find(target.str());
  if (d != graph.declared_.end())
    for (size_t id : d->second)
      if (graph.targets_[id].empty())
        ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<CallSite> out;
  for (size_t id : ids)
    out.push_back(graph.sites_[id]);
  return out;
}

} // namespace cryptoslice

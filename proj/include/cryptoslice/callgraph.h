// Class-hierarchy call graph restricted to direct subclasses.
#pragma once

#include "cryptoslice/ir.h"

#include <map>
#include <string>
#include <vector>

namespace cryptoslice {

struct CallSite {
  MethodSig caller;
  int instructionIndex = -1;
  MethodSig callee;
  InvokeKind kind = InvokeKind::Static;
  std::string file;
  int line = 0;

  // "<caller>#<index>", unique per site.
  std::string key() const;
  bool operator==(const CallSite &o) const {
    return caller == o.caller && instructionIndex == o.instructionIndex;
  }
};

class CallGraph {
public:
  const std::vector<CallSite> &sites() const { return sites_; }
  const std::vector<MethodSig> &resolvedTargets(size_t site) const {
    return targets_[site];
  }
  const std::vector<MethodSig> &resolvedTargets(const CallSite &site) const;
  bool isPhantom(size_t site) const { return targets_[site].empty(); }

  // Sites whose resolved targets contain `callee`, in (file, line) order.
  std::vector<CallSite> callersOf(const MethodSig &callee) const;
  // Site id for an invoke instruction, or -1.
  long siteAt(const MethodSig &caller, int instructionIndex) const;

  // One line per edge: "<caller> @<line> -> <target>", phantoms marked.
  std::string dump() const;

  friend CallGraph buildCallGraph(const Program &program);

private:
  std::vector<CallSite> sites_;
  std::vector<std::vector<MethodSig>> targets_;
  std::map<std::string, std::vector<size_t>> callers_;
  std::map<std::string, std::vector<size_t>> declared_;
  std::map<std::string, size_t> byKey_;

  friend std::vector<CallSite> callSitesOf(const CallGraph &graph,
                                           const MethodSig &target);
};

CallGraph buildCallGraph(const Program &program);

// Resolved call sites of `target`; for phantom targets, the sites that declare
// it as their callee. Ordered by (file, line).
std::vector<CallSite> callSitesOf(const CallGraph &graph,
                                  const MethodSig &target);

// Classes whose superclass is `cls` or that list `cls` among their interfaces.
std::vector<std::string> directSubtypes(const Program &program,
                                        const std::string &cls);

} // namespace cryptoslice

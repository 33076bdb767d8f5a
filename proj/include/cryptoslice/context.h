// Immutable bundle of a program, its call graph and per-method def-use data.
#pragma once

#include "cryptoslice/callgraph.h"
#include "cryptoslice/defuse.h"
#include "cryptoslice/ir.h"

#include <compare>
#include <map>
#include <memory>

namespace cryptoslice {

struct FieldKey {
  std::string cls;
  std::string field;
  auto operator<=>(const FieldKey &) const = default;
  std::string str() const { return cls + "." + field; }
};

struct FieldStore {
  MethodSig method;
  int instructionIndex;
};

class AnalysisContext {
public:
  explicit AnalysisContext(Program program);

  const Program &program() const { return *program_; }
  const CallGraph &callGraph() const { return graph_; }

  const MethodDef *method(const MethodSig &sig) const;
  // Def-use graph of a method with a body; throws for phantom methods.
  const DefUseGraph &defUse(const MethodSig &sig) const;

  // Owning declarations of a field access appearing in `inMethod`.
  std::vector<FieldKey> fieldKeys(const MethodSig &inMethod,
                                  const Value &fieldRef) const;
  std::vector<FieldKey> fieldKeys(const MethodSig &inMethod,
                                  const Cell &fieldCell) const;
  const std::vector<FieldStore> &storesOf(const FieldKey &key) const;

  // Methods with bodies, in class-name then declaration order.
  const std::vector<MethodSig> &bodies() const { return bodies_; }

private:
  FieldKey declaringField(const std::string &cls, const std::string &field) const;

  std::shared_ptr<const Program> program_;
  CallGraph graph_;
  std::vector<MethodSig> bodies_;
  std::map<std::string, std::unique_ptr<DefUseGraph>> defUse_;
  std::map<FieldKey, std::vector<FieldStore>> stores_;
};

} // namespace cryptoslice

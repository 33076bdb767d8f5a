// Per-method reaching definitions and def-use edges over TIR bodies.
#pragma once

#include "cryptoslice/ir.h"

#include <compare>
#include <set>
#include <utility>

namespace cryptoslice {

// A storage location an instruction may define or read.
struct Cell {
  enum class Kind { Local, InstanceField, StaticField };
  Kind kind = Kind::Local;
  // Local name; base local for instance fields; owner class for static fields.
  std::string base;
  std::string field;

  static Cell local(std::string name) { return {Kind::Local, std::move(name), ""}; }
  bool isField() const { return kind != Kind::Local; }
  std::string str() const;
  auto operator<=>(const Cell &) const = default;
};

struct Effects {
  std::vector<Cell> strongDefs; // overwrite the cell
  std::vector<Cell> weakDefs;   // mutate the cell, previous defs still reach
  std::vector<Cell> reads;
};

// What an instruction defines and reads. A target-less invoke with a receiver
// mutates the receiver; an array store mutates the array local.
Effects instructionEffects(const Instruction &ins);

// Index of the pseudo definition standing for values live on method entry.
constexpr int kEntryDef = -1;

class DefUseGraph {
public:
  explicit DefUseGraph(const MethodDef &method);

  size_t size() const { return succ_.size(); }
  const std::vector<int> &successors(int i) const { return succ_[i]; }
  bool reachable(int i) const { return reachable_[i]; }

  // Definitions of `cell` reaching instruction `use`; may contain kEntryDef.
  std::vector<int> reachingDefs(int use, const Cell &cell) const;

  // Sorted unique (def, use) pairs; never contains kEntryDef.
  const std::vector<std::pair<int, int>> &edges() const { return edges_; }
  const std::vector<int> &usesOf(int def) const { return usesOf_[def]; }
  const std::vector<int> &defsOf(int use) const { return defsOf_[use]; }

private:
  std::vector<std::vector<int>> succ_;
  std::vector<bool> reachable_;
  // For each instruction, per read cell, the reaching definitions.
  std::vector<std::vector<std::pair<Cell, std::vector<int>>>> reaching_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> usesOf_;
  std::vector<std::vector<int>> defsOf_;
};

// Throws std::invalid_argument("no body") for phantom methods.
DefUseGraph defUseGraph(const MethodDef &method);

// Control-flow successors of every instruction in a body.
std::vector<std::vector<int>> controlFlow(const std::vector<Instruction> &body);

} // namespace cryptoslice

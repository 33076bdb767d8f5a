#include "cryptoslice/defuse.h"

#include <algorithm>
#include <deque>
#include <map>

namespace cryptoslice {

std::string Cell::str() const {
  if (kind == Kind::Local)
    return base;
  return base + "." + field;
}

namespace {

void readValue(const Value &v, std::vector<Cell> &reads) {
  switch (v.kind) {
  case Value::Kind::Local:
    if (v.text != "this")
      reads.push_back(Cell::local(v.text));
    break;
  case Value::Kind::Field:
    if (v.staticField) {
      reads.push_back({Cell::Kind::StaticField, v.owner, v.text});
    } else {
      if (v.owner != "this")
        reads.push_back(Cell::local(v.owner));
      reads.push_back({Cell::Kind::InstanceField, v.owner, v.text});
    }
    break;
  case Value::Kind::Array:
    readValue(Value::local(v.text), reads);
    readValue(*v.index, reads);
    break;
  default:
    break;
  }
}

} // namespace

Effects instructionEffects(const Instruction &ins) {
  Effects e;
  using K = Instruction::Kind;
  switch (ins.kind) {
  case K::Assign:
    switch (ins.target.kind) {
    case Value::Kind::Local:
      e.strongDefs.push_back(Cell::local(ins.target.text));
      break;
    case Value::Kind::Field:
      if (ins.target.staticField) {
        e.strongDefs.push_back(
            {Cell::Kind::StaticField, ins.target.owner, ins.target.text});
      } else {
        e.strongDefs.push_back(
            {Cell::Kind::InstanceField, ins.target.owner, ins.target.text});
        readValue(Value::local(ins.target.owner), e.reads);
      }
      break;
    case Value::Kind::Array:
      e.weakDefs.push_back(Cell::local(ins.target.text));
      readValue(ins.target, e.reads);
      break;
    default:
      break;
    }
    if (ins.rhs.kind != Expr::Kind::New)
      readValue(ins.rhs.a, e.reads);
    if (ins.rhs.kind == Expr::Kind::Binary)
      readValue(ins.rhs.b, e.reads);
    break;
  case K::Identity:
    e.strongDefs.push_back(Cell::local(ins.target.text));
    break;
  case K::Invoke:
    if (ins.base)
      readValue(Value::local(*ins.base), e.reads);
    for (const auto &a : ins.args)
      readValue(a, e.reads);
    if (ins.assignTarget)
      e.strongDefs.push_back(Cell::local(*ins.assignTarget));
    else if (ins.base && *ins.base != "this")
      e.weakDefs.push_back(Cell::local(*ins.base));
    break;
  case K::NewArray:
    e.strongDefs.push_back(Cell::local(ins.target.text));
    readValue(ins.size, e.reads);
    break;
  case K::Return:
  case K::Throw:
    if (ins.value)
      readValue(*ins.value, e.reads);
    break;
  case K::If:
    readValue(ins.left, e.reads);
    readValue(ins.right, e.reads);
    break;
  case K::Goto:
  case K::Label:
    break;
  }
  auto dedupe = [](std::vector<Cell> &v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  dedupe(e.strongDefs);
  dedupe(e.weakDefs);
  dedupe(e.reads);
  return e;
}

std::vector<std::vector<int>> controlFlow(const std::vector<Instruction> &body) {
  std::map<std::string, int> labels;
  for (size_t i = 0; i < body.size(); ++i)
    if (body[i].kind == Instruction::Kind::Label)
      labels[body[i].label] = static_cast<int>(i);
  std::vector<std::vector<int>> succ(body.size());
  for (size_t i = 0; i < body.size(); ++i) {
    const auto &ins = body[i];
    int next = static_cast<int>(i) + 1;
    switch (ins.kind) {
    case Instruction::Kind::Return:
    case Instruction::Kind::Throw:
      break;
    case Instruction::Kind::Goto:
      succ[i].push_back(labels.at(ins.label));
      break;
    case Instruction::Kind::If:
      if (next < static_cast<int>(body.size()))
        succ[i].push_back(next);
      if (labels.at(ins.label) != next)
        succ[i].push_back(labels.at(ins.label));
      break;
    default:
      if (next < static_cast<int>(body.size()))
        succ[i].push_back(next);
    }
  }
  return succ;
}

DefUseGraph::DefUseGraph(const MethodDef &method) {
  if (!method.body)
    throw std::invalid_argument("no body: " + method.sig.str());
  const auto &body = *method.body;
  const int n = static_cast<int>(body.size());
  succ_ = controlFlow(body);
  reachable_.assign(n, false);
  reaching_.resize(n);
  usesOf_.resize(n);
  defsOf_.resize(n);
  if (n == 0)
    return;

  std::deque<int> q{0};
  reachable_[0] = true;
  while (!q.empty()) {
    int i = q.front();
    q.pop_front();
    for (int s : succ_[i])
      if (!reachable_[s]) {
        reachable_[s] = true;
        q.push_back(s);
      }
  }

  // Number every (instruction, cell) definition site; cells read but never
  // defined get an entry definition.
  std::vector<Effects> eff(n);
  std::map<Cell, int> cellIds;
  auto cellId = [&](const Cell &c) {
    return cellIds.emplace(c, static_cast<int>(cellIds.size())).first->second;
  };
  struct Site {
    int instr;
    int cell;
  };
  std::vector<Site> sites;
  for (int i = 0; i < n; ++i) {
    eff[i] = instructionEffects(body[i]);
    for (const auto &c : eff[i].strongDefs)
      cellId(c);
    for (const auto &c : eff[i].weakDefs)
      cellId(c);
    for (const auto &c : eff[i].reads)
      cellId(c);
  }
  const int cells = static_cast<int>(cellIds.size());
  for (int c = 0; c < cells; ++c)
    sites.push_back({kEntryDef, c});
  std::vector<std::vector<int>> strongSites(n), weakSites(n);
  for (int i = 0; i < n; ++i) {
    for (const auto &c : eff[i].strongDefs) {
      strongSites[i].push_back(static_cast<int>(sites.size()));
      sites.push_back({i, cellIds.at(c)});
    }
    for (const auto &c : eff[i].weakDefs) {
      weakSites[i].push_back(static_cast<int>(sites.size()));
      sites.push_back({i, cellIds.at(c)});
    }
  }
  std::vector<std::vector<int>> sitesOfCell(cells);
  for (size_t s = 0; s < sites.size(); ++s)
    sitesOfCell[sites[s].cell].push_back(static_cast<int>(s));

  const size_t words = (sites.size() + 63) / 64;
  using Bits = std::vector<uint64_t>;
  auto set = [](Bits &b, int s) { b[s / 64] |= uint64_t(1) << (s % 64); };
  auto clr = [](Bits &b, int s) { b[s / 64] &= ~(uint64_t(1) << (s % 64)); };
  auto test = [](const Bits &b, int s) {
    return (b[s / 64] >> (s % 64)) & 1;
  };

  std::vector<Bits> in(n, Bits(words, 0)), out(n, Bits(words, 0));
  for (int c = 0; c < cells; ++c)
    set(in[0], c);
  auto transfer = [&](int i) {
    Bits o = in[i];
    for (int s : strongSites[i])
      for (int other : sitesOfCell[sites[s].cell])
        clr(o, other);
    for (int s : strongSites[i])
      set(o, s);
    for (int s : weakSites[i])
      set(o, s);
    return o;
  };
  std::vector<bool> queued(n, false);
  std::deque<int> work;
  for (int i = 0; i < n; ++i)
    if (reachable_[i]) {
      work.push_back(i);
      queued[i] = true;
    }
  while (!work.empty()) {
    int i = work.front();
    work.pop_front();
    queued[i] = false;
    Bits o = transfer(i);
    if (o == out[i])
      continue;
    out[i] = std::move(o);
    for (int s : succ_[i]) {
      bool changed = false;
      for (size_t w = 0; w < words; ++w) {
        uint64_t merged = in[s][w] | out[i][w];
        if (merged != in[s][w]) {
          in[s][w] = merged;
          changed = true;
        }
      }
      if (changed && !queued[s]) {
        queued[s] = true;
        work.push_back(s);
      }
    }
  }

  for (int u = 0; u < n; ++u) {
    if (!reachable_[u])
      continue;
    for (const auto &c : eff[u].reads) {
      std::vector<int> defs;
      for (int s : sitesOfCell[cellIds.at(c)])
        if (test(in[u], s))
          defs.push_back(sites[s].instr);
      std::sort(defs.begin(), defs.end());
      defs.erase(std::unique(defs.begin(), defs.end()), defs.end());
      for (int d : defs)
        if (d != kEntryDef)
          edges_.emplace_back(d, u);
      reaching_[u].emplace_back(c, std::move(defs));
    }
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (auto [d, u] : edges_) {
    usesOf_[d].push_back(u);
    defsOf_[u].push_back(d);
  }
}

std::vector<int> DefUseGraph::reachingDefs(int use, const Cell &cell) const {
  for (const auto &[c, defs] : reaching_[use])
    if (c == cell)
      return defs;
  return {};
}

DefUseGraph defUseGraph(const MethodDef &method) { return DefUseGraph(method); }

} // namespace cryptoslice

#include "cryptoslice/slicer.h"

#include <algorithm>
#include <deque>
#include <sstream>

namespace cryptoslice {

namespace {

std::string lower(std::string s) {
  for (auto &ch : s)
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

bool accessorShaped(const Instruction &ins, const char *prefix) {
  const std::string &n = ins.callee.name;
  return ins.kind == Instruction::Kind::Invoke && ins.base &&
         *ins.base != "this" && n.size() > 3 && n.compare(0, 3, prefix) == 0;
}

bool setterShaped(const Instruction &ins) {
  return accessorShaped(ins, "set") && !ins.assignTarget && ins.args.size() == 1;
}

bool getterShaped(const Instruction &ins) {
  return accessorShaped(ins, "get") && ins.assignTarget && ins.args.empty();
}

const std::set<std::string> kCollectionOwners = {
    "java.util.List",          "java.util.ArrayList",    "java.util.LinkedList",
    "java.util.Vector",        "java.util.AbstractList", "java.util.Collection",
    "java.util.Set",           "java.util.HashSet",      "java.util.LinkedHashSet",
    "java.util.TreeSet",       "java.util.Map",          "java.util.HashMap",
    "java.util.LinkedHashMap", "java.util.TreeMap",      "java.util.Hashtable",
    "java.util.ArrayDeque",    "java.util.Stack"};

const std::set<std::string> kCollectionIndexMethods = {
    "get",  "set",    "add",     "remove",       "subList",
    "listIterator", "<init>", "ensureCapacity", "elementAt", "insertElementAt"};

} // namespace

std::vector<std::string> SliceOptions::defaultPredictableSources() {
  return {"java.lang.System.currentTimeMillis", "java.lang.System.nanoTime",
          "android.telephony.TelephonyManager.getDeviceId",
          "java.util.Date.getTime", "java.time.Instant.toEpochMilli"};
}

bool isCollectionIndexArg(const MethodSig &callee, size_t argIndex) {
  if (!kCollectionOwners.count(callee.owner) ||
      !kCollectionIndexMethods.count(callee.name))
    return false;
  return argIndex < callee.paramTypes.size() &&
         callee.paramTypes[argIndex] == "int";
}

std::set<int> SliceResult::influencingParams() const {
  std::set<int> out;
  for (const auto &[p, ctxs] : paramContexts)
    out.insert(p);
  return out;
}

std::string describeContext(const FlowContext &c) {
  std::vector<std::string> parts;
  if (c.invokeKind)
    parts.push_back(invokeKindName(*c.invokeKind));
  if (c.inAssignment)
    parts.push_back("assign");
  if (c.viaArrayIndex)
    parts.push_back("array-index");
  if (c.viaArraySize)
    parts.push_back("array-size");
  if (c.viaCollectionIndex)
    parts.push_back("collection-index");
  if (c.viaArrayElement)
    parts.push_back("array-element");
  if (c.setter)
    parts.push_back("setter=" + c.setter->object + ".set" + c.setter->property +
                    "@" + std::to_string(c.setter->instructionIndex));
  std::string s;
  for (size_t i = 0; i < parts.size(); ++i)
    s += (i ? "," : "") + parts[i];
  return s.empty() ? "direct" : s;
}

std::string ConstantCandidate::key() const {
  return site.method.str() + "#" + std::to_string(site.instructionIndex) + "#" +
         std::to_string(site.slot) + "#" + describeContext(context);
}

SlicingCriterion SlicingCriterion::interParam(const CallSite &site,
                                              std::set<int> params) {
  SlicingCriterion c;
  c.mode = CriterionMode::InterParam;
  c.callSite = site;
  c.method = site.caller;
  c.instructionIndex = site.instructionIndex;
  c.paramIndices = std::move(params);
  return c;
}

SlicingCriterion SlicingCriterion::intraParam(const MethodSig &m, int index,
                                              std::set<int> params) {
  SlicingCriterion c;
  c.mode = CriterionMode::IntraParam;
  c.method = m;
  c.instructionIndex = index;
  c.paramIndices = std::move(params);
  return c;
}

SlicingCriterion SlicingCriterion::intraReturn(const MethodSig &m, int index) {
  SlicingCriterion c;
  c.mode = CriterionMode::IntraReturn;
  c.method = m;
  c.instructionIndex = index;
  return c;
}

SlicingCriterion SlicingCriterion::intraThrow(const MethodSig &m, int index) {
  SlicingCriterion c = intraReturn(m, index);
  c.mode = CriterionMode::IntraThrow;
  return c;
}

SlicingCriterion SlicingCriterion::intraAssign(const MethodSig &m, int index) {
  SlicingCriterion c;
  c.mode = CriterionMode::IntraAssign;
  c.method = m;
  c.instructionIndex = index;
  return c;
}

const MethodSig &SlicingCriterion::host() const {
  return mode == CriterionMode::InterParam ? callSite->caller : method;
}

namespace {

class IntraSlicer {
public:
  IntraSlicer(const AnalysisContext &ax, const SliceOptions &opts, int depth)
      : ax_(ax), opts_(opts), depth_(depth) {}

  SliceResult run(const MethodSig &sig, const SlicingCriterion &crit) {
    begin(sig);
    const auto &body = *m_->body;
    auto checkIndex = [&](int i) {
      if (i < 0 || i >= static_cast<int>(body.size()))
        throw std::invalid_argument("criterion instruction out of range");
    };
    switch (crit.mode) {
    case CriterionMode::InterParam:
    case CriterionMode::IntraParam: {
      checkIndex(crit.instructionIndex);
      const Instruction &ins = body[crit.instructionIndex];
      if (ins.kind != Instruction::Kind::Invoke)
        throw std::invalid_argument("criterion is not an invoke");
      for (int p : crit.paramIndices)
        if (p >= 0 && p < static_cast<int>(ins.args.size()))
          traceValue(crit.instructionIndex, p, ins.args[p], crit.seed);
      break;
    }
    case CriterionMode::IntraReturn:
    case CriterionMode::IntraThrow: {
      auto want = crit.mode == CriterionMode::IntraReturn
                      ? Instruction::Kind::Return
                      : Instruction::Kind::Throw;
      if (crit.instructionIndex >= 0) {
        checkIndex(crit.instructionIndex);
        if (body[crit.instructionIndex].kind != want)
          throw std::invalid_argument("criterion instruction has wrong kind");
      }
      for (int i = 0; i < static_cast<int>(body.size()); ++i)
        if (body[i].kind == want && du_->reachable(i) && body[i].value &&
            (crit.instructionIndex < 0 || crit.instructionIndex == i))
          traceValue(i, kSlotRhs, *body[i].value, crit.seed);
      break;
    }
    case CriterionMode::IntraAssign:
      checkIndex(crit.instructionIndex);
      instrs_.insert(crit.instructionIndex);
      traceReads(crit.instructionIndex, crit.seed);
      break;
    }
    return finish();
  }

  SliceResult runOrthogonal(const MethodSig &sig, bool viaReturn,
                            const FlowContext &seed) {
    begin(sig);
    const auto &body = *m_->body;
    for (int i = 0; i < static_cast<int>(body.size()); ++i) {
      const Instruction &ins = body[i];
      if (!du_->reachable(i))
        continue;
      if (viaReturn && ins.kind == Instruction::Kind::Return && ins.value)
        traceValue(i, kSlotRhs, *ins.value, seed);
      if (!viaReturn && ins.kind == Instruction::Kind::Assign &&
          ins.target.kind == Value::Kind::Field)
        traceReads(i, seed);
    }
    return finish();
  }

private:
  void begin(const MethodSig &sig) {
    m_ = ax_.method(sig);
    if (!m_ || !m_->body)
      throw std::invalid_argument("criterion host has no body: " + sig.str());
    du_ = &ax_.defUse(sig);
  }

  SliceResult finish() {
    drain();
    for (int i : instrs_)
      out_.instructions.push_back({m_->sig, i});
    for (auto &r : nested_)
      if (std::find(out_.instructions.begin(), out_.instructions.end(), r) ==
          out_.instructions.end())
        out_.instructions.push_back(r);
    return std::move(out_);
  }

  void drain() {
    while (!work_.empty()) {
      auto [d, c] = work_.front();
      work_.pop_front();
      processDef(d, c);
    }
  }

  const Instruction &at(int i) const { return (*m_->body)[i]; }

  CandidateSite site(int u, int slot) const {
    return {m_->sig, u, slot, at(u).line};
  }

  void addConstant(int u, int slot, const Value &v, const FlowContext &c) {
    ConstantCandidate cc{v, site(u, slot), c};
    if (constKeys_.insert(cc.key()).second)
      out_.constants.push_back(std::move(cc));
  }

  void enqueue(int d, const FlowContext &c) {
    if (seen_.emplace(d, c).second)
      work_.emplace_back(d, c);
  }

  void traceCell(int u, const Cell &cell, const FlowContext &c) {
    for (int d : du_->reachingDefs(u, cell)) {
      if (d != kEntryDef) {
        enqueue(d, c);
        continue;
      }
      if (cell.isField())
        for (const auto &k : ax_.fieldKeys(m_->sig, cell))
          out_.usedFields[k].insert(c);
    }
  }

  void traceLocal(int u, const std::string &name, const FlowContext &c) {
    if (name != "this")
      traceCell(u, Cell::local(name), c);
  }

  void traceValue(int u, int slot, const Value &v, const FlowContext &c) {
    switch (v.kind) {
    case Value::Kind::Local:
      traceLocal(u, v.text, c);
      return;
    case Value::Kind::Field:
      if (v.staticField) {
        traceCell(u, {Cell::Kind::StaticField, v.owner, v.text}, c);
      } else {
        traceLocal(u, v.owner, c);
        traceCell(u, {Cell::Kind::InstanceField, v.owner, v.text}, c);
      }
      return;
    case Value::Kind::Array: {
      traceLocal(u, v.text, c);
      FlowContext ci = c;
      ci.viaArrayIndex = true;
      traceValue(u, kSlotIndex, *v.index, ci);
      return;
    }
    default:
      addConstant(u, slot, v, c);
    }
  }

  // Traces every operand an instruction reads, treating a criterion invoke as
  // a plain use of its receiver and arguments.
  void traceReads(int u, const FlowContext &c) {
    const Instruction &ins = at(u);
    switch (ins.kind) {
    case Instruction::Kind::Invoke:
      if (ins.base)
        traceLocal(u, *ins.base, c);
      for (size_t k = 0; k < ins.args.size(); ++k)
        traceValue(u, static_cast<int>(k), ins.args[k], c);
      return;
    case Instruction::Kind::Return:
    case Instruction::Kind::Throw:
      if (ins.value)
        traceValue(u, kSlotRhs, *ins.value, c);
      return;
    case Instruction::Kind::If:
      traceValue(u, kSlotRhs, ins.left, c);
      traceValue(u, kSlotRight, ins.right, c);
      return;
    case Instruction::Kind::Identity:
      out_.paramContexts[ins.paramIndex].insert(c);
      return;
    default:
      traceAssignOperands(u, c);
    }
  }

  void traceAssignOperands(int d, const FlowContext &c) {
    const Instruction &ins = at(d);
    if (ins.kind == Instruction::Kind::NewArray) {
      FlowContext cs = c;
      cs.viaArraySize = true;
      traceValue(d, kSlotSize, ins.size, cs);
      return;
    }
    if (ins.kind != Instruction::Kind::Assign)
      return;
    FlowContext rc = c;
    if (ins.target.kind == Value::Kind::Array) {
      rc.viaArrayElement = true;
      FlowContext ci = c;
      ci.viaArrayIndex = true;
      traceValue(d, kSlotIndex, *ins.target.index, ci);
      traceLocal(d, ins.target.text, c);
    } else if (ins.target.kind == Value::Kind::Field && !ins.target.staticField) {
      traceLocal(d, ins.target.owner, c);
    }
    switch (ins.rhs.kind) {
    case Expr::Kind::Value:
      traceValue(d, kSlotRhs, ins.rhs.a, rc);
      break;
    case Expr::Kind::Binary:
      traceValue(d, kSlotRhs, ins.rhs.a, rc);
      traceValue(d, kSlotRight, ins.rhs.b, rc);
      break;
    case Expr::Kind::New:
      break;
    }
  }

  void processDef(int d, const FlowContext &c) {
    instrs_.insert(d);
    const Instruction &ins = at(d);
    switch (ins.kind) {
    case Instruction::Kind::Identity:
      out_.paramContexts[ins.paramIndex].insert(c);
      return;
    case Instruction::Kind::Invoke:
      processInvoke(d, c);
      return;
    default:
      traceAssignOperands(d, c);
    }
  }

  FlowContext withSetter(FlowContext c, const Instruction &ins, int d) const {
    if (!c.setter && setterShaped(ins))
      c.setter = SetterSite{m_->sig.str(), d, *ins.base,
                            lower(ins.callee.name.substr(3))};
    return c;
  }

  bool predictable(const MethodSig &callee) const {
    std::string q = callee.owner + "." + callee.name;
    return std::find(opts_.predictableSources.begin(),
                     opts_.predictableSources.end(),
                     q) != opts_.predictableSources.end();
  }

  void processInvoke(int d, const FlowContext &c) {
    const Instruction &ins = at(d);
    if (predictable(ins.callee)) {
      out_.predictableCalls.push_back({site(d, kSlotRhs), ins.callee, c});
      return;
    }
    if (getterShaped(ins))
      out_.getters.push_back(
          {m_->sig, d, *ins.base, lower(ins.callee.name.substr(3))});

    const CallGraph &g = ax_.callGraph();
    long sid = g.siteAt(m_->sig, d);
    std::vector<MethodSig> explore;
    if (depth_ > 0 && sid >= 0)
      for (const auto &t : g.resolvedTargets(sid)) {
        const MethodDef *tm = ax_.method(t);
        if (tm && tm->body)
          explore.push_back(t);
      }

    bool mutatesBase = !ins.assignTarget && ins.base && *ins.base != "this";
    if (!explore.empty()) {
      for (const auto &t : explore) {
        IntraSlicer sub(ax_, opts_, depth_ - 1);
        SliceResult r = sub.runOrthogonal(t, ins.assignTarget.has_value(), c);
        absorb(r);
        for (const auto &[p, ctxs] : r.paramContexts)
          if (p < static_cast<int>(ins.args.size()))
            for (const auto &pc : ctxs)
              traceValue(d, p, ins.args[p], withSetter(pc, ins, d));
      }
      if (mutatesBase)
        traceLocal(d, *ins.base, c);
      return;
    }

    if (sid >= 0)
      out_.clippedSites.push_back(g.sites()[sid]);
    for (size_t k = 0; k < ins.args.size(); ++k) {
      FlowContext ck = c;
      if (!ck.invokeKind) {
        ck.invokeKind = ins.invokeKind;
        ck.inAssignment = ins.assignTarget.has_value();
      }
      if (isCollectionIndexArg(ins.callee, k))
        ck.viaCollectionIndex = true;
      traceValue(d, static_cast<int>(k), ins.args[k], withSetter(ck, ins, d));
    }
    if (ins.base)
      traceLocal(d, *ins.base, c);
  }

  void absorb(SliceResult &r) {
    for (auto &i : r.instructions)
      nested_.push_back(i);
    for (auto &cc : r.constants)
      if (constKeys_.insert(cc.key()).second)
        out_.constants.push_back(cc);
    for (auto &p : r.predictableCalls)
      out_.predictableCalls.push_back(p);
    for (auto &s : r.clippedSites)
      out_.clippedSites.push_back(s);
    for (auto &gc : r.getters)
      out_.getters.push_back(gc);
    for (auto &[k, ctxs] : r.usedFields)
      out_.usedFields[k].insert(ctxs.begin(), ctxs.end());
  }

  const AnalysisContext &ax_;
  const SliceOptions &opts_;
  int depth_;
  const MethodDef *m_ = nullptr;
  const DefUseGraph *du_ = nullptr;
  SliceResult out_;
  std::set<std::pair<int, FlowContext>> seen_;
  std::deque<std::pair<int, FlowContext>> work_;
  std::set<std::string> constKeys_;
  std::set<int> instrs_;
  std::vector<InstrRef> nested_;
};

void appendUnique(SliceResult &into, const SliceResult &seg,
                  std::set<std::string> &constKeys) {
  for (const auto &i : seg.instructions)
    into.instructions.push_back(i);
  for (const auto &c : seg.constants)
    if (constKeys.insert(c.key()).second)
      into.constants.push_back(c);
  for (const auto &p : seg.predictableCalls)
    into.predictableCalls.push_back(p);
  for (const auto &s : seg.clippedSites)
    into.clippedSites.push_back(s);
  for (const auto &g : seg.getters)
    into.getters.push_back(g);
  for (const auto &[k, ctxs] : seg.usedFields)
    into.usedFields[k].insert(ctxs.begin(), ctxs.end());
}

class InterSlicer {
public:
  InterSlicer(const AnalysisContext &ax, int depth, const SliceOptions &opts,
              InterStats *stats)
      : ax_(ax), depth_(depth), opts_(opts), stats_(stats ? *stats : local_) {}

  std::vector<SliceResult> run(const SlicingCriterion &crit) {
    if (crit.mode != CriterionMode::InterParam || !crit.callSite)
      throw std::invalid_argument("inter-procedural slicing needs an interParam criterion");
    if (crit.paramIndices.empty())
      throw std::invalid_argument("interParam criterion without parameters");
    visited_.insert(memoKey(*crit.callSite, crit.paramIndices, crit.seed));
    ++stats_.visits;
    expand(crit.callSite->caller,
           intraBackwardSlice(ax_, crit.callSite->caller, crit, depth_, opts_), {});
    return std::move(chains_);
  }

private:
  static std::string memoKey(const CallSite &cs, const std::set<int> &params,
                             const FlowContext &c) {
    std::string k = cs.key() + "|";
    for (int p : params)
      k += std::to_string(p) + ",";
    return k + "|" + describeContext(c);
  }

  void expand(const MethodSig &m, SliceResult seg, std::vector<size_t> chain) {
    segments_.push_back(std::move(seg));
    size_t id = segments_.size() - 1;
    chain.push_back(id);
    bool extended = false;

    // Copy: recursion appends to segments_.
    auto usedFields = segments_[id].usedFields;
    for (const auto &[field, ctxs] : usedFields) {
      for (const auto &c : ctxs) {
        if (!fieldsSeen_.insert({field, c}).second)
          continue;
        for (const auto &store : ax_.storesOf(field)) {
          SlicingCriterion fc =
              SlicingCriterion::intraAssign(store.method, store.instructionIndex);
          fc.seed = c;
          ++stats_.fieldSlices;
          expand(store.method,
                 intraBackwardSlice(ax_, store.method, fc, depth_, opts_), chain);
          extended = true;
        }
      }
    }

    std::map<FlowContext, std::set<int>> byContext;
    for (const auto &[p, ctxs] : segments_[id].paramContexts)
      for (const auto &c : ctxs)
        byContext[c].insert(p);
    for (const auto &[c, params] : byContext) {
      for (const auto &cs : ax_.callGraph().callersOf(m)) {
        if (!visited_.insert(memoKey(cs, params, c)).second) {
          ++stats_.blocked;
          continue;
        }
        ++stats_.visits;
        SlicingCriterion next = SlicingCriterion::interParam(cs, params);
        next.seed = c;
        expand(cs.caller, intraBackwardSlice(ax_, cs.caller, next, depth_, opts_),
               chain);
        extended = true;
      }
    }
    if (!extended)
      chains_.push_back(stitch(chain));
  }

  SliceResult stitch(const std::vector<size_t> &chain) const {
    SliceResult r;
    std::set<std::string> keys;
    for (size_t id : chain)
      appendUnique(r, segments_[id], keys);
    r.paramContexts = segments_[chain.back()].paramContexts;
    return r;
  }

  const AnalysisContext &ax_;
  int depth_;
  const SliceOptions &opts_;
  InterStats local_;
  InterStats &stats_;
  std::set<std::string> visited_;
  std::set<std::pair<FieldKey, FlowContext>> fieldsSeen_;
  std::deque<SliceResult> segments_;
  std::vector<SliceResult> chains_;
};

} // namespace

SliceResult intraBackwardSlice(const AnalysisContext &ctx, const MethodSig &method,
                               const SlicingCriterion &criterion, int orthogonalDepth,
                               const SliceOptions &options) {
  if (criterion.host() != method)
    throw std::invalid_argument("criterion method mismatch");
  if (orthogonalDepth < 0)
    throw std::invalid_argument("negative orthogonal depth");
  IntraSlicer s(ctx, options, orthogonalDepth);
  return s.run(method, criterion);
}

std::vector<SliceResult> interBackwardSlices(const AnalysisContext &ctx,
                                             const SlicingCriterion &criterion,
                                             int orthogonalDepth, InterStats *stats,
                                             const SliceOptions &options) {
  InterSlicer s(ctx, orthogonalDepth, options, stats);
  return s.run(criterion);
}

std::vector<std::pair<MethodSig, SliceResult>>
fieldInitSlices(const AnalysisContext &ctx, const FieldKey &field,
                int orthogonalDepth, const SliceOptions &options) {
  std::vector<std::pair<MethodSig, SliceResult>> out;
  for (const auto &store : ctx.storesOf(field)) {
    auto crit = SlicingCriterion::intraAssign(store.method, store.instructionIndex);
    out.emplace_back(store.method, intraBackwardSlice(ctx, store.method, crit,
                                                      orthogonalDepth, options));
  }
  return out;
}

std::vector<ConstantCandidate> mergedConstants(const std::vector<SliceResult> &slices) {
  std::vector<ConstantCandidate> out;
  std::set<std::string> keys;
  for (const auto &s : slices)
    for (const auto &c : s.constants)
      if (keys.insert(c.key()).second)
        out.push_back(c);
  return out;
}

std::vector<PredictableCall> mergedPredictables(const std::vector<SliceResult> &slices) {
  std::vector<PredictableCall> out;
  std::set<std::string> keys;
  for (const auto &s : slices)
    for (const auto &p : s.predictableCalls) {
      std::string k = p.site.method.str() + "#" +
                      std::to_string(p.site.instructionIndex) + "#" +
                      describeContext(p.context);
      if (keys.insert(k).second)
        out.push_back(p);
    }
  return out;
}

std::string dumpSlices(const AnalysisContext &ctx,
                       const std::vector<SliceResult> &slices) {
  std::ostringstream os;
  for (size_t n = 0; n < slices.size(); ++n) {
    const SliceResult &s = slices[n];
    os << "chain " << n << ":\n";
    for (const auto &r : s.instructions) {
      const MethodDef *m = ctx.method(r.method);
      const Instruction &ins = (*m->body)[r.index];
      os << "  " << r.method.str() << " [" << r.index << "] line " << ins.line
         << ": " << renderInstruction(ins) << "\n";
    }
    for (const auto &c : s.constants)
      os << "  const " << renderValue(c.value) << " at " << c.site.method.str()
         << " line " << c.site.line << " [" << describeContext(c.context)
         << "]\n";
    for (const auto &p : s.predictableCalls)
      os << "  predictable " << p.callee.str() << " line " << p.site.line
         << "\n";
    for (const auto &c : s.clippedSites)
      os << "  clipped " << c.callee.str() << " line " << c.line << "\n";
  }
  return os.str();
}

} // namespace cryptoslice

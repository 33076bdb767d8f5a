// Backward program slicing: intra-procedural worklist slicing with clipped
// orthogonal exploration, and the inter-procedural caller-chain recursion.
#pragma once

#include "cryptoslice/context.h"

#include <compare>
#include <optional>
#include <set>

namespace cryptoslice {

// A setter-shaped call (`obj.setX(v)`, no result) the value flowed into.
struct SetterSite {
  std::string method; // enclosing method signature
  int instructionIndex = -1;
  std::string object;
  std::string property; // lower-cased X
  auto operator<=>(const SetterSite &) const = default;
};

// How a value reaches the criterion. The invoke fields describe the first
// clipped argument boundary crossed on the way back from the criterion.
struct FlowContext {
  std::optional<InvokeKind> invokeKind;
  bool inAssignment = false;
  bool viaArrayIndex = false;
  bool viaArraySize = false;
  bool viaCollectionIndex = false;
  bool viaArrayElement = false;
  std::optional<SetterSite> setter;
  auto operator<=>(const FlowContext &) const = default;
};

// Operand slots of a candidate site; argument positions are >= 0.
enum Slot : int { kSlotRhs = -1, kSlotIndex = -2, kSlotSize = -3, kSlotRight = -4 };

struct CandidateSite {
  MethodSig method;
  int instructionIndex = -1;
  int slot = kSlotRhs;
  int line = 0;
};

struct ConstantCandidate {
  Value value;
  CandidateSite site;
  FlowContext context;

  // Identity of the candidate: site plus context.
  std::string key() const;
};

struct PredictableCall {
  CandidateSite site;
  MethodSig callee;
  FlowContext context;
};

struct GetterCall {
  MethodSig method;
  int instructionIndex = -1;
  std::string object;
  std::string property;
};

struct InstrRef {
  MethodSig method;
  int index = -1;
  bool operator==(const InstrRef &o) const {
    return index == o.index && method == o.method;
  }
};

struct SliceResult {
  std::vector<InstrRef> instructions;
  std::map<int, std::set<FlowContext>> paramContexts;
  std::map<FieldKey, std::set<FlowContext>> usedFields;
  std::vector<ConstantCandidate> constants;
  std::vector<PredictableCall> predictableCalls;
  std::vector<CallSite> clippedSites;
  std::vector<GetterCall> getters;

  std::set<int> influencingParams() const;
};

enum class CriterionMode { InterParam, IntraReturn, IntraThrow, IntraAssign, IntraParam };

struct SlicingCriterion {
  CriterionMode mode = CriterionMode::IntraReturn;
  std::optional<CallSite> callSite;
  std::set<int> paramIndices;
  MethodSig method;
  // IntraAssign/IntraParam: the instruction. IntraReturn/IntraThrow: one
  // specific return/throw, or -1 for all reachable ones.
  int instructionIndex = -1;
  // Context inherited by everything this slice captures.
  FlowContext seed;

  static SlicingCriterion interParam(const CallSite &site, std::set<int> params);
  static SlicingCriterion intraParam(const MethodSig &m, int index,
                                     std::set<int> params);
  static SlicingCriterion intraReturn(const MethodSig &m, int index = -1);
  static SlicingCriterion intraThrow(const MethodSig &m, int index = -1);
  static SlicingCriterion intraAssign(const MethodSig &m, int index);
  // Host method the criterion is evaluated in.
  const MethodSig &host() const;
};

struct SliceOptions {
  // "owner.method" names whose results are predictable.
  std::vector<std::string> predictableSources = defaultPredictableSources();

  static std::vector<std::string> defaultPredictableSources();
};

bool isCollectionIndexArg(const MethodSig &callee, size_t argIndex);

SliceResult intraBackwardSlice(const AnalysisContext &ctx, const MethodSig &method,
                               const SlicingCriterion &criterion, int orthogonalDepth,
                               const SliceOptions &options = {});

struct InterStats {
  size_t visits = 0;     // caller-chain steps actually sliced
  size_t blocked = 0;    // steps skipped by the criteria map
  size_t fieldSlices = 0;
};

// One stitched result per maximal chain, callee segments first.
std::vector<SliceResult> interBackwardSlices(const AnalysisContext &ctx,
                                             const SlicingCriterion &criterion,
                                             int orthogonalDepth,
                                             InterStats *stats = nullptr,
                                             const SliceOptions &options = {});

std::vector<std::pair<MethodSig, SliceResult>>
fieldInitSlices(const AnalysisContext &ctx, const FieldKey &field,
                int orthogonalDepth, const SliceOptions &options = {});

// Constants of all chains, one entry per (site, context).
std::vector<ConstantCandidate> mergedConstants(const std::vector<SliceResult> &slices);
std::vector<PredictableCall> mergedPredictables(const std::vector<SliceResult> &slices);

std::string describeContext(const FlowContext &c);
std::string dumpSlices(const AnalysisContext &ctx, const std::vector<SliceResult> &slices);

} // namespace cryptoslice

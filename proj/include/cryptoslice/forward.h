// Intra-procedural forward slicing and the setter/getter filter for constants
// stored into data-only objects.
#pragma once

#include "cryptoslice/slicer.h"

namespace cryptoslice {

struct ForwardSlice {
  InstrRef origin;
  // Instructions reading a value transitively defined by the origin, in body
  // order. The origin itself is not listed.
  std::vector<InstrRef> influenced;

  bool contains(int index) const;
};

// Throws std::invalid_argument when the origin is out of range or defines
// nothing.
ForwardSlice intraForwardSlice(const AnalysisContext &ctx, const MethodSig &method,
                               int originIndex);

// Setter-captured constants grouped by the object they were stored into.
struct DataOnlyBinding {
  std::string method;
  std::string objectLocal;
  std::string cls; // "?" when the allocation is not visible
  std::set<std::string> taintedFields;
};

std::vector<DataOnlyBinding> dataOnlyBindings(const AnalysisContext &ctx,
                                              const std::vector<SliceResult> &slices);

// True (keep) unless the constant entered the slice only through a setter
// whose matching getter on the same object never feeds the criterion.
bool trackDataOnlyConstant(const std::vector<SliceResult> &slices,
                           const ConstantCandidate &constant);

} // namespace cryptoslice

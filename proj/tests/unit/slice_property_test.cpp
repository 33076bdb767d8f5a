// Slices and def-use edges of random programs against the brute-force oracle.
#include "random_program.h"
#include "slice_oracle.h"

#include "cryptoslice/forward.h"

#include <doctest.h>

using namespace cryptoslice;
using cryptoslice::testing::randomProgramText;
using cryptoslice::testing::SliceOracle;

namespace {

std::set<int> indicesIn(const std::vector<InstrRef> &refs, const MethodSig &m) {
  std::set<int> out;
  for (const auto &r : refs) {
    REQUIRE(r.method == m);
    out.insert(r.index);
  }
  return out;
}

} // namespace

TEST_CASE("random programs: def-use edges, backward and forward slices match the oracle") {
  size_t returns = 0, assigns = 0, forwards = 0;
  for (uint32_t seed = 0; seed < 100; ++seed) {
    std::string text = randomProgramText(seed);
    CAPTURE(seed);
    CAPTURE(text);
    AnalysisContext ctx(parseProgram(text, "fuzz.tir"));
    for (const MethodSig &sig : ctx.bodies()) {
      const MethodDef &m = *ctx.method(sig);
      SliceOracle oracle(m);
      const DefUseGraph &g = ctx.defUse(sig);
      std::set<std::pair<int, int>> edges(g.edges().begin(), g.edges().end());
      CHECK(edges == oracle.edges());

      const auto &body = *m.body;
      for (int i = 0; i < static_cast<int>(body.size()); ++i) {
        if (!oracle.reachable(i))
          continue;
        CAPTURE(sig.str());
        CAPTURE(i);
        const Instruction &ins = body[i];
        if (ins.kind == Instruction::Kind::Return && ins.value) {
          auto s = intraBackwardSlice(ctx, sig, SlicingCriterion::intraReturn(sig, i), 0);
          CHECK(indicesIn(s.instructions, sig) == oracle.backwardFromReads(i));
          ++returns;
        }
        if (ins.kind == Instruction::Kind::Assign) {
          auto s = intraBackwardSlice(ctx, sig, SlicingCriterion::intraAssign(sig, i), 0);
          auto expected = oracle.backwardFromReads(i);
          expected.insert(i);
          CHECK(indicesIn(s.instructions, sig) == expected);
          ++assigns;
        }
        if (oracle.definesSomething(i)) {
          auto f = intraForwardSlice(ctx, sig, i);
          CHECK(indicesIn(f.influenced, sig) == oracle.forward(i));
          ++forwards;
        }
      }
    }
  }
  // The generator must keep exercising every comparison.
  CHECK(returns > 100);
  CHECK(assigns > 300);
  CHECK(forwards > 500);
}

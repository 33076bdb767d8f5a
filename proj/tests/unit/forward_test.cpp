#include "helpers.h"
#include "random_program.h"

#include "cryptoslice/forward.h"

#include <doctest.h>

using namespace cryptoslice;
using cryptoslice::testing::analyzeText;

namespace {

const char *kSocket = R"(class DriverSocket {
  field WebSocketClient webSocketClient
  method void open() {
    r0 = staticinvoke <javax.net.ssl.SSLContext: javax.net.ssl.SSLContext getInstance(java.lang.String)>("TLS")
    r1 = r0.<javax.net.ssl.SSLContext: javax.net.ssl.SSLSocketFactory getSocketFactory()>()
    r2 = r1.<javax.net.ssl.SSLSocketFactory: java.net.Socket createSocket()>()
    r3 = this.webSocketClient
    r3.<WebSocketClient: void setSocket(java.net.Socket)>(r2)
    r3.<WebSocketClient: void connect()>()
    i0 = 4
    return
  }
}
)";

const char *kDataOnly = R"(class KeyHolderUser {
  method void build() {
    r1 = new KeyHolder
    specialinvoke r1.<KeyHolder: void <init>()>()
    r2 = new KeyHolder
    specialinvoke r2.<KeyHolder: void <init>()>()
    r1.<KeyHolder: void setText(java.lang.String)>("mytext")
    r1.<KeyHolder: void setKey(java.lang.String)>("mykey")
    r2.<KeyHolder: void setKey(java.lang.String)>("otherkey")
    key = r1.<KeyHolder: java.lang.String getKey()>()
    b = key.<java.lang.String: byte[] getBytes()>()
    k = new javax.crypto.spec.SecretKeySpec
    specialinvoke k.<javax.crypto.spec.SecretKeySpec: void <init>(byte[],java.lang.String)>(b, "AES")
    return
  }
  method void lonely() {
    r1 = new KeyHolder
    specialinvoke r1.<KeyHolder: void <init>()>()
    r1.<KeyHolder: void setKey(java.lang.String)>("lonely")
    s = r1.<KeyHolder: java.lang.String toString()>()
    b = s.<java.lang.String: byte[] getBytes()>()
    k = new javax.crypto.spec.SecretKeySpec
    specialinvoke k.<javax.crypto.spec.SecretKeySpec: void <init>(byte[],java.lang.String)>(b, "AES")
    return
  }
}
)";

const MethodSig kOpen = parseMethodSig("<DriverSocket: void open()>");

std::set<int> influencedLines(const AnalysisContext &ctx, const ForwardSlice &f) {
  std::set<int> out;
  for (const auto &r : f.influenced)
    out.insert((*ctx.method(r.method)->body)[r.index].line);
  return out;
}

} // namespace

TEST_CASE("socket factory influences the socket and client invokes") {
  AnalysisContext ctx(parseProgram(kSocket));
  auto f = intraForwardSlice(ctx, kOpen, 1);
  CHECK(influencedLines(ctx, f) == std::set<int>{6, 8, 9});
  CHECK(f.contains(2));
  CHECK_FALSE(f.contains(1));
}

TEST_CASE("an unread definition influences nothing") {
  AnalysisContext ctx(parseProgram(kSocket));
  CHECK(intraForwardSlice(ctx, kOpen, 6).influenced.empty());
}

TEST_CASE("forward slicing rejects bad origins") {
  AnalysisContext ctx(parseProgram(kSocket));
  CHECK_THROWS_AS(intraForwardSlice(ctx, kOpen, 99), std::invalid_argument);
  CHECK_THROWS_AS(intraForwardSlice(ctx, kOpen, 7), std::invalid_argument);
}

TEST_CASE("forward and backward slices are dual") {
  using cryptoslice::testing::randomProgramText;
  size_t pairs = 0;
  for (uint32_t seed = 100; seed < 160; ++seed) {
    AnalysisContext ctx(parseProgram(randomProgramText(seed)));
    for (const MethodSig &sig : ctx.bodies()) {
      const auto &body = *ctx.method(sig)->body;
      const DefUseGraph &g = ctx.defUse(sig);
      for (int u = 0; u < static_cast<int>(body.size()); ++u) {
        if (body[u].kind != Instruction::Kind::Assign || !g.reachable(u))
          continue;
        auto back = intraBackwardSlice(ctx, sig, SlicingCriterion::intraAssign(sig, u), 0);
        std::set<int> defs;
        for (const auto &r : back.instructions)
          defs.insert(r.index);
        for (int d = 0; d < static_cast<int>(body.size()); ++d) {
          if (d == u || !g.reachable(d))
            continue;
          bool defines = !instructionEffects(body[d]).strongDefs.empty() ||
                         !instructionEffects(body[d]).weakDefs.empty();
          if (!defines)
            continue;
          CAPTURE(seed);
          CAPTURE(d);
          CAPTURE(u);
          CHECK(intraForwardSlice(ctx, sig, d).contains(u) == (defs.count(d) == 1));
          ++pairs;
        }
      }
    }
  }
  CHECK(pairs > 1000);
}

TEST_CASE("data-only holder: only the getter's field reaches the key") {
  Report r = analyzeText(kDataOnly);
  std::vector<std::string> evidence;
  for (const auto &f : r.findings)
    evidence.push_back(f.evidence);
  CHECK(evidence == std::vector<std::string>{"mykey"});

  RunConfig raw;
  raw.refine = false;
  Report unfiltered = analyzeText(kDataOnly, raw);
  std::set<std::string> all;
  for (const auto &f : unfiltered.findings)
    all.insert(f.evidence);
  CHECK(all.count("mykey"));
  CHECK_FALSE(all.count("otherkey"));
}

TEST_CASE("trackDataOnlyConstant decisions") {
  AnalysisContext ctx(parseProgram(kDataOnly));
  auto sites = callSitesOf(ctx.callGraph(), parseMethodSig(
      "<javax.crypto.spec.SecretKeySpec: void <init>(byte[],java.lang.String)>"));
  REQUIRE(sites.size() == 2);
  std::map<std::string, bool> decision;
  for (const auto &site : sites) {
    auto chains = interBackwardSlices(ctx, SlicingCriterion::interParam(site, {0}), 1);
    for (const auto &c : mergedConstants(chains))
      if (c.context.setter)
        decision[c.value.constantText()] = trackDataOnlyConstant(chains, c);
  }
  CHECK(decision == std::map<std::string, bool>{{"lonely", false}, {"mykey", true}, {"mytext", false}});
}

TEST_CASE("data-only bindings record tainted fields per object") {
  AnalysisContext ctx(parseProgram(kDataOnly));
  auto sites = callSitesOf(ctx.callGraph(), parseMethodSig(
      "<javax.crypto.spec.SecretKeySpec: void <init>(byte[],java.lang.String)>"));
  auto chains = interBackwardSlices(ctx, SlicingCriterion::interParam(sites[0], {0}), 1);
  auto bindings = dataOnlyBindings(ctx, chains);
  REQUIRE(bindings.size() == 1);
  CHECK(bindings[0].objectLocal == "r1");
  CHECK(bindings[0].cls == "KeyHolder");
  CHECK(bindings[0].taintedFields == std::set<std::string>{"key", "text"});
}

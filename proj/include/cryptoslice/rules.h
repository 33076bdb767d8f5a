// Rule registry and the checkers that turn slices into findings.
#pragma once

#include "cryptoslice/forward.h"
#include "cryptoslice/refine.h"

#include <array>
#include <functional>

namespace cryptoslice {

enum class Severity { H, M, L };
const char *severityName(Severity s);
std::optional<Severity> parseSeverity(const std::string &s);
// H < M < L in report order; `atLeast(s, t)` is true when s is as severe as t.
bool atLeast(Severity s, Severity threshold);

enum class AnalysisPlan {
  InterBackward,
  InterBackwardDataOnly,
  IntraBackward,
  IntraForward,
  Search,
  Combination
};
const char *analysisPlanName(AnalysisPlan p);

struct CriterionSpec {
  std::string row; // e.g. "1.1"
  MethodSig api;
  // Parameter of interest, or -1 for structural criteria (return, throw, ...).
  int paramIndex = -1;
  std::string structural;
  ValueKind kind = ValueKind::StringLike;
};

struct RuleSpec {
  int id = 0;
  std::string title;
  Severity severity = Severity::H;
  AnalysisPlan plan = AnalysisPlan::InterBackward;
  std::vector<CriterionSpec> criteria;
  std::vector<std::string> insecureNames;
  std::vector<int> thresholds;
};

const std::vector<RuleSpec> &ruleRegistry();
const RuleSpec &ruleSpec(int id);
std::string dumpRules();

struct Finding {
  int ruleId = 0;
  Severity severity = Severity::H;
  std::string file;
  std::string cls;
  std::string method;
  int line = 0;
  std::string evidence;
  std::optional<std::string> rootSubproject;

  // Orders by rule, file, line, class, method, evidence.
  bool operator<(const Finding &o) const;
  bool operator==(const Finding &o) const;
};

struct CheckOptions {
  int depth = 1;
  bool refine = true;
  bool checkClientTrusted = false;
  int minRsaBits = 2048;
  int minEcBits = 224;
  SliceOptions slice;
  // Polled between criteria; returning true abandons the rule by throwing
  // BudgetExpired.
  std::function<bool()> expired;
};

struct BudgetExpired {};

struct CheckStats {
  size_t candidates = 0; // constants and predictable calls before refinement
  std::array<size_t, kRiCount> removedByRi{};
  InterStats inter;
  void add(const CheckStats &o);
};

std::vector<Finding> checkPredictableSecrets(const AnalysisContext &ctx, int ruleId,
                                             const CheckOptions &opts, CheckStats &stats);
std::vector<Finding> checkHostnameVerifier(const AnalysisContext &ctx);
std::vector<Finding> checkTrustManager(const AnalysisContext &ctx, const CheckOptions &opts);
std::vector<Finding> checkSslSocket(const AnalysisContext &ctx);
std::vector<Finding> checkHttp(const AnalysisContext &ctx, const CheckOptions &opts,
                               CheckStats &stats);
std::vector<Finding> checkSeeds(const AnalysisContext &ctx, const CheckOptions &opts,
                                CheckStats &stats);
std::vector<Finding> checkUntrustedPrng(const AnalysisContext &ctx);
std::vector<Finding> checkStaticSalt(const AnalysisContext &ctx, const CheckOptions &opts,
                                     CheckStats &stats);
std::vector<Finding> checkStaticIv(const AnalysisContext &ctx, const CheckOptions &opts,
                                   CheckStats &stats);
std::vector<Finding> checkEcb(const AnalysisContext &ctx, const CheckOptions &opts,
                              CheckStats &stats);
std::vector<Finding> checkPbeIterations(const AnalysisContext &ctx, const CheckOptions &opts,
                                        CheckStats &stats);
std::vector<Finding> checkBrokenSymmetric(const AnalysisContext &ctx,
                                          const CheckOptions &opts, CheckStats &stats);
std::vector<Finding> checkBrokenHash(const AnalysisContext &ctx, const CheckOptions &opts,
                                     CheckStats &stats);
std::vector<Finding> checkAsymKeySize(const AnalysisContext &ctx, const CheckOptions &opts,
                                      CheckStats &stats);

// Dispatches to the checker of `ruleId`; findings are sorted and unique.
std::vector<Finding> runRule(int ruleId, const AnalysisContext &ctx,
                             const CheckOptions &opts, CheckStats *stats = nullptr);

// Upper-cased algorithm token before the first '/'.
std::string algorithmToken(const std::string &transformation);

} // namespace cryptoslice

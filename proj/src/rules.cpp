#include "cryptoslice/rules.h"

#include <algorithm>
#include <deque>
#include <sstream>

namespace cryptoslice {

const char *severityName(Severity s) {
  switch (s) {
  case Severity::H:
    return "H";
  case Severity::M:
    return "M";
  case Severity::L:
    return "L";
  }
  return "?";
}

std::optional<Severity> parseSeverity(const std::string &s) {
  if (s == "H" || s == "h")
    return Severity::H;
  if (s == "M" || s == "m")
    return Severity::M;
  if (s == "L" || s == "l")
    return Severity::L;
  return std::nullopt;
}

bool atLeast(Severity s, Severity threshold) {
  return static_cast<int>(s) <= static_cast<int>(threshold);
}

const char *analysisPlanName(AnalysisPlan p) {
  switch (p) {
  case AnalysisPlan::InterBackward:
    return "interBackward";
  case AnalysisPlan::InterBackwardDataOnly:
    return "interBackward+dataOnlyForward";
  case AnalysisPlan::IntraBackward:
    return "intraBackward";
  case AnalysisPlan::IntraForward:
    return "intraForward";
  case AnalysisPlan::Search:
    return "search";
  case AnalysisPlan::Combination:
    return "combination";
  }
  return "?";
}

bool Finding::operator<(const Finding &o) const {
  return std::tie(ruleId, file, line, cls, method, evidence, rootSubproject) <
         std::tie(o.ruleId, o.file, o.line, o.cls, o.method, o.evidence,
                  o.rootSubproject);
}

bool Finding::operator==(const Finding &o) const {
  return std::tie(ruleId, file, line, cls, method, evidence, rootSubproject) ==
         std::tie(o.ruleId, o.file, o.line, o.cls, o.method, o.evidence,
                  o.rootSubproject);
}

void CheckStats::add(const CheckStats &o) {
  candidates += o.candidates;
  for (int i = 0; i < kRiCount; ++i)
    removedByRi[i] += o.removedByRi[i];
  inter.visits += o.inter.visits;
  inter.blocked += o.inter.blocked;
  inter.fieldSlices += o.inter.fieldSlices;
}

namespace {

const char *const kString = "java.lang.String";
const char *const kSpec = "java.security.spec.AlgorithmParameterSpec";

MethodSig sig(const std::string &owner, const std::string &ret, const std::string &name,
              std::vector<std::string> params) {
  return MethodSig{owner, ret, name, std::move(params)};
}

CriterionSpec param(const std::string &row, MethodSig api, int index, ValueKind kind) {
  CriterionSpec c;
  c.row = row;
  c.api = std::move(api);
  c.paramIndex = index;
  c.kind = kind;
  return c;
}

CriterionSpec structural(const std::string &row, MethodSig api, const std::string &what) {
  CriterionSpec c;
  c.row = row;
  c.api = std::move(api);
  c.structural = what;
  return c;
}

std::vector<RuleSpec> buildRegistry() {
  using VK = ValueKind;
  const std::string keySpec = "javax.crypto.spec.SecretKeySpec";
  const std::string pbeKey = "javax.crypto.spec.PBEKeySpec";
  const std::string pbeParam = "javax.crypto.spec.PBEParameterSpec";
  const std::string keyStore = "java.security.KeyStore";
  const std::string url = "java.net.URL";
  const std::string rnd = "java.security.SecureRandom";
  const std::string cipher = "javax.crypto.Cipher";
  const std::string iv = "javax.crypto.spec.IvParameterSpec";
  const std::string kpg = "java.security.KeyPairGenerator";
  const std::string md = "java.security.MessageDigest";
  const std::string x509 = "java.security.cert.X509Certificate[]";

  std::vector<RuleSpec> r(16);
  auto rule = [&](int id, std::string title, Severity sev, AnalysisPlan plan) -> RuleSpec & {
    RuleSpec &s = r[id - 1];
    s.id = id;
    s.title = std::move(title);
    s.severity = sev;
    s.plan = plan;
    return s;
  };
  using P = AnalysisPlan;
  using S = Severity;

  rule(1, "Predictable Cryptographic Key", S::H, P::InterBackwardDataOnly).criteria = {
      param("1.1", sig(keySpec, "void", "<init>", {"byte[]", kString}), 0, VK::ByteArrayLike),
      param("1.2", sig(keySpec, "void", "<init>", {"byte[]", "int", "int", kString}), 0,
            VK::ByteArrayLike)};
  rule(2, "Predictable Password for PBE", S::H, P::InterBackwardDataOnly).criteria = {
      param("2.1", sig(pbeKey, "void", "<init>", {"char[]"}), 0, VK::CharArrayLike),
      param("2.2", sig(pbeKey, "void", "<init>", {"char[]", "byte[]", "int", "int"}), 0,
            VK::CharArrayLike),
      param("2.3", sig(pbeKey, "void", "<init>", {"char[]", "byte[]", "int"}), 0,
            VK::CharArrayLike)};
  rule(3, "Predictable Password for KeyStore", S::H, P::InterBackwardDataOnly).criteria = {
      param("3.1", sig(keyStore, "void", "load", {"java.io.InputStream", "char[]"}), 1,
            VK::CharArrayLike),
      param("3.2", sig(keyStore, "void", "store", {"java.io.OutputStream", "char[]"}), 1,
            VK::CharArrayLike),
      param("3.3",
            sig(keyStore, "void", "setKeyEntry",
                {kString, "java.security.Key", "char[]", "java.security.cert.Certificate[]"}),
            2, VK::CharArrayLike),
      param("3.4", sig(keyStore, "java.security.Key", "getKey", {kString, "char[]"}), 1,
            VK::CharArrayLike)};
  rule(4, "Dummy Hostname Verifier", S::H, P::IntraBackward).criteria = {
      structural("4.1",
                 sig("javax.net.ssl.HostnameVerifier", "boolean", "verify",
                     {kString, "javax.net.ssl.SSLSession"}),
                 "return")};
  rule(5, "Dummy Cert. Validation", S::H, P::IntraBackward).criteria = {
      structural("5.1",
                 sig("javax.net.ssl.X509TrustManager", "void", "checkServerTrusted",
                     {x509, kString}),
                 "checkValidity()"),
      structural("5.2",
                 sig("javax.net.ssl.X509TrustManager", "void", "checkServerTrusted",
                     {x509, kString}),
                 "throw"),
      structural("5.3", sig("javax.net.ssl.X509TrustManager", x509, "getAcceptedIssuers", {}),
                 "return")};
  rule(6, "Used Improper Socket", S::H, P::IntraForward).criteria = {
      structural("6.1",
                 sig("javax.net.ssl.SSLSocketFactory", "javax.net.SocketFactory", "getDefault",
                     {}),
                 "assignment"),
      structural("6.2",
                 sig("javax.net.ssl.SSLContext", "javax.net.ssl.SSLSocketFactory",
                     "getSocketFactory", {}),
                 "assignment")};
  rule(7, "Use of HTTP", S::H, P::InterBackward).criteria = {
      param("7.1", sig(url, "void", "<init>", {kString}), 0, VK::UrlLike),
      param("7.2", sig(url, "void", "<init>", {kString, kString, kString}), 0, VK::UrlLike),
      param("7.3", sig(url, "void", "<init>", {kString, kString, "int", kString}), 0,
            VK::UrlLike),
      param("7.4", sig("okhttp3.Request$Builder", "okhttp3.Request$Builder", "url", {kString}),
            0, VK::UrlLike),
      param("7.5",
            sig("retrofit2.Retrofit$Builder", "retrofit2.Retrofit$Builder", "baseUrl",
                {kString}),
            0, VK::UrlLike)};
  rule(8, "Predictable Seed", S::M, P::InterBackwardDataOnly).criteria = {
      param("8.1", sig(rnd, "void", "<init>", {"byte[]"}), 0, VK::ByteArrayLike),
      param("8.2", sig(rnd, "void", "setSeed", {"byte[]"}), 0, VK::ByteArrayLike),
      param("8.3", sig(rnd, "void", "setSeed", {"long"}), 0, VK::IntLike)};
  rule(9, "Untrusted PRNG", S::M, P::Search).criteria = {
      structural("9.1", sig("java.util.Random", "void", "<init>", {}), "instantiation")};
  rule(10, "Static Salt", S::M, P::InterBackwardDataOnly).criteria = {
      param("10.1", sig(pbeParam, "void", "<init>", {"byte[]", "int"}), 0, VK::ByteArrayLike),
      param("10.2", sig(pbeParam, "void", "<init>", {"byte[]", "int", kSpec}), 0,
            VK::ByteArrayLike),
      param("10.3", sig(pbeKey, "void", "<init>", {"char[]", "byte[]", "int", "int"}), 1,
            VK::ByteArrayLike),
      param("10.4", sig(pbeKey, "void", "<init>", {"char[]", "byte[]", "int"}), 1,
            VK::ByteArrayLike)};
  std::vector<CriterionSpec> cipherRows = {
      param("11.1", sig(cipher, cipher, "getInstance", {kString}), 0, VK::StringLike),
      param("11.2", sig(cipher, cipher, "getInstance", {kString, kString}), 0, VK::StringLike),
      param("11.3", sig(cipher, cipher, "getInstance", {kString, "java.security.Provider"}), 0,
            VK::StringLike)};
  RuleSpec &ecb = rule(11, "ECB in Symm. Crypto", S::M, P::InterBackward);
  ecb.criteria = cipherRows;
  ecb.insecureNames = {"AES",      "DES",  "DESede", "3DES", "TripleDES", "Blowfish", "IDEA",
                       "RC2",      "RC5",  "Camellia", "SEED", "Twofish", "ARIA"};
  rule(12, "Static IV", S::M, P::InterBackwardDataOnly).criteria = {
      param("12.1", sig(iv, "void", "<init>", {"byte[]"}), 0, VK::ByteArrayLike),
      param("12.2", sig(iv, "void", "<init>", {"byte[]", "int", "int"}), 0,
            VK::ByteArrayLike)};
  RuleSpec &iter = rule(13, "<1000 PBE Iteration", S::L, P::InterBackwardDataOnly);
  iter.criteria = {
      param("13.1", sig(pbeParam, "void", "<init>", {"byte[]", "int"}), 1, VK::IntLike),
      param("13.2", sig(pbeParam, "void", "<init>", {"byte[]", "int", kSpec}), 1, VK::IntLike),
      param("13.3", sig(pbeKey, "void", "<init>", {"char[]", "byte[]", "int", "int"}), 2,
            VK::IntLike),
      param("13.4", sig(pbeKey, "void", "<init>", {"char[]", "byte[]", "int"}), 2,
            VK::IntLike)};
  iter.thresholds = {1000};
  RuleSpec &sym = rule(14, "Broken Symm. Crypto", S::L, P::InterBackward);
  sym.criteria = cipherRows;
  sym.insecureNames = {"DES", "DESede", "3DES", "IDEA", "Blowfish", "RC4", "RC2"};
  RuleSpec &asym = rule(15, "Insecure Asymm. Crypto", S::L, P::Combination);
  asym.criteria = {
      param("15.1", sig(kpg, kpg, "getInstance", {kString}), 0, VK::StringLike),
      param("15.2", sig(kpg, kpg, "getInstance", {kString, kString}), 0, VK::StringLike),
      param("15.3", sig(kpg, kpg, "getInstance", {kString, "java.security.Provider"}), 0,
            VK::StringLike),
      param("15.4", sig(kpg, "void", "initialize", {"int"}), 0, VK::IntLike),
      param("15.5", sig(kpg, "void", "initialize", {"int", rnd}), 0, VK::IntLike),
      param("15.6", sig(kpg, "void", "initialize", {kSpec}), 0, VK::IntLike),
      param("15.7", sig(kpg, "void", "initialize", {kSpec, rnd}), 0, VK::IntLike)};
  asym.thresholds = {2048, 224};
  RuleSpec &hash = rule(16, "Broken Hash", S::H, P::InterBackward);
  hash.criteria = {
      param("16.1", sig(md, md, "getInstance", {kString}), 0, VK::StringLike),
      param("16.2", sig(md, md, "getInstance", {kString, kString}), 0, VK::StringLike),
      param("16.3", sig(md, md, "getInstance", {kString, "java.security.Provider"}), 0,
            VK::StringLike)};
  hash.insecureNames = {"MD2", "MD4", "MD5", "SHA-1", "SHA1"};
  return r;
}

} // namespace

const std::vector<RuleSpec> &ruleRegistry() {
  static const std::vector<RuleSpec> registry = buildRegistry();
  return registry;
}

const RuleSpec &ruleSpec(int id) {
  if (id < 1 || id > 16)
    throw std::out_of_range("no rule " + std::to_string(id));
  return ruleRegistry()[id - 1];
}

std::string dumpRules() {
  std::ostringstream os;
  for (const auto &r : ruleRegistry()) {
    os << r.id << "\t" << severityName(r.severity) << "\t" << r.title << "\t"
       << analysisPlanName(r.plan) << "\n";
    for (const auto &c : r.criteria) {
      os << "\t" << c.row << "\t" << c.api.str() << "\t";
      if (c.paramIndex >= 0)
        os << "param " << c.paramIndex << " (" << valueKindName(c.kind) << ")";
      else
        os << c.structural;
      os << "\n";
    }
  }
  return os.str();
}

std::string algorithmToken(const std::string &transformation) {
  std::string t = transformation.substr(0, transformation.find('/'));
  for (auto &ch : t)
    ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return t;
}

namespace {

void poll(const CheckOptions &opts) {
  if (opts.expired && opts.expired())
    throw BudgetExpired{};
}

std::string upper(std::string s) {
  for (auto &ch : s)
    ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

std::string lower(std::string s) {
  for (auto &ch : s)
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

bool inNames(const std::vector<std::string> &names, const std::string &token) {
  return std::any_of(names.begin(), names.end(),
                     [&](const std::string &n) { return upper(n) == token; });
}

Finding locate(const AnalysisContext &ctx, int rule, const MethodSig &m, int line,
               std::string evidence) {
  Finding f;
  f.ruleId = rule;
  f.severity = ruleSpec(rule).severity;
  const ClassDef *c = ctx.program().findClass(m.owner);
  f.file = c ? c->file : "";
  f.cls = m.owner;
  f.method = m.subSignature();
  f.line = line;
  f.evidence = std::move(evidence);
  return f;
}

struct Survivors {
  std::vector<ConstantCandidate> constants;
  std::vector<PredictableCall> predictables;
};

Survivors survivors(const AnalysisContext &ctx, const CallSite &site, int paramIndex,
                    const CriterionSpec &crit, int ruleId, bool dataOnly,
                    const CheckOptions &opts, CheckStats &stats) {
  InterStats inter;
  auto chains = interBackwardSlices(
      ctx, SlicingCriterion::interParam(site, {paramIndex}), opts.depth, &inter, opts.slice);
  stats.inter.visits += inter.visits;
  stats.inter.blocked += inter.blocked;
  stats.inter.fieldSlices += inter.fieldSlices;

  Survivors s;
  auto constants = mergedConstants(chains);
  s.predictables = mergedPredictables(chains);
  stats.candidates += constants.size() + s.predictables.size();
  if (dataOnly)
    for (const auto &c : constants)
      if (trackDataOnlyConstant(chains, c))
        s.constants.push_back(c);
  if (!dataOnly)
    s.constants = std::move(constants);
  if (opts.refine) {
    Refined r = applyRefinements(s.constants, RefinementContext::forRule(ruleId, crit.kind));
    s.predictables = refinePredictables(s.predictables, r.log);
    auto n = r.log.counts();
    for (int i = 0; i < kRiCount; ++i)
      stats.removedByRi[i] += n[i];
    s.constants = std::move(r.kept);
  }
  return s;
}

// Runs the backward pipeline for every call site of every parameter
// criterion of the rule and hands each survivor set to `accept`.
template <typename Accept>
void forEachCriterion(const AnalysisContext &ctx, int ruleId, const CheckOptions &opts,
                      CheckStats &stats, Accept accept) {
  const RuleSpec &spec = ruleSpec(ruleId);
  bool dataOnly = spec.plan == AnalysisPlan::InterBackwardDataOnly;
  for (const auto &crit : spec.criteria) {
    if (crit.paramIndex < 0)
      continue;
    for (const auto &site : callSitesOf(ctx.callGraph(), crit.api)) {
      poll(opts);
      accept(site, crit,
             survivors(ctx, site, crit.paramIndex, crit, ruleId, dataOnly, opts, stats));
    }
  }
}

std::string predictableEvidence(const PredictableCall &p) {
  return p.callee.owner + "." + p.callee.name + "()";
}

std::vector<Finding> constantFindings(const AnalysisContext &ctx, int ruleId,
                                      const CheckOptions &opts, CheckStats &stats,
                                      bool withPredictables,
                                      const std::function<bool(const Value &)> &flag) {
  std::vector<Finding> out;
  forEachCriterion(ctx, ruleId, opts, stats,
                   [&](const CallSite &, const CriterionSpec &, const Survivors &s) {
                     for (const auto &c : s.constants)
                       if (flag(c.value))
                         out.push_back(locate(ctx, ruleId, c.site.method, c.site.line,
                                              c.value.constantText()));
                     if (withPredictables)
                       for (const auto &p : s.predictables)
                         out.push_back(locate(ctx, ruleId, p.site.method, p.site.line,
                                              predictableEvidence(p)));
                   });
  return out;
}

// Names of the class, its in-program superclasses and all interfaces they
// declare, transitively.
std::set<std::string> supertypes(const Program &p, const ClassDef &c) {
  std::set<std::string> seen;
  std::deque<std::string> work{c.name};
  while (!work.empty()) {
    std::string n = work.front();
    work.pop_front();
    if (!seen.insert(n).second)
      continue;
    const ClassDef *d = p.findClass(n);
    if (!d)
      continue;
    if (d->superclass)
      work.push_back(*d->superclass);
    for (const auto &i : d->interfaces)
      work.push_back(i);
  }
  return seen;
}

bool isA(const Program &p, const ClassDef &c, const std::vector<std::string> &types) {
  auto s = supertypes(p, c);
  return std::any_of(types.begin(), types.end(),
                     [&](const std::string &t) { return s.count(t) > 0; });
}

template <typename Fn> void forEachDefinedMethod(const AnalysisContext &ctx, Fn fn) {
  for (const auto &sig : ctx.bodies()) {
    const ClassDef *c = ctx.program().findClass(sig.owner);
    fn(*c, *ctx.method(sig));
  }
}

int firstLine(const MethodDef &m) {
  for (const auto &ins : *m.body)
    if (ins.kind != Instruction::Kind::Label)
      return ins.line;
  return m.line;
}

bool isCertificateException(const Program &p, const std::string &cls) {
  std::set<std::string> seen;
  std::string cur = cls;
  while (seen.insert(cur).second) {
    const std::string suffix = "CertificateException";
    if (cur.size() >= suffix.size() &&
        cur.compare(cur.size() - suffix.size(), suffix.size(), suffix) == 0)
      return true;
    const ClassDef *c = p.findClass(cur);
    if (!c || !c->superclass)
      return false;
    cur = *c->superclass;
  }
  return false;
}

} // namespace

std::vector<Finding> checkPredictableSecrets(const AnalysisContext &ctx, int ruleId,
                                             const CheckOptions &opts, CheckStats &stats) {
  return constantFindings(ctx, ruleId, opts, stats, true,
                          [](const Value &) { return true; });
}

std::vector<Finding> checkHostnameVerifier(const AnalysisContext &ctx) {
  std::vector<Finding> out;
  const std::string sub = "verify(java.lang.String,javax.net.ssl.SSLSession)";
  for (const auto &[name, c] : ctx.program().classes) {
    if (c.isPhantom || !isA(ctx.program(), c, {"javax.net.ssl.HostnameVerifier"}))
      continue;
    const MethodDef *m = c.findMethod(sub);
    if (!m || !m->body)
      continue;
    const DefUseGraph &du = ctx.defUse(m->sig);
    for (int i = 0; i < static_cast<int>(m->body->size()); ++i) {
      if ((*m->body)[i].kind != Instruction::Kind::Return || !du.reachable(i))
        continue;
      auto slice = intraBackwardSlice(ctx, m->sig, SlicingCriterion::intraReturn(m->sig, i), 1);
      if (!slice.influencingParams().count(1)) {
        out.push_back(locate(ctx, 4, m->sig, (*m->body)[i].line,
                             "verify result does not depend on the session"));
        break;
      }
    }
  }
  return out;
}

std::vector<Finding> checkTrustManager(const AnalysisContext &ctx, const CheckOptions &opts) {
  std::vector<Finding> out;
  const Program &p = ctx.program();
  const std::string chainArgs = "(java.security.cert.X509Certificate[],java.lang.String)";
  std::vector<std::string> checks = {"checkServerTrusted" + chainArgs};
  if (opts.checkClientTrusted)
    checks.push_back("checkClientTrusted" + chainArgs);

  for (const auto &[name, c] : p.classes) {
    if (c.isPhantom ||
        !isA(p, c,
             {"javax.net.ssl.X509TrustManager", "javax.net.ssl.TrustManager",
              "javax.net.ssl.X509ExtendedTrustManager"}))
      continue;
    struct Failure {
      std::string id;
      const MethodDef *m;
      int line;
    };
    std::vector<Failure> fails;

    for (const auto &sub : checks) {
      const MethodDef *m = c.findMethod(sub);
      if (!m || !m->body)
        continue;
      const auto &body = *m->body;
      const DefUseGraph &du = ctx.defUse(m->sig);
      auto fromChain = [&](int i) {
        auto s = intraBackwardSlice(ctx, m->sig,
                                    SlicingCriterion::intraAssign(m->sig, i), opts.depth);
        return s.influencingParams().count(0) > 0;
      };
      int validityLine = 0;
      bool verified = false;
      bool throwsCert = false;
      for (int i = 0; i < static_cast<int>(body.size()); ++i) {
        const Instruction &ins = body[i];
        if (!du.reachable(i))
          continue;
        if (ins.kind == Instruction::Kind::Invoke && ins.base) {
          const std::string &n = ins.callee.name;
          if (n == "checkValidity" && !validityLine && fromChain(i))
            validityLine = ins.line;
          if (n == "verify" && fromChain(i))
            verified = true;
          // Delegating to another trust manager keeps its exceptions.
          if ((n == "checkServerTrusted" || n == "checkClientTrusted") &&
              *ins.base != "this")
            throwsCert = true;
        }
        if (ins.kind == Instruction::Kind::Throw && !throwsCert) {
          auto s = intraBackwardSlice(ctx, m->sig,
                                      SlicingCriterion::intraThrow(m->sig, i), opts.depth);
          for (const auto &r : s.instructions) {
            const Instruction &d = (*ctx.method(r.method)->body)[r.index];
            if (d.kind == Instruction::Kind::Assign && d.rhs.kind == Expr::Kind::New &&
                isCertificateException(p, d.rhs.type))
              throwsCert = true;
          }
        }
      }
      if (validityLine && !verified)
        fails.push_back({"5.1", m, validityLine});
      if (!throwsCert)
        fails.push_back({"5.2", m, firstLine(*m)});
    }

    const MethodDef *issuers =
        c.findMethod("getAcceptedIssuers()");
    if (issuers && issuers->body) {
      const DefUseGraph &du = ctx.defUse(issuers->sig);
      const auto &body = *issuers->body;
      for (int i = 0; i < static_cast<int>(body.size()); ++i) {
        if (body[i].kind != Instruction::Kind::Return || !du.reachable(i))
          continue;
        auto s = intraBackwardSlice(ctx, issuers->sig,
                                    SlicingCriterion::intraReturn(issuers->sig, i), opts.depth);
        bool empty = std::any_of(s.constants.begin(), s.constants.end(),
                                 [](const ConstantCandidate &k) {
                                   return k.value.kind == Value::Kind::Null ||
                                          (k.site.slot == kSlotSize &&
                                           k.value.kind == Value::Kind::Int && k.value.num == 0);
                                 });
        if (empty) {
          fails.push_back({"5.3", issuers, body[i].line});
          break;
        }
      }
    }
    if (fails.empty())
      continue;
    std::stable_sort(fails.begin(), fails.end(),
                     [](const Failure &a, const Failure &b) { return a.id < b.id; });
    std::string evidence;
    for (const auto &f : fails)
      if (evidence.find(f.id) == std::string::npos)
        evidence += (evidence.empty() ? "" : ",") + f.id;
    out.push_back(locate(ctx, 5, fails.front().m->sig, fails.front().line, evidence));
  }
  return out;
}

std::vector<Finding> checkSslSocket(const AnalysisContext &ctx) {
  std::vector<Finding> out;
  const RuleSpec &spec = ruleSpec(6);
  forEachDefinedMethod(ctx, [&](const ClassDef &c, const MethodDef &m) {
    if (c.superclass && *c.superclass == "javax.net.ssl.SSLSocketFactory")
      return;
    const auto &body = *m.body;
    for (int i = 0; i < static_cast<int>(body.size()); ++i) {
      const Instruction &ins = body[i];
      if (ins.kind != Instruction::Kind::Invoke || !ins.assignTarget)
        continue;
      bool origin = std::any_of(spec.criteria.begin(), spec.criteria.end(),
                                [&](const CriterionSpec &k) { return k.api == ins.callee; });
      if (!origin)
        continue;
      ForwardSlice fs = intraForwardSlice(ctx, m.sig, i);
      int createLine = 0;
      bool session = false;
      std::set<std::string> verifyResults;
      for (const auto &r : fs.influenced) {
        const Instruction &u = body[r.index];
        if (u.kind != Instruction::Kind::Invoke)
          continue;
        if (u.callee.name == "createSocket" && !createLine)
          createLine = u.line;
        if (u.callee.name == "getSession")
          session = true;
        if (u.callee.name == "verify" && u.assignTarget)
          verifyResults.insert(*u.assignTarget);
      }
      if (!createLine)
        continue;
      bool branches = false;
      for (const auto &r : fs.influenced) {
        const Instruction &u = body[r.index];
        if (u.kind == Instruction::Kind::If &&
            ((u.left.isLocal() && verifyResults.count(u.left.text)) ||
             (u.right.isLocal() && verifyResults.count(u.right.text))))
          branches = true;
      }
      if (!(session && branches))
        out.push_back(
            locate(ctx, 6, m.sig, createLine, "socket created without hostname verification"));
    }
  });
  return out;
}

std::vector<Finding> checkHttp(const AnalysisContext &ctx, const CheckOptions &opts,
                               CheckStats &stats) {
  return constantFindings(ctx, 7, opts, stats, false, [](const Value &v) {
    return v.kind == Value::Kind::String && lower(v.text).rfind("http://", 0) == 0;
  });
}

std::vector<Finding> checkSeeds(const AnalysisContext &ctx, const CheckOptions &opts,
                                CheckStats &stats) {
  return constantFindings(ctx, 8, opts, stats, true, [](const Value &) { return true; });
}

std::vector<Finding> checkUntrustedPrng(const AnalysisContext &ctx) {
  std::vector<Finding> out;
  forEachDefinedMethod(ctx, [&](const ClassDef &, const MethodDef &m) {
    for (const auto &ins : *m.body)
      if (ins.kind == Instruction::Kind::Invoke && ins.callee.owner == "java.util.Random" &&
          ins.callee.name == "<init>")
        out.push_back(locate(ctx, 9, m.sig, ins.line, "java.util.Random"));
  });
  return out;
}

std::vector<Finding> checkStaticSalt(const AnalysisContext &ctx, const CheckOptions &opts,
                                     CheckStats &stats) {
  return constantFindings(ctx, 10, opts, stats, false, [](const Value &) { return true; });
}

std::vector<Finding> checkStaticIv(const AnalysisContext &ctx, const CheckOptions &opts,
                                   CheckStats &stats) {
  return constantFindings(ctx, 12, opts, stats, false, [](const Value &) { return true; });
}

std::vector<Finding> checkEcb(const AnalysisContext &ctx, const CheckOptions &opts,
                              CheckStats &stats) {
  const auto &blockCiphers = ruleSpec(11).insecureNames;
  return constantFindings(ctx, 11, opts, stats, false, [&](const Value &v) {
    if (v.kind != Value::Kind::String || !inNames(blockCiphers, algorithmToken(v.text)))
      return false;
    size_t slash = v.text.find('/');
    if (slash == std::string::npos)
      return true;
    std::string mode = v.text.substr(slash + 1, v.text.find('/', slash + 1) - slash - 1);
    return upper(mode) == "ECB";
  });
}

std::vector<Finding> checkPbeIterations(const AnalysisContext &ctx, const CheckOptions &opts,
                                        CheckStats &stats) {
  int limit = ruleSpec(13).thresholds.front();
  return constantFindings(ctx, 13, opts, stats, false, [&](const Value &v) {
    return (v.kind == Value::Kind::Int || v.kind == Value::Kind::Long) && v.num < limit;
  });
}

std::vector<Finding> checkBrokenSymmetric(const AnalysisContext &ctx,
                                          const CheckOptions &opts, CheckStats &stats) {
  const auto &names = ruleSpec(14).insecureNames;
  return constantFindings(ctx, 14, opts, stats, false, [&](const Value &v) {
    return v.kind == Value::Kind::String && inNames(names, algorithmToken(v.text));
  });
}

std::vector<Finding> checkBrokenHash(const AnalysisContext &ctx, const CheckOptions &opts,
                                     CheckStats &stats) {
  const auto &names = ruleSpec(16).insecureNames;
  return constantFindings(ctx, 16, opts, stats, false, [&](const Value &v) {
    return v.kind == Value::Kind::String && inNames(names, algorithmToken(v.text));
  });
}

std::vector<Finding> checkAsymKeySize(const AnalysisContext &ctx, const CheckOptions &opts,
                                      CheckStats &stats) {
  std::vector<Finding> out;
  const RuleSpec &spec = ruleSpec(15);
  auto isCriterion = [&](const MethodSig &callee, bool generator) {
    for (const auto &k : spec.criteria)
      if (k.api == callee && (k.api.name == "getInstance") == generator)
        return &k;
    return static_cast<const CriterionSpec *>(nullptr);
  };
  const CallGraph &g = ctx.callGraph();
  for (const auto &site : g.sites()) {
    const CriterionSpec *gen = isCriterion(site.callee, true);
    if (!gen)
      continue;
    const MethodDef *m = ctx.method(site.caller);
    const Instruction &ins = (*m->body)[site.instructionIndex];
    if (!ins.assignTarget)
      continue;
    poll(opts);
    std::set<std::string> algorithms;
    Survivors alg = survivors(ctx, site, 0, *gen, 15, true, opts, stats);
    for (const auto &c : alg.constants)
      if (c.value.kind == Value::Kind::String)
        algorithms.insert(algorithmToken(c.value.text));

    ForwardSlice fs = intraForwardSlice(ctx, site.caller, site.instructionIndex);
    bool initialized = false;
    for (const auto &r : fs.influenced) {
      const Instruction &u = (*m->body)[r.index];
      if (u.kind != Instruction::Kind::Invoke)
        continue;
      const CriterionSpec *init = isCriterion(u.callee, false);
      if (!init)
        continue;
      initialized = true;
      long id = g.siteAt(site.caller, r.index);
      if (id < 0)
        continue;
      poll(opts);
      Survivors size = survivors(ctx, g.sites()[id], 0, *init, 15, true, opts, stats);
      for (const auto &c : size.constants) {
        if (c.value.kind != Value::Kind::Int && c.value.kind != Value::Kind::Long)
          continue;
        for (const auto &a : algorithms) {
          bool weak = ((a == "RSA" || a == "DSA" || a == "DH") && c.value.num < opts.minRsaBits) ||
                      (a == "EC" && c.value.num < opts.minEcBits);
          if (weak)
            out.push_back(locate(ctx, 15, c.site.method, c.site.line,
                                 a + ":" + std::to_string(c.value.num)));
        }
      }
    }
    if (!initialized)
      for (const auto &a : algorithms)
        if (a == "RSA" || a == "DSA" || a == "DH")
          out.push_back(locate(ctx, 15, site.caller, site.line, a + ":default-1024"));
  }
  return out;
}

std::vector<Finding> runRule(int ruleId, const AnalysisContext &ctx, const CheckOptions &opts,
                             CheckStats *stats) {
  CheckStats local;
  CheckStats &st = stats ? *stats : local;
  std::vector<Finding> f;
  switch (ruleId) {
  case 1:
  case 2:
  case 3:
    f = checkPredictableSecrets(ctx, ruleId, opts, st);
    break;
  case 4:
    f = checkHostnameVerifier(ctx);
    break;
  case 5:
    f = checkTrustManager(ctx, opts);
    break;
  case 6:
    f = checkSslSocket(ctx);
    break;
  case 7:
    f = checkHttp(ctx, opts, st);
    break;
  case 8:
    f = checkSeeds(ctx, opts, st);
    break;
  case 9:
    f = checkUntrustedPrng(ctx);
    break;
  case 10:
    f = checkStaticSalt(ctx, opts, st);
    break;
  case 11:
    f = checkEcb(ctx, opts, st);
    break;
  case 12:
    f = checkStaticIv(ctx, opts, st);
    break;
  case 13:
    f = checkPbeIterations(ctx, opts, st);
    break;
  case 14:
    f = checkBrokenSymmetric(ctx, opts, st);
    break;
  case 15:
    f = checkAsymKeySize(ctx, opts, st);
    break;
  case 16:
    f = checkBrokenHash(ctx, opts, st);
    break;
  default:
    throw std::out_of_range("no rule " + std::to_string(ruleId));
  }
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

} // namespace cryptoslice

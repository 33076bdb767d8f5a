#include "refine_corpus.h"

#include <random>
#include <sstream>

namespace cryptoslice::testing {

namespace {

struct Item {
  const char *label;
  std::vector<std::string> body; // "@@N" ends a line holding a rule-N misuse
  std::array<size_t, 5> removals;
  // Pseudo-influences no checker reports even without refinement.
  size_t silent = 0;
};

const std::string kKeySpec =
    "specialinvoke k.<javax.crypto.spec.SecretKeySpec: void <init>(byte[],java.lang.String)>";
const std::string kIvSpec =
    "specialinvoke v.<javax.crypto.spec.IvParameterSpec: void <init>(byte[])>";
const std::string kPbeParam =
    "specialinvoke q.<javax.crypto.spec.PBEParameterSpec: void <init>(byte[],int)>";
const std::vector<std::string> kRandomSalt = {
    "salt = newarray byte[16]",
    "g = new java.security.SecureRandom",
    "specialinvoke g.<java.security.SecureRandom: void <init>()>()",
    "g.<java.security.SecureRandom: void nextBytes(byte[])>(salt)",
    "q = new javax.crypto.spec.PBEParameterSpec"};

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string> &b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

const std::vector<Item> &catalogue() {
  static const std::vector<Item> items = {
      {"encoding name", {
           "b = p.<java.lang.String: byte[] getBytes(java.lang.String)>(\"UTF-8\")",
           "k = new javax.crypto.spec.SecretKeySpec",
           kKeySpec + "(b, \"AES\")"}, {1, 0, 0, 0, 0}},
      {"substring bounds", {
           "s = p.<java.lang.String: java.lang.String substring(int,int)>(0, 16)",
           "b = s.<java.lang.String: byte[] getBytes()>()",
           "k = new javax.crypto.spec.SecretKeySpec",
           kKeySpec + "(b, \"AES\")"}, {2, 0, 0, 0, 0}},
      {"property name", {
           "s = staticinvoke <java.lang.System: java.lang.String getProperty(java.lang.String)>(\"app.secret\")",
           "c = s.<java.lang.String: char[] toCharArray()>()",
           "w = new javax.crypto.spec.PBEKeySpec",
           "specialinvoke w.<javax.crypto.spec.PBEKeySpec: void <init>(char[])>(c)"}, {0, 1, 0, 0, 0}},
      {"map key", {
           "o = interfaceinvoke p.<java.util.Map: java.lang.Object get(java.lang.Object)>(\"ENCRYPT_KEY\")",
           "b = o.<java.lang.String: byte[] getBytes()>()",
           "k = new javax.crypto.spec.SecretKeySpec",
           kKeySpec + "(b, \"AES\")"}, {0, 1, 0, 0, 0}},
      {"argument index", {
           "s = p[1]",
           "ks = staticinvoke <java.security.KeyStore: java.security.KeyStore getInstance(java.lang.String)>(\"JKS\")",
           "c = s.<java.lang.String: char[] toCharArray()>()",
           "ks.<java.security.KeyStore: void load(java.io.InputStream,char[])>(null, c)"}, {0, 0, 1, 0, 0}},
      {"buffer size", {
           "iv = newarray byte[16]",
           "g = new java.security.SecureRandom",
           "specialinvoke g.<java.security.SecureRandom: void <init>()>()",
           "g.<java.security.SecureRandom: void nextBytes(byte[])>(iv)",
           "v = new javax.crypto.spec.IvParameterSpec",
           kIvSpec + "(iv)"}, {0, 0, 1, 0, 0}},
      {"numeric placeholder", {
           "iv = 0",
           "if p == null goto L1",
           "iv = p",
           "L1:",
           "v = new javax.crypto.spec.IvParameterSpec",
           kIvSpec + "(iv)"}, {0, 0, 0, 1, 0}},
      {"textual iteration count", concat({
           "n = \"20\"",
           "if p == null goto L1",
           "n = p",
           "L1:"}, concat(kRandomSalt, {kPbeParam + "(salt, n)"})), {0, 0, 1, 1, 0}, 1},
      {"null initialiser", {
           "b = null",
           "if p == null goto L1",
           "b = p",
           "L1:",
           "k = new javax.crypto.spec.SecretKeySpec",
           kKeySpec + "(b, \"AES\")"}, {0, 0, 0, 0, 1}},
      {"empty initialiser", {
           "s = \"\"",
           "if p == null goto L1",
           "s = p",
           "L1:",
           "b = s.<java.lang.String: byte[] getBytes()>()",
           "k = new javax.crypto.spec.SecretKeySpec",
           kKeySpec + "(b, \"AES\")"}, {0, 0, 0, 0, 1}},
      {"hard-coded key", {
           "s = \"k3y-material-0001\"@@1",
           "b = s.<java.lang.String: byte[] getBytes()>()",
           "k = new javax.crypto.spec.SecretKeySpec",
           kKeySpec + "(b, \"AES\")"}, {0, 0, 0, 0, 0}},
      {"constant IV", {
           "s = \"iv-constant-0001\"@@12",
           "b = s.<java.lang.String: byte[] getBytes()>()",
           "v = new javax.crypto.spec.IvParameterSpec",
           kIvSpec + "(b)"}, {0, 0, 0, 0, 0}},
      {"low iteration count", concat(kRandomSalt, {kPbeParam + "(salt, 25)@@13"}),
       {0, 0, 1, 0, 0}},
      {"broken digest", {
           "d = staticinvoke <java.security.MessageDigest: java.security.MessageDigest getInstance(java.lang.String)>(\"MD5\")@@16"},
       {0, 0, 0, 0, 0}},
      {"hard-coded password", {
           "s = \"letmein\"@@2",
           "c = s.<java.lang.String: char[] toCharArray()>()",
           "w = new javax.crypto.spec.PBEKeySpec",
           "specialinvoke w.<javax.crypto.spec.PBEKeySpec: void <init>(char[])>(c)"},
       {0, 0, 0, 0, 0}},
  };
  return items;
}

} // namespace

PlantedProgram plantedProgram(uint32_t seed) {
  std::mt19937 rng(seed);
  const auto &items = catalogue();
  std::uniform_int_distribution<size_t> pick(0, items.size() - 1);
  int count = std::uniform_int_distribution<int>(1, 6)(rng);

  PlantedProgram out;
  out.name = "Planted" + std::to_string(seed);
  std::ostringstream os;
  int line = 1;
  size_t silent = 0;
  auto emit = [&](const std::string &s) {
    os << s << "\n";
    ++line;
  };
  emit("class " + out.name + " {");
  for (int m = 0; m < count; ++m) {
    const Item &it = items[pick(rng)];
    emit("  method void item" + std::to_string(m) + "(java.lang.Object) {");
    emit("    p := param 0");
    for (std::string l : it.body) {
      size_t mark = l.find("@@");
      if (mark != std::string::npos) {
        out.misuses.push_back({std::stoi(l.substr(mark + 2)), line});
        l.erase(mark);
      }
      emit((l.back() == ':' ? "  " : "    ") + l);
    }
    emit("    return");
    emit("  }");
    for (int r = 0; r < 5; ++r) {
      out.removals[r] += it.removals[r];
      out.pseudoInfluences += it.removals[r];
    }
    silent += it.silent;
  }
  emit("}");
  out.unrefinedFindings = out.misuses.size() + out.pseudoInfluences - silent;
  out.text = os.str();
  return out;
}

} // namespace cryptoslice::testing

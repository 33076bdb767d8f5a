#!/usr/bin/env python3
"""Generate the benchmark corpus under bench/corpus.

Each case is written as TIR with `@@N` markers on the lines where rule N
must fire; the markers are stripped and turned into `expect N LINE` entries.
Run from anywhere: python3 bench/generate_corpus.py [outdir]
"""

import os
import re
import shutil
import sys

STR = "java.lang.String"
MARK = re.compile(r"\s*@@(\d+)")


class Case:
    def __init__(self, category, ident, rule, summary, text, clean=False):
        self.category = category
        self.ident = ident
        self.rule = rule
        self.summary = summary
        self.text = text
        self.clean = clean

    def render(self):
        out, expects = [], []
        for n, raw in enumerate(self.text.strip("\n").split("\n"), start=1):
            for m in MARK.finditer(raw):
                expects.append((int(m.group(1)), n))
            out.append(MARK.sub("", raw).rstrip())
        if self.clean and expects:
            raise ValueError(f"{self.ident}: clean case carries markers")
        if not self.clean and not expects:
            raise ValueError(f"{self.ident}: no expectation markers")
        meta = [f"# {self.summary}", f"category {self.category}", f"rule {self.rule}"]
        meta += ["clean"] if self.clean else [f"expect {r} {l}" for r, l in expects]
        return "\n".join(out) + "\n", "\n".join(meta) + "\n"


def lines(*parts):
    out = []
    for p in parts:
        out.extend(p if isinstance(p, list) else [p])
    return out


def ind(body, n=4):
    return [(" " * n + l) if l and not l.endswith(":") else ("  " + l if l else l)
            for l in body]


def method(sig, body, static=False):
    head = ("static method " if static else "method ") + sig + " {"
    return ["  " + head] + ind(body) + ["  }"]


def cls(name, members, extra=""):
    head = f"class {name}{extra} {{"
    return "\n".join([head] + members + ["}"])


def prog(*classes):
    return "\n\n".join(classes) + "\n"


# ---------------------------------------------------------------- value sinks
# Each sink consumes local `v` and ends in the rule's criterion call.

VALUE_TYPE = {1: STR, 2: STR, 3: STR, 7: STR, 8: "long", 10: STR, 11: STR,
              12: STR, 13: "int", 14: STR, 15: "int", 16: STR}


def random_bytes(name, size=16):
    return [f"{name} = newarray byte[{size}]",
            f"{name}_r = new java.security.SecureRandom",
            f"specialinvoke {name}_r.<java.security.SecureRandom: void <init>()>()",
            f"{name}_r.<java.security.SecureRandom: void nextBytes(byte[])>({name})"]


def sink(rule, v, bytes_in=False):
    b = v if bytes_in else "sb"
    to_bytes = [] if bytes_in else [f"sb = {v}.<java.lang.String: byte[] getBytes()>()"]
    if rule == 1:
        return to_bytes + [
            "sk = new javax.crypto.spec.SecretKeySpec",
            f'specialinvoke sk.<javax.crypto.spec.SecretKeySpec: void <init>(byte[],java.lang.String)>({b}, "AES")']
    if rule == 2:
        return [f"sc = {v}.<java.lang.String: char[] toCharArray()>()",
                "sp = new javax.crypto.spec.PBEKeySpec",
                "specialinvoke sp.<javax.crypto.spec.PBEKeySpec: void <init>(char[])>(sc)"]
    if rule == 3:
        return ['ks = staticinvoke <java.security.KeyStore: java.security.KeyStore getInstance(java.lang.String)>("JKS")',
                f"sc = {v}.<java.lang.String: char[] toCharArray()>()",
                "ks.<java.security.KeyStore: void load(java.io.InputStream,char[])>(null, sc)"]
    if rule == 7:
        return ["su = new java.net.URL",
                f"specialinvoke su.<java.net.URL: void <init>(java.lang.String)>({v})"]
    if rule == 8:
        return ["sr = new java.security.SecureRandom",
                "specialinvoke sr.<java.security.SecureRandom: void <init>()>()",
                f"sr.<java.security.SecureRandom: void setSeed(long)>({v})"]
    if rule == 10:
        return to_bytes + [
            "sp = new javax.crypto.spec.PBEParameterSpec",
            f"specialinvoke sp.<javax.crypto.spec.PBEParameterSpec: void <init>(byte[],int)>({b}, 10000)"]
    if rule in (11, 14):
        return [f"sc = staticinvoke <javax.crypto.Cipher: javax.crypto.Cipher getInstance(java.lang.String)>({v})"]
    if rule == 12:
        return to_bytes + [
            "si = new javax.crypto.spec.IvParameterSpec",
            f"specialinvoke si.<javax.crypto.spec.IvParameterSpec: void <init>(byte[])>({b})"]
    if rule == 13:
        return random_bytes("salt") + [
            "sp = new javax.crypto.spec.PBEParameterSpec",
            f"specialinvoke sp.<javax.crypto.spec.PBEParameterSpec: void <init>(byte[],int)>(salt, {v})"]
    if rule == 15:
        return ['kg = staticinvoke <java.security.KeyPairGenerator: java.security.KeyPairGenerator getInstance(java.lang.String)>("RSA")',
                f"kg.<java.security.KeyPairGenerator: void initialize(int)>({v})"]
    if rule == 16:
        return [f"sd = staticinvoke <java.security.MessageDigest: java.security.MessageDigest getInstance(java.lang.String)>({v})"]
    raise ValueError(rule)


def lit(rule, value):
    t = VALUE_TYPE[rule]
    if t == STR:
        return '"' + value + '"'
    if t == "long":
        return f"{value}L"
    return str(value)


# ---------------------------------------------------------- category shapes

def shape_basic(cname, rule, value, mark=True):
    m = f"  @@{rule}" if mark else ""
    body = [f"v = {lit(rule, value)}{m}"] + sink(rule, "v") + ["return"]
    return prog(cls(cname, method("void run()", body)))


def shape_basic_inline(cname, rule, value, mark=True):
    # Constant passed straight into the criterion call.
    m = f"  @@{rule}" if mark else ""
    s = sink(rule, lit(rule, value))
    s[-1] += m
    return prog(cls(cname, method("void run()", s + ["return"])))


def shape_two(cname, rule, value, mark=True, static=True):
    t = VALUE_TYPE[rule]
    m = f"  @@{rule}" if mark else ""
    if static:
        call = f"staticinvoke <{cname}: void apply({t})>(v)"
    else:
        call = f"this.<{cname}: void apply({t})>(v)"
    caller = method("void run()", [f"v = {lit(rule, value)}{m}", call, "return"])
    callee = method(f"void apply({t})", ["p := param 0"] + sink(rule, "p") + ["return"],
                    static=static)
    return prog(cls(cname, caller + callee))


def shape_two_classes(cname, rule, value, mark=True):
    t = VALUE_TYPE[rule]
    m = f"  @@{rule}" if mark else ""
    helper = cname + "Helper"
    main = cls(cname, method("void run()", [
        f"v = {lit(rule, value)}{m}",
        f"h = new {helper}",
        f"specialinvoke h.<{helper}: void <init>()>()",
        f"h.<{helper}: void apply({t})>(v)",
        "return"]))
    help_c = cls(helper,
                 method("void <init>()", ["return"]) +
                 method(f"void apply({t})", ["p := param 0"] + sink(rule, "p") + ["return"]))
    return prog(main, help_c)


def shape_return(cname, rule, value, mark=True):
    # Value produced by a callee's return, used in the caller.
    t = VALUE_TYPE[rule]
    m = f"  @@{rule}" if mark else ""
    prov = method(f"{t} value()", [f"v = {lit(rule, value)}{m}", "return v"], static=True)
    use = method("void run()", [f"v = staticinvoke <{cname}: {t} value()>()"] +
                 sink(rule, "v") + ["return"])
    return prog(cls(cname, prov + use))


def shape_multi(cname, rule, value, mark=True, hops=3):
    t = VALUE_TYPE[rule]
    m = f"  @@{rule}" if mark else ""
    names = ["run", "stage1", "stage2", "stage3", "stage4"][:hops]
    members = method(f"void {names[0]}()", [
        f"v = {lit(rule, value)}{m}",
        f"staticinvoke <{cname}: void {names[1]}({t})>(v)",
        "return"])
    for i in range(1, hops - 1):
        members += method(f"void {names[i]}({t})", [
            "p := param 0",
            f"staticinvoke <{cname}: void {names[i + 1]}({t})>(p)",
            "return"], static=True)
    members += method(f"void {names[-1]}({t})", ["p := param 0"] + sink(rule, "p") +
                      ["return"], static=True)
    return prog(cls(cname, members))


def shape_multi_classes(cname, rule, value, mark=True):
    t = VALUE_TYPE[rule]
    m = f"  @@{rule}" if mark else ""
    a, b = cname + "Service", cname + "Engine"
    main = cls(cname, method("void run()", [
        f"v = {lit(rule, value)}{m}",
        f"staticinvoke <{a}: void handle({t})>(v)",
        "return"]))
    svc = cls(a, method(f"void handle({t})", [
        "p := param 0",
        f"staticinvoke <{b}: void process({t})>(p)",
        "return"], static=True))
    eng = cls(b, method(f"void process({t})", ["p := param 0"] + sink(rule, "p") +
                        ["return"], static=True))
    return prog(main, svc, eng)


def shape_field(cname, rule, value, mark=True):
    t = VALUE_TYPE[rule]
    m = f"  @@{rule}" if mark else ""
    return prog(cls(cname, [f"  field {t} setting"] +
                    method("void <init>()", [f"this.setting = {lit(rule, value)}{m}",
                                             "return"]) +
                    method("void run()", ["v = this.setting"] + sink(rule, "v") +
                           ["return"])))


def shape_static_field(cname, rule, value, mark=True):
    t = VALUE_TYPE[rule]
    m = f"  @@{rule}" if mark else ""
    conf = cname + "Config"
    return prog(
        cls(conf, [f"  static field {t} DEFAULT"] +
            method("void <clinit>()", [f"{conf}.DEFAULT = {lit(rule, value)}{m}", "return"],
                   static=True)),
        cls(cname, method("void run()", [f"v = {conf}.DEFAULT"] + sink(rule, "v") +
                          ["return"])))


def shape_holder(cname, rule, value, mark=True):
    # Plain data class with setter/getter pairs.
    t = VALUE_TYPE[rule]
    m = f"  @@{rule}" if mark else ""
    holder = cname + "Settings"
    h = cls(holder, [f"  field {t} secret", f"  field {STR} label"] +
            method("void <init>()", ["return"]) +
            method(f"void setSecret({t})", ["p := param 0", "this.secret = p", "return"]) +
            method(f"{t} getSecret()", ["r = this.secret", "return r"]) +
            method(f"void setLabel({STR})", ["p := param 0", "this.label = p", "return"]))
    main = cls(cname, method("void run()", [
        f"o = new {holder}",
        f"specialinvoke o.<{holder}: void <init>()>()",
        f'o.<{holder}: void setLabel(java.lang.String)>("primary")',
        f"v = {lit(rule, value)}{m}",
        f"o.<{holder}: void setSecret({t})>(v)",
        f"w = o.<{holder}: {t} getSecret()>()"] + sink(rule, "w") + ["return"]))
    return prog(h, main)


def shape_field_other(cname, rule, value, mark=True):
    # Field written by one method, read by another on a separate object.
    t = VALUE_TYPE[rule]
    m = f"  @@{rule}" if mark else ""
    store = cname + "Store"
    s = cls(store, [f"  field {t} entry"] +
            method("void <init>()", ["return"]) +
            method("void fill()", [f"this.entry = {lit(rule, value)}{m}", "return"]))
    main = cls(cname, method("void run()", [
        f"o = new {store}",
        f"specialinvoke o.<{store}: void <init>()>()",
        f"o.<{store}: void fill()>()",
        "v = o.entry"] + sink(rule, "v") + ["return"]))
    return prog(s, main)


SHAPES = {
    "basic": [shape_basic, shape_basic_inline],
    "interprocTwo": [shape_two, lambda c, r, v, mark=True: shape_two(c, r, v, mark, False),
                     shape_two_classes, shape_return],
    "interprocMulti": [shape_multi, shape_multi_classes,
                       lambda c, r, v, mark=True: shape_multi(c, r, v, mark, 4)],
    "fieldSensitive": [shape_field, shape_static_field, shape_holder, shape_field_other],
}


# ----------------------------------------------------------- fpTest shapes

def fp_fallback(cname, rule, value):
    # Configured value with a hard-coded fallback plus bookkeeping noise.
    body = [
        "p := param 0",
        "n = staticinvoke <java.lang.reflect.Array: int getLength(java.lang.Object)>(p)",
        "if n > 0 goto L1",
        f'v = staticinvoke <java.lang.System: java.lang.String getProperty(java.lang.String)>("app.{rule}.secret")',
        "if v != null goto L2",
        f"v = {lit(rule, value)}  @@{rule}",
        "goto L2",
        "L1:",
        "v = p[0]",
        "L2:",
        "sb = v.<java.lang.String: byte[] getBytes(java.lang.String)>(\"UTF-8\")",
    ]
    s = sink(rule, "sb", bytes_in=True) if rule in (1, 10, 12) else sink(rule, "v")
    return prog(cls(cname, method("void run(java.lang.String[])", body + s + ["return"])))


def fp_table(cname, rule, value):
    # Value picked from a small table by a computed index.
    body = [
        "a = newarray java.lang.String[3]",
        f"a[1] = {lit(rule, value)}  @@{rule}",
        "i = 0",
        "i = i + 1",
        "v = a[i]",
    ] + sink(rule, "v") + ["return"]
    return prog(cls(cname, method("void run()", body)))


# ------------------------------------------------------------ special rules

def r4_misuse(cname):
    return prog(cls(cname, method("boolean verify(java.lang.String,javax.net.ssl.SSLSession)", [
        "h := param 0", "s := param 1", "return true  @@4"]),
        " implements javax.net.ssl.HostnameVerifier"))


def r4_clean(cname):
    return prog(cls(cname, method("boolean verify(java.lang.String,javax.net.ssl.SSLSession)", [
        "h := param 0", "s := param 1",
        "p = s.<javax.net.ssl.SSLSession: java.lang.String getPeerHost()>()",
        "ok = h.<java.lang.String: boolean equalsIgnoreCase(java.lang.String)>(p)",
        "return ok"]), " implements javax.net.ssl.HostnameVerifier"))


TM = " implements javax.net.ssl.X509TrustManager"
CHAIN = "java.security.cert.X509Certificate[],java.lang.String"


def r5_misuse(cname):
    return prog(cls(cname,
                    method(f"void checkClientTrusted({CHAIN})", ["return"]) +
                    method(f"void checkServerTrusted({CHAIN})",
                           ["c := param 0  @@5", "a := param 1", "return"]) +
                    method("java.security.cert.X509Certificate[] getAcceptedIssuers()",
                           ["return null"]), TM))


def r5_clean(cname):
    fail = ["e = new java.security.cert.CertificateException",
            'specialinvoke e.<java.security.cert.CertificateException: void <init>(java.lang.String)>("rejected")',
            "throw e"]
    return prog(cls(cname, ["  field java.security.cert.X509Certificate[] anchors"] +
                    method("void <init>(java.security.cert.X509Certificate[])",
                           ["a := param 0", "this.anchors = a", "return"]) +
                    method(f"void checkClientTrusted({CHAIN})",
                           ["c := param 0", "a := param 1"] + fail) +
                    method(f"void checkServerTrusted({CHAIN})", [
                        "c := param 0", "a := param 1",
                        "if a == null goto L1",
                        "x = c[0]",
                        "t = this.anchors",
                        "y = t[0]",
                        "k = y.<java.security.cert.X509Certificate: java.security.PublicKey getPublicKey()>()",
                        "x.<java.security.cert.X509Certificate: void checkValidity()>()",
                        "x.<java.security.cert.X509Certificate: void verify(java.security.PublicKey)>(k)",
                        "return",
                        "L1:"] + fail) +
                    method("java.security.cert.X509Certificate[] getAcceptedIssuers()",
                           ["t = this.anchors", "return t"]), TM))


GET_DEFAULT = "staticinvoke <javax.net.ssl.SSLSocketFactory: javax.net.SocketFactory getDefault()>()"
CREATE = "<javax.net.SocketFactory: java.net.Socket createSocket(java.lang.String,int)>"


def r6_basic(cname):
    return prog(cls(cname, method("java.net.Socket open()", [
        f"f = {GET_DEFAULT}",
        f'k = f.{CREATE}("mail.example.com", 465)  @@6',
        "return k"])))


def r6_handoff(cname, hops):
    members = method("void run()", [
        f"f = {GET_DEFAULT}",
        f'k = f.{CREATE}("mail.example.com", 465)  @@6',
        f"staticinvoke <{cname}: void send1(java.net.Socket)>(k)",
        "return"])
    for i in range(1, hops):
        nxt = (f"staticinvoke <{cname}: void send{i + 1}(java.net.Socket)>(k)"
               if i + 1 < hops else
               "o = k.<java.net.Socket: java.io.OutputStream getOutputStream()>()")
        members += method(f"void send{i}(java.net.Socket)", ["k := param 0", nxt, "return"],
                          static=True)
    return prog(cls(cname, members))


def r6_unchecked(cname):
    # Verifier invoked but its verdict ignored.
    return prog(cls(cname, method("void run()", [
        f"f = {GET_DEFAULT}",
        f'k = f.{CREATE}("mail.example.com", 465)  @@6',
        "v = staticinvoke <javax.net.ssl.HttpsURLConnection: javax.net.ssl.HostnameVerifier getDefaultHostnameVerifier()>()",
        "s = k.<javax.net.ssl.SSLSocket: javax.net.ssl.SSLSession getSession()>()",
        'ok = interfaceinvoke v.<javax.net.ssl.HostnameVerifier: boolean verify(java.lang.String,javax.net.ssl.SSLSession)>("mail.example.com", s)',
        "return"])))


def r6_clean(cname):
    return prog(cls(cname, method("void run()", [
        f"f = {GET_DEFAULT}",
        f'k = f.{CREATE}("mail.example.com", 465)',
        "v = staticinvoke <javax.net.ssl.HttpsURLConnection: javax.net.ssl.HostnameVerifier getDefaultHostnameVerifier()>()",
        "s = k.<javax.net.ssl.SSLSocket: javax.net.ssl.SSLSession getSession()>()",
        'ok = interfaceinvoke v.<javax.net.ssl.HostnameVerifier: boolean verify(java.lang.String,javax.net.ssl.SSLSession)>("mail.example.com", s)',
        "if ok != false goto L1",
        "k.<java.net.Socket: void close()>()",
        "e = new javax.net.ssl.SSLHandshakeException",
        'specialinvoke e.<javax.net.ssl.SSLHandshakeException: void <init>(java.lang.String)>("hostname mismatch")',
        "throw e",
        "L1:",
        "return"])))


def r9_misuse(cname):
    return prog(cls(cname, method("int roll()", [
        "g = new java.util.Random",
        "specialinvoke g.<java.util.Random: void <init>()>()  @@9",
        "n = g.<java.util.Random: int nextInt(int)>(6)",
        "return n"])))


def r8_predictable(cname, source):
    return prog(cls(cname, method("void run()", [
        f"t = staticinvoke <java.lang.System: long {source}()>()  @@8"] + [
        "sr = new java.security.SecureRandom",
        "specialinvoke sr.<java.security.SecureRandom: void <init>()>()",
        "sr.<java.security.SecureRandom: void setSeed(long)>(t)",
        "return"])))


def r8_bytes(cname, value):
    return prog(cls(cname, method("void run()", [
        f'v = "{value}"  @@8',
        "b = v.<java.lang.String: byte[] getBytes()>()",
        "sr = new java.security.SecureRandom",
        "specialinvoke sr.<java.security.SecureRandom: void <init>(byte[])>(b)",
        "return"])))


def r8_predictable_multi(cname):
    return prog(cls(cname,
                    method("void run()", [
                        "t = staticinvoke <java.lang.System: long nanoTime()>()  @@8",
                        f"staticinvoke <{cname}: void stage1(long)>(t)", "return"]) +
                    method("void stage1(long)", ["p := param 0",
                                                 f"staticinvoke <{cname}: void stage2(long)>(p)",
                                                 "return"], static=True) +
                    method("void stage2(long)", ["p := param 0"] + sink(8, "p") + ["return"],
                           static=True)))


def r8_clean(cname):
    return prog(cls(cname, method("void run()", [
        "g = new java.security.SecureRandom",
        "specialinvoke g.<java.security.SecureRandom: void <init>()>()",
        "b = g.<java.security.SecureRandom: byte[] generateSeed(int)>(32)",
        "sr = new java.security.SecureRandom",
        "specialinvoke sr.<java.security.SecureRandom: void <init>(byte[])>(b)",
        "return"])))


def r12_clean(cname):
    return prog(cls(cname, method("void run()", random_bytes("iv") + [
        "si = new javax.crypto.spec.IvParameterSpec",
        "specialinvoke si.<javax.crypto.spec.IvParameterSpec: void <init>(byte[])>(iv)",
        "return"])))


def r15_nosize(cname):
    return prog(cls(cname, method("java.security.KeyPair generate()", [
        'kg = staticinvoke <java.security.KeyPairGenerator: java.security.KeyPairGenerator getInstance(java.lang.String)>("RSA")  @@15',
        "kp = kg.<java.security.KeyPairGenerator: java.security.KeyPair generateKeyPair()>()",
        "return kp"])))


def r15_clean(cname):
    return prog(cls(cname, method("java.security.KeyPair generate()", [
        'kg = staticinvoke <java.security.KeyPairGenerator: java.security.KeyPairGenerator getInstance(java.lang.String)>("RSA")',
        "kg.<java.security.KeyPairGenerator: void initialize(int)>(3072)",
        "kp = kg.<java.security.KeyPairGenerator: java.security.KeyPair generateKeyPair()>()",
        "return kp"])))


def r13_array(cname):
    return prog(cls(cname, method("void run()", [
        "a = newarray int[4]",
        "a[2] = 20  @@13",
        "n = a[2]"] + sink(13, "n") + ["return"])))


# ------------------------------------------------------ clipped conversions
# Values that reach the criterion only through a two-level in-program
# conversion called in an assignment. At the default depth the inner call is
# clipped, so the constant looks like a source identifier.

def byte_sink(rule, b):
    if rule == 8:
        return ["sr = new java.security.SecureRandom",
                f"specialinvoke sr.<java.security.SecureRandom: void <init>(byte[])>({b})"]
    return sink(rule, b, bytes_in=True)


def codec_class(codec):
    return cls(codec,
               method("byte[] decode(java.lang.String)", [
                   "s := param 0",
                   f"b = staticinvoke <{codec}: byte[] hexToBytes(java.lang.String)>(s)",
                   "return b"], static=True) +
               method("byte[] hexToBytes(java.lang.String)", [
                   "s := param 0",
                   "b = s.<java.lang.String: byte[] getBytes()>()",
                   "return b"], static=True))


def fn_codec(cname, rule, text, shape="multi"):
    codec = cname + "Codec"
    decode = f"staticinvoke <{codec}: byte[] decode(java.lang.String)>"
    if shape == "basic":
        main = cls(cname, method("void run()", [
            f'b = {decode}("{text}")  @@{rule}'] + byte_sink(rule, "b") + ["return"]))
    elif shape == "noise":
        main = cls(cname, method("void run()", [
            "m = new java.util.HashMap",
            "specialinvoke m.<java.util.HashMap: void <init>()>()",
            'o = interfaceinvoke m.<java.util.Map: java.lang.Object get(java.lang.Object)>("seed.mode")',
            f'b = {decode}("{text}")  @@{rule}'] + byte_sink(rule, "b") + ["return"]))
    elif shape == "two":
        main = cls(cname,
                   method("void run()", [
                       f'v = "{text}"  @@{rule}',
                       f"b = {decode}(v)",
                       f"staticinvoke <{cname}: void apply(byte[])>(b)",
                       "return"]) +
                   method("void apply(byte[])", ["p := param 0"] + byte_sink(rule, "p") +
                          ["return"], static=True))
    elif shape == "multi":
        main = cls(cname,
                   method("void run()", [f'v = "{text}"  @@{rule}',
                                         f"staticinvoke <{cname}: void stage1(java.lang.String)>(v)",
                                         "return"]) +
                   method("void stage1(java.lang.String)", [
                       "p := param 0",
                       f"b = {decode}(p)",
                       f"staticinvoke <{cname}: void stage2(byte[])>(b)",
                       "return"], static=True) +
                   method("void stage2(byte[])", ["p := param 0"] + byte_sink(rule, "p") +
                          ["return"], static=True))
    elif shape == "field":
        main = cls(cname, ["  field byte[] material"] +
                   method("void <init>()", [
                       f'v = "{text}"  @@{rule}',
                       f"b = {decode}(v)",
                       "this.material = b", "return"]) +
                   method("void run()", ["p = this.material"] + byte_sink(rule, "p") +
                          ["return"]))
    else:
        raise ValueError(shape)
    return prog(main, codec_class(codec))


def fn_numeric(cname, rule, value, shape="two"):
    # Number normalised by a helper that delegates to a second helper.
    t = VALUE_TYPE[rule]
    util = cname + "Limits"
    u = cls(util,
            method(f"{t} normalize({t})", [
                "n := param 0",
                f"r = staticinvoke <{util}: {t} bound({t})>(n)",
                "return r"], static=True) +
            method(f"{t} bound({t})", ["n := param 0", "r = n", "return r"], static=True))
    conv = f"staticinvoke <{util}: {t} normalize({t})>({lit(rule, value)})  @@{rule}"
    if shape == "two":
        main = cls(cname,
                   method("void run()", [f"v = {conv}",
                                         f"staticinvoke <{cname}: void apply({t})>(v)",
                                         "return"]) +
                   method(f"void apply({t})", ["p := param 0"] + sink(rule, "p") + ["return"],
                          static=True))
    elif shape == "multi":
        main = cls(cname,
                   method("void run()", [f"v = {conv}",
                                         f"staticinvoke <{cname}: void stage1({t})>(v)",
                                         "return"]) +
                   method(f"void stage1({t})", ["p := param 0",
                                                f"staticinvoke <{cname}: void stage2({t})>(p)",
                                                "return"], static=True) +
                   method(f"void stage2({t})", ["p := param 0"] + sink(rule, "p") + ["return"],
                          static=True))
    elif shape == "field":
        main = cls(cname, [f"  field {t} setting"] +
                   method("void <init>()", [f"n = {conv}", "this.setting = n", "return"]) +
                   method("void run()", ["v = this.setting"] + sink(rule, "v") + ["return"]))
    else:
        raise ValueError(shape)
    return prog(main, u)


# ---------------------------------------------------------------- catalogue

def build():
    cases = []

    def add(cat, ident, rule, summary, text, clean=False):
        cases.append(Case(cat, ident, rule, summary, text, clean))

    def simple(cat, ident, rule, value, k, summary):
        shape = SHAPES[cat][k % len(SHAPES[cat])]
        name = "".join(w.capitalize() for w in ident.split("_")[1:]) or "Case"
        add(cat, ident, rule, summary, shape(name, rule, value))

    # basic: one positive per rule (two for rules 8, 14, 16 extras) ...
    simple("basic", "r01_secret_key", 1, "0123456789abcdef", 0, "hard-coded symmetric key")
    simple("basic", "r02_pbe_password", 2, "hunter2", 0, "hard-coded PBE password")
    simple("basic", "r03_keystore_password", 3, "changeit", 0, "hard-coded keystore password")
    add("basic", "r04_allow_all_verifier", 4, "hostname verifier accepting everything",
        r4_misuse("AllowAllVerifier"))
    add("basic", "r05_trust_all", 5, "trust manager that trusts everything",
        r5_misuse("TrustAllManager"))
    add("basic", "r06_no_hostname_check", 6, "socket without hostname verification",
        r6_basic("MailClient"))
    simple("basic", "r07_http_url", 7, "http://api.example.com/v1/login", 0, "plain http url")
    add("basic", "r08_time_seed", 8, "time-based SecureRandom seed",
        r8_predictable("TimeSeed", "currentTimeMillis"))
    add("basic", "r08_hex_seed", 8, "seed decoded from hex by a codec",
        fn_codec("HexSeed", 8, "5eed5eed5eed5eed", "basic"))
    add("basic", "r09_util_random", 9, "java.util.Random in a security path",
        r9_misuse("DiceRoller"))
    simple("basic", "r10_static_salt", 10, "NaClNaCl", 0, "constant PBE salt")
    simple("basic", "r11_ecb_default", 11, "AES", 1, "block cipher without mode")
    simple("basic", "r12_static_iv", 12, "0000000000000000", 0, "constant IV")
    simple("basic", "r13_low_iterations", 13, 100, 0, "PBE with 100 iterations")
    simple("basic", "r14_des", 14, "DES/CBC/PKCS5Padding", 0, "DES cipher")
    simple("basic", "r14_rc4", 14, "RC4", 1, "RC4 stream cipher")
    simple("basic", "r14_blowfish", 14, "Blowfish/CBC/PKCS5Padding", 0, "Blowfish cipher")
    simple("basic", "r14_rc2", 14, "RC2/CFB/NoPadding", 1, "RC2 cipher")
    simple("basic", "r14_triple_des", 14, "DESede/CBC/NoPadding", 0, "triple DES cipher")
    add("basic", "r15_default_size", 15, "RSA key pair with default size",
        r15_nosize("KeyPairs"))
    simple("basic", "r16_md5", 16, "MD5", 0, "MD5 digest")
    simple("basic", "r16_sha1", 16, "SHA1", 1, "SHA1 digest")
    simple("basic", "r16_sha_1", 16, "SHA-1", 0, "SHA-1 digest")
    simple("basic", "r16_md4", 16, "MD4", 1, "MD4 digest")
    simple("basic", "r16_md2", 16, "MD2", 0, "MD2 digest")

    # basic: correct uses
    add("basic", "c01_generated_key", 1, "key from a KeyGenerator", prog(cls("GeneratedKey", method("void run()", [
        'g = staticinvoke <javax.crypto.KeyGenerator: javax.crypto.KeyGenerator getInstance(java.lang.String)>("AES")',
        "g.<javax.crypto.KeyGenerator: void init(int)>(256)",
        "k = g.<javax.crypto.KeyGenerator: javax.crypto.SecretKey generateKey()>()",
        "b = k.<javax.crypto.SecretKey: byte[] getEncoded()>()",
        "sk = new javax.crypto.spec.SecretKeySpec",
        'specialinvoke sk.<javax.crypto.spec.SecretKeySpec: void <init>(byte[],java.lang.String)>(b, "AES")',
        "return"]))), clean=True)
    add("basic", "c02_argument_password", 2, "password from program arguments",
        prog(cls("ArgPassword", method("void main(java.lang.String[])", [
            "a := param 0", "v = a[0]"] + sink(2, "v") + ["return"], static=True))), clean=True)
    add("basic", "c03_env_password", 3, "keystore password from the environment",
        prog(cls("EnvPassword", method("void run()", [
            'v = staticinvoke <java.lang.System: java.lang.String getenv(java.lang.String)>("KEYSTORE_PASS")'] +
            sink(3, "v") + ["return"]))), clean=True)
    add("basic", "c11_gcm", 11, "AES in GCM mode",
        shape_basic_inline("GcmCipher", 11, "AES/GCM/NoPadding", mark=False), clean=True)
    add("basic", "c14_aes_cbc", 14, "AES in CBC mode",
        shape_basic("CbcCipher", 14, "AES/CBC/PKCS5Padding", mark=False), clean=True)
    add("basic", "c16_sha256", 16, "SHA-256 digest",
        shape_basic_inline("Sha256Digest", 16, "SHA-256", mark=False), clean=True)
    add("basic", "c04_checking_verifier", 4, "verifier comparing against the session",
        r4_clean("PeerHostVerifier"), clean=True)
    add("basic", "c05_pinned_trust", 5, "trust manager validating against anchors",
        r5_clean("PinnedTrustManager"), clean=True)
    add("basic", "c06_verified_socket", 6, "socket with hostname verification",
        r6_clean("VerifiedMailClient"), clean=True)
    add("basic", "c07_https_url", 7, "https url",
        shape_basic("SecureEndpoint", 7, "https://api.example.com/v1/login", mark=False),
        clean=True)
    add("basic", "c08_generated_seed", 8, "seed from generateSeed",
        r8_clean("GeneratedSeed"), clean=True)
    add("basic", "c12_random_iv", 12, "random IV", r12_clean("RandomIv"), clean=True)
    add("basic", "c15_rsa_3072", 15, "RSA with 3072-bit keys", r15_clean("StrongKeyPairs"),
        clean=True)

    # interprocTwo
    cat = "interprocTwo"
    simple(cat, "r01_key_arg", 1, "sixteen-byte-key", 0, "key passed to a helper")
    simple(cat, "r02_password_arg", 2, "letmein", 1, "password passed to an instance helper")
    simple(cat, "r03_keystore_helper", 3, "storepass", 2, "keystore password through a helper class")
    add(cat, "r06_socket_handoff", 6, "unchecked socket handed to a writer",
        r6_handoff("SocketWriter", 2))
    simple(cat, "r07_url_return", 7, "http://updates.example.com/feed", 3, "http url from a provider")
    add(cat, "r08_seed_arg", 8, "constant seed passed to a helper", shape_two("SeedArg", 8, 42))
    add(cat, "r08_bounded_seed_arg", 8, "normalised seed passed to a helper",
        fn_numeric("BoundedSeedArg", 8, 77, "two"))
    simple(cat, "r10_salt_return", 10, "saltsalt", 3, "salt from a provider")
    simple(cat, "r11_cipher_helper", 11, "Camellia", 2, "bare block cipher through a helper class")
    add(cat, "r12_hex_iv", 12, "IV decoded from hex by a codec",
        fn_codec("HexIv", 12, "a1b2c3d4e5f60718", "two"))
    simple(cat, "r13_iterations_arg", 13, 64, 0, "low iteration count passed on")
    add(cat, "r15_bounded_size", 15, "normalised key size passed on",
        fn_numeric("BoundedKeySize", 15, 1024, "two"))
    simple(cat, "r14_des_arg", 14, "DES/CTR/NoPadding", 0, "DES through a static helper")
    simple(cat, "r14_rc4_arg", 14, "RC4", 1, "RC4 through an instance helper")
    simple(cat, "r14_idea_helper", 14, "IDEA/CBC/NoPadding", 2, "IDEA through a helper class")
    simple(cat, "r14_rc2_return", 14, "RC2/CBC/PKCS5Padding", 3, "RC2 from a provider")
    simple(cat, "r14_desede_arg", 14, "DESede/CFB/NoPadding", 0, "triple DES passed on")
    simple(cat, "r16_md5_arg", 16, "MD5", 0, "MD5 passed to a helper")
    simple(cat, "r16_sha1_arg", 16, "SHA-1", 1, "SHA-1 passed to an instance helper")
    simple(cat, "r16_md4_helper", 16, "MD4", 2, "MD4 through a helper class")
    simple(cat, "r16_md2_return", 16, "MD2", 3, "MD2 from a provider")

    # interprocMulti
    cat = "interprocMulti"
    simple(cat, "r01_key_chain", 1, "deadbeefdeadbeef", 0, "key across three methods")
    simple(cat, "r02_password_chain", 2, "p@ssw0rd", 1, "password across three classes")
    simple(cat, "r02_password_deep", 2, "trustno1", 2, "password across four methods")
    simple(cat, "r03_keystore_chain", 3, "secret", 0, "keystore password across methods")
    add(cat, "r06_socket_chain", 6, "unchecked socket passed down a chain",
        r6_handoff("SocketRelay", 3))
    simple(cat, "r07_url_chain", 7, "HTTP://legacy.example.com/api", 1, "http url across classes")
    add(cat, "r08_time_chain", 8, "nanoTime seed across methods",
        r8_predictable_multi("NanoSeed"))
    add(cat, "r08_hex_seed_chain", 8, "hex seed decoded along a chain",
        fn_codec("SeedChain", 8, "c0ffee00c0ffee00", "multi"))
    add(cat, "r10_hex_salt", 10, "salt decoded from hex by a codec",
        fn_codec("HexSalt", 10, "0011223344556677", "multi"))
    simple(cat, "r11_cipher_chain", 11, "AES/ECB/PKCS5Padding", 0, "ECB mode across methods")
    simple(cat, "r12_iv_chain", 12, "fedcba9876543210", 1, "constant IV across classes")
    add(cat, "r13_bounded_iterations", 13, "normalised iteration count along a chain",
        fn_numeric("BoundedIterations", 13, 500, "multi"))
    simple(cat, "r15_small_chain", 15, 512, 0, "512-bit RSA across methods")
    simple(cat, "r14_des_chain", 14, "DES/OFB/NoPadding", 0, "DES across methods")
    simple(cat, "r14_rc4_chain", 14, "rc4", 1, "RC4 across classes")
    simple(cat, "r14_blowfish_deep", 14, "Blowfish/CTR/NoPadding", 2, "Blowfish across four methods")
    simple(cat, "r14_rc2_chain", 14, "RC2/OFB/NoPadding", 0, "RC2 across methods")
    simple(cat, "r16_md5_chain", 16, "md5", 0, "MD5 across methods")
    simple(cat, "r16_sha1_chain", 16, "SHA1", 1, "SHA1 across classes")
    simple(cat, "r16_md2_deep", 16, "MD2", 2, "MD2 across four methods")
    simple(cat, "r16_sha_chain", 16, "sha1", 0, "lower-case SHA1 across methods")

    # fieldSensitive
    cat = "fieldSensitive"
    simple(cat, "r01_key_field", 1, "fieldkey12345678", 0, "key kept in a field")
    simple(cat, "r02_password_static", 2, "admin123", 1, "password in a static constant")
    simple(cat, "r03_keystore_settings", 3, "storepass1", 2, "keystore password in a settings bean")
    simple(cat, "r07_url_store", 7, "http://cdn.example.com/assets", 3, "http url stored in another object")
    simple(cat, "r08_seed_field", 8, 1234567, 0, "seed kept in a field")
    add(cat, "r08_bounded_seed_field", 8, "normalised seed kept in a field",
        fn_numeric("BoundedSeedField", 8, 99, "field"))
    add(cat, "r10_hex_salt_field", 10, "decoded salt kept in a field",
        fn_codec("SaltField", 10, "8899aabbccddeeff", "field"))
    simple(cat, "r11_cipher_static", 11, "Twofish/ECB/NoPadding", 1, "ECB mode in a static constant")
    simple(cat, "r12_iv_settings", 12, "abcdefabcdefabcd", 2, "constant IV in a settings bean")
    add(cat, "r12_hex_iv_field", 12, "decoded IV kept in a field",
        fn_codec("IvField", 12, "0f0e0d0c0b0a0908", "field"))
    simple(cat, "r13_iterations_store", 13, 10, 3, "low iteration count stored in another object")
    simple(cat, "r14_des_field", 14, "DES/CFB/NoPadding", 0, "DES in a field")
    simple(cat, "r14_rc4_static", 14, "RC4", 1, "RC4 in a static constant")
    simple(cat, "r14_blowfish_settings", 14, "Blowfish/CFB/NoPadding", 2, "Blowfish in a settings bean")
    simple(cat, "r14_idea_store", 14, "IDEA/CFB/NoPadding", 3, "IDEA stored in another object")
    simple(cat, "r14_desede_field", 14, "3DES/CBC/PKCS5Padding", 0, "triple DES in a field")
    simple(cat, "r14_rc2_static", 14, "RC2/CBC/NoPadding", 1, "RC2 in a static constant")
    simple(cat, "r16_md5_field", 16, "MD5", 0, "MD5 in a field")
    simple(cat, "r16_sha1_settings", 16, "SHA-1", 2, "SHA-1 in a settings bean")
    simple(cat, "r16_md4_store", 16, "MD4", 3, "MD4 stored in another object")

    # fpTest: a real misuse among pseudo-influences
    cat = "fpTest"
    add(cat, "r01_key_fallback", 1, "fallback key behind a property lookup",
        fp_fallback("KeyFallback", 1, "fallback-key-0001"))
    add(cat, "r02_password_table", 2, "password picked from a table",
        fp_table("PasswordTable", 2, "s3cr3t"))
    add(cat, "r03_keystore_fallback", 3, "fallback keystore password",
        fp_fallback("StoreFallback", 3, "changeme"))
    add(cat, "r06_unchecked_verdict", 6, "verifier result ignored",
        r6_unchecked("IgnoringClient"))
    add(cat, "r08_time_seed_noise", 8, "time seed next to bookkeeping",
        prog(cls("NoisySeed", method("void run(long[])", [
            "a := param 0",
            "n = staticinvoke <java.lang.reflect.Array: int getLength(java.lang.Object)>(a)",
            "i = 0",
            "L1:",
            "if i >= n goto L2",
            "i = i + 1",
            "goto L1",
            "L2:",
            "t = staticinvoke <java.lang.System: long currentTimeMillis()>()  @@8",
            "sr = new java.security.SecureRandom",
            "specialinvoke sr.<java.security.SecureRandom: void <init>()>()",
            "sr.<java.security.SecureRandom: void setSeed(long)>(t)",
            "return"]))))
    add(cat, "r08_hex_seed_noise", 8, "hex seed next to map lookups",
        fn_codec("NoisyHexSeed", 8, "0badc0de0badc0de", "noise"))
    add(cat, "r10_salt_fallback", 10, "fallback salt behind a property lookup",
        fp_fallback("SaltFallback", 10, "pepper!!"))
    add(cat, "r12_iv_table", 12, "constant IV picked from a table",
        fp_table("IvTable", 12, "1111222233334444"))
    add(cat, "r13_iterations_table", 13, "iteration count from a small table",
        r13_array("IterationTable"))

    # correctUse
    cat = "correctUse"
    add(cat, "c01_key_from_generator", 1, "generated key through a helper",
        prog(cls("KeyFactoryUse",
                 method("javax.crypto.SecretKey fresh()", [
                     'g = staticinvoke <javax.crypto.KeyGenerator: javax.crypto.KeyGenerator getInstance(java.lang.String)>("AES")',
                     "k = g.<javax.crypto.KeyGenerator: javax.crypto.SecretKey generateKey()>()",
                     "return k"], static=True) +
                 method("void run()", [
                     "k = staticinvoke <KeyFactoryUse: javax.crypto.SecretKey fresh()>()",
                     "b = k.<javax.crypto.SecretKey: byte[] getEncoded()>()"] +
                     sink(1, "b", bytes_in=True) + ["return"]))), clean=True)
    add(cat, "c14_gcm_field", 14, "GCM transformation kept in a field",
        shape_field("GcmField", 14, "AES/GCM/NoPadding", mark=False), clean=True)
    add(cat, "c16_sha256_chain", 16, "SHA-256 passed between methods",
        shape_two("Sha256Chain", 16, "SHA-256", mark=False), clean=True)
    return cases


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "corpus")
    if os.path.isdir(out):
        shutil.rmtree(out)
    seen = set()
    for c in build():
        key = (c.category, c.ident)
        if key in seen:
            raise ValueError(f"duplicate case {key}")
        seen.add(key)
        tir, meta = c.render()
        d = os.path.join(out, c.category, c.ident)
        os.makedirs(d)
        with open(os.path.join(d, "case.tir"), "w") as f:
            f.write(tir)
        with open(os.path.join(d, "case.expect"), "w") as f:
            f.write(meta)
    print(f"wrote {len(seen)} cases to {out}")


if __name__ == "__main__":
    main()

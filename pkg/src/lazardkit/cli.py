"""Command-line front end.

Input documents are JSON objects with a ``kind`` discriminator.  Parsing is
strict: duplicate keys, unknown keys, floats, negative integers and
non-finite constants are rejected with a line and column.  Every command
produces a report with named boolean verdicts and exact integer quantities;
the machine summary is a sorted-key JSON object so identical inputs give
identical bytes.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass, field
from json.decoder import scanstring
from json.scanner import py_make_scanner

import numpy as np

from .config import GroupCheckConfig, RunConfig
from .errors import (
    HatLemmaViolation,
    HypothesesNotMet,
    InvalidLieAlgebra,
    LazardError,
    ParseError,
    SchemaError,
    SizeLimitExceeded,
)
from .padic_arith import is_prime

FORMAT_VERSION = 1
KINDS = ("algebra", "free_ideal", "extension", "census_job")
EXIT_CODES = {"verdict": 2, "input": 3, "resource": 4, "internal": 5}

# ---------------------------------------------------------------------------
# strict JSON


class LocatedDict(dict):
    """A JSON object remembering where each key started."""

    positions: dict
    start: tuple


_WS = re.compile(r"[ \t\n\r]*")


def _line_col(s: str, pos: int) -> tuple[int, int]:
    line = s.count("\n", 0, pos) + 1
    return line, pos - (s.rfind("\n", 0, pos) + 1) + 1


def _fail(s: str, msg: str, pos: int):
    line, col = _line_col(s, pos)
    raise ParseError(msg, line, col)


def _parse_object(s_and_end, strict, scan_once, object_hook, object_pairs_hook, memo=None):
    s, end = s_and_end
    start = end - 1
    pairs, positions = [], {}
    end = _WS.match(s, end).end()
    if s[end:end + 1] == "}":
        out = LocatedDict()
        out.positions, out.start = {}, _line_col(s, start)
        return out, end + 1
    while True:
        if s[end:end + 1] != '"':
            _fail(s, "expected a property name in double quotes", end)
        key_pos = end
        try:
            key, end = scanstring(s, end + 1, strict)
        except json.JSONDecodeError as exc:
            _fail(s, exc.msg, exc.pos)
        end = _WS.match(s, end).end()
        if s[end:end + 1] != ":":
            _fail(s, "expected ':'", end)
        end = _WS.match(s, end + 1).end()
        try:
            value, end = scan_once(s, end)
        except StopIteration as exc:
            _fail(s, "expected a value", exc.value)
        if key in positions:
            _fail(s, f"duplicate key {key!r}", key_pos)
        positions[key] = _line_col(s, key_pos)
        pairs.append((key, value))
        end = _WS.match(s, end).end()
        ch = s[end:end + 1]
        if ch == "}":
            end += 1
            break
        if ch != ",":
            _fail(s, "expected ',' or '}'", end)
        end = _WS.match(s, end + 1).end()
    out = LocatedDict(pairs)
    out.positions, out.start = positions, _line_col(s, start)
    return out, end


def _reject_float(text):
    raise ValueError(f"non-integer number {text}")


def _reject_constant(text):
    raise ValueError(f"constant {text} is not allowed")


def strict_loads(text: str):
    dec = json.JSONDecoder(parse_float=_reject_float, parse_constant=_reject_constant, strict=True)
    dec.parse_object = _parse_object
    dec.scan_once = py_make_scanner(dec)
    try:
        return dec.decode(text)
    except ParseError:
        raise
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1) from None
    except RecursionError:
        raise ParseError("document nested too deeply", 1, 1) from None


# ---------------------------------------------------------------------------
# schema


@dataclass
class InputDocument:
    kind: str
    version: int
    body: dict
    text: str = field(default="", repr=False)


def _loc(obj, key=None):
    if isinstance(obj, LocatedDict):
        if key is not None and key in obj.positions:
            return obj.positions[key]
        return obj.start
    return (None, None)


def _schema(msg, obj, key, path):
    line, col = _loc(obj, key)
    raise SchemaError(msg, path, line, col)


def _check_keys(obj, required, optional, path, parent=None, parent_key=None):
    if not isinstance(obj, dict):
        line, col = _loc(parent, parent_key)
        raise SchemaError("expected an object", path or "<top>", line or 1, col or 1)
    for k in obj:
        if k not in required and k not in optional:
            _schema("unknown key", obj, k, f"{path}.{k}" if path else k)
    for k in required:
        if k not in obj:
            _schema("missing key", obj, None, f"{path}.{k}" if path else k)


def _int(obj, key, path, minimum=0):
    v = obj[key]
    name = f"{path}.{key}" if path else key
    if isinstance(v, bool) or not isinstance(v, int):
        _schema("expected an integer", obj, key, name)
    if v < minimum:
        _schema("integers must be non-negative" if minimum == 0 else f"must be at least {minimum}", obj, key, name)
    return v


def _int_list(obj, key, path, minimum=0):
    v = obj[key]
    name = f"{path}.{key}" if path else key
    if not isinstance(v, list):
        _schema("expected a list of integers", obj, key, name)
    for x in v:
        if isinstance(x, bool) or not isinstance(x, int):
            _schema("expected a list of integers", obj, key, name)
        if x < minimum:
            _schema("integers must be non-negative" if minimum == 0 else f"entries must be at least {minimum}", obj, key, name)
    return v


def _matrix(obj, key, path, width=None):
    v = obj[key]
    name = f"{path}.{key}" if path else key
    if not isinstance(v, list):
        _schema("expected a list of rows", obj, key, name)
    for row in v:
        if not isinstance(row, list) or any(isinstance(x, bool) or not isinstance(x, int) or x < 0 for x in row):
            _schema("rows must be lists of non-negative integers", obj, key, name)
        if width is not None and len(row) != width:
            _schema(f"rows must have length {width}", obj, key, name)
    return v


def _prime(obj, key, path):
    p = _int(obj, key, path)
    if not is_prime(p):
        _schema("p must be prime", obj, key, f"{path}.{key}" if path else key)
    return p


def _validate_algebra(obj, path, top):
    req, opt = ("p", "orders"), ("brackets", "name") + (("kind", "version") if top else ())
    _check_keys(obj, req, opt, path)
    _prime(obj, "p", path)
    n = len(_int_list(obj, "orders", path, minimum=1))
    if "name" in obj and not isinstance(obj["name"], str):
        _schema("expected a string", obj, "name", f"{path}.name" if path else "name")
    brs = obj.get("brackets", [])
    if not isinstance(brs, list):
        _schema("expected a list", obj, "brackets", "brackets")
    seen = set()
    for idx, b in enumerate(brs):
        bp = f"{path + '.' if path else ''}brackets[{idx}]"
        _check_keys(b, ("i", "j", "coeffs"), (), bp, obj, "brackets")
        i, j = _int(b, "i", bp, 1), _int(b, "j", bp, 1)
        if not i < j <= n:
            _schema(f"need 1 <= i < j <= {n}", b, "i", bp)
        if (i, j) in seen:
            _schema("pair listed twice", b, "i", bp)
        seen.add((i, j))
        co = b["coeffs"]
        if not isinstance(co, list):
            _schema("expected a list of [k, c] pairs", b, "coeffs", f"{bp}.coeffs")
        for pair in co:
            ok = isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in pair)
            if not ok or pair[1] < 0 or not 1 <= pair[0] <= n:
                _schema(f"coefficients are [k, c] with 1 <= k <= {n} and c >= 0", b, "coeffs", f"{bp}.coeffs")


def _validate_free_ideal(obj):
    _check_keys(obj, ("p", "d", "c", "generators"), ("kind", "version"), "")
    p = _prime(obj, "p", "")
    d, c = _int(obj, "d", "", 1), _int(obj, "c", "", 1)
    if c >= p:
        _schema("class must be below p", obj, "c", "c")
    from .hat_construction import hall_basis

    _matrix(obj, "generators", "", width=len(hall_basis(d, c)))


def _validate_extension(obj):
    _check_keys(obj, ("algebra", "kernel"), ("kind", "version", "subgroup", "class"), "")
    _check_keys(obj["algebra"], (), ("p", "orders", "brackets", "name"), "algebra", obj, "algebra")
    _validate_algebra(obj["algebra"], "algebra", top=False)
    n = len(obj["algebra"]["orders"])
    _matrix(obj, "kernel", "", width=n)
    if "subgroup" in obj:
        _matrix(obj, "subgroup", "", width=n)
    if "class" in obj:
        _int(obj, "class", "", 1)


def _validate_census_job(obj):
    _check_keys(obj, ("p", "d", "c"), ("kind", "version", "k", "instances", "workers"), "")
    p = _prime(obj, "p", "")
    d, c = _int(obj, "d", "", 1), _int(obj, "c", "", 1)
    if c >= p:
        _schema("class must be below p", obj, "c", "c")
    if "k" in obj:
        _int(obj, "k", "", 1)
    if "workers" in obj:
        _int(obj, "workers", "", 1)
    if "instances" in obj:
        from .hat_construction import hall_basis

        inst = obj["instances"]
        if not isinstance(inst, list):
            _schema("expected a list", obj, "instances", "instances")
        labels = set()
        for idx, rec in enumerate(inst):
            ip = f"instances[{idx}]"
            _check_keys(rec, ("label", "generators"), (), ip, obj, "instances")
            if not isinstance(rec["label"], str) or rec["label"] in labels:
                _schema("labels must be distinct strings", rec, "label", f"{ip}.label")
            labels.add(rec["label"])
            _matrix(rec, "generators", ip, width=len(hall_basis(d, c)))


_VALIDATORS = {
    "algebra": lambda obj: _validate_algebra(obj, "", top=True),
    "free_ideal": _validate_free_ideal,
    "extension": _validate_extension,
    "census_job": _validate_census_job,
}


def parse_input(text: str) -> InputDocument:
    obj = strict_loads(text)
    if not isinstance(obj, dict):
        raise SchemaError("top level must be an object", None, 1, 1)
    if "kind" not in obj:
        _schema("missing key", obj, None, "kind")
    kind = obj["kind"]
    if kind not in KINDS:
        _schema(f"kind must be one of {', '.join(KINDS)}", obj, "kind", "kind")
    version = FORMAT_VERSION
    if "version" in obj:
        version = _int(obj, "version", "")
        if version != FORMAT_VERSION:
            _schema(f"unsupported format version (expected {FORMAT_VERSION})", obj, "version", "version")
    _VALIDATORS[kind](obj)
    return InputDocument(kind, version, obj, text)


# ---------------------------------------------------------------------------
# documents to objects and back


def algebra_from_body(body: dict, validate: bool = True):
    from .lie_core import FiniteLieAlgebra

    brackets = {}
    for b in body.get("brackets", []):
        vec = {}
        for k, c in b["coeffs"]:
            vec[k - 1] = vec.get(k - 1, 0) + c
        brackets[(b["i"] - 1, b["j"] - 1)] = vec
    return FiniteLieAlgebra.from_brackets(body["p"], body["orders"], brackets, validate=validate,
                                          name=body.get("name"))


def algebra_to_document(L) -> dict:
    brackets = []
    for i in range(L.n):
        for j in range(i + 1, L.n):
            co = [[k + 1, int(L.C[i, j, k])] for k in range(L.n) if int(L.C[i, j, k])]
            if co:
                brackets.append({"i": i + 1, "j": j + 1, "coeffs": co})
    return {"kind": "algebra", "version": FORMAT_VERSION, "p": int(L.p), "orders": list(L.orders), "brackets": brackets}


def free_ideal_document(d: int, c: int, p: int, generators) -> dict:
    return {"kind": "free_ideal", "version": FORMAT_VERSION, "p": p, "d": d, "c": c,
            "generators": [[int(x) for x in row] for row in generators]}


# ---------------------------------------------------------------------------
# reports


@dataclass
class Report:
    command: str
    verdicts: dict = field(default_factory=dict)
    quantities: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    lines: list = field(default_factory=list)
    exit_code: int | None = None

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())

    def status(self) -> int:
        if self.exit_code is not None:
            return self.exit_code
        return 0 if self.ok else EXIT_CODES["verdict"]

    def summary(self) -> dict:
        fails = list(self.failures)
        fails += [{"verdict": k} for k, v in sorted(self.verdicts.items()) if not v]
        return {
            "command": self.command,
            "verdicts": {k: bool(v) for k, v in self.verdicts.items()},
            "quantities": {k: int(v) for k, v in self.quantities.items()},
            "failures": fails,
        }

    def summary_json(self) -> str:
        return json.dumps(self.summary(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def text(self, timestamp: str | None = None) -> str:
        out = []
        if timestamp:
            out.append(f"generated {timestamp}")
        out.append(f"command: {self.command}")
        out.extend(self.lines)
        for k in sorted(self.verdicts):
            out.append(f"  [{'PASS' if self.verdicts[k] else 'FAIL'}] {k}")
        for k in sorted(self.quantities):
            out.append(f"  {k} = {self.quantities[k]}")
        for f in self.failures:
            out.append("  failure: " + ", ".join(f"{k}={v}" for k, v in sorted(f.items())))
        return "\n".join(out) + "\n"


def _prefixed(prefix: str, d: dict) -> dict:
    return {f"{prefix}{k}": v for k, v in d.items()}


def _sizes(L, cfg: RunConfig):
    if cfg.max_order is not None and L.order > cfg.max_order:
        raise SizeLimitExceeded(f"|L| = {L.order} exceeds --max-order {cfg.max_order}")


def _group(L, cfg: RunConfig):
    from .lazard_group import LazardGroup

    _sizes(L, cfg)
    cap = GroupCheckConfig().element_cap if cfg.max_order is None else cfg.max_order
    return LazardGroup(L, element_cap=cap)


def _want(doc: InputDocument, *kinds):
    if doc is None or doc.kind not in kinds:
        got = "nothing" if doc is None else doc.kind
        raise SchemaError(f"command needs a {' or '.join(kinds)} document, got {got}", "kind",
                          *(_loc(doc.body, "kind") if doc is not None else (None, None)))


def _override_prime(doc: InputDocument, cfg: RunConfig):
    p = doc.body["algebra"]["p"] if doc.kind == "extension" else doc.body["p"]
    if cfg.prime is not None and cfg.prime != p:
        raise SchemaError(f"--prime {cfg.prime} disagrees with the document", "p", *_loc(doc.body, "p"))


def cmd_check(doc, cfg):
    from .lie_core import check_axioms, nilpotency_class

    _want(doc, "algebra")
    _override_prime(doc, cfg)
    L = algebra_from_body(doc.body, validate=False)
    rep = check_axioms(L)
    kinds = {v[0] for v in rep.violations}
    r = Report("check")
    r.verdicts = {name: name not in kinds for name in ("antisymmetry", "jacobi", "well-defined")}
    r.quantities = {"n": L.n, "log_p |L|": L.order_exponent}
    if rep.valid:
        try:
            r.quantities["class"] = nilpotency_class(L)
            r.verdicts["nilpotent"] = True
        except InvalidLieAlgebra:
            r.verdicts["nilpotent"] = False
    r.failures = [{"axiom": k, "indices": list(ix)} for k, ix in rep.violations[:50]]
    return r


def cmd_bch(doc, cfg):
    from .bch_engine import bch_series, dynkin_series, verify_p_integrality, verify_round_trip

    c = cfg.nilpotency_class or 3
    s = bch_series(c)
    r = Report("bch")
    r.lines = ["  " + ln for ln in s.lines()]
    r.verdicts["round-trip"] = verify_round_trip(s) if c <= 6 else True
    if c <= 4:
        r.verdicts["dynkin-agreement"] = dynkin_series(c).as_dict() == s.as_dict()
    r.quantities = {"class": c, "terms": len(s.coefficients), "max denominator": max(s.denominators())}
    if cfg.prime is not None:
        if not is_prime(cfg.prime):
            raise SchemaError("p must be prime", "--prime")
        r.quantities["p"] = cfg.prime
        r.verdicts["p-integrality"] = verify_p_integrality(s, cfg.prime)
    return r


def cmd_lazard(doc, cfg):
    from .lazard_group import (
        correspondence_checks,
        gp_is_powerful_pcentral_omegaep,
        group_axioms,
        rank_bound_check,
    )

    _want(doc, "algebra")
    _override_prime(doc, cfg)
    gc = GroupCheckConfig()
    L = algebra_from_body(doc.body)
    G = _group(L, cfg)
    rng = np.random.default_rng(gc.seed)
    r = Report("lazard")
    r.verdicts.update(_prefixed("axiom:", group_axioms(G, rng, samples=gc.samples, exhaustive_order=gc.exhaustive_order)))
    r.verdicts.update(correspondence_checks(L, rng, samples=gc.correspondence_samples))
    rb = rank_bound_check(G)
    r.verdicts.update(_prefixed("rank:", rb.verdicts))
    r.quantities = {"log_p |G|": L.order_exponent, "class": G.nilpotency_class, **rb.quantities}
    return r


def _ideal_generators(doc):
    b = doc.body
    return b["d"], b["c"], b["p"], b["generators"]


def cmd_hat(doc, cfg):
    from .hat_construction import build_hat_algebra, build_hat_ideal, free_ideal, hat_quotient, rank_bound_report
    from .hat_construction import index_exponent_hat_over_free
    from .lie_core import omega_1

    _want(doc, "free_ideal")
    _override_prime(doc, cfg)
    d, c, p, gens = _ideal_generators(doc)
    ideal = free_ideal(d, c, p, gens)
    A = build_hat_algebra(d, c, p, ideal.E0 + c)
    hq = hat_quotient(A, build_hat_ideal(A, ideal))
    rb = rank_bound_report(A)
    if not hq.checks["hat-ideal-lemma"]:
        raise HatLemmaViolation("[Î, L̂] is not contained in pÎ")
    r = Report("hat")
    r.verdicts = dict(hq.checks)
    r.verdicts["bound-hat-rank"] = rb.holds
    r.quantities = {
        "d": d, "c": c, "p": p, "E0": ideal.E0,
        "hat rank": A.rank, "hat rank bound": rb.bound,
        "log_p |hat : free|": index_exponent_hat_over_free(A),
        "log_p |hat quotient|": hq.algebra.order_exponent,
        "omega_1 rank": omega_1(hq.algebra).order_exponent if hq.algebra.n else 0,
    }
    return r


def cmd_structure(doc, cfg):
    _want(doc, "free_ideal", "algebra")
    _override_prime(doc, cfg)
    r = Report("structure")
    if doc.kind == "free_ideal":
        from .hat_construction import structure_pipeline

        d, c, p, gens = _ideal_generators(doc)
        rep = structure_pipeline(d, c, p, gens)
        r.verdicts, r.quantities = dict(rep.verdicts), dict(rep.quantities)
        r.quantities["|J|"] = p ** rep.kernel.order_exponent
        r.quantities["embedding index"] = p ** rep.quantities["log_p image index"]
        return r
    from .lazard_group import group_structure_pipeline

    gc = GroupCheckConfig()
    L = algebra_from_body(doc.body)
    G = _group(L, cfg)
    rep = group_structure_pipeline(G, rng=np.random.default_rng(gc.seed))
    r.verdicts, r.quantities = dict(rep.verdicts), dict(rep.quantities)
    r.quantities["|N|"] = L.p ** rep.N.order_exponent
    r.quantities["embedding index"] = L.p ** rep.quantities["log_p image index"]
    return r


def cmd_carlson(doc, cfg):
    from .lazard_group import Subgroup, carlson_subgroup, extension_from_normal, normal_closure, subgroup_generated
    from .lie_core import Sublattice

    _want(doc, "extension")
    _override_prime(doc, cfg)
    L = algebra_from_body(doc.body["algebra"])
    G = _group(L, cfg)
    N = normal_closure(G, np.asarray(doc.body["kernel"], dtype=object).reshape(-1, L.n))
    ext = extension_from_normal(G, N)
    gc = GroupCheckConfig()
    r = Report("carlson")
    r.verdicts.update(_prefixed("extension:", ext.checks(np.random.default_rng(gc.seed))))
    if "subgroup" in doc.body:
        S = np.asarray(doc.body["subgroup"], dtype=object).reshape(-1, L.n)
        imgs = ext.projection.apply_many(S) if S.shape[0] else np.zeros((0, ext.Q.n), dtype=object)
        A = subgroup_generated(ext.Q, imgs)
    else:
        A = ext.Q.whole()
    c = cfg.nilpotency_class or doc.body.get("class")
    rep = carlson_subgroup(ext, A, c=c)
    r.verdicts.update(rep.verdicts)
    r.quantities = dict(rep.quantities)
    r.quantities["log_p |N|"] = N.order_exponent
    return r


def cmd_cohomology(doc, cfg):
    from .cohomology_invariants import CohomologyShape, poincare_coefficients, shape_consistency, weigel_checks
    from .lie_core import omega_1

    _want(doc, "algebra")
    _override_prime(doc, cfg)
    L = algebra_from_body(doc.body)
    _sizes(L, cfg)
    r = Report("cohomology")
    r.verdicts = weigel_checks(L)
    failed = [k for k, v in r.verdicts.items() if not v]
    if failed:
        r.failures.append({"hypotheses-not-met": ",".join(failed)})
        return r
    shape = CohomologyShape(omega_1(L).order_exponent)
    r.verdicts.update(shape_consistency(L, shape))
    r.lines.append(f"  shape: {shape.description}")
    r.lines.append(f"  poincare series: {shape.poincare().closed_form()}")
    r.quantities["e"] = shape.e
    for n, a in enumerate(poincare_coefficients(shape, 10)):
        r.quantities[f"poincare[{n:02d}]"] = a
    return r


def cmd_census(doc, cfg):
    from .cohomology_invariants import census

    if doc is not None:
        _want(doc, "census_job")
        b = doc.body
        p, d, c = b["p"], b["d"], b["c"]
        k = b.get("k")
        workers = b.get("workers", cfg.workers)
        inst = [(x["label"], x["generators"]) for x in b["instances"]] if "instances" in b else None
        _override_prime(doc, cfg)
    else:
        if cfg.prime is None or cfg.nilpotency_class is None:
            raise SchemaError("census without a job document needs --prime and --class", "--prime")
        p, c = cfg.prime, cfg.nilpotency_class
        d, k, workers, inst = 2, None, cfg.workers, None
        if not is_prime(p):
            raise SchemaError("p must be prime", "--prime")
        if c >= p:
            raise SchemaError("class must be below p", "--class")
    rep = census(p, d, c, instances=inst, k=k, workers=max(workers, cfg.workers))
    s = rep.summary()
    r = Report("census", dict(s["verdicts"]), dict(s["quantities"]))
    r.failures = list(s["failures"])
    for bk in s["buckets"]:
        r.lines.append(f"  bucket {json.dumps(bk['key'])}: {bk['count']}")
    return r


COMMANDS = {
    "check": cmd_check,
    "bch": cmd_bch,
    "lazard": cmd_lazard,
    "hat": cmd_hat,
    "structure": cmd_structure,
    "carlson": cmd_carlson,
    "cohomology": cmd_cohomology,
    "census": cmd_census,
}
NEEDS_DOCUMENT = {"check", "lazard", "hat", "structure", "carlson", "cohomology"}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lazardkit", description="Finite Lie algebras and p-groups of class below p.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("input", nargs="?", help="JSON input document ('-' for stdin)")
    ap.add_argument("--prime", type=int)
    ap.add_argument("--class", dest="nilpotency_class", type=int)
    ap.add_argument("--max-order", type=int, help="refuse algebras larger than this")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--summary-out", help="write the JSON summary here")
    ap.add_argument("--timestamps", action="store_true", help="stamp the human-readable report")
    return ap


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.buffer.read().decode("utf-8")
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        line = raw[: exc.start].count(b"\n") + 1
        raise ParseError("input is not UTF-8", line, exc.start - raw.rfind(b"\n", 0, exc.start)) from None


def run_command(cmd: str, doc: InputDocument | None, cfg: RunConfig | None = None) -> Report:
    cfg = cfg or RunConfig()
    if cmd not in COMMANDS:
        raise SchemaError(f"unknown command {cmd!r}", "command")
    if cmd in NEEDS_DOCUMENT and doc is None:
        raise SchemaError("this command needs an input document", "input")
    return COMMANDS[cmd](doc, cfg)


def error_report(cmd: str, exc: LazardError) -> Report:
    f = {"error": type(exc).__name__, "category": exc.category, "message": str(exc)}
    for attr in ("line", "column", "key"):
        v = getattr(exc, attr, None)
        if v is not None:
            f[attr] = v
    if isinstance(exc, HypothesesNotMet):
        f["failed"] = ",".join(exc.failed)
    return Report(cmd, failures=[f], exit_code=EXIT_CODES.get(exc.category, 5))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(args.prime, args.nilpotency_class, args.max_order, args.workers, args.summary_out, args.timestamps)
    try:
        doc = parse_input(_read(args.input)) if args.input else None
        report = run_command(args.command, doc, cfg)
    except LazardError as exc:
        report = error_report(args.command, exc)
        print(f"error: {exc}", file=sys.stderr)
    except OSError as exc:
        report = Report(args.command, failures=[{"error": "OSError", "category": "input", "message": str(exc)}],
                        exit_code=EXIT_CODES["input"])
        print(f"error: {exc}", file=sys.stderr)
    stamp = time.strftime("%Y-%m-%dT%H:%M:%S") if cfg.timestamps else None
    sys.stdout.write(report.text(stamp))
    if cfg.summary_out:
        with open(cfg.summary_out, "w", encoding="utf-8") as fh:
            fh.write(report.summary_json())
    return report.status()


if __name__ == "__main__":
    sys.exit(main())

"""JSON documents: problems in, results out, one flat entry list for every tower."""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from importlib import resources

import jsonschema

from .graded import ChainComplex, ChainMap, GradedModule, HomModule
from .hhc import MultiMap, UnitData, end_algebra, hom_of
from .resolution import Resolution
from .ring import BaseRing
from .structures import AnModuleStructure, AnStructure

__all__ = [
    "ParseError",
    "load_document",
    "dump_document",
    "document_hash",
    "coeff_to_json",
    "complex_to_json",
    "complex_from_json",
    "tower_to_json",
    "tower_from_json",
    "algebra_to_json",
    "algebra_from_json",
    "module_to_json",
    "module_from_json",
    "resolution_to_json",
    "resolution_from_json",
    "algebra_from_problem",
    "module_from_problem",
]


class ParseError(ValueError):
    pass


def _schema():
    text = resources.files("ainftransfer").joinpath("schema.json").read_text()
    return json.loads(text)


def load_document(path) -> dict:
    """Read and validate a problem or result document."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    try:
        jsonschema.validate(doc, _schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ParseError(f"{path}: at {where}: {exc.message}") from exc
    return doc


def dump_document(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def document_hash(doc: dict) -> str:
    return hashlib.sha256(json.dumps(doc, sort_keys=True).encode()).hexdigest()


# ---------------------------------------------------------------------------
# scalars, modules, complexes
# ---------------------------------------------------------------------------


def coeff_to_json(c):
    if isinstance(c, Fraction):
        return str(c) if c.denominator != 1 else c.numerator
    return int(c)


def _coeff(ring: BaseRing, c):
    try:
        return ring.parse(c) if isinstance(c, str) else ring(c)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad coefficient {c!r}: {exc}") from exc


def _label_index(M: GradedModule, label: str) -> int:
    if isinstance(M, HomModule):
        if "->" not in label:
            raise ParseError(f"Hom generator {label!r} must read 'source->target'")
        a, b = label.split("->", 1)
        return M.index[_label_index(M.source, a), _label_index(M.target, b)]
    if label not in M.index:
        raise ParseError(f"unknown generator {label!r} in {M.name or 'module'}")
    return M.index[label]


def _element(M: GradedModule, data: dict) -> dict:
    ring = M.ring
    out = {}
    for lab, c in data.items():
        i = _label_index(M, lab)
        out[i] = ring(out.get(i, 0) + _coeff(ring, c))
    return M.reduce(out)


def _element_json(M: GradedModule, x: dict) -> dict:
    return {M.name_of(i): coeff_to_json(c) for i, c in sorted(x.items())}


def complex_to_json(C: ChainComplex) -> dict:
    M = C.module
    return {
        "name": M.name,
        "gens": [[M.name_of(i), M.degrees[i]] for i in range(len(M))],
        "relations": [_element_json(M, r) for r in M.relations],
        "differential": {M.name_of(i): _element_json(M, v) for i, v in sorted(C.differential.items()) if v},
        "complete": C.complete,
        "unbounded_below": C.unbounded_below,
    }


def complex_from_json(ring: BaseRing, d: dict, name: str = "") -> ChainComplex:
    gens = [(str(lab), int(deg)) for lab, deg in d["gens"]]
    M = GradedModule(ring, gens, name=d.get("name", name))
    rels = [_element(M, r) for r in d.get("relations", [])]
    if rels:
        M = GradedModule(ring, gens, [{M.labels[i]: c for i, c in r.items()} for r in rels], name=M.name)
    diff = {}
    for lab, img in d.get("differential", {}).items():
        diff[_label_index(M, lab)] = _element(M, img)
    C = ChainComplex(M, diff, complete=d.get("complete", True), unbounded_below=d.get("unbounded_below", False))
    if not C.check_d_squared():
        raise ParseError(f"complex {M.name!r}: d o d != 0")
    return C


# ---------------------------------------------------------------------------
# towers
# ---------------------------------------------------------------------------


def tower_to_json(x: MultiMap, role: str) -> dict:
    S, T = x.source, x.target
    entries = []
    for key in sorted(x.comps, key=lambda k: (len(k), k)):
        for j, c in sorted(x.comps[key].items()):
            entries.append([len(key), [S.degrees[i] for i in key], [S.name_of(i) for i in key], T.name_of(j), coeff_to_json(c)])
    return {"role": role, "degree": x.degree, "lrange": list(x.lrange), "entries": entries}


def tower_from_json(d: dict, source: GradedModule, target: GradedModule) -> MultiMap:
    ring = target.ring
    comps: dict = {}
    for entry in d["entries"]:
        l, degs, labels, tgt, c = entry
        if len(labels) != l or len(degs) != l:
            raise ParseError(f"entry {entry}: tensor degree does not match the source list")
        key = tuple(_label_index(source, lab) for lab in labels)
        if [source.degrees[i] for i in key] != list(degs):
            raise ParseError(f"entry {entry}: multidegree does not match the source generators")
        j = _label_index(target, tgt)
        val = comps.setdefault(key, {})
        val[j] = ring(val.get(j, 0) + _coeff(ring, c))
    try:
        return MultiMap(source, target, int(d["degree"]), comps, tuple(d["lrange"]))
    except ValueError as exc:
        raise ParseError(f"tower ({d.get('role')}): {exc}") from exc


# ---------------------------------------------------------------------------
# structures
# ---------------------------------------------------------------------------


def algebra_to_json(S: AnStructure) -> dict:
    M = S.module
    return {
        "complex": complex_to_json(S.complex),
        "unit": M.name_of(S.unit.index) if S.unit is not None else None,
        "augmentation": [M.name_of(i) for i in S.augmentation] if S.augmentation is not None else None,
        "level": S.level,
        "window": None if S.window == float("inf") else S.window,
        "tower": tower_to_json(S.nu, "structure"),
    }


def algebra_from_json(ring: BaseRing, d: dict, C: ChainComplex | None = None) -> AnStructure:
    C = C or complex_from_json(ring, d["complex"], "A")
    M = C.module
    nu = tower_from_json(d["tower"], M, M)
    unit = UnitData(M, _label_index(M, d["unit"])) if d.get("unit") is not None else None
    aug = tuple(_label_index(M, g) for g in d["augmentation"]) if d.get("augmentation") is not None else None
    window = d.get("window")
    return AnStructure(C, nu, d.get("level"), unit, aug, window=float("inf") if window is None else window)


def module_to_json(S: AnModuleStructure) -> dict:
    return {"complex": complex_to_json(S.complex), "level": S.level, "tower": tower_to_json(S.p, "module")}


def module_from_json(ring: BaseRing, d: dict, algebra: AnStructure, C: ChainComplex | None = None) -> AnModuleStructure:
    C = C or complex_from_json(ring, d["complex"], "M")
    end = end_algebra(C)
    p = tower_from_json(d["tower"], algebra.module, end.module)
    return AnModuleStructure(algebra, C, p, d.get("level"), end)


def resolution_to_json(R: Resolution) -> dict:
    A, B = R.A.module, R.B.module
    return {
        "complex": complex_to_json(R.A),
        "target": complex_to_json(R.B),
        "map": {A.name_of(i): _element_json(B, v) for i, v in sorted(R.q.images.items())},
        "unit": A.name_of(R.unit.index) if R.unit is not None else None,
        "complete": R.complete,
        "valid_through": "inf" if R.valid_through == float("inf") else int(R.valid_through),
    }


def resolution_from_json(ring: BaseRing, d: dict, A: ChainComplex | None = None, B: ChainComplex | None = None) -> Resolution:
    A = A or complex_from_json(ring, d["complex"], "A")
    B = B or complex_from_json(ring, d["target"], "B")
    images = {_label_index(A.module, lab): _element(B.module, img) for lab, img in d["map"].items()}
    q = ChainMap(A, B, images)
    if not q.is_chain_map():
        raise ParseError("resolution map is not a chain map")
    unit = UnitData(A.module, _label_index(A.module, d["unit"])) if d.get("unit") else None
    vt = float("inf") if d["valid_through"] == "inf" else int(d["valid_through"])
    return Resolution(A, q, unit, vt, bool(d["complete"]))


# ---------------------------------------------------------------------------
# problem documents
# ---------------------------------------------------------------------------


def algebra_from_problem(ring: BaseRing, d: dict) -> AnStructure:
    """The input algebra from a multiplication table or from a raw tower."""
    C = complex_from_json(ring, d["complex"], "B")
    M = C.module
    if "tower" in d:
        return algebra_from_json(ring, d, C)
    products = {}
    for a, b, img in d.get("products", []):
        products[str(a), str(b)] = {M.labels[i]: c for i, c in _element(M, img).items()}
    S = AnStructure.from_products(C, products, unit=d.get("unit"), augmentation=d.get("augmentation"))
    return S


def module_from_problem(ring: BaseRing, d: dict, algebra: AnStructure) -> AnModuleStructure:
    if "tower" in d:
        return module_from_json(ring, d, algebra)
    C = complex_from_json(ring, d["complex"], "M")
    M = C.module
    action = {}
    for b, m, img in d.get("action", []):
        action[str(b), str(m)] = {M.labels[i]: c for i, c in _element(M, img).items()}
    return AnModuleStructure.from_action(algebra, C, action)


def hom_module(S: AnModuleStructure, T: AnModuleStructure) -> HomModule:
    return hom_of(S.module, T.module)

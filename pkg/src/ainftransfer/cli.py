"""Command line front end: ``ainftransfer <command> ...``.

Exit codes: 0 ok, 1 verification failure, 2 hypothesis failure, 3 parse
error, 4 window error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import io
from .graded import GradingError, WindowError
from .hhc import (
    Verdict,
    check_an_algebra,
    check_an_homotopy,
    check_an_morphism,
    check_module_homotopy,
    check_module_morphism,
    clip,
    hom_of,
    is_strictly_unital,
    postcompose,
    star,
    strict_map,
)
from .resolution import free_resolution, is_semiprojective_witness
from .ring import BaseRing, RingError
from .structures import AnModuleStructure, AnStructure
from .transfer import (
    HomotopyFailure,
    HypothesisError,
    build_homotopy,
    build_module_homotopy,
    compose_module_morphisms,
    compose_morphisms,
    h0_vanishing_check,
    identity_module_morphism,
    identity_morphism,
    joint_bound,
    lift_module_morphism,
    lift_morphism,
    post_hom_map,
    pre_hom_map,
    restrict_module,
    strict_module_morphism,
    transfer_algebra,
    transfer_module,
)

EXIT_OK, EXIT_VERIFY, EXIT_HYPOTHESIS, EXIT_PARSE, EXIT_WINDOW = 0, 1, 2, 3, 4


class VerificationFailure(Exception):
    def __init__(self, report):
        super().__init__("verification failed")
        self.report = report


class Loader:
    """Rebuilds objects from documents, sharing one complex object per distinct complex."""

    def __init__(self, ring: BaseRing):
        self.ring = ring
        self._complexes: dict = {}

    def complex(self, d: dict):
        key = json.dumps(d, sort_keys=True)
        if key not in self._complexes:
            self._complexes[key] = io.complex_from_json(self.ring, d)
        return self._complexes[key]

    def algebra(self, d: dict) -> AnStructure:
        return io.algebra_from_json(self.ring, d, self.complex(d["complex"]))

    def module(self, d: dict, algebra: AnStructure) -> AnModuleStructure:
        return io.module_from_json(self.ring, d, algebra, self.complex(d["complex"]))

    def resolution(self, d: dict):
        return io.resolution_from_json(self.ring, d, self.complex(d["complex"]), self.complex(d["target"]))


def _ring(doc) -> BaseRing:
    try:
        return BaseRing.from_name(doc["ring"])
    except RingError as exc:
        raise io.ParseError(str(exc)) from exc


def _params(doc, args) -> dict:
    p = dict(doc.get("params", {}))
    for name in ("level", "depth", "seed"):
        v = getattr(args, name, None)
        if v is not None:
            p[name] = v
    if getattr(args, "mode", None):
        p["mode"] = args.mode
    if getattr(args, "window", None):
        p["window"] = args.window
    mode = p.get("mode", "plain")
    seed = p.get("seed")
    if mode == "random" and seed is None:
        seed = 0
    if mode == "deterministic":
        seed = None
    p["seed"] = seed
    p["transfer_mode"] = "augmented" if mode == "augmented" else "plain"
    return p


def _result(command, ring, inputs, **objects) -> dict:
    doc = {"kind": "result", "ring": ring.name, "command": command, "input_sha256": [io.document_hash(d) for d in inputs]}
    doc.update({k: v for k, v in objects.items() if v is not None})
    return doc


def _cert_json(cert) -> dict:
    return cert.to_dict()


def _default_depth(level: int) -> int:
    return max(level + 1, 3)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_resolve(doc, args) -> dict:
    ring = _ring(doc)
    p = _params(doc, args)
    src = doc.get("complex") or (doc.get("algebra") or {}).get("complex")
    if src is None:
        raise io.ParseError("resolve needs a 'complex' (or 'algebra.complex') to resolve")
    unit = doc.get("unit", (doc.get("algebra") or {}).get("unit"))
    B = io.complex_from_json(ring, src, "B")
    R = free_resolution(B, p.get("depth", 4), unit=unit)
    sp = is_semiprojective_witness(R.A)
    cert = {
        "semiprojective": sp.witness if sp else False,
        "surjective_quasi_iso": R.witness,
        "complete": R.complete,
    }
    return _result("resolve", ring, [doc], resolution=io.resolution_to_json(R), certificate=cert)


def _window(p):
    w = p.get("window")
    return tuple(w) if w is not None else None


def cmd_transfer_algebra(doc, args) -> dict:
    ring = _ring(doc)
    p = _params(doc, args)
    if "algebra" not in doc:
        raise io.ParseError("transfer-algebra needs an 'algebra' section")
    B = io.algebra_from_problem(ring, doc["algebra"])
    N = p.get("level", 4)
    R = free_resolution(B.complex, p.get("depth", _default_depth(N)), unit=B.module.name_of(B.unit.index) if B.unit else None)
    A, cert = transfer_algebra(B, R, N, mode=p["transfer_mode"], seed=p["seed"], window=_window(p))
    return _result(
        "transfer-algebra",
        ring,
        [doc],
        base=io.algebra_to_json(B),
        algebra=io.algebra_to_json(A),
        resolution=io.resolution_to_json(R),
        certificate=_cert_json(cert),
    )


def cmd_transfer_module(doc, args) -> dict:
    ring = _ring(doc)
    p = _params(doc, args)
    if "algebra" not in doc or "module" not in doc:
        raise io.ParseError("transfer-module needs 'algebra' and 'module' sections")
    B = io.algebra_from_problem(ring, doc["algebra"])
    M = io.module_from_problem(ring, doc["module"], B)
    N = p.get("level", 4)
    depth = p.get("depth", _default_depth(N))
    R = free_resolution(B.complex, depth, unit=B.module.name_of(B.unit.index))
    A, cert_a = transfer_algebra(B, R, N, seed=p["seed"], window=_window(p))
    MA = restrict_module(M, A, R.q)
    labels = doc["module"].get("labels")
    namer = (lambda n, k: labels[n] if k == 0 and n < len(labels) else f"{labels[0]}{n}_{k}") if labels else None
    MA.level = N
    RG = free_resolution(M.complex, depth, labels=namer, name="G")
    G, cert_m = transfer_module(MA, RG, N, seed=p["seed"], window=_window(p))
    cert = {"algebra": _cert_json(cert_a), "module": _cert_json(cert_m)}
    return _result(
        "transfer-module",
        ring,
        [doc],
        base=io.algebra_to_json(B),
        algebra=io.algebra_to_json(A),
        resolution=io.resolution_to_json(R),
        base_module=io.module_to_json(MA),
        module=io.module_to_json(G),
        module_resolution=io.resolution_to_json(RG),
        certificate=cert,
    )


def _pair(docs):
    a, b = docs
    if a.get("kind") != "result" or b.get("kind") != "result":
        raise io.ParseError("expected two result documents")
    if a["ring"] != b["ring"]:
        raise io.ParseError("results over different rings")
    return a, b


def cmd_lift_morphism(docs, args) -> dict:
    a, b = _pair(docs)
    ring = _ring(a)
    L = Loader(ring)
    N = args.level
    if a["command"] == "transfer-algebra" and b["command"] == "transfer-algebra":
        C, A = L.algebra(a["algebra"]), L.algebra(b["algebra"])
        base = L.algebra(b["base"])
        R = L.resolution(b["resolution"])
        N = N or min(C.level or 2, A.level or 2)
        alpha = strict_map(L.resolution(a["resolution"]).q, C.module, base.module)
        delta, cert = lift_morphism(alpha, C, A, base, R.q, N, seed=args.seed)
        return _result(
            "lift-morphism",
            ring,
            docs,
            base=b["base"],
            source=a["algebra"],
            target=b["algebra"],
            resolution=b["resolution"],
            morphism=io.tower_to_json(delta, "morphism"),
            certificate=_cert_json(cert),
        )
    if a["command"] == "transfer-module" and b["command"] == "transfer-module":
        A = L.algebra(a["algebra"])
        S, T = L.module(a["module"], A), L.module(b["module"], A)
        M = L.module(b["base_module"], A)
        RG = L.resolution(b["module_resolution"])
        N = N or min(S.level or 2, T.level or 2)
        RS = L.resolution(a["module_resolution"])
        alpha = strict_module_morphism(RS.q, S, M)
        delta, cert = lift_module_morphism(alpha, S, T, RG.q, M, N, seed=args.seed)
        return _result(
            "lift-morphism",
            ring,
            docs,
            algebra=a["algebra"],
            base_module=b["base_module"],
            source_module=a["module"],
            target_module=b["module"],
            module_resolution=b["module_resolution"],
            morphism=io.tower_to_json(delta, "module_morphism"),
            certificate=_cert_json(cert),
        )
    raise io.ParseError("lift-morphism needs two transfer-algebra or two transfer-module results")


def _h0_json(h0: dict) -> dict:
    return {str(n): {"ok": v.ok, "witness": v.witness} for n, v in sorted(h0.items())}


def cmd_homotopy(docs, args) -> dict:
    a, b = _pair(docs)
    ring = _ring(a)
    L = Loader(ring)
    kinds = (a["command"], b["command"])
    if kinds == ("lift-morphism", "lift-morphism"):
        if "source" in a:
            C, A = L.algebra(a["source"]), L.algebra(a["target"])
            f = io.tower_from_json(a["morphism"], C.module, A.module)
            g = io.tower_from_json(b["morphism"], C.module, A.module)
            N = args.level or C.level or 2
            r = build_homotopy(f, g, C, A, N, seed=args.seed)
            if isinstance(r, HomotopyFailure):
                raise HypothesisError(f"no homotopy in tensor degree {r.tensor_degree}", r.witness)
            h0 = h0_vanishing_check(C, A, range(1, N), comparison=L.complex(a["resolution"]["target"]))
            return _result(
                "homotopy", ring, docs,
                source=a["source"], target=a["target"],
                morphism=a["morphism"], morphism_prime=b["morphism"],
                homotopy=io.tower_to_json(r, "homotopy"), h0=_h0_json(h0),
            )
        A = L.algebra(a["algebra"])
        S, T = L.module(a["source_module"], A), L.module(a["target_module"], A)
        H = hom_of(S.module, T.module)
        f = io.tower_from_json(a["morphism"], A.module, H)
        g = io.tower_from_json(b["morphism"], A.module, H)
        N = args.level or S.level or 2
        r = build_module_homotopy(f, g, S, T, N, seed=args.seed)
        if isinstance(r, HomotopyFailure):
            raise HypothesisError(f"no module homotopy in tensor degree {r.tensor_degree}", r.witness)
        return _result(
            "homotopy", ring, docs,
            algebra=a["algebra"], source_module=a["source_module"], target_module=a["target_module"],
            morphism=a["morphism"], morphism_prime=b["morphism"],
            homotopy=io.tower_to_json(r, "module_homotopy"),
        )
    if kinds == ("transfer-algebra", "transfer-algebra"):
        return _algebra_loop(a, b, L, ring, docs, args)
    if kinds == ("transfer-module", "transfer-module"):
        return _module_loop(a, b, L, ring, docs, args)
    raise io.ParseError("homotopy needs two lift-morphism results or two transfer results of the same kind")


def _algebra_loop(a, b, L, ring, docs, args):
    """Lift the identity both ways and connect both composites to the identity."""
    X, Y = L.algebra(a["algebra"]), L.algebra(b["algebra"])
    base = L.algebra(a["base"])
    R = L.resolution(a["resolution"])
    N = args.level or min(X.level or 2, Y.level or 2)
    q = strict_map(R.q, X.module, base.module)
    d, _ = lift_morphism(q, X, Y, base, R.q, N, seed=args.seed)
    e, _ = lift_morphism(q, Y, X, base, R.q, N, seed=args.seed)
    I = identity_morphism(X.module)
    rX = build_homotopy(compose_morphisms(e, d, N), I, X, X, N)
    rY = build_homotopy(compose_morphisms(d, e, N), I, Y, Y, N)
    for r in (rX, rY):
        if isinstance(r, HomotopyFailure):
            raise HypothesisError(f"no homotopy in tensor degree {r.tensor_degree}", r.witness)
    h0 = h0_vanishing_check(X, X, range(1, N), comparison=R.B)
    loop = {
        "forward": io.tower_to_json(d, "morphism"),
        "backward": io.tower_to_json(e, "morphism"),
        "homotopy_source": io.tower_to_json(rX, "homotopy"),
        "homotopy_target": io.tower_to_json(rY, "homotopy"),
        "level": N,
    }
    return _result(
        "homotopy", ring, docs, base=a["base"], source=a["algebra"], target=b["algebra"],
        resolution=a["resolution"], loop=loop, h0=_h0_json(h0),
    )


def _module_loop(a, b, L, ring, docs, args):
    A = L.algebra(a["algebra"])
    S, T = L.module(a["module"], A), L.module(b["module"], A)
    M = L.module(a["base_module"], A)
    RS, RT = L.resolution(a["module_resolution"]), L.resolution(b["module_resolution"])
    N = args.level or min(S.level or 2, T.level or 2)
    d, _ = lift_module_morphism(strict_module_morphism(RS.q, S, M), S, T, RT.q, M, N, seed=args.seed)
    e, _ = lift_module_morphism(strict_module_morphism(RT.q, T, M), T, S, RS.q, M, N, seed=args.seed)
    rS = build_module_homotopy(compose_module_morphisms(e, d, N), identity_module_morphism(S), S, S, N)
    rT = build_module_homotopy(compose_module_morphisms(d, e, N), identity_module_morphism(T), T, T, N)
    for r in (rS, rT):
        if isinstance(r, HomotopyFailure):
            raise HypothesisError(f"no module homotopy in tensor degree {r.tensor_degree}", r.witness)
    loop = {
        "forward": io.tower_to_json(d, "module_morphism"),
        "backward": io.tower_to_json(e, "module_morphism"),
        "homotopy_source": io.tower_to_json(rS, "module_homotopy"),
        "homotopy_target": io.tower_to_json(rT, "module_homotopy"),
        "level": N,
    }
    return _result(
        "homotopy", ring, docs, algebra=a["algebra"], base_module=a["base_module"],
        source_module=a["module"], target_module=b["module"], loop=loop,
    )


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


def verify_document(doc) -> list[dict]:
    """Re-check every tower in a result document from its raw entries."""
    ring = _ring(doc)
    L = Loader(ring)
    checks: list[dict] = []

    def add(name, v):
        checks.append({"check": name, "ok": bool(v), "witness": None if v else getattr(v, "witness", None)})

    def algebra_checks(tag, S):
        n = S.level or max(2, S.nu.lrange[1] + 1)
        add(f"{tag}: Stasheff identities to level {n}", check_an_algebra(S.nu, n, S.max_sdeg))
        if S.unit is not None:
            add(f"{tag}: strict unit", is_strictly_unital(S.nu.truncate(n, 1), S.unit, "structure"))

    base = L.algebra(doc["base"]) if "base" in doc else None
    structs = {}
    for tag in ("base", "algebra", "source", "target"):
        if tag in doc:
            structs[tag] = L.algebra(doc[tag]) if tag != "base" else base
            if tag != "base":
                algebra_checks(tag, structs[tag])
    if base is not None and "algebra" in structs and "resolution" in doc:
        A = structs["algebra"]
        R = L.resolution(doc["resolution"])
        qmap = strict_map(R.q, A.module, base.module)
        for i in range(1, (A.level or 2) + 1):
            lhs = postcompose(qmap, A.nu.component(i).with_range(i, i))
            rhs = star(base.nu.component(i).with_range(1, i), qmap, i).truncate(i, i).with_range(i, i)
            diff = clip(lhs - rhs, A.max_sdeg)
            add(f"strict square in tensor degree {i}", Verdict(diff.is_zero(), f"q o nu^{i} differs from nu_B^{i} o q"))
    if "morphism" in doc and "source" in structs:
        C, A = structs["source"], structs["target"]
        f = io.tower_from_json(doc["morphism"], C.module, A.module)
        n = C.level or 2
        bound = joint_bound(C, A)
        add("morphism identity", check_an_morphism(f, C.nu, A.nu, n, bound))
        add("morphism strict unit", is_strictly_unital(f, C.unit, "morphism", target_unit=A.unit))
        if "homotopy" in doc:
            g = io.tower_from_json(doc["morphism_prime"], C.module, A.module)
            r = io.tower_from_json(doc["homotopy"], C.module, A.module)
            add("homotopy identity", check_an_homotopy(r, f, g, C.nu, A.nu, n, bound))
            add("homotopy strict unit", is_strictly_unital(r, C.unit, "homotopy"))
    if "loop" in doc and "source" in structs:
        X, Y = structs["source"], structs["target"]
        lp = doc["loop"]
        n = lp["level"]
        d = io.tower_from_json(lp["forward"], X.module, Y.module)
        e = io.tower_from_json(lp["backward"], Y.module, X.module)
        bound = joint_bound(X, Y)
        add("forward morphism", check_an_morphism(d, X.nu, Y.nu, n, bound))
        add("backward morphism", check_an_morphism(e, Y.nu, X.nu, n, bound))
        rX = io.tower_from_json(lp["homotopy_source"], X.module, X.module)
        rY = io.tower_from_json(lp["homotopy_target"], Y.module, Y.module)
        idX, idY = identity_morphism(X.module), identity_morphism(Y.module)
        add("homotopy on source", check_an_homotopy(rX, compose_morphisms(e, d, n), idX, X.nu, X.nu, n, bound))
        add("homotopy on target", check_an_homotopy(rY, compose_morphisms(d, e, n), idY, Y.nu, Y.nu, n, bound))
    A = structs.get("algebra")
    mods = {}
    for tag in ("base_module", "module", "source_module", "target_module"):
        if tag in doc and A is not None:
            mods[tag] = L.module(doc[tag], A)
            n = mods[tag].level or 2
            add(f"{tag}: module identities to level {n}", mods[tag].verify(n))
    if "module" in mods and "base_module" in mods and "module_resolution" in doc:
        G, M = mods["module"], mods["base_module"]
        RG = L.resolution(doc["module_resolution"])
        qs, qu = post_hom_map(RG.q, G.module, G.complex, M.complex), pre_hom_map(RG.q, M.complex)
        for i in range(1, (G.level or 2)):
            lhs = postcompose(qs, G.p.component(i).with_range(i, i))
            rhs = postcompose(qu, M.p.component(i).with_range(i, i))
            add(f"module square in tensor degree {i}", Verdict((lhs - rhs).is_zero(), "q_* p_G differs from q^* p_M"))
    if "morphism" in doc and "source_module" in mods:
        S, T = mods["source_module"], mods["target_module"]
        H = hom_of(S.module, T.module)
        f = io.tower_from_json(doc["morphism"], A.module, H)
        n = S.level or 2
        add("module morphism identity", check_module_morphism(f, S.p, T.p, A.nu, n))
        if "homotopy" in doc:
            g = io.tower_from_json(doc["morphism_prime"], A.module, H)
            r = io.tower_from_json(doc["homotopy"], A.module, H)
            add("module homotopy identity", check_module_homotopy(r, f, g, S.p, T.p, A.nu, n))
    if "loop" in doc and "source_module" in mods:
        S, T = mods["source_module"], mods["target_module"]
        lp = doc["loop"]
        n = lp["level"]
        HST, HTS = hom_of(S.module, T.module), hom_of(T.module, S.module)
        d = io.tower_from_json(lp["forward"], A.module, HST)
        e = io.tower_from_json(lp["backward"], A.module, HTS)
        add("forward module morphism", check_module_morphism(d, S.p, T.p, A.nu, n))
        add("backward module morphism", check_module_morphism(e, T.p, S.p, A.nu, n))
        rS = io.tower_from_json(lp["homotopy_source"], A.module, hom_of(S.module, S.module))
        rT = io.tower_from_json(lp["homotopy_target"], A.module, hom_of(T.module, T.module))
        add("module homotopy on source", check_module_homotopy(rS, compose_module_morphisms(e, d, n), identity_module_morphism(S), S.p, S.p, A.nu, n))
        add("module homotopy on target", check_module_homotopy(rT, compose_module_morphisms(d, e, n), identity_module_morphism(T), T.p, T.p, A.nu, n))
    if "resolution" in doc and not checks:
        R = L.resolution(doc["resolution"])
        from .graded import is_surjective_quasi_iso

        top = max(R.A.module.degrees, default=0)
        hi = top if R.complete else top - 1
        ok, wit = is_surjective_quasi_iso(R.q, (0, hi))
        add("surjective quasi-isomorphism", Verdict(ok, str(wit.get("reason"))))
        add("semiprojective", is_semiprojective_witness(R.A))
    if not checks:
        add("document holds something to verify", Verdict(False, "no towers found"))
    return checks


def cmd_verify(doc, args) -> dict:
    checks = verify_document(doc)
    report = {"ok": all(c["ok"] for c in checks), "checks": checks}
    if not report["ok"]:
        raise VerificationFailure(report)
    return report


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _window_arg(text: str):
    try:
        lo, hi = text.split(":")
        return [int(lo), int(hi)]
    except ValueError as exc:
        raise argparse.ArgumentTypeError("window must read lo:hi") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ainftransfer", description="Exact transfer of strictly unital A-infinity structures.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, files=1):
        p.add_argument("inputs", nargs=files, metavar="FILE")
        p.add_argument("-o", "--output", help="write the result here instead of stdout")
        p.add_argument("--level", type=int, help="level N of the A_N structure")
        p.add_argument("--seed", type=int, help="seed for randomized preimages")
        return p

    p = common(sub.add_parser("resolve", help="free resolution of a complex"))
    p.add_argument("--depth", type=int)
    for name in ("transfer-algebra", "transfer-module"):
        p = common(sub.add_parser(name))
        p.add_argument("--depth", type=int)
        p.add_argument("--mode", choices=["plain", "augmented", "deterministic", "random"])
        p.add_argument("--window", type=_window_arg)
    common(sub.add_parser("lift-morphism", help="lift the resolution map of one result through another"), 2)
    common(sub.add_parser("homotopy", help="homotopy between lifts, or the full uniqueness loop"), 2)
    common(sub.add_parser("verify", help="re-check every tower in a result file"))
    return parser


COMMANDS = {
    "resolve": cmd_resolve,
    "transfer-algebra": cmd_transfer_algebra,
    "transfer-module": cmd_transfer_module,
    "lift-morphism": cmd_lift_morphism,
    "homotopy": cmd_homotopy,
    "verify": cmd_verify,
}


def _emit(out: dict, path) -> None:
    text = io.dump_document(out)
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        docs = [io.load_document(f) for f in args.inputs]
        fn = COMMANDS[args.command]
        out = fn(docs if len(docs) > 1 else docs[0], args)
    except io.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (GradingError, RingError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except HypothesisError as exc:
        print(f"hypothesis failure: {exc}" + (f" ({exc.witness})" if exc.witness else ""), file=sys.stderr)
        return EXIT_HYPOTHESIS
    except WindowError as exc:
        print(f"window error: {exc}", file=sys.stderr)
        return EXIT_WINDOW
    except VerificationFailure as exc:
        _emit(exc.report, args.output)
        for c in exc.report["checks"]:
            if not c["ok"]:
                print(f"FAILED {c['check']}: {c['witness']}", file=sys.stderr)
        return EXIT_VERIFY
    except ArithmeticError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    _emit(out, args.output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

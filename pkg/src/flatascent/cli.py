"""Command-line front end: ``flatascent <command> ...``.

Exit codes: 0 every check passed, 1 some verification failed, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from . import __version__
from .basechange import (Check, compare_power_structures, conjugated_verdict, coordinates,
                         induced_power_structure, standard_fixture_modules, verify_instance)
from .catalog import FIXTURE_DIR, remark38 as remark38_instance
from .errors import AlgebraError, InputError, NotFree
from .exactla import Matrix
from .instance import Instance, canonical_dumps, load_instance, module_to_json
from .modules import ext_dims, regular_module, residue_module, restrict_scalars, tensor_up
from .rings import change_basis, flat_certificate, validate_algebra


# ------------------------------------------------------------------ helpers


def _json_default(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, tuple):
        return list(x)
    raise TypeError(f"cannot serialise {type(x).__name__}")


def _normalise(obj):
    return json.loads(json.dumps(obj, default=_json_default))


def resolve_path(arg: str) -> Path:
    """The path as given, or the shipped fixture with the same file name."""
    p = Path(arg)
    if p.exists():
        return p
    alt = FIXTURE_DIR / p.name
    if alt.exists():
        return alt
    alt = FIXTURE_DIR / f"{p.name}.json"
    return alt if alt.exists() else p


def _load(arg: str) -> Instance:
    path = resolve_path(arg)
    try:
        return load_instance(path)
    except OSError as exc:
        raise InputError(f"cannot read {arg}: {exc.strerror or exc}") from None


def _record(c: Check, prefix: str = "") -> dict:
    rec = {"check": prefix + c.name, "anchor": c.anchor, "verdict": "PASS" if c.passed else "FAIL"}
    if c.detail:
        rec["detail"] = _normalise(c.detail)
    return rec


def _report(instance: str, checks: list, seed, extra: dict | None = None) -> dict:
    rep = {"instance": instance, "checks": checks,
           "verdict": "PASS" if all(c["verdict"] == "PASS" for c in checks) else "FAIL",
           "version": __version__, "seed": seed}
    if extra:
        rep.update(_normalise(extra))
    return rep


def instance_seed(seed, iid: str) -> str:
    return f"{seed}/{iid}"


# ----------------------------------------------------------------- commands


def analyze(inst: Instance) -> dict:
    out = {"instance": inst.id, "field": inst.field.to_json(), "algebras": {}, "maps": {}}
    for name, A in inst.algebras.items():
        out["algebras"][name] = {
            "dim": A.dim,
            "maximal_ideal_dim": A.maximal_ideal.dim,
            "t0": A.nilpotency_index,
            "residue_dim": A.residue.field_dim,
            "residue_certificate": A.residue.certificate,
            "length": A.dim // A.residue.field_dim,
        }
    for name, phi in inst.maps.items():
        try:
            cert = flat_certificate(phi)
            S = phi.target
            out["maps"][name] = {"flat": True, "m": cert.rank,
                                 "epsilons": [S.format(e) for e in cert.epsilons],
                                 "fiber_dim": cert.fiber.dim,
                                 "t0": phi.source.nilpotency_index}
        except NotFree as exc:
            out["maps"][name] = {"flat": False, "error": exc.code, "message": str(exc)}
    return out


def _nonflat_checks(phi, depth: int) -> list:
    """The map is expected to fail the freeness test; Ext^1 over R against k then shows it."""
    checks = []
    try:
        flat_certificate(phi)
        checks.append(Check("not_free_detected", "non-free S is rejected", False, {}))
    except NotFree as exc:
        checks.append(Check("not_free_detected", "non-free S is rejected", True,
                            {"error": exc.code, "message": str(exc)}))
    SR = restrict_scalars(regular_module(phi.target), phi)
    exts = ext_dims(SR, residue_module(phi.source), depth=depth)
    checks.append(Check("ext_detects_nonflat", "Ext^1_R(S, k) ≠ 0 for a non-flat S",
                        len(exts) > 1 and exts[1] > 0, {"ext_dims": exts}))
    return checks


def thm37_checks(inst: Instance, seed, depth: int) -> list:
    records = []
    multi = len(inst.verify) > 1
    for rname, req in sorted(inst.verify.items()):
        prefix = f"{rname}/" if multi else ""
        phi = inst.maps[req.map]
        if req.expect == "NotFree":
            records += [_record(c, prefix) for c in _nonflat_checks(phi, depth)]
            continue
        try:
            cert = flat_certificate(phi)
        except AlgebraError as exc:
            records.append(_record(Check("flat_certificate", "S free over R: rank·dim_K R = dim_K S",
                                         False, {"error": exc.code, "message": str(exc)}), prefix))
            continue
        if req.modules or req.s_modules:
            r_mods = {n: inst.modules[n] for n in req.modules}
            s_mods = {n: inst.modules[n] for n in req.s_modules}
        else:
            r_mods, s_mods = standard_fixture_modules(phi, instance_seed(seed, inst.id))
        checks = verify_instance(phi, cert, r_mods, s_mods, depth=depth,
                                 seed=instance_seed(seed, inst.id))
        records += [_record(c, prefix) for c in checks]
    return records


def property_checks(inst: Instance, seed) -> list:
    """Seeded basis-change invariance checks run by ``suite``."""
    rng = random.Random(instance_seed(seed, inst.id) + "/props")
    out = []
    for _, req in sorted(inst.verify.items()):
        if req.expect != "pass":
            continue
        phi = inst.maps[req.map]
        try:
            cert = flat_certificate(phi)
        except AlgebraError:
            continue  # already reported by the thm37 checks
        S = phi.target
        F = S.field
        while True:
            P = Matrix(F, [[F.random(rng) for _ in range(S.dim)] for _ in range(S.dim)])
            if P.is_invertible():
                break
        T = validate_algebra(change_basis(S.presentation, P))
        same = (T.maximal_ideal.dim == S.maximal_ideal.dim
                and T.nilpotency_index == S.nilpotency_index
                and T.residue.field_dim == S.residue.field_dim)
        out.append(_record(Check("radical_basis_independent",
                                 "maximal ideal and t0 do not depend on the basis", same,
                                 {"maximal_ideal_dim": T.maximal_ideal.dim,
                                  "t0": T.nilpotency_index})))
        B = regular_module(S)
        before = compare_power_structures(B, phi, cert).equal
        after = conjugated_verdict(B, phi, cert, rng)
        out.append(_record(Check("comparison_basis_independent",
                                 "usual-vs-induced verdict does not depend on the basis of B",
                                 before == after, {"equal": before})))
    return out


REMARK_EXPECTED = {"usual": "(1+3√2, 6+√2)", "induced": "(1+6√2, 3+√2)"}


def remark38_report(seed) -> dict:
    inst = remark38_instance()
    phi = inst.maps["phi"]
    S = phi.target
    F = S.field
    cert = flat_certificate(phi)
    s = (F(1), F(3))
    b = (F(1), F(0), F(0), F(1))  # (1, √2) in S^2
    B = regular_module(S)
    ps = induced_power_structure(restrict_scalars(B, phi), phi, cert)
    usual_v = B.act(s).apply(b[:2]) + B.act(s).apply(b[2:])
    induced_v = ps.carrier.act(s).apply(b)

    def pair(v):
        return f"({S.format(v[:2])}, {S.format(v[2:])})"

    usual, induced = pair(usual_v), pair(induced_v)
    rep = compare_power_structures(B, phi, cert, candidates=[(s, b)], seed=seed, instance="remark38")
    coords = {S.format(x): [F.fmt(c[0]) for c in coordinates(cert, x)]
              for x in (s, S.multiply(s, (F(0), F(1))))}
    checks = [
        Check("epsilons", "lifts of a basis of S/mS", [S.format(e) for e in cert.epsilons] == ["1", "√2"],
              {"epsilons": [S.format(e) for e in cert.epsilons]}),
        Check("usual_product", "componentwise s·(b_1, b_2)", usual == REMARK_EXPECTED["usual"],
              {"value": usual, "expected": REMARK_EXPECTED["usual"]}),
        Check("induced_product", "s ∘ b = h(s·g(b))", induced == REMARK_EXPECTED["induced"],
              {"value": induced, "expected": REMARK_EXPECTED["induced"]}),
        Check("structures_unequal", "usual and induced S-structures on S^2 differ",
              not rep.equal and rep.witness is not None,
              {"verdict": "structures equal" if rep.equal else "structures unequal"}),
    ]
    extra = {"s": S.format(s), "b": pair(b), "usual": usual, "induced": induced,
             "coordinates": coords,
             "structure_verdict": "structures equal" if rep.equal else "structures unequal"}
    return _report("remark38", [_record(c) for c in checks], seed, extra)


def suite_report(directory, seed, depth: int) -> dict:
    files = sorted(Path(directory).glob("*.json"))
    if not files:
        raise InputError(f"no instance files in {directory}")
    instances = []
    for f in files:
        inst = load_instance(f)
        records = thm37_checks(inst, seed, depth) + property_checks(inst, seed)
        instances.append(_report(inst.id, records, seed))
    verdict = "PASS" if all(i["verdict"] == "PASS" for i in instances) else "FAIL"
    n = sum(len(i["checks"]) for i in instances)
    return {"instances": instances, "checks_total": n,
            "checks_failed": sum(c["verdict"] == "FAIL" for i in instances for c in i["checks"]),
            "verdict": verdict, "version": __version__, "seed": seed}


# ------------------------------------------------------------------ output


def _text(report: dict) -> str:
    lines = []
    blocks = report.get("instances", [report])
    for blk in blocks:
        if "checks" not in blk:
            lines.append(canonical_dumps(blk).rstrip("\n"))
            continue
        lines.append(f"== {blk['instance']}")
        for c in blk["checks"]:
            lines.append(f"{c['verdict']}  {c['check']}  [{c['anchor']}]")
        for key in ("usual", "induced", "structure_verdict"):
            if key in blk:
                lines.append(f"{key}: {blk[key]}")
    lines.append(f"verdict: {report.get('verdict', 'PASS')}")
    return "\n".join(lines) + "\n"


def write_output(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    target = Path(out)
    fd, tmp = tempfile.mkstemp(dir=target.parent or Path("."), prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="flatascent",
                                 description="Exact checks of base change along flat local maps.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for random fixtures (default 0)")
    common.add_argument("--depth", type=int, default=3, help="Ext resolution depth (default 3)")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", help="write the report here (atomically)")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, helptext in (("validate", "parse and validate an instance file"),
                           ("analyze", "dimensions, maximal ideals, rank, lifts and t0"),
                           ("thm37", "full ascent/descent verification of an instance")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("instance")
    p = sub.add_parser("tensor", parents=[common], help="emit the presentation of A ⊗_R S")
    p.add_argument("instance")
    p.add_argument("--map", required=True)
    p.add_argument("--module", required=True)
    sub.add_parser("remark38", parents=[common], help="the built-in unequal-structures example")
    p = sub.add_parser("suite", parents=[common], help="verify every instance file in a directory")
    p.add_argument("directory", nargs="?", default=str(FIXTURE_DIR))
    return ap


def run(args) -> tuple:
    """Returns (exit code, report dict)."""
    if args.depth < 1:
        raise InputError("--depth must be at least 1")
    if args.command == "remark38":
        rep = remark38_report(args.seed)
    elif args.command == "suite":
        d = Path(args.directory)
        if not d.is_dir() and d.name == FIXTURE_DIR.name:
            d = FIXTURE_DIR
        rep = suite_report(d, args.seed, args.depth)
    else:
        inst = _load(args.instance)
        if args.command == "validate":
            rep = {"instance": inst.id, "verdict": "PASS", "version": __version__,
                   "algebras": {k: A.dim for k, A in inst.algebras.items()},
                   "maps": sorted(inst.maps), "modules": sorted(inst.modules),
                   "verify": sorted(inst.verify)}
        elif args.command == "analyze":
            rep = analyze(inst)
        elif args.command == "tensor":
            if args.map not in inst.maps:
                raise InputError(f"unknown map {args.map!r}", "maps")
            if args.module not in inst.modules:
                raise InputError(f"unknown module {args.module!r}", "modules")
            phi, A = inst.maps[args.map], inst.modules[args.module]
            if A.algebra is not phi.source:
                raise InputError(f"module {args.module!r} is not over the source of {args.map!r}")
            T = tensor_up(A, phi)
            rep = {"instance": inst.id, "map": args.map, "module": args.module,
                   "tensor": module_to_json(T.module, inst.algebra_name(phi.target)),
                   "relations_dim": T.relations.dim,
                   "unit_injective": T.unit.is_injective()}
        else:
            rep = _report(inst.id, thm37_checks(inst, args.seed, args.depth), args.seed)
    code = 0 if rep.get("verdict", "PASS") == "PASS" else 1
    return code, rep


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, rep = run(args)
    except InputError as exc:
        rep = {"error": exc.code, "message": str(exc), "path": exc.path, "version": __version__}
        text = canonical_dumps(rep) if args.format == "json" else f"error: {exc.code}: {exc}\n"
        sys.stderr.write(text)
        return 2
    text = canonical_dumps(rep) if args.format == "json" else _text(rep)
    write_output(text, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Every run prints one JSON report on standard output::

    {"command": [...], "descriptor_hash": ..., "parameters": {...},
     "results": {...}, "horizon": ..., "budget": ...}

Exit status: 0 success, 2 a refutation or violation was found, 1 usage or
resource errors.  Wall time is added under ``wall_time`` only with
``--timing`` so that default output is byte-for-byte reproducible.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import constructions, grouplift, setcore, syndetic, uss
from .errors import CSSetsError, OmegaViolation

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------


def load_descriptor(text: str) -> setcore.SetDescriptor:
    """Inline JSON (starting with ``{``) or a path to a JSON file."""
    if text.lstrip().startswith("{"):
        return setcore.descriptor_from_json(text)
    with open(text) as fh:
        return setcore.descriptor_from_json(fh.read())


def parse_ints(text: str) -> list[int]:
    return [int(t) for t in text.replace(" ", "").split(",") if t]


def parse_translates(text: str):
    """``"0,1,5"`` or ``"-m:m"`` (an inclusive range)."""
    if ":" in text:
        lo, hi = text.split(":")
        return range(int(lo), int(hi) + 1)
    return parse_ints(text)


def parse_pairs(text: str) -> list[tuple[int, int]]:
    """``"1,1;2,1"`` -> ``[(1, 1), (2, 1)]``."""
    out = []
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        a, b = parse_ints(chunk)
        out.append((a, b))
    return out


def _translates_json(F):
    if isinstance(F, range):
        return {"lo": F.start, "hi": F.stop - 1}
    return list(F)


# ---------------------------------------------------------------------------
# handlers: each returns (results, exit code, descriptor or None, horizon)
# ---------------------------------------------------------------------------


def cmd_encode(a):
    desc = load_descriptor(a.desc)
    plus, _ = setcore.split(desc)
    try:
        pairs = setcore.encode_blocks(plus.window(0, a.hi), complete=a.complete)
    except OmegaViolation as exc:
        return {"status": "violation", "reason": str(exc)}, EXIT_NEGATIVE, desc, a.hi
    return {"pairs": [list(p) for p in pairs]}, EXIT_OK, desc, a.hi


def cmd_decode(a):
    if a.pairs is not None:
        pairs = parse_pairs(a.pairs)
        count = a.count or len(pairs)
        desc = None
        src = iter(pairs)
    else:
        if a.desc is None:
            raise UsageError("decode needs --pairs or --desc")
        desc = load_descriptor(a.desc)
        if not isinstance(desc, setcore.BlockEncoded) and not isinstance(desc, setcore.Construction42):
            raise UsageError("decode --desc needs a block-encoded descriptor")
        src = desc.plus if isinstance(desc, setcore.BlockEncoded) else desc.stream
        count = a.count
        if not count:
            raise UsageError("decode --desc needs --count")
    intervals = setcore.decode_blocks(src, count)
    horizon = intervals[-1][1] if intervals else 0
    return {"intervals": [list(iv) for iv in intervals]}, EXIT_OK, desc, horizon


def cmd_window(a):
    desc = load_descriptor(a.desc)
    win = desc.window(a.lo, a.hi)
    return {"window": win.to_json(), "members": [int(z) for z in win.members()]}, EXIT_OK, desc, \
        max(abs(a.lo), abs(a.hi))


def cmd_witness_check(a):
    desc = load_descriptor(a.desc)
    res = syndetic.check_witness(desc, a.n, parse_translates(a.F), (a.lo, a.hi))
    code = EXIT_NEGATIVE if res.status == "counterexample" else EXIT_OK
    return res.to_json(), code, desc, max(abs(a.lo), abs(a.hi))


def cmd_witness_find(a):
    desc = load_descriptor(a.desc)
    w = syndetic.find_witness(desc, a.n, (a.lo, a.hi), a.search_radius)
    code = EXIT_OK if w.status == "verified" else EXIT_NEGATIVE
    return w.to_json(), code, desc, w.horizon


def _certificate(a, desc):
    if a.analytic:
        if not isinstance(desc, setcore.Construction42):
            raise UsageError("--analytic needs a construction42 descriptor")
        return syndetic.construction42_certificate(desc.K, desc.M)
    return syndetic.empirical_certificate(desc, a.prefix_len)


def cmd_witness_synthesize(a):
    desc = load_descriptor(a.desc)
    cert = _certificate(a, desc)
    radii = syndetic.synthesize_radii(cert, a.n_max)
    out = {"certificate": cert.describe(), "radii": radii,
           "witnesses": [_translates_json(range(-m, m + 1)) for m in radii]}
    code = EXIT_OK
    horizon = None
    if a.check:
        horizon = max(abs(a.lo), abs(a.hi))
        checks = []
        for n, m in enumerate(radii, start=1):
            res = syndetic.check_witness(desc, n, range(-m, m + 1), (a.lo, a.hi))
            checks.append(res.to_json())
            if res.status == "counterexample":
                code = EXIT_NEGATIVE
        out["checks"] = checks
    return out, code, desc, horizon


def cmd_refute_corb(a):
    ref = syndetic.refute_2syndetic_corB(a.r)
    desc = setcore.CorollaryB("A")
    out = ref.to_json()
    out["verified"] = ref.verify(desc)
    return out, EXIT_NEGATIVE if out["verified"] else EXIT_ERROR, desc, max(ref.counterexample) + a.r


def _streams(desc):
    if isinstance(desc, setcore.Construction42):
        return [("plus", desc.stream)]
    return [(name, s) for name, s in zip(("plus", "minus"), syndetic._sides(desc))]


def cmd_uss_scan(a):
    desc = load_descriptor(a.desc)
    horizons = parse_ints(a.horizons)
    prof = uss.uss_profile(desc, a.D, horizons)
    return prof.to_json(), EXIT_OK, desc, max(horizons)


def cmd_uss_certify(a):
    desc = load_descriptor(a.desc)
    cert = _certificate(a, desc)
    if a.analytic:
        streams = [("plus", desc.stream)]
    else:
        streams = _streams(desc)
    code = EXIT_OK
    sides = {}
    for name, stream in streams:
        rows = []
        for D in range(1, a.D + 1):
            L = cert.L_at(D)
            res = uss.check_not_uss(stream, cert.b, L, D, max(a.prefix_len, L))
            rows.append({"D": D, "L": L, **res.to_json()})
            if not res.passed:
                code = EXIT_NEGATIVE
        sides[name] = rows
    return {"certificate": cert.describe(), "sides": sides}, code, desc, a.prefix_len


def cmd_construct_gen42(a):
    desc = setcore.Construction42(a.K, a.M)
    if a.emit == "blocks":
        pairs = desc.stream.prefix(a.count)
        res = {"alpha": [p[0] for p in pairs], "beta": [p[1] for p in pairs]}
        horizon = constructions.prefix_span(a.K, a.M, a.count)
    elif a.emit == "gamma":
        res = {"rows": [[constructions.gamma(n, k, a.M) for k in range(1, constructions.r_closed(n, a.M) + 1)]
                        for n in range(1, a.count + 1)]}
        horizon = None
    else:
        horizon = a.count
        res = {"members": [int(z) for z in desc.window(-a.count, a.count).members()]}
    res["descriptor"] = desc.to_json()
    res["density_limit"] = str(constructions.construction42_density(a.K, a.M))
    return res, EXIT_OK, desc, horizon


def cmd_construct_corb(a):
    desc = setcore.CorollaryB(a.part)
    win = desc.window(a.lo, a.hi)
    return {"descriptor": desc.to_json(), "members": [int(z) for z in win.members()]}, EXIT_OK, desc, \
        max(abs(a.lo), abs(a.hi))


def cmd_density(a):
    desc = load_descriptor(a.desc)
    dens = constructions.empirical_density(desc, a.radius)
    return {"density": str(dens), "value": float(dens)}, EXIT_OK, desc, a.radius


def cmd_product(a):
    desc = load_descriptor(a.desc)
    prod = constructions.ProductSet(desc, a.d)
    dens = prod.box_density(a.radius)
    return {"d": a.d, "count": prod.box_count(a.radius), "density": str(dens), "value": float(dens)}, \
        EXIT_OK, desc, a.radius


def _group_set(a):
    G = grouplift.group_from_name(a.group)
    if a.inner is None:
        return G, grouplift.WholeGroup(G), None
    inner = load_descriptor(a.inner)
    hom = grouplift.GroupHom.parse(G, a.hom)
    return G, grouplift.preimage_set(hom, inner), inner


def cmd_lift_preimage(a):
    if a.inner is None:
        raise UsageError("lift preimage needs --inner")
    G, gset, inner = _group_set(a)
    out = {"set": gset.to_json(), "unit_preimage": list(gset.hom.unit_preimage())}
    code = EXIT_OK
    if a.F is not None:
        F = parse_translates(a.F)
        lifted = grouplift.lift_witness(gset.hom, F)
        out["lifted"] = [list(f) for f in lifted]
        if a.n is not None:
            res = grouplift.check_witness_group(gset, a.n, lifted, a.radius, a.budget)
            out["check"] = res.to_json()
            if res.status == "counterexample":
                code = EXIT_NEGATIVE
    return out, code, inner, a.radius


def cmd_lift_index(a):
    base = load_descriptor(a.desc)
    lifted = grouplift.finite_index_lift(base, a.k)
    win = lifted.window(a.lo, a.hi)
    out = {"descriptor": lifted.to_json(), "members": [int(z) for z in win.members()]}
    return out, EXIT_OK, base, max(abs(a.lo), abs(a.hi))


def cmd_group_density(a):
    G, gset, inner = _group_set(a)
    dens = grouplift.group_density(G, gset, a.radius, a.budget)
    return {"group": G.to_json(), "set": gset.to_json(), "density": str(dens), "value": float(dens)}, \
        EXIT_OK, inner, a.radius


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--budget", type=int, default=None, help="step cap for streams and balls")
    common.add_argument("--timing", action="store_true", help="add wall time to the report")

    p = _Parser(prog="cssets", description="Completely syndetic sets in Z: checks, constructions, lifts.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def leaf(parent, name, fn, **kw):
        q = parent.add_parser(name, parents=[common], **kw)
        q.set_defaults(handler=fn)
        return q

    def desc_arg(q, required=True):
        q.add_argument("--desc", required=required, help="descriptor JSON file or inline JSON")

    q = leaf(sub, "encode", cmd_encode, help="window -> (alpha, beta) pairs")
    desc_arg(q)
    q.add_argument("--hi", type=int, required=True)
    q.add_argument("--complete", action="store_true")

    q = leaf(sub, "decode", cmd_decode, help="pairs -> member intervals")
    q.add_argument("--pairs")
    desc_arg(q, required=False)
    q.add_argument("--count", type=int)

    q = leaf(sub, "window", cmd_window, help="membership bits on [lo, hi]")
    desc_arg(q)
    q.add_argument("--lo", type=int, required=True)
    q.add_argument("--hi", type=int, required=True)

    w = sub.add_parser("witness", help="n-syndetic witnesses").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    q = leaf(w, "check", cmd_witness_check)
    desc_arg(q)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--F", required=True, help="'0,1,5' or inclusive range 'lo:hi'")
    q.add_argument("--lo", type=int, required=True)
    q.add_argument("--hi", type=int, required=True)
    q = leaf(w, "find", cmd_witness_find)
    desc_arg(q)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--lo", type=int, required=True)
    q.add_argument("--hi", type=int, required=True)
    q.add_argument("--search-radius", type=int, default=64)
    q = leaf(w, "synthesize", cmd_witness_synthesize)
    desc_arg(q)
    q.add_argument("--n-max", type=int, default=2)
    q.add_argument("--prefix-len", type=int, default=1004)
    q.add_argument("--analytic", action="store_true", help="use the closed-form certificate")
    q.add_argument("--check", action="store_true")
    q.add_argument("--lo", type=int, default=-10_000)
    q.add_argument("--hi", type=int, default=10_000)

    r = sub.add_parser("refute", help="refutations").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    q = leaf(r, "corB", cmd_refute_corb)
    q.add_argument("--r", type=int, required=True)

    u = sub.add_parser("uss", help="sub-AP scans and not-USS certificates").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    q = leaf(u, "scan", cmd_uss_scan)
    desc_arg(q)
    q.add_argument("--D", type=int, required=True)
    q.add_argument("--horizons", required=True)
    q = leaf(u, "certify", cmd_uss_certify)
    desc_arg(q)
    q.add_argument("--D", type=int, required=True, help="check every D' <= D")
    q.add_argument("--prefix-len", type=int, default=1004)
    q.add_argument("--analytic", action="store_true")

    c = sub.add_parser("construct", help="built-in sets").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    q = leaf(c, "gen42", cmd_construct_gen42)
    q.add_argument("--K", type=int, required=True)
    q.add_argument("--M", type=int, default=2)
    q.add_argument("--emit", choices=("blocks", "members", "gamma"), default="blocks")
    q.add_argument("--count", type=int, default=11)
    q = leaf(c, "corB", cmd_construct_corb)
    q.add_argument("--part", choices=("A", "B"), default="A")
    q.add_argument("--lo", type=int, default=-64)
    q.add_argument("--hi", type=int, default=64)

    q = leaf(sub, "density", cmd_density, help="|A ∩ [-r, r]| / (2r+1)")
    desc_arg(q)
    q.add_argument("--radius", type=int, required=True)

    q = leaf(sub, "product", cmd_product, help="box density of A^d")
    desc_arg(q)
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--radius", type=int, required=True)

    lft = sub.add_parser("lift", help="lifts to groups").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    q = leaf(lft, "preimage", cmd_lift_preimage)
    q.add_argument("--group", default="z2")
    q.add_argument("--hom", default="x=1")
    q.add_argument("--inner")
    q.add_argument("--F")
    q.add_argument("--n", type=int)
    q.add_argument("--radius", type=int, default=20)
    q = leaf(lft, "index", cmd_lift_index)
    desc_arg(q)
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--lo", type=int, default=-16)
    q.add_argument("--hi", type=int, default=16)

    g = sub.add_parser("group", help="group-level statistics").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    q = leaf(g, "density", cmd_group_density)
    q.add_argument("--group", default="z2")
    q.add_argument("--hom", default="x=1")
    q.add_argument("--inner", help="omit for the whole group")
    q.add_argument("--radius", type=int, required=True)
    return p


_INTERNAL = {"handler", "budget", "timing", "command", "action"}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    report: dict = {"command": argv}
    start = time.perf_counter()
    timing = "--timing" in argv
    saved_budget = setcore.DEFAULT_BUDGET
    try:
        args = build_parser().parse_args(argv)
        if args.budget is not None:
            if args.budget < 1:
                raise UsageError("--budget must be positive")
            setcore.set_default_budget(args.budget)
        results, code, desc, horizon = args.handler(args)
        report.update(
            descriptor_hash=setcore.descriptor_hash(desc) if desc is not None else None,
            parameters={k: v for k, v in sorted(vars(args).items()) if k not in _INTERNAL},
            results=results,
            horizon=horizon,
            budget=args.budget if args.budget is not None else setcore.DEFAULT_BUDGET,
        )
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        report["error"] = {"type": "usage", "message": str(exc)}
        code = EXIT_ERROR
    except (CSSetsError, ValueError, TypeError, OSError) as exc:
        print(f"cssets: {exc}", file=sys.stderr)
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = EXIT_ERROR
    finally:
        setcore.set_default_budget(saved_budget)
    if timing:
        report["wall_time"] = round(time.perf_counter() - start, 6)
    sys.stdout.write(json.dumps(report, sort_keys=True) + "\n")
    sys.stdout.flush()
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Command-line interface.

Subcommands:

* ``canord verify --type A12 --e 2`` — run the two-sided check for one type
  (or several, when ``--n``/``--e`` are ranges like ``1..4``).
* ``canord table`` — sweep many types concurrently and print a report table;
  ``--families BL,B --n 1..4 --format json`` selects and serializes.
* ``canord quiver --group E6 --dot`` — McKay quiver of an SL2 subgroup.
* ``canord lattice --type BD --n 3 --dot`` — resolution intersection lattice.

Exit codes: 0 = success and all counts agree, 1 = at least one disagreement,
2 = usage or parameter error.  The environment variable ``CANORD_CAP``
overrides the group-closure size cap.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from concurrent.futures import ThreadPoolExecutor

from .errors import CanordError, ParameterError
from .lattice import to_dot as lattice_dot
from .mckay import McKayQuiver, identify_affine, mckay_quiver, verify
from .ramdata import FAMILIES, CanonicalType, resolution_ram, resolution_to_json
from .families import ade_group

__all__ = ["main", "build_parser"]

DEFAULT_N = range(1, 7)
DEFAULT_E = range(1, 5)

ADE_CATALOG = (
    [("A", r) for r in range(1, 7)]
    + [("D", r) for r in range(4, 7)]
    + [("E", r) for r in (6, 7, 8)]
)

_NODE_TOKEN = re.compile(r"([ADE])([0-9]+)\Z")


def parse_range(text: str, what: str) -> list[int]:
    """Parse '3' or '1..4' into a list of integers."""
    m = re.fullmatch(r"(-?\d+)(?:\.\.(-?\d+))?", text.strip())
    if not m:
        raise ParameterError(f"cannot parse {what} value {text!r}; use N or A..B")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    if hi < lo:
        raise ParameterError(f"empty range {text!r} for {what}")
    return list(range(lo, hi + 1))


def _normalize_family(token: str) -> str | None:
    if token in FAMILIES:
        return token
    if token.endswith("n") and token[:-1] in FAMILIES:
        return token[:-1]
    return None


def parse_group_token(token: str) -> tuple[str, int]:
    m = _NODE_TOKEN.fullmatch(token.strip())
    if m:
        letter, rank = m.group(1), int(m.group(2))
        if (
            (letter == "A" and rank >= 1)
            or (letter == "D" and rank >= 4)
            or (letter == "E" and rank in (6, 7, 8))
        ):
            return letter, rank
    raise ParameterError(f"unknown group {token!r}; expected A1.., D4.., or E6..E8")


def types_for_family(
    family: str, n_values: list[int] | None, e_values: list[int] | None
) -> list[CanonicalType]:
    """All valid types of one family with parameters drawn from the given
    ranges (defaults apply when a range is None)."""
    ns = n_values if n_values is not None else list(DEFAULT_N)
    es = e_values if e_values is not None else list(DEFAULT_E)
    if family == "A12":
        return [CanonicalType("A12", e=e) for e in es if e >= 1]
    if family in ("BL", "B", "L", "DL"):
        return [CanonicalType(family, n=n) for n in ns if n >= 1]
    if family == "BD":
        return [CanonicalType("BD", n=n) for n in ns if n >= 2]
    if family == "Anz":
        return [
            CanonicalType("Anz", n=n, e=e) for n in ns if n >= 1 for e in es if e >= 2
        ]
    if family == "ADE":
        return [CanonicalType("ADE", letter=l, rank=r) for l, r in ADE_CATALOG]
    raise ParameterError(f"unknown family {family!r}")


def parse_type_request(
    token: str, n_values: list[int] | None, e_values: list[int] | None, sweep: bool
) -> list[CanonicalType]:
    """Resolve a --type token (family name, tolerant of a trailing 'n', or an
    ADE node like A3) plus parameter ranges into concrete types.

    With sweep=False the needed parameters must be given explicitly.
    """
    token = token.strip()
    family = _normalize_family(token)
    if family is None:
        m = _NODE_TOKEN.fullmatch(token)
        if m:
            letter, rank = parse_group_token(token)
            return [CanonicalType("ADE", letter=letter, rank=rank)]
        raise ParameterError(f"unknown type token {token!r}")
    if family == "ADE":
        return types_for_family("ADE", None, None)
    if not sweep:
        needs_n = family in ("BL", "B", "L", "DL", "BD", "Anz")
        needs_e = family in ("A12", "Anz")
        if needs_n and n_values is None:
            raise ParameterError(f"family {family} requires --n")
        if needs_e and e_values is None:
            raise ParameterError(f"family {family} requires --e")
    types = types_for_family(family, n_values, e_values)
    if not types:
        raise ParameterError(
            f"no valid parameters for family {family} in the requested range"
        )
    return types


def _json_dumps(payload) -> str:
    return json.dumps(payload, indent=2)


def _run_reports(types: list[CanonicalType]):
    types = sorted(types, key=lambda t: t.sort_key())
    if len(types) == 1:
        return [verify(types[0])]
    with ThreadPoolExecutor(max_workers=min(8, len(types))) as pool:
        return list(pool.map(verify, types))


def cmd_verify(args) -> int:
    n_values = parse_range(args.n, "--n") if args.n else None
    e_values = parse_range(args.e, "--e") if args.e else None
    types = parse_type_request(args.type, n_values, e_values, sweep=False)
    reports = _run_reports(types)
    if args.format == "json":
        payload = [r.to_json_dict() for r in reports]
        print(_json_dumps(payload[0] if len(payload) == 1 else payload))
    else:
        for r in reports:
            print(r.to_text())
    return 0 if all(r.agree for r in reports) else 1


def cmd_table(args) -> int:
    n_values = parse_range(args.n, "--n") if args.n else None
    e_values = parse_range(args.e, "--e") if args.e else None
    if args.families is not None:
        tokens = [tok for tok in args.families.split(",") if tok.strip()]
        if not tokens:
            raise ParameterError("--families must name at least one family")
        families = []
        for tok in tokens:
            fam = _normalize_family(tok.strip())
            if fam is None:
                raise ParameterError(f"unknown family {tok.strip()!r}")
            families.append(fam)
    else:
        families = list(FAMILIES)
    types: list[CanonicalType] = []
    for fam in families:
        types.extend(types_for_family(fam, n_values, e_values))
    if not types:
        raise ParameterError("no valid types in the requested ranges")
    reports = _run_reports(types)
    if args.format == "json":
        print(_json_dumps([r.to_json_dict() for r in reports]))
    else:
        for r in reports:
            group_bit = "-" if r.group_count is None else str(r.group_count)
            head = (
                f"{r.type.label():<12} resolution={r.resolution_count.total:<3} "
                f"group={group_bit:<3} K={'0' if r.k_trivial else '!'} "
                f"agree={'yes' if r.agree else 'NO'}"
            )
            print(head)
        bad = [r.type.label() for r in reports if not r.agree]
        print(f"checked {len(reports)} types; " + ("all agree" if not bad else f"disagreements: {', '.join(bad)}"))
    return 0 if all(r.agree for r in reports) else 1


def _quiver_dot(label: str, quiver: McKayQuiver) -> str:
    lines = [f'graph "{label}" {{']
    for i, d in enumerate(quiver.dims):
        lines.append(f'  n{i} [label="{i} (dim {d})"];')
    r = len(quiver.dims)
    for i in range(r):
        for j in range(i + 1, r):
            m = quiver.adjacency[i][j]
            if m == 1:
                lines.append(f"  n{i} -- n{j};")
            elif m > 1:
                lines.append(f'  n{i} -- n{j} [label="{m}"];')
    lines.append("}")
    return "\n".join(lines)


def cmd_quiver(args) -> int:
    letter, rank = parse_group_token(args.group)
    group = ade_group(letter, rank)
    quiver = mckay_quiver(group)
    affine = identify_affine(quiver.adjacency)
    fmt = "dot" if args.dot else args.format
    if fmt == "dot":
        print(_quiver_dot(f"{letter}{rank}", quiver))
    elif fmt == "json":
        payload = {
            "group": f"{letter}{rank}",
            "order": len(group),
            "dims": quiver.dims,
            "adjacency": quiver.adjacency,
            "affine": f"{affine[0]}{affine[1]}",
        }
        print(_json_dumps(payload))
    else:
        print(f"McKay quiver of {letter}{rank} (group order {len(group)})")
        print(f"node dims: {quiver.dims}")
        for row in quiver.adjacency:
            print("  " + " ".join(str(x) for x in row))
        print(f"affine diagram: {affine[0]}{affine[1]}")
    return 0


def cmd_lattice(args) -> int:
    n_values = parse_range(args.n, "--n") if args.n else None
    e_values = parse_range(args.e, "--e") if args.e else None
    types = parse_type_request(args.type, n_values, e_values, sweep=False)
    if len(types) != 1:
        raise ParameterError("lattice requires a single type; give exact --n/--e")
    t = types[0]
    res = resolution_ram(t)
    fmt = "dot" if args.dot else args.format
    if fmt == "dot":
        print(lattice_dot(res.lattice, res.ram_indices))
    elif fmt == "json":
        print(_json_dumps(resolution_to_json(t, res)))
    else:
        print(f"resolution lattice for {t.label()}")
        for i, c in enumerate(res.lattice.curves):
            ram = res.ram_indices.get(i)
            bits = [f"{c.label}: kind={c.kind}"]
            if c.self_int is not None:
                bits.append(f"self={c.self_int}")
            if ram:
                bits.append(f"e={ram}")
            print("  " + " ".join(bits))
        print("pairing:")
        for row in res.lattice.pairing:
            print("  " + " ".join(str(x) for x in row))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="canord",
        description="Two-sided module counts for canonical orders over surface singularities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="two-sided check for one canonical type")
    p_verify.add_argument("--type", required=True, help="family (A12, BL, B, L, DL, BD, Anz) or ADE node (A3, D5, E7)")
    p_verify.add_argument("--n", help="index parameter, N or A..B")
    p_verify.add_argument("--e", help="ramification parameter, N or A..B")
    p_verify.add_argument("--format", choices=["text", "json"], default="text")
    p_verify.set_defaults(func=cmd_verify)

    p_table = sub.add_parser("table", help="sweep families and tabulate both counts")
    p_table.add_argument("--families", help="comma-separated family names (default: all)")
    p_table.add_argument("--n", help="index range, N or A..B (default 1..6)")
    p_table.add_argument("--e", help="ramification range, N or A..B (default 1..4)")
    p_table.add_argument("--format", choices=["text", "json"], default="text")
    p_table.set_defaults(func=cmd_table)

    p_quiver = sub.add_parser("quiver", help="McKay quiver of a finite SL2 subgroup")
    p_quiver.add_argument("--group", required=True, help="A1.., D4.., E6..E8")
    p_quiver.add_argument("--format", choices=["text", "json", "dot"], default="text")
    p_quiver.add_argument("--dot", action="store_true", help="shorthand for --format dot")
    p_quiver.set_defaults(func=cmd_quiver)

    p_lattice = sub.add_parser("lattice", help="resolution intersection lattice of a type")
    p_lattice.add_argument("--type", required=True, help="family or ADE node token")
    p_lattice.add_argument("--n", help="index parameter")
    p_lattice.add_argument("--e", help="ramification parameter")
    p_lattice.add_argument("--format", choices=["text", "json", "dot"], default="text")
    p_lattice.add_argument("--dot", action="store_true", help="shorthand for --format dot")
    p_lattice.set_defaults(func=cmd_lattice)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CanordError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())

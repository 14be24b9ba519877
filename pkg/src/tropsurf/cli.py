"""Command-line surface.

Thin dispatch over the library: every command reads the fixture format,
writes deterministic text, and exits 0 on success, 1 on any input or
validation error, 2 when a search exhausts its window without witnesses.
Numeric output is exact (integers, rationals as p/q).  ``--report`` switches
the human text of a command to machine-readable key-value lines.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .blowup import robustify
from .complex_core import FORMAT_VERSION, parse_fixture, serialize
from .cover import orientation_double_cover
from .errors import TropsurfError
from .recognizer import (
    find_decomposition,
    parse_decomposition,
    serialize_decomposition,
    verify_decomposition,
)
from .search import Mode, SearchSpec, obstruction_report, search
from .sheaf import global_linear_functions, sections_of_D
from .topology import (
    betti_numbers,
    euler_characteristic,
    is_closed_surface,
    is_connected_codim1,
    is_locally_connected_codim1,
)
from .tropical import attach_constants, classify_constants, StructureConstants


def _fmt_q(x) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _load(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_fixture(fh.read())


def _load_constants(parsed):
    if not parsed.alphas:
        raise TropsurfError("fixture carries no alpha lines")
    w = attach_constants(parsed.complex, parsed.alphas)
    return w


def cmd_validate(args) -> int:
    parsed = _load(args.fixture)
    c = parsed.complex
    if args.report:
        print("valid 1")
        print(f"vertices {c.vertex_count}")
        print(f"edges {c.edge_count}")
        print(f"facets {c.facet_count}")
    else:
        print(
            f"valid: {c.vertex_count} vertices, {c.edge_count} edges, "
            f"{c.facet_count} facets"
        )
    return 0


def cmd_topology(args) -> int:
    c = _load(args.fixture).complex
    summary = betti_numbers(c)
    chi = euler_characteristic(c)
    closed = is_closed_surface(c, range(c.facet_count)) if c.facet_count else False
    rows = [
        ("chi", chi),
        ("b0", summary.b0),
        ("b1", summary.b1),
        ("b2", summary.b2),
        ("r1", summary.r1),
        ("r2", summary.r2),
        ("locally_connected_codim1", int(is_locally_connected_codim1(c))),
        ("connected_codim1", int(is_connected_codim1(c))),
        ("closed_surface", int(closed)),
    ]
    if args.report:
        for key, val in rows:
            print(f"{key} {val}")
    else:
        print(f"chi = {chi}")
        print(f"betti = ({summary.b0}, {summary.b1}, {summary.b2})")
        print(f"boundary ranks = ({summary.r1}, {summary.r2})")
        print(f"locally connected through codim 1: {bool(rows[6][1])}")
        print(f"connected through codim 1: {bool(rows[7][1])}")
        print(f"closed surface: {bool(rows[8][1])}")
    return 0


def cmd_classify(args) -> int:
    parsed = _load(args.fixture)
    if not parsed.alphas:
        raise TropsurfError("fixture carries no alpha lines")
    seen = {}
    for eid, vid, val in parsed.alphas:
        seen[(eid, vid)] = val
    cls = classify_constants(parsed.complex, StructureConstants(seen))
    print(f"verdict {cls.verdict}")
    for v, ine in enumerate(cls.vertex_inertia):
        print(f"vertex {v} n_plus {ine.n_plus} n_zero {ine.n_zero} n_minus {ine.n_minus}")
    for eid, av, aw, deg in cls.violations:
        print(f"violation edge {eid} alpha {av} {aw} degree {deg}")
    return 0


def cmd_blowup(args) -> int:
    w = _load_constants(_load(args.fixture))
    w2, records = robustify(w)
    alpha = {key: val for key, val in w2.alpha.items()}
    sys.stdout.write(serialize(w2.complex, alpha))
    for r in records:
        print(
            f"# blowup v={r.vertex} e={r.edge} u'={r.new_vertex} "
            f"ev'={r.new_edge_v} ew'={r.new_edge_w} f={r.new_facet}"
        )
    return 0


def cmd_sheaf(args) -> int:
    w = _load_constants(_load(args.fixture))
    basis, summary = sections_of_D(w)
    linear = global_linear_functions(w)
    print(f"rank_linear {summary.rank_linear}")
    print(f"rank_sections {summary.rank_sections}")
    print(f"rank_image_h1 {summary.rank_image_h1}")
    print(f"exactness_identity {int(summary.exactness_identity)}")
    for k, pot in enumerate(linear):
        vals = " ".join(_fmt_q(x) for x in pot.values)
        print(f"linear {k} {vals}")
    for k, g in enumerate(basis):
        for eid, val in enumerate(g.values):
            print(f"section {k} {eid} {val}")
    return 0


def cmd_recognize(args) -> int:
    c = _load(args.fixture).complex
    if args.decomposition:
        with open(args.decomposition, "r", encoding="utf-8") as fh:
            d = parse_decomposition(c, fh.read())
    else:
        d = find_decomposition(c)
        if d is None:
            print("not found")
            return 1
    report = verify_decomposition(c, d)
    print(f"valid {int(report.valid)}")
    print(f"hyperbolic {int(report.hyperbolic)}")
    print(f"sigma_euler {report.sigma_euler}")
    for i, status in enumerate(report.fin_status, start=1):
        print(f"fin {i} {status}")
    for v in report.violations:
        print(f"violation {v}")
    if args.auto_out and not args.decomposition:
        with open(args.auto_out, "w", encoding="utf-8") as fh:
            fh.write(serialize_decomposition(d))
    return 0 if report.valid else 1


def cmd_cover(args) -> int:
    parsed = _load(args.fixture)
    c = parsed.complex
    with open(args.decomposition, "r", encoding="utf-8") as fh:
        d = parse_decomposition(c, fh.read())
    alpha = None
    if parsed.alphas:
        alpha = attach_constants(c, parsed.alphas).alpha
    result = orientation_double_cover(c, d, alpha)
    alpha_map = (
        {key: val for key, val in result.alpha.items()} if result.alpha else None
    )
    sys.stdout.write(
        serialize(result.complex, alpha_map, result.cover_lines())
    )
    if args.decomposition_out:
        with open(args.decomposition_out, "w", encoding="utf-8") as fh:
            fh.write(serialize_decomposition(result.decomposition))
    return 0


def cmd_search(args) -> int:
    c = _load(args.fixture).complex
    spec = SearchSpec(
        complex=c,
        bound=args.bound,
        mode=Mode(args.mode),
        enumerate_all=args.all,
        deterministic=args.deterministic,
        threads=args.threads,
    )
    outcome = search(spec)
    for k, alpha in enumerate(outcome.witnesses):
        print(f"# witness {k}")
        for (eid, vid), val in alpha.items():
            print(f"alpha {eid} {vid} {val}")
    state = "exhausted" if outcome.exhausted else "stopped"
    print(f"{state}: {len(outcome.witnesses)} witnesses")
    print(
        f"# nodes {outcome.nodes_explored} prunes {outcome.prunes} "
        f"elapsed {outcome.elapsed:.3f}s"
    )
    return 0 if outcome.witnesses else 2


def cmd_report(args) -> int:
    c = _load(args.fixture).complex
    rep = obstruction_report(c, args.bound, threads=args.threads)
    print(f"decomposition_found {int(rep.decomposition_found)}")
    print(f"hyperbolic_certified {int(rep.hyperbolic_certified)}")
    print(f"theorems_apply {int(rep.theorems_apply)}")
    if rep.sigma_euler is not None:
        print(f"sigma_euler {rep.sigma_euler}")
    print(
        f"tropical witnesses {len(rep.tropical.witnesses)} "
        f"exhausted {int(rep.tropical.exhausted)}"
    )
    print(
        f"at_most_one witnesses {len(rep.at_most_one.witnesses)} "
        f"exhausted {int(rep.at_most_one.exhausted)}"
    )
    print(f"robustified_tropical {rep.robustified_tropical}")
    if rep.fatal_inconsistency:
        print("FATAL inconsistency: witness found on a certified hyperbolic complex")
        return 1
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="tropsurf",
        description="tropical surfaces: validation, classification, "
        "blow-ups, sheaf sections, decompositions, covers, and search",
    )
    parser.add_argument(
        "--version", action="version", version=FORMAT_VERSION
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("fixture", help="fixture file (tropsurf 1 format)")
        p.set_defaults(fn=fn)
        return p

    p = add("validate", cmd_validate, help="validate a fixture")
    p.add_argument("--report", action="store_true")
    p = add("topology", cmd_topology, help="Euler characteristic, Betti numbers, connectivity")
    p.add_argument("--report", action="store_true")
    add("classify", cmd_classify, help="classify the structure constants in the fixture")
    add("blowup", cmd_blowup, help="robustify: blow up all semidefinite vertices")
    add("sheaf", cmd_sheaf, help="global linear functions and sections of the quotient sheaf")
    p = add("recognize", cmd_recognize, help="verify or discover a manifold-with-fins decomposition")
    p.add_argument("--decomposition", help="decomposition file to verify")
    p.add_argument("--auto", action="store_true", help="discover a decomposition")
    p.add_argument("--auto-out", help="write the discovered decomposition here")
    p = add("cover", cmd_cover, help="orientation double cover")
    p.add_argument("--decomposition", required=True)
    p.add_argument("--decomposition-out", help="write the lifted decomposition here")
    p = add("search", cmd_search, help="branch-and-prune search for structure constants")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--mode", choices=[m.value for m in Mode], default="tropical")
    p.add_argument("--all", action="store_true", help="enumerate every windowed witness")
    p.add_argument("--deterministic", action="store_true")
    p.add_argument("--threads", type=int, default=1)
    p = add("report", cmd_report, help="obstruction report: decomposition plus both searches")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--threads", type=int, default=1)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except TropsurfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

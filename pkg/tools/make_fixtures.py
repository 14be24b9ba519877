"""Generate and verify the test fixtures under tests/fixtures/.

Run from the repository root:

    python3 tools/make_fixtures.py

Closed surfaces built from vertex triples are plain simplicial complexes;
delta-complex fixtures with parallel edges (pillow, theta) are written
directly.  The vertex-minimal genus-2 (10 vertices) and nonorientable
genus-3 (9 vertices) triangulations are produced by bistellar flip
reduction from connected sums and then re-verified: closed surface,
expected Euler characteristic, expected orientability (checked both by
orientation propagation and by the b2 rank criterion).

Every fixture is deterministic (fixed seeds), so reruns are byte-identical.
"""

from __future__ import annotations

import random
import sys
from itertools import combinations
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

import tropsurf as ts  # noqa: E402

OUT = ROOT / "tests" / "fixtures"


# ---------------------------------------------------------------------------
# simplicial complexes from facet triples
# ---------------------------------------------------------------------------


def fixture_from_triples(triples) -> str:
    triples = sorted(tuple(sorted(t)) for t in triples)
    verts = sorted({v for t in triples for v in t})
    assert verts == list(range(len(verts))), "vertex ids must be dense"
    pairs = sorted({(a, b) for t in triples for a, b in combinations(t, 2)})
    eid = {p: i for i, p in enumerate(pairs)}
    lines = ["tropsurf 1", f"vertices {len(verts)}"]
    lines += [f"edge {i} {a} {b}" for (a, b), i in sorted(eid.items(), key=lambda kv: kv[1])]
    for fid, (a, b, c) in enumerate(triples):
        lines.append(
            f"facet {fid} {a} {b} {c} {eid[(a, b)]} {eid[(a, c)]} {eid[(b, c)]}"
        )
    return "\n".join(lines) + "\n"


def edge_facet_map(triples):
    out = {}
    for t in triples:
        for a, b in combinations(sorted(t), 2):
            out.setdefault((a, b), []).append(tuple(sorted(t)))
    return out


def is_closed_triples(triples) -> bool:
    return all(len(fs) == 2 for fs in edge_facet_map(triples).values())


# ---------------------------------------------------------------------------
# bistellar moves
# ---------------------------------------------------------------------------


def flip(triples: set, a: int, b: int) -> bool:
    """2-2 move across edge (a, b); keeps the complex simplicial."""
    owners = [t for t in triples if a in t and b in t]
    if len(owners) != 2:
        return False
    (c,) = [v for v in owners[0] if v not in (a, b)]
    (d,) = [v for v in owners[1] if v not in (a, b)]
    if c == d:
        return False
    if any(c in t and d in t for t in triples):
        return False  # edge (c, d) already exists
    new1, new2 = tuple(sorted((a, c, d))), tuple(sorted((b, c, d)))
    if new1 in triples or new2 in triples:
        return False
    triples.difference_update(map(tuple, map(sorted, owners)))
    triples.update((new1, new2))
    return True


def remove_degree3_vertex(triples: set) -> bool:
    """3-1 move: erase a vertex whose link is a triangle."""
    stars = {}
    for t in triples:
        for v in t:
            stars.setdefault(v, []).append(t)
    for v in sorted(stars):
        star = stars[v]
        if len(star) != 3:
            continue
        link = sorted({x for t in star for x in t if x != v})
        if len(link) != 3:
            continue
        cap = tuple(link)
        if cap in triples:
            continue
        triples.difference_update(star)
        triples.add(cap)
        return True
    return False


def relabel_dense(triples):
    verts = sorted({v for t in triples for v in t})
    remap = {v: i for i, v in enumerate(verts)}
    return {tuple(sorted(remap[v] for v in t)) for t in triples}


def flip_reduce(triples, target_vertices: int, seed: int, max_steps=200000):
    rng = random.Random(seed)
    work = set(tuple(sorted(t)) for t in triples)
    steps = 0
    while len({v for t in work for v in t}) > target_vertices:
        if remove_degree3_vertex(work):
            continue
        edges = sorted(edge_facet_map(work))
        for _ in range(200):
            a, b = rng.choice(edges)
            if flip(work, a, b):
                break
        steps += 1
        if steps > max_steps:
            raise RuntimeError(f"flip reduction stalled at seed {seed}")
    assert is_closed_triples(work)
    return relabel_dense(work)


# ---------------------------------------------------------------------------
# seed surfaces
# ---------------------------------------------------------------------------


def octahedron():
    opposite = {0: 1, 1: 0, 2: 3, 3: 2, 4: 5, 5: 4}
    return [
        tuple(sorted((x, y, z)))
        for x in (0, 1)
        for y in (2, 3)
        for z in (4, 5)
        if opposite[x] != y and opposite[y] != z and opposite[x] != z
    ]


def icosahedron():
    # 0 apex, 1..5 upper ring, 6..10 lower ring, 11 apex; ring i pairs with
    # lower i and i+1, which also puts the five edges at vertex 0 in link
    # order 1,2,3,4,5 (ascending edge ids trace the displayed cycle matrix)
    up = lambda i: 1 + i % 5
    lo = lambda i: 6 + i % 5
    fs = []
    for i in range(5):
        fs.append((0, up(i), up(i + 1)))
        fs.append((11, lo(i), lo(i + 1)))
        fs.append((up(i), lo(i), lo(i + 1)))
        fs.append((up(i), up(i + 1), lo(i + 1)))
    return [tuple(sorted(t)) for t in fs]


def torus7():
    return [tuple(sorted(((i) % 7, (i + 1) % 7, (i + 3) % 7))) for i in range(7)] + [
        tuple(sorted(((i) % 7, (i + 2) % 7, (i + 3) % 7))) for i in range(7)
    ]


def projective_plane6():
    """Brute search: the 6-vertex triangulation of the projective plane."""
    cands = list(combinations(range(6), 3))
    pairs = list(combinations(range(6), 2))
    for combo in combinations(range(len(cands)), 10):
        count = {p: 0 for p in pairs}
        ok = True
        for ci in combo:
            for p in combinations(cands[ci], 2):
                count[p] += 1
                if count[p] > 2:
                    ok = False
                    break
            if not ok:
                break
        if not ok or any(v != 2 for v in count.values()):
            continue
        triples = [cands[ci] for ci in combo]
        text = fixture_from_triples(triples)
        c = ts.build_complex(text)
        if ts.is_closed_surface(c, range(10)) and ts.euler_characteristic(c) == 1:
            return triples
    raise RuntimeError("no 6-vertex projective plane found")


def klein_grid(n: int):
    """Klein bottle as an n x n grid torus with a reversing vertical gluing."""

    def v(i, j):
        i %= n
        if j % n == 0 and j != 0:
            # top row glues to the bottom row reversed
            return (-i) % n
        return (j % n) * n + (i % n)

    fs = set()
    for i in range(n):
        for j in range(n):
            a, b = v(i, j), v(i + 1, j)
            c, d = v(i, j + 1), v(i + 1, j + 1)
            if len({a, b, d}) == 3:
                fs.add(tuple(sorted((a, b, d))))
            if len({a, d, c}) == 3:
                fs.add(tuple(sorted((a, d, c))))
    return sorted(fs)


def connected_sum(t1, t2):
    """Glue two closed surfaces along one removed facet each."""
    t1 = [tuple(sorted(t)) for t in t1]
    t2 = [tuple(sorted(t)) for t in t2]
    n1 = max(v for t in t1 for v in t) + 1
    drop1 = t1[0]
    drop2 = t2[0]
    remap = {}
    for x, y in zip(drop2, drop1):
        remap[x] = y
    nxt = n1
    for t in t2:
        for v in t:
            if v not in remap:
                remap[v] = nxt
                nxt += 1
    out = set(t1) - {drop1}
    for t in t2:
        if t == drop2:
            continue
        out.add(tuple(sorted(remap[v] for v in t)))
    return relabel_dense(out)


# ---------------------------------------------------------------------------
# delta-complex fixtures written directly
# ---------------------------------------------------------------------------

TRIANGLE = """tropsurf 1
vertices 3
edge 0 0 1
edge 1 0 2
edge 2 1 2
facet 0 0 1 2 0 1 2
"""

PILLOW = """tropsurf 1
vertices 3
edge 0 0 1
edge 1 0 2
edge 2 1 2
facet 0 0 1 2 0 1 2
facet 1 0 1 2 0 1 2
"""

THETA = """tropsurf 1
vertices 3
edge 0 0 1
edge 1 0 2
edge 2 1 2
edge 3 0 1
edge 4 0 2
edge 5 1 2
facet 0 0 1 2 0 1 2
facet 1 0 1 2 3 4 5
"""

TWO_TRIANGLES_EDGE = """tropsurf 1
vertices 4
edge 0 0 1
edge 1 0 2
edge 2 0 3
edge 3 1 2
edge 4 1 3
facet 0 0 1 2 0 1 3
facet 1 0 1 3 0 2 4
"""

WEDGE = """tropsurf 1
vertices 5
edge 0 0 1
edge 1 0 2
edge 2 0 3
edge 3 0 4
edge 4 1 2
edge 5 3 4
facet 0 0 1 2 0 1 4
facet 1 0 3 4 2 3 5
"""


def with_fin(text: str, glue_edge: int) -> str:
    """Attach one triangle along an existing edge (a one-facet fin)."""
    parsed = ts.parse_fixture(text)
    c = parsed.complex
    e = c.edge(glue_edge)
    u = c.vertex_count
    lines = ts.serialize(c).rstrip("\n").splitlines()
    out = []
    for line in lines:
        if line.startswith("vertices"):
            out.append(f"vertices {u + 1}")
        else:
            out.append(line)
    ev = c.edge_count
    ew = c.edge_count + 1
    lo, hi = min(e.v, e.w), max(e.v, e.w)
    e_lo = ev if lo == e.v else ew
    e_hi = ew if lo == e.v else ev
    fin_lines = [
        f"edge {ev} {e.v} {u}",
        f"edge {ew} {e.w} {u}",
        f"facet {c.facet_count} {lo} {hi} {u} {glue_edge} {e_lo} {e_hi}",
    ]
    # keep blocks ordered: insert new edges after the last edge line
    last_edge = max(i for i, l in enumerate(out) if l.startswith("edge"))
    out = out[: last_edge + 1] + fin_lines[:2] + out[last_edge + 1:] + [fin_lines[2]]
    return "\n".join(out) + "\n"


def two_tori_at_vertex():
    t1 = torus7()
    t2 = []
    for t in torus7():
        t2.append(tuple(sorted(0 if v == 0 else v + 6 for v in t)))
    return sorted(set(t1) | set(t2))


# ---------------------------------------------------------------------------
# verification and output
# ---------------------------------------------------------------------------


def verify_surface(name, text, v, e, f, chi, orientable):
    c = ts.build_complex(text)
    assert (c.vertex_count, c.edge_count, c.facet_count) == (v, e, f), (
        name, c.vertex_count, c.edge_count, c.facet_count)
    assert ts.euler_characteristic(c) == chi, name
    assert ts.is_closed_surface(c, range(c.facet_count)), name
    got = ts.orientability(c, range(c.facet_count)).orientable
    assert got == orientable, (name, got)
    # independent cross-check: closed surface orientable iff b2 = 1 over Q
    b = ts.betti_numbers(c)
    assert (b.b2 == 1) == orientable, (name, b)
    assert b.b0 - b.b1 + b.b2 == chi, name
    print(f"  {name}: V={v} E={e} F={f} chi={chi} orientable={orientable}")
    return c


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    made = {}

    def put(name, text):
        made[name] = text
        (OUT / f"{name}.trs").write_text(text, encoding="utf-8")

    print("fixed fixtures:")
    put("triangle", TRIANGLE)
    put("pillow", PILLOW)
    put("theta", THETA)
    put("two_triangles_edge", TWO_TRIANGLES_EDGE)
    put("wedge", WEDGE)
    for name in ("triangle", "pillow", "theta", "two_triangles_edge", "wedge"):
        ts.build_complex(made[name])
        print(f"  {name}: ok")

    print("closed surfaces:")
    put("octahedron", fixture_from_triples(octahedron()))
    verify_surface("octahedron", made["octahedron"], 6, 12, 8, 2, True)

    put("icosahedron", fixture_from_triples(icosahedron()))
    verify_surface("icosahedron", made["icosahedron"], 12, 30, 20, 2, True)

    put("torus7", fixture_from_triples(torus7()))
    verify_surface("torus7", made["torus7"], 7, 21, 14, 0, True)

    put("rp2", fixture_from_triples(projective_plane6()))
    verify_surface("rp2", made["rp2"], 6, 15, 10, 1, False)

    klein = klein_grid(3)
    text = fixture_from_triples(klein)
    c = ts.build_complex(text)
    if not (
        ts.is_closed_surface(c, range(c.facet_count))
        and ts.euler_characteristic(c) == 0
        and not ts.orientability(c, range(c.facet_count)).orientable
    ):
        klein = klein_grid(4)
        text = fixture_from_triples(klein)
        c = ts.build_complex(text)
    put("klein", text)
    verify_surface(
        "klein", made["klein"], c.vertex_count, c.edge_count, c.facet_count, 0, False
    )

    # genus 2 = torus # torus, flip-reduced to the 10-vertex minimum
    genus2 = flip_reduce(connected_sum(torus7(), torus7()), 10, seed=7)
    put("genus2", fixture_from_triples(genus2))
    verify_surface("genus2", made["genus2"], 10, 36, 24, -2, True)

    # nonorientable genus 3 (chi = -1) = torus # projective plane, 9 vertices
    n3 = flip_reduce(connected_sum(torus7(), projective_plane6()), 9, seed=3)
    put("n3_genus3", fixture_from_triples(n3))
    verify_surface("n3_genus3", made["n3_genus3"], 9, 30, 20, -1, False)

    print("composites:")
    put("torus7_fin", with_fin(made["torus7"], glue_edge=0))
    c = ts.build_complex(made["torus7_fin"])
    assert (c.vertex_count, c.edge_count, c.facet_count) == (8, 23, 15)
    assert ts.edge_degree(c, 0) == 3
    print("  torus7_fin: glued edge degree 3")

    put("rp2_fin", with_fin(made["rp2"], glue_edge=0))
    c = ts.build_complex(made["rp2_fin"])
    assert (c.vertex_count, c.edge_count, c.facet_count) == (7, 17, 11)
    print("  rp2_fin: ok")

    put("two_tori_vertex", fixture_from_triples(two_tori_at_vertex()))
    c = ts.build_complex(made["two_tori_vertex"])
    assert c.vertex_count == 13
    print("  two_tori_vertex: ok")

    # decomposition files
    def facet_count(name):
        return ts.build_complex(made[name]).facet_count

    for name in ("klein", "rp2", "n3_genus3", "genus2", "torus7", "octahedron"):
        n = facet_count(name)
        (OUT / f"{name}.dec").write_text(
            "sigma " + " ".join(str(i) for i in range(n)) + "\n", encoding="utf-8"
        )
    for name, base in (("torus7_fin", "torus7"), ("rp2_fin", "rp2")):
        n = facet_count(base)
        (OUT / f"{name}.dec").write_text(
            "sigma " + " ".join(str(i) for i in range(n)) + f"\nfin 1 {n}\n",
            encoding="utf-8",
        )
    print("decomposition files written")
    print(f"all fixtures written to {OUT}")


if __name__ == "__main__":
    main()

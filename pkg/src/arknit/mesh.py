"""Combinatorial translation quivers and Hom dimensions in the mesh category.

The mesh category is the path category of the translation quiver modulo the
mesh relations: for each vertex z with a translate, the sum over the mesh of
the composites (tau z -> mid -> z), with parallel copies paired off in ledger
order.  Three evaluators live here:

  * mesh_hom_dim       - literal definition: enumerate paths, span the
                         expanded relations, count paths minus relation rank;
  * mesh_hom_dim_fast  - the additive hammock recursion, clamped at zero with
                         a flag (the brute-force value is authoritative when
                         the flag is set);
  * mesh_hom_table     - one exact source-sweep computing Hom(x, -) as
                         iterated quotients; agrees with mesh_hom_dim and
                         scales to the larger components.

Oriented cycles are refused outright: path enumeration diverges there and
tube-shaped components are out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactlin import QQ, Field, Mat, mat_mul, rref
from .quiver import Quiver


class MeshError(Exception):
    pass


class OrientedCycleError(MeshError):
    def __init__(self, cycle):
        super().__init__(f"oriented cycle refused: {' -> '.join(cycle)}")
        self.cycle = cycle


class MeshLedgerError(MeshError):
    pass


class TranslationQuiver:
    """Vertices, arrows with multiplicities, and a partial injective translate.

    The mesh ledger pairs, for every vertex z with translate, the arrows into
    z with the arrows out of tau z; equal multiplicities are enforced."""

    def __init__(self, vertices, arrows: dict, translate: dict):
        self.vertices = tuple(vertices)
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise MeshLedgerError("duplicate vertices")
        self.arrows = {}
        for (s, t), m in arrows.items():
            if s not in vset or t not in vset:
                raise MeshLedgerError(f"arrow endpoint missing: {s}->{t}")
            if m < 1:
                raise MeshLedgerError("arrow multiplicity must be positive")
            self.arrows[(s, t)] = int(m)
        self.translate = dict(translate)
        for z, tz in self.translate.items():
            if z not in vset or tz not in vset:
                raise MeshLedgerError("translate endpoint missing")
        values = list(self.translate.values())
        if len(set(values)) != len(values):
            raise MeshLedgerError("translate not injective")
        self._out = {v: [] for v in self.vertices}
        self._in = {v: [] for v in self.vertices}
        for (s, t), m in sorted(self.arrows.items()):
            self._out[s].append((t, m))
            self._in[t].append((s, m))
        self._order = self._topological_order()
        self._check_meshes()

    def _topological_order(self):
        indeg = {v: 0 for v in self.vertices}
        for (s, t), m in self.arrows.items():
            indeg[t] += 1
        ready = sorted(v for v in self.vertices if indeg[v] == 0)
        order = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            for t, _ in self._out[v]:
                indeg[t] -= 1
                if indeg[t] == 0:
                    ready.append(t)
            ready.sort()
        if len(order) != len(self.vertices):
            remaining = [v for v in self.vertices if v not in set(order)]
            cycle = self._find_cycle(remaining)
            raise OrientedCycleError(cycle)
        return order

    def _find_cycle(self, remaining):
        rem = set(remaining)
        start = remaining[0]
        seen = []
        v = start
        while v not in seen:
            seen.append(v)
            v = next(t for t, _ in self._out[v] if t in rem)
        i = seen.index(v)
        return seen[i:] + [v]

    def _check_meshes(self):
        for z, tz in self.translate.items():
            into = {s: m for s, m in self._in[z]}
            out = {t: m for t, m in self._out[tz]}
            if into != out:
                raise MeshLedgerError(
                    f"mesh at {z}: arrows into it do not match arrows out of {tz}"
                )

    @property
    def topological_order(self):
        return list(self._order)

    def successors(self, v):
        return list(self._out[v])

    def predecessors(self, v):
        return list(self._in[v])

    def mesh_targets(self):
        return [v for v in self._order if v in self.translate]

    def projectives(self):
        return [v for v in self._order if v not in self.translate]

    def injectives(self):
        image = set(self.translate.values())
        return [v for v in self._order if v not in image]

    def tau_orbits(self):
        """Orbits of the translate, each ordered from the injective end by
        repeated application of tau."""
        starts = [v for v in self._order if v not in set(self.translate.values())]
        orbits = []
        for s in starts:
            orbit = [s]
            while orbit[-1] in self.translate:
                orbit.append(self.translate[orbit[-1]])
            orbits.append(orbit)
        return orbits

    def to_json(self) -> dict:
        return {
            "v": 1,
            "vertices": list(self.vertices),
            "arrows": [{"src": s, "tgt": t, "mult": m} for (s, t), m in sorted(self.arrows.items())],
            "translate": dict(sorted(self.translate.items())),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "TranslationQuiver":
        arrows = {(a["src"], a["tgt"]): a["mult"] for a in doc["arrows"]}
        return cls(doc["vertices"], arrows, doc["translate"])


def from_ar(ar) -> TranslationQuiver:
    """Forget the representations of an ARQuiver, keep the combinatorics."""
    return TranslationQuiver([n.id for n in ar.nodes], dict(ar.arrows), dict(ar.translate))


def build_shape(delta: Quiver, kind: str, window: tuple) -> TranslationQuiver:
    """A finite window of the stable translation quiver over `delta`.

    kind "Z" takes any integer window [a, b]; "N" forces a >= 0 and "Nminus"
    forces b <= 0.  Vertices are "n|x"; the translate sends (n, x) to
    (n-1, x) whenever the earlier level is in the window."""
    delta.require_acyclic()
    a, b = window
    if a > b:
        raise MeshError("empty window")
    if kind not in ("Z", "N", "Nminus"):
        raise MeshError(f"unknown shape kind {kind!r}")
    if kind == "N" and a < 0:
        raise MeshError("N-shaped windows start at level >= 0")
    if kind == "Nminus" and b > 0:
        raise MeshError("Nminus-shaped windows end at level <= 0")

    def vid(n, x):
        return f"{n}|{x}"

    vertices = [vid(n, x) for n in range(a, b + 1) for x in delta.vertex_order]
    arrows: dict = {}
    for n in range(a, b + 1):
        for arr in delta.arrows:
            key = (vid(n, arr.src), vid(n, arr.tgt))
            arrows[key] = arrows.get(key, 0) + 1
            if n + 1 <= b:
                key = (vid(n, arr.tgt), vid(n + 1, arr.src))
                arrows[key] = arrows.get(key, 0) + 1
    translate = {}
    for n in range(a + 1, b + 1):
        for x in delta.vertex_order:
            translate[vid(n, x)] = vid(n - 1, x)
    return TranslationQuiver(vertices, arrows, translate)


# ---------------------------------------------------------------------------
# sections
# ---------------------------------------------------------------------------


@dataclass
class SectionCheck:
    connected: bool
    convex: bool
    acyclic: bool
    meets_orbits_once: bool

    @property
    def ok(self) -> bool:
        return self.connected and self.convex and self.acyclic and self.meets_orbits_once


@dataclass
class SectionView:
    """A section with its orbit chart and the two strict translate sides.

    Every vertex of the component is written once as tau^n applied to a
    section member; delta_plus collects n < 0 (the inverse-translate side)
    and delta_minus collects n > 0.  The no-infinite-path flags are recorded
    for window semantics; on finite data they are always true."""

    vertices: tuple
    orbit_chart: dict  # vertex -> (n, section member)
    delta_plus: tuple
    delta_minus: tuple
    no_left_infinite: bool = True
    no_right_infinite: bool = True


def _reachable(tq: TranslationQuiver, sources, forward: bool):
    seen = set(sources)
    stack = list(sources)
    while stack:
        v = stack.pop()
        nbrs = tq.successors(v) if forward else tq.predecessors(v)
        for w, _ in nbrs:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def is_section(tq: TranslationQuiver, candidate) -> SectionCheck:
    """Check the defining conditions: connected, convex, acyclic, and meeting
    every translate orbit exactly once."""
    cand = list(dict.fromkeys(candidate))
    cset = set(cand)
    if not cset or not cset.issubset(set(tq.vertices)):
        raise MeshError("section candidate outside the translation quiver")
    # connectivity in the underlying graph restricted to the candidate
    seen = {cand[0]}
    stack = [cand[0]]
    while stack:
        v = stack.pop()
        for w, _ in tq.successors(v) + tq.predecessors(v):
            if w in cset and w not in seen:
                seen.add(w)
                stack.append(w)
    connected = len(seen) == len(cset)
    descendants = _reachable(tq, cset, forward=True)
    ancestors = _reachable(tq, cset, forward=False)
    convex = (descendants & ancestors).issubset(cset)
    acyclic = True  # the ambient quiver is acyclic by construction
    counts = [len(cset.intersection(orbit)) for orbit in tq.tau_orbits()]
    meets = all(c == 1 for c in counts)
    return SectionCheck(connected, convex, acyclic, meets)


def section_view(tq: TranslationQuiver, candidate) -> SectionView:
    check = is_section(tq, candidate)
    if not check.ok:
        raise MeshError("candidate is not a section")
    cset = set(candidate)
    chart = {}
    for orbit in tq.tau_orbits():
        # orbit[0] is the injective end; orbit[i] = tau^i orbit[0]
        base_idx = next(i for i, v in enumerate(orbit) if v in cset)
        for i, v in enumerate(orbit):
            # v = tau^{i - base_idx} (orbit[base_idx])
            chart[v] = (i - base_idx, orbit[base_idx])
    plus = tuple(sorted(v for v, (n, _) in chart.items() if n < 0))
    minus = tuple(sorted(v for v, (n, _) in chart.items() if n > 0))
    return SectionView(tuple(sorted(cset)), chart, plus, minus)


def find_sections(tq: TranslationQuiver, limit: int = 100_000):
    """Enumerate all sections (one vertex per orbit, connected and convex).

    Returns (sections, truncated); enumeration stops at `limit` candidates
    and reports the truncation instead of silently missing sections."""
    orbits = tq.tau_orbits()
    total = 1
    for orbit in orbits:
        total *= len(orbit)
    truncated = total > limit
    sections = []
    indices = [0] * len(orbits)

    count = 0
    while True:
        if count >= limit:
            break
        candidate = [orbits[k][indices[k]] for k in range(len(orbits))]
        count += 1
        if is_section(tq, candidate).ok:
            sections.append(section_view(tq, candidate))
        pos = len(orbits) - 1
        while pos >= 0:
            indices[pos] += 1
            if indices[pos] < len(orbits[pos]):
                break
            indices[pos] = 0
            pos -= 1
        if pos < 0:
            break
    sections.sort(key=lambda sv: sv.vertices)
    return sections, truncated


# ---------------------------------------------------------------------------
# mesh category Hom dimensions
# ---------------------------------------------------------------------------


def _arrow_instances(tq: TranslationQuiver, s, t):
    return [(s, t, j) for j in range(tq.arrows.get((s, t), 0))]


def _paths_between(tq: TranslationQuiver, x, y):
    """All instance-paths x ~> y (arrow copies distinguished), as tuples."""
    memo: dict = {}

    def walk(v):
        if v in memo:
            return memo[v]
        acc = [()] if v == y else []
        for t, m in tq.successors(v):
            for rest in walk(t):
                for j in range(m):
                    acc.append(((v, t, j),) + rest)
        memo[v] = acc
        return acc

    return sorted(walk(x))


def mesh_hom_dim(tq: TranslationQuiver, x, y, field: Field = QQ) -> int:
    """Hom dimension in the mesh category by the defining computation:
    all paths x ~> y, minus the rank of the expanded mesh relations p.delta.q."""
    if x not in set(tq.vertices) or y not in set(tq.vertices):
        raise MeshError("unknown vertex")
    paths = _paths_between(tq, x, y)
    if not paths:
        return 0
    index = {p: i for i, p in enumerate(paths)}
    rows = []
    for z in tq.mesh_targets():
        tz = tq.translate[z]
        front = _paths_between(tq, x, tz)
        if not front:
            continue
        back = _paths_between(tq, z, y)
        if not back:
            continue
        arms = []
        for mid, m in tq.successors(tz):
            if tq.arrows.get((mid, z), 0) != m:
                raise MeshLedgerError(f"polarization mismatch in the mesh at {z}")
            for j in range(m):
                arms.append(((tz, mid, j), (mid, z, j)))
        for u in front:
            for w in back:
                row = [0] * len(paths)
                for alpha, beta in arms:
                    row[index[u + (alpha, beta) + w]] += 1
                rows.append(row)
    if not rows:
        return len(paths)
    mat = Mat.from_ints(field, rows)
    _, pivots = rref(mat)
    return len(paths) - len(pivots)


@dataclass
class FastHomResult:
    value: int
    clamped: bool


def mesh_hom_dim_fast(tq: TranslationQuiver, x, y, field: Field = QQ) -> FastHomResult:
    """Hammock recursion h(z) = sum over arrows w->z of mult.h(w) - h(tau z),
    clamped at zero.  When no clamp fired the value equals mesh_hom_dim;
    otherwise the brute-force value is authoritative."""
    if x not in set(tq.vertices) or y not in set(tq.vertices):
        raise MeshError("unknown vertex")
    h = {}
    clamped = False
    for z in tq.topological_order:
        if z == x:
            h[z] = 1
            continue
        raw = sum(m * h.get(w, 0) for w, m in tq.predecessors(z))
        tz = tq.translate.get(z)
        if tz is not None:
            raw -= h.get(tz, 0)
        if raw < 0:
            raw = 0
            clamped = True
        h[z] = raw
    return FastHomResult(h.get(y, 0), clamped)


def mesh_hom_table(tq: TranslationQuiver, x, field: Field = QQ) -> dict:
    """Exact Hom(x, -) dimensions in one sweep.

    Maintains, per vertex, a concrete coordinate space for the mesh-category
    Hom from x and, per arrow instance, the induced composition matrix; each
    mesh target is the quotient of the incoming sum by the polarized image of
    the translate's space.  Equivalent to mesh_hom_dim (tested), but linear
    in the component instead of path-enumerating."""
    if x not in set(tq.vertices):
        raise MeshError("unknown vertex")
    f = field

    def coordinate_inclusion(total, off, width):
        return Mat(
            f,
            [[f.one() if r == off + c else f.zero() for c in range(width)] for r in range(total)],
            shape=(total, width),
        )

    dims: dict = {}
    arrow_mats: dict = {}
    for z in tq.topological_order:
        raw_parts = []  # (w, copy, offset into the raw sum)
        offset = 0
        for w, m in tq.predecessors(z):
            for j in range(m):
                raw_parts.append((w, j, offset))
                offset += dims.get(w, 0)
        raw_dim = offset
        if z == x:
            if raw_dim:
                raise MeshError("source vertex has incoming paths from itself")
            dims[z] = 1
            continue
        tz = tq.translate.get(z)
        if tz is None or dims.get(tz, 0) == 0:
            dims[z] = raw_dim
            for w, j, off in raw_parts:
                arrow_mats[(w, z, j)] = coordinate_inclusion(raw_dim, off, dims.get(w, 0))
            continue
        # relation map V[tau z] -> raw sum, one polarized block per part
        d_tz = dims[tz]
        rel = [[f.zero()] * d_tz for _ in range(raw_dim)]
        for w, j, off in raw_parts:
            block = arrow_mats[(tz, w, j)]
            for r in range(block.rows):
                for c in range(d_tz):
                    rel[off + r][c] = block[r, c]
        rel_mat = Mat(f, rel, shape=(raw_dim, d_tz))
        rr, pivots = rref(rel_mat.transpose())
        free = [i for i in range(raw_dim) if i not in set(pivots)]
        dims[z] = len(free)
        proj = []
        for fi in free:
            row = [f.zero()] * raw_dim
            row[fi] = f.one()
            for k, pc in enumerate(pivots):
                row[pc] = f.neg(rr[k, fi])
            proj.append(row)
        proj_mat = Mat(f, proj, shape=(len(free), raw_dim))
        for w, j, off in raw_parts:
            incl = coordinate_inclusion(raw_dim, off, dims.get(w, 0))
            arrow_mats[(w, z, j)] = mat_mul(proj_mat, incl)
    return {v: dims.get(v, 0) for v in tq.vertices}


# ---------------------------------------------------------------------------
# wings and quasi-simples
# ---------------------------------------------------------------------------


@dataclass
class WingChart:
    """Triangular chart: coords[(i, j)] for 1 <= j <= i <= rank; row i is one
    translate orbit with (i, j+1) the translate of (i, j); the bottom row
    holds the quasi-simple vertices and (1, 1) is the wing vertex."""

    rank: int
    coords: dict

    def quasi_simples(self):
        return [self.coords[(self.rank, j)] for j in range(1, self.rank + 1)]

    def wing_vertex(self):
        return self.coords[(1, 1)]


def detect_wing(tq: TranslationQuiver):
    """Match the triangular wing pattern; None when the shape is absent."""
    orbits = tq.tau_orbits()
    n = len(orbits)
    if len(tq.vertices) != n * (n + 1) // 2:
        return None
    by_size = {}
    for orbit in orbits:
        if len(orbit) in by_size:
            return None
        by_size[len(orbit)] = orbit
    if sorted(by_size) != list(range(1, n + 1)):
        return None
    coords = {}
    for i in range(1, n + 1):
        orbit = by_size[i]
        # orbit is ordered from the injective end, i.e. orbit[j-1] = X_{i j}
        for j, v in enumerate(orbit, start=1):
            coords[(i, j)] = v
    expected = {}
    for i in range(1, n + 1):
        for j in range(1, i + 1):
            if i < n:
                expected[(coords[(i, j)], coords[(i + 1, j)])] = 1
            if j >= 2:
                expected[(coords[(i, j)], coords[(i - 1, j - 1)])] = 1
    if expected != tq.arrows:
        return None
    return WingChart(n, coords)


def quasi_simples(tq: TranslationQuiver):
    """Bottom row of a wing; otherwise the vertices with at most one
    immediate predecessor and at most one immediate successor."""
    chart = detect_wing(tq)
    if chart is not None:
        return chart.quasi_simples()
    out = []
    for v in tq.topological_order:
        preds = sum(m for _, m in tq.predecessors(v))
        succs = sum(m for _, m in tq.successors(v))
        if preds <= 1 and succs <= 1:
            out.append(v)
    return out

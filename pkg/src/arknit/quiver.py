"""Quivers, paths, walks, dimension-vector forms and the built-in families.

A quiver is a finite directed multigraph with string vertex ids and
identified arrows.  Construction enforces unique ids and existing endpoints;
acyclicity and connectivity are reported by `validate` and enforced by the
operations that need them.  Vertex order is fixed once (a topological sort
refined by id) so every matrix built downstream is deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction


class QuiverError(Exception):
    pass


class CyclicQuiverError(QuiverError):
    pass


class WalkError(QuiverError):
    pass


@dataclass(frozen=True)
class Arrow:
    id: str
    src: str
    tgt: str


class Quiver:
    """Finite directed multigraph.  Immutable after construction."""

    def __init__(self, vertices, arrows):
        self.vertices = tuple(vertices)
        self.arrows = tuple(Arrow(*a) if not isinstance(a, Arrow) else a for a in arrows)
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex ids")
        ids = [a.id for a in self.arrows]
        if len(set(ids)) != len(ids):
            raise QuiverError("duplicate arrow ids")
        vset = set(self.vertices)
        for a in self.arrows:
            if a.src not in vset or a.tgt not in vset:
                raise QuiverError(f"arrow {a.id} has dangling endpoint")
        self._arrow_by_id = {a.id: a for a in self.arrows}
        self._out = {v: [] for v in self.vertices}
        self._in = {v: [] for v in self.vertices}
        for a in self.arrows:
            self._out[a.src].append(a)
            self._in[a.tgt].append(a)
        self._topo = self._topo_sort()
        # fixed vertex order: topological when acyclic, id order otherwise
        self.vertex_order = tuple(self._topo) if self._topo is not None else tuple(sorted(self.vertices))
        self._vindex = {v: i for i, v in enumerate(self.vertex_order)}

    def _topo_sort(self):
        indeg = {v: 0 for v in self.vertices}
        for a in self.arrows:
            indeg[a.tgt] += 1
        ready = sorted(v for v in self.vertices if indeg[v] == 0)
        order = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            changed = False
            for a in self._out[v]:
                indeg[a.tgt] -= 1
                if indeg[a.tgt] == 0:
                    ready.append(a.tgt)
                    changed = True
            if changed:
                ready.sort()
        return order if len(order) == len(self.vertices) else None

    @property
    def is_acyclic(self) -> bool:
        return self._topo is not None

    @property
    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            v = stack.pop()
            for a in self._out[v] + self._in[v]:
                for w in (a.src, a.tgt):
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
        return len(seen) == len(self.vertices)

    def arrow(self, aid: str) -> Arrow:
        if aid not in self._arrow_by_id:
            raise QuiverError(f"unknown arrow {aid!r}")
        return self._arrow_by_id[aid]

    def arrows_from(self, v: str):
        self._check_vertex(v)
        return tuple(self._out[v])

    def arrows_into(self, v: str):
        self._check_vertex(v)
        return tuple(self._in[v])

    def vertex_index(self, v: str) -> int:
        self._check_vertex(v)
        return self._vindex[v]

    def _check_vertex(self, v: str):
        if v not in self._vindex:
            raise QuiverError(f"unknown vertex {v!r}")

    def require_acyclic(self):
        if not self.is_acyclic:
            raise CyclicQuiverError("quiver has a directed cycle")

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, [Arrow(a.id, a.tgt, a.src) for a in self.arrows])

    def __eq__(self, other):
        return (
            isinstance(other, Quiver)
            and self.vertices == other.vertices
            and self.arrows == other.arrows
        )

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def __repr__(self):
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"

    def to_json(self) -> dict:
        return {
            "v": 1,
            "vertices": list(self.vertices),
            "arrows": [{"id": a.id, "src": a.src, "tgt": a.tgt} for a in self.arrows],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Quiver":
        return cls(doc["vertices"], [(a["id"], a["src"], a["tgt"]) for a in doc["arrows"]])


@dataclass
class ValidationReport:
    acyclic: bool
    connected: bool
    locally_finite: bool
    path_finite: bool

    @property
    def ok(self) -> bool:
        return self.acyclic and self.connected


def validate(q: Quiver) -> ValidationReport:
    """Structural report.  Finite data is always locally finite, and path
    finiteness coincides with acyclicity for finite quivers."""
    return ValidationReport(
        acyclic=q.is_acyclic,
        connected=q.is_connected,
        locally_finite=True,
        path_finite=q.is_acyclic,
    )


def enumerate_paths(q: Quiver, x: str, y: str):
    """All directed paths x to y as arrow-id tuples, in lexicographic order.

    Includes the trivial path () when x == y.
    """
    q.require_acyclic()
    q._check_vertex(x)
    q._check_vertex(y)
    memo: dict[str, list[tuple[str, ...]]] = {}

    def walk(v: str):
        if v in memo:
            return memo[v]
        acc = [()] if v == y else []
        for a in q.arrows_from(v):
            for rest in walk(a.tgt):
                acc.append((a.id,) + rest)
        memo[v] = acc
        return acc

    return sorted(walk(x))


def check_dim_vector(q: Quiver, d: dict) -> None:
    if set(d) != set(q.vertices):
        raise QuiverError("dimension vector indexed by the wrong vertex set")


def euler_form(q: Quiver, d: dict, e: dict) -> int:
    """<d, e> = sum_x d_x e_x - sum_{arrows x->y} d_x e_y."""
    q.require_acyclic()
    check_dim_vector(q, d)
    check_dim_vector(q, e)
    total = sum(d[x] * e[x] for x in q.vertices)
    for a in q.arrows:
        total -= d[a.src] * e[a.tgt]
    return total


def euler_matrix(q: Quiver):
    """Gram matrix C of euler_form in vertex_order: <d,e> = d^T C e."""
    n = len(q.vertex_order)
    c = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for a in q.arrows:
        c[q.vertex_index(a.src)][q.vertex_index(a.tgt)] -= 1
    return c


def _int_inverse(mat):
    n = len(mat)
    aug = [[Fraction(mat[i][j]) for j in range(n)] + [Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        pr = next(i for i in range(col, n) if aug[i][col] != 0)
        aug[col], aug[pr] = aug[pr], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    inv = [[aug[i][n + j] for j in range(n)] for i in range(n)]
    for row in inv:
        for x in row:
            if x.denominator != 1:
                raise QuiverError("euler matrix not unimodular")
    return [[int(x) for x in row] for row in inv]


def _mat_mul_int(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def coxeter_matrix(q: Quiver):
    """Integer matrix Phi with dim tau(M) == Phi . dim M for non-projectives.

    With C the Gram matrix of euler_form in row convention, Phi = -C^{-1} C^T.
    """
    q.require_acyclic()
    c = euler_matrix(q)
    ct = [list(row) for row in zip(*c)]
    prod = _mat_mul_int(_int_inverse(c), ct)
    return [[-x for x in row] for row in prod]


def coxeter_inverse_matrix(q: Quiver):
    """Integer matrix with dim tau^{-}(M) == Phi^{-1} . dim M for non-injectives."""
    q.require_acyclic()
    c = euler_matrix(q)
    ct = [list(row) for row in zip(*c)]
    prod = _mat_mul_int(_int_inverse(ct), c)
    return [[-x for x in row] for row in prod]


def _apply_int_matrix(q: Quiver, mat, d: dict) -> dict:
    vec = [d[v] for v in q.vertex_order]
    out = [sum(mat[i][j] * vec[j] for j in range(len(vec))) for i in range(len(vec))]
    return {v: out[i] for i, v in enumerate(q.vertex_order)}


def coxeter_transform(q: Quiver, d: dict) -> dict:
    """Dimension-vector shadow of tau; entries may go negative on projectives."""
    check_dim_vector(q, d)
    return _apply_int_matrix(q, coxeter_matrix(q), d)


def coxeter_inverse_transform(q: Quiver, d: dict) -> dict:
    check_dim_vector(q, d)
    return _apply_int_matrix(q, coxeter_inverse_matrix(q), d)


# ---------------------------------------------------------------------------
# walks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Walk:
    """Alternating sequence of vertices and signed arrows.

    `steps[i]` is (arrow id, forward) and connects vertices[i] to
    vertices[i+1]; forward means the arrow is traversed from src to tgt.
    """

    vertices: tuple
    steps: tuple


def make_walk(q: Quiver, vertices, steps) -> Walk:
    """Validate and build a reduced walk: consecutive entries incident, no
    arrow immediately followed by its own inverse, at least one vertex."""
    vertices = tuple(vertices)
    steps = tuple((aid, bool(fwd)) for aid, fwd in steps)
    if not vertices:
        raise WalkError("walk needs at least one vertex")
    if len(steps) != len(vertices) - 1:
        raise WalkError("walk shape mismatch")
    for v in vertices:
        q._check_vertex(v)
    for i, (aid, fwd) in enumerate(steps):
        a = q.arrow(aid)
        frm, to = (a.src, a.tgt) if fwd else (a.tgt, a.src)
        if vertices[i] != frm or vertices[i + 1] != to:
            raise WalkError(f"step {aid} not incident with its endpoints")
        if i > 0 and steps[i - 1][0] == aid and steps[i - 1][1] != fwd:
            raise WalkError(f"walk not reduced at {aid}")
    return Walk(vertices, steps)


def parse_walk(q: Quiver, text: str) -> Walk:
    """Parse "v0 a v1 ~b v2": plain tokens are forward arrows, ~ marks a
    backward traversal; vertices and arrows alternate."""
    tokens = text.replace(",", " ").split()
    if not tokens:
        raise WalkError("empty walk")
    vertices = tokens[0::2]
    arrow_tokens = tokens[1::2]
    if len(vertices) != len(arrow_tokens) + 1:
        raise WalkError("walk tokens must alternate vertex, arrow, vertex, ...")
    steps = []
    for t in arrow_tokens:
        if t.startswith("~"):
            steps.append((t[1:], False))
        else:
            steps.append((t, True))
    return make_walk(q, vertices, steps)


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------

FAMILY_NAMES = (
    "linear_A",
    "alternating_A",
    "D",
    "E",
    "kronecker",
    "trunc_A_inf",
    "trunc_A_biinf",
    "trunc_D_inf",
)


def _orient(edges, word):
    if word is None:
        word = ">" * len(edges)
    if len(word) != len(edges) or any(ch not in "<>" for ch in word):
        raise QuiverError(f"orientation word must be over <> with length {len(edges)}")
    arrows = []
    for i, ((u, v), ch) in enumerate(zip(edges, word), start=1):
        if ch == ">":
            arrows.append((f"a{i}", u, v))
        else:
            arrows.append((f"a{i}", v, u))
    return arrows


def _line_edges(labels):
    return [(labels[i], labels[i + 1]) for i in range(len(labels) - 1)]


def _alternating_word(n_edges: int) -> str:
    return "".join(">" if i % 2 == 0 else "<" for i in range(n_edges))


def _d_shape_labels(n: int):
    # two fork vertices 1, 2 joined to 3, then a chain 3-4-...-n
    labels = [str(i) for i in range(1, n + 1)]
    edges = [("1", "3"), ("2", "3")] + _line_edges(labels[2:])
    return labels, edges


def family(name: str, size: int | None = None, orientation: str | None = None) -> Quiver:
    """Build one of the named quiver families.

    Truncations of the infinite shapes take a size and an orientation word
    (one <> character per edge); finite families accept an optional word.
    """
    if name == "linear_A":
        if size is None or size < 1:
            raise QuiverError("linear_A needs size >= 1")
        labels = [str(i) for i in range(1, size + 1)]
        return Quiver(labels, _orient(_line_edges(labels), orientation))
    if name == "alternating_A":
        if size is None or size < 1:
            raise QuiverError("alternating_A needs size >= 1")
        labels = [str(i) for i in range(1, size + 1)]
        word = orientation if orientation is not None else _alternating_word(size - 1)
        return Quiver(labels, _orient(_line_edges(labels), word))
    if name == "D":
        if size is None or size < 3:
            raise QuiverError("D needs size >= 3")
        labels, edges = _d_shape_labels(size)
        return Quiver(labels, _orient(edges, orientation))
    if name == "E":
        if size not in (6, 7, 8):
            raise QuiverError("E needs size in {6, 7, 8}")
        labels = [str(i) for i in range(1, size + 1)]
        chain = ["1", "3", "4", "5", "6", "7", "8"][: size - 1]
        edges = _line_edges(chain) + [("2", "4")]
        return Quiver(labels, _orient(edges, orientation))
    if name == "kronecker":
        if size not in (None, 2):
            raise QuiverError("kronecker takes no size")
        return Quiver(["1", "2"], [("a", "1", "2"), ("b", "1", "2")])
    if name == "trunc_A_inf":
        if size is None or size < 1:
            raise QuiverError("trunc_A_inf needs size >= 1")
        labels = [str(i) for i in range(1, size + 1)]
        return Quiver(labels, _orient(_line_edges(labels), orientation))
    if name == "trunc_A_biinf":
        if size is None or size < 1:
            raise QuiverError("trunc_A_biinf needs size >= 1")
        lo = -(size // 2)
        labels = [str(i) for i in range(lo, lo + size)]
        word = orientation if orientation is not None else _alternating_word(size - 1)
        return Quiver(labels, _orient(_line_edges(labels), word))
    if name == "trunc_D_inf":
        if size is None or size < 3:
            raise QuiverError("trunc_D_inf needs size >= 3")
        labels, edges = _d_shape_labels(size)
        return Quiver(labels, _orient(edges, orientation))
    raise QuiverError(f"unknown family {name!r}")


def parse_quiver_spec(spec: str) -> Quiver:
    """Accept a file path to quiver JSON or the shorthand family:NAME[:SIZE[:WORD]]."""
    if spec.startswith("family:"):
        parts = spec.split(":")
        name = parts[1]
        size = int(parts[2]) if len(parts) > 2 and parts[2] else None
        word = parts[3] if len(parts) > 3 else None
        return family(name, size, word)
    with open(spec, "r", encoding="utf-8") as fh:
        return Quiver.from_json(json.load(fh))

"""Knitting of Auslander-Reiten components, starting from the projectives.

The state machine keeps, for every node, the arrows already known into it.
A node is mesh-ready once every non-injective predecessor has its inverse
translate realized: the arrows out of the node are then complete (projective
insertions are present from the start, and each mesh completion added the
arrow to the fresh translate target).  Completing the mesh of X realizes
tau^{-}X as an actual representation, asserts mesh additivity, and records
the new arrows.  Components that do not close within the budget come back
flagged as windows; every downstream checker accepts windows and weakens its
claims accordingly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .exactlin import QQ, Field, Mat, field_from_str, field_to_str, kernel_basis
from .quiver import Quiver
from .rep import (
    Morph,
    Rep,
    RepError,
    direct_sum,
    find_isomorphism,
    hom_basis,
    injective,
    projective,
    rad_power_dims,
    yoneda_morphism,
    _proj_paths,
)
from .artheory import ConstructionError, tau_inverse


class KnitError(RepError):
    pass


class NonDynkinError(KnitError):
    pass


@dataclass
class ARNode:
    id: str
    rep: Rep
    base_vertex: str  # orbit coordinates: node is tau^{-shift} P_{base_vertex}
    shift: int
    is_projective: bool
    is_injective: bool
    level: int = 0

    @property
    def dims(self) -> dict:
        return self.rep.dim_vector()


@dataclass(eq=False)
class ARQuiver:
    """A realized translation quiver: nodes carry representations, arrows carry
    multiplicities (valuations are symmetric and trivial in this engine's
    stored normal form), and translate is the partial map Z -> tau Z."""

    quiver: Quiver
    field: Field
    nodes: list
    arrows: dict  # (src id, tgt id) -> multiplicity
    translate: dict  # node id -> node id of its translate
    complete: bool
    shape_tag: str | None = None
    _by_id: dict = dc_field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._by_id:
            self._by_id = {n.id: n for n in self.nodes}

    def node(self, node_id: str) -> ARNode:
        return self._by_id[node_id]

    def node_ids(self):
        return [n.id for n in self.nodes]

    def rep_of(self, node_id: str) -> Rep:
        return self._by_id[node_id].rep

    def arrows_out(self, node_id: str):
        return sorted(
            ((t, m) for (s, t), m in self.arrows.items() if s == node_id),
            key=lambda tm: self._creation_index(tm[0]),
        )

    def arrows_in(self, node_id: str):
        return sorted(
            ((s, m) for (s, t), m in self.arrows.items() if t == node_id),
            key=lambda sm: self._creation_index(sm[0]),
        )

    def _creation_index(self, node_id: str) -> int:
        return next(i for i, n in enumerate(self.nodes) if n.id == node_id)

    def valuation(self, src: str, tgt: str):
        m = self.arrows.get((src, tgt), 0)
        return (m, m)

    def to_json(self) -> dict:
        return {
            "v": 1,
            "field": field_to_str(self.field),
            "quiver": self.quiver.to_json(),
            "complete": self.complete,
            "shape_tag": self.shape_tag,
            "nodes": [
                {
                    "id": n.id,
                    "dims": n.dims,
                    "base_vertex": n.base_vertex,
                    "shift": n.shift,
                    "projective": n.is_projective,
                    "injective": n.is_injective,
                    "level": n.level,
                    "rep": n.rep.to_json(),
                }
                for n in self.nodes
            ],
            "arrows": [
                {"src": s, "tgt": t, "mult": m, "valuation": [m, m]}
                for (s, t), m in sorted(self.arrows.items())
            ],
            "translate": dict(sorted(self.translate.items())),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "ARQuiver":
        q = Quiver.from_json(doc["quiver"])
        f = field_from_str(doc["field"])
        nodes = [
            ARNode(
                id=nd["id"],
                rep=Rep.from_json(q, f, nd["rep"]),
                base_vertex=nd["base_vertex"],
                shift=nd["shift"],
                is_projective=nd["projective"],
                is_injective=nd["injective"],
                level=nd["level"],
            )
            for nd in doc["nodes"]
        ]
        arrows = {(a["src"], a["tgt"]): a["mult"] for a in doc["arrows"]}
        return cls(
            quiver=q,
            field=f,
            nodes=nodes,
            arrows=arrows,
            translate=dict(doc["translate"]),
            complete=doc["complete"],
            shape_tag=doc.get("shape_tag"),
        )


def _node_id(base_vertex: str, shift: int) -> str:
    return f"P:{base_vertex}" if shift == 0 else f"T{shift}:{base_vertex}"


def _injectivity_flag(rep: Rep, injectives: dict) -> bool:
    for x, inj in injectives.items():
        if rep.dims == inj.dims and find_isomorphism(rep, inj) is not None:
            return True
    return False


def _knit(q: Quiver, budget: int | None, f: Field) -> ARQuiver:
    q.require_acyclic()
    if not q.is_connected:
        raise KnitError("knitting needs a connected quiver")
    injectives = {x: injective(q, x, f) for x in q.vertices}
    nodes: list[ARNode] = []
    by_id: dict[str, ARNode] = {}
    arrows: dict = {}
    translate: dict = {}
    has_inverse: set = set()
    for x in q.vertex_order:
        rep = projective(q, x, f)
        node = ARNode(
            id=_node_id(x, 0),
            rep=rep,
            base_vertex=x,
            shift=0,
            is_projective=True,
            is_injective=_injectivity_flag(rep, injectives),
        )
        nodes.append(node)
        by_id[node.id] = node
    for a in q.arrows:
        key = (_node_id(a.tgt, 0), _node_id(a.src, 0))
        arrows[key] = arrows.get(key, 0) + 1
    in_arrows: dict[str, list] = {n.id: [] for n in nodes}
    out_arrows: dict[str, list] = {n.id: [] for n in nodes}
    for (s, t), m in arrows.items():
        in_arrows[t].append((s, m))
        out_arrows[s].append((t, m))

    def ready(node: ARNode) -> bool:
        if node.is_injective or node.id in has_inverse:
            return False
        return all(by_id[w].is_injective or w in has_inverse for w, _ in in_arrows[node.id])

    meshes = 0
    while budget is None or meshes < budget:
        candidate = next((n for n in nodes if ready(n)), None)
        if candidate is None:
            break
        x = candidate
        middle = out_arrows[x.id]
        if not middle:
            raise KnitError(f"non-injective node {x.id} has no successors to knit against")
        z_rep = tau_inverse(x.rep)
        expected = {v: sum(m * by_id[t].rep.dims[v] for t, m in middle) - x.rep.dims[v] for v in q.vertices}
        if z_rep.dim_vector() != expected:
            raise ConstructionError(f"mesh additivity fails at {x.id}")
        z = ARNode(
            id=_node_id(x.base_vertex, x.shift + 1),
            rep=z_rep,
            base_vertex=x.base_vertex,
            shift=x.shift + 1,
            is_projective=False,
            is_injective=_injectivity_flag(z_rep, injectives),
        )
        nodes.append(z)
        by_id[z.id] = z
        in_arrows[z.id] = []
        out_arrows[z.id] = []
        translate[z.id] = x.id
        has_inverse.add(x.id)
        for t, m in middle:
            arrows[(t, z.id)] = m
            in_arrows[z.id].append((t, m))
            out_arrows[t].append((z.id, m))
        meshes += 1
    closed = all(n.is_injective or n.id in has_inverse for n in nodes)
    if not closed and budget is None:
        raise KnitError("knitting stalled before closure")
    # levels: 0 on the starting section, else one past the latest predecessor
    for n in nodes:
        if n.is_projective:
            n.level = 0
        else:
            n.level = 1 + max((by_id[w].level for w, _ in in_arrows[n.id]), default=0)
    return ARQuiver(
        quiver=q,
        field=f,
        nodes=nodes,
        arrows=arrows,
        translate=translate,
        complete=closed,
    )


def knit_preprojective(q: Quiver, budget: int, field: Field = QQ) -> ARQuiver:
    """Knit up to `budget` meshes from the projectives.

    Returns a complete component when it closes (every node injective or
    translated), otherwise a window."""
    if budget < 1:
        raise KnitError("budget must be at least 1")
    return _knit(q, budget, field)


def underlying_dynkin_type(q: Quiver):
    """('A'|'D'|'E', n) when the underlying graph is simply laced Dynkin, else None."""
    n = len(q.vertices)
    if n == 0:
        return None
    pairs = set()
    adj = {v: set() for v in q.vertices}
    for a in q.arrows:
        key = frozenset((a.src, a.tgt))
        if a.src == a.tgt or key in pairs:
            return None  # loop or multiple edge
        pairs.add(key)
        adj[a.src].add(a.tgt)
        adj[a.tgt].add(a.src)
    if len(q.arrows) != n - 1 or not q.is_connected:
        return None
    degrees = {v: len(adj[v]) for v in q.vertices}
    branch = [v for v, d in degrees.items() if d >= 3]
    if any(degrees[v] > 3 for v in q.vertices):
        return None
    if not branch:
        return ("A", n)
    if len(branch) > 1:
        return None
    hub = branch[0]
    arms = []
    for start in sorted(adj[hub]):
        length = 1
        prev, cur = hub, start
        while degrees[cur] == 2:
            nxt = next(w for w in adj[cur] if w != prev)
            prev, cur = cur, nxt
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return ("D", n)
    if arms == [1, 2, 2]:
        return ("E", 6)
    if arms == [1, 2, 3]:
        return ("E", 7)
    if arms == [1, 2, 4]:
        return ("E", 8)
    return None


def knit_full_dynkin(q: Quiver, field: Field = QQ) -> ARQuiver:
    """The complete Auslander-Reiten quiver of a Dynkin quiver."""
    if underlying_dynkin_type(q) is None:
        raise NonDynkinError("underlying graph is not of Dynkin type A/D/E")
    ar = _knit(q, None, field)
    if not ar.complete:
        raise KnitError("Dynkin knitting did not close")
    return ar


@dataclass
class AuditReport:
    mismatches: list  # (src, tgt, stored multiplicity, recomputed irr dim)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def arrow_audit(ar: ARQuiver) -> AuditReport:
    """Recompute every arrow multiplicity as dim rad/rad^2 and compare."""
    if not ar.complete:
        raise KnitError("arrow audit needs a complete component")
    window = [n.rep for n in ar.nodes]
    table = rad_power_dims(window, 2)
    rad2 = table.dims[1] if len(table.dims) > 1 else table.dims[0]
    mismatches = []
    ids = ar.node_ids()
    for i, src in enumerate(ids):
        for j, tgt in enumerate(ids):
            irr = table.dims[0][(i, j)] - rad2[(i, j)]
            stored = ar.arrows.get((src, tgt), 0)
            if irr != stored:
                mismatches.append((src, tgt, stored, irr))
    return AuditReport(mismatches)


def to_dot(ar: ARQuiver) -> str:
    """DOT export: solid arrows with valuation labels when non-trivial,
    dotted undirected edges for the translate, boxes for projectives and
    double circles for injectives."""
    lines = ["digraph ar {"]
    for n in ar.nodes:
        dims = ",".join(str(n.dims[v]) for v in ar.quiver.vertex_order)
        shape = "box" if n.is_projective else "ellipse"
        peripheries = 2 if n.is_injective else 1
        lines.append(
            f'  "{n.id}" [label="{n.id}\\n({dims})" shape={shape} peripheries={peripheries}];'
        )
    for (s, t), m in sorted(ar.arrows.items()):
        if m == 1:
            lines.append(f'  "{s}" -> "{t}";')
        else:
            lines.append(f'  "{s}" -> "{t}" [label="({m},{m})"];')
    for z in sorted(ar.translate):
        lines.append(f'  "{z}" -> "{ar.translate[z]}" [style=dotted dir=none constraint=false];')
    lines.append("}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# realized irreducible morphisms (the knitting ledger, made concrete)
# ---------------------------------------------------------------------------


@dataclass
class MeshRealization:
    node: str  # the mesh ends here
    parts: list  # (middle node id, copy index) in middle order
    middle: Rep
    f: Morph  # tau Z -> middle
    g: Morph  # middle -> Z


@dataclass
class FunctorRealization:
    """One chosen irreducible morphism per arrow instance, mesh by mesh.

    Built inductively in knitting order: the maps into each mesh are the
    already-chosen ones, and the maps out are solved so the realized sequence
    is exact and non-split; every mesh composite is then exactly zero."""

    arrows: dict  # (src, tgt) -> list of Morph, one per instance
    meshes: dict  # node id -> MeshRealization


def _projective_arrow_morphisms(ar: ARQuiver, src_node: ARNode, tgt_node: ARNode):
    """Arrows P_y -> P_x realized as prepend-the-arrow path maps."""
    q = ar.quiver
    x, y = tgt_node.base_vertex, src_node.base_vertex
    out = []
    paths_at_y = _proj_paths(q, x)[y]
    for a in sorted(q.arrows, key=lambda a: a.id):
        if a.src == x and a.tgt == y:
            vec = [ar.field.zero()] * len(paths_at_y)
            vec[paths_at_y.index((a.id,))] = ar.field.one()
            out.append(yoneda_morphism(q, y, tgt_node.rep, Mat.column(ar.field, vec)))
    return out


def _solve_mesh_g(f_map: Morph, middle: Rep, z: Rep, seed: int = 0):
    """Find g with g.f == 0 making 0 -> tauZ -> middle -> Z -> 0 exact.

    The annihilator of f inside Hom(middle, Z) contains a valid g; surjectivity
    at every vertex is then equivalent to exactness, and the surjective locus
    is open in the annihilator, so seeded combinations find one."""
    hb = hom_basis(middle, z)
    if not hb.basis:
        return None
    field = z.field
    width = sum(z.dims[v] * f_map.src.dims[v] for v in z.quiver.vertices)
    cols = [g.compose(f_map).vector() for g in hb.basis]
    mat = Mat(
        field,
        [[cols[j][i] for j in range(len(cols))] for i in range(width)],
        shape=(width, len(cols)),
    )
    pool = []
    for kv in kernel_basis(mat):
        combo = None
        for i, g in enumerate(hb.basis):
            c = kv[i, 0]
            if c == field.zero():
                continue
            term = g.scale(c)
            combo = term if combo is None else combo.add(term)
        if combo is not None:
            pool.append(combo)
    candidates = list(pool)
    if len(pool) > 1:
        total = pool[0]
        for extra in pool[1:]:
            total = total.add(extra)
        candidates.append(total)
    rng = random.Random(seed)
    for _ in range(32):
        combo = None
        for g in pool:
            c = field.from_int(rng.randint(-3, 3))
            if c == field.zero():
                continue
            term = g.scale(c)
            combo = term if combo is None else combo.add(term)
        if combo is not None:
            candidates.append(combo)
    for cand in candidates:
        if cand.vertexwise_surjective():
            return cand
    return None


def realize_irreducibles(ar: ARQuiver, seed: int = 0) -> FunctorRealization:
    """Choose concrete irreducible morphisms realizing every arrow of `ar`."""
    from .artheory import ConstructionError as CErr

    arrow_morphs: dict = {}
    meshes: dict = {}
    for n in ar.nodes:
        if n.is_projective:
            for s, m in ar.arrows_in(n.id):
                src_node = ar.node(s)
                if not src_node.is_projective:
                    raise CErr("arrow into a projective from a non-projective node")
                morphs = _projective_arrow_morphisms(ar, src_node, n)
                if len(morphs) != m:
                    raise CErr(f"projective arrow multiplicity mismatch at {s}->{n.id}")
                arrow_morphs[(s, n.id)] = morphs
            continue
        tz_id = ar.translate[n.id]
        tz = ar.node(tz_id)
        parts = []
        part_reps = []
        f_components = []
        for mid, mult in ar.arrows_out(tz_id):
            chosen = arrow_morphs[(tz_id, mid)]
            if len(chosen) != mult:
                raise CErr(f"arrow multiplicity mismatch at {tz_id}->{mid}")
            for copy in range(mult):
                parts.append((mid, copy))
                part_reps.append(ar.rep_of(mid))
                f_components.append(chosen[copy])
        middle, incls, _ = direct_sum(part_reps)
        f_map = Morph.zero(tz.rep, middle)
        for incl, comp in zip(incls, f_components):
            f_map = f_map.add(incl.compose(comp))
        if not f_map.vertexwise_injective():
            raise CErr(f"source map into the mesh of {n.id} is not injective")
        g_map = _solve_mesh_g(f_map, middle, n.rep, seed=seed)
        if g_map is None:
            raise CErr(f"no exact completion for the mesh of {n.id}")
        if not g_map.compose(f_map).is_zero():
            raise CErr(f"mesh composite at {n.id} is nonzero")
        if middle.total_dim != tz.rep.total_dim + n.rep.total_dim:
            raise CErr(f"mesh additivity fails at {n.id}")
        for mid, _ in ar.arrows_out(tz_id):
            comps = []
            for (pm, _copy), incl in zip(parts, incls):
                if pm == mid:
                    comps.append(g_map.compose(incl))
            arrow_morphs[(mid, n.id)] = comps
        meshes[n.id] = MeshRealization(n.id, parts, middle, f_map, g_map)
    return FunctorRealization(arrow_morphs, meshes)

"""Representations of a quiver over an exact field.

A `Rep` stores a per-vertex dimension and, for each arrow x -> y, a matrix of
shape dim(y) x dim(x).  Morphisms are per-vertex matrix families satisfying
the commutation squares; `hom_basis` solves those squares exactly, and
everything downstream (endomorphism analysis, radical powers, orthogonality,
string modules, Fitting splits) is built on that solver.

Path convention used throughout: paths compose left to right, so for an
arrow b: y -> z the projective at x maps a basis path p: x ~> y to pb.  The
injective at x has the paths y ~> x as its basis at y, and an arrow acts by
chopping itself off the front of a path.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from .exactlin import (
    QQ,
    DimensionMismatchError,
    Field,
    FieldMismatchError,
    Mat,
    RowSpan,
    kernel_basis,
    mat_mul,
    rank,
    rref,
    solve,
)
from .quiver import Quiver, Walk, WalkError, check_dim_vector, enumerate_paths, euler_form


class RepError(Exception):
    pass


class RadicalUnavailableError(RepError):
    """Raised when the endomorphism radical is requested over a prime field."""


class Rep:
    """A representation: dimensions plus arrow matrices.  Immutable by use."""

    def __init__(self, quiver: Quiver, field: Field, dims: dict, mats: dict):
        check_dim_vector(quiver, dims)
        self.quiver = quiver
        self.field = field
        self.dims = {v: int(dims[v]) for v in quiver.vertices}
        if any(d < 0 for d in self.dims.values()):
            raise RepError("negative dimension")
        self.mats = {}
        for a in quiver.arrows:
            m = mats.get(a.id)
            if m is None:
                m = Mat.zeros(field, self.dims[a.tgt], self.dims[a.src])
            if (m.rows, m.cols) != (self.dims[a.tgt], self.dims[a.src]):
                raise RepError(f"matrix for arrow {a.id} has wrong shape")
            if m.field != field:
                raise FieldMismatchError(f"arrow {a.id} matrix over the wrong field")
            self.mats[a.id] = m

    @classmethod
    def zero(cls, quiver: Quiver, field: Field) -> "Rep":
        return cls(quiver, field, {v: 0 for v in quiver.vertices}, {})

    @classmethod
    def simple(cls, quiver: Quiver, x: str, field: Field) -> "Rep":
        quiver._check_vertex(x)
        return cls(quiver, field, {v: 1 if v == x else 0 for v in quiver.vertices}, {})

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def dim_vector(self) -> dict:
        return dict(self.dims)

    def structure_equal(self, other: "Rep") -> bool:
        return (
            self.quiver == other.quiver
            and self.field == other.field
            and self.dims == other.dims
            and all(self.mats[a.id] == other.mats[a.id] for a in self.quiver.arrows)
        )

    def path_action(self, path: tuple) -> Mat:
        """The composite matrix of an arrow-id path, acting on the start space."""
        if not path:
            raise RepError("path_action needs at least one arrow; use identity instead")
        m = self.mats[path[0]]
        for aid in path[1:]:
            m = mat_mul(self.mats[aid], m)
        return m

    def evaluate_path(self, x: str, path: tuple) -> Mat:
        """Matrix of the path starting at x (identity on M(x) for the trivial path)."""
        if not path:
            return Mat.identity(self.field, self.dims[x])
        return self.path_action(path)

    def to_json(self) -> dict:
        return {
            "v": 1,
            "dims": dict(self.dims),
            "mats": {aid: m.to_strings() for aid, m in self.mats.items()},
        }

    @classmethod
    def from_json(cls, quiver: Quiver, field: Field, doc: dict) -> "Rep":
        mats = {}
        for aid, rows in doc.get("mats", {}).items():
            a = quiver.arrow(aid)
            r, c = doc["dims"][a.tgt], doc["dims"][a.src]
            if r and c:
                mats[aid] = Mat.from_strings(field, rows)
        return cls(quiver, field, doc["dims"], mats)

    def __repr__(self):
        return f"Rep({[self.dims[v] for v in self.quiver.vertex_order]})"


def _check_pair(m: Rep, n: Rep):
    if m.quiver != n.quiver:
        raise RepError("representations over different quivers")
    if m.field != n.field:
        raise FieldMismatchError("representations over different fields")


class Morph:
    """A morphism of representations: one matrix per vertex."""

    def __init__(self, src: Rep, tgt: Rep, mats: dict, verify: bool = True):
        _check_pair(src, tgt)
        self.src = src
        self.tgt = tgt
        self.mats = {}
        for v in src.quiver.vertices:
            m = mats.get(v)
            if m is None:
                m = Mat.zeros(src.field, tgt.dims[v], src.dims[v])
            if (m.rows, m.cols) != (tgt.dims[v], src.dims[v]):
                raise RepError(f"morphism matrix at {v} has wrong shape")
            self.mats[v] = m
        if verify:
            self._verify()

    def _verify(self):
        for a in self.src.quiver.arrows:
            left = mat_mul(self.mats[a.tgt], self.src.mats[a.id])
            right = mat_mul(self.tgt.mats[a.id], self.mats[a.src])
            if left != right:
                raise RepError(f"commutation square fails at arrow {a.id}")

    @classmethod
    def zero(cls, src: Rep, tgt: Rep) -> "Morph":
        return cls(src, tgt, {}, verify=False)

    @classmethod
    def identity(cls, m: Rep) -> "Morph":
        return cls(m, m, {v: Mat.identity(m.field, m.dims[v]) for v in m.quiver.vertices}, verify=False)

    def compose(self, inner: "Morph") -> "Morph":
        """self after inner: (self . inner)(x) = self(inner(x))."""
        if inner.tgt is not self.src and not inner.tgt.structure_equal(self.src):
            raise RepError("composition endpoint mismatch")
        mats = {v: mat_mul(self.mats[v], inner.mats[v]) for v in self.src.quiver.vertices}
        return Morph(inner.src, self.tgt, mats, verify=False)

    def add(self, other: "Morph") -> "Morph":
        return Morph(self.src, self.tgt, {v: self.mats[v].add(other.mats[v]) for v in self.mats}, verify=False)

    def scale(self, c) -> "Morph":
        return Morph(self.src, self.tgt, {v: self.mats[v].scale(c) for v in self.mats}, verify=False)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.mats.values())

    def vector(self):
        """Flatten to one coordinate list (vertex order, then row-major)."""
        out = []
        for v in self.src.quiver.vertex_order:
            out.extend(self.mats[v].flat())
        return out

    @classmethod
    def from_vector(cls, src: Rep, tgt: Rep, vec, verify: bool = False) -> "Morph":
        mats = {}
        pos = 0
        for v in src.quiver.vertex_order:
            r, c = tgt.dims[v], src.dims[v]
            block = [vec[pos + i * c : pos + (i + 1) * c] for i in range(r)]
            pos += r * c
            mats[v] = Mat(src.field, block) if r and c else Mat.zeros(src.field, r, c)
        return cls(src, tgt, mats, verify=verify)

    def vertexwise_injective(self) -> bool:
        return all(rank(self.mats[v]) == self.src.dims[v] for v in self.mats)

    def vertexwise_surjective(self) -> bool:
        return all(rank(self.mats[v]) == self.tgt.dims[v] for v in self.mats)

    def is_isomorphism(self) -> bool:
        return (
            self.src.dims == self.tgt.dims
            and all(rank(self.mats[v]) == self.src.dims[v] for v in self.mats)
        )

    def to_json(self) -> dict:
        return {"v": 1, "mats": {v: self.mats[v].to_strings() for v in self.mats}}


@dataclass
class HomBasis:
    """Deterministic basis of Hom(source, target)."""

    source: Rep
    target: Rep
    basis: list

    @property
    def dim(self) -> int:
        return len(self.basis)


def _morph_space_size(m: Rep, n: Rep) -> int:
    return sum(n.dims[v] * m.dims[v] for v in m.quiver.vertices)


def hom_basis(m: Rep, n: Rep) -> HomBasis:
    """Basis of the morphism space, as the kernel of the commutation system.

    Unknowns are the entries of the vertex matrices in vertex order
    (row-major); the kernel basis of exactlin is canonical, so the result is
    deterministic.  Each element is re-verified against every square.
    """
    _check_pair(m, n)
    f = m.field
    q = m.quiver
    unknowns = _morph_space_size(m, n)
    if unknowns == 0:
        return HomBasis(m, n, [])
    offsets = {}
    pos = 0
    for v in q.vertex_order:
        offsets[v] = pos
        pos += n.dims[v] * m.dims[v]
    rows = []
    zero = f.zero()
    for a in q.arrows:
        x, y = a.src, a.tgt
        ma, na = m.mats[a.id], n.mats[a.id]
        if n.dims[y] * m.dims[x] == 0:
            continue
        for r in range(n.dims[y]):
            for c in range(m.dims[x]):
                row = [zero] * unknowns
                # (phi_y . M(a))[r,c] = sum_k phi_y[r,k] M(a)[k,c]
                base_y = offsets[y] + r * m.dims[y]
                for k in range(m.dims[y]):
                    coeff = ma[k, c]
                    if coeff != zero:
                        row[base_y + k] = f.add(row[base_y + k], coeff)
                # -(N(a) . phi_x)[r,c] = -sum_k N(a)[r,k] phi_x[k,c]
                base_x = offsets[x]
                for k in range(n.dims[x]):
                    coeff = na[r, k]
                    if coeff != zero:
                        idx = base_x + k * m.dims[x] + c
                        row[idx] = f.sub(row[idx], coeff)
                if any(e != zero for e in row):
                    rows.append(row)
    if not rows:
        vecs = kernel_basis(Mat.zeros(f, 0, unknowns))
    else:
        vecs = kernel_basis(Mat(f, rows))
    basis = [Morph.from_vector(m, n, [v[i, 0] for i in range(unknowns)], verify=True) for v in vecs]
    return HomBasis(m, n, basis)


def hom_dim(m: Rep, n: Rep) -> int:
    return hom_basis(m, n).dim


def is_orthogonal(m: Rep, n: Rep) -> bool:
    """True when Hom vanishes in both directions."""
    return hom_dim(m, n) == 0 and hom_dim(n, m) == 0


def ext1_dim(m: Rep, n: Rep) -> int:
    """dim Ext^1 via the hereditary defect: dim Hom(m, n) - <dim m, dim n>."""
    _check_pair(m, n)
    val = hom_dim(m, n) - euler_form(m.quiver, m.dim_vector(), n.dim_vector())
    if val < 0:
        raise RepError("negative ext dimension; input outside hereditary scope")
    return val


@dataclass
class EndReport:
    end_dim: int
    rad_end_dim: int | None
    auto_field_dim: int | None
    is_brick: bool

    @property
    def radical_available(self) -> bool:
        return self.rad_end_dim is not None


def _trace_of_composite(a: Morph, b: Morph) -> object:
    f = a.src.field
    total = f.zero()
    for v in a.src.quiver.vertices:
        ma, mb = a.mats[v], b.mats[v]
        for i in range(ma.rows):
            for k in range(ma.cols):
                total = f.add(total, f.mul(ma[i, k], mb[k, i]))
    return total


def end_radical_basis(m: Rep, basis: list) -> list:
    """Radical of End(m) via the characteristic-zero trace form.

    Over a prime field this is refused unless End is already one-dimensional
    (where the radical is zero for structural reasons).
    """
    f = m.field
    if not f.characteristic_zero:
        if len(basis) <= 1:
            return []
        raise RadicalUnavailableError(
            "endomorphism radical needs characteristic 0; prime-field sessions keep end_dim and is_brick only"
        )
    if not basis:
        return []
    gram = Mat(f, [[_trace_of_composite(bi, bj) for bj in basis] for bi in basis])
    rad = []
    for v in kernel_basis(gram):
        elem = None
        for i, b in enumerate(basis):
            c = v[i, 0]
            if c == f.zero():
                continue
            term = b.scale(c)
            elem = term if elem is None else elem.add(term)
        rad.append(elem if elem is not None else Morph.zero(m, m))
    return rad


def end_report(m: Rep) -> EndReport:
    """Endomorphism analysis: total dimension, trace-form radical, automorphism
    field dimension.  Prime-field sessions report end_dim and is_brick only."""
    if m.is_zero():
        raise RepError("end_report needs a nonzero representation")
    basis = hom_basis(m, m).basis
    end_dim = len(basis)
    try:
        rad = end_radical_basis(m, basis)
    except RadicalUnavailableError:
        return EndReport(end_dim, None, None, end_dim == 1)
    return EndReport(end_dim, len(rad), end_dim - len(rad), end_dim == 1)


# ---------------------------------------------------------------------------
# projectives, injectives and Yoneda morphisms
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _proj_paths(q: Quiver, x: str):
    """Per-vertex path bases of the projective at x: paths x ~> v, lex order."""
    return {v: tuple(enumerate_paths(q, x, v)) for v in q.vertices}


@lru_cache(maxsize=None)
def _inj_paths(q: Quiver, x: str):
    """Per-vertex path bases of the injective at x: paths v ~> x, lex order."""
    return {v: tuple(enumerate_paths(q, v, x)) for v in q.vertices}


def projective(q: Quiver, x: str, field: Field = QQ) -> Rep:
    """P_x: basis at v is the paths x ~> v; an arrow b: v -> w appends b."""
    q.require_acyclic()
    paths = _proj_paths(q, x)
    dims = {v: len(paths[v]) for v in q.vertices}
    mats = {}
    f = field
    for a in q.arrows:
        src_paths, tgt_paths = paths[a.src], paths[a.tgt]
        idx = {p: i for i, p in enumerate(tgt_paths)}
        m = [[f.zero()] * len(src_paths) for _ in range(len(tgt_paths))]
        for j, p in enumerate(src_paths):
            m[idx[p + (a.id,)]][j] = f.one()
        if tgt_paths or src_paths:
            mats[a.id] = Mat(f, m) if tgt_paths else Mat.zeros(f, 0, len(src_paths))
    return Rep(q, field, dims, mats)


def injective(q: Quiver, x: str, field: Field = QQ) -> Rep:
    """I_x: basis at v is the paths v ~> x; an arrow chops itself off the front."""
    q.require_acyclic()
    paths = _inj_paths(q, x)
    dims = {v: len(paths[v]) for v in q.vertices}
    mats = {}
    f = field
    for a in q.arrows:
        src_paths, tgt_paths = paths[a.src], paths[a.tgt]
        idx = {p: i for i, p in enumerate(tgt_paths)}
        m = [[f.zero()] * len(src_paths) for _ in range(len(tgt_paths))]
        for j, p in enumerate(src_paths):
            if p and p[0] == a.id:
                m[idx[p[1:]]][j] = f.one()
        if tgt_paths:
            mats[a.id] = Mat(f, m)
        else:
            mats[a.id] = Mat.zeros(f, 0, len(src_paths))
    return Rep(q, field, dims, mats)


def yoneda_morphism(q: Quiver, x: str, m: Rep, vec: Mat) -> Morph:
    """The morphism P_x -> m sending the trivial path to the column `vec`."""
    p = projective(q, x, m.field)
    paths = _proj_paths(q, x)
    mats = {}
    for v in q.vertices:
        cols = []
        for path in paths[v]:
            img = mat_mul(m.evaluate_path(x, path), vec)
            cols.append([img[i, 0] for i in range(img.rows)])
        if cols:
            mats[v] = Mat(m.field, [[col[i] for col in cols] for i in range(m.dims[v])]) if m.dims[v] else Mat.zeros(m.field, 0, len(cols))
        else:
            mats[v] = Mat.zeros(m.field, m.dims[v], 0)
    return Morph(p, m, mats, verify=False)


def coyoneda_morphism(q: Quiver, x: str, m: Rep, functional: Mat) -> Morph:
    """The morphism m -> I_x induced by a linear functional (row vector) on m(x):
    at v it sends w to the tuple of functional(M(path) w) over paths v ~> x."""
    inj = injective(q, x, m.field)
    paths = _inj_paths(q, x)
    f = m.field
    mats = {}
    for v in q.vertices:
        rows = []
        for path in paths[v]:
            act = m.evaluate_path(v, path)
            row = mat_mul(functional, act)
            rows.append([row[0, j] for j in range(row.cols)])
        mats[v] = Mat(f, rows) if rows else Mat.zeros(f, 0, m.dims[v])
    return Morph(m, inj, mats, verify=False)


def proj_hom_coefficients(q: Quiver, g: Morph, src_vertex: str, tgt_vertex: str):
    """Write a morphism P_{src_vertex} -> P_{tgt_vertex} in the path basis of
    Hom, i.e. as coefficients over the paths tgt_vertex ~> src_vertex."""
    image = g.mats[src_vertex].column_vectors()[_proj_paths(q, src_vertex)[src_vertex].index(())]
    return [image[i, 0] for i in range(image.rows)]


# ---------------------------------------------------------------------------
# substructures
# ---------------------------------------------------------------------------


def _canonical_complement(span_rows: Mat):
    """Pivot data of a row space: (rref rows, pivots, free coordinate list)."""
    r, pivots = rref(span_rows)
    free = [j for j in range(span_rows.cols) if j not in set(pivots)]
    return r, pivots, free


def sub_rep(m: Rep, basis_cols: dict) -> tuple:
    """Sub-representation spanned by per-vertex column lists (must be invariant).

    Returns (subrep, inclusion morphism)."""
    f = m.field
    q = m.quiver
    dims = {v: len(basis_cols.get(v, [])) for v in q.vertices}
    incl_mats = {}
    for v in q.vertices:
        cols = basis_cols.get(v, [])
        incl_mats[v] = (
            Mat(f, [[col[i, 0] for col in cols] for i in range(m.dims[v])])
            if cols and m.dims[v]
            else Mat.zeros(f, m.dims[v], len(cols))
        )
    mats = {}
    for a in q.arrows:
        image = mat_mul(m.mats[a.id], incl_mats[a.src])
        induced = solve(incl_mats[a.tgt], image)
        if induced is None:
            raise RepError(f"subspace family not invariant under arrow {a.id}")
        mats[a.id] = induced
    sub = Rep(q, f, dims, mats)
    incl = Morph(sub, m, incl_mats, verify=True)
    return sub, incl


def kernel_rep(g: Morph) -> tuple:
    """Kernel sub-representation of a morphism, with its inclusion."""
    cols = {v: kernel_basis(g.mats[v]) for v in g.src.quiver.vertices}
    return sub_rep(g.src, cols)


def quotient_rep(m: Rep, span_cols: dict) -> tuple:
    """Quotient of m by the invariant subspace spanned per vertex.

    Returns (quotient, projection, representative matrices) where the third
    item gives, per vertex, the canonical section of the projection (standard
    basis vectors at the non-pivot coordinates)."""
    f = m.field
    q = m.quiver
    proj_mats = {}
    rep_mats = {}
    dims = {}
    for v in q.vertices:
        n = m.dims[v]
        cols = span_cols.get(v, [])
        if cols:
            rows = Mat(f, [[c[i, 0] for i in range(n)] for c in cols])
            r, pivots, free = _canonical_complement(rows)
        else:
            r, pivots, free = None, [], list(range(n))
        dims[v] = len(free)
        # projection: reduce by the span's rref rows, then read free coords
        pm = []
        for fi in free:
            row = [f.zero()] * n
            row[fi] = f.one()
            for k, pc in enumerate(pivots):
                row[pc] = f.neg(r[k, fi])
            pm.append(row)
        proj_mats[v] = Mat(f, pm) if pm else Mat.zeros(f, 0, n)
        rep_cols = []
        for fi in free:
            col = [f.zero()] * n
            col[fi] = f.one()
            rep_cols.append(col)
        rep_mats[v] = (
            Mat(f, [[col[i] for col in rep_cols] for i in range(n)])
            if rep_cols and n
            else Mat.zeros(f, n, len(rep_cols))
        )
    qmats = {}
    for a in q.arrows:
        qmats[a.id] = mat_mul(proj_mats[a.tgt], mat_mul(m.mats[a.id], rep_mats[a.src]))
    quo = Rep(q, f, dims, qmats)
    proj = Morph(m, quo, proj_mats, verify=True)
    return quo, proj, rep_mats


def cokernel_rep(g: Morph) -> tuple:
    """Cokernel of a morphism with its projection and canonical representatives."""
    span = {v: g.mats[v].column_vectors() for v in g.tgt.quiver.vertices}
    return quotient_rep(g.tgt, span)


def induced_on_cokernel(coker: Rep, rep_mats: dict, total_map: Morph) -> Morph:
    """Descend total_map: D -> Z to coker(h) -> Z given total_map . h == 0."""
    mats = {v: mat_mul(total_map.mats[v], rep_mats[v]) for v in coker.quiver.vertices}
    return Morph(coker, total_map.tgt, mats, verify=True)


def direct_sum(parts: list) -> tuple:
    """Direct sum with inclusion and projection morphisms per part."""
    if not parts:
        raise RepError("direct_sum needs at least one part")
    q, f = parts[0].quiver, parts[0].field
    for p in parts[1:]:
        _check_pair(parts[0], p)
    dims = {v: sum(p.dims[v] for p in parts) for v in q.vertices}
    mats = {}
    for a in q.arrows:
        rows = dims[a.tgt]
        cols = dims[a.src]
        block = [[f.zero()] * cols for _ in range(rows)]
        r0 = c0 = 0
        for p in parts:
            m = p.mats[a.id]
            for i in range(m.rows):
                for j in range(m.cols):
                    block[r0 + i][c0 + j] = m[i, j]
            r0 += p.dims[a.tgt]
            c0 += p.dims[a.src]
        mats[a.id] = Mat(f, block) if rows else Mat.zeros(f, 0, cols)
    total = Rep(q, f, dims, mats)
    inclusions = []
    projections = []
    offset = {v: 0 for v in q.vertices}
    for p in parts:
        incl_m = {}
        proj_m = {}
        for v in q.vertices:
            n, k, off = dims[v], p.dims[v], offset[v]
            im = [[f.zero()] * k for _ in range(n)]
            pm = [[f.zero()] * n for _ in range(k)]
            for i in range(k):
                im[off + i][i] = f.one()
                pm[i][off + i] = f.one()
            incl_m[v] = Mat(f, im) if n else Mat.zeros(f, 0, k)
            proj_m[v] = Mat(f, pm) if k else Mat.zeros(f, 0, n)
        inclusions.append(Morph(p, total, incl_m, verify=False))
        projections.append(Morph(total, p, proj_m, verify=False))
        for v in q.vertices:
            offset[v] += p.dims[v]
    return total, inclusions, projections


# ---------------------------------------------------------------------------
# isomorphism search and Fitting splits
# ---------------------------------------------------------------------------


def find_isomorphism(m: Rep, n: Rep, trials: int = 24, seed: int = 0):
    """Search the Hom span for an isomorphism; None means "not proven".

    Tries each basis element, their sum, then seeded pseudo-random integer
    combinations, so the result is deterministic for a given seed."""
    if m.dims != n.dims:
        return None
    if m.is_zero():
        return Morph.zero(m, n)
    hb = hom_basis(m, n)
    if not hb.basis:
        return None
    candidates = list(hb.basis)
    total = candidates[0]
    for b in candidates[1:]:
        total = total.add(b)
    candidates.append(total)
    rng = random.Random(seed)
    f = m.field
    for _ in range(trials):
        combo = None
        for b in hb.basis:
            c = f.from_int(rng.randint(-3, 3))
            if c == f.zero():
                continue
            term = b.scale(c)
            combo = term if combo is None else combo.add(term)
        if combo is not None:
            candidates.append(combo)
    for cand in candidates:
        if cand.is_isomorphism():
            return cand
    return None


def proven_isomorphic(m: Rep, n: Rep, trials: int = 24, seed: int = 0) -> bool:
    return find_isomorphism(m, n, trials=trials, seed=seed) is not None


def _image_columns(m: Mat):
    """Canonical basis of the column space (rref of the transpose, as columns)."""
    r, pivots = rref(m.transpose())
    return [Mat.column(m.field, [r[i, j] for j in range(m.rows)]) for i in range(len(pivots))]


def fitting_split(m: Rep, trials: int = 16, seed: int = 0):
    """Try to split m along the eventual kernel/image of a random endomorphism.

    Returns None ("no split found") or a pair of nonzero representations
    whose direct sum is isomorphic to m.  Deterministic for a given seed."""
    if m.is_zero():
        raise RepError("fitting_split needs a nonzero representation")
    basis = hom_basis(m, m).basis
    if len(basis) == 1:
        return None
    rng = random.Random(seed)
    f = m.field
    n_power = m.total_dim
    for _ in range(trials):
        endo = None
        for b in basis:
            c = f.from_int(rng.randint(-3, 3))
            if c == f.zero():
                continue
            term = b.scale(c)
            endo = term if endo is None else endo.add(term)
        if endo is None:
            continue
        power = endo
        for _ in range(n_power - 1):
            power = power.compose(endo)
        ker_dims = {v: len(kernel_basis(power.mats[v])) for v in m.quiver.vertices}
        k_total = sum(ker_dims.values())
        if k_total == 0 or k_total == m.total_dim:
            continue
        ker_part, _ = kernel_rep(power)
        img_cols = {v: _image_columns(power.mats[v]) for v in m.quiver.vertices}
        img_part, _ = sub_rep(m, img_cols)
        return ker_part, img_part
    return None


# ---------------------------------------------------------------------------
# radical powers
# ---------------------------------------------------------------------------


@dataclass
class RadTable:
    """dims[t] maps window index pairs (i, j) to dim rad^t; t starts at 1."""

    size: int
    dims: list
    stabilization_index: int | None
    stabilized_zero: bool

    def dim(self, t: int, i: int, j: int) -> int:
        if t - 1 < len(self.dims):
            return self.dims[t - 1][(i, j)]
        return self.dims[-1][(i, j)]


def _rad_basis(window: list, i: int, j: int, hom_cache: dict):
    """Basis of rad(window[i], window[j]) as morphisms."""
    if i != j:
        return hom_cache[(i, j)].basis
    m = window[i]
    basis = hom_cache[(i, i)].basis
    return end_radical_basis(m, basis)


def rad_power_dims(window: list, n: int | None = None) -> RadTable:
    """Dimension table of rad^t between window members for t <= n.

    Exact when the window is a full finite component, a lower bound
    otherwise.  Radical endomorphisms use the characteristic-zero trace form,
    so non-brick windows over prime fields are refused.  Stops early at the
    stabilization index (first t with rad^t == rad^{t+1} entrywise); when n is
    None it runs until stabilization.
    """
    size = len(window)
    hom_cache = {}
    for i in range(size):
        for j in range(size):
            hom_cache[(i, j)] = hom_basis(window[i], window[j])
    widths = {(i, j): _morph_space_size(window[i], window[j]) for i in range(size) for j in range(size)}
    rad1 = {}
    for i in range(size):
        for j in range(size):
            rad1[(i, j)] = _rad_basis(window, i, j, hom_cache)
    tables = [{k: len(v) for k, v in rad1.items()}]
    bases = rad1
    stabilization = None
    t = 1
    while True:
        if n is not None and t >= n:
            break
        if all(d == 0 for d in tables[-1].values()):
            stabilization = t
            break
        nxt = {}
        for i in range(size):
            for j in range(size):
                field = window[0].field
                span = RowSpan(field, widths[(i, j)])
                vecs = []
                for mid in range(size):
                    lefts = rad1[(mid, j)]
                    rights = bases[(i, mid)]
                    if not lefts or not rights:
                        continue
                    for g in lefts:
                        for h in rights:
                            comp = g.compose(h)
                            vec = comp.vector()
                            if span.insert(vec):
                                vecs.append(comp)
                nxt[(i, j)] = vecs
        table = {k: len(v) for k, v in nxt.items()}
        t += 1
        tables.append(table)
        bases = nxt
        if table == tables[-2]:
            stabilization = t - 1
            break
    if stabilization is None and all(d == 0 for d in tables[-1].values()):
        stabilization = t
    zero = all(d == 0 for d in tables[-1].values())
    return RadTable(size, tables, stabilization, zero and stabilization is not None)


def irr_dim(window: list, x: int, y: int) -> int:
    """dim rad(X, Y) - dim rad^2(X, Y) for window indices x, y."""
    table = rad_power_dims(window, 2)
    return table.dims[0][(x, y)] - table.dims[min(1, len(table.dims) - 1)][(x, y)]


# ---------------------------------------------------------------------------
# string representations
# ---------------------------------------------------------------------------


def string_rep(q: Quiver, w: Walk, field: Field = QQ) -> Rep:
    """Thin representation supported on a reduced walk visiting each vertex
    at most once: spaces k on the walk, arrow maps identity along the walk."""
    if len(set(w.vertices)) != len(w.vertices):
        raise WalkError("string walks may visit each vertex at most once")
    support = set(w.vertices)
    used = {aid for aid, _ in w.steps}
    dims = {v: 1 if v in support else 0 for v in q.vertices}
    f = field
    mats = {}
    for a in q.arrows:
        if dims[a.tgt] and dims[a.src]:
            val = f.one() if a.id in used else f.zero()
            mats[a.id] = Mat(f, [[val]])
    return Rep(q, field, dims, mats)

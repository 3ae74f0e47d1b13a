"""The translate on realized representations and almost split sequences.

tau is computed through the Nakayama route: from a minimal projective
presentation P1 -> P0 -> M -> 0, replace each projective by the matching
injective and each path entry of the presentation matrix by the induced map
between injectives; tau M is the kernel of that map.  tau-inverse is the
dual computation, run over the opposite quiver.

Almost split sequences are realized only in the certified scope (trivial
automorphism field and one-dimensional extension space): a pushout along a
non-split extension cocycle from the presentation.  Everything is asserted
after construction; a split outcome is an internal error, not a warning.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactlin import Mat, RowSpan, rank, rref, solve
from .quiver import Quiver, coxeter_inverse_transform, coxeter_transform
from .rep import (
    Morph,
    Rep,
    RepError,
    cokernel_rep,
    direct_sum,
    end_radical_basis,
    end_report,
    ext1_dim,
    hom_basis,
    induced_on_cokernel,
    injective,
    kernel_rep,
    projective,
    yoneda_morphism,
    _inj_paths,
    _proj_paths,
)


class TauUndefinedError(RepError):
    """tau requested for a projective."""


class TauInverseUndefinedError(RepError):
    """tau-inverse requested for an injective."""


class AlmostSplitScopeError(RepError):
    """Sequence construction refused outside the certified one-dimensional scope."""


class ConstructionError(RepError):
    """An internal exactness or non-splitness assertion failed."""


@dataclass
class PresKit:
    """Minimal projective presentation p1 -> p0 -> m -> 0 with multiplicities."""

    module: Rep
    p0: Rep
    p1: Rep
    p0_parts: list  # vertex of each projective summand, in order
    p1_parts: list
    pres_map: Morph  # p1 -> p0
    cover: Morph  # p0 -> m

    @property
    def p0_mults(self) -> dict:
        out: dict = {}
        for x in self.p0_parts:
            out[x] = out.get(x, 0) + 1
        return out

    @property
    def p1_mults(self) -> dict:
        out: dict = {}
        for x in self.p1_parts:
            out[x] = out.get(x, 0) + 1
        return out


def _radical_subspace_cols(m: Rep) -> dict:
    """Per-vertex column spans of rad m = sum of images of incoming arrows."""
    cols = {}
    for v in m.quiver.vertices:
        incoming = []
        for a in m.quiver.arrows_into(v):
            incoming.extend(m.mats[a.id].column_vectors())
        if incoming:
            stacked = Mat(m.field, [[c[i, 0] for i in range(m.dims[v])] for c in incoming])
            r, pivots = rref(stacked)
            incoming = [Mat.column(m.field, [r[k, i] for i in range(m.dims[v])]) for k in range(len(pivots))]
        cols[v] = incoming
    return cols


def _top_vectors(m: Rep) -> dict:
    """Per-vertex canonical lifts of a basis of m / rad m."""
    rad = _radical_subspace_cols(m)
    tops = {}
    f = m.field
    for v in m.quiver.vertices:
        n = m.dims[v]
        if n == 0:
            tops[v] = []
            continue
        span = RowSpan(f, n)
        for c in rad[v]:
            span.insert([c[i, 0] for i in range(n)])
        pivots = {pc for pc, _ in span.rows}
        lifts = []
        for j in range(n):
            if j not in pivots:
                vec = [f.zero()] * n
                vec[j] = f.one()
                lifts.append(Mat.column(f, vec))
        tops[v] = lifts
    return tops


def min_proj_presentation(m: Rep) -> PresKit:
    """Minimal presentation: p0 covers the top, p1 covers the kernel's top.

    The kernel of the cover is projective here (hereditary scope), so the
    second map is injective and the presentation is exact by construction."""
    if m.is_zero():
        raise RepError("presentation of the zero representation")
    q, f = m.quiver, m.field
    tops = _top_vectors(m)
    p0_parts = []
    covers = []
    for v in q.vertex_order:
        for vec in tops[v]:
            p0_parts.append(v)
            covers.append(yoneda_morphism(q, v, m, vec))
    p0, cover = _assemble_from_pieces(q, f, p0_parts, covers, m)
    if not cover.vertexwise_surjective():
        raise ConstructionError("projective cover not surjective")
    kernel, k_incl = kernel_rep(cover)
    if kernel.is_zero():
        p1 = Rep.zero(q, f)
        return PresKit(m, p0, p1, p0_parts, [], Morph.zero(p1, p0), cover)
    k_tops = _top_vectors(kernel)
    p1_parts = []
    k_covers = []
    for v in q.vertex_order:
        for vec in k_tops[v]:
            p1_parts.append(v)
            k_covers.append(yoneda_morphism(q, v, kernel, vec))
    p1, k_cover = _assemble_from_pieces(q, f, p1_parts, k_covers, kernel)
    if p1.total_dim != kernel.total_dim or not k_cover.is_isomorphism():
        raise ConstructionError("kernel of the cover is not projective as expected")
    pres = k_incl.compose(k_cover)
    for v in q.vertices:
        if rank(pres.mats[v]) != kernel.dims[v]:
            raise ConstructionError("presentation not exact at " + v)
    return PresKit(m, p0, p1, p0_parts, p1_parts, pres, cover)


def _assemble_from_pieces(q: Quiver, f, parts: list, pieces: list, target: Rep):
    """Bundle morphisms P_{x_i} -> target into one map out of their direct sum."""
    total, _, projections = direct_sum([projective(q, v, f) for v in parts])
    combined = Morph.zero(total, target)
    for piece, proj in zip(pieces, projections):
        combined = combined.add(piece.compose(proj))
    return total, combined


def _nakayama_path_map(q: Quiver, field, path: tuple, src_vertex: str, tgt_vertex: str) -> Morph:
    """Image under the Nakayama functor of the path morphism P_src -> P_tgt.

    For the path p: tgt ~> src the induced map I_src -> I_tgt sends a basis
    path r: z ~> src to s when r = s . p, and to zero otherwise."""
    i_src = injective(q, src_vertex, field)
    i_tgt = injective(q, tgt_vertex, field)
    src_paths = _inj_paths(q, src_vertex)
    tgt_paths = _inj_paths(q, tgt_vertex)
    f = field
    mats = {}
    plen = len(path)
    for v in q.vertices:
        rows = len(tgt_paths[v])
        cols = len(src_paths[v])
        m = [[f.zero()] * cols for _ in range(rows)]
        idx = {p: i for i, p in enumerate(tgt_paths[v])}
        for j, r in enumerate(src_paths[v]):
            if plen == 0:
                if r in idx:
                    m[idx[r]][j] = f.one()
            elif len(r) >= plen and r[len(r) - plen :] == path:
                s = r[: len(r) - plen]
                if s in idx:
                    m[idx[s]][j] = f.one()
        mats[v] = Mat(f, m) if rows else Mat.zeros(f, 0, cols)
    return Morph(i_src, i_tgt, mats, verify=True)


def _nakayama_of_presentation(kit: PresKit):
    """nu(p1) -> nu(p0) with each path entry replaced by its injective map."""
    q, f = kit.module.quiver, kit.module.field
    nu0_parts = [injective(q, v, f) for v in kit.p0_parts]
    nu1_parts = [injective(q, v, f) for v in kit.p1_parts]
    nu0, nu0_incl, _ = direct_sum(nu0_parts) if nu0_parts else (Rep.zero(q, f), [], [])
    nu1, _, nu1_proj = direct_sum(nu1_parts) if nu1_parts else (Rep.zero(q, f), [], [])
    total = Morph.zero(nu1, nu0)
    # walk the block structure of the presentation map
    p0_offsets = _block_offsets(kit.p0, [projective(q, v, f) for v in kit.p0_parts])
    p1_offsets = _block_offsets(kit.p1, [projective(q, v, f) for v in kit.p1_parts])
    for j, src_v in enumerate(kit.p1_parts):
        for i, tgt_v in enumerate(kit.p0_parts):
            block = _extract_block(kit.pres_map, p1_offsets, p0_offsets, j, i, q, f, src_v, tgt_v)
            if block is None:
                continue
            coeffs, paths = block
            for c, p in zip(coeffs, paths):
                if c == f.zero():
                    continue
                nu_map = _nakayama_path_map(q, f, p, src_v, tgt_v).scale(c)
                lifted = nu0_incl[i].compose(nu_map).compose(nu1_proj[j])
                total = total.add(lifted)
    return total


def _block_offsets(total_rep: Rep, parts: list) -> list:
    offsets = []
    acc = {v: 0 for v in total_rep.quiver.vertices}
    for p in parts:
        offsets.append(dict(acc))
        for v in total_rep.quiver.vertices:
            acc[v] += p.dims[v]
    return offsets


def _extract_block(pres: Morph, src_offsets, tgt_offsets, j, i, q, f, src_v, tgt_v):
    """Path coefficients of the (j -> i) block of the presentation map."""
    paths = _proj_paths(q, tgt_v)[src_v]
    if not paths:
        return None
    triv_idx = _proj_paths(q, src_v)[src_v].index(())
    col = src_offsets[j][src_v] + triv_idx
    base = tgt_offsets[i][src_v]
    coeffs = [pres.mats[src_v][base + k, col] for k in range(len(paths))]
    return coeffs, list(paths)


def tau(m: Rep) -> Rep:
    """The translate of an indecomposable non-projective representation.

    Contract checked on every call: dim tau(m) equals the Coxeter transform
    of dim m."""
    kit = min_proj_presentation(m)
    if kit.p1.is_zero():
        raise TauUndefinedError("tau undefined: projective representation")
    nu_map = _nakayama_of_presentation(kit)
    t, _ = kernel_rep(nu_map)
    expected = coxeter_transform(m.quiver, m.dim_vector())
    if t.dim_vector() != expected:
        raise ConstructionError("tau dimension contract violated")
    return t


def dual_rep(m: Rep, opposite: Quiver | None = None) -> Rep:
    """Linear dual over the opposite quiver (transposed arrow matrices)."""
    q_op = opposite if opposite is not None else m.quiver.opposite()
    mats = {a.id: m.mats[a.id].transpose() for a in m.quiver.arrows}
    return Rep(q_op, m.field, dict(m.dims), mats)


def tau_inverse(m: Rep) -> Rep:
    """The inverse translate, realized as the dual of tau over the opposite quiver."""
    q_op = m.quiver.opposite()
    try:
        t_op = tau(dual_rep(m, q_op))
    except TauUndefinedError:
        raise TauInverseUndefinedError("tau-inverse undefined: injective representation") from None
    out = dual_rep(t_op, m.quiver)
    expected = coxeter_inverse_transform(m.quiver, m.dim_vector())
    if out.dim_vector() != expected:
        raise ConstructionError("tau-inverse dimension contract violated")
    return out


def is_projective_rep(m: Rep) -> bool:
    return min_proj_presentation(m).p1.is_zero()


def is_injective_rep(m: Rep) -> bool:
    return is_projective_rep(dual_rep(m))


@dataclass
class AlmostSplitSeq:
    """Realized non-split sequence 0 -> left -> middle -> right -> 0."""

    left: Rep
    middle: Rep
    right: Rep
    f: Morph  # left -> middle
    g: Morph  # middle -> right

    def to_json(self) -> dict:
        return {
            "v": 1,
            "left": self.left.to_json(),
            "middle": self.middle.to_json(),
            "right": self.right.to_json(),
            "f": self.f.to_json(),
            "g": self.g.to_json(),
        }


def _coords_in_basis(vectors: list, target, field, width: int):
    """Solve for coordinates of target in the span of `vectors`, or None."""
    if not vectors:
        return None
    cols = Mat(field, [[vec[i] for vec in vectors] for i in range(width)])
    return solve(cols, Mat.column(field, target))


def almost_split_sequence(z: Rep, window: list | None = None) -> AlmostSplitSeq:
    """Realize the sequence ending at z by a pushout of its presentation
    against a nonzero extension cocycle; certified scope only."""
    kit = min_proj_presentation(z)
    if kit.p1.is_zero():
        raise TauUndefinedError("tau undefined: projective representation")
    report = end_report(z)
    if report.radical_available and report.auto_field_dim != 1:
        raise AlmostSplitScopeError("automorphism field must be trivial")
    if not report.radical_available and not report.is_brick:
        raise AlmostSplitScopeError("prime-field scope needs a brick endpoint")
    tz = tau(z)
    if ext1_dim(z, tz) != 1:
        raise AlmostSplitScopeError("extension space is not one-dimensional")
    hom_p0 = hom_basis(kit.p0, tz)
    hom_p1 = hom_basis(kit.p1, tz)
    width = sum(tz.dims[v] * kit.p1.dims[v] for v in z.quiver.vertices)
    restricted = RowSpan(z.field, width)
    for phi in hom_p0.basis:
        restricted.insert(phi.compose(kit.pres_map).vector())
    xi = next((cand for cand in hom_p1.basis if not restricted.contains(cand.vector())), None)
    if xi is None:
        raise ConstructionError("no nonzero extension cocycle found")
    total, (incl_p0, incl_tz), (proj_p0, _) = direct_sum([kit.p0, tz])
    h = incl_p0.compose(kit.pres_map).add(incl_tz.compose(xi).scale(z.field.from_int(-1)))
    middle, proj_to_mid, rep_mats = cokernel_rep(h)
    f = proj_to_mid.compose(incl_tz)
    big_g = kit.cover.compose(proj_p0)
    g = induced_on_cokernel(middle, rep_mats, big_g)
    seq = AlmostSplitSeq(tz, middle, z, f, g)
    _assert_sequence(seq)
    return seq


def _assert_sequence(seq: AlmostSplitSeq):
    if not seq.g.compose(seq.f).is_zero():
        raise ConstructionError("composite of the sequence maps is nonzero")
    if not seq.f.vertexwise_injective():
        raise ConstructionError("left map not injective")
    if not seq.g.vertexwise_surjective():
        raise ConstructionError("right map not surjective")
    if seq.middle.total_dim != seq.left.total_dim + seq.right.total_dim:
        raise ConstructionError("middle dimension mismatch")
    if _find_section(seq) is not None:
        raise ConstructionError("split extension constructed")


def _find_section(seq: AlmostSplitSeq):
    """A section s of g (g . s = id) in the Hom span, or None."""
    hb = hom_basis(seq.right, seq.middle)
    if not hb.basis:
        return None
    f = seq.right.field
    width = sum(seq.right.dims[v] * seq.right.dims[v] for v in seq.right.quiver.vertices)
    vectors = [seq.g.compose(s).vector() for s in hb.basis]
    target = Morph.identity(seq.right).vector()
    coords = _coords_in_basis(vectors, target, f, width)
    if coords is None:
        return None
    section = None
    for i, b in enumerate(hb.basis):
        c = coords[i, 0]
        if c == f.zero():
            continue
        term = b.scale(c)
        section = term if section is None else section.add(term)
    return section if section is not None else Morph.zero(seq.right, seq.middle)


@dataclass
class VerifyItem:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class VerifyReport:
    items: list

    @property
    def all_passed(self) -> bool:
        return all(item.ok for item in self.items)

    def failures(self):
        return [item for item in self.items if not item.ok]


def _nonretraction_basis(w: Rep, target: Rep) -> list:
    """Morphisms w -> target that are not retractions: the full Hom space when
    the objects differ, the endomorphism radical otherwise."""
    if w is target or w.structure_equal(target):
        return end_radical_basis(target, hom_basis(target, target).basis)
    return hom_basis(w, target).basis


def verify_almost_split(seq: AlmostSplitSeq, window: list) -> VerifyReport:
    """Check the factorization properties against every window object.

    Every non-retraction into the right end must lift through g; dually every
    non-section out of the left end must extend through f; and the
    automorphism field dimensions of the two ends must agree."""
    items = []
    try:
        _assert_sequence(seq)
        items.append(VerifyItem("sequence_exact_nonsplit", True))
    except ConstructionError as exc:
        items.append(VerifyItem("sequence_exact_nonsplit", False, str(exc)))
    left_rep = end_report(seq.left)
    right_rep = end_report(seq.right)
    if left_rep.radical_available and right_rep.radical_available:
        items.append(
            VerifyItem(
                "auto_field_match",
                left_rep.auto_field_dim == right_rep.auto_field_dim,
                f"{left_rep.auto_field_dim} vs {right_rep.auto_field_dim}",
            )
        )
    f = seq.left.field
    for idx, w in enumerate(window):
        lift_basis = hom_basis(w, seq.middle).basis
        lift_vectors = [seq.g.compose(h).vector() for h in lift_basis]
        width = sum(seq.right.dims[v] * w.dims[v] for v in w.quiver.vertices)
        ok = True
        for u in _nonretraction_basis(w, seq.right):
            if _coords_in_basis(lift_vectors, u.vector(), f, width) is None:
                ok = False
                break
        items.append(VerifyItem(f"lift_through_g[{idx}]", ok))
        ext_basis = hom_basis(seq.middle, w).basis
        ext_vectors = [h.compose(seq.f).vector() for h in ext_basis]
        width = sum(w.dims[v] * seq.left.dims[v] for v in w.quiver.vertices)
        ok = True
        for vmor in _nonsection_basis(seq.left, w):
            if _coords_in_basis(ext_vectors, vmor.vector(), f, width) is None:
                ok = False
                break
        items.append(VerifyItem(f"extend_through_f[{idx}]", ok))
    return VerifyReport(items)


def _nonsection_basis(source: Rep, w: Rep) -> list:
    if w is source or w.structure_equal(source):
        return end_radical_basis(source, hom_basis(source, source).basis)
    return hom_basis(source, w).basis

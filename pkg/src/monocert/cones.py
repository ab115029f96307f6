"""Exact rational polyhedral cones with dual (ray / facet) descriptions.

A cone is stored with two minimal canonical descriptions that are kept in
sync: generators (a lineality basis plus extreme rays) and constraints
(equality normals spanning the orthogonal complement of the cone's span,
plus facet inequality normals).  Conversion between the two sides uses
the double description method: inequalities are inserted one at a time
into an initially unconstrained space, with the lineality space peeled
off by pivoting and extreme rays combined across each new hyperplane
using the combinatorial adjacency test.  All arithmetic is over Python
integers; vectors are primitive (content one).

Lineality is never assumed away: a lineality basis vector appears in the
public ray list as a +/- pair, and likewise an equality normal appears in
the public facet list as a +/- pair, so predicates written against
``rays``/``facets`` are correct for non-pointed and non-full-dimensional
cones alike.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import SingularTransformError
from .matrices import Matrix5

Vec = tuple[int, ...]


def _primitive(v: Sequence[int]) -> Vec:
    """Divide by the content; the zero vector is returned unchanged."""
    g = 0
    for x in v:
        g = gcd(g, abs(x))
        if g == 1:
            return tuple(v)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _neg(v: Vec) -> Vec:
    return tuple(-x for x in v)


def _is_zero(v: Sequence[int]) -> bool:
    return all(x == 0 for x in v)


def _combine(u: Vec, cu: int, v: Vec, cv: int) -> Vec:
    """Primitive representative of cu*u + cv*v."""
    return _primitive(tuple(cu * a + cv * b for a, b in zip(u, v)))


def _to_int_vector(entries: Sequence[Fraction | int]) -> Vec:
    """Clear denominators and primitivize (direction is preserved)."""
    fracs = [Fraction(x) for x in entries]
    scale = 1
    for f in fracs:
        scale = scale * f.denominator // gcd(scale, f.denominator)
    return _primitive(tuple(int(f * scale) for f in fracs))


def _rref_basis(vectors: Iterable[Vec], ambient: int) -> tuple[Vec, ...]:
    """Canonical basis of the span: integer RREF rows, positive pivots."""
    rows = [[Fraction(x) for x in v] for v in vectors if not _is_zero(v)]
    basis: list[list[Fraction]] = []
    pivots: list[int] = []
    for row in rows:
        for b, p in zip(basis, pivots):
            if row[p] != 0:
                factor = row[p] / b[p]
                row = [a - factor * c for a, c in zip(row, b)]
        pivot = next((j for j in range(ambient) if row[j] != 0), None)
        if pivot is None:
            continue
        row = [a / row[pivot] for a in row]
        for b, p in zip(basis, pivots):
            if b[pivot] != 0:
                factor = b[pivot]
                b[:] = [a - factor * c for a, c in zip(b, row)]
        basis.append(row)
        pivots.append(pivot)
    order = sorted(range(len(basis)), key=lambda i: pivots[i])
    result = []
    for i in order:
        vec = _to_int_vector(basis[i])
        if vec[pivots[i]] < 0:
            vec = _neg(vec)
        result.append(vec)
    return tuple(result)


def _reduce_mod_basis(v: Vec, basis: Sequence[Vec], ambient: int) -> Vec:
    """Canonical representative of v modulo the span of an RREF basis."""
    out = list(v)
    for b in basis:
        pivot = next(j for j in range(ambient) if b[j] != 0)
        coeff = out[pivot]
        if coeff != 0:
            scale = b[pivot]  # positive by RREF normalization
            out = [x * scale - y * coeff for x, y in zip(out, b)]
    return _primitive(tuple(out))


def _rank(vectors: Sequence[Vec], ambient: int) -> int:
    rows = [[Fraction(x) for x in v] for v in vectors if not _is_zero(v)]
    rank = 0
    for col in range(ambient):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(rank + 1, len(rows)):
            if rows[i][col] != 0:
                factor = rows[i][col] / rows[rank][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _double_description(
    rows: Sequence[Vec], ambient: int
) -> tuple[list[Vec], list[Vec]]:
    """Minimal generators of {x : <row, x> >= 0 for every row}.

    Returns (lineality basis, extreme rays), both primitive integer
    vectors; the extreme rays are minimal and unique up to positive
    scaling and the lineality space.  Deterministic for a fixed row
    order.
    """
    lineality: list[Vec] = [
        tuple(1 if i == j else 0 for j in range(ambient)) for i in range(ambient)
    ]
    rays: list[Vec] = []
    masks: list[int] = []  # bit t set <=> ray is tight at the t-th processed row
    processed = 0
    for a in rows:
        if _is_zero(a):
            continue
        pairings = [_dot(a, l) for l in lineality]
        pivot_index = next((i for i, s in enumerate(pairings) if s != 0), None)
        if pivot_index is not None:
            l0, s0 = lineality[pivot_index], pairings[pivot_index]
            if s0 < 0:
                l0, s0 = _neg(l0), -s0
            lineality = [
                l if s == 0 else _combine(l, s0, l0, -s)
                for i, (l, s) in enumerate(zip(lineality, pairings))
                if i != pivot_index
            ]
            tight_bit = 1 << processed
            new_rays: list[Vec] = []
            new_masks: list[int] = []
            for vec, mask in zip(rays, masks):
                s = _dot(a, vec)
                if s != 0:
                    vec = _combine(vec, s0, l0, -s)
                new_rays.append(vec)
                new_masks.append(mask | tight_bit)
            # the pivot itself becomes the one ray off the new hyperplane
            new_rays.append(l0)
            new_masks.append((1 << processed) - 1)
            rays, masks = new_rays, new_masks
        else:
            pairings = [_dot(a, v) for v in rays]
            tight_bit = 1 << processed
            new_rays: list[Vec] = []
            new_masks: list[int] = []
            for vec, mask, s in zip(rays, masks, pairings):
                if s > 0:
                    new_rays.append(vec)
                    new_masks.append(mask)
                elif s == 0:
                    new_rays.append(vec)
                    new_masks.append(mask | tight_bit)
            for p in range(len(rays)):
                sp = pairings[p]
                if sp <= 0:
                    continue
                for n in range(len(rays)):
                    sn = pairings[n]
                    if sn >= 0:
                        continue
                    common = masks[p] & masks[n]
                    adjacent = True
                    for o in range(len(rays)):
                        if o != p and o != n and common & masks[o] == common:
                            adjacent = False
                            break
                    if adjacent:
                        new_rays.append(_combine(rays[n], sp, rays[p], -sn))
                        new_masks.append(common | tight_bit)
            rays, masks = new_rays, new_masks
        processed += 1
    return lineality, rays


def _clean_generators(vectors: Iterable[Sequence[int | Fraction]]) -> list[Vec]:
    """Primitive nonzero generators, deduplicated, input order preserved."""
    seen: set[Vec] = set()
    out: list[Vec] = []
    for v in vectors:
        vec = _to_int_vector(v)
        if _is_zero(vec) or vec in seen:
            continue
        seen.add(vec)
        out.append(vec)
    return out


@dataclass(frozen=True)
class Cone:
    """Rational polyhedral cone with canonical dual descriptions.

    Do not call the constructor directly; use :func:`cone_from_rays`,
    :meth:`Cone.from_generators`, or :meth:`Cone.from_inequalities`.
    """

    ambient_dim: int
    lineality: tuple[Vec, ...]
    extreme: tuple[Vec, ...]
    eq_normals: tuple[Vec, ...]
    ineq_normals: tuple[Vec, ...]
    dim: int
    lineality_dim: int

    # -- construction -------------------------------------------------

    @staticmethod
    def _assemble(
        ambient: int,
        lin_raw: Iterable[Vec],
        rays_raw: Iterable[Vec],
        eq_raw: Iterable[Vec],
        ineq_raw: Iterable[Vec],
    ) -> "Cone":
        lineality = _rref_basis(lin_raw, ambient)
        extreme = tuple(
            sorted(_reduce_mod_basis(r, lineality, ambient) for r in rays_raw)
        )
        eq_normals = _rref_basis(eq_raw, ambient)
        ineq_normals = tuple(
            sorted(_reduce_mod_basis(f, eq_normals, ambient) for f in ineq_raw)
        )
        dim = len(lineality) + _rank(extreme, ambient)
        cone = Cone(
            ambient_dim=ambient,
            lineality=lineality,
            extreme=extreme,
            eq_normals=eq_normals,
            ineq_normals=ineq_normals,
            dim=dim,
            lineality_dim=len(lineality),
        )
        assert dim + len(eq_normals) == ambient
        return cone

    @staticmethod
    def from_generators(
        generators: Iterable[Sequence[int | Fraction]], ambient_dim: int
    ) -> "Cone":
        """Cone spanned by the given vectors (all-zero generators dropped)."""
        gens = _clean_generators(generators)
        dual_lin, dual_rays = _double_description(gens, ambient_dim)
        rows = list(dual_rays)
        for e in dual_lin:
            rows.append(e)
            rows.append(_neg(e))
        lin, rays = _double_description(rows, ambient_dim)
        return Cone._assemble(ambient_dim, lin, rays, dual_lin, dual_rays)

    @staticmethod
    def from_inequalities(
        inequalities: Iterable[Sequence[int | Fraction]],
        ambient_dim: int,
        equalities: Iterable[Sequence[int | Fraction]] = (),
    ) -> "Cone":
        """Cone {x : <a, x> >= 0 for inequalities a, <e, x> = 0 for equalities e}."""
        rows = [_to_int_vector(a) for a in inequalities]
        for e in equalities:
            vec = _to_int_vector(e)
            rows.append(vec)
            rows.append(_neg(vec))
        lin, rays = _double_description(rows, ambient_dim)
        dual_rows = list(rays)
        for l in lin:
            dual_rows.append(l)
            dual_rows.append(_neg(l))
        dual_lin, dual_rays = _double_description(dual_rows, ambient_dim)
        return Cone._assemble(ambient_dim, lin, rays, dual_lin, dual_rays)

    # -- canonical public descriptions --------------------------------

    @property
    def rays(self) -> tuple[Vec, ...]:
        """All generators: extreme rays plus +/- pairs for the lineality basis."""
        out = list(self.extreme)
        for l in self.lineality:
            out.append(l)
            out.append(_neg(l))
        return tuple(sorted(out))

    @property
    def facets(self) -> tuple[Vec, ...]:
        """All constraints as inequalities, equalities expanded to +/- pairs."""
        out = list(self.ineq_normals)
        for e in self.eq_normals:
            out.append(e)
            out.append(_neg(e))
        return tuple(sorted(out))

    # -- predicates ----------------------------------------------------

    def contains(self, v: Sequence[int | Fraction]) -> bool:
        """Membership of a single vector, decided against the facet side."""
        vec = _to_int_vector(v)
        return all(_dot(e, vec) == 0 for e in self.eq_normals) and all(
            _dot(f, vec) >= 0 for f in self.ineq_normals
        )

    def is_trivial(self) -> bool:
        return self.dim == 0

    def __str__(self) -> str:
        return (
            f"Cone(dim={self.dim}, rays={len(self.extreme)}, "
            f"lineality={self.lineality_dim}, facets={len(self.ineq_normals)})"
        )


def cone_from_rays(matrix_rows: Sequence[Sequence[int | Fraction]]) -> Cone:
    """Cone generated by the columns of a matrix given as rows.

    The matrix has one row per ambient coordinate; each column is one
    generating ray.  All-zero columns are dropped silently.
    """
    ambient = len(matrix_rows)
    if ambient == 0:
        raise ValueError("matrix must have at least one row")
    width = len(matrix_rows[0])
    if any(len(row) != width for row in matrix_rows):
        raise ValueError("ragged generator matrix")
    columns = [[row[j] for row in matrix_rows] for j in range(width)]
    return Cone.from_generators(columns, ambient)


def contains_ray(cone: Cone, v: Sequence[int | Fraction]) -> bool:
    """True iff v satisfies every facet inequality of the cone."""
    return cone.contains(v)


def is_subcone(inner: Cone, outer: Cone) -> bool:
    """True iff every generator of `inner` lies in `outer`."""
    return all(outer.contains(r) for r in inner.rays)


def intersect(c: Cone, d: Cone) -> Cone:
    """Intersection, from the union of the two constraint sets."""
    if c.ambient_dim != d.ambient_dim:
        raise ValueError("ambient dimensions differ")
    return Cone.from_inequalities(
        list(c.ineq_normals) + list(d.ineq_normals),
        c.ambient_dim,
        equalities=list(c.eq_normals) + list(d.eq_normals),
    )


def _intersection_dim(c: Cone, d: Cone) -> int:
    """dim(c ∩ d) without building the canonical intersection cone."""
    rows = list(c.ineq_normals) + list(d.ineq_normals)
    for e in list(c.eq_normals) + list(d.eq_normals):
        rows.append(e)
        rows.append(_neg(e))
    lin, rays = _double_description(rows, c.ambient_dim)
    return len(lin) + _rank(rays, c.ambient_dim)


def _transform_vectors(
    vectors: Iterable[Vec], matrix: Matrix5
) -> list[Vec]:
    return [_to_int_vector(matrix.apply(v)) for v in vectors]


def transform(cone: Cone, linear_map: Matrix5) -> Cone:
    """Image of the cone under an invertible linear map.

    Extreme rays map to extreme rays and facets to facets (by the inverse
    transpose), so no double description run is needed; both sides are
    re-canonicalized afterwards.
    """
    if cone.ambient_dim != 5:
        raise ValueError("matrix transforms are only defined for ambient dimension 5")
    if linear_map.det() == 0:
        raise SingularTransformError("transform matrix is singular")
    inverse_transpose = linear_map.inverse().transpose()
    return Cone._assemble(
        cone.ambient_dim,
        _transform_vectors(cone.lineality, linear_map),
        _transform_vectors(cone.extreme, linear_map),
        _transform_vectors(cone.eq_normals, inverse_transpose),
        _transform_vectors(cone.ineq_normals, inverse_transpose),
    )


@dataclass(frozen=True)
class ConeSet:
    """Ordered collection of cones with human-readable labels.

    Equal cones are deduplicated on construction (first occurrence wins),
    so a set stays a set even when built from redundant table data.
    """

    cones: tuple[Cone, ...]
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        labels = self.labels or tuple(f"cone{i}" for i in range(len(self.cones)))
        if len(labels) != len(self.cones):
            raise ValueError("labels and cones must have matching lengths")
        kept_cones: list[Cone] = []
        kept_labels: list[str] = []
        for cone, label in zip(self.cones, labels):
            if cone not in kept_cones:
                kept_cones.append(cone)
                kept_labels.append(label)
        object.__setattr__(self, "cones", tuple(kept_cones))
        object.__setattr__(self, "labels", tuple(kept_labels))

    def __len__(self) -> int:
        return len(self.cones)

    def __iter__(self):
        return iter(self.cones)

    def union(self, other: "ConeSet") -> "ConeSet":
        return ConeSet(self.cones + other.cones, self.labels + other.labels)


def transform_set(cone_set: ConeSet, linear_map: Matrix5, label_prefix: str = "") -> ConeSet:
    """Elementwise transform; labels are prefixed to stay meaningful."""
    return ConeSet(
        tuple(transform(c, linear_map) for c in cone_set.cones),
        tuple(f"{label_prefix}{lbl}" for lbl in cone_set.labels),
    )


def are_disjoint_open(s1: ConeSet, s2: ConeSet) -> bool:
    """True iff every pairwise intersection has less than full dimension.

    The members are read as closures of open cones, so "disjoint" means
    no two cones share interior points.
    """
    return first_overlap(s1, s2) is None


def first_overlap(s1: ConeSet, s2: ConeSet) -> tuple[str, str, Vec] | None:
    """First pair of cones with full-dimensional intersection, if any.

    Returns (label1, label2, interior point of the overlap); the interior
    point is the sum of the intersection's generators, which lies in the
    interior whenever the intersection is full-dimensional.
    """
    for c, lc in zip(s1.cones, s1.labels):
        for d, ld in zip(s2.cones, s2.labels):
            ambient = c.ambient_dim
            if _intersection_dim(c, d) == ambient:
                overlap = intersect(c, d)
                witness = tuple(
                    sum(col) for col in zip(*overlap.extreme)
                ) if overlap.extreme else overlap.rays[0]
                return lc, ld, _primitive(witness)
    return None


def contained_in_set(s1: ConeSet, s2: ConeSet) -> bool:
    """True iff every cone of the first set lies inside some cone of the second."""
    return first_uncovered(s1, s2) is None


def first_uncovered(s1: ConeSet, s2: ConeSet) -> tuple[str, Vec] | None:
    """First cone of s1 contained in no member of s2, with an offending ray.

    The witness ray is one generator of the uncovered cone that escapes
    the best candidate container (the member of s2 containing the most
    generators of the cone).
    """
    for c, lc in zip(s1.cones, s1.labels):
        if any(is_subcone(c, d) for d in s2.cones):
            continue
        best_missing: Vec | None = None
        best_count = -1
        for d in s2.cones:
            inside = [r for r in c.rays if d.contains(r)]
            if len(inside) > best_count:
                best_count = len(inside)
                missing = [r for r in c.rays if not d.contains(r)]
                best_missing = missing[0] if missing else None
        return lc, best_missing if best_missing is not None else c.rays[0]
    return None

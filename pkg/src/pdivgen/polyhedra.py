"""Rational cones, tailed polyhedra, Hilbert bases, fans and refinements.

Everything is exact: rays and facet normals are primitive integer
vectors, polyhedron vertices are Fraction tuples.  Cones carry both
descriptions (generators and facet normals) eagerly; for cones that are
not full-dimensional the facet list contains +/- pairs of normals
cutting out the linear span.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import gcd

from .intlinalg import (
    det,
    hnf_basis,
    identity,
    invert_unimodular,
    kernel_lattice,
    primitive,
    rank,
    smith_normal_form,
    solve_in_lattice,
)


class NonPointedCone(ValueError):
    """Raised when an operation requires a pointed cone."""


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _dedupe_sorted(vecs):
    return tuple(sorted(set(vecs)))


def _pointed_rays(ineqs, dim):
    """Extreme rays of the pointed cone {x : A x >= 0}; rank(A) == dim."""
    rows = _dedupe_sorted(tuple(r) for r in ineqs if any(r))
    if dim == 0:
        return ()
    if dim == 1:
        signs = {1 if r[0] > 0 else -1 for r in rows}
        if signs == {1}:
            return ((1,),)
        if signs == {-1}:
            return ((-1,),)
        return ()
    found = set()
    for sub in combinations(rows, dim - 1):
        ker = kernel_lattice(sub)
        if len(ker) != 1:
            continue
        v = ker[0]
        pos = neg = False
        for a in rows:
            s = dot(a, v)
            if s > 0:
                pos = True
            elif s < 0:
                neg = True
            if pos and neg:
                break
        if pos and neg:
            continue
        found.add(primitive(v) if pos or not neg else primitive([-x for x in v]))
    return tuple(sorted(found))


def generators_of_dual(vectors, dim):
    """Generators of {y : <y, v> >= 0 for all v}.

    Returns canonical generators: +/- pairs spanning the lineality space
    followed by the extreme rays of the pointed part.
    """
    ineqs = [tuple(v) for v in vectors if any(v)]
    lin = kernel_lattice(ineqs) if ineqs else identity(dim)
    gens = set()
    for l in lin:
        gens.add(tuple(l))
        gens.add(tuple(-x for x in l))
    if len(lin) < dim:
        if lin:
            # restrict to the orthogonal complement of the lineality space
            comp = kernel_lattice(lin)
            reduced = [tuple(dot(b, a) for b in comp) for a in ineqs]
            for y in _pointed_rays(reduced, len(comp)):
                gens.add(primitive([dot(y, col) for col in zip(*comp)]))
        else:
            gens.update(_pointed_rays(ineqs, dim))
    return tuple(sorted(gens))


@dataclass(frozen=True)
class QCone:
    """Rational polyhedral cone with both descriptions."""

    dim: int
    rays: tuple
    facets: tuple

    def contains(self, point):
        return all(dot(f, point) >= 0 for f in self.facets)

    def contains_interior(self, point):
        if rank(self.rays) < self.dim:
            return False
        return all(dot(f, point) > 0 for f in self.facets)

    def is_pointed(self):
        return rank(self.facets) == self.dim if self.facets else self.dim == 0

    def is_full_dim(self):
        return rank(self.rays) == self.dim if self.rays else self.dim == 0

    def span_rank(self):
        return rank(self.rays) if self.rays else 0

    def is_simplicial(self):
        return len(self.rays) == self.span_rank()


def cone_from_rays(rays, dim):
    rays = [tuple(primitive(r)) for r in rays if any(r)]
    facets = generators_of_dual(rays, dim)
    canon = generators_of_dual(facets, dim)
    return QCone(dim, canon, facets)


def cone_from_facets(normals, dim):
    normals = [tuple(primitive(n)) for n in normals if any(n)]
    rays = generators_of_dual(normals, dim)
    facets = generators_of_dual(rays, dim)
    return QCone(dim, rays, facets)


def dual_cone(c: QCone) -> QCone:
    rays = generators_of_dual(c.rays, c.dim)
    return QCone(c.dim, rays, generators_of_dual(rays, c.dim))


def intersect_cones(a: QCone, b: QCone) -> QCone:
    return cone_from_facets(list(a.facets) + list(b.facets), a.dim)


def mu(v):
    """Smallest positive integer k with k*v a lattice point."""
    lcm = 1
    for x in v:
        d = Fraction(x).denominator
        lcm = lcm * d // gcd(lcm, d)
    return lcm


# ---------------------------------------------------------------------------
# triangulation


def triangulate(cone: QCone):
    """Pulling triangulation into simplicial subcones (lists of rays)."""
    return _triangulate_rays(cone.rays, cone.dim)


def _triangulate_rays(rays, dim):
    r = rank(rays)
    if len(rays) == r:
        return [tuple(rays)]
    c = cone_from_rays(rays, dim)
    v = c.rays[0]
    cells = []
    for f in c.facets:
        if dot(f, v) == 0:
            continue
        face = [x for x in c.rays if dot(f, x) == 0]
        if rank(face) != r - 1:
            continue
        for s in _triangulate_rays(tuple(face), dim):
            cells.append(tuple(sorted(s + (v,))))
    return sorted(set(cells))


def _span_lattice_basis(rays):
    """Saturated lattice basis of the rational span of the rays."""
    w = kernel_lattice(rays)
    if not w:
        return identity(len(rays[0]))
    return kernel_lattice(w)


def _parallelepiped_points(cell_rows):
    """Nonzero lattice points in {sum l_i r_i : 0 <= l_i < 1} (full rank)."""
    n = len(cell_rows)
    d = abs(det(cell_rows))
    if d == 1:
        return []
    s, _, v = smith_normal_form(cell_rows)
    vinv = invert_unimodular(v)
    elem = [s[i][i] for i in range(n)]
    binv_rows = _fraction_inverse(cell_rows)
    pts = set()
    for t in product(*(range(e) for e in elem)):
        w = [sum(t[i] * vinv[i][j] for i in range(n)) for j in range(n)]
        lam = [sum(Fraction(w[i]) * binv_rows[i][j] for i in range(n)) for j in range(n)]
        frac = [x - x.__floor__() for x in lam]
        p = tuple(
            int(sum(frac[i] * cell_rows[i][j] for i in range(n))) for j in range(n)
        )
        if any(p):
            pts.add(p)
    return sorted(pts)


def _fraction_inverse(rows):
    """Inverse of a square integer matrix as Fraction rows."""
    n = len(rows)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    for c in range(n):
        piv = next(i for i in range(c, n) if a[i][c])
        a[c], a[piv] = a[piv], a[c]
        inv = a[c][c]
        a[c] = [x / inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [row[n:] for row in a]


def hilbert_basis(cone: QCone):
    """Unique minimal generating set of cone /\\ Z^n, sorted lexicographically."""
    if not cone.is_pointed():
        raise NonPointedCone("hilbert_basis requires a pointed cone")
    if not cone.rays:
        return ()
    span = _span_lattice_basis(cone.rays)
    yrays = [solve_in_lattice(r, span) for r in cone.rays]
    r = len(span)
    ycone = cone_from_rays(yrays, r)
    candidates = set()
    for cell in _triangulate_rays(ycone.rays, r):
        candidates.update(cell)
        candidates.update(_parallelepiped_points(list(cell)))
    candidates.discard(tuple([0] * r))
    cand = sorted(candidates)
    basis = []
    for h in cand:
        reducible = False
        for c in cand:
            if c == h:
                continue
            diff = tuple(x - y for x, y in zip(h, c))
            if any(diff) and ycone.contains(diff):
                reducible = True
                break
        if not reducible:
            basis.append(h)
    out = [tuple(sum(y[i] * span[i][j] for i in range(r)) for j in range(cone.dim)) for y in basis]
    return tuple(sorted(out))


def unimodular_triangulation(cone: QCone):
    """Refine into simplicial cones whose rays form a basis of Z^n.

    Iterated stellar subdivision at the shortest new lattice point of the
    worst cell, ties broken lexicographically; deterministic.
    """
    if not cone.is_full_dim():
        raise ValueError("unimodular_triangulation requires a full-dimensional cone")
    cells = [tuple(c) for c in triangulate(cone)]
    while True:
        target = None
        for cell in sorted(cells):
            if abs(det(cell)) != 1:
                target = cell
                break
        if target is None:
            break
        pts = _parallelepiped_points(list(target))
        w = min(pts, key=lambda p: (sum(x * x for x in p), p))
        w = primitive(w)
        new_cells = []
        for cell in cells:
            lam = _coords_in_simplex(w, cell)
            if lam is None or any(x < 0 for x in lam):
                new_cells.append(cell)
                continue
            replaced = False
            for i, l in enumerate(lam):
                if l > 0:
                    sub = tuple(sorted(cell[:i] + (w,) + cell[i + 1 :]))
                    new_cells.append(sub)
                    replaced = True
            if not replaced:
                new_cells.append(cell)
        cells = sorted(set(new_cells))
    return PolyhedralSubdivision(
        cone, tuple(cone_from_rays(c, cone.dim) for c in sorted(cells))
    )


def _coords_in_simplex(w, cell):
    """Barycentric-style coordinates of w in the simplicial cone, or None."""
    inv = _fraction_inverse(list(cell))
    lam = [sum(Fraction(w[i]) * inv[i][j] for i in range(len(cell))) for j in range(len(cell))]
    return lam


# ---------------------------------------------------------------------------
# tailed polyhedra


@dataclass(frozen=True)
class TailedPolyhedron:
    """conv(vertices) + tail cone, irredundant."""

    dim: int
    vertices: tuple
    tail: QCone

    def support(self, u):
        """min <P, u>; requires u in dual(tail)."""
        return min(dot(v, u) for v in self.vertices)

    def __add__(self, other):
        return minkowski_sum(self, other)


def tailed_polyhedron(vertices, tail_rays, dim):
    homog = [tuple(Fraction(x) for x in v) + (Fraction(1),) for v in vertices]
    homog = [primitive(h) for h in homog]
    homog += [tuple(r) + (0,) for r in tail_rays if any(r)]
    c = cone_from_rays(homog, dim + 1)
    verts = []
    tails = []
    for r in c.rays:
        if r[-1] > 0:
            verts.append(tuple(Fraction(x, r[-1]) for x in r[:-1]))
        elif r[-1] == 0:
            tails.append(r[:-1])
        else:
            raise ValueError("unbounded in the negative homogenization direction")
    if not verts:
        raise ValueError("a tailed polyhedron needs at least one vertex")
    return TailedPolyhedron(dim, tuple(sorted(verts)), cone_from_rays(tails, dim))


def minkowski_sum(p: TailedPolyhedron, q: TailedPolyhedron) -> TailedPolyhedron:
    if p.dim != q.dim:
        raise ValueError("ambient dimension mismatch")
    verts = [tuple(a + b for a, b in zip(v, w)) for v in p.vertices for w in q.vertices]
    return tailed_polyhedron(verts, list(p.tail.rays) + list(q.tail.rays), p.dim)


def point_polyhedron(v, tail: QCone) -> TailedPolyhedron:
    return tailed_polyhedron([v], tail.rays, tail.dim)


# ---------------------------------------------------------------------------
# fans


@dataclass(frozen=True)
class PolyhedralSubdivision:
    ambient: QCone
    maximal_cells: tuple

    def cell_containing(self, u):
        for c in self.maximal_cells:
            if c.contains(u):
                return c
        return None

    def all_rays(self):
        seen = set()
        for c in self.maximal_cells:
            seen.update(c.rays)
        return tuple(sorted(seen))


def trivial_subdivision(ambient: QCone) -> PolyhedralSubdivision:
    return PolyhedralSubdivision(ambient, (ambient,))


def normal_fan(p: TailedPolyhedron) -> PolyhedralSubdivision:
    """Cones of linearity of u -> min<P, u>, subdividing dual(tail)."""
    if not p.tail.is_pointed():
        raise NonPointedCone("normal_fan needs a pointed tail cone")
    ambient = dual_cone(p.tail)
    full = ambient.span_rank()
    cells = []
    seen = set()
    for v in p.vertices:
        normals = [
            primitive(tuple(a - b for a, b in zip(w, v)))
            for w in p.vertices
            if w != v
        ]
        cell = cone_from_facets(list(ambient.facets) + normals, p.dim)
        if cell.span_rank() == full and cell.rays not in seen:
            seen.add(cell.rays)
            cells.append(cell)
    return PolyhedralSubdivision(ambient, tuple(sorted(cells, key=lambda c: c.rays)))


def slice_cone(c: QCone, h):
    """Split a full-dimensional pointed cone along the hyperplane h.

    Returns (positive piece, negative piece); a piece is None when the
    cone does not meet that open halfspace.  New rays on the hyperplane
    come from adjacent ray pairs straddling it, so no ray enumeration
    from scratch is needed.
    """
    vals = {r: dot(h, r) for r in c.rays}
    pos = [r for r in c.rays if vals[r] > 0]
    neg = [r for r in c.rays if vals[r] < 0]
    zero = [r for r in c.rays if vals[r] == 0]
    if not neg:
        return c, None
    if not pos:
        return None, c
    cut = []
    for rp in pos:
        for rn in neg:
            tight = [f for f in c.facets if dot(f, rp) == 0 and dot(f, rn) == 0]
            if rank(tight) == c.dim - 2:
                v = tuple(
                    vals[rp] * b - vals[rn] * a for a, b in zip(rp, rn)
                )
                cut.append(primitive(v))
    cut = sorted(set(cut))

    def piece(keep, normal):
        rays = sorted(set(keep + zero + cut))
        cands = list(c.facets) + [tuple(normal)]
        facets = []
        for f in cands:
            tight_rays = [r for r in rays if dot(f, r) == 0]
            if rank(tight_rays) == c.dim - 1 and all(dot(f, r) >= 0 for r in rays):
                facets.append(tuple(primitive(f)))
        return QCone(c.dim, tuple(rays), tuple(sorted(set(facets))))

    return piece(pos, h), piece(neg, [-x for x in h])


def hyperplane_subdivision(ambient: QCone, hyperplanes) -> PolyhedralSubdivision:
    """Subdivide a full-dimensional pointed cone by a list of hyperplanes."""
    cells = [ambient]
    seen_h = set()
    for h in hyperplanes:
        h = primitive(h)
        key = min(h, tuple(-x for x in h))
        if key in seen_h:
            continue
        seen_h.add(key)
        nxt = []
        for c in cells:
            a, b = slice_cone(c, h)
            if a is not None:
                nxt.append(a)
            if b is not None:
                nxt.append(b)
        cells = nxt
    uniq = {}
    for c in cells:
        uniq.setdefault(c.rays, c)
    return PolyhedralSubdivision(
        ambient, tuple(uniq[k] for k in sorted(uniq))
    )


def common_refinement(subs, ambient: QCone) -> PolyhedralSubdivision:
    """Coarsest common refinement of the subdivisions, cut down to ambient."""
    full = ambient.span_rank()
    cells = [ambient]
    for sub in subs:
        nxt = []
        seen = set()
        for c in cells:
            for f in sub.maximal_cells:
                extra = [n for n in f.facets if any(dot(n, r) < 0 for r in c.rays)]
                piece = c if not extra else cone_from_facets(
                    list(c.facets) + extra, ambient.dim
                )
                if piece.span_rank() == full and piece.rays not in seen:
                    seen.add(piece.rays)
                    nxt.append(piece)
        cells = nxt
    return PolyhedralSubdivision(ambient, tuple(sorted(cells, key=lambda c: c.rays)))

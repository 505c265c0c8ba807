"""Generating sets of the multigraded section algebra of a p-divisor.

The pipeline mirrors the structure of the computation: make the divisor
linear on cells, harvest ray sections, complete the weight lattice,
certify the quotient field, prune dependent elements, and finally either
saturate (when the algebra is toric in disguise) or export a
presentation for an external normalization.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .intlinalg import hnf_basis, kernel_lattice, lattice_member, solve_in_lattice
from .mpoly import MPoly
from .pdivisor import IterationLimitExceeded, PDivisor, linearity_subdivision, restrict
from .polyhedra import (
    cone_from_rays,
    dot,
    hilbert_basis,
    primitive,
    triangulate,
)
from .varieties import (
    PointBase,
    QDivisor,
    SectionBasis,
    ffe,
    in_span,
    is_basepoint_free,
    sections,
    sections_of_floor,
)


@dataclass(frozen=True)
class GradedElement:
    section: object  # FunctionFieldElement
    weight: tuple

    def key(self):
        num = self.section.num.content_normalized()
        return (self.weight, self.section.den, tuple(sorted(num.terms.items())))


@dataclass(frozen=True)
class GeneratorSet:
    elements: tuple
    normalization_status: str  # Normal | SaturatedToric | ExportedForNormalization
    witnesses: tuple = ()
    report: tuple = ()
    presentation: str = ""


def _dedupe(elements):
    seen = set()
    out = []
    for e in elements:
        k = e.key()
        if k not in seen:
            seen.add(k)
            out.append(e)
    return out


def _sorted_elements(elements):
    return sorted(elements, key=lambda e: e.key())


# ---------------------------------------------------------------------------
# steps 4-6: ray sections


def find_k_rho(d: PDivisor, rho, max_iterations=64):
    """Smallest k with evaluate(d, k*rho) integral and base point free."""
    for k in range(1, max_iterations + 1):
        div = d.evaluate(tuple(k * x for x in rho))
        if not div.is_integral():
            continue
        if is_basepoint_free(d.variety, div):
            return k, sections(d.variety, div)
    raise IterationLimitExceeded(
        f"no integral base point free multiple of {tuple(rho)} up to {max_iterations}"
    )


def zariski_generators(d: PDivisor, cell_rays, max_iterations=64):
    """Elements eta_j * chi^(k*rho) for every generating ray of the cell.

    Returns (elements, twists) where twists records a section making the
    ray divisor effective whenever it is not already.
    """
    elements = []
    twists = {}
    for rho in cell_rays:
        rho = primitive(rho)
        k, basis = find_k_rho(d, rho, max_iterations)
        weight = tuple(k * x for x in rho)
        div = d.evaluate(weight)
        if any(c < 0 for c in div.coeffs.values()) and basis.elements:
            twists[weight] = basis.elements[0]
        for eta in basis.elements:
            elements.append(GradedElement(eta, weight))
    return _dedupe(elements), twists


# ---------------------------------------------------------------------------
# steps 7-11: weight lattice completion


def _interior_point(cone):
    return primitive(tuple(sum(r[i] for r in cone.rays) for i in range(cone.dim)))


def interior_lattice_basis(cone, max_iterations=64):
    """Lattice basis of Z^n inside the weight cone, first vector interior.

    Start from a primitive interior point, complete it to a basis of the
    lattice, then push the remaining vectors into the cone by adding
    multiples of the interior one.
    """
    n = cone.dim
    u = _interior_point(cone)
    if n == 1:
        return [u]
    comp = kernel_lattice([u])
    candidates = [u] + [tuple(r) for r in comp]
    if hnf_basis(candidates) != tuple(
        tuple(int(i == j) for j in range(n)) for i in range(n)
    ):
        # complete u to a basis via the HNF transform of the column vector
        from .intlinalg import hnf, invert_unimodular

        h, tr = hnf([[x] for x in u])
        uinv = invert_unimodular(tr)
        cols = list(zip(*uinv))
        candidates = [u] + [tuple(c) for c in cols[1:]]
    basis = [u]
    for b in candidates[1:]:
        t = 0
        cur = b
        while not cone.contains(cur):
            t += 1
            if t > max_iterations:
                raise IterationLimitExceeded(
                    f"cannot push basis vector {b} into the weight cone"
                )
            cur = tuple(x + t * y for x, y in zip(b, u))
        basis.append(cur)
    return basis


def _pick_section(y, basis: SectionBasis, div: QDivisor):
    """Deterministic nonzero section choice; 1 when the divisor is effective."""
    if all(c >= 0 for c in div.floor().coeffs.values()):
        return y.one()
    return min(basis.elements, key=lambda s: GradedElement(s, ()).key())


def weight_lattice_completion(d: PDivisor, elements, max_iterations=64):
    """Add elements until the collected weights generate the full lattice."""
    y = d.variety
    added = []
    weights = [e.weight for e in elements]
    basis = interior_lattice_basis(d.weight_cone, max_iterations)
    for b in basis:
        g = []
        j = 0
        while _gcd_list(g) != 1:
            j += 1
            if j > max_iterations:
                raise IterationLimitExceeded(
                    f"weight lattice completion stalled along {b}"
                )
            u = tuple(j * x for x in b)
            div = d.evaluate(u)
            sec = sections_of_floor(y, div)
            if not sec.elements:
                continue
            g.append(j)
            h = hnf_basis(weights) if weights else ()
            if h and lattice_member(u, h):
                continue
            s = _pick_section(y, sec, div)
            el = GradedElement(s, u)
            added.append(el)
            weights.append(u)
    return added


def _gcd_list(values):
    g = 0
    for v in values:
        a, b = g, v
        while b:
            a, b = b, a % b
        g = a
    return g


# ---------------------------------------------------------------------------
# section factorization over backend atoms


def atom_names(y):
    """Coordinates followed by the non-monomial defining forms."""
    names = [f"@{c}" for c in y.coordinates]
    for label in sorted(y.forms()):
        if not y.form(label).is_term():
            names.append(label)
    return names


def factor_exponents(y, element):
    """Exponent vector of a section over the backend atoms, or None.

    Sections that are (up to a scalar) products of coordinates and
    defining forms with integer exponents are factorable; anything else
    returns None.
    """
    names = atom_names(y)
    index = {n: i for i, n in enumerate(names)}
    vec = [0] * len(names)
    num = element.section.num if isinstance(element, GradedElement) else element.num
    den = element.section.den if isinstance(element, GradedElement) else element.den
    for label, e in den:
        form = y.form(label)
        if form.is_term():
            exps, _ = form.leading()
            for i, k in enumerate(exps):
                vec[i] -= e * k
        else:
            vec[index[label]] -= e
    for label in sorted(y.forms()):
        form = y.form(label)
        if form.is_term():
            continue
        while True:
            q = num.divide_exact(form)
            if q is None:
                break
            num = q
            vec[index[label]] += 1
    if not num.is_term():
        return None
    exps, _ = num.leading()
    for i, k in enumerate(exps):
        vec[i] += k
    return tuple(vec)


def extended_vector(y, element: GradedElement):
    v = factor_exponents(y, element)
    if v is None:
        return None
    return v + tuple(element.weight)


# ---------------------------------------------------------------------------
# step 12: quotient field witnesses


def _interior_ray(cone):
    """Lexicographically smallest interior Hilbert basis element."""
    try:
        hb = hilbert_basis(cone)
    except Exception:
        hb = ()
    interior = [h for h in hb if cone.contains_interior(h)]
    if interior:
        return min(interior)
    return _interior_point(cone)


def quotient_field_complete(d: PDivisor, elements, pool=(), max_iterations=64):
    """Ensure the function field generators are ratios of collected elements.

    Returns (added elements, witnesses).  Witnesses express each backend
    coordinate ratio as an integer combination of factorable elements.
    """
    y = d.variety
    gens = y.function_field_generators()
    if not gens:
        return [], ()
    kept = list(elements)
    reserve = [e for e in _dedupe(pool) if e.key() not in {x.key() for x in kept}]
    rho = _interior_ray(d.weight_cone)
    natoms = len(atom_names(y))
    rank = d.weight_cone.dim
    added = []
    j = 0

    def factorable(pool):
        usable, vectors = [], []
        for e in pool:
            v = extended_vector(y, e)
            if v is not None:
                usable.append(e)
                vectors.append(v)
        return usable, vectors

    def targets():
        for i_num, i_den in gens:
            t = [0] * natoms
            t[i_num] += 1
            t[i_den] -= 1
            yield (i_num, i_den), tuple(t) + tuple([0] * rank)

    while True:
        usable, vectors = factorable(kept)
        solved = []
        missing = None
        for pair, target in targets():
            combo = solve_in_lattice(target, vectors)
            if combo is None:
                missing = pair
                break
            solved.append(_format_witness(y, pair, usable, combo))
        if missing is None:
            return added, tuple(solved)
        # try again with the reserve pool and keep only what the witness uses
        usable2, vectors2 = factorable(kept + reserve)
        grabbed = set()
        feasible = True
        for pair, target in targets():
            combo = solve_in_lattice(target, vectors2)
            if combo is None:
                feasible = False
                break
            for e, c in zip(usable2, combo):
                if c:
                    grabbed.add(e.key())
        if feasible and grabbed:
            kept_keys = {x.key() for x in kept}
            moved = [e for e in reserve if e.key() in grabbed and e.key() not in kept_keys]
            if moved:
                kept.extend(moved)
                added.extend(moved)
                reserve = [e for e in reserve if e.key() not in grabbed]
                continue
        if j > max_iterations:
            raise IterationLimitExceeded(
                f"no quotient field witness for coordinate ratio {missing}"
            )
        u = tuple(j * x for x in rho)
        div = d.evaluate(u)
        kept_keys = {x.key() for x in kept}
        for s in sections_of_floor(y, div).elements:
            el = GradedElement(s, u)
            if el.key() not in kept_keys:
                kept.append(el)
                added.append(el)
        j += 1


def _format_witness(y, pair, usable, combo):
    i_num, i_den = pair
    parts = [
        f"(chi^{e.weight} elem)^{c}" for e, c in zip(usable, combo) if c
    ]
    lhs = f"{y.coordinates[i_num]}/{y.coordinates[i_den]}"
    return f"{lhs} = " + (" * ".join(parts) if parts else "1")


# ---------------------------------------------------------------------------
# pruning


def _nn_decompositions(u, weights, limit=20000):
    """All multisets of weights with nonnegative integer sum u.

    Weights live in a pointed cone, so the search tree is finite; a hard
    node limit guards degenerate inputs.  Pruning uses containment in
    the cone spanned by all weights, computed once.
    """
    weights = sorted(set(weights))
    if not weights:
        return [()] if not any(u) else []
    cone = cone_from_rays(weights, len(weights[0]))
    out = []
    nodes = [0]

    def rec(remaining, start, chosen):
        nodes[0] += 1
        if nodes[0] > limit:
            return
        if not any(remaining):
            out.append(tuple(chosen))
            return
        for i in range(start, len(weights)):
            w = weights[i]
            nxt = tuple(a - b for a, b in zip(remaining, w))
            if cone.contains(nxt):
                rec(nxt, i, chosen + [w])

    rec(tuple(u), 0, [])
    return out


def algebra_membership(y, element: GradedElement, gens, product_cap=600):
    """Whether the element's section is spanned by generator products."""
    u = element.weight
    by_weight = {}
    for g in gens:
        by_weight.setdefault(g.weight, []).append(g)
    decomps = _nn_decompositions(u, list(by_weight))
    products = []
    one = ffe(MPoly.constant(y.nvars, 1))
    for parts in decomps:
        partials = [one]
        for w in parts:
            partials = [p * g.section for p in partials for g in by_weight[w]]
            if len(partials) > product_cap:
                partials = partials[:product_cap]
        products.extend(partials)
        if len(products) > 4 * product_cap:
            break
    if not products:
        return False
    return in_span(y, element.section, products)


def reduce_generators(y, elements):
    """Sound pruning: drop an element when its section is provably in the
    subalgebra generated by the remaining ones."""
    kept = _sorted_elements(_dedupe(elements))
    # try to remove the "largest" elements first
    order = sorted(
        kept, key=lambda e: (sum(abs(x) for x in e.weight), e.key()), reverse=True
    )
    for e in order:
        rest = [g for g in kept if g.key() != e.key()]
        if algebra_membership(y, e, rest):
            kept = rest
    return _sorted_elements(kept)


# ---------------------------------------------------------------------------
# step 13: saturation or export


def _saturate_semigroup(vectors):
    """Hilbert basis of cone(vectors) in the lattice generated by them.

    Returns saturated vectors expressed back in the ambient coordinates.
    """
    span = hnf_basis(vectors)
    coords = [solve_in_lattice(v, span) for v in vectors]
    r = len(span)
    cone = cone_from_rays(coords, r)
    hb = []
    for h in hilbert_basis(cone):
        hb.append(
            tuple(
                sum(h[i] * span[i][j] for i in range(r)) for j in range(len(span[0]))
            )
        )
    return sorted(hb)


def _vector_to_element(y, vec, rank):
    """Rebuild a graded element from an extended exponent vector."""
    names = atom_names(y)
    weight = tuple(vec[len(names) :])
    nv = y.nvars
    num = MPoly.constant(nv, 1)
    den = {}
    for name, e in zip(names, vec[: len(names)]):
        if not e:
            continue
        if name.startswith("@"):
            i = y.coordinates.index(name[1:])
            if e > 0:
                num = num * MPoly.variable(nv, i) ** e
            else:
                # coordinate hyperplanes get a divisor label on demand
                label = f"coord:{name[1:]}"
                if label not in y.forms():
                    y.register_divisor(label, MPoly.variable(nv, i))
                den[label] = den.get(label, 0) - e
        elif e > 0:
            num = num * y.form(name) ** e
        else:
            den[name] = den.get(name, 0) - e
    return GradedElement(ffe(num, den.items()), weight)


def normalize_or_export(y, elements, max_iterations=64):
    """Saturate toric-like collections exactly; export everything else."""
    elements = _sorted_elements(_dedupe(elements))
    rank = len(elements[0].weight) if elements else 0
    if isinstance(y, PointBase):
        weights = [e.weight for e in elements]
        sat = _saturate_semigroup(weights)
        out = [GradedElement(y.one(), tuple(w)) for w in sat]
        status = "Normal" if sorted(weights) == sat else "SaturatedToric"
        return GeneratorSet(tuple(_sorted_elements(out)), status)
    vectors = [extended_vector(y, e) for e in elements]
    if all(v is not None for v in vectors) and _z_independent(vectors):
        sat = _saturate_semigroup(vectors)
        if sorted(set(vectors)) == sat:
            return GeneratorSet(tuple(elements), "Normal")
        out = [_vector_to_element(y, v, rank) for v in sat]
        return GeneratorSet(tuple(_sorted_elements(out)), "SaturatedToric")
    text = _presentation(y, elements)
    return GeneratorSet(tuple(elements), "ExportedForNormalization", presentation=text)


def _z_independent(vectors):
    # relations live in the left kernel: integer combinations of the
    # vectors themselves
    if not vectors:
        return True
    return not kernel_lattice(list(zip(*vectors)))


def _presentation(y, elements):
    """Plain-text presentation for an external normalization system."""
    lines = ["# presentation of the collected generator algebra"]
    lines.append(f"# {len(elements)} generators; variables g0..g{len(elements) - 1}")
    names = list(y.coordinates)
    for i, e in enumerate(elements):
        den = " * ".join(f"{l}^{k}" for l, k in e.section.den) or "1"
        lines.append(
            f"g{i} : weight {e.weight} section ({e.section.num.format(names)}) / ({den})"
        )
    vectors = []
    usable = []
    for i, e in enumerate(elements):
        v = extended_vector(y, e)
        if v is not None:
            vectors.append(v)
            usable.append(i)
    if vectors:
        lines.append("# toric relations among factorable generators")
        for row in kernel_lattice(list(zip(*vectors))):
            pos = " * ".join(
                f"g{usable[i]}^{c}" for i, c in enumerate(row) if c > 0
            )
            neg = " * ".join(
                f"g{usable[i]}^{-c}" for i, c in enumerate(row) if c < 0
            )
            lines.append(f"relation: {pos or '1'} = {neg or '1'}  (up to scalar)")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# full pipeline


def run_general(y, d: PDivisor, max_iterations=64) -> GeneratorSet:
    domain = linearity_subdivision(d)
    pool = []
    twist_report = []
    for cell in domain.cells:
        for simplex in triangulate(cell):
            sub = restrict(d, cone_from_rays(simplex, d.weight_cone.dim))
            elems, twists = zariski_generators(sub, simplex, max_iterations)
            pool.extend(elems)
            for w, s in sorted(twists.items()):
                twist_report.append(f"twist at weight {w}")
    pool = _dedupe(pool)
    pool.extend(weight_lattice_completion(d, pool, max_iterations))
    raw_count = len(pool)
    pruned = reduce_generators(y, pool)
    readded, witnesses = quotient_field_complete(d, pruned, pool, max_iterations)
    final = _sorted_elements(pruned + readded)
    result = normalize_or_export(y, final, max_iterations)
    report = (
        f"linearity cells: {len(domain.cells)}",
        f"subdivision rays: {len(domain.rays())}",
        f"raw pool size: {raw_count}",
        f"pruned size: {len(pruned)}",
        f"re-added for quotient field: {len(readded)}",
        f"normalization status: {result.normalization_status}",
    ) + tuple(twist_report)
    return GeneratorSet(
        result.elements,
        result.normalization_status,
        witnesses=witnesses,
        report=report,
        presentation=result.presentation,
    )

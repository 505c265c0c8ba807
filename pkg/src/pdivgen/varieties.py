"""Variety backends: divisors, global sections, function-field elements.

Three backends ship: a point, projective space, and the blow-up of the
plane in four points.  Sections are represented as fractions whose
denominators stay factored into the registered defining forms, so that
products and span tests reduce to linear algebra on numerators.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .intlinalg import rref
from .mpoly import MPoly, monomials_of_degree, multiplicity_at


class NonIntegralDivisor(ValueError):
    pass


class UnsupportedBackend(ValueError):
    pass


class NotTMoveable(ValueError):
    pass


# ---------------------------------------------------------------------------
# divisors


class QDivisor:
    """Finite formal rational combination of prime divisor labels."""

    def __init__(self, coeffs=None):
        self.coeffs = {}
        if coeffs:
            for k, v in coeffs.items():
                v = Fraction(v)
                if v:
                    self.coeffs[k] = v

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return QDivisor(out)

    def __mul__(self, scalar):
        return QDivisor({k: v * Fraction(scalar) for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __eq__(self, other):
        return isinstance(other, QDivisor) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def get(self, label):
        return self.coeffs.get(label, Fraction(0))

    def is_integral(self):
        return all(v.denominator == 1 for v in self.coeffs.values())

    def floor(self):
        """Label-wise floor; valid for squarefree defining forms."""
        return QDivisor({k: Fraction(v.numerator // v.denominator) for k, v in self.coeffs.items()})

    def is_zero(self):
        return not self.coeffs

    def format(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs):
            parts.append(f"{self.coeffs[k]} {k}")
        return " + ".join(parts)

    def __repr__(self):
        return f"QDivisor({self.format()})"


# ---------------------------------------------------------------------------
# function field elements


@dataclass(frozen=True)
class FunctionFieldElement:
    """num / prod(forms^exp); den kept factored by form label."""

    num: MPoly
    den: tuple  # sorted tuple of (label, positive exponent)

    def __mul__(self, other):
        d = dict(self.den)
        for k, e in other.den:
            d[k] = d.get(k, 0) + e
        return FunctionFieldElement(self.num * other.num, tuple(sorted(d.items())))

    def __pow__(self, k):
        num = self.num**k
        den = tuple(sorted((l, e * k) for l, e in self.den))
        return FunctionFieldElement(num, den)

    def normalized(self):
        return FunctionFieldElement(self.num.content_normalized(), self.den)

    def is_one(self):
        return not self.den and self.num.is_term() and self.num.total_degree() == 0


def ffe(num, den=()):
    return FunctionFieldElement(num, tuple(sorted((l, e) for l, e in den if e)))


@dataclass(frozen=True)
class SectionBasis:
    divisor: QDivisor
    elements: tuple

    @property
    def dimension(self):
        return len(self.elements)


# ---------------------------------------------------------------------------
# backends


class PointBase:
    """Y = a point; the only divisor is zero, sections are constants."""

    name = "point"
    nvars = 0
    coordinates = ()

    def forms(self):
        return {}

    def form(self, label):
        raise KeyError(label)

    def one(self):
        return ffe(MPoly.constant(0, 1))

    def function_field_generators(self):
        return ()


class ProjectiveSpace:
    """P^n with homogeneous coordinates; prime divisors are form labels."""

    name = "projective-space"

    def __init__(self, n, coordinates=None):
        self.n = n
        self.nvars = n + 1
        self.coordinates = tuple(coordinates) if coordinates else tuple(
            "xyzwvuts"[i] for i in range(n + 1)
        )
        self._forms = {}

    def register_divisor(self, label, form: MPoly):
        if not form.is_homogeneous() or not form:
            raise ValueError(f"defining form of {label} must be homogeneous and nonzero")
        self._forms[label] = form.content_normalized()

    def forms(self):
        return dict(self._forms)

    def form(self, label):
        return self._forms[label]

    def one(self):
        return ffe(MPoly.constant(self.nvars, 1))

    def coordinate_poly(self, i):
        return MPoly.variable(self.nvars, i)

    def function_field_generators(self):
        """x_i / x_n as (numerator index, denominator index) pairs."""
        return tuple((i, self.n) for i in range(self.n))

    def divisor_degree(self, d: QDivisor):
        return sum(c * self._forms[l].total_degree() for l, c in d.coeffs.items())


class BlowupOfP2:
    """Blow-up of P^2 in four points in general position (degree-5 del Pezzo).

    Labels: H (a line with declared form), E1..E4 (exceptional), E{ij}
    (strict transforms of the lines through point pairs).  The negative
    curves are hard-coded for this configuration.
    """

    name = "blowup-p2"

    def __init__(self, points, h_form: MPoly, coordinates=("x0", "x1", "x2")):
        if len(points) != 4:
            raise UnsupportedBackend("only the four-point blow-up is supported")
        self.points = tuple(tuple(Fraction(x) for x in p) for p in points)
        self.nvars = 3
        self.coordinates = tuple(coordinates)
        self._forms = {"H": h_form.content_normalized()}
        self.exceptional = tuple(f"E{i}" for i in range(1, 5))
        for i, j in combinations(range(4), 2):
            label = f"E{i + 1}{j + 1}"
            self._forms[label] = self._line_through(self.points[i], self.points[j])

    def _line_through(self, p, q):
        # coefficients of the line = cross product of the two points
        a = p[1] * q[2] - p[2] * q[1]
        b = p[2] * q[0] - p[0] * q[2]
        c = p[0] * q[1] - p[1] * q[0]
        form = MPoly(3, {(1, 0, 0): a, (0, 1, 0): b, (0, 0, 1): c})
        return form.content_normalized()

    def register_divisor(self, label, form: MPoly):
        self._forms[label] = form.content_normalized()

    def forms(self):
        return dict(self._forms)

    def form(self, label):
        return self._forms[label]

    def one(self):
        return ffe(MPoly.constant(3, 1))

    def function_field_generators(self):
        return ((0, 2), (1, 2))

    def class_vector(self, label):
        """Class in the basis (H, E1..E4), as an integer 5-tuple."""
        if label in self.exceptional:
            i = int(label[1])
            return tuple(1 if k == i else 0 for k in range(5))
        form = self._forms.get(label)
        if form is None:
            raise KeyError(label)
        d = form.total_degree()
        mults = [multiplicity_at(form, p) for p in self.points]
        return (d, *(-m for m in mults))

    @staticmethod
    def intersect(c1, c2):
        return c1[0] * c2[0] - sum(a * b for a, b in zip(c1[1:], c2[1:]))

    def divisor_class(self, d: QDivisor):
        out = [Fraction(0)] * 5
        for l, c in d.coeffs.items():
            for k, v in enumerate(self.class_vector(l)):
                out[k] += c * v
        return tuple(out)

    def negative_curve_classes(self):
        curves = [self.class_vector(l) for l in self.exceptional]
        curves += [self.class_vector(f"E{i + 1}{j + 1}") for i, j in combinations(range(4), 2)]
        return curves

    def euler_characteristic(self, cls):
        """chi(c) = (c^2 - c.K)/2 + 1 with K = -3H + E1 + ... + E4."""
        k = (-3, 1, 1, 1, 1)
        return Fraction(self.intersect(cls, cls) - self.intersect(cls, k), 2) + 1


# ---------------------------------------------------------------------------
# sections


def sections(y, d: QDivisor) -> SectionBasis:
    if not d.is_integral():
        raise NonIntegralDivisor(d.format())
    if isinstance(y, PointBase):
        if any(v < 0 for v in d.coeffs.values()):
            return SectionBasis(d, ())
        return SectionBasis(d, (y.one(),))
    if isinstance(y, ProjectiveSpace):
        return _sections_projective(y, d)
    if isinstance(y, BlowupOfP2):
        return _sections_blowup(y, d)
    raise UnsupportedBackend(type(y).__name__)


def sections_of_floor(y, d: QDivisor) -> SectionBasis:
    """Sections of the floor; the H^0 of a rational divisor."""
    return sections(y, d.floor())


def _sections_projective(y, d):
    forced = MPoly.constant(y.nvars, 1)
    den = []
    den_deg = 0
    for l, c in d.coeffs.items():
        f = y.form(l)
        c = int(c)
        if c > 0:
            den.append((l, c))
            den_deg += c * f.total_degree()
        else:
            forced = forced * f ** (-c)
    # the numerator degree matches the denominator; the forced factor
    # uses up part of it
    free_deg = den_deg - forced.total_degree()
    if free_deg < 0:
        return SectionBasis(d, ())
    elems = []
    for e in monomials_of_degree(y.nvars, free_deg):
        num = MPoly.monomial(y.nvars, e) * forced
        elems.append(ffe(num, den))
    return SectionBasis(d, tuple(elems))


def _sections_blowup(y, d):
    forced = MPoly.constant(3, 1)
    den = []
    forced_mults = [0, 0, 0, 0]
    den_deg = 0
    exc = [0, 0, 0, 0]
    for l, c in d.coeffs.items():
        c = int(c)
        if l in y.exceptional:
            exc[int(l[1]) - 1] = c
            continue
        f = y.form(l)
        if c > 0:
            den.append((l, c))
            den_deg += c * f.total_degree()
        else:
            forced = forced * f ** (-c)
            for i, p in enumerate(y.points):
                forced_mults[i] += -c * multiplicity_at(f, p)
    # required multiplicities at the four points for the free factor
    req = []
    for i, p in enumerate(y.points):
        m = -exc[i]
        for l, c in d.coeffs.items():
            if l in y.exceptional or int(c) <= 0:
                continue
            m += int(c) * multiplicity_at(y.form(l), p)
        req.append(m - forced_mults[i])
    free_deg = den_deg - forced.total_degree()
    if free_deg < 0:
        return SectionBasis(d, ())
    basis = _forms_with_multiplicities(y, free_deg, req)
    elems = tuple(ffe(g * forced, den) for g in basis)
    return SectionBasis(d, elems)


def _forms_with_multiplicities(y, degree, req_mults):
    """Degree-d forms vanishing to the given orders at the four points."""
    monos = monomials_of_degree(3, degree)
    index = {e: i for i, e in enumerate(monos)}
    rows = []
    for p, m in zip(y.points, req_mults):
        if m <= 0:
            continue
        chart = next(i for i, x in enumerate(p) if x)
        shift_pt = [Fraction(p[i], p[chart]) if i != chart else Fraction(0) for i in range(3)]
        # condition: all Taylor coefficients of total degree < m vanish
        shifted = []
        for e in monos:
            mono = MPoly.monomial(3, e).dehomogenize(chart, 1).shift(shift_pt)
            shifted.append(mono)
        cond_exps = sorted(
            {
                ex
                for mp in shifted
                for ex in mp.terms
                if sum(ex) < m
            }
        )
        for ce in cond_exps:
            rows.append([mp.terms.get(ce, Fraction(0)) for mp in shifted])
    if not rows:
        kernel = [[Fraction(int(i == j)) for j in range(len(monos))] for i in range(len(monos))]
    else:
        kernel = _frac_kernel_basis(rows)
    basis = []
    for vec in kernel:
        g = MPoly(3, {e: vec[i] for e, i in index.items()})
        basis.append(g.content_normalized())
    return basis


def _frac_kernel_basis(rows):
    n = len(rows[0])
    red, pivots = rref(rows)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for j in free:
        vec = [Fraction(0)] * n
        vec[j] = Fraction(1)
        for r, pc in zip(red, pivots):
            vec[pc] = -r[j]
        basis.append(vec)
    return basis


# ---------------------------------------------------------------------------
# base point freeness, classes, invariantization


def is_basepoint_free(y, d: QDivisor) -> bool:
    if not d.is_integral():
        raise NonIntegralDivisor(d.format())
    if isinstance(y, PointBase):
        return all(v >= 0 for v in d.coeffs.values())
    if isinstance(y, ProjectiveSpace):
        basis = sections(y, d)
        if not basis.elements:
            return False
        # every numerator carries the forced factor from the negative
        # coefficients; the residual monomials of a full degree have no
        # common projective zero, so the base locus is exactly the zero
        # set of that common factor
        return _common_factor_is_constant(y, d)
    if isinstance(y, BlowupOfP2):
        cls = y.divisor_class(d)
        if cls[0] < 0:
            return False
        return all(y.intersect(cls, c) >= 0 for c in y.negative_curve_classes())
    raise UnsupportedBackend(type(y).__name__)


def _common_factor_is_constant(y, d):
    forced = MPoly.constant(y.nvars, 1)
    for l, c in d.coeffs.items():
        if c < 0:
            forced = forced * y.form(l) ** int(-c)
    return forced.total_degree() == 0


def linear_equivalence_class(y, d: QDivisor):
    if isinstance(y, PointBase):
        return ()
    if isinstance(y, ProjectiveSpace):
        return (y.divisor_degree(d),)
    if isinstance(y, BlowupOfP2):
        return y.divisor_class(d)
    raise UnsupportedBackend(type(y).__name__)


def _is_invariant_form(form: MPoly) -> bool:
    return form.is_term()


def _balanced_monomial(nvars, degree):
    """Most balanced monomial exponent of the degree; lex-largest on ties."""
    best = None
    for e in monomials_of_degree(nvars, degree):
        key = (tuple(sorted(e, reverse=True)), tuple(-x for x in e))
        if best is None or key < best[0]:
            best = (key, e)
    return best[1]


def invariantizing_section(y, d: QDivisor) -> FunctionFieldElement:
    """A section s with D + Div(s) supported on torus-invariant divisors."""
    if isinstance(y, PointBase):
        return y.one()
    if not isinstance(y, ProjectiveSpace):
        raise UnsupportedBackend("torus actions are only available on projective space")
    den = []
    deg = 0
    for l, c in d.coeffs.items():
        if _is_invariant_form(y.form(l)):
            continue
        if c.denominator != 1:
            raise NotTMoveable(
                f"non-integral coefficient {c} on non-invariant divisor {l}"
            )
        c = int(c)
        if c:
            den.append((l, c))
            deg += c * y.form(l).total_degree()
    if not den:
        return y.one()
    if deg < 0:
        raise NotTMoveable("negative degree on the non-invariant part")
    e = _balanced_monomial(y.nvars, deg)
    num = MPoly.monomial(y.nvars, e)
    return ffe(num, [(l, c) for l, c in den if c > 0]) if all(
        c > 0 for _, c in den
    ) else _invariantizing_general(y, num, den)


def _invariantizing_general(y, num, den):
    pos = [(l, c) for l, c in den if c > 0]
    for l, c in den:
        if c < 0:
            num = num * y.form(l) ** (-c)
    return ffe(num, pos)


def pullback_to_blowup(d: QDivisor, p2: ProjectiveSpace, blowup: BlowupOfP2) -> QDivisor:
    """Total-transform divisor of a plane divisor on the blow-up."""
    out = QDivisor()
    known = {
        tuple(sorted(f.content_normalized().terms.items())): l
        for l, f in blowup.forms().items()
    }
    for l, c in d.coeffs.items():
        f = p2.form(l).content_normalized()
        key = tuple(sorted(f.terms.items()))
        strict = known.get(key)
        if strict is None:
            blowup.register_divisor(l, f)
            strict = l
        part = QDivisor({strict: c})
        for i, p in enumerate(blowup.points):
            m = multiplicity_at(f, p)
            if m:
                part = part + QDivisor({f"E{i + 1}": c * m})
        out = out + part
    return out


# ---------------------------------------------------------------------------
# span tests on section elements


def numerator_vectors(y, elements, extra=()):
    """Numerators over the common factored denominator, as coeff vectors.

    Returns (vectors, monomial index) for elements + extra combined.
    """
    elems = list(elements) + list(extra)
    common = {}
    for e in elems:
        for l, k in e.den:
            common[l] = max(common.get(l, 0), k)
    nums = []
    for e in elems:
        num = e.num
        own = dict(e.den)
        for l, k in common.items():
            deficit = k - own.get(l, 0)
            if deficit:
                num = num * y.form(l) ** deficit
        nums.append(num)
    monos = sorted({ex for n in nums for ex in n.terms}, reverse=True)
    index = {ex: i for i, ex in enumerate(monos)}
    vecs = [n.coeff_vector(index) for n in nums]
    return vecs, index


def in_span(y, target, elements) -> bool:
    """Whether target lies in the rational span of the elements."""
    if not elements:
        return not target.num
    vecs, _ = numerator_vectors(y, elements, (target,))
    base = vecs[:-1]
    _, piv_without = rref(base)
    _, piv_with = rref(vecs)
    return len(piv_with) == len(piv_without)


def span_dimension(y, elements) -> int:
    if not elements:
        return 0
    vecs, _ = numerator_vectors(y, elements)
    return len(rref(vecs)[1])

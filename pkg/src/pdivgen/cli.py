"""Batch front end: job descriptions in, deterministic reports out.

A job file is sectioned key/value text with exact rational literals.
Sections: [variety], [pdivisor], optional [torus], optional [cone], and
[job].  See the README for the full format.
"""

import argparse
import ast
import sys
from fractions import Fraction

from .coxs5 import run_cox
from .engine import run_general
from .intlinalg import primitive
from .mpoly import MPoly
from .pdivisor import (
    IterationLimitExceeded,
    NotSubcone,
    PDivisor,
    WeightOutsideCone,
    linearity_subdivision,
    validate,
)
from .polyhedra import QCone, cone_from_rays, dual_cone, hilbert_basis, tailed_polyhedron
from .torus import UnsupportedBase, run_torus, standard_p2_fan_record
from .varieties import (
    BlowupOfP2,
    NotTMoveable,
    PointBase,
    ProjectiveSpace,
    UnsupportedBackend,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_SEMANTIC = 3
EXIT_ITERATION = 4
EXIT_BACKEND = 5

PIPELINES = ("general", "torus", "cox-s5", "hilbert", "subdivide", "eval")


class JobParseError(ValueError):
    def __init__(self, line, col, message):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class JobSemanticError(ValueError):
    pass


class JobDescription:
    """Parsed job file: per-section key/value pairs plus line numbers."""

    def __init__(self, sections, lines):
        self.sections = sections
        self.lines = lines

    def get(self, section, key, default=None):
        return self.sections.get(section, {}).get(key, default)

    def require(self, section, key):
        value = self.get(section, key)
        if value is None:
            raise JobSemanticError(f"missing key '{key}' in section [{section}]")
        return value


def parse_job(text) -> JobDescription:
    sections = {}
    line_nos = {}
    current = None
    seen_content = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        seen_content = True
        stripped = line.strip()
        col = len(line) - len(line.lstrip()) + 1
        if stripped.startswith("["):
            if not stripped.endswith("]") or len(stripped) < 3:
                raise JobParseError(line_no, col, "malformed section header")
            current = stripped[1:-1].strip()
            sections.setdefault(current, {})
            continue
        if current is None:
            raise JobParseError(line_no, col, "content before any section header")
        if "=" not in stripped:
            raise JobParseError(line_no, col, "expected 'key = value'")
        key, value = stripped.split("=", 1)
        key = key.strip()
        value = value.strip()
        if not key:
            raise JobParseError(line_no, col, "empty key")
        if key in sections[current]:
            raise JobParseError(line_no, col, f"duplicate key '{key}'")
        sections[current][key] = value
        line_nos[(current, key)] = line_no
    if not seen_content:
        raise JobParseError(1, 1, "empty job description")
    return JobDescription(sections, line_nos)


def format_job(job: JobDescription) -> str:
    """Canonical writer; parse(format_job(parse(text))) round-trips."""
    out = []
    for section in sorted(job.sections):
        out.append(f"[{section}]")
        for key in sorted(job.sections[section]):
            out.append(f"{key} = {job.sections[section][key]}")
        out.append("")
    return "\n".join(out)


# ---------------------------------------------------------------------------
# value parsers


def parse_fraction(text):
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise JobSemanticError(f"bad rational literal '{text.strip()}': {exc}")


def parse_vector(text):
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise JobSemanticError(f"expected a parenthesized vector, got '{text}'")
    return tuple(parse_fraction(p) for p in text[1:-1].split(","))


def parse_vector_list(text):
    vectors = []
    depth = 0
    start = None
    for i, ch in enumerate(text):
        if ch == "(":
            if depth == 0:
                start = i
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise JobSemanticError("unbalanced parentheses in vector list")
            if depth == 0:
                vectors.append(parse_vector(text[start : i + 1]))
        elif depth == 0 and not ch.isspace():
            raise JobSemanticError(f"unexpected character '{ch}' in vector list")
    if depth != 0:
        raise JobSemanticError("unbalanced parentheses in vector list")
    if not vectors:
        raise JobSemanticError("empty vector list")
    widths = {len(v) for v in vectors}
    if len(widths) != 1:
        raise JobSemanticError("vectors of mixed dimensions")
    return vectors


def parse_polynomial(text, names):
    """Polynomial expression over the named coordinates, via the ast module."""
    try:
        node = ast.parse(text, mode="eval").body
    except SyntaxError as exc:
        raise JobSemanticError(f"bad polynomial '{text}': {exc.msg}")
    nvars = len(names)
    index = {n: i for i, n in enumerate(names)}

    def ev(n):
        if isinstance(n, ast.BinOp):
            if isinstance(n.op, ast.Add):
                return ev(n.left) + ev(n.right)
            if isinstance(n.op, ast.Sub):
                return ev(n.left) - ev(n.right)
            if isinstance(n.op, ast.Mult):
                return ev(n.left) * ev(n.right)
            if isinstance(n.op, ast.Pow):
                e = n.right
                if not (isinstance(e, ast.Constant) and isinstance(e.value, int)):
                    raise JobSemanticError("exponents must be integer literals")
                return ev(n.left) ** e.value
            if isinstance(n.op, ast.Div):
                den = n.right
                if isinstance(den, ast.Constant) and isinstance(den.value, int):
                    return ev(n.left) * MPoly.constant(nvars, Fraction(1, den.value))
                raise JobSemanticError("division only by integer literals")
        if isinstance(n, ast.UnaryOp):
            if isinstance(n.op, ast.USub):
                return -ev(n.operand)
            if isinstance(n.op, ast.UAdd):
                return ev(n.operand)
        if isinstance(n, ast.Constant) and isinstance(n.value, int):
            return MPoly.constant(nvars, Fraction(n.value))
        if isinstance(n, ast.Name):
            if n.id not in index:
                raise JobSemanticError(f"unknown coordinate '{n.id}'")
            return MPoly.variable(nvars, index[n.id])
        raise JobSemanticError(f"unsupported expression in polynomial '{text}'")

    return ev(node)


def parse_bool(text):
    t = text.strip().lower()
    if t in ("true", "yes", "1"):
        return True
    if t in ("false", "no", "0"):
        return False
    raise JobSemanticError(f"bad boolean literal '{text}'")


# ---------------------------------------------------------------------------
# semantic build


def build_variety(job: JobDescription):
    backend = job.require("variety", "backend")
    if backend == "point":
        return PointBase()
    if backend == "projective-space":
        coords = tuple(job.require("variety", "coordinates").split())
        n = int(job.get("variety", "dim", str(len(coords) - 1)))
        if n != len(coords) - 1:
            raise JobSemanticError("dim must equal number of coordinates minus one")
        y = ProjectiveSpace(n, coords)
        _register_forms(job, y, coords)
        return y
    if backend == "blowup-p2":
        coords = tuple(job.get("variety", "coordinates", "x0 x1 x2").split())
        points = parse_vector_list(job.require("variety", "points"))
        forms = _collect_forms(job, coords)
        if "H" not in forms:
            raise JobSemanticError("blowup-p2 needs form.H, the line to blow down to")
        y = BlowupOfP2(points, forms.pop("H"), coords)
        for label, poly in sorted(forms.items()):
            y.register_divisor(label, poly)
        return y
    raise UnsupportedBackend(f"unknown backend '{backend}'")


def _collect_forms(job, coords):
    forms = {}
    for key, value in job.sections.get("variety", {}).items():
        if key.startswith("form."):
            forms[key[5:]] = parse_polynomial(value, coords)
    return forms


def _register_forms(job, y, coords):
    for label, poly in sorted(_collect_forms(job, coords).items()):
        y.register_divisor(label, poly)


def build_pdivisor(job: JobDescription, y) -> PDivisor:
    section = job.sections.get("pdivisor")
    if section is None:
        raise JobSemanticError("missing section [pdivisor]")
    rays = parse_vector_list(job.require("pdivisor", "rays"))
    dim = len(rays[0])
    omega = cone_from_rays(rays, dim)
    tail = dual_cone(omega)
    coeffs = {}
    for key, value in section.items():
        if not key.startswith("coefficient."):
            continue
        label = key[len("coefficient.") :]
        vertices = parse_vector_list(value)
        tail_key = f"tail.{label}"
        tail_rays = (
            parse_vector_list(section[tail_key]) if tail_key in section else tail.rays
        )
        coeffs[label] = tailed_polyhedron(vertices, tail_rays, dim)
    if not coeffs:
        raise JobSemanticError("no coefficient.<label> entries in [pdivisor]")
    try:
        return PDivisor(y, omega, coeffs)
    except ValueError as exc:
        raise JobSemanticError(str(exc))


def build_cone(job: JobDescription) -> QCone:
    rays = parse_vector_list(job.require("cone", "rays"))
    cone = cone_from_rays(rays, len(rays[0]))
    if parse_bool(job.get("cone", "dualize", "false")):
        cone = dual_cone(cone)
    return cone


# ---------------------------------------------------------------------------
# pipelines


def _generator_lines(elements, y):
    names = list(getattr(y, "coordinates", ()))
    out = []
    for e in elements:
        den = " * ".join(f"{l}^{k}" for l, k in e.section.den) or "1"
        num = e.section.num.format(names) if names else "1"
        out.append(f"weight {tuple(e.weight)}  section ({num}) / ({den})")
    return out


def _pipeline_eval(job, y, d):
    weight = parse_vector(job.require("job", "weight"))
    div = d.evaluate(weight)
    pretty = "(" + ", ".join(str(x) for x in weight) + ")"
    return [f"D({pretty}) = {div.format()}"], []


def _pipeline_subdivide(job, y, d):
    domain = linearity_subdivision(d)
    lines = [
        f"linearity subdivision: {len(domain.cells)} maximal cones, "
        f"{len(domain.rays())} rays"
    ]
    for i, cell in enumerate(sorted(domain.cells, key=lambda c: c.rays)):
        lines.append(f"cone {i}: rays {tuple(sorted(cell.rays))}")
    lines.append(f"rays: {tuple(sorted(primitive(r) for r in domain.rays()))}")
    return lines, []


def _pipeline_hilbert(job):
    cone = build_cone(job)
    basis = sorted(hilbert_basis(cone))
    lines = [f"hilbert basis: {len(basis)} elements"]
    lines.extend(str(tuple(v)) for v in basis)
    return lines, []


def _pipeline_general(job, y, d, max_iterations):
    result = run_general(y, d, max_iterations)
    lines = list(result.report)
    lines.append(f"{len(result.elements)} generators")
    lines.append(f"normalization status: {result.normalization_status}")
    lines.extend(_generator_lines(result.elements, y))
    if result.presentation:
        lines.append(result.presentation.rstrip("\n"))
    return lines, _generator_lines(result.elements, y)


def _pipeline_torus(job, y, d, max_iterations):
    record_name = job.get("torus", "record", "standard-p2")
    if record_name != "standard-p2":
        raise UnsupportedBackend(f"unknown torus record '{record_name}'")
    if not isinstance(y, ProjectiveSpace) or y.n != 2:
        raise UnsupportedBackend("the standard torus record needs the plane")
    record = standard_p2_fan_record(y)
    result = run_torus(y, d, record, max_iterations)
    lines = list(result.report)
    lines.append(f"{len(result.elements)} generators")
    lines.append(f"normalization status: {result.normalization_status}")
    degrees = sorted({e.weight for e in result.elements})
    lines.append(f"degrees: {degrees}")
    gen_lines = _generator_lines(result.elements, y)
    lines.extend(gen_lines)
    return lines, gen_lines


def _pipeline_cox(max_iterations):
    result = run_cox(max_iterations)
    lines = list(result.report)
    lines.append(f"{len(result.cells)} subcones")
    lines.append(f"{len(result.rays)} rays")
    lines.append(f"{len(result.reduced_rays)} rays after reduction")
    lines.append(f"{len(result.generators.elements)} generators")
    lines.append(result.presentation.rstrip("\n"))
    names = ["x0", "x1", "x2"]
    gen_lines = []
    for e in result.generators.elements:
        den = " * ".join(f"{l}^{k}" for l, k in e.section.den) or "1"
        gen_lines.append(
            f"weight {tuple(e.weight)}  section ({e.section.num.format(names)}) / ({den})"
        )
    lines.extend(gen_lines)
    return lines, gen_lines


def _verify_lines(y, d):
    """Quick inline property checks on the parsed divisor."""
    checks = []
    omega = d.weight_cone
    back = dual_cone(dual_cone(omega))
    checks.append(("dual-cone involution", back.rays == omega.rays))
    samples = list(omega.rays)[:3]
    ok = True
    for a in samples:
        for b in samples:
            s = tuple(x + z for x, z in zip(a, b))
            left = d.evaluate(s)
            right = d.evaluate(a) + d.evaluate(b)
            for label in d.coefficients:
                if left.get(label) < right.get(label):
                    ok = False
    checks.append(("superadditivity at ray pairs", ok))
    lines = []
    for name, good in checks:
        lines.append(f"verify {name}: {'ok' if good else 'FAILED'}")
    if not all(good for _, good in checks):
        raise JobSemanticError("inline verification failed")
    return lines


# ---------------------------------------------------------------------------
# driver


def run_job(job: JobDescription, args) -> int:
    pipeline = args.pipeline or job.get("job", "pipeline")
    if pipeline is None:
        raise JobSemanticError("no pipeline given (job section or --pipeline)")
    if pipeline not in PIPELINES:
        raise JobSemanticError(f"unknown pipeline '{pipeline}'")
    stage = "setup"
    try:
        lines = []
        gen_lines = []
        if pipeline == "cox-s5":
            stage = "cox-s5"
            lines, gen_lines = _pipeline_cox(args.max_iterations)
        elif pipeline == "hilbert":
            stage = "hilbert"
            lines, gen_lines = _pipeline_hilbert(job)
        else:
            stage = "variety"
            y = build_variety(job)
            stage = "pdivisor"
            d = build_pdivisor(job, y)
            if args.verify:
                stage = "verify"
                lines.extend(_verify_lines(y, d))
            stage = pipeline
            if pipeline == "eval":
                more, gen_lines = _pipeline_eval(job, y, d)
            elif pipeline == "subdivide":
                more, gen_lines = _pipeline_subdivide(job, y, d)
            elif pipeline == "general":
                more, gen_lines = _pipeline_general(job, y, d, args.max_iterations)
            else:
                more, gen_lines = _pipeline_torus(job, y, d, args.max_iterations)
            lines.extend(more)
    except (JobParseError, JobSemanticError, IterationLimitExceeded) as exc:
        raise type(exc)(f"[stage {stage}] {exc}") from exc
    except (
        UnsupportedBackend,
        UnsupportedBase,
        NotTMoveable,
        NotSubcone,
        WeightOutsideCone,
    ) as exc:
        raise type(exc)(f"[stage {stage}] {exc}") from exc
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        if gen_lines:
            with open(args.output + ".gens.txt", "w") as fh:
                fh.write("\n".join(gen_lines) + "\n")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_arg_parser():
    parser = argparse.ArgumentParser(
        prog="pdivgen",
        description="Generators of multigraded section algebras of polyhedral divisors",
    )
    parser.add_argument("jobfile", nargs="?", help="job description file")
    parser.add_argument("--pipeline", choices=PIPELINES, default=None)
    parser.add_argument("--output", default=None, help="report file (default stdout)")
    parser.add_argument("--max-iterations", type=int, default=64)
    parser.add_argument(
        "--threads", type=int, default=1, help="bound on internal parallelism"
    )
    parser.add_argument(
        "--verify", action="store_true", help="run property checks inline"
    )
    return parser


def main(argv=None) -> int:
    args = build_arg_parser().parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return EXIT_SEMANTIC
    try:
        if args.pipeline == "cox-s5" and args.jobfile is None:
            job = JobDescription({"job": {"pipeline": "cox-s5"}}, {})
        else:
            if args.jobfile is None:
                print("error: a job file is required", file=sys.stderr)
                return EXIT_SEMANTIC
            with open(args.jobfile) as fh:
                text = fh.read()
            job = parse_job(text)
        return run_job(job, args)
    except JobParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (JobSemanticError, NotSubcone, WeightOutsideCone, NotTMoveable) as exc:
        print(f"semantic error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    except IterationLimitExceeded as exc:
        print(f"iteration cap: {exc}", file=sys.stderr)
        return EXIT_ITERATION
    except (UnsupportedBackend, UnsupportedBase) as exc:
        print(f"unsupported backend: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except FileNotFoundError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())

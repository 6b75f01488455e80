#!/usr/bin/env python3
"""
schemas.py - JSON payloads for the genred verbs and the report writers.

Every payload is a pydantic model holding the raw text of its scalars;
`build` methods turn them into RatFun/Form/GeneralizedField/LinearGCS values
over a VarTable, so parse errors and construction invariants surface as
ParseError and InvariantError (exit code 2).

Scalars are strings in the ratfun grammar ("z0^2/(1+z0*zb0)", "1/2i") or
plain integers. A Form is a list of terms {"coeff": "...", "mono": ["dz0",
"dzb1"]}; a generalized field is {"vec": {"z0": "..."}, "cov": [terms]};
split-space vectors and matrices hold constants in the basis
(∂z0..∂z{n-1}, dz0..dz{n-1}).
"""

import json
import logging
import sys
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Union

import pandas as pd
from pydantic import BaseModel, Field, ValidationError

from actions import (
    CourantAlgebraData,
    ExtendedAction,
    LieAlgebraData,
    hemisemidirect,
    moment_action,
    symplectic_extension,
)
from errors import IoError, ParseError
from forms import Form, GeneralizedField, TwistForm, generator_name
from ratfun import VarTable, parse_scalar
from split_linalg import (
    LinearGCS,
    SplitSpace,
    b_conjugate,
    gcs_from_complex,
    gcs_from_symplectic,
)

logger = logging.getLogger(__name__)

# ── CONSTANTS ──────────────────────────────────────────────────────────────
FIXTURE_DIR = Path(__file__).resolve().parent / "fixtures"
CHECK_COLUMNS = ["name", "verdict", "residual", "detail"]

Scalar = Union[int, str]

_CONSTANT_TABLE = VarTable(1, aux=(), real=True)


# ── scalars, forms and fields ──────────────────────────────────────────────

def parse_constant(text):
    """A Gaussian rational from scalar text; variables are rejected."""
    value = parse_scalar(_CONSTANT_TABLE, str(text))
    if not value.is_constant():
        raise ParseError(f"expected a constant, got {text!r}")
    return value.constant_value()


def parse_matrix(rows, field):
    out = [[field.convert(parse_constant(x)) for x in row] for row in rows]
    if any(len(row) != len(out) for row in out):
        raise ParseError(f"matrix must be square, got row lengths {[len(r) for r in out]}")
    return out


def parse_vectors(rows, dim, field):
    out = []
    for k, row in enumerate(rows):
        if len(row) != dim:
            raise ParseError(f"vector {k} has {len(row)} entries, expected {dim}")
        out.append(tuple(field.convert(parse_constant(x)) for x in row))
    return out


def parse_points(rows, table):
    points = []
    for k, row in enumerate(rows):
        if len(row) != table.n:
            raise ParseError(f"point {k} has {len(row)} coordinates, expected {table.n}")
        points.append(tuple(parse_constant(x) for x in row))
    return points


class VarsModel(BaseModel):
    n: int = Field(ge=1, description="Number of coordinates z0..z{n-1}")
    aux: List[str] = Field(default_factory=list, description="Auxiliary variable names")
    real: bool = Field(default=False, description="Real chart: no zb variables")

    def table(self):
        return VarTable(self.n, aux=tuple(self.aux), real=self.real)


class TermModel(BaseModel):
    coeff: Scalar = Field(default="1", description="Coefficient in the scalar grammar")
    mono: List[str] = Field(default_factory=list, description="Generators such as dz0, dzb1, du")


def _generator(table, name):
    if not name.startswith("d"):
        raise ParseError(f"generator {name!r} must be the differential of a variable")
    try:
        return table.index(name[1:])
    except KeyError as e:
        raise ParseError(f"unknown generator {name!r}") from e


def form_from_terms(table, terms):
    """Sum of coeff · d(mono); a repeated generator raises InvariantError."""
    out = Form.zero(table)
    for term in terms:
        names = [table.names[_generator(table, g)] for g in term.mono]
        out = out + Form.monomial(table, names, parse_scalar(table, str(term.coeff)))
    return out


def parse_function(table, text):
    return parse_scalar(table, str(text))


class FieldModel(BaseModel):
    vec: Dict[str, Scalar] = Field(default_factory=dict, description="Components along ∂_v")
    cov: List[TermModel] = Field(default_factory=list, description="1-form part")

    def build(self, table):
        vec = {}
        for name, value in self.vec.items():
            try:
                idx = table.index(name)
            except KeyError as e:
                raise ParseError(f"unknown variable {name!r} in a vector part") from e
            vec[idx] = parse_function(table, value)
        return GeneralizedField(table, vec, form_from_terms(table, self.cov))


def twist(table, terms):
    return TwistForm(form_from_terms(table, terms))


# ── serialization ──────────────────────────────────────────────────────────

def form_terms(form):
    """JSON-ready terms of a Form in canonical order."""
    return [{"coeff": str(c), "mono": [generator_name(form.table, i) for i in m]}
            for m, c in form.sorted_terms()]


def field_json(v):
    return {"vec": {v.table.names[k]: str(c) for k, c in sorted(v.vec.items())},
            "cov": form_terms(v.cov)}


def subspace_json(sub):
    return {"rank": sub.rank, "rows": sub.text_rows()}


def checks_frame(report):
    rows = [[c.name, c.verdict.value, c.residual or "", c.detail] for c in report.checks]
    return pd.DataFrame(rows, columns=CHECK_COLUMNS)


# ── payloads ───────────────────────────────────────────────────────────────

class AxiomsPayload(BaseModel):
    vars: VarsModel
    H: List[TermModel] = Field(default_factory=list, description="Closed twisting 3-form")
    sections: List[FieldModel] = Field(min_length=3, description="Sections tested pairwise and triplewise")
    f: Scalar = Field(description="Test function for the Leibniz rule")


class BracketPayload(BaseModel):
    vars: VarsModel
    H: List[TermModel] = Field(default_factory=list)
    v: FieldModel
    w: FieldModel
    expected: Optional[FieldModel] = None


class MukaiPayload(BaseModel):
    vars: VarsModel
    phi: List[TermModel]
    psi: List[TermModel]
    B: Optional[List[TermModel]] = Field(default=None, description="2-form for the B-invariance check")
    expected: Optional[List[TermModel]] = None


class LinearPayload(BaseModel):
    n: int = Field(ge=1, description="V = R^n, E = V ⊕ V*")
    K: List[List[Scalar]] = Field(description="Spanning vectors of K in E")
    D: Optional[List[List[Scalar]]] = Field(default=None, description="Dirac structure to reduce")
    W: Optional[List[List[Scalar]]] = Field(default=None, description="Tangent space of a submanifold, rows in V")


class StructureKind(str, Enum):
    SYMPLECTIC = "symplectic"
    COMPLEX = "complex"
    MATRIX = "matrix"


class StructureModel(BaseModel):
    kind: StructureKind
    matrix: List[List[Scalar]] = Field(description="ω[a][b], I or J depending on kind")
    b: Optional[List[List[Scalar]]] = Field(default=None, description="B-field b[a][b] applied as e^{−b} J e^{b}")

    def build(self, field):
        m = parse_matrix(self.matrix, field)
        if self.kind == StructureKind.SYMPLECTIC:
            gcs = gcs_from_symplectic(m, field)
        elif self.kind == StructureKind.COMPLEX:
            gcs = gcs_from_complex(m, field)
        else:
            if len(m) % 2:
                raise ParseError("a generalized complex structure needs an even-sized matrix")
            gcs = LinearGCS(m, SplitSpace.standard(len(m) // 2, field))
        if self.b is not None:
            gcs = b_conjugate(gcs, parse_matrix(self.b, field))
        return gcs


class GCSPayload(BaseModel):
    J: StructureModel
    K: List[List[Scalar]]
    expected_type: Optional[int] = None
    expected_span: Optional[List[List[Scalar]]] = Field(default=None, description="Expected K^⊥ ∩ L")


class GKPayload(BaseModel):
    J1: StructureModel
    J2: StructureModel
    K: Optional[List[List[Scalar]]] = None
    omega1: Optional[List[List[Scalar]]] = None
    omega2: Optional[List[List[Scalar]]] = None
    b: Optional[List[List[Scalar]]] = None


class BracketEntry(BaseModel):
    i: int = Field(ge=0)
    j: int = Field(ge=0)
    value: Dict[int, Scalar] = Field(description="[e_i, e_j] = Σ value[k] e_k")


class LieModel(BaseModel):
    dim: int = Field(ge=0)
    brackets: List[BracketEntry] = Field(default_factory=list)

    def build(self):
        pairs = {}
        for entry in self.brackets:
            if entry.i == entry.j:
                raise ParseError(f"bracket of e{entry.i} with itself must be omitted")
            values = {k: parse_constant(c) for k, c in entry.value.items()}
            if entry.i > entry.j:
                pairs[(entry.j, entry.i)] = {k: -c for k, c in values.items()}
            else:
                pairs[(entry.i, entry.j)] = values
        return LieAlgebraData.from_pairs(self.dim, pairs)


class AlgebraModel(BaseModel):
    pi: List[List[Scalar]] = Field(default_factory=list, description="dim g × dim a matrix of π")
    bracket: List[List[List[Scalar]]] = Field(description="bracket[i][j] = coefficients of [a_i, a_j]")

    def build(self, g):
        pi = [[parse_constant(x) for x in row] for row in self.pi]
        table = [[[parse_constant(x) for x in cell] for cell in row] for row in self.bracket]
        return CourantAlgebraData(g, pi, table)


class Construction(str, Enum):
    TRIVIAL = "trivial"
    HEMISEMIDIRECT = "hemisemidirect"
    EXPLICIT = "explicit"
    SYMPLECTIC = "symplectic"
    MOMENT = "moment"


class HamiltonianModel(BaseModel):
    f_re: List[Scalar]
    f_im: List[Scalar]
    omega: List[TermModel] = Field(description="Symplectic form whose J enters D f")


class ActionPayload(BaseModel):
    vars: VarsModel
    g: LieModel
    construction: Construction = Construction.TRIVIAL
    rho: List[FieldModel] = Field(default_factory=list)
    H: List[TermModel] = Field(default_factory=list)
    module: Optional[List[List[List[Scalar]]]] = None
    algebra: Optional[AlgebraModel] = None
    omega: Optional[List[TermModel]] = None
    psi: Optional[List[FieldModel]] = None
    mu: Optional[List[Scalar]] = None
    f: Optional[List[Scalar]] = Field(default=None, description="Equivariant f: M → g* for an equivalence")
    points: List[List[Scalar]] = Field(default_factory=list, description="Exact points for distribution ranks")
    hamiltonian: Optional[HamiltonianModel] = None

    def build(self, table):
        g = self.g.build()
        c = self.construction
        if c in (Construction.SYMPLECTIC, Construction.MOMENT):
            if not self.psi:
                raise ParseError(f"construction {c.value!r} needs psi")
            psi = [X.build(table) for X in self.psi]
            if c == Construction.SYMPLECTIC:
                if self.omega is None:
                    raise ParseError("construction 'symplectic' needs omega")
                return symplectic_extension(form_from_terms(table, self.omega), g, psi)
            if self.mu is None:
                raise ParseError("construction 'moment' needs mu")
            return moment_action(g, psi, [parse_function(table, m) for m in self.mu])

        if c == Construction.TRIVIAL:
            algebra = hemisemidirect(g, [])
        elif c == Construction.HEMISEMIDIRECT:
            if self.module is None:
                raise ParseError("construction 'hemisemidirect' needs module")
            algebra = hemisemidirect(g, [[[parse_constant(x) for x in row] for row in M] for M in self.module])
        else:
            if self.algebra is None:
                raise ParseError("construction 'explicit' needs algebra")
            algebra = self.algebra.build(g)
        rho = [v.build(table) for v in self.rho]
        return ExtendedAction(algebra, rho, twist(table, self.H))


class SeveraPayload(BaseModel):
    vars: VarsModel
    h: List[TermModel] = Field(default_factory=list, description="Basic 3-form")
    theta: List[List[TermModel]] = Field(description="Connection 1-forms, one per basis element of g")
    F: List[List[TermModel]] = Field(description="Curvature 2-forms")
    xi: List[List[TermModel]] = Field(description="1-forms ξ of the action")
    g: Optional[LieModel] = None
    pairing: Optional[List[List[Scalar]]] = None


# ── input and output ───────────────────────────────────────────────────────

def resolve_input(source):
    """A path, a fixture name under fixtures/, or None / '-' for stdin."""
    if source in (None, "-"):
        return None
    path = Path(source)
    if path.exists():
        return path
    for candidate in (FIXTURE_DIR / source, FIXTURE_DIR / f"{source}.json"):
        if candidate.exists():
            return candidate
    raise IoError(f"input {source!r} is neither a file nor a fixture name")


def _validation_message(error):
    lines = []
    for e in error.errors():
        loc = ".".join(str(x) for x in e["loc"]) or "<root>"
        lines.append(f"{loc}: {e['msg']}")
    return "; ".join(lines)


def parse_input(source, model):
    """Read JSON from a path, fixture name or stdin and validate it against model."""
    path = resolve_input(source)
    try:
        text = sys.stdin.read() if path is None else path.read_text(encoding="utf-8")
    except OSError as e:
        raise IoError(f"cannot read {path}: {e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    try:
        payload = model.model_validate(data)
    except ValidationError as e:
        raise ParseError(f"invalid {model.__name__}: {_validation_message(e)}") from e
    logger.debug("parsed %s from %s", model.__name__, path or "stdin")
    return payload


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


def report_document(report, verb, timing=None):
    """The JSON document of a run; only `timing` varies between identical runs."""
    doc = {
        "verb": verb,
        "passed": report.passed,
        "failures": report.failures(),
        "report": report.model_dump(mode="json"),
    }
    if timing is not None:
        doc["timing"] = {"seconds": round(timing, 3)}
    return doc


def _write(text, out):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")
    except OSError as e:
        raise IoError(f"cannot write {out}: {e}") from e


def emit(report, verb, fmt=OutputFormat.JSON, out=None, frame=None, timing=None):
    """
    Write the run. JSON goes to out (or stdout); when a data frame is present
    and out is a file it is written next to it with a .csv suffix. CSV writes
    the frame, or the table of checks when there is none.
    """
    fmt = OutputFormat(fmt)
    if fmt == OutputFormat.JSON:
        text = json.dumps(report_document(report, verb, timing), indent=2, ensure_ascii=False) + "\n"
        _write(text, out)
        if frame is not None and out is not None:
            _write(frame.to_csv(index=False), Path(out).with_suffix(".csv"))
        return
    table = frame if frame is not None else checks_frame(report)
    _write(table.to_csv(index=False), out)

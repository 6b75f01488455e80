#!/usr/bin/env python3
"""
genred.py - Command-line front end for the reduction engine.

    python genred.py verify-axioms --input closed-h-axioms
    python genred.py reduce-gcs --input type-change-down --out out/tcd.json
    python genred.py cp2 --example triangle --check all --out out/triangle.json

--input takes a path, a fixture name under fixtures/ or '-' for stdin.
Exit codes: 0 every verdict passes, 1 some verdict fails, 2 input error.
Reports go to stdout (or --out); logs and progress bars go to stderr.
"""

import argparse
import logging
import os
import sys
import time
from enum import Enum
from typing import List, Optional

from dotenv import load_dotenv
from pydantic import BaseModel

from actions import (
    EquivariantForm,
    action_equivalence,
    cartan_d,
    check_extended_action,
    distribution_ranks,
    hamiltonian_complexify,
    isotropy_form,
    moment_check,
    severa_pushdown,
)
from courant import courant_bracket, symplectic_structure, verify_axioms
from cp2_quotient import CHECKS, PIPELINE_EXAMPLES, Example, run_pipeline
from errors import GenredError, InputError, InvalidStructure, ParseError
from forms import Form, b_transform, mukai, pairing
from reports import Report
from schemas import (
    ActionPayload,
    AxiomsPayload,
    BracketPayload,
    GKPayload,
    GCSPayload,
    LinearPayload,
    MukaiPayload,
    OutputFormat,
    SeveraPayload,
    emit,
    field_json,
    form_from_terms,
    form_terms,
    parse_constant,
    parse_function,
    parse_input,
    parse_matrix,
    parse_points,
    parse_vectors,
    subspace_json,
    twist,
)
from split_linalg import (
    EXACT,
    FLOAT_PIVOT,
    FloatField,
    Isotropy,
    SplitSpace,
    Subspace,
    bihermitian_blocks,
    exactness_check,
    gcs_check,
    gcs_reduce,
    gk_check,
    gk_reduce,
    isotropy_check,
    k_tilde,
    matrix_text,
    pullback_algebroid,
    reduce_dirac,
    reduced_rank,
    split_decomposition,
)

load_dotenv()

# ── CONSTANTS ──────────────────────────────────────────────────────────────
LOG_LEVEL = os.getenv("GENRED_LOG_LEVEL", "INFO").upper()
DEFAULT_SAMPLES = 20


class Verb(str, Enum):
    VERIFY_AXIOMS = "verify-axioms"
    BRACKET = "bracket"
    MUKAI = "mukai"
    REDUCE_LINEAR = "reduce-linear"
    REDUCE_GCS = "reduce-gcs"
    GK_CHECK = "gk-check"
    ACTION_CHECK = "action-check"
    CARTAN = "cartan"
    MOMENT_CHECK = "moment-check"
    SEVERA = "severa"
    CP2 = "cp2"


class Command(BaseModel):
    verb: Verb
    input: Optional[str] = None
    out: Optional[str] = None
    format: OutputFormat = OutputFormat.JSON
    seed: int = 0
    trials: Optional[int] = None
    grid: int = 11
    chart: int = 0
    tolerance: float = FLOAT_PIVOT
    exact: bool = True
    example: Optional[Example] = None
    check: List[str] = ["all"]

    def field(self):
        return EXACT if self.exact else FloatField(self.tolerance)


# ── verbs on sections and forms ────────────────────────────────────────────

def run_verify_axioms(cmd):
    p = _load(cmd, AxiomsPayload)
    table = p.vars.table()
    sections = [s.build(table) for s in p.sections]
    return verify_axioms(sections, twist(table, p.H), parse_function(table, p.f))


def run_bracket(cmd):
    p = _load(cmd, BracketPayload)
    table = p.vars.table()
    result = courant_bracket(p.v.build(table), p.w.build(table), twist(table, p.H))
    report = Report(title="Courant bracket")
    report.data["bracket"] = field_json(result)
    if p.expected is not None:
        report.record("expected", result - p.expected.build(table))
    return report


def run_mukai(cmd):
    p = _load(cmd, MukaiPayload)
    table = p.vars.table()
    phi = form_from_terms(table, p.phi)
    psi = form_from_terms(table, p.psi)
    value = mukai(phi, psi)
    report = Report(title="Mukai pairing")
    report.data["mukai"] = form_terms(value)
    if p.B is not None:
        B = form_from_terms(table, p.B)
        report.record("b_invariance", mukai(b_transform(B, phi), b_transform(B, psi)) - value,
                      detail="(e^B φ, e^B ψ) = (φ, ψ)")
    if p.expected is not None:
        report.record("expected", value - form_from_terms(table, p.expected))
    return report


# ── pointwise reductions ───────────────────────────────────────────────────

def run_reduce_linear(cmd):
    p = _load(cmd, LinearPayload)
    field = cmd.field()
    space = SplitSpace.standard(p.n, field)
    K = space.subspace(parse_vectors(p.K, space.dim, field))
    report = Report(title="linear reduction")
    decomposition = split_decomposition(K)
    report.data.update({
        "K": subspace_json(K),
        "isotropy": isotropy_check(K).value,
        "K_perp": subspace_json(K.perp()),
        "K_tilde": subspace_json(k_tilde(K)),
        "K_T": subspace_json(decomposition.K_T),
        "K_Tstar": subspace_json(decomposition.K_Tstar),
        "reduced_rank": reduced_rank(K),
    })
    report.record("exact", exactness_check(K), detail="π(K) ∩ π(K^⊥) = π(K ∩ K^⊥)")
    if p.D is not None:
        reduced = reduce_dirac(space.subspace(parse_vectors(p.D, space.dim, field)), K)
        report.data["reduced_dirac"] = subspace_json(reduced)
        report.record("reduced_dirac_maximal", isotropy_check(reduced) == Isotropy.MAXIMAL)
    if p.W is not None:
        W = Subspace(p.n, parse_vectors(p.W, p.n, field), field)
        presentation = pullback_algebroid(W, field)
        report.data["pullback_dim"] = presentation.dim
        report.record("pullback_rank", presentation.dim == 2 * W.rank, detail="rank E_S = 2 dim W")
    return report


def run_reduce_gcs(cmd):
    p = _load(cmd, GCSPayload)
    field = cmd.field()
    gcs = p.J.build(field)
    info = gcs_check(gcs)
    space = gcs.space
    K = space.subspace(parse_vectors(p.K, space.dim, field))
    reduction = gcs_reduce(gcs, K)
    span = info.L.intersect(K.perp())

    report = Report(title="generalized complex reduction")
    report.data.update({
        "input_type": info.type,
        "condition": reduction.condition.value,
        "reduced_type": reduction.type,
        "reduced_J": matrix_text(reduction.gcs.J, field),
        "L_red": subspace_json(reduction.L),
        "K_perp_cap_L": subspace_json(span),
        "K_perp_cap_L_cap_K": span.intersect(K).rank,
    })
    report.record("input_structure", info.maximal_isotropic and info.transverse,
                  detail="L maximal isotropic and L ∩ L̄ = 0")
    if p.expected_type is not None:
        report.record("reduced_type", reduction.type == p.expected_type,
                      detail=f"reduced type {reduction.type}")
    if p.expected_span is not None:
        expected = space.subspace(parse_vectors(p.expected_span, space.dim, field))
        report.record("K_perp_cap_L", span == expected, detail=str(span))
    logging.info("reduced type %d (%s)", reduction.type, reduction.condition.value)
    return report


def run_gk_check(cmd):
    p = _load(cmd, GKPayload)
    field = cmd.field()
    j1, j2 = p.J1.build(field), p.J2.build(field)
    info = gk_check(j1, j2)
    report = Report(title="generalized Kähler check")
    report.data["G"] = matrix_text(info.G, field)
    report.record("commute", info.commute, detail="J1 J2 = J2 J1")
    report.record("positive", info.positive, detail="⟨G·, ·⟩ positive definite")
    if info.commute and info.positive:
        spinor = [None if m is None else parse_matrix(m, field) for m in (p.omega1, p.omega2, p.b)]
        try:
            blocks = bihermitian_blocks(j1, j2, *spinor)
        except InvalidStructure as e:
            report.data["bihermitian"] = str(e)
        else:
            report.data["g"] = matrix_text(blocks.g, field)
            report.data["b"] = matrix_text(blocks.b, field)
            report.data["bihermitian"] = blocks.note
            if blocks.cross_check is not None:
                report.record("bihermitian_cross_check", blocks.cross_check)
    if p.K is not None:
        K = j1.space.subspace(parse_vectors(p.K, j1.space.dim, field))
        reduced = gk_reduce(j1, j2, K)
        report.data["reduced_dim"] = len(reduced.basis)
        report.record("reduced_commute", reduced.check.commute)
        report.record("reduced_positive", reduced.check.positive)
        report.record("reduced_coincides", reduced.coincides, detail="reduced J1 agrees with the Dirac reduction")
    return report


# ── actions ────────────────────────────────────────────────────────────────

def _action(cmd):
    p = _load(cmd, ActionPayload)
    table = p.vars.table()
    return p, table, p.build(table)


def run_action_check(cmd):
    p, table, action = _action(cmd)
    report = check_extended_action(action)
    c = isotropy_form(action)
    report.data["isotropy_form"] = [[str(x) for x in row] for row in c]
    report.data["isotropic"] = not any(x for row in c for x in row)
    if p.points:
        report.merge(distribution_ranks(action, parse_points(p.points, table)))
    if p.f is not None:
        equivalent = action_equivalence(action, [parse_function(table, x) for x in p.f])
        report.merge(check_extended_action(equivalent), prefix="equivalent.")
    if p.hamiltonian is not None:
        h = p.hamiltonian
        J = symplectic_structure(form_from_terms(table, h.omega))
        complexified = hamiltonian_complexify(action, [parse_function(table, x) for x in h.f_re],
                                              [parse_function(table, x) for x in h.f_im], J)
        report.merge(check_extended_action(complexified), prefix="complexified.")
        report.data["complexified_rho"] = [field_json(r) for r in complexified.rho]
    return report


def run_cartan(cmd):
    _, table, action = _action(cmd)
    phi = EquivariantForm.of_action(action)
    values = cartan_d(phi, action)
    report = Report(title="equivariant Cartan certificate")
    report.checks.append(check_extended_action(action).check("invariant_splitting"))
    for i, (value, r) in enumerate(zip(values, action.rho)):
        report.record(f"cartan_a{i}", value + Form.scalar(table, pairing(r, r)), detail="d_G Φ(a) = −⟨ρa, ρa⟩")
    report.data["d_G"] = [str(v) for v in values]
    report.data["isotropic"] = not any(values)
    return report


def run_moment_check(cmd):
    p, table, action = _action(cmd)
    if p.mu is None:
        raise ParseError("moment-check needs mu")
    return moment_check(action, [parse_function(table, m) for m in p.mu])


def run_severa(cmd):
    p = _load(cmd, SeveraPayload)
    table = p.vars.table()
    forms = [[form_from_terms(table, t) for t in group] for group in (p.theta, p.F, p.xi)]
    g = p.g.build() if p.g is not None else None
    P = [[parse_constant(x) for x in row] for row in p.pairing] if p.pairing is not None else None
    result = severa_pushdown(form_from_terms(table, p.h), *forms, g=g, pairing_matrix=P)
    report = Report(title="reduced Ševera class")
    report.data["form"] = form_terms(result.form)
    report.data["nonzero"] = bool(result.form)
    report.record("closed", result.closed, detail="d(h + ⟨F ∧ ξ⟩) = 0")
    return report


def run_cp2(cmd):
    if cmd.example is None:
        raise ParseError("cp2 needs --example")
    checks = cmd.check
    if "all" not in checks:
        unknown = [c for c in checks if c not in CHECKS]
        if unknown:
            raise ParseError(f"unknown checks {unknown}; choose from {list(CHECKS)} or all")
    samples = DEFAULT_SAMPLES if cmd.trials is None else cmd.trials
    return run_pipeline(cmd.example, "all" if "all" in checks else tuple(checks),
                        grid=cmd.grid, chart=cmd.chart, seed=cmd.seed, samples=samples)


HANDLERS = {
    Verb.VERIFY_AXIOMS: run_verify_axioms,
    Verb.BRACKET: run_bracket,
    Verb.MUKAI: run_mukai,
    Verb.REDUCE_LINEAR: run_reduce_linear,
    Verb.REDUCE_GCS: run_reduce_gcs,
    Verb.GK_CHECK: run_gk_check,
    Verb.ACTION_CHECK: run_action_check,
    Verb.CARTAN: run_cartan,
    Verb.MOMENT_CHECK: run_moment_check,
    Verb.SEVERA: run_severa,
    Verb.CP2: run_cp2,
}


def _load(cmd, model):
    return parse_input(cmd.input, model)


def run(cmd):
    """Dispatch a command; returns (report, frame or None)."""
    result = HANDLERS[cmd.verb](cmd)
    if isinstance(result, tuple):
        return result
    return result, None


def failure_report(cmd, error):
    """Report for a run stopped by a failed hypothesis such as RealIndexNonzero."""
    report = Report(title=f"{cmd.verb.value}: stopped")
    detail = str(error)
    if error.payload is not None:
        detail += f" [{error.payload}]"
    report.record(type(error).__name__, False, detail=detail)
    return report


# ── command line ───────────────────────────────────────────────────────────

def build_parser():
    parser = argparse.ArgumentParser(description="Verify and reduce generalized geometry on coordinate charts.")
    parser.add_argument("verb", choices=[v.value for v in Verb], help="Operation to run")
    parser.add_argument("-i", "--input", help="JSON payload: path, fixture name or '-' for stdin", default=None)
    parser.add_argument("-o", "--out", help="Output file (default: stdout)", default=None)
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.JSON.value)
    parser.add_argument("--seed", type=int, default=0, help="Seed for sampled points")
    parser.add_argument("--trials", type=int, default=None, help="Number of sampled points (cp2 gk: 20)")
    parser.add_argument("--grid", type=int, default=11, help="Type map grid size per axis")
    parser.add_argument("--chart", type=int, default=0, help="Affine chart z_k = 1")
    parser.add_argument("--tolerance", type=float, default=FLOAT_PIVOT, help="Pivot threshold; read only with --float")
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="exact", action="store_true", default=True, help="Gaussian rationals (default)")
    mode.add_argument("--float", dest="exact", action="store_false", help="Complex doubles")
    parser.add_argument("--example", choices=[e.value for e in PIPELINE_EXAMPLES], default=None, help="cp2 example")
    parser.add_argument("--check", action="append", default=None,
                        help=f"cp2 stage to check, repeatable: {', '.join(CHECKS)} or all")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, LOG_LEVEL, logging.INFO),
        format="%(asctime)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    cmd = Command(
        verb=args.verb, input=args.input, out=args.out, format=args.format, seed=args.seed,
        trials=args.trials, grid=args.grid, chart=args.chart, tolerance=args.tolerance,
        exact=args.exact, example=args.example, check=args.check or ["all"],
    )

    t0 = time.perf_counter()
    try:
        report, frame = run(cmd)
    except InputError as e:
        logging.error("%s: %s", type(e).__name__, e)
        return e.exit_code
    except GenredError as e:
        logging.warning("%s stopped: %s: %s", cmd.verb.value, type(e).__name__, e)
        report, frame = failure_report(cmd, e), None
    except Exception:
        logging.exception("unexpected failure in %s", cmd.verb.value)
        return 2
    elapsed = time.perf_counter() - t0

    try:
        emit(report, cmd.verb.value, cmd.format, cmd.out, frame, elapsed)
    except InputError as e:
        logging.error("%s: %s", type(e).__name__, e)
        return e.exit_code
    logging.info("%s finished in %.2fs: %s", cmd.verb.value, elapsed,
                 "pass" if report.passed else f"fail {report.failures()}")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())

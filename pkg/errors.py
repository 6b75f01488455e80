#!/usr/bin/env python3
"""
errors.py - Exception hierarchy shared by the genred modules.

Each error keeps its diagnostic payload (a residual, a witness vector or the
name of the failed hypothesis) so that callers and the CLI can report it.
"""


class GenredError(Exception):
    """Base class for every error raised by the engine."""

    exit_code = 1

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload


# --- scalar engine ---

class DivisionByZero(GenredError):
    pass


class PoleAtPoint(GenredError):
    pass


# --- exterior calculus / Courant brackets ---

class NotIsotropic(GenredError):
    pass


class FrameNotIsotropic(GenredError):
    pass


# --- pointwise linear algebra ---

class NotReducible(GenredError):
    pass


class RealIndexNonzero(GenredError):
    """Raised with the witness vector in J K~ ∩ K~^⊥ outside K~."""


class ConditionViolated(GenredError):
    """Raised with the name of the hypothesis that failed."""


class SingularB(GenredError):
    pass


class InvalidStructure(GenredError):
    """A matrix offered as a generalized complex structure is not one."""


# --- actions ---

class ModuleAxiomViolation(GenredError):
    pass


class NotSymplectic(GenredError):
    pass


class NotEquivariant(GenredError):
    pass


class InconsistentConnection(GenredError):
    pass


class NotHamiltonian(GenredError):
    """Raised with the residual ρ(a) − D(f_a)."""


# --- quotient pipeline ---

class DegenerateLeadingTerm(GenredError):
    pass


class ChartDegenerate(GenredError):
    pass


class PointOnLocus(GenredError):
    pass


# --- input / output (exit code 2) ---

class InputError(GenredError):
    exit_code = 2


class ParseError(InputError):
    pass


class InvariantError(InputError):
    pass


class IoError(InputError):
    pass

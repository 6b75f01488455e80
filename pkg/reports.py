#!/usr/bin/env python3
"""
reports.py - Verdict and report models returned by every verification.

Failed identities are data, not exceptions: each check records whether its
residual vanished together with the canonical text of that residual.
"""

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"


def is_zero_residual(residual):
    """Zero test shared by RatFun, Form, GeneralizedField, matrices and bools."""
    if residual is None:
        return True
    if isinstance(residual, bool):
        return residual
    if isinstance(residual, (list, tuple)):
        return all(is_zero_residual(r) for r in residual)
    return not residual


def residual_text(residual):
    if residual is None or isinstance(residual, bool):
        return None
    if isinstance(residual, (list, tuple)):
        return "[" + ", ".join(residual_text(r) or "" for r in residual) + "]"
    return str(residual)


class Check(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str
    verdict: Verdict
    detail: str = ""
    residual: Optional[str] = None
    residual_obj: Any = Field(default=None, exclude=True)

    @property
    def passed(self):
        return self.verdict == Verdict.PASS


class Report(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    title: str
    checks: List[Check] = Field(default_factory=list)
    data: Dict[str, Any] = Field(default_factory=dict)
    assumptions: List[str] = Field(default_factory=list)

    def record(self, name, residual, detail=""):
        """Add a check that passes iff residual is zero (or True for a bool)."""
        ok = is_zero_residual(residual)
        self.checks.append(Check(
            name=name,
            verdict=Verdict.PASS if ok else Verdict.FAIL,
            detail=detail,
            residual=None if ok else residual_text(residual),
            residual_obj=None if ok else residual,
        ))
        return ok

    def merge(self, other, prefix=""):
        for check in other.checks:
            self.checks.append(check.model_copy(update={"name": prefix + check.name}))
        for key, value in other.data.items():
            self.data[prefix + key] = value
        self.assumptions.extend(a for a in other.assumptions if a not in self.assumptions)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def check(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self):
        return [c.name for c in self.checks if not c.passed]

#!/usr/bin/env python3
"""
split_linalg.py - Pointwise linear algebra on split-signature spaces E = V ⊕ V*.

Vectors are tuples of field elements in the basis (∂1..∂n, e1*..en*), and
matrices act on column vectors. Two fields are supported: EXACT (Gaussian
rationals, canonical echelon forms, the default) and FLOAT (complex doubles,
rank decided by a relative pivot threshold after row-max scaling).

Quotients such as K~^⊥/K~ are presented by echelon-complement representatives
and carry their own pairing matrix and their own copy of ker(anchor), so every
operation here also works on a reduced space.
"""

import logging
import os
from enum import Enum
from typing import List, NamedTuple, Optional

import numpy as np
from dotenv import load_dotenv
from sympy.polys.domains import QQ_I

from errors import (
    ConditionViolated,
    InvalidStructure,
    NotReducible,
    RealIndexNonzero,
    SingularB,
)
from ratfun import HALF, I_UNIT, ONE, ZERO, gaussian_str, gconj, to_complex

load_dotenv()

logger = logging.getLogger(__name__)

# ── CONSTANTS ──────────────────────────────────────────────────────────────
FLOAT_PIVOT = float(os.getenv("GENRED_FLOAT_PIVOT", "1e-9"))
POSITIVITY_FLOOR = 1e-9


# ── Fields ─────────────────────────────────────────────────────────────────

class ExactField:
    """Gaussian rationals ℚ(i)."""

    name = "exact"
    zero = ZERO
    one = ONE
    i = I_UNIT

    def convert(self, x):
        if isinstance(x, complex):
            raise TypeError(f"float value {x!r} in an exact computation")
        return QQ_I.convert(x)

    def is_zero(self, x):
        return not x

    def normalize_row(self, row):
        return row

    def pick_pivot(self, m, start, col):
        for i in range(start, len(m)):
            if m[i][col]:
                return i
        return None

    def clean(self, x):
        return x

    def conj(self, x):
        return gconj(x)

    def is_real(self, x):
        return not x.y

    def is_positive(self, x):
        return not x.y and x.x > 0

    def text(self, x):
        return gaussian_str(x)

    def __repr__(self):
        return "EXACT"


class FloatField:
    """Complex doubles with a relative pivot threshold."""

    name = "float"
    zero = 0j
    one = 1 + 0j
    i = 1j

    def __init__(self, pivot=FLOAT_PIVOT):
        self.pivot = pivot

    def convert(self, x):
        if isinstance(x, QQ_I.dtype):
            return to_complex(x)
        return complex(x)

    def is_zero(self, x):
        return abs(x) <= self.pivot

    def normalize_row(self, row):
        scale = max((abs(x) for x in row), default=0.0)
        if scale <= self.pivot:
            return [0j] * len(row)
        return [x / scale for x in row]

    def pick_pivot(self, m, start, col):
        best, best_abs = None, self.pivot
        for i in range(start, len(m)):
            a = abs(m[i][col])
            if a > best_abs:
                best, best_abs = i, a
        return best

    def clean(self, x):
        return 0j if abs(x) <= self.pivot else x

    def conj(self, x):
        return x.conjugate()

    def is_real(self, x):
        return abs(x.imag) <= self.pivot

    def is_positive(self, x):
        return self.is_real(x) and x.real > self.pivot

    def text(self, x):
        return repr(complex(x))

    def __repr__(self):
        return "FLOAT"


EXACT = ExactField()
FLOAT = FloatField()


# ── Row reduction and matrices ─────────────────────────────────────────────

def rref(rows, field=EXACT):
    """
    Reduced row echelon form of rows, zero rows dropped.

    Returns (rows, pivots). Over EXACT the result is canonical: two spanning
    sets of the same subspace give identical rows.
    """
    m = [field.normalize_row([field.convert(x) for x in r]) for r in rows]
    if not m:
        return (), ()
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        p = field.pick_pivot(m, r, c)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = field.one / m[r][c]
        m[r] = [x * inv for x in m[r]]
        m[r][c] = field.one
        for i in range(len(m)):
            if i == r:
                continue
            f = m[i][c]
            if field.is_zero(f):
                continue
            m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            m[i][c] = field.zero
        pivots.append(c)
        r += 1
    return tuple(tuple(field.clean(x) for x in row) for row in m[:r]), tuple(pivots)


def nullspace(rows, ncols, field=EXACT):
    """Basis of {x : A x = 0} for the matrix with the given rows."""
    reduced, pivots = rref(rows, field)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [field.zero] * ncols
        x[f] = field.one
        for row, p in zip(reduced, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def identity(size, field=EXACT):
    return [[field.one if i == j else field.zero for j in range(size)] for i in range(size)]


def zeros(rows, cols, field=EXACT):
    return [[field.zero] * cols for _ in range(rows)]


def transpose(a):
    return [list(col) for col in zip(*a)]


def mat_mul(a, b, field=EXACT):
    bt = transpose(b)
    out = []
    for row in a:
        line = []
        for col in bt:
            acc = field.zero
            for x, y in zip(row, col):
                if x and y:
                    acc = acc + x * y
            line.append(acc)
        out.append(line)
    return out


def mat_vec(a, v, field=EXACT):
    out = []
    for row in a:
        acc = field.zero
        for x, y in zip(row, v):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return tuple(out)


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, c):
    return [[x * c for x in row] for row in a]


def mat_equal(a, b, field=EXACT):
    if len(a) != len(b):
        return False
    return all(len(ra) == len(rb) and all(field.is_zero(x - y) for x, y in zip(ra, rb))
               for ra, rb in zip(a, b))


def block(a, b, c, d):
    """[[a, b], [c, d]] from four equally sized square blocks."""
    return [list(ra) + list(rb) for ra, rb in zip(a, b)] + [list(rc) + list(rd) for rc, rd in zip(c, d)]


def split_blocks(m):
    n = len(m) // 2
    return ([row[:n] for row in m[:n]], [row[n:] for row in m[:n]],
            [row[:n] for row in m[n:]], [row[n:] for row in m[n:]])


def solve(a, b, field=EXACT):
    """One solution x of A x = b, or None when the system is inconsistent."""
    ncols = len(a[0]) if a else 0
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    reduced, pivots = rref(aug, field)
    if ncols in pivots:
        return None
    x = [field.zero] * ncols
    for row, p in zip(reduced, pivots):
        x[p] = row[ncols]
    return tuple(x)


def express(basis, v, field=EXACT):
    """Coefficients c with Σ c_i basis_i = v, or None if v is not in the span."""
    if not basis:
        return () if all(field.is_zero(x) for x in v) else None
    return solve(transpose([list(r) for r in basis]), list(v), field)


def inverse(a, field=EXACT):
    """Matrix inverse; ValueError when singular."""
    size = len(a)
    aug = [list(row) + list(e) for row, e in zip(a, identity(size, field))]
    reduced, pivots = rref(aug, field)
    if tuple(pivots[:size]) != tuple(range(size)) or len(reduced) < size:
        raise ValueError("singular matrix")
    return [list(row[size:]) for row in reduced]


def det(a, field=EXACT):
    m = [[field.convert(x) for x in row] for row in a]
    size = len(m)
    out = field.one
    for c in range(size):
        p = field.pick_pivot(m, c, c)
        if p is None:
            return field.zero
        if p != c:
            m[c], m[p] = m[p], m[c]
            out = -out
        out = out * m[c][c]
        for i in range(c + 1, size):
            f = m[i][c] / m[c][c]
            if not field.is_zero(f):
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return out


def matrix_text(a, field=EXACT):
    return [[field.text(x) for x in row] for row in a]


# ── Subspaces ──────────────────────────────────────────────────────────────

class Subspace:
    """Span of rows in field^dim, stored in reduced row echelon form."""

    __slots__ = ("dim", "rows", "pivots", "field", "space")
    __hash__ = None

    def __init__(self, dim, rows=(), field=EXACT, space=None):
        rows = [tuple(r) for r in rows]
        for r in rows:
            if len(r) != dim:
                raise ValueError(f"vector of length {len(r)} in a space of dimension {dim}")
        self.dim = dim
        self.field = field
        self.space = space
        self.rows, self.pivots = rref(rows, field)

    def _like(self, rows):
        return Subspace(self.dim, rows, self.field, self.space)

    @property
    def rank(self):
        return len(self.rows)

    def basis(self):
        return list(self.rows)

    def __bool__(self):
        return bool(self.rows)

    def contains(self, v):
        return Subspace(self.dim, list(self.rows) + [tuple(v)], self.field).rank == self.rank

    def __le__(self, other):
        return all(other.contains(r) for r in self.rows)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        if self.dim != other.dim or self.rank != other.rank:
            return False
        if self.field is EXACT and other.field is EXACT:
            return self.rows == other.rows
        return self <= other

    def sum(self, other):
        return self._like(list(self.rows) + list(other.rows))

    def annihilator(self):
        """Euclidean annihilator {x : w·x = 0 for all rows w}."""
        return Subspace(self.dim, nullspace(self.rows, self.dim, self.field), self.field)

    def intersect(self, other):
        constraints = list(self.annihilator().rows) + list(other.annihilator().rows)
        return self._like(nullspace(constraints, self.dim, self.field))

    def perp(self):
        """Orthogonal complement for the pairing of the ambient split space."""
        if self.space is None:
            raise ValueError("perp needs a subspace of a split space")
        gram = self.space.gram
        constraints = [mat_vec(transpose(gram), r, self.field) for r in self.rows]
        return self._like(nullspace(constraints, self.dim, self.field))

    def quotient_basis(self, kern):
        """
        Canonical representatives of self/kern: rows of self reduced modulo
        the echelon rows of kern, then put in echelon form.
        """
        reduced = []
        for v in self.rows:
            v = list(v)
            for row, p in zip(kern.rows, kern.pivots):
                c = v[p]
                if not self.field.is_zero(c):
                    v = [a - c * b for a, b in zip(v, row)]
            reduced.append(v)
        return self._like(reduced)

    def image(self, matrix):
        return self._like([mat_vec(matrix, r, self.field) for r in self.rows])

    def conj(self):
        return self._like([[self.field.conj(x) for x in r] for r in self.rows])

    def project(self, indices):
        """Image under the coordinate projection onto the given indices."""
        indices = list(indices)
        return Subspace(len(indices), [[r[i] for i in indices] for r in self.rows], self.field)

    def text_rows(self):
        return [[self.field.text(x) for x in r] for r in self.rows]

    def __str__(self):
        return "span{" + ", ".join("(" + ", ".join(r) + ")" for r in self.text_rows()) + "}"

    def __repr__(self):
        return f"Subspace(dim={self.dim}, rank={self.rank}, {self})"


class SplitSpace:
    """
    A vector space with a symmetric pairing and a distinguished subspace
    `cot` playing the role of V* = ker(anchor).

    SplitSpace.standard(n) is V ⊕ V* with ⟨X+ξ, Y+η⟩ = ½(η(X) + ξ(Y)).
    Reduced spaces are built by ReducedPresentation and set `origin`.
    """

    __slots__ = ("dim", "field", "gram", "cot", "origin", "standard_n")

    def __init__(self, dim, field, gram, cot=(), origin=None):
        self.dim = dim
        self.field = field
        self.gram = [[field.convert(x) for x in row] for row in gram]
        self.origin = origin
        self.standard_n = None
        self.cot = Subspace(dim, cot, field, self)

    @classmethod
    def standard(cls, n, field=EXACT):
        half = field.convert(HALF)
        z = zeros(n, n, field)
        h = mat_scale(identity(n, field), half)
        cot = [tuple(field.one if j == n + i else field.zero for j in range(2 * n)) for i in range(n)]
        space = cls(2 * n, field, block(z, h, h, z), cot)
        space.standard_n = n
        return space

    @property
    def n(self):
        return self.dim // 2

    @property
    def is_standard(self):
        return self.standard_n is not None

    def pair(self, v, w):
        acc = self.field.zero
        for i, x in enumerate(v):
            if self.field.is_zero(x):
                continue
            for j, y in enumerate(w):
                g = self.gram[i][j]
                if g and y:
                    acc = acc + x * g * y
        return acc

    def subspace(self, rows):
        return Subspace(self.dim, rows, self.field, self)

    def zero(self):
        return self.subspace(())

    def tangent(self):
        self._require_standard()
        return self.subspace(identity(self.dim, self.field)[:self.standard_n])

    def anchor(self, sub):
        """π(sub) as a subspace of V."""
        self._require_standard()
        return sub.project(range(self.standard_n))

    def vector(self, tangent=(), cotangent=()):
        """Column vector with the given V and V* components (standard spaces only)."""
        self._require_standard()
        n = self.standard_n
        t = list(tangent) + [0] * (n - len(tangent))
        c = list(cotangent) + [0] * (n - len(cotangent))
        return tuple(self.field.convert(x) for x in t + c)

    def _require_standard(self):
        if not self.is_standard:
            raise ValueError("operation needs the standard split space V ⊕ V*")

    def __repr__(self):
        kind = f"standard n={self.standard_n}" if self.is_standard else f"dim={self.dim}"
        return f"SplitSpace({kind}, {self.field!r})"


class LatticeOp(str, Enum):
    SUM = "sum"
    INTERSECT = "intersect"
    PERP = "perp"
    QUOTIENT_BASIS = "quotient_basis"


def lattice(a, b, op):
    op = LatticeOp(op)
    if op == LatticeOp.SUM:
        return a.sum(b)
    if op == LatticeOp.INTERSECT:
        return a.intersect(b)
    if op == LatticeOp.PERP:
        return a.perp()
    return a.quotient_basis(b)


class Isotropy(str, Enum):
    ISOTROPIC = "isotropic"
    MAXIMAL = "maximal_isotropic"
    NEITHER = "neither"


def isotropy_check(w):
    if not w <= w.perp():
        return Isotropy.NEITHER
    if 2 * w.rank == w.dim:
        return Isotropy.MAXIMAL
    return Isotropy.ISOTROPIC


def is_isotropic(w):
    return isotropy_check(w) != Isotropy.NEITHER


def k_tilde(k):
    """K~ = K ∩ (K^⊥ + V*)."""
    return k.intersect(k.perp().sum(k.space.cot))


def exactness_check(k):
    """π(K) ∩ π(K^⊥) == π(K ∩ K^⊥)."""
    space = k.space
    kp = k.perp()
    lhs = space.anchor(k).intersect(space.anchor(kp))
    rhs = space.anchor(k.intersect(kp))
    return lhs == rhs


def reduced_rank(k):
    """Rank of K^⊥ / (K ∩ K^⊥); odd values witness a non-exact reduction."""
    kp = k.perp()
    return kp.rank - k.intersect(kp).rank


class SplitDecomposition(NamedTuple):
    K_T: Subspace
    K_Tstar: Subspace


def split_decomposition(k):
    """K = K_T ⊕ (K ∩ V*), with K_T the echelon complement; π(K) ≅ K_T."""
    k_tstar = k.intersect(k.space.cot)
    return SplitDecomposition(k.quotient_basis(k_tstar), k_tstar)


# ── Reduced presentations ──────────────────────────────────────────────────

class ReducedPresentation:
    """The quotient sub/kern with representatives, pairing and reduced V*."""

    __slots__ = ("sub", "kern", "reps", "gram", "space")

    def __init__(self, sub, kern):
        if not kern <= sub:
            raise ValueError("kernel of a presentation must lie inside the subspace")
        field = sub.field
        ambient = sub.space
        self.sub = sub
        self.kern = kern
        self.reps = sub.quotient_basis(kern).rows
        self.gram = [[ambient.pair(a, b) for b in self.reps] for a in self.reps]
        cot = [self.coords(v) for v in ambient.cot.intersect(sub).rows]
        self.space = SplitSpace(len(self.reps), field, self.gram, cot, origin=self)

    @property
    def dim(self):
        return len(self.reps)

    def coords(self, v):
        """Coordinates of the class of v (which must lie in sub) in the representative basis."""
        c = express(list(self.reps) + list(self.kern.rows), v, self.sub.field)
        if c is None:
            raise ValueError("vector outside the presented subspace")
        return tuple(c[:self.dim])

    def lift(self, coords):
        field = self.sub.field
        out = [field.zero] * self.sub.dim
        for c, rep in zip(coords, self.reps):
            if not field.is_zero(c):
                out = [a + c * b for a, b in zip(out, rep)]
        return tuple(out)

    def image(self, w):
        """(W ∩ sub + kern) / kern in quotient coordinates."""
        return self.space.subspace([self.coords(v) for v in w.intersect(self.sub).rows])


def pullback_algebroid(w, field=EXACT):
    """
    E_S = Ann(W)^⊥ / Ann(W) for W ⊆ V the tangent space of a submanifold.

    W is a Subspace of V (rows of length n). The result is exact of rank 2·dim W.
    """
    n = w.dim
    space = SplitSpace.standard(n, field)
    ann = [tuple([field.zero] * n) + tuple(r) for r in w.annihilator().rows]
    annW = space.subspace(ann)
    return ReducedPresentation(annW.perp(), annW)


def reduce_dirac(d, k):
    """
    (D ∩ K~^⊥ + K~) / K~ in the presentation of K~^⊥/K~.

    The returned Subspace lives in the reduced space; its presentation is
    result.space.origin.
    """
    kt = k_tilde(k)
    if not is_isotropic(kt):
        raise NotReducible("K~ = K ∩ (K^⊥ + V*) is not isotropic", payload=kt)
    presentation = ReducedPresentation(kt.perp(), kt)
    reduced = presentation.image(d)
    logger.debug("reduced Dirac structure: rank %d in a space of dimension %d",
                 reduced.rank, presentation.dim)
    return reduced


# ── Generalized complex structures ─────────────────────────────────────────

class LinearGCS:
    """An orthogonal J with J² = −1 on a split space, real in the chosen basis."""

    __slots__ = ("J", "space")
    __hash__ = None

    def __init__(self, J, space=None, field=EXACT, check=True):
        if space is None:
            space = SplitSpace.standard(len(J) // 2, field)
        field = space.field
        self.J = [[field.convert(x) for x in row] for row in J]
        self.space = space
        if check:
            self._validate()

    def _validate(self):
        field = self.field
        size = self.space.dim
        if len(self.J) != size or any(len(row) != size for row in self.J):
            raise InvalidStructure(f"J must be {size}×{size}")
        if not all(field.is_real(x) for row in self.J for x in row):
            raise InvalidStructure("J has non-real entries")
        minus_one = mat_scale(identity(size, field), -field.one)
        if not mat_equal(mat_mul(self.J, self.J, field), minus_one, field):
            raise InvalidStructure("J² ≠ −1", payload=matrix_text(mat_mul(self.J, self.J, field), field))
        gram = self.space.gram
        if not mat_equal(mat_mul(mat_mul(transpose(self.J), gram, field), self.J, field), gram, field):
            raise InvalidStructure("J is not orthogonal for the pairing")

    @property
    def field(self):
        return self.space.field

    def apply(self, v):
        return mat_vec(self.J, v, self.field)

    def eigenbundle(self):
        """L = +i-eigenspace of J."""
        field = self.field
        shifted = mat_sub(self.J, mat_scale(identity(self.space.dim, field), field.i))
        return self.space.subspace(nullspace(shifted, self.space.dim, field))

    def __eq__(self, other):
        if not isinstance(other, LinearGCS):
            return NotImplemented
        return mat_equal(self.J, other.J, self.field)

    def __repr__(self):
        return f"LinearGCS({matrix_text(self.J, self.field)})"


def two_form_map(omega, field=EXACT):
    """Matrix of X ↦ i_X ω from Ω[a][b] = ω(∂a, ∂b)."""
    return [[field.convert(x) for x in row] for row in transpose(omega)]


def gcs_from_symplectic(omega, field=EXACT):
    """J_ω = [[0, −W⁻¹], [W, 0]] with W: X ↦ i_X ω."""
    w = two_form_map(omega, field)
    n = len(w)
    try:
        w_inv = inverse(w, field)
    except ValueError:
        raise InvalidStructure("ω is degenerate") from None
    return LinearGCS(block(zeros(n, n, field), mat_scale(w_inv, -field.one), w, zeros(n, n, field)),
                     SplitSpace.standard(n, field))


def gcs_from_complex(I, field=EXACT):
    """J_I = [[−I, 0], [0, Iᵀ]]."""
    I = [[field.convert(x) for x in row] for row in I]
    n = len(I)
    return LinearGCS(block(mat_scale(I, -field.one), zeros(n, n, field), zeros(n, n, field), transpose(I)),
                     SplitSpace.standard(n, field))


def b_matrix(b, field=EXACT):
    """e^b : X + ξ ↦ X + ξ + i_X b as a 2n×2n matrix."""
    bm = two_form_map(b, field)
    n = len(bm)
    return block(identity(n, field), zeros(n, n, field), bm, identity(n, field))


def b_conjugate(gcs, b):
    """Structure of e^b ∧ φ from the structure of φ: e^{−b} J e^{b}."""
    field = gcs.field
    minus_b = [[-field.convert(x) for x in row] for row in b]
    J = mat_mul(mat_mul(b_matrix(minus_b, field), gcs.J, field), b_matrix(b, field), field)
    return LinearGCS(J, gcs.space)


def gcs_from_L(L, space=None):
    """J acting as +i on L and −i on L̄; InvalidStructure unless L ⊕ L̄ = E."""
    space = space or L.space
    field = space.field
    Lbar = L.conj()
    if 2 * L.rank != space.dim or L.sum(Lbar).rank != space.dim:
        raise InvalidStructure("L ∩ L̄ ≠ 0", payload=L.intersect(Lbar))
    S = transpose(list(L.rows) + list(Lbar.rows))
    D = [[field.zero] * space.dim for _ in range(space.dim)]
    for k in range(space.dim):
        D[k][k] = field.i if k < L.rank else -field.i
    J = mat_mul(mat_mul(S, D, field), inverse(S, field), field)
    if field is FLOAT:
        J = [[complex(x.real, 0.0) for x in row] for row in J]
    return LinearGCS(J, space)


class GCSInfo(NamedTuple):
    L: Subspace
    type: int
    maximal_isotropic: bool
    transverse: bool


def gcs_type(L, space):
    """dim(L ∩ ker anchor)."""
    return L.intersect(space.cot).rank


def gcs_check(gcs):
    L = gcs.eigenbundle()
    transverse = L.intersect(L.conj()).rank == 0
    return GCSInfo(L, gcs_type(L, gcs.space), isotropy_check(L) == Isotropy.MAXIMAL, transverse)


class Condition(str, Enum):
    JK_EQUALS_K = "JK=K"
    NONDEGENERATE = "nondegenerate"
    CRITERION = "criterion"


class GCSReduction(NamedTuple):
    gcs: LinearGCS
    type: int
    condition: Condition
    L: Subspace
    presentation: ReducedPresentation


def gcs_reduce(gcs, k):
    """
    Reduce J by K. Succeeds iff J K~ ∩ K~^⊥ ⊆ K~; reports which sufficient
    condition applied. RealIndexNonzero carries the witness vector.
    """
    field = gcs.field
    kt = k_tilde(k)
    if not is_isotropic(kt):
        raise NotReducible("K~ = K ∩ (K^⊥ + V*) is not isotropic", payload=kt)
    ktp = kt.perp()
    witness_space = kt.image(gcs.J).intersect(ktp)
    for v in witness_space.rows:
        if not kt.contains(v):
            raise RealIndexNonzero("J K~ ∩ K~^⊥ is not contained in K~", payload=v)

    if k.image(gcs.J) == k:
        condition = Condition.JK_EQUALS_K
    else:
        # K itself isotropic, pairing K x JK nondegenerate
        ks = k.rows
        pairing = [[gcs.space.pair(a, gcs.apply(b)) for b in ks] for a in ks]
        nondegenerate = ks and is_isotropic(k) and not field.is_zero(det(pairing, field))
        condition = Condition.NONDEGENERATE if nondegenerate else Condition.CRITERION

    L = gcs.eigenbundle()
    L_red = reduce_dirac(L, k)
    qspace = L_red.space
    reduced = gcs_from_L(L_red, qspace)
    red_type = gcs_type(L_red, qspace)
    logger.info("gcs_reduce: %s, reduced dimension %d, type %d", condition.value, qspace.dim, red_type)
    return GCSReduction(reduced, red_type, condition, L_red, qspace.origin)


# ── Generalized Kähler structures ──────────────────────────────────────────

class GKInfo(NamedTuple):
    commute: bool
    G: list
    positive: bool


def is_positive_definite(sym, field=EXACT):
    """Exact: leading principal minors; float: smallest eigenvalue above a floor."""
    size = len(sym)
    if field is EXACT:
        if not all(field.is_real(x) for row in sym for x in row):
            return False
        return all(field.is_positive(det([row[:k] for row in sym[:k]], field)) for k in range(1, size + 1))
    arr = np.array(sym, dtype=complex)
    if np.abs(arr.imag).max(initial=0.0) > FLOAT_PIVOT:
        return False
    return bool(np.linalg.eigvalsh(arr.real).min(initial=np.inf) > POSITIVITY_FLOOR)


def gk_check(j1, j2):
    """G = J1 J2; positive iff v ↦ ⟨Gv, v⟩ is positive definite."""
    field = j1.field
    G = mat_mul(j1.J, j2.J, field)
    commute = mat_equal(G, mat_mul(j2.J, j1.J, field), field)
    P = j1.space.gram
    form = mat_add(mat_mul(transpose(G), P, field), mat_mul(P, G, field))
    form = mat_scale(form, field.convert(HALF))
    return GKInfo(commute, G, is_positive_definite(form, field))


def _restrict(matrix, basis, field):
    cols = []
    for w in basis:
        c = express(basis, mat_vec(matrix, w, field), field)
        if c is None:
            return None
        cols.append(c)
    return transpose(cols)


class GKReduction(NamedTuple):
    J1: LinearGCS
    J2: LinearGCS
    check: GKInfo
    coincides: bool
    basis: List[tuple]
    dirac: GCSReduction


def gk_reduce(j1, j2, k):
    """
    Reduce a generalized Kähler pair by an isotropic K with J1 K = K.

    The quotient is identified with K^G ∩ K^⊥, where K^G is the G-orthogonal
    of K, and both structures are restricted there. The reduced J1 is
    compared with gcs_reduce(J1, K).
    """
    field = j1.field
    if not is_isotropic(k):
        raise ConditionViolated("K is not isotropic", payload="K isotropic")
    if k.image(j1.J) != k:
        raise ConditionViolated("J1 K ≠ K", payload="J1 K = K")
    info = gk_check(j1, j2)
    if not (info.commute and info.positive):
        raise ConditionViolated("input pair is not generalized Kähler", payload="generalized Kähler pair")

    kp = k.perp()
    kG = k.image(info.G).perp()
    wq = kG.intersect(kp)
    if wq.rank + k.rank != kp.rank:
        raise ConditionViolated("K^⊥ ≠ K ⊕ (K^G ∩ K^⊥)", payload="orthogonal splitting")
    basis = list(wq.rows)

    j1q = _restrict(j1.J, basis, field)
    j2q = _restrict(j2.J, basis, field)
    if j1q is None or j2q is None:
        raise ConditionViolated("J1, J2 do not preserve K^G ∩ K^⊥", payload="invariant complement")

    gram = [[j1.space.pair(a, b) for b in basis] for a in basis]
    cot = []
    for v in j1.space.cot.intersect(kp).rows:
        c = express(basis + list(k.rows), v, field)
        cot.append(tuple(c[:len(basis)]))
    qspace = SplitSpace(len(basis), field, gram, cot)
    r1 = LinearGCS(j1q, qspace)
    r2 = LinearGCS(j2q, qspace)

    dirac = gcs_reduce(j1, k)
    change = transpose([dirac.presentation.coords(w) for w in basis])
    L1 = r1.eigenbundle()
    mapped = dirac.L.space.subspace([mat_vec(change, x, field) for x in L1.rows])
    coincides = mapped == dirac.L
    return GKReduction(r1, r2, gk_check(r1, r2), coincides, basis, dirac)


class BihermitianBlocks(NamedTuple):
    g: list
    b: list
    cross_check: Optional[bool]
    note: str


def bihermitian_blocks(j1, j2, omega1=None, omega2=None, b_spinor=None, strict=False):
    """
    Metric and B-field maps V → V* read from G = J1 J2 = [[A, B], [C, D]]:
    g = B⁻¹ and b = −g A.

    When the spinor data are given (J1 from e^{iω1}, J2 from e^{b + iω2}, all
    as 2-form matrices) g is compared with −W2 b⁻¹ W1, where W stands for
    the map X ↦ i_X(·). A singular b skips the comparison, or raises
    SingularB when strict.
    """
    field = j1.field
    G = mat_mul(j1.J, j2.J, field)
    A, Bm, _, _ = split_blocks(G)
    try:
        g = inverse(Bm, field)
    except ValueError:
        raise InvalidStructure("upper right block of G is singular") from None
    b = mat_scale(mat_mul(g, A, field), -field.one)

    if omega1 is None or omega2 is None or b_spinor is None:
        return BihermitianBlocks(g, b, None, "no spinor data supplied")
    w1 = two_form_map(omega1, field)
    w2 = two_form_map(omega2, field)
    try:
        b_inv = inverse(two_form_map(b_spinor, field), field)
    except ValueError:
        if strict:
            raise SingularB("b is not invertible", payload=matrix_text(b_spinor, field)) from None
        return BihermitianBlocks(g, b, None, "b singular: cross-check skipped")
    g2 = mat_scale(mat_mul(mat_mul(w2, b_inv, field), w1, field), -field.one)
    return BihermitianBlocks(g, b, mat_equal(g, g2, field), "g = −ω2 b⁻¹ ω1 compared")


# ── Spinors at a point ─────────────────────────────────────────────────────

def _interior_mono(mono, j):
    if j not in mono:
        return 0, None
    pos = mono.index(j)
    return (-1 if pos % 2 else 1), mono[:pos] + mono[pos + 1:]


def _wedge_mono(mono, j):
    if j in mono:
        return 0, None
    pos = sum(1 for i in mono if i < j)
    return (-1 if pos % 2 else 1), tuple(sorted(mono + (j,)))


def _clifford_point(values, kind, j, field):
    op = _interior_mono if kind == "vec" else _wedge_mono
    out = {}
    for mono, c in values.items():
        sign, m = op(mono, j)
        if not sign:
            continue
        out[m] = out.get(m, field.zero) + (c if sign > 0 else -c)
    return out


def _wirtinger_vars(table, coords):
    if table.real:
        return list(coords)
    return list(coords) + [table.antiholo(k) for k in coords]


def wirtinger_to_real(v, m, field=EXACT):
    """
    Map a vector in the Wirtinger basis (∂z_k, ∂zb_k, dz_k, dzb_k) of an
    m-dimensional complex chart to the real basis (∂x_k, ∂y_k, dx_k, dy_k).
    """
    half = field.convert(HALF)
    i = field.i
    a, b, c, d = v[:m], v[m:2 * m], v[2 * m:3 * m], v[3 * m:]
    tangent, cotangent = [], []
    for k in range(m):
        tangent += [(a[k] + b[k]) * half, i * (b[k] - a[k]) * half]
        cotangent += [c[k] + d[k], i * (c[k] - d[k])]
    return tuple(tangent + cotangent)


def real_tangent_frame(m, field=EXACT):
    """Wirtinger components of ∂x_k = ∂z_k + ∂zb_k and ∂y_k = i(∂z_k − ∂zb_k), as columns."""
    frame = []
    for k in range(m):
        x = [field.zero] * (2 * m)
        y = [field.zero] * (2 * m)
        x[k], x[m + k] = field.one, field.one
        y[k], y[m + k] = field.i, -field.i
        frame += [x, y]
    return transpose(frame)


def annihilator_of_spinor(values, table, coords, field=EXACT):
    """
    {v : v·φ = 0} for a spinor evaluated at a point.

    values maps wedge monomials (tuples of variable indices) to field
    elements; coords are the chart's holomorphic coordinate indices. The
    result is a Subspace of the standard split space in the real basis.
    """
    values = {m: field.convert(c) for m, c in values.items() if not field.is_zero(field.convert(c))}
    variables = _wirtinger_vars(table, coords)
    images = [_clifford_point(values, "vec", j, field) for j in variables]
    images += [_clifford_point(values, "cov", j, field) for j in variables]
    monos = sorted({mono for img in images for mono in img}, key=lambda mo: (len(mo), mo))
    rows = [[img.get(mono, field.zero) for mono in monos] for img in images]
    kernel = nullspace(transpose(rows), len(images), field) if monos else identity(len(images), field)

    if table.real:
        n = len(coords)
        return SplitSpace.standard(n, field).subspace(kernel)
    m = len(coords)
    space = SplitSpace.standard(2 * m, field)
    return space.subspace([wirtinger_to_real(v, m, field) for v in kernel])


def gcs_from_spinor(values, table, coords, field=EXACT):
    """The generalized complex structure whose +i-eigenbundle annihilates φ."""
    L = annihilator_of_spinor(values, table, coords, field)
    return gcs_from_L(L, L.space)


def spinor_two_form(values, table, coords, field=EXACT):
    """
    Real-basis matrix Ω[a][b] = β(∂a, ∂b) of β = φ₂/φ₀ for a spinor with
    nonzero scalar part, so that φ = φ₀ e^{β} when φ is of symplectic type.
    """
    values = {m: field.convert(c) for m, c in values.items()}
    scalar = values.get((), field.zero)
    if field.is_zero(scalar):
        raise InvalidStructure("spinor has no scalar part")
    variables = _wirtinger_vars(table, coords)
    size = len(variables)
    fw = zeros(size, size, field)
    position = {v: k for k, v in enumerate(variables)}
    for mono, c in values.items():
        if len(mono) != 2:
            continue
        a, b = position[mono[0]], position[mono[1]]
        fw[a][b] = fw[a][b] + c / scalar
        fw[b][a] = fw[b][a] - c / scalar
    if table.real:
        return fw
    frame = real_tangent_frame(len(coords), field)
    return mat_mul(mat_mul(transpose(frame), fw, field), frame, field)


def real_imag(matrix, field=EXACT):
    """Entrywise real and imaginary parts of a complex matrix."""
    if field is EXACT:
        re = [[QQ_I(x.x, 0) for x in row] for row in matrix]
        im = [[QQ_I(x.y, 0) for x in row] for row in matrix]
    else:
        re = [[complex(x.real, 0.0) for x in row] for row in matrix]
        im = [[complex(x.imag, 0.0) for x in row] for row in matrix]
    return re, im

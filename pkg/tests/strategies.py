from itertools import combinations

from hypothesis import strategies as st

from forms import Form, GeneralizedField, ext_d
from ratfun import RatFun, VarTable, gq
from split_linalg import EXACT, Subspace, b_conjugate, gcs_from_complex, gcs_from_symplectic

gaussians = st.builds(gq, st.integers(-3, 3), st.integers(-3, 3))
nonzero_gaussians = gaussians.filter(bool)
rationals = st.builds(lambda p, q: gq((p, q)), st.integers(-4, 4), st.integers(1, 3))

real_tables = st.integers(1, 3).map(lambda n: VarTable(n, aux=(), real=True))
complex_tables = st.integers(1, 2).map(lambda n: VarTable(n, aux=(), real=False))
tables = st.one_of(real_tables, complex_tables)


@st.composite
def polynomials(draw, table, max_terms=3, max_degree=2):
    out = RatFun.zero(table)
    for _ in range(draw(st.integers(0, max_terms))):
        term = RatFun.const(table, draw(gaussians))
        for v in draw(st.lists(st.integers(0, table.nvars - 1), max_size=max_degree)):
            term = term * RatFun.var(table, v)
        out = out + term
    return out


@st.composite
def ratfuns(draw, table):
    """Polynomials, sometimes divided by 1 + |z_k|², which has no real or complex zeros."""
    f = draw(polynomials(table))
    if draw(st.booleans()):
        v = RatFun.var(table, draw(st.integers(0, table.coord_count - 1)))
        f = f / (v * v.conj() + 1)
    return f


@st.composite
def forms(draw, table, degree=None):
    top = table.coord_count
    degrees = [degree] if degree is not None else draw(st.lists(st.integers(0, top), min_size=1, max_size=2))
    out = Form.zero(table)
    for k in degrees:
        monos = list(combinations(range(top), k))
        if not monos:
            continue
        for mono in draw(st.lists(st.sampled_from(monos), max_size=2, unique=True)):
            out = out + Form(table, {mono: draw(ratfuns(table))})
    return out


@st.composite
def vector_fields(draw, table):
    chosen = draw(st.lists(st.integers(0, table.coord_count - 1), max_size=2, unique=True))
    return GeneralizedField(table, {k: draw(ratfuns(table)) for k in chosen})


@st.composite
def generalized_fields(draw, table):
    return GeneralizedField(table, draw(vector_fields(table)).vec, draw(forms(table, degree=1)))


@st.composite
def closed_twists(draw, table):
    """H = dB for a random 2-form B; zero on charts of dimension below three."""
    if table.coord_count < 3:
        return Form.zero(table)
    return ext_d(draw(forms(table, degree=2)))


# ── split linear algebra ───────────────────────────────────────────────────

def exact_vectors(dim, scalars=gaussians):
    return st.tuples(*[scalars] * dim)


@st.composite
def subspaces(draw, space, max_rank=None):
    max_rank = space.dim if max_rank is None else max_rank
    return space.subspace(draw(st.lists(exact_vectors(space.dim), max_size=max_rank)))


@st.composite
def skew_matrices(draw, n, scalars=rationals):
    m = [[gq(0)] * n for _ in range(n)]
    for a, b in combinations(range(n), 2):
        x = draw(scalars)
        m[a][b], m[b][a] = x, -x
    return m


@st.composite
def lagrangians(draw, space, scalars=rationals):
    """
    L(W, B) = {X + ξ : X ∈ W, ξ|W = i_X B} for a random W ⊆ V and skew B,
    a maximal isotropic subspace of the standard split space.
    """
    n = space.n
    W = Subspace(n, draw(st.lists(exact_vectors(n, scalars), max_size=n)), EXACT)
    B = draw(skew_matrices(n, scalars))
    out = []
    for w in W.rows:
        iwB = [sum((w[a] * B[a][b] for a in range(n)), gq(0)) for b in range(n)]
        out.append(tuple(w) + tuple(iwB))
    for alpha in W.annihilator().rows:
        out.append(tuple([gq(0)] * n) + tuple(alpha))
    return space.subspace(out)


@st.composite
def isotropic_subspaces(draw, space, scalars=rationals):
    """Random sub-spans of a random Lagrangian."""
    L = draw(lagrangians(space, scalars))
    coeffs = draw(st.lists(exact_vectors(L.rank, scalars), max_size=L.rank)) if L.rank else []
    rows = [tuple(sum((c * r[j] for c, r in zip(cs, L.rows)), gq(0)) for j in range(space.dim)) for cs in coeffs]
    return space.subspace(rows)


@st.composite
def linear_gcs(draw, n=None):
    """J_ω or J_I for the standard structures on ℝ^n (n even), B-transformed by a random real b."""
    n = draw(st.sampled_from([2, 4])) if n is None else n
    one, zero = gq(1), gq(0)
    std = [[zero] * n for _ in range(n)]
    for k in range(0, n, 2):
        std[k][k + 1], std[k + 1][k] = one, -one
    if draw(st.booleans()):
        gcs = gcs_from_symplectic(std)
    else:
        gcs = gcs_from_complex(std)
    if draw(st.booleans()):
        gcs = b_conjugate(gcs, draw(skew_matrices(n)))
    return gcs


@st.composite
def real_isotropic_vectors(draw, n):
    """X + ξ with rational entries and ξ(X) = 0, X ≠ 0."""
    X = list(draw(exact_vectors(n, rationals).filter(any)))
    xi = list(draw(exact_vectors(n, rationals)))
    k = next(i for i, x in enumerate(X) if x)
    value = sum((a * b for a, b in zip(X, xi)), gq(0))
    xi[k] = xi[k] - value / X[k]
    return tuple(X + xi)

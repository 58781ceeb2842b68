"""Finite classical matrix groups over GF(q), q odd.

Families and their defining conditions (``*`` is the q-power Frobenius on
entries followed by transpose):

    GL, SL          g in GL_n(q), det 1 for SL
    GU, SU          g in GL_n(q^2) with g* j g = j, det 1 for SU
    Sp              g in GL_2n(q) with g^T i g = i
    SOodd           g in SL_2n+1(q) with g^T j g = j
    SOplus          g in SL_2n(q) with g^T j g = j
    SOminus         g in SL_2n(q^2) with g^T j g = j and x g^(q) x = g

Here j is the antidiagonal permutation matrix, i = [[0, j_n], [-j_n, 0]] and x
swaps the two middle coordinates.
"""

from __future__ import annotations

import math
import itertools
from dataclasses import dataclass, field

import numpy as np
import sympy

from . import fields as ff
from .fields import FieldDescriptor

FAMILIES = ("GL", "SL", "GU", "SU", "Sp", "SOodd", "SOplus", "SOminus")
ENUMERATION_CAP = 2_000_000


class GroupError(ValueError):
    pass


class Unenumerable(GroupError):
    """The group is too large to list; use an ingested table instead."""


class Undecidable(GroupError):
    pass


# -- form matrices --------------------------------------------------------------

def j_matrix(n: int) -> np.ndarray:
    return np.fliplr(np.eye(n, dtype=np.int64))


def i_matrix(n: int, p: int) -> np.ndarray:
    """The symplectic form [[0, j_n], [-j_n, 0]] as codes over a field of characteristic p."""
    out = np.zeros((2 * n, 2 * n), dtype=np.int64)
    out[:n, n:] = j_matrix(n)
    out[n:, :n] = (p - 1) * j_matrix(n)
    return out


def twist_matrix(n: int) -> np.ndarray:
    """diag(id_{n-1}, j_2, id_{n-1})."""
    x = np.eye(2 * n, dtype=np.int64)
    x[n - 1:n + 1, n - 1:n + 1] = j_matrix(2)
    return x


# -- generic matrix groups --------------------------------------------------------

def encode(F: FieldDescriptor, mats: np.ndarray) -> np.ndarray:
    """Injective int64 keys for a stack of square code matrices."""
    mats = np.asarray(mats, dtype=np.int64)
    N = mats.shape[-1]
    if F.q ** (N * N) >= 2**63:
        raise GroupError("matrices too large to encode as 64-bit keys")
    weights = F.q ** np.arange(N * N, dtype=np.int64)
    return mats.reshape(mats.shape[:-2] + (N * N,)) @ weights


def element_order(F: FieldDescriptor, M, bound: int | None = None) -> int:
    """Multiplicative order of an invertible matrix.

    ``bound`` must be a multiple of the order (e.g. the group order); without
    it the order is found by repeated multiplication.
    """
    M = np.asarray(M, dtype=np.int64)
    I = ff.mat_identity(M.shape[0])
    if bound is None:
        P = M.copy()
        k = 1
        while not np.array_equal(P, I):
            P = ff.matmul(F, P, M)
            k += 1
            if k > F.q ** M.shape[0]:
                raise GroupError("matrix is not invertible")
        return k
    if not np.array_equal(ff.mat_pow(F, M, bound), I):
        raise GroupError("bound is not a multiple of the element order")
    o = bound
    for r, e in sympy.factorint(bound).items():
        for _ in range(e):
            if np.array_equal(ff.mat_pow(F, M, o // r), I):
                o //= r
            else:
                break
    return o


@dataclass
class ConjugacyData:
    reps: np.ndarray          # (r, N, N)
    sizes: list[int]
    orders: list[int]
    class_of_element: np.ndarray   # class index per enumerated element
    group: "MatrixGroup"

    @property
    def n_classes(self) -> int:
        return len(self.sizes)

    def class_of(self, M) -> int:
        return int(self.class_of_element[self.group.index_of(M)])

    def classes_of(self, mats) -> np.ndarray:
        return self.class_of_element[self.group.indices_of(mats)]


class MatrixGroup:
    """A finite group given by generating matrices over a finite field."""

    def __init__(self, field: FieldDescriptor, generators, label: str = "G",
                 expected_order: int | None = None, cap: int = ENUMERATION_CAP):
        self.field = field
        gens = [np.asarray(g, dtype=np.int64) for g in generators]
        if not gens:
            raise GroupError("at least one generator is required")
        self.N = gens[0].shape[0]
        self.generators = gens
        self.label = label
        self.expected_order = expected_order
        self.cap = cap
        self._elements = None
        self._keys = None
        self._order_idx = None
        self._classes = None

    def __repr__(self):
        return f"MatrixGroup({self.label})"

    # -- enumeration ----------------------------------------------------------
    def elements(self) -> np.ndarray:
        if self._elements is None:
            self._enumerate()
        return self._elements

    def order(self) -> int:
        if self.expected_order is not None and self._elements is None:
            return self.expected_order
        return len(self.elements())

    def _enumerate(self):
        F = self.field
        if self.expected_order is not None and self.expected_order > self.cap:
            raise Unenumerable(f"{self.label} has order {self.expected_order} > cap {self.cap}")
        I = ff.mat_identity(self.N)[None]
        gens = np.stack(self.generators)
        found = [I]
        keys = encode(F, I)
        frontier = I
        total = 1
        while len(frontier):
            prods = ff.matmul(F, frontier[:, None], gens[None]).reshape(-1, self.N, self.N)
            pk = encode(F, prods)
            pk, first = np.unique(pk, return_index=True)
            new = ~np.isin(pk, keys)
            frontier = prods[first[new]]
            if len(frontier):
                found.append(frontier)
                keys = np.concatenate([keys, pk[new]])
                total += len(frontier)
            if total > self.cap:
                raise Unenumerable(f"{self.label} exceeds the enumeration cap {self.cap}")
        elements = np.concatenate(found)
        order = np.argsort(keys, kind="stable")
        self._keys = keys[order]
        self._elements = elements[order]
        if self.expected_order is not None and len(elements) != self.expected_order:
            raise GroupError(
                f"generators of {self.label} give {len(elements)} elements, expected {self.expected_order}")

    def indices_of(self, mats) -> np.ndarray:
        self.elements()
        k = encode(self.field, mats)
        idx = np.searchsorted(self._keys, k)
        idx = np.minimum(idx, len(self._keys) - 1)
        if not np.all(self._keys[idx] == k):
            raise GroupError("matrix is not an element of the group")
        return idx

    def index_of(self, M) -> int:
        return int(self.indices_of(np.asarray(M)[None])[0])

    def __contains__(self, M) -> bool:
        try:
            self.index_of(M)
            return True
        except GroupError:
            return False

    def inverses(self) -> np.ndarray:
        """Index of the inverse of each enumerated element."""
        if self._order_idx is None:
            X = self.elements()
            e = self.exponent()
            inv = ff.mat_pow_batch(self.field, X, e - 1)
            self._order_idx = self.indices_of(inv)
        return self._order_idx

    def exponent(self) -> int:
        orders = self.conjugacy_data().orders
        return math.lcm(*orders)

    # -- conjugacy classes --------------------------------------------------------
    def conjugacy_data(self) -> ConjugacyData:
        if self._classes is not None:
            return self._classes
        from scipy.sparse import coo_matrix
        from scipy.sparse.csgraph import connected_components

        F = self.field
        X = self.elements()
        n = len(X)
        rows, cols = [], []
        for g in self.generators:
            gi = ff.mat_inv(F, g)
            conj = ff.matmul(F, ff.matmul(F, g[None], X), gi[None])
            rows.append(np.arange(n))
            cols.append(self.indices_of(conj))
        graph = coo_matrix((np.ones(n * len(rows), dtype=np.int8),
                            (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))
        _, labels = connected_components(graph, directed=True, connection="weak")
        # canonical order: representative order, class size, least key
        first = {}
        for i, lab in enumerate(labels):  # keys are sorted, so the first hit is the least
            first.setdefault(lab, i)
        sizes = np.bincount(labels)
        rep_idx = np.array([first[lab] for lab in range(len(sizes))])
        reps = X[rep_idx]
        orders = [element_order(F, M) for M in reps]
        perm = sorted(range(len(sizes)), key=lambda c: (orders[c], int(sizes[c]), int(self._keys[rep_idx[c]])))
        relabel = np.empty(len(sizes), dtype=np.int64)
        relabel[perm] = np.arange(len(sizes))
        self._classes = ConjugacyData(
            reps=reps[perm], sizes=[int(sizes[c]) for c in perm], orders=[orders[c] for c in perm],
            class_of_element=relabel[labels], group=self)
        return self._classes




# -- classical groups ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GroupSpec:
    family: str
    n: int
    q: int
    N: int
    base: FieldDescriptor          # GF(q)
    entries: FieldDescriptor       # GF(q) or GF(q^2)
    form: np.ndarray | None = field(repr=False, default=None)
    twist: np.ndarray | None = field(repr=False, default=None)
    eps: int = 1
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def label(self) -> str:
        return {
            "GL": f"GL{self.n}({self.q})", "SL": f"SL{self.n}({self.q})",
            "GU": f"GU{self.n}({self.q})", "SU": f"SU{self.n}({self.q})",
            "Sp": f"Sp{self.N}({self.q})", "SOodd": f"SO{self.N}({self.q})",
            "SOplus": f"SO+{self.N}({self.q})", "SOminus": f"SO-{self.N}({self.q})",
        }[self.family]

    def __repr__(self):
        return f"GroupSpec({self.label})"

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def unitary(self) -> bool:
        return self.family in ("GU", "SU")

    def identity(self) -> np.ndarray:
        return ff.mat_identity(self.N)

    def minus_one(self) -> int:
        return self.entries.neg(1)

    def order(self) -> int:
        return group_order(self)

    def matrix_group(self, cap: int = ENUMERATION_CAP) -> MatrixGroup:
        key = ("mg", cap)
        if key not in self._cache:
            self._cache[key] = MatrixGroup(self.entries, generators(self), self.label,
                                           expected_order=self.order(), cap=cap)
        return self._cache[key]

    def to_json(self) -> dict:
        return {"family": self.family, "n": self.n, "q": self.q, "eps": self.eps}


_FAMILY_ALIASES = {f.lower(): f for f in FAMILIES}
_FAMILY_ALIASES.update({"so": "SOodd", "so+": "SOplus", "so-": "SOminus", "sp": "Sp"})


def group_create(family: str, n: int, q: int) -> GroupSpec:
    fam = _FAMILY_ALIASES.get(str(family).lower())
    if fam is None:
        raise GroupError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    fq = sympy.factorint(q)
    if q < 3 or len(fq) != 1 or 2 in fq:
        raise GroupError(f"q = {q} must be an odd prime power")
    ((p, k),) = fq.items()
    min_n = 4 if fam in ("SOplus", "SOminus") else 2
    if n < min_n:
        raise GroupError(f"{fam} needs n >= {min_n}, got {n}")
    base = ff.field_create(p, k)
    big = ff.field_create(p, 2 * k)
    if fam in ("GL", "SL"):
        return GroupSpec(fam, n, q, n, base, base, None, None, 1)
    if fam in ("GU", "SU"):
        return GroupSpec(fam, n, q, n, base, big, j_matrix(n), None, -1)
    if fam == "Sp":
        return GroupSpec(fam, n, q, 2 * n, base, base, i_matrix(n, p), None, 1)
    if fam == "SOodd":
        return GroupSpec(fam, n, q, 2 * n + 1, base, base, j_matrix(2 * n + 1), None, 1)
    if fam == "SOplus":
        return GroupSpec(fam, n, q, 2 * n, base, base, j_matrix(2 * n), None, 1)
    return GroupSpec(fam, n, q, 2 * n, base, big, j_matrix(2 * n), twist_matrix(n), -1)


def type_a_group(n: int, q: int, eps: int) -> GroupSpec:
    """GL_n(eps q): GL_n(q) for eps = +1 and GU_n(q) for eps = -1."""
    if eps not in (1, -1):
        raise GroupError("eps must be +1 or -1")
    return group_create("GL" if eps == 1 else "GU", n, q)


def group_order(spec: GroupSpec) -> int:
    n, q, f = spec.n, spec.q, spec.family
    if f in ("GL", "SL"):
        o = q ** (n * (n - 1) // 2)
        for i in range(1, n + 1):
            o *= q**i - 1
        return o if f == "GL" else o // (q - 1)
    if f in ("GU", "SU"):
        o = q ** (n * (n - 1) // 2)
        for i in range(1, n + 1):
            o *= q**i - (-1) ** i
        return o if f == "GU" else o // (q + 1)
    if f in ("Sp", "SOodd"):
        o = q ** (n * n)
        for i in range(1, n + 1):
            o *= q ** (2 * i) - 1
        return o
    e = 1 if f == "SOplus" else -1
    o = q ** (n * (n - 1)) * (q**n - e)
    for i in range(1, n):
        o *= q ** (2 * i) - 1
    return o


# -- membership ----------------------------------------------------------------------

def _frob(spec: GroupSpec, F: FieldDescriptor, M):
    return ff.mat_frobenius(F, M, spec.q)


def check_matrix(spec: GroupSpec, M, F: FieldDescriptor | None = None) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    if M.shape != (spec.N, spec.N):
        raise GroupError(f"{spec.label} needs {spec.N}x{spec.N} matrices, got shape {M.shape}")
    F = F or spec.entries
    if M.min() < 0 or M.max() >= F.q:
        raise GroupError(f"matrix entries are not element codes of {F!r}")
    return M


def contains(spec: GroupSpec, M, F: FieldDescriptor | None = None, algebraic: bool = False) -> bool:
    """Membership test.

    ``F`` defaults to the entry field of the group.  With ``algebraic=True``
    the matrix may live over any extension ``F`` of GF(q) and only the
    polynomial conditions (form and determinant) are checked, i.e. membership
    in the ambient algebraic group; the Frobenius conditions are skipped.
    """
    F = F or spec.entries
    M = check_matrix(spec, M, F)
    if not algebraic and F is not spec.entries:
        raise GroupError(f"{spec.label} has entries in {spec.entries!r}, not {F!r}")
    if algebraic and not spec.base.is_subfield_of(F):
        raise GroupError(f"{F!r} does not contain GF({spec.q})")
    det = ff.mat_det(F, M)
    if det == 0:
        return False
    fam = spec.family
    if fam in ("GL", "SL"):
        if not algebraic and spec.entries is not F:
            return False
        return fam == "GL" or det == 1
    if fam in ("GU", "SU"):
        if algebraic:
            return fam == "GU" or det == 1
        Mq = ff.mat_transpose(_frob(spec, F, M))
        ok = np.array_equal(ff.matmul(F, ff.matmul(F, Mq, spec.form), M), spec.form)
        return ok and (fam == "GU" or det == 1)
    ok = np.array_equal(ff.matmul(F, ff.matmul(F, ff.mat_transpose(M), spec.form), M), spec.form)
    if not ok:
        return False
    if fam == "Sp":
        return True
    if det != 1:
        return False
    if fam == "SOminus" and not algebraic:
        x = spec.twist
        return np.array_equal(ff.matmul(F, ff.matmul(F, x, _frob(spec, F, M)), x), M)
    return True


@dataclass(frozen=True, eq=False)
class GroupElement:
    spec: GroupSpec
    matrix: np.ndarray

    def __post_init__(self):
        if not contains(self.spec, self.matrix):
            raise GroupError(f"matrix is not an element of {self.spec.label}")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.spec, ff.matmul(self.spec.entries, self.matrix, other.matrix))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.spec, ff.mat_inv(self.spec.entries, self.matrix))

    def order(self) -> int:
        return element_order(self.spec.entries, self.matrix, self.spec.order())

    def __eq__(self, other):
        return isinstance(other, GroupElement) and other.spec is self.spec and \
            np.array_equal(self.matrix, other.matrix)

    __hash__ = None


def spec_element_order(spec: GroupSpec, M) -> int:
    return element_order(spec.entries, M, spec.order())


def matrix_to_json(F: FieldDescriptor, M) -> list[list[list[int]]]:
    """Row-major entries, each as its coefficient list over GF(p)."""
    return [[ff.FieldElement(F, int(c)).coefficients() for c in row] for row in np.asarray(M)]


def matrix_from_json(F: FieldDescriptor, rows) -> np.ndarray:
    return np.array([[sum(int(d) * F.p**i for i, d in enumerate(c)) for c in row] for row in rows],
                    dtype=np.int64)


# -- center and derived subgroup -------------------------------------------------------

def center_elements(spec: GroupSpec) -> list[np.ndarray]:
    """The scalar matrices in the group, identity first."""
    F = spec.entries
    fam, n, q = spec.family, spec.n, spec.q
    if fam in ("Sp", "SOplus", "SOminus"):
        scalars = [1, spec.minus_one()]
    elif fam == "SOodd":
        scalars = [1]
    elif fam in ("GL", "SL"):
        scalars = [F.pow(F.gen, i) for i in range(q - 1)]
        if fam == "SL":
            scalars = [w for w in scalars if F.pow(w, n) == 1]
    else:
        g = F.pow(F.gen, q - 1)  # generates the norm-one subgroup of order q + 1
        scalars = [F.pow(g, i) for i in range(q + 1)]
        if fam == "SU":
            scalars = [w for w in scalars if F.pow(w, n) == 1]
    scalars = [1] + sorted(w for w in set(scalars) if w != 1)
    return [w * ff.mat_identity(spec.N) for w in scalars]


def in_derived_subgroup(spec: GroupSpec, M) -> tuple[bool, str]:
    """Decide membership in the derived subgroup; returns (verdict, method tag)."""
    F = spec.entries
    fam = spec.family
    if fam in ("GL", "GU"):
        return ff.mat_det(F, M) == 1, "det=1 (derived subgroup is SL_n(eps q))"
    if fam in ("SL", "SU"):
        if spec.n == 2 and spec.q == 3:
            o = spec_element_order(spec, M)
            return 4 % o == 0, "SL2(3)' = Q8: order divides 4"
        return True, "perfect group"
    if fam == "Sp":
        return True, "Sp_2n(q) is perfect"
    o = spec_element_order(spec, M)
    if o % 2 == 1:
        return True, "odd order; derived subgroup has index 2"
    raise Undecidable(f"element of even order {o} in {spec.label}: spinor norm not implemented")


# -- generators ----------------------------------------------------------------------

def _cayley(F: FieldDescriptor, A: np.ndarray) -> np.ndarray | None:
    N = A.shape[0]
    I = ff.mat_identity(N)
    try:
        inv = ff.mat_inv(F, F.vsub(I, A))
    except ZeroDivisionError:
        return None
    return ff.matmul(F, F.vadd(I, A), inv)


def _random_lie_element(spec: GroupSpec, rng: np.random.Generator) -> np.ndarray:
    F = spec.entries
    N = spec.N
    K = rng.integers(0, F.q, size=(N, N))
    fam = spec.family
    if fam in ("GU", "SU"):
        H = F.vsub(K, ff.mat_transpose(_frob(spec, F, K)))    # skew-hermitian
        return ff.matmul(F, spec.form, H)
    if fam == "Sp":
        S = F.vadd(K, ff.mat_transpose(K))                      # symmetric
        return ff.matmul(F, spec.form, S)
    S = F.vsub(K, ff.mat_transpose(K))                          # antisymmetric
    A = ff.matmul(F, spec.form, S)
    if fam == "SOminus":
        x = spec.twist
        A = F.vadd(A, ff.matmul(F, ff.matmul(F, x, _frob(spec, F, A)), x))
    return A


def _transvection(F, N, i, j, c):
    M = ff.mat_identity(N)
    M[i, j] = c
    return M


def generators(spec: GroupSpec, seed: int = 0) -> list[np.ndarray]:
    """Generating matrices; enumeration checks the closure against the order formula.

    Linear groups use elementary transvections over an F_p-basis of F_q plus a
    torus element.  Form groups use Cayley transforms of seeded random Lie
    algebra elements, the form matrix when it is a member, and a torus element
    for the determinant in GU.
    """
    F = spec.entries
    N = spec.N
    fam = spec.family
    if fam in ("GL", "SL"):
        basis = [F.p**i for i in range(F.k)]
        gens = [_transvection(F, N, i, i + 1, c) for i in range(N - 1) for c in basis]
        gens += [_transvection(F, N, i + 1, i, c) for i in range(N - 1) for c in basis]
        if fam == "GL":
            d = ff.mat_identity(N)
            d[0, 0] = F.gen
            gens.append(d)
        return gens
    rng = np.random.default_rng(seed)
    gens = []
    if fam == "GU":
        # diag(g, 1, ..., 1, g^(-q)) with g primitive; its determinant generates the norm-one group
        d = ff.mat_identity(N)
        d[0, 0] = F.gen
        d[N - 1, N - 1] = F.inv(F.pow(F.gen, spec.q))
        gens.append(d)
    if contains(spec, spec.form):
        gens.append(spec.form.copy())
    target = 6 if N <= 4 else 8
    tries = 0
    while len(gens) < target and tries < 200:
        tries += 1
        g = _cayley(F, _random_lie_element(spec, rng))
        if g is not None and contains(spec, g) and not np.array_equal(g, ff.mat_identity(N)):
            gens.append(g)
    return gens


# -- conjugacy -----------------------------------------------------------------------

@dataclass
class ConjugacyWitness:
    conjugator: np.ndarray
    method: str

    def verify(self, F: FieldDescriptor, a, b) -> bool:
        x = self.conjugator
        return np.array_equal(ff.matmul(F, x, a), ff.matmul(F, b, x))


@dataclass
class NotConjugate:
    invariant: str
    detail: str = ""


@dataclass
class Inconclusive:
    reason: str


def _form_candidates(spec: GroupSpec, F: FieldDescriptor) -> list[tuple[np.ndarray, str]]:
    out = []
    if spec.form is not None:
        out.append((spec.form, "form matrix"))
        out.append((F.vneg(spec.form), "negated form matrix"))
    out.append((j_matrix(spec.N), "j_N"))
    return out


def _invariants(spec, F, a, b, algebraic):
    bound = spec.order() if not algebraic else None
    oa = element_order(F, a, bound) if bound else element_order(F, a)
    ob = element_order(F, b, bound) if bound else element_order(F, b)
    if oa != ob:
        return NotConjugate("element order", f"{oa} != {ob}")
    ca, cb = ff.charpoly(F, a), ff.charpoly(F, b)
    if ca != cb:
        return NotConjugate("characteristic polynomial", f"{ca} != {cb}")
    Ea, ea = ff.eigenvalue_multiset(F, a)
    Eb, eb = ff.eigenvalue_multiset(F, b, Ea)
    if ea != eb:
        return NotConjugate("eigenvalue multiset")
    return None


def _monomial_search(spec, F, a, b, algebraic, node_limit=20000):
    """Signed permutation matrices X with X a = b X."""
    N = spec.N
    a = np.asarray(a)
    b = np.asarray(b)
    minus = F.neg(1)
    signs = (1, minus)
    nodes = 0
    # X e_i = c_i e_{pi(i)}:  c_i a[i, s] = b[pi(i), pi(s)] c_s
    pi = [-1] * N
    c = [0] * N
    used = [False] * N

    def consistent(i):
        for s in range(i + 1):
            lhs1 = F.mul(c[i], int(a[i, s]))
            rhs1 = F.mul(int(b[pi[i], pi[s]]), c[s])
            lhs2 = F.mul(c[s], int(a[s, i]))
            rhs2 = F.mul(int(b[pi[s], pi[i]]), c[i])
            if lhs1 != rhs1 or lhs2 != rhs2:
                return False
        return True

    def rec(i):
        nonlocal nodes
        if i == N:
            X = np.zeros((N, N), dtype=np.int64)
            for j in range(N):
                X[pi[j], j] = c[j]
            return X if contains(spec, X, F, algebraic) else None
        for t in range(N):
            if used[t]:
                continue
            for sgn in signs:
                nodes += 1
                if nodes > node_limit:
                    raise _Budget()
                pi[i], c[i] = t, sgn
                if consistent(i):
                    used[t] = True
                    found = rec(i + 1)
                    used[t] = False
                    if found is not None:
                        return found
        pi[i] = -1
        return None

    try:
        return rec(0)
    except _Budget:
        return None


class _Budget(Exception):
    pass


def _intertwiners(F, a, b, coords=None):
    """Basis of {X : X a = b X}, optionally restricted to X = X_S (+) identity."""
    N = a.shape[0]
    S = list(range(N)) if coords is None else list(coords)
    aS = a[np.ix_(S, S)]
    bS = b[np.ix_(S, S)]
    d = len(S)
    # unknowns X[r, c] at index r*d + c;  (X a - b X)[r, s] = sum_c X[r,c] a[c,s] - sum_c b[r,c] X[c,s]
    rows = []
    for r in range(d):
        for s in range(d):
            eq = [0] * (d * d)
            for cc in range(d):
                eq[r * d + cc] = F.add(eq[r * d + cc], int(aS[cc, s]))
                eq[cc * d + s] = F.sub(eq[cc * d + s], int(bS[r, cc]))
            rows.append(eq)
    basis = ff.nullspace(F, np.array(rows, dtype=np.int64))
    return S, [np.array(v, dtype=np.int64).reshape(d, d) for v in basis]


def _moved_coordinates(spec, a, b):
    N = spec.N
    I = ff.mat_identity(N)
    moved = set()
    for M in (a, b):
        D = np.asarray(M) != I
        moved |= set(np.nonzero(D.any(axis=0) | D.any(axis=1))[0].tolist())
    if spec.family not in ("GL", "SL"):
        moved |= {N - 1 - i for i in moved}  # close under the form pairing
    if spec.family == "SOminus":
        mid = {spec.n - 1, spec.n}
        if moved & mid:
            moved |= mid
    return sorted(moved)


def _combos(F, basis, limit):
    d = len(basis)
    if F.q ** d > limit:
        return None
    for coeffs in itertools.product(range(F.q), repeat=d):
        if any(coeffs):
            yield coeffs


def _lincomb(F, basis, coeffs):
    X = np.zeros_like(basis[0])
    for c, B in zip(coeffs, basis):
        if c:
            X = F.vadd(X, F.vmul(np.full_like(B, c), B))
    return X


def is_conjugate(spec: GroupSpec, a, b, hints=(), F: FieldDescriptor | None = None,
                 algebraic: bool = False, enumerate_limit: int = 100_000,
                 random_tries: int = 200, seed: int = 0):
    """Decide whether b = x a x^-1 for some x in the group.

    Returns a :class:`ConjugacyWitness` (conjugator verified by multiplication),
    :class:`NotConjugate` naming the separating invariant, or
    :class:`Inconclusive`.
    """
    F = F or spec.entries
    a = check_matrix(spec, a, F)
    b = check_matrix(spec, b, F)
    for M, name in ((a, "a"), (b, "b")):
        if not contains(spec, M, F, algebraic):
            raise GroupError(f"{name} is not an element of {spec.label}")
    screen = _invariants(spec, F, a, b, algebraic)
    if screen is not None:
        return screen

    def ok(X):
        return X is not None and contains(spec, X, F, algebraic) and \
            np.array_equal(ff.matmul(F, X, a), ff.matmul(F, b, X))

    if np.array_equal(a, b):
        return ConjugacyWitness(ff.mat_identity(spec.N), "identity")
    for X in hints:
        if ok(np.asarray(X, dtype=np.int64)):
            return ConjugacyWitness(np.asarray(X, dtype=np.int64), "supplied candidate")
    for X, name in _form_candidates(spec, F):
        if ok(X):
            return ConjugacyWitness(X, name)
    X = _monomial_search(spec, F, a, b, algebraic)
    if X is not None:
        return ConjugacyWitness(X, "signed permutation matrix")

    # linear intertwiners
    full_S, full_basis = _intertwiners(F, a, b)
    rng = np.random.default_rng(seed)
    if not full_basis:
        return NotConjugate("intertwiner space", "no nonzero X with X a = b X")
    combos = _combos(F, full_basis, enumerate_limit)
    if combos is not None:
        for coeffs in combos:
            X = _lincomb(F, full_basis, coeffs)
            if ok(X):
                return ConjugacyWitness(X, "intertwiner enumeration")
        return NotConjugate("intertwiner space", "exhaustive enumeration found no group element")
    if spec.family in ("GL", "SL") or (algebraic and spec.family in ("GU", "SU")):
        for _ in range(random_tries):
            X = _lincomb(F, full_basis, rng.integers(0, F.q, size=len(full_basis)))
            if ok(X):
                return ConjugacyWitness(X, "random intertwiner")
    S = _moved_coordinates(spec, a, b)
    if len(S) < spec.N:
        _, basis = _intertwiners(F, a, b, S)
        combos = _combos(F, basis, enumerate_limit) if basis else None
        if combos is not None:
            for coeffs in combos:
                XS = _lincomb(F, basis, coeffs)
                X = ff.mat_identity(spec.N)
                X[np.ix_(S, S)] = XS
                if ok(X):
                    return ConjugacyWitness(X, "restricted intertwiner enumeration")
                if spec.family.startswith("SO") and not ok(X):
                    X2 = _fix_det(spec, F, X, S)
                    if ok(X2):
                        return ConjugacyWitness(X2, "restricted intertwiner with reflection")
    if not algebraic and spec.order() <= ENUMERATION_CAP:
        G = spec.matrix_group()
        X = G.elements()
        hit = np.nonzero(np.all(ff.matmul(F, X, a[None]) == ff.matmul(F, b[None], X), axis=(1, 2)))[0]
        if len(hit):
            return ConjugacyWitness(X[hit[0]], "transporter scan")
        return NotConjugate("transporter scan", "no element of the group conjugates a to b")
    return Inconclusive("structured search exhausted and group too large to scan")


def _fix_det(spec, F, X, S):
    """Multiply by a reflection in a coordinate pair outside S to flip the determinant."""
    N = spec.N
    rest = [i for i in range(N) if i not in S]
    if not rest:
        return X
    i = rest[0]
    k = N - 1 - i
    R = ff.mat_identity(N)
    if i == k:
        R[i, i] = F.neg(1)
    else:
        R[i, i] = R[k, k] = 0
        R[i, k] = R[k, i] = F.neg(1)
    return ff.matmul(F, X, R)

"""Finite fields GF(p^k) with deterministic moduli and compatible embeddings.

Elements are encoded as integers ``c = sum(d_i * p**i)`` where ``d_i`` is the
coefficient of ``x**i`` in the quotient ring ``GF(p)[x] / (modulus)``.  The
class ``x`` of the indeterminate is always a primitive element, so for fields
small enough to tabulate, multiplication goes through log/antilog tables.

Matrices over a field are plain numpy integer arrays of element codes; the
vectorised helpers at the bottom of this module operate on them.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from importlib import resources

import numpy as np
import sympy

DEFAULT_BOUND = 2**63
TABLE_LIMIT = 2**16


class FieldError(ValueError):
    pass


@functools.lru_cache(maxsize=None)
def _conway_table() -> dict[tuple[int, int], tuple[int, ...]]:
    table = {}
    text = resources.files("blockforge.data").joinpath("conway.txt").read_text()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        nums = [int(t) for t in line.split()]
        p, k, coeffs = nums[0], nums[1], tuple(nums[2:])
        if len(coeffs) != k + 1 or coeffs[-1] != 1:
            raise FieldError(f"malformed Conway entry for ({p}, {k})")
        table[(p, k)] = coeffs
    return table


# -- polynomials over GF(p), lists of ints low degree first -------------------

def _ptrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmulmod(a, b, f, p):
    """a*b mod f over GF(p); f monic."""
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    return _pmod(prod, f, p)


def _pmod(a, f, p):
    a = _ptrim(a)
    k = len(f) - 1
    while len(a) > k:
        c = a[-1]
        if c:
            shift = len(a) - 1 - k
            for i in range(k + 1):
                a[shift + i] = (a[shift + i] - c * f[i]) % p
        a.pop()
        a = _ptrim(a)
    return a


def _ppowmod(a, e, f, p):
    result = [1]
    base = _pmod(a, f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        e >>= 1
    return result


def _gf2_mulmod(a: int, b: int, fmask: int, k: int) -> int:
    """Product of bitmask polynomials over GF(2), reduced mod f (bitmask, degree k)."""
    r = 0
    top = 1 << k
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= fmask
    return r


def _gf2_powmod(a: int, e: int, fmask: int, k: int) -> int:
    r = 1
    while e:
        if e & 1:
            r = _gf2_mulmod(r, a, fmask, k)
        a = _gf2_mulmod(a, a, fmask, k)
        e >>= 1
    return r


def _is_primitive(f, p):
    """True iff x generates (GF(p)[x]/f)^* of order p^k - 1 (forces f irreducible)."""
    k = len(f) - 1
    if p == 2:
        fmask = sum(c << i for i, c in enumerate(f))
        n = 2**k - 1
        if k == 1:
            return f == [1, 1]
        if _gf2_powmod(2, n, fmask, k) != 1:
            return False
        return all(_gf2_powmod(2, n // r, fmask, k) != 1 for r in sympy.factorint(n))
    if f[0] % p == 0:
        return False
    n = p**k - 1
    if _ppowmod([0, 1], n, f, p) != [1]:
        return False
    for r in sympy.factorint(n):
        if _ppowmod([0, 1], n // r, f, p) == [1]:
            return False
    return True


def _least_primitive(p, k):
    if k == 1:
        # x - g for the least primitive root g: modulus coefficients (-g, 1)
        g = int(sympy.primitive_root(p)) if p > 2 else 1
        return ((-g) % p, 1)
    for code in range(p**k):
        # enumerate (c_{k-1}, ..., c_0) lexicographically
        digits = [(code // p**i) % p for i in range(k)][::-1]
        f = list(reversed(digits)) + [1]
        if _is_primitive(f, p):
            return tuple(f)
    raise FieldError(f"no primitive polynomial found for GF({p}^{k})")


@dataclass(frozen=True, eq=False)
class FieldDescriptor:
    """GF(p^k) defined by ``modulus`` (monic, low degree first)."""

    p: int
    k: int
    modulus: tuple[int, ...]
    _tab: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def q(self) -> int:
        return self.p**self.k

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    # -- tables -----------------------------------------------------------
    @property
    def tabulated(self) -> bool:
        return self.q <= TABLE_LIMIT

    def _tables(self):
        if "exp" in self._tab:
            return self._tab
        if not self.tabulated:
            raise FieldError(f"{self!r} too large for tabulated arithmetic")
        p, k, q = self.p, self.k, self.q
        weights = np.array([p**i for i in range(k)], dtype=np.int64)
        digits = np.array([[(c // p**i) % p for i in range(k)] for c in range(q)], dtype=np.int64)
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        x = [1]
        for i in range(q - 1):
            code = sum(c * p**j for j, c in enumerate(x))
            exp[i] = code
            log[code] = i
            x = _pmulmod(x, [0, 1], list(self.modulus), p)
        if (log[1:] < 0).any():
            raise FieldError(f"modulus of {self!r} is not primitive")
        # regular representation: mulmat[a] @ digits(b) = digits(a*b)
        basis_images = []
        for i in range(k):
            # x^i * x^j for j in 0..k-1
            cols = []
            for j in range(k):
                cols.append(_pad(_pmod([0] * (i + j) + [1], list(self.modulus), p), k))
            basis_images.append(np.array(cols, dtype=np.int64).T)
        mulmat = np.zeros((q, k, k), dtype=np.int64)
        for a in range(q):
            m = np.zeros((k, k), dtype=np.int64)
            for i in range(k):
                if digits[a, i]:
                    m += digits[a, i] * basis_images[i]
            mulmat[a] = m % p
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(-log[1:]) % (q - 1)]
        neg = (((-digits) % p) @ weights).astype(np.int64)
        self._tab.update(weights=weights, digits=digits, exp=exp, log=log,
                         mulmat=mulmat, inv=inv, neg=neg)
        return self._tab

    @functools.cached_property
    def _mask(self) -> int:
        return sum(c << i for i, c in enumerate(self.modulus))

    # -- scalar arithmetic on codes ---------------------------------------
    def _poly(self, a: int) -> list[int]:
        return _ptrim([(a // self.p**i) % self.p for i in range(self.k)])

    def _code(self, poly) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(poly))

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.k == 1:
            return (a + b) % self.p
        p = self.p
        out, w = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * w
            a //= p
            b //= p
            w *= p
        return out

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.k == 1:
            return (-a) % self.p
        return self._code([(-c) % self.p for c in self._poly(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        if self.tabulated:
            t = self._tables()
            return int(t["exp"][(t["log"][a] + t["log"][b]) % (self.q - 1)])
        if self.p == 2:
            return _gf2_mulmod(a, b, self._mask, self.k)
        return self._code(_pmulmod(self._poly(a), self._poly(b), list(self.modulus), self.p))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 has no inverse")
            return 1 if e == 0 else 0
        e %= self.q - 1
        if self.k == 1:
            return pow(a, e, self.p)
        if self.tabulated:
            t = self._tables()
            return int(t["exp"][(t["log"][a] * e) % (self.q - 1)])
        if self.p == 2:
            return _gf2_powmod(a, e, self._mask, self.k)
        return self._code(_ppowmod(self._poly(a), e, list(self.modulus), self.p))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in a field")
        return self.pow(a, -1)

    def log(self, a: int) -> int:
        """Discrete log to base the primitive element ``x``."""
        if a == 0:
            raise ValueError("log of zero")
        if self.tabulated:
            return int(self._tables()["log"][a])
        return int(sympy.discrete_log(self.q, a, self.gen)) if self.k == 1 else _bsgs_log(self, a)

    def order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise ValueError("0 has no multiplicative order")
        n = self.q - 1
        o = n
        for r, e in sympy.factorint(n).items():
            for _ in range(e):
                if self.pow(a, o // r) == 1:
                    o //= r
                else:
                    break
        return o

    @property
    def gen(self) -> int:
        """Code of the fixed primitive element (the class of x)."""
        if self.k == 1:
            return (-self.modulus[0]) % self.p
        return self.p

    def from_int(self, n: int) -> int:
        return n % self.p

    def element(self, code: int) -> "FieldElement":
        return FieldElement(self, code)

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def is_subfield_of(self, other: "FieldDescriptor") -> bool:
        return self.p == other.p and other.k % self.k == 0

    # -- vectorised arithmetic on code arrays -------------------------------
    def vadd(self, a, b):
        if self.k == 1:
            return (np.asarray(a) + np.asarray(b)) % self.p
        t = self._tables()
        return ((t["digits"][a] + t["digits"][b]) % self.p) @ t["weights"]

    def vneg(self, a):
        if self.k == 1:
            return (-np.asarray(a)) % self.p
        return self._tables()["neg"][a]

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        if self.k == 1:
            return (np.asarray(a) * np.asarray(b)) % self.p
        t = self._tables()
        a = np.asarray(a)
        b = np.asarray(b)
        a, b = np.broadcast_arrays(a, b)
        out = t["exp"][(t["log"][a] + t["log"][b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def vinv(self, a):
        if self.k == 1:
            a = np.asarray(a)
            return np.array([pow(int(x), -1, self.p) if x else 0 for x in a.ravel()],
                            dtype=np.int64).reshape(a.shape)
        return self._tables()["inv"][a]

    def vpow(self, a, e: int):
        a = np.asarray(a)
        if self.k == 1:
            return np.vectorize(lambda x: self.pow(int(x), e) if x else 0, otypes=[np.int64])(a) \
                if a.size else a
        t = self._tables()
        out = t["exp"][(t["log"][a] * e) % (self.q - 1)]
        return np.where(a == 0, 0, out)


def _pad(a, k):
    return list(a) + [0] * (k - len(a))


def _bsgs_log(F: FieldDescriptor, a: int) -> int:
    n = F.q - 1
    m = int(n**0.5) + 1
    table = {}
    cur = 1
    for j in range(m):
        table.setdefault(cur, j)
        cur = F.mul(cur, F.gen)
    factor = F.pow(F.gen, -m)
    cur = a
    for i in range(m + 1):
        if cur in table:
            return (i * m + table[cur]) % n
        cur = F.mul(cur, factor)
    raise ValueError("discrete log failed")


@dataclass(frozen=True)
class FieldElement:
    """A single element of a finite field; thin wrapper over an integer code."""

    field: FieldDescriptor
    code: int

    def _other(self, o):
        if isinstance(o, FieldElement):
            if o.field is not self.field:
                raise FieldError("mixed-field arithmetic")
            return o.code
        if isinstance(o, int):
            return self.field.from_int(o)
        return NotImplemented

    def __add__(self, o):
        c = self._other(o)
        return FieldElement(self.field, self.field.add(self.code, c))

    __radd__ = __add__

    def __sub__(self, o):
        c = self._other(o)
        return FieldElement(self.field, self.field.sub(self.code, c))

    def __rsub__(self, o):
        c = self._other(o)
        return FieldElement(self.field, self.field.sub(c, self.code))

    def __mul__(self, o):
        c = self._other(o)
        return FieldElement(self.field, self.field.mul(self.code, c))

    __rmul__ = __mul__

    def __truediv__(self, o):
        c = self._other(o)
        return FieldElement(self.field, self.field.mul(self.code, self.field.inv(c)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.code, e))

    def __eq__(self, o):
        if isinstance(o, int):
            return self.code == self.field.from_int(o)
        return isinstance(o, FieldElement) and o.field is self.field and o.code == self.code

    def __hash__(self):
        return hash((id(self.field), self.code))

    def order(self) -> int:
        return self.field.order(self.code)

    def coefficients(self) -> list[int]:
        """Coefficient vector over GF(p), length k, low degree first."""
        F = self.field
        return [(self.code // F.p**i) % F.p for i in range(F.k)]

    def __repr__(self):
        return f"{self.field!r}[{self.code}]"


@functools.lru_cache(maxsize=None)
def _field_create(p: int, k: int) -> FieldDescriptor:
    modulus = _conway_table().get((p, k))
    if modulus is None:
        modulus = _least_primitive(p, k)
    return FieldDescriptor(p, k, tuple(modulus))


def field_create(p: int, k: int = 1, bound: int = DEFAULT_BOUND) -> FieldDescriptor:
    """Return the canonical GF(p^k).

    The same ``(p, k)`` always gives the same descriptor object.  The modulus
    is the bundled Conway polynomial when one is available, else the
    lexicographically least primitive polynomial.
    """
    if not sympy.isprime(p):
        raise FieldError(f"{p} is not prime")
    if k < 1:
        raise FieldError("extension degree must be positive")
    if p**k > bound:
        raise FieldError(f"{p}^{k} exceeds the field size bound {bound}")
    return _field_create(p, k)


def field_of_order(q: int) -> FieldDescriptor:
    f = sympy.factorint(q)
    if len(f) != 1:
        raise FieldError(f"{q} is not a prime power")
    ((p, k),) = f.items()
    return field_create(p, k)


def primitive_root_of_unity(F: FieldDescriptor, m: int) -> FieldElement:
    """The element ``g**((q-1)/m)`` of order exactly m, g the fixed generator."""
    if m < 1 or (F.q - 1) % m:
        raise FieldError(f"{m} does not divide {F.q} - 1")
    return FieldElement(F, F.pow(F.gen, (F.q - 1) // m))


@functools.lru_cache(maxsize=None)
def embedding_table(F: FieldDescriptor, E: FieldDescriptor) -> np.ndarray:
    """Codes of the images of all elements of F under the fixed embedding F -> E."""
    if not F.is_subfield_of(E):
        raise FieldError(f"{F!r} is not a subfield of {E!r}")
    if F is E:
        return np.arange(F.q, dtype=np.int64)
    image = E.pow(E.gen, (E.q - 1) // (F.q - 1))
    if _eval_int_poly(E, F.modulus, image) != 0:
        roots = [c for c in range(1, E.q) if _eval_int_poly(E, F.modulus, c) == 0]
        image = roots[0]
    powers = [1]
    for _ in range(F.k - 1):
        powers.append(E.mul(powers[-1], image))
    table = np.zeros(F.q, dtype=np.int64)
    for c in range(F.q):
        acc = 0
        for i in range(F.k):
            d = (c // F.p**i) % F.p
            if d:
                acc = E.add(acc, E.mul(E.from_int(d), powers[i]))
        table[c] = acc
    return table


def _eval_int_poly(E, coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = E.add(E.mul(acc, x), E.from_int(c))
    return acc


def embed(x: FieldElement, E: FieldDescriptor) -> FieldElement:
    return FieldElement(E, int(embedding_table(x.field, E)[x.code]))


def subfield_code(E: FieldDescriptor, F: FieldDescriptor, c: int) -> int:
    """Preimage of ``c`` under the embedding F -> E; raises if c is not in F."""
    table = embedding_table(F, E)
    hits = np.nonzero(table == c)[0]
    if not len(hits):
        raise FieldError(f"element {c} of {E!r} does not lie in {F!r}")
    return int(hits[0])


# -- matrices over a field (numpy arrays of codes) -----------------------------

def mat_identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(F: FieldDescriptor, A, B) -> np.ndarray:
    """Batched product of code matrices (broadcasts over leading axes)."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if F.k == 1:
        return (A @ B) % F.p
    t = F._tables()
    k = F.k
    n, m = A.shape[-2], A.shape[-1]
    m2, l = B.shape[-2], B.shape[-1]
    if m != m2:
        raise ValueError("shape mismatch")
    lead = np.broadcast_shapes(A.shape[:-2], B.shape[:-2])
    A = np.broadcast_to(A, lead + (n, m))
    B = np.broadcast_to(B, lead + (m, l))
    blk = t["mulmat"][A]                                   # (..., n, m, k, k)
    blk = np.moveaxis(blk, -2, -3).reshape(lead + (n * k, m * k))
    dig = t["digits"][B]                                   # (..., m, l, k)
    dig = np.moveaxis(dig, -1, -2).reshape(lead + (m * k, l))
    prod = (blk @ dig) % F.p                               # (..., n*k, l)
    prod = prod.reshape(lead + (n, k, l))
    prod = np.moveaxis(prod, -2, -1)                       # (..., n, l, k)
    return prod @ t["weights"]


def mat_scalar(F, c: int, A) -> np.ndarray:
    return F.vmul(np.full(np.shape(A), c, dtype=np.int64), A)


def mat_transpose(A) -> np.ndarray:
    return np.swapaxes(np.asarray(A), -1, -2)


def _row_reduce(F: FieldDescriptor, M):
    """Reduced row echelon form of a 2-D code matrix; returns (R, pivots, det_factor)."""
    R = [list(map(int, row)) for row in np.asarray(M)]
    rows = len(R)
    cols = len(R[0]) if rows else 0
    pivots = []
    det = 1
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if R[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            R[r], R[piv] = R[piv], R[r]
            det = F.neg(det)
        pv = R[r][c]
        det = F.mul(det, pv)
        inv = F.inv(pv)
        R[r] = [F.mul(inv, x) for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots, det


def mat_det(F: FieldDescriptor, M) -> int:
    M = np.asarray(M)
    n = M.shape[0]
    R, pivots, det = _row_reduce(F, M)
    return det if len(pivots) == n else 0


def mat_inv(F: FieldDescriptor, M) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[0]
    aug = np.concatenate([M, mat_identity(n)], axis=1)
    R, pivots, _ = _row_reduce(F, aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return np.array([row[n:] for row in R], dtype=np.int64)


def mat_rank(F: FieldDescriptor, M) -> int:
    if np.asarray(M).size == 0:
        return 0
    return len(_row_reduce(F, M)[1])


def nullspace(F: FieldDescriptor, M) -> list[list[int]]:
    """Basis of {v : M v = 0} as lists of codes."""
    M = np.asarray(M, dtype=np.int64)
    cols = M.shape[1]
    R, pivots, _ = _row_reduce(F, M)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * cols
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(R[i][f])
        basis.append(v)
    return basis


def mat_pow(F: FieldDescriptor, M, e: int) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    if e < 0:
        M = mat_inv(F, M)
        e = -e
    result = mat_identity(M.shape[0])
    while e:
        if e & 1:
            result = matmul(F, result, M)
        M = matmul(F, M, M)
        e >>= 1
    return result


def mat_pow_batch(F: FieldDescriptor, X, e: int) -> np.ndarray:
    """Raise every matrix in a stack to the same non-negative power."""
    X = np.asarray(X, dtype=np.int64)
    result = np.broadcast_to(mat_identity(X.shape[-1]), X.shape).copy()
    base = X.copy()
    while e:
        if e & 1:
            result = matmul(F, result, base)
        base = matmul(F, base, base)
        e >>= 1
    return result


def mat_frobenius(F: FieldDescriptor, M, power: int) -> np.ndarray:
    """Raise every entry to ``power`` (a power of p, so this is a field map)."""
    return F.vpow(np.asarray(M, dtype=np.int64), power)


def mat_map(table: np.ndarray, M) -> np.ndarray:
    """Apply an elementwise code table (e.g. a field embedding) to a matrix."""
    return table[np.asarray(M, dtype=np.int64)]


# -- polynomials over a field (lists of codes, low degree first) ---------------

def poly_trim(a):
    return _ptrim(a)


def poly_eval(F: FieldDescriptor, f, x: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


def poly_eval_all(F: FieldDescriptor, f) -> np.ndarray:
    """Evaluate f at every element of F (vectorised Horner)."""
    xs = F.elements()
    acc = np.zeros(F.q, dtype=np.int64)
    for c in reversed(f):
        acc = F.vadd(F.vmul(acc, xs), np.full(F.q, c, dtype=np.int64))
    return acc


def poly_divide_linear(F: FieldDescriptor, f, root: int):
    """Quotient of f by (x - root), assuming root is a root."""
    n = len(f) - 1
    out = [0] * n
    acc = 0
    for i in range(n, 0, -1):
        acc = F.add(F.mul(acc, root), f[i])
        out[i - 1] = acc
    return out


def charpoly(F: FieldDescriptor, M) -> list[int]:
    """Characteristic polynomial det(xI - M), monic, via Hessenberg reduction."""
    H = [list(map(int, row)) for row in np.asarray(M, dtype=np.int64)]
    n = len(H)
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if H[i][m - 1]), None)
        if piv is None:
            continue
        if piv != m:
            H[m], H[piv] = H[piv], H[m]
            for row in H:
                row[m], row[piv] = row[piv], row[m]
        inv = F.inv(H[m][m - 1])
        for i in range(m + 1, n):
            if H[i][m - 1]:
                u = F.mul(H[i][m - 1], inv)
                H[i] = [F.sub(a, F.mul(u, b)) for a, b in zip(H[i], H[m])]
                for row in H:
                    row[m] = F.add(row[m], F.mul(u, row[i]))
    # recurrence on leading principal submatrices of the Hessenberg form
    polys = [[1]]
    for m in range(1, n + 1):
        # p_m = (x - h_mm) p_{m-1} - sum_{i<m} h_im * prod_{j=i+1}^{m} h_{j,j-1} * p_{i-1}
        prev = polys[m - 1]
        pm = [0] + prev
        hmm = H[m - 1][m - 1]
        for i, c in enumerate(prev):
            pm[i] = F.sub(pm[i], F.mul(hmm, c))
        t = 1
        for i in range(m - 1, 0, -1):
            t = F.mul(t, H[i][i - 1])
            coef = F.mul(t, H[i - 1][m - 1])
            if coef:
                for j, c in enumerate(polys[i - 1]):
                    pm[j] = F.sub(pm[j], F.mul(coef, c))
        polys.append(pm)
    return polys[n]


def roots_with_multiplicity(F: FieldDescriptor, f) -> list[int]:
    """All roots of f lying in F, each listed with its multiplicity."""
    f = list(f)
    roots = []
    while len(f) > 1:
        values = poly_eval_all(F, f)
        hits = np.nonzero(values == 0)[0]
        if not len(hits):
            break
        for r in hits:
            r = int(r)
            while len(f) > 1 and poly_eval(F, f, r) == 0:
                f = poly_divide_linear(F, f, r)
                roots.append(r)
    return roots


def splitting_field(F: FieldDescriptor, f, max_degree: int = 12) -> FieldDescriptor:
    """Smallest GF(p^(k d)) containing all roots of f."""
    deg = len(f) - 1
    for d in range(1, max_degree + 1):
        E = field_create(F.p, F.k * d)
        g = list(mat_map(embedding_table(F, E), f))
        if len(roots_with_multiplicity(E, g)) == deg:
            return E
    raise FieldError("splitting field exceeds the search bound")


def eigenvalue_multiset(F: FieldDescriptor, M, E: FieldDescriptor | None = None) -> tuple[FieldDescriptor, list[int]]:
    """Eigenvalues of M with multiplicity, as sorted codes in a splitting field.

    Returns ``(E, roots)``.  With ``E=None`` the smallest splitting extension is
    chosen.
    """
    f = charpoly(F, M)
    if E is None:
        E = splitting_field(F, f)
    g = list(mat_map(embedding_table(F, E), f))
    roots = roots_with_multiplicity(E, g)
    if len(roots) != len(f) - 1:
        raise FieldError(f"{E!r} does not split the characteristic polynomial")
    return E, sorted(roots)

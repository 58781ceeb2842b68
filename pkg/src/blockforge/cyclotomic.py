"""Exact arithmetic in the cyclotomic rings Z[zeta_n] and reduction modulo a
prime ideal above a rational prime.

A :class:`CycInt` stores its conductor ``n`` and integer coordinates in the
power basis ``1, z, ..., z^(phi(n)-1)`` of ``Z[z]/(Phi_n)``.  Binary operations
lift both operands to the lcm of their conductors; conductors are never
lowered, so ``CycInt(1, (3,))`` and the same value lifted to conductor 12
compare equal but keep their own coordinates.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction

import sympy

from .fields import FieldDescriptor, field_create


class CyclotomicError(ValueError):
    pass


@functools.lru_cache(maxsize=None)
def totient(n: int) -> int:
    return int(sympy.totient(n))


@functools.lru_cache(maxsize=None)
def cyclotomic_coeffs(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, low degree first."""
    x = sympy.Symbol("x")
    return tuple(int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()))


@functools.lru_cache(maxsize=None)
def reduction_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Row j holds the power-basis coordinates of zeta_n^j, for 0 <= j < n."""
    phi = totient(n)
    f = cyclotomic_coeffs(n)
    rows = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(n):
        rows.append(tuple(cur))
        # multiply by z and reduce z^phi = -sum f_i z^i
        top = cur[-1] if phi else 0
        cur = [0] + cur[:-1]
        if top:
            for i in range(phi):
                cur[i] -= top * f[i]
    return tuple(rows)


@functools.lru_cache(maxsize=None)
def _lift_rows(n: int, N: int) -> tuple[tuple[int, ...], ...]:
    R = reduction_table(N)
    step = N // n
    return tuple(R[i * step] for i in range(totient(n)))


@functools.lru_cache(maxsize=None)
def _ramanujan(n: int) -> tuple[int, ...]:
    """Tr(zeta_n^i) for 0 <= i < n."""
    out = []
    for i in range(n):
        g = math.gcd(i, n)
        d = n // g
        out.append(int(sympy.mobius(d)) * totient(n) // totient(d))
    return tuple(out)


def _reduce_group_ring(acc: list[int], N: int) -> tuple[int, ...]:
    """Reduce a length-N vector over the basis zeta^0..zeta^(N-1)."""
    phi = totient(N)
    out = acc[:phi]
    R = reduction_table(N)
    for j in range(phi, N):
        v = acc[j]
        if v:
            row = R[j]
            for i in range(phi):
                if row[i]:
                    out[i] += v * row[i]
    return tuple(out)


class CycInt:
    """An element of Z[zeta_n] in the reduced power basis."""

    __slots__ = ("n", "coeffs", "_hash")

    def __init__(self, n: int, coeffs):
        coeffs = tuple(int(c) for c in coeffs)
        if n < 1:
            raise CyclotomicError("conductor must be positive")
        if len(coeffs) != totient(n):
            raise CyclotomicError(f"conductor {n} needs {totient(n)} coordinates, got {len(coeffs)}")
        self.n = n
        self.coeffs = coeffs
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_int(cls, a: int) -> "CycInt":
        return cls(1, (a,))

    @classmethod
    def root_of_unity(cls, n: int, power: int = 1) -> "CycInt":
        """zeta_n ** power."""
        return cls(n, reduction_table(n)[power % n])

    @classmethod
    def from_group_ring(cls, n: int, coeffs) -> "CycInt":
        """Value of sum(coeffs[i] * zeta_n^i) with ``len(coeffs) <= n``."""
        acc = [0] * n
        for i, c in enumerate(coeffs):
            acc[i % n] += int(c)
        return cls(n, _reduce_group_ring(acc, n))

    # -- conductor handling -----------------------------------------------
    def lift(self, N: int) -> "CycInt":
        """The same value written at conductor N (a multiple of n)."""
        if N == self.n:
            return self
        if N % self.n:
            raise CyclotomicError(f"cannot lift conductor {self.n} to {N}")
        out = [0] * totient(N)
        for a, row in zip(self.coeffs, _lift_rows(self.n, N)):
            if a:
                for i, r in enumerate(row):
                    if r:
                        out[i] += a * r
        return CycInt(N, out)

    def _pair(self, other):
        if isinstance(other, int):
            other = CycInt.from_int(other)
        elif not isinstance(other, CycInt):
            return None, None
        if self.n == other.n:
            return self, other
        N = self.n * other.n // math.gcd(self.n, other.n)
        return self.lift(N), other.lift(N)

    # -- predicates -------------------------------------------------------
    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_int(self) -> int:
        if not self.is_rational():
            raise CyclotomicError(f"{self} is not a rational integer")
        return self.coeffs[0]

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return CycInt(a.n, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.n, [-x for x in self.coeffs])

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return CycInt(a.n, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CycInt(self.n, [x * other for x in self.coeffs])
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        if a.n == 1:
            return CycInt(1, (a.coeffs[0] * b.coeffs[0],))
        if a.is_rational():
            return b * a.coeffs[0]
        if b.is_rational():
            return a * b.coeffs[0]
        N = a.n
        acc = [0] * N
        bnz = [(j, y) for j, y in enumerate(b.coeffs) if y]
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in bnz:
                    k = i + j
                    if k >= N:
                        k -= N
                    acc[k] += x * y
        return CycInt(N, _reduce_group_ring(acc, N))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise CyclotomicError("negative powers are not integral in general")
        result = CycInt.from_int(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def exact_div(self, d: int) -> "CycInt":
        """Divide by a rational integer; raises unless the quotient is integral."""
        if d == 0:
            raise ZeroDivisionError("division by zero")
        if any(c % d for c in self.coeffs):
            raise CyclotomicError(f"{self} is not divisible by {d} in Z[zeta_{self.n}]")
        return CycInt(self.n, [c // d for c in self.coeffs])

    def galois(self, k: int) -> "CycInt":
        """Image under the automorphism zeta_n -> zeta_n^k, gcd(k, n) = 1."""
        if math.gcd(k, self.n) != 1:
            raise CyclotomicError(f"{k} is not a unit modulo {self.n}")
        if self.n <= 2 or self.is_rational():
            return self
        acc = [0] * self.n
        for i, c in enumerate(self.coeffs):
            if c:
                acc[(i * k) % self.n] += c
        return CycInt(self.n, _reduce_group_ring(acc, self.n))

    def conjugate(self) -> "CycInt":
        return self.galois(-1)

    def trace(self) -> int:
        """Trace from Q(zeta_n) down to Q."""
        tr = _ramanujan(self.n)
        return sum(c * tr[i] for i, c in enumerate(self.coeffs) if c)

    def normalized_trace(self) -> Fraction:
        """Trace divided by phi(n); independent of the conductor used."""
        return Fraction(self.trace(), totient(self.n))

    def group_ring_l1(self) -> int:
        """Sum of absolute coordinates (a bound used by modular checks)."""
        return sum(abs(c) for c in self.coeffs)

    def evaluate_mod(self, w: int, P: int) -> int:
        """Image under zeta_n -> w in GF(P), where w has order n modulo P."""
        acc = 0
        wp = 1
        for c in self.coeffs:
            if c:
                acc += c * wp
            wp = wp * w % P
        return acc % P

    def to_complex(self) -> complex:
        z = complex(math.cos(2 * math.pi / self.n), math.sin(2 * math.pi / self.n))
        return sum(c * z**i for i, c in enumerate(self.coeffs))

    def key(self, N: int) -> tuple[int, ...]:
        """Coordinates at conductor N, used as a deterministic sort key."""
        return self.lift(N).coeffs

    # -- comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            return self.is_rational() and self.coeffs[0] == other
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.coeffs[0])
            else:
                self._hash = hash(self.normalized_trace())
        return self._hash

    def __repr__(self):
        return format_cycint(self)


def cyc_conjugate(x: CycInt) -> CycInt:
    """Complex conjugate, the ring map zeta_n -> zeta_n^(-1)."""
    return x.conjugate()


def format_cycint(x: CycInt) -> str:
    """Token used by the CTX table format."""
    if x.is_rational():
        return str(x.coeffs[0])
    return f"c({x.n}:{','.join(str(c) for c in x.coeffs)})"


def parse_cycint(token: str) -> CycInt:
    token = token.strip()
    if token.startswith("c(") and token.endswith(")"):
        body = token[2:-1]
        if ":" not in body:
            raise CyclotomicError(f"malformed cyclotomic token {token!r}")
        n_str, rest = body.split(":", 1)
        return CycInt(int(n_str), [int(t) for t in rest.split(",")])
    try:
        return CycInt.from_int(int(token))
    except ValueError:
        raise CyclotomicError(f"malformed value token {token!r}") from None


# -- reduction modulo a prime above ell -----------------------------------------

def _split_conductor(n: int, ell: int) -> tuple[int, int]:
    a = 0
    while n % ell == 0:
        n //= ell
        a += 1
    return a, n


class IdealReduction:
    """A ring homomorphism Z[zeta_e] -> GF(ell^d) with kernel a prime above ell.

    Write ``e = ell^a * m`` with ``ell`` not dividing ``m``.  The prime ideals
    above ell correspond to the irreducible factors of Phi_m over GF(ell).  The
    factors are listed in lexicographic order of their coefficient tuples
    (constant term first) and ``factor_index`` selects one; the default is the
    least.  Writing theta for a root of the chosen factor, zeta_e maps to the
    unique ell-power root of theta, i.e. ``theta ** u`` with
    ``u = (ell^a)^(-1) mod m``.
    """

    def __init__(self, e: int, ell: int = 2, factor_index: int = 0):
        if not sympy.isprime(ell):
            raise CyclotomicError(f"{ell} is not prime")
        self.e = e
        self.ell = ell
        self.a, self.m = _split_conductor(e, ell)
        m = self.m
        self.degree = int(sympy.n_order(ell, m)) if m > 1 else 1
        self.field: FieldDescriptor = field_create(ell, self.degree)
        F = self.field
        # cyclotomic cosets of units mod m under multiplication by ell
        seen = set()
        cosets = []
        for c in range(1, m + 1):
            c %= m
            if math.gcd(c, m) != 1 or c in seen:
                continue
            coset = []
            x = c
            while x not in coset:
                coset.append(x)
                x = x * ell % m
            seen.update(coset)
            cosets.append(coset)
        beta = F.pow(F.gen, (F.q - 1) // m)
        factors = []
        for coset in cosets:
            poly = [1]
            for c in coset:
                root = F.pow(beta, c)
                # multiply poly by (x - root)
                new = [0] * (len(poly) + 1)
                for i, co in enumerate(poly):
                    new[i + 1] = F.add(new[i + 1], co)
                    new[i] = F.sub(new[i], F.mul(co, root))
                poly = new
            if any(c >= ell for c in poly):
                raise CyclotomicError("cyclotomic factor not defined over the prime field")
            factors.append((tuple(poly), coset[0]))
        factors.sort()
        self.factors = [f for f, _ in factors]
        if not 0 <= factor_index < len(factors):
            raise CyclotomicError(f"factor index {factor_index} out of range ({len(factors)} factors)")
        self.factor_index = factor_index
        self.factor = factors[factor_index][0]
        theta = F.pow(beta, factors[factor_index][1])
        self.theta = theta
        u = pow(ell**self.a, -1, m) if m > 1 else 0
        # image of zeta_e^j = theta^(j*u mod m)
        self._theta_pows = [1]
        for _ in range(m - 1):
            self._theta_pows.append(F.mul(self._theta_pows[-1], theta))
        self._u = u

    @property
    def n_factors(self) -> int:
        return len(self.factors)

    def image_of_root(self, n: int, power: int = 1) -> int:
        """Image of zeta_n^power for n dividing e, as a field code."""
        if self.e % n:
            raise CyclotomicError(f"conductor {n} does not divide {self.e}")
        j = power * (self.e // n)
        return self._theta_pows[(j * self._u) % self.m] if self.m > 1 else 1

    def reduce(self, x: CycInt) -> int:
        """Residue of x as a code in ``self.field``."""
        n = x.n
        if self.e % n:
            raise CyclotomicError(f"conductor {n} does not divide {self.e}")
        F = self.field
        ell = self.ell
        if n == 1 or self.m == 1:
            return F.from_int(sum(x.coeffs))
        step = (self.e // n) * self._u
        m = self.m
        pows = self._theta_pows
        acc = 0
        for i, c in enumerate(x.coeffs):
            c %= ell
            if c:
                t = pows[(i * step) % m]
                acc = F.add(acc, t if c == 1 else F.mul(F.from_int(c), t))
        return acc


def reduce_mod2(x: CycInt, R: IdealReduction) -> int:
    """Residue of x modulo the prime ideal above 2 fixed by R."""
    if R.ell != 2:
        raise CyclotomicError("reduction is not modulo a prime above 2")
    return R.reduce(x)

"""Character tables: computed by the Burnside-Dixon-Schneider method for
enumerable matrix groups, or read from CTX files.

Every table is verified on construction: class data consistency, the inverse
map against complex conjugation, and row and column orthogonality (exact,
see :func:`orthogonality_defects`).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import sympy

from . import fields as ff
from .cyclotomic import CycInt, format_cycint, parse_cycint, CyclotomicError
from .groups import GroupSpec, MatrixGroup


class TableError(ValueError):
    pass


class CTXParseError(TableError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


class OrthogonalityError(TableError):
    pass


@dataclass
class CharacterTable:
    label: str
    order: int
    exponent: int
    sizes: list[int]
    orders: list[int]
    inverse: list[int]                 # 0-based class of g^-1
    values: list[list[CycInt]]         # values[chi][class]
    source: str = "computed"
    meta: dict = field(default_factory=dict)

    @property
    def n_classes(self) -> int:
        return len(self.sizes)

    def degree(self, i: int) -> int:
        return self.values[i][0].to_int()

    @property
    def degrees(self) -> list[int]:
        return [self.degree(i) for i in range(self.n_classes)]

    def conductor(self) -> int:
        L = 1
        for row in self.values:
            for v in row:
                L = math.lcm(L, v.n)
        return L

    def __repr__(self):
        return f"CharacterTable({self.label}, order={self.order}, classes={self.n_classes}, {self.source})"


# -- verification ---------------------------------------------------------------

def _dixon_style_primes(L: int, lower: int, upper: int, count: int) -> list[int]:
    out = []
    P = (lower // L + 1) * L + 1
    while len(out) < count:
        if P >= upper:
            raise TableError("no suitable verification primes below the float-exact bound")
        if sympy.isprime(P):
            out.append(P)
        P += L
    return out


def _evaluation_plan(T: CharacterTable, L: int):
    r = T.n_classes
    int_part = np.zeros((r, r), dtype=object)
    irr = []
    for i, row in enumerate(T.values):
        for k, v in enumerate(row):
            if v.is_rational():
                int_part[i, k] = v.coeffs[0]
            else:
                irr.append((i, k, v))
    width = max((len(v.coeffs) for _, _, v in irr), default=1)
    idx = np.zeros((len(irr), width), dtype=np.int64)
    coef = np.zeros((len(irr), width), dtype=object)
    for t, (_, _, v) in enumerate(irr):
        step = L // v.n
        for i, c in enumerate(v.coeffs):
            idx[t, i] = i * step
            coef[t, i] = c
    pos = (np.array([i for i, _, _ in irr], dtype=np.int64), np.array([k for _, k, _ in irr], dtype=np.int64))
    return int_part, idx, coef, pos


def orthogonality_defects(T: CharacterTable, limit: int = 1) -> list[str]:
    """Exact row and column orthogonality check; returns descriptions of failures.

    Each inner product minus its expected value is an algebraic integer x in
    Z[zeta_L].  Evaluating the table at every primitive L-th root of unity
    modulo primes P = 1 (mod L) tests x against every prime ideal above P, so a
    zero result means P divides x.  Every complex conjugate of x is bounded
    by the l1 bound B below, and a nonzero multiple of prod(P) would have a
    conjugate of absolute value at least prod(P); taking prod(P) > B makes
    the test exact.  Products are formed in float64, exact because every
    partial sum stays below 2^53.
    """
    r = T.n_classes
    G = T.order
    L = T.conductor()
    l1 = np.array([[v.group_ring_l1() for v in row] for row in T.values], dtype=object)
    colmax = l1.max(axis=0)
    rowmax = l1.max(axis=1)
    bound_rows = sum(T.sizes[k] * int(colmax[k]) ** 2 for k in range(r)) + G
    bound_cols = r * int(max(rowmax)) ** 2 + G
    bound = max(bound_rows, bound_cols)
    pmax = int(math.isqrt(2**52 // max(r, 1)))
    primes = []
    prod = 1
    lower = 2**20
    while prod <= bound:
        (P,) = _dixon_style_primes(L, lower, pmax, 1)
        primes.append(P)
        prod *= P
        lower = P
    int_part, idx, coef, pos = _evaluation_plan(T, L)
    sizes = np.array(T.sizes, dtype=object)
    inv = np.array(T.inverse)
    defects = []
    for P in primes:
        Fp = ff.field_create(P, 1)
        g = Fp.gen
        w1 = pow(g, (P - 1) // L, P)
        base = np.array((int_part % P).tolist(), dtype=np.int64)
        sz = np.array((sizes % P).tolist(), dtype=np.float64)
        cmod = np.array((coef % P).tolist(), dtype=np.int64) if coef.size else coef.astype(np.int64)
        cent = np.array([(G // s) % P for s in T.sizes], dtype=np.int64)
        for k in range(1, L + 1):
            if math.gcd(k, L) != 1:
                continue
            w = pow(w1, k, P)
            W = np.ones(L, dtype=np.int64)
            for j in range(1, L):
                W[j] = W[j - 1] * w % P
            V = base.copy()
            if len(idx):
                vals = (cmod * W[idx]) % P
                V[pos] = vals.sum(axis=1) % P
            Vf = V.astype(np.float64)
            Vbar = Vf[:, inv]          # conj(chi(g)) = chi(g^-1)
            rows = np.fmod(np.fmod(Vf * sz[None, :], P) @ Vbar.T, P)
            want_rows = np.eye(r) * (G % P)
            bad = np.argwhere(rows != want_rows)
            for i, j in bad[:limit]:
                defects.append(f"rows {i} and {j} are not orthogonal")
            cols = np.fmod(Vf.T @ Vbar, P)
            want_cols = np.diag(cent.astype(np.float64))
            bad = np.argwhere(cols != want_cols)
            for i, j in bad[:limit]:
                defects.append(f"columns {i} and {j} are not orthogonal")
            if defects:
                return defects
    return defects


def verify_table(T: CharacterTable) -> None:
    """Raise :class:`TableError` unless T is a consistent character table."""
    r = T.n_classes
    if not (len(T.orders) == len(T.inverse) == r and len(T.values) == r):
        raise TableError("class data and character rows have inconsistent lengths")
    if any(len(row) != r for row in T.values):
        raise TableError("every character needs one value per class")
    if sum(T.sizes) != T.order or any(T.order % s for s in T.sizes):
        raise TableError("class sizes must divide the group order and sum to it")
    if T.sizes[0] != 1 or T.orders[0] != 1:
        raise TableError("the first class must be the identity")
    if sorted(T.inverse) != list(range(r)) or any(T.inverse[T.inverse[k]] != k for k in range(r)):
        raise TableError("inverse map is not an involution")
    E = 1
    for o in T.orders:
        E = math.lcm(E, o)
    if E != T.exponent:
        raise TableError(f"exponent {T.exponent} is not the lcm of the element orders ({E})")
    for k in range(r):
        if T.orders[T.inverse[k]] != T.orders[k] or T.sizes[T.inverse[k]] != T.sizes[k]:
            raise TableError(f"class {k} and its inverse class differ in order or size")
    for i, row in enumerate(T.values):
        if not row[0].is_rational() or row[0].to_int() <= 0:
            raise TableError(f"character {i} has a non-positive degree")
        for k, v in enumerate(row):
            if T.exponent % v.n:
                raise TableError(f"value of character {i} on class {k} has conductor {v.n} not dividing the exponent")
            if row[T.inverse[k]] != v.conjugate():
                raise TableError(f"character {i} is not conjugated by the inverse map at class {k}")
    if any(v != 1 for v in T.values[0]):
        raise TableError("first character is not trivial")
    if sum(d * d for d in T.degrees) != T.order:
        raise TableError("sum of squared degrees differs from the group order")
    defects = orthogonality_defects(T)
    if defects:
        raise OrthogonalityError("; ".join(defects))


def _trivial_first(T: CharacterTable) -> None:
    for i, row in enumerate(T.values):
        if all(v == 1 for v in row):
            if i:
                T.values.insert(0, T.values.pop(i))
            return
    raise TableError("table has no trivial character")


# -- CTX format ------------------------------------------------------------------

def parse_ctx(text: str, source: str = "ingested") -> CharacterTable:
    header = {}
    chars = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if key == "GROUP":
                if not rest:
                    raise ValueError("missing label")
                header["GROUP"] = rest
            elif key in ("ORDER", "EXPONENT", "NCLASSES"):
                header[key] = int(rest)
            elif key in ("SIZES", "ORDERS", "INVERSE"):
                header[key] = [int(t) for t in rest.split()]
            elif key == "CHAR":
                chars.append((lineno, [parse_cycint(t) for t in rest.split()]))
            else:
                raise ValueError(f"unknown keyword {key!r}")
        except (ValueError, CyclotomicError) as exc:
            raise CTXParseError(lineno, str(exc)) from None
        if key in header and key in ("SIZES", "ORDERS", "INVERSE"):
            n = header.get("NCLASSES")
            if n is not None and len(header[key]) != n:
                raise CTXParseError(lineno, f"{key} has {len(header[key])} entries, expected {n}")
    last = len(text.splitlines())
    for key in ("GROUP", "ORDER", "EXPONENT", "NCLASSES", "SIZES", "ORDERS", "INVERSE"):
        if key not in header:
            raise CTXParseError(last, f"missing {key} line")
    r = header["NCLASSES"]
    for lineno, row in chars:
        if len(row) != r:
            raise CTXParseError(lineno, f"CHAR has {len(row)} values, expected {r}")
    if len(chars) != r:
        raise CTXParseError(last, f"found {len(chars)} CHAR lines, expected {r}")
    inv = header["INVERSE"]
    if any(not 1 <= k <= r for k in inv):
        raise CTXParseError(last, "INVERSE entries must lie in 1..NCLASSES")
    T = CharacterTable(
        label=header["GROUP"], order=header["ORDER"], exponent=header["EXPONENT"],
        sizes=header["SIZES"], orders=header["ORDERS"], inverse=[k - 1 for k in inv],
        values=[row for _, row in chars], source=source)
    _trivial_first(T)
    verify_table(T)
    return T


def ingest_table(path) -> CharacterTable:
    path = Path(path)
    T = parse_ctx(path.read_text(encoding="utf-8"), source="ingested")
    T.meta["path"] = str(path)
    return T


def format_ctx(T: CharacterTable) -> str:
    lines = [
        f"GROUP {T.label}", f"ORDER {T.order}", f"EXPONENT {T.exponent}", f"NCLASSES {T.n_classes}",
        "SIZES " + " ".join(map(str, T.sizes)),
        "ORDERS " + " ".join(map(str, T.orders)),
        "INVERSE " + " ".join(str(k + 1) for k in T.inverse),
    ]
    lines += ["CHAR " + " ".join(format_cycint(v) for v in row) for row in T.values]
    return "\n".join(lines) + "\n"


# -- conjugation and restriction ----------------------------------------------------

def conj_permutation(T: CharacterTable) -> list[int]:
    """pi with row pi(i) equal to the complex conjugate of row i."""
    index = {}
    for i, row in enumerate(T.values):
        index.setdefault(tuple(row), i)
    perm = []
    for i, row in enumerate(T.values):
        conj = tuple(row[T.inverse[k]] for k in range(T.n_classes))
        j = index.get(conj)
        if j is None:
            raise TableError(f"conjugate of character {i} is not a row of the table")
        perm.append(j)
    if any(perm[perm[i]] != i for i in range(len(perm))) or perm[0] != 0:
        raise TableError("complex conjugation does not act as an involution fixing the trivial character")
    return perm


def check_fusion(T_G: CharacterTable, T_N: CharacterTable, fusion) -> None:
    if len(fusion) != T_N.n_classes:
        raise TableError(f"fusion has {len(fusion)} entries, subgroup has {T_N.n_classes} classes")
    if T_G.order % T_N.order:
        raise TableError("subgroup order does not divide the group order")
    for k, f in enumerate(fusion):
        if not 0 <= f < T_G.n_classes:
            raise TableError(f"fusion image {f} of class {k} is out of range")
        if T_N.orders[k] != T_G.orders[f]:
            raise TableError(f"fusion maps class {k} of order {T_N.orders[k]} to order {T_G.orders[f]}")
    if fusion[0] != 0:
        raise TableError("fusion must map the identity class to the identity class")


def restrict_and_decompose(T_G: CharacterTable, T_N: CharacterTable, fusion, chi: int) -> dict[int, int]:
    """Multiplicities of the irreducibles of N in the restriction of chi."""
    check_fusion(T_G, T_N, fusion)
    row = [T_G.values[chi][f] for f in fusion]
    out = {}
    for j, psi in enumerate(T_N.values):
        acc = CycInt.from_int(0)
        for k, s in enumerate(T_N.sizes):
            acc = acc + row[k] * psi[T_N.inverse[k]] * s
        if not acc.is_rational() or acc.to_int() % T_N.order:
            raise TableError(f"inner product with character {j} of the subgroup is not an integer")
        m = acc.to_int() // T_N.order
        if m < 0:
            raise TableError("negative multiplicity: fusion is inconsistent")
        if m:
            out[j] = m
    if sum(m * T_N.degree(j) for j, m in out.items()) != T_G.degree(chi):
        raise TableError("restriction degrees do not add up: fusion is inconsistent")
    return out


def parse_fusion(text: str) -> tuple[str, str, list[int]]:
    """FUSION <N-label> <G-label> followed by 1-based class indices."""
    tokens = []
    head = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if head is None:
            parts = line.split()
            if len(parts) < 3 or parts[0] != "FUSION":
                raise CTXParseError(lineno, "expected 'FUSION <N-label> <G-label>'")
            head = (parts[1], parts[2])
            rest = parts[3:]
        else:
            rest = line.split()
        try:
            tokens += [int(t) - 1 for t in rest]
        except ValueError as exc:
            raise CTXParseError(lineno, str(exc)) from None
    if head is None:
        raise CTXParseError(1, "empty fusion file")
    return head[0], head[1], tokens


def fusion_from_groups(G: MatrixGroup, N: MatrixGroup) -> list[int]:
    """Class fusion of a subgroup N <= G given as matrix groups over the same field."""
    cg = G.conjugacy_data()
    cn = N.conjugacy_data()
    return [int(c) for c in cg.classes_of(cn.reps)]


# -- canonical ordering ------------------------------------------------------------

def canonical_row_order(T: CharacterTable) -> None:
    """Sort rows by degree, then value vector; the trivial character stays first."""
    L = T.conductor()

    def key(i):
        row = T.values[i]
        trivial = all(v == 1 for v in row)
        return (row[0].to_int(), not trivial, tuple(v.key(L) for v in row))

    order = sorted(range(T.n_classes), key=key)
    T.values = [T.values[i] for i in order]


def tables_equivalent(T1: CharacterTable, T2: CharacterTable) -> bool:
    """True iff the tables agree after some class permutation preserving order and size."""
    if (T1.order, sorted(zip(T1.orders, T1.sizes))) != (T2.order, sorted(zip(T2.orders, T2.sizes))):
        return False
    r = T1.n_classes
    target = {}
    for row in T1.values:
        target[tuple(row)] = target.get(tuple(row), 0) + 1
    buckets = {}
    for k in range(r):
        buckets.setdefault((T2.orders[k], T2.sizes[k]), []).append(k)
    slots = [[k for k in range(r) if (T1.orders[k], T1.sizes[k]) == key] for key in buckets]
    keys = list(buckets)
    choices = [list(itertools.permutations(buckets[key])) for key in keys]
    total = 1
    for c in choices:
        total *= len(c)
    if total > 200_000:
        raise TableError("too many class permutations to compare tables")
    for combo in itertools.product(*choices):
        perm = [0] * r  # perm[k1] = k2
        for slot, img in zip(slots, combo):
            for k1, k2 in zip(slot, img):
                perm[k1] = k2
        seen = {}
        for row in T2.values:
            t = tuple(row[perm[k]] for k in range(r))
            seen[t] = seen.get(t, 0) + 1
        if seen == target:
            return True
    return False


# -- Burnside-Dixon-Schneider ------------------------------------------------------

def dixon_prime(exponent: int, order: int) -> int:
    """Least prime P = 1 (mod exponent) with P > 2 sqrt(order)."""
    P = exponent + 1
    while not (P * P > 4 * order and sympy.isprime(P)):
        P += exponent
    return P


def class_constants(G: MatrixGroup) -> np.ndarray:
    """a[i, j, k] = #{(x, y) in K_i x K_j : x y = z_k} for the representative z_k."""
    F = G.field
    cd = G.conjugacy_data()
    X = G.elements()
    cls = cd.class_of_element
    inv = G.inverses()
    Xinv = X[inv]
    r = cd.n_classes
    a = np.zeros((r, r, r), dtype=np.int64)
    for k in range(r):
        Y = ff.matmul(F, Xinv, cd.reps[k][None])
        cy = cd.classes_of(Y)
        a[:, :, k] = np.bincount(cls * r + cy, minlength=r * r).reshape(r, r)
    return a


def _split_common_eigenspaces(Fp, mats, r):
    """Common eigenvectors of commuting matrices over a prime field (rows of a basis)."""
    spaces = [np.eye(r, dtype=np.int64)]
    for M in mats:
        if all(len(V) == 1 for V in spaces):
            break
        new = []
        for V in spaces:
            d = len(V)
            if d == 1:
                new.append(V)
                continue
            R, piv, _ = ff._row_reduce(Fp, V)
            B = np.array(R, dtype=np.int64)
            # action on row space: rows of B @ M^T expressed in basis B via pivot columns
            img = ff.matmul(Fp, B, ff.mat_transpose(M))
            A = img[:, piv]                     # img = A @ B
            poly = ff.charpoly(Fp, A)
            roots = sorted(set(ff.roots_with_multiplicity(Fp, poly)))
            got = 0
            for lam in roots:
                shifted = Fp.vsub(A, ff.mat_scalar(Fp, lam, ff.mat_identity(d)))
                # left null vectors c with c (A - lam) = 0 give eigenvectors c B
                ns = ff.nullspace(Fp, ff.mat_transpose(shifted))
                if ns:
                    C = np.array(ns, dtype=np.int64)
                    new.append(ff.matmul(Fp, C, B))
                    got += len(ns)
            if got != d:
                raise TableError("class matrices are not simultaneously diagonalisable over GF(P)")
        spaces = new
    if any(len(V) != 1 for V in spaces):
        raise TableError("class matrices do not separate the characters")
    return [V[0] for V in spaces]


def compute_table(group, label: str | None = None) -> CharacterTable:
    """Character table of an enumerable matrix group (GroupSpec or MatrixGroup)."""
    if isinstance(group, GroupSpec):
        label = label or group.label
        group = group.matrix_group()
    G = group
    label = label or G.label
    F = G.field
    cd = G.conjugacy_data()
    r = cd.n_classes
    order = len(G.elements())
    sizes = cd.sizes
    orders = cd.orders
    e = 1
    for o in orders:
        e = math.lcm(e, o)
    inv_cls = [int(c) for c in cd.classes_of(np.stack([ff.mat_inv(F, z) for z in cd.reps]))]
    if r == 1:
        T = CharacterTable(label, order, e, sizes, orders, inv_cls, [[CycInt.from_int(1)]], "computed")
        verify_table(T)
        return T
    # power maps: class of rep_k^l
    power = []
    for k in range(r):
        z = cd.reps[k]
        pw = [0]
        cur = z.copy()
        for _ in range(1, orders[k]):
            pw.append(cd.class_of(cur))
            cur = ff.matmul(F, cur, z)
        power.append(pw)
    a = class_constants(G)
    P = dixon_prime(e, order)
    Fp = ff.field_create(P, 1)
    rng = np.random.default_rng(0)
    mats = [np.array(a[i] % P, dtype=np.int64) for i in range(r)]
    combo = np.zeros((r, r), dtype=np.int64)
    for i in range(1, r):
        combo = (combo + int(rng.integers(1, P)) * mats[i]) % P
    vectors = _split_common_eigenspaces(Fp, [combo] + mats[1:], r)
    w_e = Fp.pow(Fp.gen, (P - 1) // e)
    rows = []
    for v in vectors:
        v = [int(x) for x in v]
        if v[0] == 0:
            raise TableError("eigenvector vanishes at the identity class")
        s = Fp.inv(v[0])
        omega = [Fp.mul(s, x) for x in v]
        tot = 0
        for k in range(r):
            tot = Fp.add(tot, Fp.mul(Fp.mul(omega[k], omega[inv_cls[k]]), Fp.inv(sizes[k] % P)))
        d2 = Fp.mul(order % P, Fp.inv(tot))
        deg = next((d for d in range(1, math.isqrt(order) + 1) if d * d % P == d2 and order % d == 0), None)
        if deg is None:
            raise TableError("no admissible character degree")
        chi_mod = [Fp.mul(Fp.mul(omega[k], deg), Fp.inv(sizes[k] % P)) for k in range(r)]
        row = []
        for k in range(r):
            o = orders[k]
            zeta = Fp.pow(w_e, e // o)
            inv_o = Fp.inv(o % P)
            mult = []
            for j in range(o):
                acc = 0
                for l in range(o):
                    acc = Fp.add(acc, Fp.mul(chi_mod[power[k][l]], Fp.pow(zeta, (-j * l) % o)))
                m = Fp.mul(acc, inv_o)
                if m > deg:
                    raise TableError("eigenvalue multiplicity out of range; Dixon prime too small")
                mult.append(m)
            if sum(mult) != deg:
                raise TableError("eigenvalue multiplicities do not add up to the degree")
            row.append(CycInt.from_group_ring(o, mult) if o > 1 else CycInt.from_int(deg))
        rows.append(row)
    T = CharacterTable(label, order, e, list(sizes), list(orders), inv_cls, rows, "computed",
                       meta={"dixon_prime": P})
    _trivial_first(T)
    canonical_row_order(T)
    verify_table(T)
    return T


def trivial_group_table() -> CharacterTable:
    T = CharacterTable("1", 1, 1, [1], [1], [0], [[CycInt.from_int(1)]], "computed")
    verify_table(T)
    return T

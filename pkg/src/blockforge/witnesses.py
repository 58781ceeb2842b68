"""Witness semisimple elements in classical groups and certificates for
conditions A, B and C.

Condition A: s != 1 is real, of odd order, with connected centralizer.
Condition B: s is not conjugate to s*z for any central z != 1.
Condition C: s lies in the derived subgroup.

Certificates are JSON documents; :func:`recheck_certificate` re-validates one
from the stored matrices using multiplication and exact rank computations
only.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np
import sympy

from . import fields as ff
from .groups import (ConjugacyWitness, GroupError, GroupSpec, Inconclusive, NotConjugate, Undecidable,
                     center_elements, contains, group_create, i_matrix, in_derived_subgroup, is_conjugate,
                     j_matrix, matrix_from_json, matrix_to_json, spec_element_order, type_a_group)


class WitnessError(ValueError):
    pass


@dataclass
class NoWitness:
    n: int
    q: int
    eps: int
    reason: str


@dataclass
class Witness:
    spec: GroupSpec
    matrix: np.ndarray
    trace: dict
    inverters: list = field(default_factory=list)   # candidate x with x s x^-1 = s^-1


def _odd_part(n: int) -> int:
    while n % 2 == 0:
        n //= 2
    return n


def _check_params(n, q, eps=1):
    if eps not in (1, -1):
        raise WitnessError("eps must be +1 or -1")
    fq = sympy.factorint(q)
    if q < 3 or len(fq) != 1 or 2 in fq:
        raise WitnessError(f"q = {q} must be an odd prime power")
    if n < 2:
        raise WitnessError("n must be at least 2")


def _embed_block(N, block, coords):
    M = ff.mat_identity(N)
    M[np.ix_(coords, coords)] = block
    return M


def _lambda(E, m):
    return ff.primitive_root_of_unity(E, m).code


def _levi_unitary(F, q, A, n):
    """diag(A, 1, ..., 1, j (A^(q) tr)^-1 j) for a 2x2 block A."""
    j2 = j_matrix(2)
    B = ff.matmul(F, ff.matmul(F, j2, ff.mat_inv(F, ff.mat_transpose(ff.mat_frobenius(F, A, q)))), j2)
    M = ff.mat_identity(n)
    M[:2, :2] = A
    M[n - 2:, n - 2:] = B
    return M


def _companion(poly):
    """Companion matrix of a monic polynomial given low degree first."""
    d = len(poly) - 1
    C = np.zeros((d, d), dtype=np.int64)
    for i in range(1, d):
        C[i, i - 1] = 1
    C[:, d - 1] = poly[:d]
    return C


def _phi5_companion(F):
    # x^4 + x^3 + x^2 + x + 1: last column holds -c_i
    m1 = F.neg(1)
    return _companion([m1, m1, m1, m1, 1])


def construct_typeA(n: int, q: int, eps: int):
    """Witness in GL_n(eps q), or :class:`NoWitness` for (n, q) in {(2,3),(3,3)}."""
    _check_params(n, q, eps)
    spec = type_a_group(n, q, eps)
    F = spec.entries
    m_split = _odd_part(q - eps)
    m_other = _odd_part(q + eps)
    trace = {"route": None, "m": None}
    if m_split > 1 or m_other > 1:
        m = m_split if m_split > 1 else m_other
        trace["m"] = m
        E = ff.field_create(spec.p, 2 * spec.base.k)
        lam = _lambda(E, m)
        lam_inv = E.inv(lam)
        if eps == 1 and m_split > 1:
            s = ff.mat_identity(n)
            s[0, 0] = ff.subfield_code(E, F, lam)
            s[1, 1] = ff.subfield_code(E, F, lam_inv)
            x = ff.mat_identity(n)
            x[[0, 1]] = x[[1, 0]]
            trace["route"] = "diagonal diag(lambda, lambda^-1, 1, ...)"
            inverters = [x]
        elif eps == 1:
            t = ff.subfield_code(E, F, E.add(lam, lam_inv))
            C = np.array([[0, F.neg(1)], [1, t]], dtype=np.int64)
            s = _embed_block(n, C, [0, n - 1])
            inverters = [_embed_block(n, j_matrix(2), [0, n - 1])]
            trace["route"] = "companion of x^2 - (lambda + lambda^-1) x + 1 at coordinates {1, n}"
        elif m_split > 1:
            # GU with m | q + 1: unitary 2x2 block on the hyperbolic pair {1, n}
            g = F.gen
            delta = F.pow(g, (q + 1) // 2)          # delta^q = -delta
            mu = F.pow(g, (q - 1) // 2)             # mu^(q+1) = -1
            t = E.add(lam, lam_inv)
            di = F.inv(delta)
            block = np.array([[0, F.neg(di)], [delta, t]], dtype=np.int64)
            s = _embed_block(n, block, [0, n - 1])
            X = ff.mat_scalar(F, mu, np.array([[0, di], [delta, 0]], dtype=np.int64))
            inverters = [_embed_block(n, X, [0, n - 1])]
            trace["route"] = "unitary block [[0, -delta^-1], [delta, lambda + lambda^-1]] at coordinates {1, n}"
        else:
            # GU with m | q - 1: diagonal on the hyperbolic pair {1, n}
            s = ff.mat_identity(n)
            s[0, 0] = lam
            s[n - 1, n - 1] = lam_inv
            inverters = [j_matrix(n)]
            trace["route"] = "diagonal diag(lambda, 1, ..., 1, lambda^-1)"
        trace["lambda"] = ff.FieldElement(E, lam).coefficients()
        trace["lambda_field"] = [E.p, E.k]
    else:
        # q = 3: no odd m > 1 divides q^2 - 1 = 8
        if n < 4:
            return NoWitness(n, q, eps, "no odd-order eigenvalue pair available for q = 3 and n < 4")
        trace["m"] = 5
        E = ff.field_create(3, 4)
        lam = _lambda(E, 5)
        trace["lambda"] = ff.FieldElement(E, lam).coefficients()
        trace["lambda_field"] = [3, 4]
        if eps == 1:
            C = _phi5_companion(F)
            s = _embed_block(n, C, [0, 1, 2, 3])
            small = type_a_group(4, 3, 1)
            res = is_conjugate(small, C, ff.mat_inv(F, C))
            if not isinstance(res, ConjugacyWitness):
                raise WitnessError("could not invert the order-5 companion block")
            inverters = [_embed_block(n, res.conjugator, [0, 1, 2, 3])]
            trace["route"] = "companion of x^4 + x^3 + x^2 + x + 1 in the leading 4x4 block"
        else:
            t = ff.subfield_code(E, F, E.add(lam, E.inv(lam)))
            C = np.array([[0, F.neg(1)], [1, t]], dtype=np.int64)
            s = _levi_unitary(F, q, C, n)
            inverters = [_levi_unitary(F, q, j_matrix(2), n)]
            trace["route"] = "Levi element diag(C, 1, ..., 1, j (C^(q) tr)^-1 j), C with eigenvalues lambda, lambda^4"
    if not contains(spec, s):
        raise WitnessError(f"constructed matrix is not in {spec.label}")
    return Witness(spec, s, trace, inverters)


# -- embeddings of GL_n ---------------------------------------------------------------

def _dual(F, t):
    n = t.shape[0]
    j = j_matrix(n)
    return ff.matmul(F, ff.matmul(F, j, ff.mat_inv(F, ff.mat_transpose(t))), j)


def phi(F, t) -> np.ndarray:
    """GL_n -> Sp_2n or SO+_2n: t -> diag(t, j t^-tr j)."""
    n = t.shape[0]
    M = np.zeros((2 * n, 2 * n), dtype=np.int64)
    M[:n, :n] = t
    M[n:, n:] = _dual(F, t)
    return M


def psi(F, t, middle: int = 1) -> np.ndarray:
    """GL_n -> SO_2n+1 (middle=1) or SO-_2n+2 (middle=2): diag(t, I, j t^-tr j)."""
    n = t.shape[0]
    N = 2 * n + middle
    M = ff.mat_identity(N)
    M[:n, :n] = t
    M[n + middle:, n + middle:] = _dual(F, t)
    return M


def _embedded(spec, t_wit: Witness, route, middle=None):
    F = spec.entries
    Ft = t_wit.spec.entries
    t = t_wit.matrix
    if Ft is not F:
        t = ff.mat_map(ff.embedding_table(Ft, F), t)
    emb = (lambda M: phi(F, M)) if middle is None else (lambda M: psi(F, M, middle))
    s = emb(t)
    inverters = []
    for x in t_wit.inverters:
        if Ft is not F:
            x = ff.mat_map(ff.embedding_table(Ft, F), x)
        inverters.append(emb(x))
    trace = {"route": route, "inner": t_wit.trace, "inner_group": t_wit.spec.label}
    if not contains(spec, s):
        raise WitnessError(f"embedded witness is not in {spec.label}")
    return Witness(spec, s, trace, inverters)


# -- special witnesses over GF(3) --------------------------------------------------------

def _first_symplectic_order5() -> np.ndarray:
    """First symmetric s in Sp4(3) with s^5 = 1 != s (lexicographic over the upper triangle)."""
    F = ff.field_create(3, 1)
    iu = np.triu_indices(4)
    coeffs = np.array(list(itertools.product(range(3), repeat=len(iu[0]))), dtype=np.int64)
    S = np.zeros((len(coeffs), 4, 4), dtype=np.int64)
    S[:, iu[0], iu[1]] = coeffs
    S[:, iu[1], iu[0]] = coeffs
    form = i_matrix(2, 3)
    lhs = ff.matmul(F, ff.matmul(F, ff.mat_transpose(S), form[None]), S)
    S = S[np.all(lhs == form, axis=(1, 2))]
    I = ff.mat_identity(4)
    P5 = ff.mat_pow_batch(F, S, 5)
    ok = np.all(P5 == I, axis=(1, 2)) & ~np.all(S == I, axis=(1, 2))
    return S[np.nonzero(ok)[0][0]]


def _reflection_product(F, gram, W):
    """I - 2 P_W for a nondegenerate subspace spanned by the columns of W (coordinates w.r.t. gram)."""
    Wt = ff.mat_transpose(W)
    small = ff.matmul(F, ff.matmul(F, Wt, gram), W)
    if ff.mat_det(F, small) == 0:
        return None
    P = ff.matmul(F, ff.matmul(F, W, ff.mat_inv(F, small)), ff.matmul(F, Wt, gram))
    two = F.from_int(2)
    return F.vsub(ff.mat_identity(gram.shape[0]), ff.mat_scalar(F, two, P))


def _planes(F, d):
    """2-dimensional subspaces of F^d in reduced echelon form, as d x 2 column bases."""
    for c1, c2 in itertools.combinations(range(d), 2):
        free = [(0, c) for c in range(c1 + 1, d) if c != c2] + [(1, c) for c in range(c2 + 1, d)]
        for vals in itertools.product(range(F.q), repeat=len(free)):
            R = np.zeros((2, d), dtype=np.int64)
            R[0, c1] = 1
            R[1, c2] = 1
            for (r, c), v in zip(free, vals):
                R[r, c] = v
            yield ff.mat_transpose(R).copy()


def _orthogonal_order5(F, gram, j, to_ambient):
    """s = j a with a = I - 2 P_U of order 5, U a nondegenerate plane (first in a fixed order)."""
    d = gram.shape[0]
    I = ff.mat_identity(d)
    for W in _planes(ff.field_create(F.p, 1), d):
        a = _reflection_product(F, gram, W)
        if a is None:
            continue
        a = to_ambient(a)
        s = ff.matmul(F, j, a)
        if not np.array_equal(s, I) and np.array_equal(ff.mat_pow(F, s, 5), I):
            return s
    raise WitnessError("no order-5 element of the form j a found")


def _so5_special(F) -> np.ndarray:
    j5 = j_matrix(5)
    return _orthogonal_order5(F, j5, j5, lambda a: a)


def _so8minus_special(spec) -> np.ndarray:
    F = spec.entries                      # GF(9)
    q = spec.q
    g = F.gen
    delta = F.pow(g, (q + 1) // 2)        # delta^q = -delta
    # rational basis of the middle 4 coordinates: e3, e6, e4 + e5, delta e4 + delta^q e5
    B = np.zeros((4, 4), dtype=np.int64)
    B[0, 0] = 1
    B[3, 1] = 1
    B[1, 2] = B[2, 2] = 1
    B[1, 3] = delta
    B[2, 3] = F.pow(delta, q)
    j4 = j_matrix(4)
    gram = ff.matmul(F, ff.matmul(F, ff.mat_transpose(B), j4), B)
    Binv = ff.mat_inv(F, B)
    base = ff.field_create(q, 1) if sympy.isprime(q) else None
    if base is None:
        raise WitnessError("special SO8- route expects prime q")
    gram_base = np.vectorize(lambda c: ff.subfield_code(F, base, int(c)))(gram)
    emb = ff.embedding_table(base, F)

    def to_ambient(a):
        return ff.matmul(F, ff.matmul(F, B, ff.mat_map(emb, a)), Binv)

    d = 4
    Ib = ff.mat_identity(d)
    for W in _planes(base, d):
        a = _reflection_product(base, gram_base, W)
        if a is None:
            continue
        s_mid = ff.matmul(F, j4, to_ambient(a))
        if np.array_equal(s_mid, Ib) or not np.array_equal(ff.mat_pow(F, s_mid, 5), Ib):
            continue
        s = ff.mat_identity(8)
        s[2:6, 2:6] = s_mid
        if contains(spec, s):
            return s
    raise WitnessError("no order-5 element found in the middle of SO8-(3)")


def _torus_check(kind: str) -> dict:
    """Check that the diagonal torus element over GF(81) is inverted by the form matrix."""
    E = ff.field_create(3, 4)
    lam = _lambda(E, 5)
    powers = [1, 3, 2, 4] if kind == "Sp" else [1, 3, 0, 2, 4]
    d = np.diag([E.pow(lam, k) for k in powers]).astype(np.int64)
    spec = group_create("Sp", 2, 3) if kind == "Sp" else group_create("SO", 2, 3)
    X = spec.form
    res = is_conjugate(spec, d, ff.mat_inv(E, d), hints=[X], F=E, algebraic=True)
    ok = isinstance(res, ConjugacyWitness) and np.array_equal(res.conjugator, X)
    return {"diagonal_exponents": powers, "inverted_by_form": bool(ok), "field": [3, 4]}


def _special(spec: GroupSpec, kind: str) -> Witness:
    F = spec.entries
    if kind == "Sp":
        core = _first_symplectic_order5()
        route = "symmetric order-5 element of Sp4(3), inverted by the symplectic form"
    else:
        core = _so5_special(F)
        route = "j5 times a product of two reflections, order 5 in SO5(3)"
    k = core.shape[0]
    N = spec.N
    off = (N - k) // 2
    s = ff.mat_identity(N)
    s[off:off + k, off:off + k] = core
    trace = {"route": route, "embedding": f"middle coordinates {off + 1}..{off + k} of {N}" if N > k else "none",
             "torus_check": _torus_check(kind)}
    E, eig = ff.eigenvalue_multiset(F, s)
    trace["eigenvalue_field"] = [E.p, E.k]
    if not contains(spec, s):
        raise WitnessError("special witness is not a group element")
    return Witness(spec, s, trace, [spec.form])


def construct_typeC_Sp(n: int, q: int) -> Witness:
    _check_params(n, q)
    spec = group_create("Sp", n, q)
    if q == 3 and n in (2, 3):
        return _special(spec, "Sp")
    inner = construct_typeA(n, q, 1)
    return _embedded(spec, inner, "phi: GL_n(q) -> Sp_2n(q)")


def construct_typeB_SO(n: int, q: int) -> Witness:
    _check_params(n, q)
    spec = group_create("SO", n, q)
    if q == 3 and n in (2, 3):
        return _special(spec, "SO")
    inner = construct_typeA(n, q, 1)
    return _embedded(spec, inner, "psi: GL_n(q) -> SO_2n+1(q)", middle=1)


def construct_typeD(n: int, q: int, eps: int) -> Witness:
    _check_params(n, q, eps)
    if n < 4:
        raise WitnessError("type D needs n >= 4")
    spec = group_create("SO+" if eps == 1 else "SO-", n, q)
    if eps == 1:
        return _embedded(spec, construct_typeA(n, q, 1), "phi: GL_n(q) -> SO+_2n(q)")
    inner = construct_typeA(n - 1, q, 1)
    if isinstance(inner, NoWitness):
        if (n, q) != (4, 3):
            raise WitnessError("unexpected missing type A witness")
        s = _so8minus_special(spec)
        trace = {"route": "j4 times a product of two reflections on the middle 4 coordinates of SO8-(3)",
                 "rational_basis": "e3, e6, e4 + e5, delta e4 + delta^q e5"}
        return Witness(spec, s, trace, [spec.form])
    return _embedded(spec, inner, "psi: GL_(n-1)(q) -> SO-_2n(q)", middle=2)


def construct(kind: str, n: int, q: int, eps: int = 1):
    kind = kind.upper()
    if kind == "A":
        return construct_typeA(n, q, eps)
    if kind == "B":
        return construct_typeB_SO(n, q)
    if kind == "C":
        return construct_typeC_Sp(n, q)
    if kind == "D":
        return construct_typeD(n, q, eps)
    raise WitnessError(f"unknown witness type {kind!r}")


# -- conditions ----------------------------------------------------------------------------

CENTRALIZER_NOTES = {
    "GL": "Z(GL_n) is connected, so centralizers of semisimple elements are connected",
    "GU": "Z(GL_n) is connected, so centralizers of semisimple elements are connected",
    "SL": "asserted via the ambient GL_n(eps q) argument",
    "SU": "asserted via the ambient GL_n(eps q) argument",
    "Sp": "Sp_2n is simply connected, so centralizers of semisimple elements are connected",
    "SOodd": "odd element order is prime to the order of the isogeny kernel, so the centralizer is connected",
    "SOplus": "odd element order is prime to the order of the isogeny kernel, so the centralizer is connected",
    "SOminus": "odd element order is prime to the order of the isogeny kernel, so the centralizer is connected",
}


def _eigen_json(E, roots):
    return {"field": [E.p, E.k], "values": [ff.FieldElement(E, int(r)).coefficients() for r in roots]}


def check_condition_A(spec: GroupSpec, s, hints=()) -> dict:
    F = spec.entries
    o = spec_element_order(spec, s)
    rep = {"order": o, "odd": o % 2 == 1, "nontrivial": o > 1,
           "centralizer_note": CENTRALIZER_NOTES[spec.family]}
    s_inv = ff.mat_pow(F, s, o - 1) if o > 1 else s
    res = is_conjugate(spec, s, s_inv, hints=hints)
    if isinstance(res, ConjugacyWitness):
        rep["reality"] = {"status": "witness", "method": res.method,
                          "conjugator": matrix_to_json(F, res.conjugator)}
    elif isinstance(res, NotConjugate):
        rep["reality"] = {"status": "not-real", "invariant": res.invariant}
    else:
        rep["reality"] = {"status": "inconclusive", "reason": res.reason}
    rep["pass"] = rep["odd"] and rep["nontrivial"] and rep["reality"]["status"] == "witness"
    return rep


def _is_two_power(k: int) -> bool:
    return k & (k - 1) == 0


def check_condition_B(spec: GroupSpec, s) -> dict:
    F = spec.entries
    o = spec_element_order(spec, s)
    E, eig = ff.eigenvalue_multiset(F, s)
    emb = ff.embedding_table(F, E)
    out = {"eigenvalues": _eigen_json(E, eig), "central": []}
    all_ok = True
    for Z in center_elements(spec)[1:]:
        zeta = int(Z[0, 0])
        zo = F.order(zeta)
        entry = {"z": ff.FieldElement(F, zeta).coefficients(), "z_order": zo}
        if o % 2 == 1 and _is_two_power(zo):
            entry["verdict"] = "not-conjugate"
            entry["method"] = "order: |s z| = |s| |z| != |s|"
        else:
            zE = int(emb[zeta])
            shifted = sorted(E.mul(zE, int(r)) for r in eig)
            if shifted != eig:
                entry["verdict"] = "not-conjugate"
                entry["method"] = "eigenvalue multiset"
            else:
                sz = F.vmul(s, np.full_like(s, zeta))
                res = is_conjugate(spec, s, sz)
                if isinstance(res, ConjugacyWitness):
                    entry["verdict"] = "conjugate"
                    entry["method"] = res.method
                    entry["conjugator"] = matrix_to_json(F, res.conjugator)
                elif isinstance(res, NotConjugate):
                    entry["verdict"] = "not-conjugate"
                    entry["method"] = res.invariant
                else:
                    entry["verdict"] = "inconclusive"
                    entry["method"] = res.reason
        if entry["verdict"] != "not-conjugate":
            all_ok = False
        out["central"].append(entry)
    out["pass"] = all_ok
    return out


def check_condition_C(spec: GroupSpec, s) -> dict:
    try:
        ok, method = in_derived_subgroup(spec, s)
    except Undecidable as exc:
        return {"pass": False, "method": "undecidable", "detail": str(exc)}
    return {"pass": bool(ok), "method": method}


def _conclusion(a, b, c):
    if not a:
        return "FAILED: condition A does not hold; no block conclusion"
    if b and c:
        return ("part (c): the derived subgroup modulo its center has a non-principal real 2-block "
                "(parts (a) and (b) also apply)")
    if b:
        return "part (b): the derived subgroup has a non-principal real 2-block (part (a) also applies)"
    return "part (a): the group dual to this one has a non-principal real 2-block"


def certify(spec: GroupSpec, s, trace: dict | None = None, hints=()) -> dict:
    F = spec.entries
    s = np.asarray(s, dtype=np.int64)
    if not contains(spec, s):
        raise GroupError(f"element is not in {spec.label}")
    A = check_condition_A(spec, s, hints)
    B = check_condition_B(spec, s)
    C = check_condition_C(spec, s)
    status = "PASSED" if A["pass"] else "FAILED"
    refs = ["sufficient criterion for non-principal real 2-blocks from conditions A, B, C"]
    if spec.family in ("GL", "GU"):
        refs.append("type A witness construction")
    elif spec.family == "Sp":
        refs.append("type C witness construction")
    elif spec.family == "SOodd":
        refs.append("type B witness construction")
    elif spec.family.startswith("SO"):
        refs.append("type D witness construction")
    return {
        "group": spec.to_json() | {"label": spec.label},
        "field": {"p": F.p, "k": F.k, "modulus": list(map(int, F.modulus))},
        "element": matrix_to_json(F, s),
        "conditions": {"A": A, "B": B, "C": C},
        "trace": trace or {},
        "status": status,
        "conclusion": _conclusion(A["pass"], B["pass"], C["pass"]),
        "references": refs,
    }


def certify_witness(w) -> dict:
    if isinstance(w, NoWitness):
        return {"group": {"family": "GL" if w.eps == 1 else "GU", "n": w.n, "q": w.q, "eps": w.eps},
                "status": "NO_WITNESS", "conclusion": w.reason, "conditions": {}, "trace": {},
                "references": ["type A witness construction"]}
    return certify(w.spec, w.matrix, w.trace, hints=w.inverters)


def dumps(cert: dict) -> str:
    return json.dumps(cert, indent=2, sort_keys=True)


# -- standalone re-checker --------------------------------------------------------------------

def _spec_from_json(g: dict) -> GroupSpec:
    fam = g["family"]
    return group_create(fam, int(g["n"]), int(g["q"]))


def _generalized_multiplicity(E, M, mu) -> int:
    N = M.shape[0]
    A = E.vsub(M, ff.mat_scalar(E, mu, ff.mat_identity(N)))
    return N - ff.mat_rank(E, ff.mat_pow(E, A, N))


def recheck_certificate(cert: dict) -> tuple[bool, list[str]]:
    """Re-validate a certificate from its stored matrices alone."""
    problems = []
    if cert.get("status") == "NO_WITNESS":
        return True, []
    spec = _spec_from_json(cert["group"])
    F = spec.entries
    if [F.p, F.k] != [cert["field"]["p"], cert["field"]["k"]] or list(map(int, F.modulus)) != cert["field"]["modulus"]:
        return False, ["field encoding differs from this installation"]
    s = matrix_from_json(F, cert["element"])
    I = ff.mat_identity(spec.N)
    mul = lambda X, Y: ff.matmul(F, X, Y)
    if not contains(spec, s):
        problems.append("element is not in the group")
    A = cert["conditions"]["A"]
    o = A["order"]
    if not np.array_equal(ff.mat_pow(F, s, o), I):
        problems.append("s^order != 1")
    for r in sympy.factorint(o):
        if np.array_equal(ff.mat_pow(F, s, o // r), I):
            problems.append(f"order is not minimal (prime {r})")
    if A["pass"]:
        if o % 2 == 0 or o == 1:
            problems.append("condition A claims pass with even or trivial order")
        x = matrix_from_json(F, A["reality"]["conjugator"])
        s_inv = ff.mat_pow(F, s, o - 1)
        if not contains(spec, x):
            problems.append("reality conjugator is not in the group")
        if not np.array_equal(mul(x, s), mul(s_inv, x)):
            problems.append("reality conjugator does not invert s")
    B = cert["conditions"]["B"]
    E = ff.field_create(*B["eigenvalues"]["field"])
    eig = [sum(int(d) * E.p**i for i, d in enumerate(c)) for c in B["eigenvalues"]["values"]]
    sE = ff.mat_map(ff.embedding_table(F, E), s)
    if len(eig) != spec.N:
        problems.append("eigenvalue list has the wrong length")
    for mu in set(eig):
        if _generalized_multiplicity(E, sE, mu) != eig.count(mu):
            problems.append("eigenvalue multiplicity claim fails")
    emb = ff.embedding_table(F, E)
    for entry in B["central"]:
        zeta = sum(int(d) * F.p**i for i, d in enumerate(entry["z"]))
        Z = ff.mat_scalar(F, zeta, I)
        if zeta == 1 or not contains(spec, Z):
            problems.append("listed central element is invalid")
            continue
        zo = entry["z_order"]
        if F.pow(zeta, zo) != 1 or any(F.pow(zeta, zo // r) == 1 for r in sympy.factorint(zo)):
            problems.append("central element order claim fails")
        if entry["verdict"] == "conjugate":
            x = matrix_from_json(F, entry["conjugator"])
            if not (contains(spec, x) and np.array_equal(mul(x, s), mul(mul(s, Z), x))):
                problems.append("conjugator for s and s z fails")
        elif entry["method"].startswith("order"):
            if o % 2 == 0 or not _is_two_power(zo):
                problems.append("order argument does not apply")
        elif entry["method"] == "eigenvalue multiset":
            if sorted(E.mul(int(emb[zeta]), mu) for mu in eig) == sorted(eig):
                problems.append("eigenvalue multisets of s and s z coincide")
        elif entry["verdict"] == "not-conjugate":
            problems.append(f"non-conjugacy by {entry['method']} cannot be re-checked offline")
    C = cert["conditions"]["C"]
    if C["pass"]:
        ok, _ = in_derived_subgroup(spec, s)
        if not ok:
            problems.append("derived subgroup claim fails")
    return not problems, problems


# -- exception grid -------------------------------------------------------------------------------

def type_a_grid(ns=range(2, 7), qs=(3, 5, 7, 9), epss=(1, -1)):
    """Certify the type A witnesses over a grid; returns {(n, eps*q): certificate}."""
    out = {}
    for n in ns:
        for q in qs:
            for eps in epss:
                out[(n, eps * q)] = certify_witness(construct_typeA(n, q, eps))
    return out

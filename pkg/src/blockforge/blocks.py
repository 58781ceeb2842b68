"""ℓ-blocks of a character table from central characters.

Two irreducibles lie in the same ℓ-block exactly when their central
characters agree modulo a prime ideal above ℓ on every class.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import sympy

from .chartab import CharacterTable, TableError, conj_permutation, restrict_and_decompose, check_fusion
from .cyclotomic import CycInt, CyclotomicError, IdealReduction


def _valuation(n: int, ell: int) -> int:
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


@dataclass
class BlockPartition:
    ell: int
    blocks: list[list[int]]
    defects: list[int]
    principal: int
    real: list[bool]
    factor_index: int = 0
    n_factors: int = 1
    label: str = ""
    block_of: list[int] = field(default_factory=list)

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def as_sets(self) -> frozenset:
        return frozenset(frozenset(b) for b in self.blocks)

    def to_json(self) -> dict:
        return {
            "group": self.label,
            "prime": self.ell,
            "n_blocks": self.n_blocks,
            "principal": self.principal,
            "blocks": [
                {"index": i, "characters": b, "defect": d, "real": r}
                for i, (b, d, r) in enumerate(zip(self.blocks, self.defects, self.real))
            ],
            "real_blocks": [i for i, r in enumerate(self.real) if r],
            "ideal": {"factor_index": self.factor_index, "n_factors": self.n_factors},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def central_characters(T: CharacterTable) -> list[list[CycInt]]:
    """omega_chi(K) = |K| chi(g_K) / chi(1), with exact (integral) division."""
    out = []
    for i, row in enumerate(T.values):
        d = row[0].to_int()
        try:
            out.append([(v * s).exact_div(d) for v, s in zip(row, T.sizes)])
        except CyclotomicError:
            raise TableError(f"central character of character {i} is not integral") from None
    return out


def block_partition(T: CharacterTable, ell: int = 2, factor_index: int = 0,
                    omega: list[list[CycInt]] | None = None) -> BlockPartition:
    if not sympy.isprime(ell):
        raise ValueError(f"{ell} is not prime")
    omega = omega if omega is not None else central_characters(T)
    R = IdealReduction(T.exponent, ell, factor_index)
    groups: dict[tuple, list[int]] = {}
    for i, row in enumerate(omega):
        groups.setdefault(tuple(R.reduce(w) for w in row), []).append(i)
    blocks = sorted(groups.values(), key=lambda b: b[0])
    a = _valuation(T.order, ell)
    defects = [a - min(_valuation(T.degree(i), ell) for i in b) for b in blocks]
    block_of = [0] * T.n_classes
    for j, b in enumerate(blocks):
        for i in b:
            block_of[i] = j
    for b, d in zip(blocks, defects):
        if d == 0 and len(b) != 1:
            raise TableError("defect-zero block with more than one character")
    perm = conj_permutation(T)
    real = [sorted(perm[i] for i in b) == b for b in blocks]
    for b in blocks:
        images = {block_of[perm[i]] for i in b}
        if len(images) != 1:
            raise TableError("complex conjugation does not map blocks to blocks")
    return BlockPartition(ell, blocks, defects, block_of[0], real, factor_index, R.n_factors,
                          T.label, block_of)


def real_blocks(P: BlockPartition, T: CharacterTable | None = None) -> set[int]:
    """Indices of the blocks whose character sets are stable under conjugation."""
    if T is None:
        return {i for i, r in enumerate(P.real) if r}
    perm = conj_permutation(T)
    return {j for j, b in enumerate(P.blocks) if sorted(perm[i] for i in b) == sorted(b)}


def has_nonprincipal_real_2block(T: CharacterTable, P: BlockPartition | None = None) -> tuple[bool, int | None]:
    P = P or block_partition(T, 2)
    others = sorted(real_blocks(P, T) - {P.principal})
    return (bool(others), others[0] if others else None)


def partition_independent(T: CharacterTable, ell: int = 2) -> tuple[bool, int]:
    """Compare the partitions obtained from every prime ideal above ell."""
    omega = central_characters(T)
    ref = block_partition(T, ell, 0, omega)
    for k in range(1, ref.n_factors):
        if block_partition(T, ell, k, omega).as_sets() != ref.as_sets():
            return False, ref.n_factors
    return True, ref.n_factors


def block_covering(T_G: CharacterTable, T_N: CharacterTable, fusion, b_G: int,
                   P_G: BlockPartition | None = None, P_N: BlockPartition | None = None) -> set[int]:
    """N-blocks covered by the G-block b_G.

    The set is computed from every character of b_G; some-character and
    every-character readings must coincide, otherwise the data is inconsistent.
    """
    check_fusion(T_G, T_N, fusion)
    ell = P_G.ell if P_G else (P_N.ell if P_N else 2)
    P_G = P_G or block_partition(T_G, ell)
    P_N = P_N or block_partition(T_N, ell)
    if P_G.ell != P_N.ell:
        raise ValueError("block partitions are for different primes")
    hit_sets = []
    for chi in P_G.blocks[b_G]:
        mult = restrict_and_decompose(T_G, T_N, fusion, chi)
        hit_sets.append({P_N.block_of[j] for j in mult})
    some = set().union(*hit_sets)
    every = set.intersection(*hit_sets)
    if some != every:
        raise TableError("covered blocks depend on the chosen character of the block")
    return some

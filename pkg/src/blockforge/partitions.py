"""Partitions, 2-cores and the alternating-group witness partitions."""

from __future__ import annotations

from dataclasses import dataclass


class PartitionError(ValueError):
    pass


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __init__(self, parts=()):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise PartitionError("parts must be positive integers")
        object.__setattr__(self, "parts", tuple(sorted(parts, reverse=True)))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        text = text.strip().strip("()[]")
        if not text:
            return cls(())
        try:
            return cls(int(t) for t in text.replace(" ", "").split(",") if t)
        except ValueError:
            raise PartitionError(f"cannot parse partition {text!r}") from None

    @property
    def n(self) -> int:
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"

    def transpose(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(sum(1 for p in self.parts if p > j) for j in range(self.parts[0]))


def _beta_set(parts, length):
    """First-column hook lengths on ``length`` beads (length >= number of parts)."""
    padded = list(parts) + [0] * (length - len(parts))
    return [padded[i] + (length - 1 - i) for i in range(length)]


def _from_beta(beads):
    beads = sorted(beads, reverse=True)
    L = len(beads)
    return [b - (L - 1 - i) for i, b in enumerate(beads) if b - (L - 1 - i) > 0]


def two_core(lam: Partition) -> Partition:
    """Remove rim dominoes greedily, largest row first, until none is removable.

    On beads a domino removal moves one bead from position b to the empty
    position b - 2.
    """
    parts = list(lam.parts)
    while True:
        L = len(parts) + 2
        beads = _beta_set(parts, L)
        occupied = set(beads)
        for b in sorted(beads, reverse=True):
            if b >= 2 and b - 2 not in occupied:
                beads = [x if x != b else b - 2 for x in beads]
                parts = _from_beta(beads)
                break
        else:
            return Partition(parts)


def is_self_conjugate(lam: Partition) -> bool:
    return lam.transpose() == lam


def in_principal_2block_Sn(lam: Partition) -> bool:
    core = two_core(lam).parts
    return core == () if lam.n % 2 == 0 else core == (1,)


@dataclass(frozen=True)
class AlternatingWitness:
    n: int
    partition: Partition
    core: Partition
    self_conjugate: bool
    principal: bool

    @property
    def holds(self) -> bool:
        return not self.self_conjugate and not self.principal

    def to_json(self) -> dict:
        return {"n": self.n, "partition": list(self.partition.parts), "two_core": list(self.core.parts),
                "self_conjugate": self.self_conjugate, "in_principal_block": self.principal,
                "holds": self.holds}


def alternating_witness(n: int) -> AlternatingWitness:
    """(n-3,2,1) for even n, (n-1,1) for odd n; defined for n >= 8."""
    if n < 8:
        raise PartitionError(f"alternating witness needs n >= 8, got {n}")
    lam = Partition((n - 3, 2, 1) if n % 2 == 0 else (n - 1, 1))
    return AlternatingWitness(n, lam, two_core(lam), is_self_conjugate(lam), in_principal_2block_Sn(lam))

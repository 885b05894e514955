"""Run parameters shared by the command line, the scripts and the acceptance suite."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class GroupCheckConfig:
    samples: int = 1000
    exhaustive_order: int = 3**5
    element_cap: int = 5**7
    correspondence_samples: int = 300
    seed: int = 0


@dataclass(frozen=True)
class HatGridConfig:
    dims: tuple = (1, 2, 3)
    classes: tuple = (1, 2, 3, 4)
    primes: tuple = (5, 7)
    per_cell: int = 50
    depth: int = 2
    extra: int = 3
    seed: int = 2024

    def cells(self):
        for p in self.primes:
            for d in self.dims:
                for c in self.classes:
                    if c < p:
                        yield d, c, p


@dataclass(frozen=True)
class StructureConfig:
    pairs: int = 100
    seed: int = 7


@dataclass(frozen=True)
class CensusConfig:
    p: int = 5
    d: int = 2
    c: int = 2
    k: int = 1
    workers: int = 1


@dataclass(frozen=True)
class RunConfig:
    """Options coming from command-line flags."""

    prime: int | None = None
    nilpotency_class: int | None = None
    max_order: int | None = None
    workers: int = 1
    summary_out: str | None = None
    timestamps: bool = False

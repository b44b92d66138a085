"""Greedy partitioning of kernel sequences into well-separated classes.

Two first-fit strategies over the input order:

- ``carleson_greedy`` keeps, inside every class, each member's product of
  pseudo-hyperbolic distances to the others at or above a target delta;
- ``spectral_greedy`` keeps the smallest eigenvalue of every class's
  normalized Grammian block at or above a target c.

Both certify their output by recomputing the class quantities from scratch,
and an exhaustive minimal-partition search (viable up to 12 points) is
provided as an oracle for testing the greedy counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DuplicatePointError, NotAPartitionError, TargetTooHighError
from .geometry import PointSequence, _check_distinct, _rho_matrix, carleson_constants
from .kernels import Grammian, szego_gram

CARLESON_GREEDY = "carleson_greedy"
SPECTRAL_GREEDY = "spectral_greedy"

# Greedy acceptance applies this slack in log space so that certificates
# recomputed with a different summation order still clear the target.
_LOG_MARGIN = 1e-9

_BRUTE_FORCE_CAP = 12


@dataclass(frozen=True)
class ClassCertificate:
    """Recomputed separation quantities for one partition class."""

    labels: tuple[int, ...]
    size: int
    lambda_min: float
    carleson_inf: float | None = None


@dataclass(frozen=True)
class Partition:
    """Disjoint classes covering the input labels, with certificates."""

    classes: tuple[tuple[int, ...], ...]
    strategy: str
    certificates: tuple[ClassCertificate, ...]
    targets: dict

    @property
    def class_count(self) -> int:
        return len(self.classes)


@dataclass(frozen=True)
class ClassCheck:
    labels: tuple[int, ...]
    lambda_min: float
    passed: bool


@dataclass(frozen=True)
class PartitionCheck:
    per_class: tuple[ClassCheck, ...]
    all_pass: bool
    level: float


def partition_carleson(
    seq: PointSequence, delta_target: float, sort_by_modulus: bool = False
) -> Partition:
    """First-fit partition keeping every in-class separation product >= delta.

    Points are consumed in input order (or by ascending modulus when
    ``sort_by_modulus`` is set; first-fit results are order-sensitive and
    the sort is the one knob exposed for that). Each candidate insertion is
    checked incrementally in log space; the final certificates are
    recomputed per class with ``carleson_constants`` and a fresh eigensolve
    of the class's Grammian block.
    """
    if not 0.0 < delta_target < 1.0:
        raise ValueError(f"delta target {delta_target} must lie in (0, 1)")
    z = seq.values()
    _check_distinct(z)
    n = len(z)
    order = np.argsort(np.abs(z), kind="stable") if sort_by_modulus else np.arange(n)

    log_rho = np.log(_rho_matrix(z)) if n > 1 else np.zeros((1, 1))
    np.fill_diagonal(log_rho, 0.0)
    log_target = float(np.log(delta_target)) + _LOG_MARGIN

    members: list[list[int]] = []
    log_products: list[list[float]] = []
    for j in order:
        placed = False
        for c in range(len(members)):
            cand = float(log_rho[j, members[c]].sum())
            if cand < log_target:
                continue
            updated = [
                log_products[c][k] + float(log_rho[members[c][k], j])
                for k in range(len(members[c]))
            ]
            if min(updated) < log_target:
                continue
            members[c].append(int(j))
            log_products[c] = updated + [cand]
            placed = True
            break
        if not placed:
            members.append([int(j)])
            log_products.append([0.0])

    classes = tuple(tuple(seq.labels[i] for i in cls) for cls in members)
    certificates = tuple(_carleson_certificate(seq, cls) for cls in members)
    return Partition(classes, CARLESON_GREEDY, certificates, {"delta_target": delta_target})


def _carleson_certificate(seq: PointSequence, positions: list[int]) -> ClassCertificate:
    sub = seq.subsequence(positions)
    report = carleson_constants(sub)
    lam_min = float(np.linalg.eigvalsh(szego_gram(sub).matrix.matrix)[0])
    return ClassCertificate(
        labels=tuple(sub.labels),
        size=len(sub),
        lambda_min=lam_min,
        carleson_inf=report.infimum,
    )


def partition_spectral(g: Grammian, c_target: float) -> Partition:
    """First-fit partition keeping lambda_min of every class block >= c.

    A singleton always qualifies because the Grammian is normalized, and
    interlacing makes class feasibility monotone, so the greedy pass
    terminates with every certificate at or above the target. Each
    candidate insertion triggers a fresh eigensolve of the enlarged block.
    """
    if c_target > 1.0:
        raise TargetTooHighError(f"c target {c_target} exceeds the normalized diagonal")
    if c_target <= 0.0:
        raise ValueError(f"c target {c_target} must be positive")
    if not g.normalized:
        raise ValueError("spectral partitioning expects a normalized Grammian")
    m = g.matrix.matrix
    n = m.shape[0]

    members: list[list[int]] = []
    for j in range(n):
        placed = False
        for cls in members:
            block = m[np.ix_(cls + [j], cls + [j])]
            if float(np.linalg.eigvalsh(block)[0]) >= c_target:
                cls.append(j)
                placed = True
                break
        if not placed:
            members.append([j])

    classes = tuple(tuple(g.labels[i] for i in cls) for cls in members)
    certificates = []
    for cls in members:
        block = m[np.ix_(cls, cls)]
        certificates.append(
            ClassCertificate(
                labels=tuple(g.labels[i] for i in cls),
                size=len(cls),
                lambda_min=float(np.linalg.eigvalsh(block)[0]),
                carleson_inf=None,
            )
        )
    return Partition(classes, SPECTRAL_GREEDY, tuple(certificates), {"c_target": c_target})


def verify_partition(g: Grammian, partition: Partition, level: float) -> PartitionCheck:
    """Independent check that classes tile the labels and clear the level."""
    seen: set[int] = set()
    total = 0
    for cls in partition.classes:
        cls_set = set(cls)
        if len(cls_set) != len(cls):
            raise NotAPartitionError(f"class {cls} repeats a label")
        if seen & cls_set:
            raise NotAPartitionError(f"label overlap in class {cls}")
        seen |= cls_set
        total += len(cls)
    if seen != set(g.labels) or total != len(g.labels):
        raise NotAPartitionError("classes do not tile the Grammian labels")

    m = g.matrix.matrix
    position = {lab: i for i, lab in enumerate(g.labels)}
    checks = []
    for cls in partition.classes:
        idx = [position[lab] for lab in cls]
        lam = float(np.linalg.eigvalsh(m[np.ix_(idx, idx)])[0])
        checks.append(ClassCheck(tuple(cls), lam, lam >= level))
    return PartitionCheck(tuple(checks), all(c.passed for c in checks), level)


def _minimal_classes(n: int, feasible) -> int:
    """Exhaustive first-fit-shape search for the fewest feasible classes.

    Depth-first over restricted-growth assignments with memoized class
    feasibility; relies on feasibility being monotone under removal (both
    strategies are: dropping a point can only improve a class).
    """
    best = n
    cache: dict[frozenset, bool] = {}

    def check(s: frozenset) -> bool:
        hit = cache.get(s)
        if hit is None:
            hit = cache[s] = feasible(s)
        return hit

    classes: list[frozenset] = []

    def dfs(i: int) -> None:
        nonlocal best
        if len(classes) >= best:
            return
        if i == n:
            best = len(classes)
            return
        for c in range(len(classes)):
            grown = classes[c] | {i}
            if check(grown):
                kept = classes[c]
                classes[c] = grown
                dfs(i + 1)
                classes[c] = kept
        if len(classes) + 1 < best:
            classes.append(frozenset((i,)))
            dfs(i + 1)
            classes.pop()

    dfs(0)
    return best


def minimal_carleson_classes(seq: PointSequence, delta_target: float) -> int:
    """Smallest number of classes any partition can achieve at this delta."""
    n = len(seq)
    if n > _BRUTE_FORCE_CAP:
        raise ValueError(f"exhaustive search is capped at {_BRUTE_FORCE_CAP} points")
    z = seq.values()
    _check_distinct(z)
    log_rho = np.log(_rho_matrix(z)) if n > 1 else np.zeros((1, 1))
    np.fill_diagonal(log_rho, 0.0)
    log_target = float(np.log(delta_target))

    def feasible(s: frozenset) -> bool:
        idx = list(s)
        sub = log_rho[np.ix_(idx, idx)]
        return bool(sub.sum(axis=1).min() >= log_target)

    return _minimal_classes(n, feasible)


def minimal_spectral_classes(g: Grammian, c_target: float) -> int:
    """Smallest number of classes any partition can achieve at this c."""
    n = g.dim
    if n > _BRUTE_FORCE_CAP:
        raise ValueError(f"exhaustive search is capped at {_BRUTE_FORCE_CAP} points")
    m = g.matrix.matrix

    def feasible(s: frozenset) -> bool:
        idx = list(s)
        return bool(np.linalg.eigvalsh(m[np.ix_(idx, idx)])[0] >= c_target)

    return _minimal_classes(n, feasible)

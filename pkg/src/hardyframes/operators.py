"""Positive operators on the truncated monomial model of the disk.

Inner functions here are finite Blaschke products

    phi(z) = u * z^m * prod_k (|a_k| / a_k) (a_k - z) / (1 - conj(a_k) z),

the only inner class with exact coefficient recurrences, so truncated
Toeplitz matrices can be formed without quadrature. The factory produces
multiplication-range projections T_phi T_phi*, their model-space
complements, monomial coordinate projections, the rank-one extension by
constants, diagonal weight operators, and the inverse construction that
realizes a prescribed PSD matrix as the Grammian of projected kernels.

All operator products are formed at order N + M and compressed back to N;
the buffer M doubles (capped) until the idempotency defect of a projection
is acceptable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    IllConditionedGramError,
    IndexOutOfRangeError,
    NegativeWeightError,
    NotPSDError,
    TruncationTooCoarseError,
)
from .geometry import PointSequence
from .hermitian import HermitianMatrix, as_matrix, eig_extremes, psd_inverse, psd_sqrt
from .kernels import TruncationContext, kernel_matrix

OPERATOR_KINDS = frozenset(
    {
        "identity",
        "diagonal",
        "projection_phiH2",
        "projection_model",
        "projection_monomial",
        "projection_c_plus_phi",
        "st_constructed",
        "custom",
    }
)

IDEMPOTENCY_GATE = 1e-6
BUFFER_CAP = 1024
GRAM_CONDITION_FLOOR = 1e-8
CONTRACTION_SLACK = 1e-10
PSD_REL_TOL = 1e-10


@dataclass(frozen=True)
class InnerFunction:
    """A finite Blaschke product with zeros strictly inside the disk.

    Zeros exactly at the origin are absorbed into ``monomial_power``. The
    per-factor front constant |a|/a makes phi(0) >= 0 whenever
    ``monomial_power`` is zero and ``unimodular`` is 1.
    """

    zeros: tuple[complex, ...] = ()
    unimodular: complex = 1.0 + 0.0j
    monomial_power: int = 0

    def __post_init__(self):
        zs = tuple(complex(a) for a in self.zeros)
        m = int(self.monomial_power)
        if m < 0:
            raise ValueError("monomial power must be nonnegative")
        m += sum(1 for a in zs if a == 0)
        zs = tuple(a for a in zs if a != 0)
        for a in zs:
            if abs(a) >= 1.0:
                raise ValueError(f"Blaschke zero {a} must lie strictly inside the disk")
        u = complex(self.unimodular)
        if abs(abs(u) - 1.0) > 1e-12:
            raise ValueError(f"front constant {u} must be unimodular")
        object.__setattr__(self, "zeros", zs)
        object.__setattr__(self, "unimodular", u)
        object.__setattr__(self, "monomial_power", m)

    @property
    def degree(self) -> int:
        return self.monomial_power + len(self.zeros)

    def __call__(self, z) -> complex:
        return evaluate_inner(self, z)


def evaluate_inner(phi: InnerFunction, z) -> complex:
    """Evaluate the Blaschke product by its factored form.

    Accepts the closed disk: on |z| = 1 the result has modulus one, which
    is what makes phi inner in the first place.
    """
    zc = complex(getattr(z, "value", z))
    if abs(zc) > 1.0 + 1e-12:
        raise ValueError(f"point {zc} lies outside the closed unit disk")
    out = phi.unimodular * zc**phi.monomial_power
    for a in phi.zeros:
        out *= (abs(a) / a) * (a - zc) / (1.0 - np.conj(a) * zc)
    return complex(out)


def taylor_coefficients(phi: InnerFunction, count: int) -> np.ndarray:
    """First ``count`` Taylor coefficients of phi at the origin.

    Each factor (|a|/a)(a - z)/(1 - conj(a) z) has the exact expansion
    c_0 = |a|, c_j = (|a|/a) conj(a)^(j-1) (|a|^2 - 1); the product is
    accumulated by truncated polynomial multiplication.
    """
    if count < 1:
        raise ValueError("coefficient count must be positive")
    coeffs = np.zeros(count, dtype=np.complex128)
    coeffs[0] = 1.0
    for a in phi.zeros:
        f = np.empty(count, dtype=np.complex128)
        f[0] = abs(a)
        if count > 1:
            front = (abs(a) / a) * (abs(a) ** 2 - 1.0)
            f[1] = front
            if count > 2:
                f[2:] = front * np.cumprod(np.full(count - 2, np.conj(a)))
        coeffs = np.convolve(coeffs, f)[:count]
    if phi.monomial_power:
        shifted = np.zeros(count, dtype=np.complex128)
        if phi.monomial_power < count:
            shifted[phi.monomial_power:] = coeffs[: count - phi.monomial_power]
        coeffs = shifted
    return phi.unimodular * coeffs


def _lower_toeplitz(c: np.ndarray) -> np.ndarray:
    n = c.size
    idx = np.subtract.outer(np.arange(n), np.arange(n))
    t = np.where(idx >= 0, c[np.clip(idx, 0, n - 1)], 0.0)
    return t.astype(np.complex128)


def toeplitz_matrix(phi: InnerFunction, ctx: TruncationContext) -> np.ndarray:
    """Truncated analytic Toeplitz matrix of phi: entry (m, n) = c_{m-n}.

    Coefficients are produced at order N + M and the matrix is compressed
    to the leading N-by-N block (for an analytic symbol the block is exact;
    the buffer only matters once products are formed).
    """
    c = taylor_coefficients(phi, ctx.order + ctx.buffer)
    return _lower_toeplitz(c)[: ctx.order, : ctx.order]


@dataclass(frozen=True)
class PositiveOperator:
    """A PSD matrix acting on the truncated monomial model.

    ``contraction`` is set exactly when lambda_max <= 1 + 1e-10, so every
    projection and every diagonal with weights in [0, 1] reports True.
    """

    matrix: HermitianMatrix
    id: str
    kind: str
    contraction: bool = field(init=False)

    def __post_init__(self):
        if self.kind not in OPERATOR_KINDS:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        ext = eig_extremes(self.matrix)
        if ext.lambda_min < -PSD_REL_TOL * max(1.0, ext.lambda_max):
            raise NotPSDError(
                f"operator {self.id!r} has lambda_min {ext.lambda_min:.3e}"
            )
        object.__setattr__(self, "contraction", ext.lambda_max <= 1.0 + CONTRACTION_SLACK)

    @property
    def dim(self) -> int:
        return self.matrix.dim

    @property
    def array(self) -> np.ndarray:
        return self.matrix.matrix


def identity(order: int) -> PositiveOperator:
    return PositiveOperator(HermitianMatrix(np.eye(order)), f"identity(N={order})", "identity")


def diagonal_operator(weights) -> PositiveOperator:
    """diag(p) for nonnegative weights; a contraction when all p_n <= 1."""
    p = np.asarray(weights, dtype=np.float64)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("weights must be a nonempty 1-d sequence")
    if np.any(p < 0.0):
        bad = int(np.nonzero(p < 0.0)[0][0])
        raise NegativeWeightError(f"weight p[{bad}] = {p[bad]} is negative")
    return PositiveOperator(
        HermitianMatrix(np.diag(p.astype(np.complex128))),
        f"diagonal(N={p.size})",
        "diagonal",
    )


def _idempotency_defect(p: np.ndarray) -> float:
    return float(np.abs(p @ p - p).max())


def _phi_id(phi: InnerFunction) -> str:
    return f"m={phi.monomial_power},zeros={len(phi.zeros)}"


def _compressed_phi_projection(phi: InnerFunction, ctx: TruncationContext) -> tuple[np.ndarray, float, int]:
    """T_phi T_phi* at escalating buffer sizes until the compression is idempotent."""
    buf = ctx.buffer
    while True:
        k = ctx.order + buf
        t = _lower_toeplitz(taylor_coefficients(phi, k))
        full = t @ t.conj().T
        p = full[: ctx.order, : ctx.order]
        p = (p + p.conj().T) / 2.0
        defect = _idempotency_defect(p)
        if defect <= IDEMPOTENCY_GATE:
            return p, defect, buf
        if buf >= BUFFER_CAP:
            raise TruncationTooCoarseError(
                f"idempotency defect {defect:.3e} above {IDEMPOTENCY_GATE:.1e} "
                f"at buffer cap {BUFFER_CAP}; raise the truncation order"
            )
        buf = min(BUFFER_CAP, max(64, 2 * buf))


def projection_phi_H2(phi: InnerFunction, ctx: TruncationContext) -> PositiveOperator:
    """Orthogonal projection onto phi H^2, compressed to the truncation window."""
    p, _, _ = _compressed_phi_projection(phi, ctx)
    return PositiveOperator(
        HermitianMatrix(p), f"projection_phiH2({_phi_id(phi)})", "projection_phiH2"
    )


def projection_model_space(phi: InnerFunction, ctx: TruncationContext) -> PositiveOperator:
    """Projection onto the model space (phi H^2)^perp; rank equals deg(phi)."""
    p, _, _ = _compressed_phi_projection(phi, ctx)
    return PositiveOperator(
        HermitianMatrix(np.eye(ctx.order) - p),
        f"projection_model({_phi_id(phi)})",
        "projection_model",
    )


def projection_monomial_span(excluded, order: int) -> PositiveOperator:
    """Projection onto the closed span of the monomials NOT in ``excluded``."""
    if order < 1:
        raise ValueError("order must be positive")
    d = np.ones(order)
    seen = sorted({int(j) for j in excluded})
    for j in seen:
        if j < 0 or j >= order:
            raise IndexOutOfRangeError(f"monomial index {j} outside [0, {order})")
        d[j] = 0.0
    return PositiveOperator(
        HermitianMatrix(np.diag(d.astype(np.complex128))),
        f"projection_monomial(excluded={seen})",
        "projection_monomial",
    )


def projection_c_plus_phi(phi: InnerFunction, ctx: TruncationContext) -> PositiveOperator:
    """Projection onto constants + phi H^2.

    The constant direction is orthogonalized against phi H^2 and added as a
    rank-one piece; for nonconstant phi the leftover has norm
    sqrt(1 - |phi(0)|^2) > 0.
    """
    p, _, _ = _compressed_phi_projection(phi, ctx)
    e0 = np.zeros(ctx.order, dtype=np.complex128)
    e0[0] = 1.0
    v = e0 - p @ e0
    nv = np.linalg.norm(v)
    if nv > 1e-8:
        v = v / nv
        p = p + np.outer(v, v.conj())
    defect = _idempotency_defect(p)
    if defect > 1e-8:
        raise TruncationTooCoarseError(
            f"constants + phi H^2 projection has idempotency defect {defect:.3e}"
        )
    return PositiveOperator(
        HermitianMatrix(p), f"projection_c_plus_phi({_phi_id(phi)})", "projection_c_plus_phi"
    )


def st_construct(q, seq: PointSequence, ctx: TruncationContext, delta: float) -> PositiveOperator:
    """Build a positive operator whose projected-kernel Grammian equals a
    prescribed PSD matrix.

    With V the matrix of normalized truncated kernel vectors and
    G = V* V their Gram matrix, the operator

        R = V G^-1 Q G^-1 V*,   P = R^(1/2)

    satisfies (<P k~_j, P k~_i>)_ij = Q up to truncation, since
    V* R V = Q exactly. Q must be PSD with diagonal at least ``delta``
    (that floor becomes the lower norm bound ||P k~_i||^2 >= delta), and
    the kernel Gram matrix must be invertible at the 1e-8 level.
    """
    qm = as_matrix(q)
    m = qm.shape[0]
    if m != len(seq):
        raise ValueError(f"Q is {m}x{m} but the sequence has {len(seq)} points")
    q_ext = eig_extremes(qm)
    if q_ext.lambda_min < -PSD_REL_TOL * max(1.0, q_ext.lambda_max):
        raise NotPSDError(f"Q has lambda_min {q_ext.lambda_min:.3e}")
    if delta <= 0.0:
        raise ValueError("delta must be positive")
    diag_min = float(np.real(np.diagonal(qm)).min())
    if diag_min < delta - 1e-12:
        raise ValueError(f"diagonal minimum {diag_min:.6f} below delta {delta}")

    v = kernel_matrix(seq, ctx, normalize=True)
    g = v.conj().T @ v
    g = (g + g.conj().T) / 2.0
    g_ext = eig_extremes(g)
    if g_ext.lambda_min < GRAM_CONDITION_FLOOR:
        raise IllConditionedGramError(
            f"kernel Gram matrix has lambda_min {g_ext.lambda_min:.3e} "
            f"below {GRAM_CONDITION_FLOOR:.1e}"
        )
    g_inv, _ = psd_inverse(g)
    middle = g_inv @ qm @ g_inv
    r = v @ middle @ v.conj().T
    p = psd_sqrt((r + r.conj().T) / 2.0)
    return PositiveOperator(p, f"st(points={m},delta={delta})", "st_constructed")


def st_roundtrip_defect(op: PositiveOperator, q, seq: PointSequence, ctx: TruncationContext) -> tuple[float, float]:
    """Maximum entry deviation of the realized Grammian from Q, plus the
    smallest realized squared norm min_i ||P k~_i||^2."""
    qm = as_matrix(q)
    w = op.array @ kernel_matrix(seq, ctx, normalize=True)
    realized = w.conj().T @ w
    defect = float(np.abs(realized - qm).max())
    min_norm_sq = float(np.real(np.diagonal(realized)).min())
    return defect, min_norm_sq


def range_contains_phi(op: PositiveOperator, phi: InnerFunction, ctx: TruncationContext, tol: float = 1e-6) -> bool:
    """Test phi H^2 inside the fixed space of ``op`` on the truncated model.

    Columns of T_phi are the truncations of z^n phi; only columns whose
    tail has safely left the window are checked, so the answer reflects the
    operators rather than truncation dust.
    """
    t = toeplitz_matrix(phi, ctx)
    keep = max(1, ctx.order - max(2 * ctx.buffer, 128))
    want = t[:, :keep]
    got = op.array @ want
    return float(np.abs(got - want).max()) <= tol


def from_spec(spec: dict, matrix_from_json=None) -> PositiveOperator:
    """Build an operator from its JSON description.

    The ``type`` field selects the factory; ``N`` and optional ``buffer``
    fix the truncation. Kept here so the CLI and the verifier share one
    dispatch table.
    """
    if "type" not in spec:
        raise ValueError("operator spec needs a 'type' field")
    kind = spec["type"]
    order = int(spec.get("N", 256))
    ctx = TruncationContext(order, int(spec.get("buffer", 64)))

    def inner_from(d) -> InnerFunction:
        zeros = tuple(complex(re, im) for re, im in d.get("zeros", []))
        u = d.get("unimodular")
        uc = complex(u[0], u[1]) if u is not None else 1.0 + 0.0j
        return InnerFunction(zeros, uc, int(d.get("m", 0)))

    if kind == "diagonal":
        return diagonal_operator(spec["weights"])
    if kind == "projection_phiH2":
        return projection_phi_H2(inner_from(spec["inner"]), ctx)
    if kind == "projection_model":
        return projection_model_space(inner_from(spec["inner"]), ctx)
    if kind == "projection_monomial":
        return projection_monomial_span(spec["excluded"], order)
    if kind == "c_plus_phi":
        return projection_c_plus_phi(inner_from(spec["inner"]), ctx)
    if kind == "st":
        if matrix_from_json is None:
            raise ValueError("st spec requires a matrix parser")
        qm = matrix_from_json(spec["Q"])
        pts = PointSequence(tuple(complex(re, im) for re, im in spec["points"]))
        delta = float(spec.get("delta", np.real(np.diagonal(qm)).min()))
        return st_construct(qm, pts, ctx, delta)
    if kind == "custom":
        if matrix_from_json is None:
            raise ValueError("custom spec requires a matrix parser")
        return PositiveOperator(HermitianMatrix(matrix_from_json(spec["matrix"])), "custom", "custom")
    raise ValueError(f"unknown operator type {kind!r}")

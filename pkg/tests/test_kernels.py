"""Kernel vectors and Grammians against a plain-loop series oracle.

The oracle sums the geometric series for the normalized kernel inner
product term by term, with no vectorization and no shared helpers, so the
closed-form and matrix routes are checked independently.
"""

import math

import numpy as np
import pytest

from hardyframes import (
    DegenerateKernelError,
    DimensionMismatchError,
    Grammian,
    HermitianMatrix,
    NotPSDError,
    PointSequence,
    Provenance,
    TruncationContext,
    WeightOutOfRangeError,
    eig_extremes,
    identity,
    image_gram,
    kernel_matrix,
    kernel_vector,
    normalized_gram,
    projection_monomial_span,
    range_space_gram,
    szego_gram,
    weighted_hardy_kernel,
)


def oracle_entry(zi, zj, order):
    """Normalized kernel inner product <k~_j, k~_i> summed term by term."""
    acc = 0.0 + 0.0j
    term = 1.0 + 0.0j
    x = zi * complex(zj).conjugate()
    for _ in range(order):
        acc += term
        term *= x
    scale = math.sqrt((1.0 - abs(zi) ** 2) * (1.0 - abs(zj) ** 2))
    return scale * acc


def oracle_gram(points, order):
    n = len(points)
    g = np.empty((n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            g[i, j] = oracle_entry(points[i], points[j], order)
    return g


def random_points(rng, count, radius=0.85):
    pts = []
    while len(pts) < count:
        z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        if abs(z) < radius:
            pts.append(z)
    return PointSequence(pts)


class TestTruncationContext:
    def test_defaults(self):
        ctx = TruncationContext()
        assert ctx.order == 256
        assert ctx.buffer == 64

    def test_tail_bound_formula(self):
        ctx = TruncationContext(order=10)
        r = 0.5
        assert ctx.tail_bound(r) == pytest.approx(r**10 / (1 - r**2))
        assert ctx.tail_bound(0.0) == 0.0

    def test_tail_bound_rejects_unit_radius(self):
        with pytest.raises(ValueError):
            TruncationContext().tail_bound(1.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            TruncationContext(order=0)
        with pytest.raises(ValueError):
            TruncationContext(order=8, buffer=-1)


class TestKernelVector:
    def test_entries_are_conjugate_powers(self):
        w = 0.3 + 0.4j
        kv = kernel_vector(w, TruncationContext(order=6))
        expected = [complex(w).conjugate() ** n for n in range(6)]
        assert np.allclose(kv.coeffs, expected, rtol=0, atol=1e-15)
        assert kv.point == w
        assert not kv.normalized

    def test_normalized_has_unit_norm(self):
        kv = kernel_vector(0.7j, TruncationContext(order=64), normalize=True)
        assert np.linalg.norm(kv.coeffs) == pytest.approx(1.0, abs=1e-14)

    def test_truncated_norm_matches_closed_form(self):
        # ||k_w||^2 = (1 - |w|^{2N}) / (1 - |w|^2)
        w = 0.6
        n = 40
        kv = kernel_vector(w, TruncationContext(order=n))
        expected = (1 - w ** (2 * n)) / (1 - w**2)
        assert np.linalg.norm(kv.coeffs) ** 2 == pytest.approx(expected, rel=1e-13)

    def test_reproducing_on_polynomials(self):
        # <p, k_w> = p(w) for any polynomial inside the truncation order
        rng = np.random.default_rng(7)
        ctx = TruncationContext(order=32)
        for _ in range(20):
            deg = int(rng.integers(0, 8))
            coeffs = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
            w = complex(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6))
            kv = kernel_vector(w, ctx)
            pairing = complex(np.dot(np.conj(kv.coeffs[: deg + 1]), coeffs))
            value = complex(np.polyval(coeffs[::-1], w))
            assert pairing == pytest.approx(value, abs=1e-12)


class TestKernelMatrix:
    def test_columns_match_kernel_vector(self):
        seq = PointSequence([0.1, 0.5j, -0.3 + 0.2j])
        ctx = TruncationContext(order=20)
        v = kernel_matrix(seq, ctx)
        for j, w in enumerate(seq.values()):
            assert np.allclose(v[:, j], kernel_vector(w, ctx).coeffs, atol=1e-15)

    def test_normalized_columns(self):
        seq = PointSequence([0.8, -0.8j])
        v = kernel_matrix(seq, TruncationContext(order=128), normalize=True)
        assert np.allclose(np.linalg.norm(v, axis=0), 1.0, atol=1e-14)


class TestSzegoGram:
    def test_two_point_worked_example(self):
        g = szego_gram(PointSequence([0.0, 0.6]))
        assert np.allclose(g.matrix.matrix, [[1.0, 0.8], [0.8, 1.0]], atol=1e-15)
        ext = eig_extremes(g.matrix)
        assert ext.lambda_min == pytest.approx(0.2, abs=1e-14)
        assert ext.lambda_max == pytest.approx(1.8, abs=1e-14)

    def test_matches_series_oracle(self):
        rng = np.random.default_rng(11)
        seq = random_points(rng, 6, radius=0.8)
        g = szego_gram(seq).matrix.matrix
        # 0.8^1500 ~ 1e-146: the truncated oracle is exact at this depth
        expected = oracle_gram(seq.values(), 1500)
        assert np.abs(g - expected).max() < 1e-12

    def test_agrees_with_truncated_route(self):
        rng = np.random.default_rng(13)
        seq = random_points(rng, 5, radius=0.7)
        ctx = TruncationContext(order=256)
        closed = szego_gram(seq).matrix.matrix
        truncated = normalized_gram(seq, ctx).matrix.matrix
        assert np.abs(closed - truncated).max() < 1e-10

    def test_provenance(self):
        seq = PointSequence([0.2, 0.3], labels=(5, 9))
        g = szego_gram(seq)
        assert g.normalized
        assert g.provenance.space == "H2"
        assert g.provenance.operator_id is None
        assert g.labels == (5, 9)
        assert g.dim == 2

    def test_hermitian_for_complex_points(self):
        seq = PointSequence([0.3 + 0.4j, -0.5j, 0.1])
        m = szego_gram(seq).matrix.matrix
        assert np.abs(m - m.conj().T).max() == 0.0


class TestGrammianValidation:
    def _prov(self, n):
        return Provenance("H2", None, tuple([0.1 * k for k in range(n)]), tuple(range(n)))

    def test_rejects_indefinite(self):
        m = HermitianMatrix(np.array([[1.0, 2.0], [2.0, 1.0]]))
        with pytest.raises(NotPSDError):
            Grammian(m, self._prov(2), normalized=False)

    def test_rejects_bad_diagonal_when_normalized(self):
        m = HermitianMatrix(np.diag([1.0, 2.0]))
        with pytest.raises(ValueError):
            Grammian(m, self._prov(2), normalized=True)

    def test_rejects_label_mismatch(self):
        m = HermitianMatrix(np.eye(3))
        with pytest.raises(DimensionMismatchError):
            Grammian(m, self._prov(2))


class TestRangeSpaceGram:
    def test_identity_recovers_szego(self):
        rng = np.random.default_rng(19)
        seq = random_points(rng, 4, radius=0.7)
        ctx = TruncationContext(order=256)
        g = range_space_gram(identity(ctx.order), seq, ctx).matrix.matrix
        closed = szego_gram(seq).matrix.matrix
        assert np.abs(g - closed).max() < 1e-10

    def test_degenerate_kernel_raises(self):
        # dropping the constant direction kills the kernel at the origin
        ctx = TruncationContext(order=32)
        op = projection_monomial_span([0], ctx.order)
        seq = PointSequence([0.5, 0.0])
        with pytest.raises(DegenerateKernelError) as exc:
            range_space_gram(op, seq, ctx)
        assert exc.value.index == 1

    def test_monomial_span_closed_form(self):
        # P = projection onto span{1, z}: <P k_w, P k_z> = 1 + z conj(w)
        ctx = TruncationContext(order=32)
        op = projection_monomial_span(range(2, ctx.order), ctx.order)
        z, w = 0.4 + 0.1j, -0.2 + 0.3j
        seq = PointSequence([z, w])
        g = range_space_gram(op, seq, ctx).matrix.matrix
        inner = 1.0 + z * np.conj(w)
        norm_z = math.sqrt(1.0 + abs(z) ** 2)
        norm_w = math.sqrt(1.0 + abs(w) ** 2)
        assert g[0, 1] == pytest.approx(inner / (norm_z * norm_w), abs=1e-13)
        assert g[0, 0] == pytest.approx(1.0)

    def test_order_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            range_space_gram(identity(16), PointSequence([0.1]), TruncationContext(order=32))

    def test_provenance_records_operator(self):
        ctx = TruncationContext(order=64)
        seq = PointSequence([0.2, 0.5j])
        g = range_space_gram(identity(ctx.order), seq, ctx)
        assert g.provenance.space == "H(P)"
        assert g.provenance.operator_id == "identity(N=64)"
        assert g.provenance.truncation_error > 0.0


class TestImageGram:
    def test_identity_gives_szego(self):
        rng = np.random.default_rng(23)
        seq = random_points(rng, 4, radius=0.7)
        ctx = TruncationContext(order=256)
        g = image_gram(identity(ctx.order), seq, ctx).matrix.matrix
        assert np.abs(g - szego_gram(seq).matrix.matrix).max() < 1e-10

    def test_matches_manual_product(self):
        ctx = TruncationContext(order=48)
        seq = PointSequence([0.3, -0.4j, 0.2 + 0.2j])
        op = projection_monomial_span([0, 2, 5], ctx.order)
        g = image_gram(op, seq, ctx).matrix.matrix
        v = kernel_matrix(seq, ctx, normalize=True)
        w = op.array @ v
        assert np.abs(g - w.conj().T @ w).max() < 1e-13

    def test_diagonal_below_one_for_projection(self):
        ctx = TruncationContext(order=48)
        seq = PointSequence([0.5, 0.6j])
        op = projection_monomial_span([0], ctx.order)
        g = image_gram(op, seq, ctx)
        assert not g.normalized
        d = np.real(np.diagonal(g.matrix.matrix))
        assert np.all(d <= 1.0 + 1e-12)
        assert np.all(d < 0.999)


class TestWeightedHardyKernel:
    def test_all_ones_is_szego_partial_sum(self):
        z, w = 0.5, 0.25 + 0.1j
        n = 1200
        val = weighted_hardy_kernel(np.ones(n), z, w)
        assert val == pytest.approx(1.0 / (1.0 - z * np.conj(w)), abs=1e-13)

    def test_geometric_weights_closed_form(self):
        # p_n = s^n gives the kernel 1 / (1 - s z conj(w))
        s = 0.5
        z, w = 0.6, 0.4 - 0.3j
        val = weighted_hardy_kernel(s ** np.arange(800), z, w)
        assert val == pytest.approx(1.0 / (1.0 - s * z * np.conj(w)), abs=1e-13)

    def test_zero_weights_edge(self):
        # s = 0 keeps only the constant term, including at z = w = 0
        assert weighted_hardy_kernel([1.0, 0.0, 0.0], 0.0, 0.0) == 1.0
        assert weighted_hardy_kernel([1.0], 0.3, 0.7j) == 1.0

    def test_series_oracle(self):
        rng = np.random.default_rng(29)
        for _ in range(10):
            n = int(rng.integers(1, 30))
            p = rng.uniform(0.0, 1.0, size=n)
            z = complex(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6))
            w = complex(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6))
            acc = 0.0 + 0.0j
            for k in range(n):
                acc += p[k] * (z * np.conj(w)) ** k
            assert weighted_hardy_kernel(p, z, w) == pytest.approx(complex(acc), abs=1e-13)

    def test_rejects_out_of_range(self):
        with pytest.raises(WeightOutOfRangeError):
            weighted_hardy_kernel([1.0, 1.5], 0.1, 0.1)
        with pytest.raises(WeightOutOfRangeError):
            weighted_hardy_kernel([-0.1], 0.1, 0.1)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            weighted_hardy_kernel([], 0.1, 0.1)


def test_contractive_weights_shrink_gram():
    # pointwise weights <= 1 push the weighted Gram below the Szego one
    rng = np.random.default_rng(31)
    pts = [complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)) for _ in range(4)]
    n = 600
    p = rng.uniform(0.0, 1.0, size=n)
    gw = np.array([[weighted_hardy_kernel(p, a, b) for b in pts] for a in pts])
    gs = np.array([[weighted_hardy_kernel(np.ones(n), a, b) for b in pts] for a in pts])
    diff = gs - gw
    assert float(np.linalg.eigvalsh((diff + diff.conj().T) / 2)[0]) >= -1e-11

"""Seeded verification suite: reproducibility, witnesses, samplers, config."""

import json

import numpy as np
import pytest

from hardyframes import (
    CheckResult,
    ConfigInvalidError,
    InnerFunction,
    PointSequence,
    SuiteConfig,
    TruncationContext,
    carleson_constants,
    evaluate_inner,
    image_gram,
    projection_phi_H2,
    run_suite,
    suite_passed,
    szego_gram,
)
from hardyframes.io import suite_report_to_json
from hardyframes.verify import (
    CHECK_IDS,
    DEFAULT_TOLERANCES,
    POINT_FAMILIES,
    check_weighted_hardy,
    sample_carleson_separated,
    sample_clustered,
    sample_radial_geometric,
    sample_uniform_disk,
)

SMALL = SuiteConfig(seed=42, trials=4, order=128)


class TestSuiteConfig:
    def test_defaults_validate(self):
        SuiteConfig().validate()

    def test_rejects_zero_trials(self):
        with pytest.raises(ConfigInvalidError):
            SuiteConfig(trials=0).validate()

    def test_rejects_tiny_order(self):
        with pytest.raises(ConfigInvalidError):
            SuiteConfig(order=4).validate()

    def test_rejects_empty_families(self):
        with pytest.raises(ConfigInvalidError):
            SuiteConfig(point_families=()).validate()

    def test_rejects_unknown_family(self):
        with pytest.raises(ConfigInvalidError):
            SuiteConfig(point_families=("uniform_disk", "lattice")).validate()

    def test_rejects_unknown_tolerance_key(self):
        with pytest.raises(ConfigInvalidError):
            SuiteConfig(tolerances={"bogus": 1e-6}).validate()

    def test_rejects_negative_tolerance(self):
        with pytest.raises(ConfigInvalidError):
            SuiteConfig(tolerances={"st_roundtrip": -1e-6}).validate()

    def test_zero_tolerance_allowed(self):
        SuiteConfig(tolerances={"st_roundtrip": 0.0}).validate()

    def test_tol_lookup(self):
        cfg = SuiteConfig(tolerances={"st_roundtrip": 1e-3})
        assert cfg.tol("st_roundtrip") == 1e-3
        assert cfg.tol("loewner_chain") == DEFAULT_TOLERANCES["loewner_chain"]


class TestRunSuite:
    def test_small_suite_passes(self):
        results = run_suite(SMALL)
        assert suite_passed(results)
        assert tuple(r.check_id for r in results) == CHECK_IDS
        for r in results:
            assert r.trials == SMALL.trials
            assert r.failures == 0
            assert r.witness is None
            assert r.passed
            assert r.worst_violation < DEFAULT_TOLERANCES[r.check_id]

    def test_deterministic_results(self):
        first = run_suite(SMALL)
        second = run_suite(SuiteConfig(seed=42, trials=4, order=128))
        assert first == second

    def test_report_bytes_identical(self):
        a = json.dumps(suite_report_to_json(SMALL, run_suite(SMALL)), indent=2)
        b = json.dumps(suite_report_to_json(SMALL, run_suite(SMALL)), indent=2)
        assert a == b

    def test_seed_changes_results(self):
        base = run_suite(SMALL)
        other = run_suite(SuiteConfig(seed=43, trials=4, order=128))
        assert [r.worst_violation for r in base] != [r.worst_violation for r in other]

    def test_validates_before_running(self):
        with pytest.raises(ConfigInvalidError):
            run_suite(SuiteConfig(trials=0))

    def test_zero_tolerance_produces_failure_and_witness(self):
        cfg = SuiteConfig(
            seed=42, trials=3, order=128,
            tolerances={"toeplitz_covariance": 0.0},
        )
        results = run_suite(cfg)
        assert not suite_passed(results)
        bad = results[CHECK_IDS.index("toeplitz_covariance")]
        assert bad.failures > 0
        assert not bad.passed
        assert bad.witness is not None
        for key in ("trial", "family", "points", "zeros", "defect"):
            assert key in bad.witness

    def test_witness_replays(self):
        # a recorded witness carries everything needed to rerun the trial
        cfg = SuiteConfig(
            seed=42, trials=3, order=128,
            tolerances={"toeplitz_covariance": 0.0},
        )
        results = run_suite(cfg)
        wit = results[CHECK_IDS.index("toeplitz_covariance")].witness
        seq = PointSequence([complex(re, im) for re, im in wit["points"]])
        phi = InnerFunction(
            tuple(complex(re, im) for re, im in wit["zeros"]),
            1.0,
            wit["monomial_power"],
        )
        ctx = TruncationContext(cfg.order, 64)
        lhs = image_gram(projection_phi_H2(phi, ctx), seq, ctx).matrix.matrix
        values = np.array([evaluate_inner(phi, z) for z in seq.points])
        rhs = szego_gram(seq).matrix.matrix * np.outer(values, np.conj(values))
        defect = float(np.abs(lhs - rhs).max())
        assert defect == pytest.approx(wit["defect"], rel=1e-12)

    def test_weighted_zero_ratio_trial_runs(self):
        # every tenth trial pins the weight ratio to zero (rank-one kernel)
        cfg = SuiteConfig(seed=42, trials=10, order=128)
        result = check_weighted_hardy(cfg)
        assert result.passed
        assert result.trials == 10


class TestSamplers:
    def test_uniform_disk(self):
        rng = np.random.default_rng(1)
        pts = sample_uniform_disk(rng, 12, max_modulus=0.8)
        assert len(pts) == 12
        assert len(set(pts)) == 12
        assert max(abs(z) for z in pts) <= 0.8

    def test_radial_geometric_marches_outward(self):
        rng = np.random.default_rng(2)
        pts = sample_radial_geometric(rng, 10, max_modulus=0.9)
        radii = [abs(z) for z in pts]
        assert all(b >= a - 1e-15 for a, b in zip(radii, radii[1:]))
        assert max(radii) <= 0.9 + 1e-15

    def test_carleson_separated_certifies(self):
        rng = np.random.default_rng(3)
        for count in (2, 6, 12):
            pts = sample_carleson_separated(rng, count, min_infimum=0.3)
            report = carleson_constants(PointSequence(tuple(pts)))
            assert report.infimum >= 0.3

    def test_carleson_separated_single_point(self):
        rng = np.random.default_rng(4)
        pts = sample_carleson_separated(rng, 1)
        assert len(pts) == 1
        assert abs(pts[0]) < 1.0

    def test_clustered_stays_inside(self):
        rng = np.random.default_rng(5)
        pts = sample_clustered(rng, 9, max_modulus=0.9)
        assert len(pts) == 9
        assert len(set(pts)) == 9
        assert max(abs(z) for z in pts) <= 0.9

    def test_families_registry_complete(self):
        assert set(POINT_FAMILIES) == {
            "uniform_disk",
            "radial_geometric",
            "carleson_separated",
            "clustered",
        }


def test_check_result_passed_property():
    ok = CheckResult("st_roundtrip", 5, 0, 1e-12)
    bad = CheckResult("st_roundtrip", 5, 2, 1e-3, {"defect": 1e-3})
    assert ok.passed and not bad.passed

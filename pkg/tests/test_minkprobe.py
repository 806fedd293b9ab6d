from dataclasses import replace

import numpy as np
import pytest

from wosq import minkprobe
from wosq.errors import ConfigError
from wosq.minkprobe import (BoxCount, ProbeSpec, boundary_box_count,
                            growth_exponent, indicator_theta, probe_study)


class TestIndicator:
    def test_disk_hand_trace(self, disk_example):
        # from (0, 0.5), x=0.25 moves straight up into the shell; x=0.75
        # moves to the center, far from the boundary
        assert indicator_theta(disk_example, 1, 0.05, [0.25]) == 1
        assert indicator_theta(disk_example, 1, 0.05, [0.75]) == 0

    def test_k2_requires_surviving_step_one(self, disk_example):
        # x1=0.25 is already inside the shell at step 1, so no k=2 landing
        assert indicator_theta(disk_example, 2, 0.05, [0.25, 0.25]) == 0
        # via the center: step 1 misses the shell, step 2 lands exactly
        assert indicator_theta(disk_example, 2, 0.05, [0.75, 0.1]) == 1

    def test_huge_eps_everything_lands_at_step_one(self, disk_example, rng):
        x = rng.random((256, 1))
        out = indicator_theta(disk_example, 1, 2.0, x)
        assert np.all(out == 1)

    def test_array_input(self, disk_example, rng):
        x = rng.random((100, 2))
        out = indicator_theta(disk_example, 2, 0.05, x)
        assert out.shape == (100,)
        assert set(np.unique(out)) <= {0, 1}

    def test_component_mask(self, gasket_example):
        dom = gasket_example.domain
        bores = [i for i, lab in enumerate(dom.labels) if lab == "bore"]
        x = np.linspace(0.0, 1.0, 512, endpoint=False)[:, None]
        any_hit = indicator_theta(gasket_example, 1, 0.05, x)
        bore_hit = indicator_theta(gasket_example, 1, 0.05, x, components=bores)
        outer_hit = indicator_theta(gasket_example, 1, 0.05, x, components=[0])
        assert np.all(bore_hit <= any_hit)
        assert np.all(outer_hit <= any_hit)
        # the step-1 sphere around the start point only reaches the bores
        assert bore_hit.sum() == any_hit.sum() > 0
        assert outer_hit.sum() == 0


class TestProbeSpec:
    def test_3d_rejected(self, ball_example):
        with pytest.raises(ConfigError):
            ProbeSpec(example=ball_example, k=1, m=4)

    def test_k_range(self, disk_example):
        with pytest.raises(ConfigError):
            ProbeSpec(example=disk_example, k=4, m=4)
        with pytest.raises(ConfigError):
            ProbeSpec(example=disk_example, k=0, m=4)

    def test_resolution_budget(self, disk_example):
        with pytest.raises(ConfigError):
            ProbeSpec(example=disk_example, k=3, m=13)

    def test_name_accepted(self):
        spec = ProbeSpec(example="disk", k=1, m=4)
        assert spec.example.name == "disk"


class TestBoxCount:
    def test_k1_interval_boundary_is_pointlike(self, disk_example):
        # Theta_1 for the disk is a finite union of intervals in [0,1);
        # flagged boxes cover only the endpoints, independent of resolution
        counts = probe_study(disk_example, 1, range(6, 15, 2))
        for c in counts:
            assert 1 <= c.flagged <= 8
        assert len({c.flagged for c in counts}) == 1

    def test_empty_set_flags_nothing(self, disk_example):
        # a generic start point never hits the boundary exactly, so a tiny
        # shell leaves Theta_1 effectively empty
        ex = replace(disk_example, z0=np.array([0.1, 0.37]))
        c = boundary_box_count(ProbeSpec(example=ex, k=1, m=8, eps=1e-12))
        assert c.flagged == 0 and c.volume_estimate == 0.0

    def test_k2_counts_grow_with_resolution(self, disk_example):
        counts = probe_study(disk_example, 2, [5, 6, 7, 8])
        for a, b in zip(counts, counts[1:]):
            assert b.flagged > a.flagged
        assert counts[-1].total == 4 ** 8

    def test_volume_stabilizes(self, disk_example):
        a = boundary_box_count(ProbeSpec(example=disk_example, k=2, m=7))
        b = boundary_box_count(ProbeSpec(example=disk_example, k=2, m=9))
        assert a.volume_estimate > 0.0
        assert abs(a.volume_estimate - b.volume_estimate) <= 0.02

    def test_k2_growth_exponent_near_half(self, disk_example):
        counts = probe_study(disk_example, 2, [6, 7, 8, 9])
        e = growth_exponent(counts, 2)
        assert 0.35 <= e <= 0.70

    def test_k3_growth_bounded_by_surface_rate(self, disk_example):
        counts = probe_study(disk_example, 3, [4, 5, 6, 7])
        e = growth_exponent(counts, 3)
        assert e <= 2.0 / 3.0 + 0.15


class TestGrowthExponent:
    def test_exact_powerlaw(self):
        pairs = [(m, 2 ** m) for m in range(4, 9)]  # count = 2^(0.5 * 2m), k=2
        assert growth_exponent(pairs, 2) == pytest.approx(0.5)

    def test_constant_counts(self):
        pairs = [(m, 4) for m in range(4, 9)]
        assert growth_exponent(pairs, 1) == pytest.approx(0.0)

    def test_boxcount_rows_accepted(self):
        rows = [BoxCount(k=2, m=m, flagged=2 ** (2 * m), total=4 ** m,
                         volume_estimate=0.0) for m in (4, 5, 6)]
        assert growth_exponent(rows, 2) == pytest.approx(1.0)

    def test_too_few_resolutions(self):
        with pytest.raises(ConfigError):
            growth_exponent([(4, 10), (5, 0), (6, 0)], 2)

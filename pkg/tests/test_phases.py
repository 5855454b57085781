from collections import Counter
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import checkerboard_grid
from vinesim.agents import HUMAN, IMMERSIVE, NON_IMMERSIVE, AgentProfile, ScanStrategy
from vinesim.errors import MisuseError
from vinesim.field import (Difficulty, FieldPoint, Side, Spot, YieldMap, ZoneEpicenter,
                           build_field, extract_low_yield_zones, generate_spots, preset_field)
from vinesim.phases import (DEPOT, SurveyMode, coverage_legs, route_legs, simulate_scan,
                            simulate_treatment, simulate_treatment_full_rescan,
                            simulate_treatment_targeted, simulate_yield_survey, targeted_route)

F = preset_field()
PASS_S = 52 * 227 / 1.25  # 9443.2 s for one pass of every row


def spots_with(n_easy, n_difficult, field=F, seed=0):
    rng = np.random.default_rng(seed)
    out = []
    for k in range(n_easy + n_difficult):
        out.append(Spot(FieldPoint(int(rng.integers(field.num_rows)), float(rng.uniform(0, field.row_length))),
                        Side.LEFT if rng.random() < 0.5 else Side.RIGHT,
                        Difficulty.EASY if k < n_easy else Difficulty.DIFFICULT))
    return out


def row_visits(path):
    """How many times each row X-coordinate is driven along."""
    counts = Counter()
    for p, q in zip(path, path[1:]):
        if p[0] == q[0] and p != q:
            counts[p[0]] += 1
    return counts


class TestScan:
    def test_human_20_spots(self):
        res = simulate_scan(F, HUMAN, spots_with(10, 10))
        assert res.travel_time == pytest.approx(PASS_S)
        assert res.transition_time == 51 * 5
        assert res.service_time == 100
        assert res.total_time == pytest.approx(9798.2)
        # reported human detection at 20 spots: 02 hrs 41 mins
        assert res.total_time == pytest.approx(9660, rel=0.05)

    def test_non_immersive_expected_mix(self):
        res = simulate_scan(F, NON_IMMERSIVE, spots_with(15, 15))
        assert res.total_time == pytest.approx(PASS_S + 510 + 30 * 37)
        assert res.total_time == pytest.approx(10860, rel=0.05)

    def test_immersive_double_pass(self):
        res = simulate_scan(F, IMMERSIVE, spots_with(10, 10))
        assert res.travel_time == pytest.approx(2 * PASS_S)
        assert res.transitions == 2 * 52 - 1
        assert res.total_time == pytest.approx(2 * PASS_S + 1030 + 740)

    @pytest.mark.parametrize("profile", [HUMAN, IMMERSIVE, NON_IMMERSIVE])
    def test_single_row_no_spots(self, profile):
        f = build_field(1, 100.0, 3.0)
        res = simulate_scan(f, profile, [])
        if profile.scan_strategy is ScanStrategy.DOUBLE_PASS:
            assert res.total_time == 200 / profile.speed + profile.row_transition_time
        else:
            assert res.total_time == 100 / profile.speed

    def test_double_pass_travel_is_exactly_twice(self):
        for f in (F, preset_field("75x200"), build_field(7, 33.3, 1.1)):
            assert simulate_scan(f, IMMERSIVE, []).travel_time == 2 * simulate_scan(f, NON_IMMERSIVE, []).travel_time

    @pytest.mark.parametrize("profile, passes", [(HUMAN, 1), (NON_IMMERSIVE, 1), (IMMERSIVE, 2)])
    def test_rows_visited_by_path(self, profile, passes):
        res = simulate_scan(F, profile, spots_with(5, 5))
        counts = row_visits(res.path)
        assert len(counts) == 52
        assert set(counts.values()) == {passes}

    def test_path_connected(self):
        for profile in (HUMAN, IMMERSIVE):
            path = simulate_scan(F, profile, []).path
            assert path[0] == (0.0, 0.0)
            for p, q in zip(path, path[1:]):
                assert p[0] == q[0] or (p[1] == q[1] and p[1] in (0.0, 227.0))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 80), st.integers(0, 2**32 - 1))
    def test_visited_is_permutation(self, n, seed):
        spots = generate_spots(F, n, 0.5, seed=seed)
        for profile in (HUMAN, IMMERSIVE, NON_IMMERSIVE):
            res = simulate_scan(F, profile, spots)
            assert Counter(res.visited_spots) == Counter(spots)

    def test_serpentine_visit_order(self):
        spots = [Spot(FieldPoint(1, 50.0), Side.LEFT, Difficulty.EASY),
                 Spot(FieldPoint(1, 150.0), Side.LEFT, Difficulty.EASY),
                 Spot(FieldPoint(0, 90.0), Side.LEFT, Difficulty.EASY)]
        res = simulate_scan(F, HUMAN, spots)
        assert [s.location.x for s in res.visited_spots] == [90.0, 150.0, 50.0]

    def test_double_pass_sides(self):
        spots = [Spot(FieldPoint(0, 50.0), Side.RIGHT, Difficulty.EASY),
                 Spot(FieldPoint(0, 150.0), Side.RIGHT, Difficulty.EASY),
                 Spot(FieldPoint(0, 100.0), Side.LEFT, Difficulty.EASY)]
        res = simulate_scan(F, IMMERSIVE, spots)
        assert [s.location.x for s in res.visited_spots] == [100.0, 150.0, 50.0]

    def test_memory_flag(self):
        assert simulate_scan(F, IMMERSIVE, []).provides_coordinates
        assert not simulate_scan(F, HUMAN, []).provides_coordinates

    def test_deterministic(self):
        spots = generate_spots(F, 30, 0.5, seed=5)
        assert simulate_scan(F, IMMERSIVE, spots) == simulate_scan(F, IMMERSIVE, spots)


class TestFullRescan:
    def test_matches_scan(self):
        spots = spots_with(10, 10)
        assert simulate_treatment_full_rescan(F, HUMAN, spots) == simulate_scan(F, HUMAN, spots)

    @pytest.mark.parametrize("n, reported", [(20, 9660), (40, 9780)])
    def test_reported_human_rescan(self, n, reported):
        res = simulate_treatment_full_rescan(F, HUMAN, spots_with(n, 0))
        assert res.total_time == pytest.approx(PASS_S + 255 + 5 * n)
        assert res.total_time == pytest.approx(reported, rel=0.05)

    def test_no_spots(self):
        assert simulate_treatment_full_rescan(F, HUMAN, []).total_time == pytest.approx(PASS_S + 255)

    def test_robot_is_misuse(self):
        with pytest.raises(MisuseError):
            simulate_treatment_full_rescan(F, IMMERSIVE, [])


class TestTargeted:
    def test_no_recorded_spots(self):
        assert simulate_treatment_targeted(F, IMMERSIVE, []).total_time == 0

    def test_memoryless_is_misuse(self):
        with pytest.raises(MisuseError):
            simulate_treatment_targeted(F, HUMAN, spots_with(1, 0))

    def test_single_spot(self):
        s = Spot(FieldPoint(0, 125.0), Side.LEFT, Difficulty.EASY)
        res = simulate_treatment_targeted(F, IMMERSIVE, [s])
        assert res.total_time == 124.0
        assert res.visited_spots == (s,)

    def test_path_touches_every_spot(self):
        spots = generate_spots(F, 20, 0.5, seed=3)
        res = simulate_treatment_targeted(F, IMMERSIVE, spots)
        assert res.path[0] == (0.0, 0.0)
        assert {F.to_cartesian(s.location) for s in spots} <= set(res.path)
        assert Counter(res.visited_spots) == Counter(spots)

    def test_planner_choice(self):
        spots = generate_spots(F, 8, 0.5, seed=12)
        ex = simulate_treatment_targeted(F, IMMERSIVE, spots, "exact")
        two = simulate_treatment_targeted(F, IMMERSIVE, spots, "nn2opt")
        nn = simulate_treatment_targeted(F, IMMERSIVE, spots, "nn")
        assert ex.distance <= two.distance <= nn.distance

    def test_shared_location_serviced_twice(self):
        p = FieldPoint(3, 40.0)
        spots = [Spot(p, Side.LEFT, Difficulty.EASY), Spot(p, Side.RIGHT, Difficulty.DIFFICULT)]
        res = simulate_treatment_targeted(F, IMMERSIVE, spots)
        assert res.service_time == 74
        assert len(res.visited_spots) == 2

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 150), st.integers(0, 2**32 - 1), st.floats(0, 1))
    def test_never_slower_than_full_coverage(self, n, seed, p):
        spots = generate_spots(F, n, p, seed=seed)
        for profile in (IMMERSIVE, NON_IMMERSIVE):
            targeted = simulate_treatment_targeted(F, profile, spots)
            single = replace(profile, scan_strategy=ScanStrategy.SINGLE_PASS_DUAL_CAMERA)
            assert targeted.total_time <= simulate_scan(F, single, spots).total_time
            assert targeted.total_time <= simulate_scan(F, profile, spots).total_time
        human_like = replace(HUMAN, has_memory=True)
        assert simulate_treatment_targeted(F, human_like, spots).total_time <= \
            simulate_treatment_full_rescan(F, HUMAN, spots).total_time

    def test_dispatch(self):
        spots = spots_with(3, 3)
        assert simulate_treatment(F, HUMAN, spots) == simulate_treatment_full_rescan(F, HUMAN, spots)
        assert simulate_treatment(F, IMMERSIVE, spots) == simulate_treatment_targeted(F, IMMERSIVE, spots)


class TestYieldSurvey:
    def zones(self, n=28):
        return extract_low_yield_zones(YieldMap(26.0, checkerboard_grid(n)), 2.0, F)

    def test_targeted_no_zones(self):
        assert simulate_yield_survey(F, IMMERSIVE, [], SurveyMode.TARGETED).total_time == 0

    def test_full_coverage_no_zones(self):
        res = simulate_yield_survey(F, HUMAN, [], SurveyMode.FULL_COVERAGE)
        assert res.total_time == pytest.approx(PASS_S + 255)

    def test_28_zones_targeted_faster(self):
        zones = self.zones()
        full = simulate_yield_survey(F, HUMAN, zones, SurveyMode.FULL_COVERAGE)
        targeted = simulate_yield_survey(F, IMMERSIVE, zones, SurveyMode.TARGETED)
        assert len(targeted.visited_spots) == 28
        assert targeted.total_time < full.total_time
        assert full.service_time == 28 * 5
        assert targeted.service_time == 28 * 24

    def test_full_coverage_ignores_double_pass(self):
        zones = self.zones(5)
        res = simulate_yield_survey(F, IMMERSIVE, zones, SurveyMode.FULL_COVERAGE)
        assert res.travel_time == pytest.approx(PASS_S)

    def test_one_row_monotone(self):
        zones = [ZoneEpicenter(k, FieldPoint(7, x), 1) for k, x in enumerate((180.0, 20.0, 95.0, 60.0))]
        res = simulate_yield_survey(F, IMMERSIVE, zones, SurveyMode.TARGETED)
        xs = [s.location.x for s in res.visited_spots]
        assert xs == sorted(xs) or xs == sorted(xs, reverse=True)

    def test_string_mode_accepted(self):
        zones = self.zones(3)
        assert simulate_yield_survey(F, HUMAN, zones, "targeted") == \
            simulate_yield_survey(F, HUMAN, zones, SurveyMode.TARGETED)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.sampled_from([5.0, 10.0, 26.0]), st.floats(0.05, 0.6))
    def test_targeted_beats_full_coverage_same_agent(self, seed, cell, density):
        rng = np.random.default_rng(seed)
        shape = (int(227 // cell), int(175 // cell))
        grid = np.where(rng.random(shape) < density, 0.0, 1.0)
        zones = extract_low_yield_zones(YieldMap(cell, grid), 0.0, F)
        for profile in (HUMAN, IMMERSIVE):
            full = simulate_yield_survey(F, profile, zones, SurveyMode.FULL_COVERAGE)
            targeted = simulate_yield_survey(F, profile, zones, SurveyMode.TARGETED)
            if zones:
                assert targeted.total_time < full.total_time


class TestLegs:
    def test_coverage_legs_sum_to_phase(self):
        spots = generate_spots(F, 25, 0.5, seed=8)
        for profile in (HUMAN, IMMERSIVE):
            res = simulate_scan(F, profile, spots)
            legs = coverage_legs(F, profile, res)
            assert len(legs) == 26
            assert sum(l.distance for l in legs) == pytest.approx(res.distance)
            assert sum(l.transitions for l in legs) == res.transitions
            assert sum(l.service_time for l in legs) == pytest.approx(res.service_time)
            assert all(l.distance >= -1e-9 for l in legs)
            assert legs[0].start == DEPOT

    def test_route_legs(self):
        spots = generate_spots(F, 15, 0.5, seed=8)
        route = targeted_route(F, spots)
        res = simulate_treatment_targeted(F, IMMERSIVE, spots)
        legs = route_legs(F, IMMERSIVE, route, spots)
        assert sum(l.transitions for l in legs) == res.transitions
        assert sum(l.service_time for l in legs) == res.service_time


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 40), st.integers(0, 2**32 - 1))
def test_decomposition_is_exact(n, seed):
    spots = generate_spots(F, n, 0.5, seed=seed)
    results = [simulate_scan(F, p, spots) for p in (HUMAN, IMMERSIVE, NON_IMMERSIVE)]
    results += [simulate_treatment(F, p, spots) for p in (HUMAN, IMMERSIVE, NON_IMMERSIVE)]
    for r in results:
        assert r.total_time - (r.travel_time + r.service_time + r.transition_time) == 0


def test_custom_profile_full_rescan_double_pass():
    slow = AgentProfile("walker", 1, 2, 0.5, 3, ScanStrategy.DOUBLE_PASS, False)
    res = simulate_treatment_full_rescan(F, slow, [])
    assert res.travel_time == pytest.approx(2 * 52 * 227 / 0.5)
    assert res.transitions == 103

import math
import random

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import bundled_costs, csc as oracle_csc, normalize, raw_totals, score
from opcost.cost_model import (
    METRICS,
    InstructionClass as IC,
    MemoryTier,
    MetricKind,
    Profile,
    TierPrior,
    get_profile,
    load_bundled_table,
)
from opcost.errors import InvalidArgumentError
from opcost.parsers import CountVector
from opcost.scoring import (
    Cohort,
    GradeScale,
    RawTotals,
    aggregate_raw,
    composite,
    efficiency_and_grade,
    normalize_cohort,
    score_cohort,
    score_totals,
    uncertainty_band,
)

TABLE = load_bundled_table()
RESEARCH = get_profile("RESEARCH")
SCALAR_CLASSES = [IC.ARITH_ADD, IC.ARITH_SUB, IC.ARITH_MUL, IC.ARITH_DIV, IC.MEM_MOVE,
                  IC.CONTROL_CALL, IC.SIMD_MUL, IC.CMP, IC.MEM_LOAD]


def cv(**kw):
    return CountVector({IC.parse(k): v for k, v in kw.items()})


# -- aggregation -------------------------------------------------------------------


def test_aggregate_add_div():
    raw = aggregate_raw(cv(arith_add=1, arith_div=1), TABLE)
    assert raw.cu == 6.0
    assert raw.eu == pytest.approx(0.0005, rel=1e-12)
    assert raw.usd == pytest.approx(0.00006, rel=1e-12)


def test_aggregate_zero_and_mul():
    assert aggregate_raw(CountVector({}), TABLE).as_tuple() == (0.0, 0.0, 0.0, 0.0)
    raw = aggregate_raw(cv(arith_mul=3), TABLE)
    assert raw.cu == 6.0 and raw.eu == pytest.approx(0.0006, rel=1e-12)


_COUNTS = st.dictionaries(st.sampled_from(SCALAR_CLASSES), st.integers(0, 500), max_size=5)


@given(a=_COUNTS, b=_COUNTS)
def test_aggregate_is_additive(a, b):
    ra = aggregate_raw(CountVector(a), TABLE)
    rb = aggregate_raw(CountVector(b), TABLE)
    both = aggregate_raw(CountVector(a) + CountVector(b), TABLE)
    for x, y in zip(both.as_tuple(), (ra + rb).as_tuple()):
        assert x == pytest.approx(y, rel=1e-12, abs=1e-15)


def test_space_hints_pick_tier_priors():
    shared = CountVector({IC.MEM_LOAD: 1}, {(IC.MEM_LOAD, "shared"): 1})
    local = CountVector({IC.MEM_LOAD: 1}, {(IC.MEM_LOAD, "local"): 1})
    glob = CountVector({IC.MEM_LOAD: 1}, {(IC.MEM_LOAD, "global"): 1})
    assert aggregate_raw(shared, TABLE).eu == 0.0001
    assert aggregate_raw(local, TABLE).eu == 0.0005
    assert aggregate_raw(glob, TABLE).eu == pytest.approx(aggregate_raw(cv(mem_load=1), TABLE).eu)


def test_caller_prior_overrides_table_default():
    raw = aggregate_raw(cv(mem_load=2), TABLE, {IC.MEM_LOAD: TierPrior.point(MemoryTier.DRAM)})
    assert raw.eu == pytest.approx(0.001)


# -- normalization / composite ---------------------------------------------------------------


def test_normalize_two_members():
    norms = normalize_cohort(Cohort((("A", RawTotals(1.0, 0, 0, 0)), ("B", RawTotals(6.0, 0, 0, 0)))))
    assert norms["A"][MetricKind.CU] == 0.0
    assert norms["B"][MetricKind.CU] == 5.0 / (5.0 + 1e-9)
    assert norms["B"][MetricKind.EU] == 0.0


def test_normalize_degenerate_cohorts():
    same = RawTotals(2.0, 1.0, 1.0, 1.0)
    for members in ((("a", same),), (("a", same), ("b", same))):
        for norm in normalize_cohort(Cohort(members)).values():
            assert all(v == 0.0 for v in norm.values())
    with pytest.raises(InvalidArgumentError):
        normalize_cohort(Cohort(()))
    with pytest.raises(InvalidArgumentError):
        Cohort((("a", same), ("a", same)))


def test_composite_examples():
    zeros = dict.fromkeys(METRICS, 0.0)
    ones = dict.fromkeys(METRICS, 1.0)
    assert composite(zeros, RESEARCH) == 0.0
    assert composite(ones, RESEARCH) == pytest.approx(1.0, abs=1e-15)
    assert composite({**zeros, MetricKind.CU: 1.0}, RESEARCH) == 0.4


_NORM = st.floats(0, 0.999, allow_nan=False)


@given(n=st.lists(_NORM, min_size=4, max_size=4), i=st.integers(0, 3), bump=st.floats(0, 0.5))
def test_composite_is_monotone(n, i, bump):
    base = dict(zip(METRICS, n))
    up = dict(base)
    up[METRICS[i]] = min(base[METRICS[i]] + bump, 0.999)
    assert composite(up, RESEARCH) >= composite(base, RESEARCH)


_RAW = st.tuples(*[st.floats(0, 1e3, allow_nan=False)] * 4)


@settings(max_examples=80)
@given(raws=st.lists(_RAW, min_size=1, max_size=6))
def test_normalized_values_in_half_open_unit_interval(raws):
    cohort = Cohort(tuple((f"a{i}", RawTotals(*r)) for i, r in enumerate(raws)))
    for norm in normalize_cohort(cohort).values():
        assert all(0.0 <= v < 1.0 for v in norm.values())


@settings(max_examples=60)
@given(
    raws=st.lists(st.tuples(*[st.floats(1, 100, allow_nan=False)] * 4), min_size=2, max_size=6),
    metric=st.integers(0, 3),
    factor=st.floats(0.5, 4.0),
)
def test_ranking_invariant_under_metric_rescale(raws, metric, factor):
    def order(rs):
        results = score_totals([(f"a{i}", RawTotals(*r)) for i, r in enumerate(rs)], RESEARCH)
        return [r.artifact_id for r in sorted(results, key=lambda r: (r.csc, r.artifact_id))]

    def cscs(rs):
        return sorted(r.csc for r in score_totals([(f"a{i}", RawTotals(*r)) for i, r in enumerate(rs)], RESEARCH))

    # near-ties can legitimately reorder through the epsilon; skip those draws
    c = cscs(raws)
    assume(all(b - a > 1e-6 for a, b in zip(c, c[1:])))
    scaled = [tuple(x * factor if k == metric else x for k, x in enumerate(r)) for r in raws]
    assert order(raws) == order(scaled)


# -- grading ------------------------------------------------------------------------------------


@pytest.mark.parametrize("c, expected", [
    (0.0, (100.0, "A+", "Excellent")),
    (1.0 - 1e-10, (0.0, "F", "Poor")),
    (0.25, (75.0, "C", "Good")),
    (0.1, (90.0, "A-", "Excellent")),
    (0.4, (60.0, "D", "Fair")),
    (0.4001, (59.99, "F", "Poor")),
])
def test_efficiency_and_grade(c, expected):
    assert efficiency_and_grade(c) == expected


def test_efficiency_rejects_out_of_range():
    with pytest.raises(InvalidArgumentError):
        efficiency_and_grade(1.5)
    with pytest.raises(InvalidArgumentError):
        efficiency_and_grade(-0.01)


def test_grade_overrides():
    scale = GradeScale.from_mapping({"grades": {"A+": 99.0}, "ratings": {"Excellent": 95.0}})
    assert efficiency_and_grade(0.02, scale) == (98.0, "A", "Excellent")
    assert scale.rating(94.0) == "Good"
    with pytest.raises(ValueError):
        GradeScale.from_mapping({"grades": {"Z": 1}})


# -- score_cohort --------------------------------------------------------------------------------


def test_dominance_gives_100_and_0():
    results = score_cohort([("A", cv(arith_add=1)), ("B", cv(arith_div=4, mem_load=3))], TABLE, RESEARCH)
    assert [(r.artifact_id, r.efficiency_score, r.grade) for r in results] == [("A", 100.0, "A+"), ("B", 0.0, "F")]


def test_singleton_scores_100():
    (only,) = score_cohort([("x", cv(arith_div=7))], TABLE, get_profile("HPC"))
    assert only.efficiency_score == 100.0


def test_strictly_ordered_totals_give_strictly_ordered_scores():
    results = score_cohort([(f"a{i}", cv(arith_mul=i + 1, mem_load=i)) for i in range(3)], TABLE, RESEARCH)
    scores = [r.efficiency_score for r in results]
    assert scores[0] > scores[1] > scores[2]


def test_output_preserves_input_order():
    arts = [("z", cv(arith_add=3)), ("a", cv(arith_add=1)), ("m", cv(arith_add=2))]
    assert [r.artifact_id for r in score_cohort(arts, TABLE, RESEARCH)] == ["z", "a", "m"]


@settings(max_examples=100, deadline=None)
@given(
    arts=st.lists(
        st.dictionaries(st.sampled_from([c.value for c in SCALAR_CLASSES]), st.integers(0, 50), max_size=4),
        min_size=1, max_size=5,
    ),
    profile=st.sampled_from(["RESEARCH", "COMMERCIAL", "MOBILE", "HPC"]),
)
def test_matches_hand_composed_model(arts, profile):
    costs = bundled_costs()
    prof = get_profile(profile)
    ids = [f"a{i}" for i in range(len(arts))]
    results = score_cohort([(aid, cv(**a)) for aid, a in zip(ids, arts)], TABLE, prof)
    raws = {aid: raw_totals(a, costs) for aid, a in zip(ids, arts)}
    norms = normalize(raws)
    for r in results:
        assert r.raw.as_tuple() == pytest.approx(raws[r.artifact_id], rel=1e-12, abs=1e-15)
        expected = oracle_csc(norms[r.artifact_id], prof.weights)
        assert math.isclose(r.csc, expected, rel_tol=1e-12, abs_tol=1e-15)
        assert r.efficiency_score == score(expected) or abs(r.efficiency_score - score(expected)) <= 0.01


def test_best_in_every_metric_scores_100():
    rng = random.Random(3)
    for _ in range(20):
        arts = [(f"a{i}", cv(arith_add=rng.randint(2, 9), mem_load=rng.randint(2, 9))) for i in range(4)]
        arts.append(("best", cv(arith_add=1, mem_load=1)))
        results = {r.artifact_id: r for r in score_cohort(arts, TABLE, RESEARCH)}
        assert results["best"].efficiency_score == 100.0


# -- uncertainty bands --------------------------------------------------------------------------------


def _cohort(*pairs):
    return Cohort(tuple((aid, aggregate_raw(c, TABLE)) for aid, c in pairs))


def test_band_zero_width_without_memory_ops():
    a, b = cv(arith_add=5), cv(arith_div=5)
    cohort = _cohort(("a", a), ("b", b))
    lo, hi = uncertainty_band(a, TABLE, cohort, RESEARCH)
    assert lo == hi


def test_band_contains_expected_csc():
    a, b = cv(mem_load=10), cv(arith_add=40, mem_store=3)
    results = score_cohort([("a", a), ("b", b)], TABLE, RESEARCH, bands=True)
    for r in results:
        lo, hi = r.band
        assert lo <= r.csc <= hi
    assert results[0].band[0] < results[0].band[1]


def test_band_with_l1_point_prior_starts_at_expectation():
    a, b = cv(mem_load=10), cv(arith_add=40)
    prior = {IC.MEM_LOAD: TierPrior.point(MemoryTier.L1)}
    cohort = Cohort((("a", aggregate_raw(a, TABLE, prior)), ("b", aggregate_raw(b, TABLE, prior))))
    norms = normalize_cohort(cohort)
    expected = composite(norms["b"], RESEARCH)
    b_lo, _ = uncertainty_band(b, TABLE, cohort, RESEARCH, prior)
    assert b_lo == expected
    lo, hi = uncertainty_band(a, TABLE, cohort, RESEARCH, prior)
    assert lo == pytest.approx(composite(norms["a"], RESEARCH), abs=1e-15)
    assert hi >= lo


def test_band_energy_range_for_ten_loads():
    from opcost.scoring import aggregate_breakdown

    c = cv(mem_load=10)
    low = aggregate_breakdown(c, TABLE, force_tier=MemoryTier.L1)[IC.MEM_LOAD]
    high = aggregate_breakdown(c, TABLE, force_tier=MemoryTier.DRAM)[IC.MEM_LOAD]
    assert low.eu == pytest.approx(0.001) and high.eu == pytest.approx(0.005)


def test_invalid_profile_weights_rejected_by_composite():
    bad = object.__new__(Profile)
    object.__setattr__(bad, "name", "bad")
    object.__setattr__(bad, "weights", (0.5, 0.5, 0.5, 0.5))
    with pytest.raises(InvalidArgumentError):
        composite(dict.fromkeys(METRICS, 0.0), bad)

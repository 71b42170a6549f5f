import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opcost.cost_model import (
    DEFAULT_TIER_PRIOR,
    METRICS,
    PROFILE_NAMES,
    TIERABLE_CLASSES,
    CostTable,
    CostVector,
    EnvironmentParams,
    InstructionClass as IC,
    MemoryTier,
    MetricKind,
    Profile,
    TierPrior,
    available_architectures,
    builtin_profiles,
    classes_in_group,
    cost_table_to_dict,
    derive_co2,
    derive_usd,
    dump_cost_table,
    get_profile,
    load_bundled_table,
    load_cost_table,
    lookup_cost,
    profile_from_weights,
    scale_table,
)
from opcost.errors import InvalidArgumentError, ParseError, ValidationError

REQUIRED_CLASSES = {
    "arith_add", "arith_sub", "arith_mul", "arith_div", "logic_and", "logic_or", "logic_xor",
    "logic_shift", "mem_move", "mem_load", "mem_store", "branch_jump", "branch_cond", "control_call",
    "cmp", "simd_add", "simd_mul", "simd_fma", "vec_load", "vec_store", "other",
}


@pytest.fixture(scope="module")
def x86():
    return load_bundled_table("x86_64")


def env_table(**extra):
    doc = {
        "architecture": "toy",
        "version": "0.1.0",
        "provenance": {"source": "test"},
        "environment": {"carbon_intensity_kg_per_kwh": 0.4, "price_per_kwh_usd": 0.2},
        "costs": {"other": {"cu": 1.0, "eu": 0.001}, "mem_load": {"cu": 3.0, "eu": 0.002, "usd": 1e-6}},
    }
    doc.update(extra)
    return load_cost_table(doc)


# -- taxonomy -------------------------------------------------------------------


def test_metric_order_is_fixed():
    assert METRICS == (MetricKind.CU, MetricKind.EU, MetricKind.CO2, MetricKind.USD)
    assert MetricKind.parse("co2") is MetricKind.CO2
    assert MetricKind.parse("$") is MetricKind.USD


def test_taxonomy_covers_required_classes():
    assert REQUIRED_CLASSES <= {c.value for c in IC}
    assert TIERABLE_CLASSES == {IC.MEM_LOAD, IC.MEM_STORE, IC.VEC_LOAD, IC.VEC_STORE}
    groups = {c.group for c in IC}
    assert groups == {"arith", "logic", "memory", "branch", "control", "simd"}
    # every class in exactly one group
    members = [c for g in groups for c in classes_in_group(g)]
    assert len(members) == len(IC) and set(members) == set(IC)


def test_instruction_class_parse_rejects_unknown():
    assert IC.parse("arith_div") is IC.ARITH_DIV
    with pytest.raises(ValidationError):
        IC.parse("teleport")


def test_coarse_tiers_map_to_l1_and_dram():
    assert MemoryTier.parse("hit") is MemoryTier.L1
    assert MemoryTier.parse("miss") is MemoryTier.DRAM
    assert MemoryTier.parse("L3") is MemoryTier.L3


# -- cost vectors, priors, derivation --------------------------------------------


@pytest.mark.parametrize("bad", [-1.0, math.nan, math.inf])
def test_cost_vector_rejects_negative_and_nonfinite(bad):
    with pytest.raises(ValidationError):
        CostVector(1.0, bad, 0.0, 0.0)


def test_tier_prior_must_sum_to_one():
    TierPrior.from_mapping({"L1": 0.5, "DRAM": 0.5})
    with pytest.raises(ValidationError):
        TierPrior.from_mapping({"L1": 0.5, "DRAM": 0.4})
    assert DEFAULT_TIER_PRIOR.as_dict() == {"L1": 0.9, "L2": 0.06, "L3": 0.03, "DRAM": 0.01}


def test_derivation_formulas():
    # 3.6e6 J is one kWh
    assert derive_co2(3.6e6, 0.4) == pytest.approx(0.4)
    assert derive_usd(1.8e6, 0.2) == pytest.approx(0.1)
    assert derive_co2(0.0, 0.5) == 0.0
    with pytest.raises(InvalidArgumentError):
        derive_usd(-1.0, 0.2)
    with pytest.raises(InvalidArgumentError):
        derive_co2(1.0, math.nan)


@given(
    x=st.floats(0, 1e6, allow_nan=False),
    a=st.floats(0, 1e3, allow_nan=False),
    c=st.floats(0, 10, allow_nan=False),
)
def test_derivation_is_linear(x, a, c):
    assert derive_co2(a * x, c) == pytest.approx(a * derive_co2(x, c), rel=1e-12, abs=1e-300)
    assert derive_usd(a * x, c) == pytest.approx(a * derive_usd(x, c), rel=1e-12, abs=1e-300)


def test_environment_params_validated():
    with pytest.raises(ValidationError):
        EnvironmentParams(-0.1, 0.2)


# -- bundled table -------------------------------------------------------------------


def test_bundled_table_reproduces_published_rows(x86):
    rows = {
        IC.ARITH_ADD: (1.0, 0.0001, 0.000027, 0.00001),
        IC.ARITH_SUB: (1.0, 0.0001, 0.00005, 0.00001),
        IC.ARITH_MUL: (2.0, 0.0002, 0.000054, 0.00002),
        IC.ARITH_DIV: (5.0, 0.0004, 0.000108, 0.00005),
        IC.LOGIC_AND: (1.0, 0.0001, 0.000027, 0.00001),
        IC.LOGIC_OR: (1.0, 0.0001, 0.000027, 0.00001),
        IC.LOGIC_XOR: (1.0, 0.0001, 0.000027, 0.00001),
        IC.MEM_MOVE: (1.0, 0.00008, 0.000022, 0.000009),
        IC.MEM_LOAD: (3.0, 0.00025, 0.000069, 0.00003),
        IC.MEM_STORE: (3.0, 0.00025, 0.000069, 0.00003),
        IC.BRANCH_JUMP: (1.0, 0.00012, 0.000033, 0.000012),
        IC.CONTROL_CALL: (2.0, 0.00020, 0.000055, 0.00002),
        IC.SIMD_ADD: (2.0, 0.0003, 0.000083, 0.00004),
        IC.SIMD_MUL: (2.5, 0.00035, 0.000097, 0.00005),
        IC.SIMD_MUL_WIDE: (3.0, 0.0004, 0.00011, 0.000055),
        IC.SIMD_ADD_INT: (2.5, 0.00032, 0.000088, 0.000045),
    }
    for cls, expected in rows.items():
        assert tuple(x86.base_cost(cls)) == expected, cls
    assert x86.version == "1.0.0"
    assert "x86_64" in available_architectures()


def test_cache_columns_are_energy_only_tier_overrides(x86):
    hit = lookup_cost(x86, IC.MEM_LOAD, TierPrior.point(MemoryTier.L1))
    miss = lookup_cost(x86, IC.MEM_LOAD, TierPrior.point(MemoryTier.DRAM))
    assert hit == CostVector(3.0, 0.0001, 0.000069, 0.00003)
    assert miss == CostVector(3.0, 0.0005, 0.000069, 0.00003)
    # L2 / L3 have no published value and inherit the base row
    assert lookup_cost(x86, IC.MEM_LOAD, TierPrior.point(MemoryTier.L2)) == x86.base_cost(IC.MEM_LOAD)


def test_default_prior_expectation(x86):
    # 0.9*0.0001 + 0.06*0.00025 + 0.03*0.00025 + 0.01*0.0005
    expected = 0.9 * 0.0001 + 0.09 * 0.00025 + 0.01 * 0.0005
    assert lookup_cost(x86, IC.MEM_LOAD).eu == pytest.approx(expected, rel=1e-12)
    assert lookup_cost(x86, IC.MEM_LOAD).cu == 3.0


def test_unlisted_classes_fall_back_to_other(x86):
    assert x86.base_cost(IC.CMP) == x86.base_cost(IC.OTHER)
    assert lookup_cost(x86, IC.SIMD_FMA) == x86.base_cost(IC.OTHER)


def test_prior_on_untierable_class_rejected(x86):
    with pytest.raises(InvalidArgumentError):
        lookup_cost(x86, IC.ARITH_ADD, DEFAULT_TIER_PRIOR)


@given(tier=st.sampled_from(list(MemoryTier)), cls=st.sampled_from([IC.MEM_LOAD, IC.MEM_STORE]))
def test_point_mass_prior_equals_tier_cost(tier, cls):
    table = load_bundled_table()
    assert lookup_cost(table, cls, TierPrior.point(tier)) == table.tier_costs[cls][tier]


def test_unknown_architecture_lists_available():
    with pytest.raises(InvalidArgumentError, match="x86_64"):
        load_bundled_table("z80")


# -- loading and validation -------------------------------------------------------------


def test_round_trip_is_identity(x86):
    again = load_cost_table(dump_cost_table(x86))
    assert again == x86
    assert cost_table_to_dict(again) == cost_table_to_dict(x86)
    env = env_table()
    assert load_cost_table(dump_cost_table(env)) == env


def test_missing_other_rejected():
    doc = {"architecture": "t", "version": "1.0.0", "provenance": {}, "costs": {"arith_add": {"cu": 1, "eu": 0, "co2": 0, "usd": 0}}}
    with pytest.raises(ValidationError, match="other"):
        load_cost_table(doc)


def test_negative_cost_names_class_and_metric():
    doc = {"architecture": "t", "version": "1.0.0", "provenance": {},
           "costs": {"other": {"cu": 1, "eu": 0, "co2": 0, "usd": 0}, "arith_div": {"cu": 5, "eu": -1, "co2": 0, "usd": 0}}}
    with pytest.raises(ValidationError, match="arith_div.eu"):
        load_cost_table(doc)


@pytest.mark.parametrize("mutate, match", [
    (lambda d: d.update(version="1.0"), "version"),
    (lambda d: d["costs"].update(teleport={"cu": 1, "eu": 0, "co2": 0, "usd": 0}), "teleport"),
    (lambda d: d.update(colour="red"), "colour"),
    (lambda d: d.update(tier_costs={"arith_add": {"hit": {"eu": 1}}}), "arith_add"),
    (lambda d: d.update(tier_prior={"L1": 0.7}), "sum"),
])
def test_invalid_documents_rejected(mutate, match):
    doc = {"architecture": "t", "version": "1.0.0", "provenance": {}, "costs": {"other": {"cu": 1, "eu": 0, "co2": 0, "usd": 0}}}
    mutate(doc)
    with pytest.raises((ValidationError, InvalidArgumentError), match=match):
        load_cost_table(doc)


def test_malformed_json_reports_line():
    text = '{\n  "architecture": "t",\n  "version": \n}'
    with pytest.raises(ParseError) as info:
        load_cost_table(text, source="bad.json")
    assert info.value.line == 4
    assert "bad.json:4" in str(info.value)


def test_missing_co2_usd_derived_from_environment():
    t = env_table()
    other = t.base_cost(IC.OTHER)
    assert other.co2 == pytest.approx(derive_co2(0.001, 0.4))
    assert other.usd == pytest.approx(derive_usd(0.001, 0.2))
    # explicit columns win over derivation
    assert t.base_cost(IC.MEM_LOAD).usd == 1e-6


def test_missing_columns_without_environment_rejected():
    doc = {"architecture": "t", "version": "1.0.0", "provenance": {}, "costs": {"other": {"cu": 1, "eu": 0.1}}}
    with pytest.raises(ValidationError):
        load_cost_table(doc)


# -- scaling ---------------------------------------------------------------------------


def test_scale_identity_is_exact(x86):
    assert scale_table(x86, 1.0, 1.0) == x86
    env = env_table()
    assert scale_table(env, 1.0, 1.0) == env


def test_scale_leaves_cu_and_tracks_co2(x86):
    s = scale_table(x86, 1.2, 0.7)
    for cls in x86.base_costs:
        a, b = x86.base_cost(cls), s.base_cost(cls)
        assert b.cu == a.cu
        assert b.eu == pytest.approx(1.2 * a.eu, rel=1e-12)
        assert b.co2 == pytest.approx(1.2 * a.co2, rel=1e-12)


def test_scale_rejects_nonpositive(x86):
    with pytest.raises(InvalidArgumentError):
        scale_table(x86, 0.0, 1.0)


def test_environment_scaling_moves_only_the_energy_share_of_usd():
    t = env_table()
    s = scale_table(t, 1.0, 1.3)
    # pure-energy class: usd follows price
    assert s.base_cost(IC.OTHER).usd == pytest.approx(1.3 * t.base_cost(IC.OTHER).usd, rel=1e-12)
    # mem_load: energy part is eu*price/3.6e6, capped by its explicit usd
    energy_part = min(1e-6, 0.002 * 0.2 / 3.6e6)
    expected = (1e-6 - energy_part) + energy_part * 1.3
    assert s.base_cost(IC.MEM_LOAD).usd == pytest.approx(expected, rel=1e-12)


@settings(max_examples=60)
@given(e=st.floats(0.5, 2.0), p=st.floats(0.5, 2.0), with_env=st.booleans())
def test_reciprocal_scaling_round_trips(e, p, with_env):
    t = env_table() if with_env else load_bundled_table()
    back = scale_table(scale_table(t, e, p), 1 / e, 1 / p)
    for cls in t.base_costs:
        for a, b in zip(t.base_cost(cls), back.base_cost(cls)):
            assert b == pytest.approx(a, rel=1e-12, abs=1e-18)


# -- profiles ------------------------------------------------------------------------------


def test_builtin_profiles():
    expected = {
        "RESEARCH": (0.4, 0.3, 0.25, 0.05),
        "COMMERCIAL": (0.3, 0.2, 0.2, 0.3),
        "MOBILE": (0.25, 0.5, 0.15, 0.1),
        "HPC": (0.5, 0.3, 0.15, 0.05),
    }
    assert PROFILE_NAMES == tuple(expected)
    for p in builtin_profiles():
        assert p.weights == expected[p.name]
        assert abs(math.fsum(p.weights) - 1) <= 1e-12
        assert all(w > 0 for w in p.weights)


def test_get_profile_is_case_insensitive_and_lists_names():
    assert get_profile("mobile").name == "MOBILE"
    with pytest.raises(InvalidArgumentError, match="RESEARCH, COMMERCIAL, MOBILE, HPC"):
        get_profile("gaming")


@pytest.mark.parametrize("weights", [(0.5, 0.5, 0.0, 0.0), (0.4, 0.3, 0.25, 0.1), (0.4, 0.3, 0.3)])
def test_profile_weights_validated(weights):
    with pytest.raises(InvalidArgumentError):
        profile_from_weights(weights)


def test_weights_equal_to_research_profile():
    p = profile_from_weights((0.4, 0.3, 0.25, 0.05))
    assert p.weights == get_profile("RESEARCH").weights
    assert p[MetricKind.CO2] == 0.25


def test_bundled_file_is_plain_json():
    from importlib import resources

    raw = json.loads(resources.files("opcost.data").joinpath("x86_64.json").read_text())
    assert raw["architecture"] == "x86_64"
    assert isinstance(load_cost_table(raw), CostTable)
    assert isinstance(Profile("X", (0.25,) * 4), Profile)

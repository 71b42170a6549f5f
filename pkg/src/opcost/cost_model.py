"""Instruction-class taxonomy, cost vectors, cost tables and weighting profiles.

A cost table maps every instruction class to a four-metric cost vector
(compute units, joules, kg CO2e, USD).  Loads and stores may additionally
carry per-memory-tier costs; their effective cost is the expectation under a
tier prior.  Tables are immutable once loaded and round-trip through
:func:`dump_cost_table` / :func:`load_cost_table`.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field, replace
from enum import Enum
from importlib import resources
from types import MappingProxyType
from typing import Any, Iterable, Iterator, Mapping

from opcost.errors import InvalidArgumentError, ParseError, ValidationError

JOULES_PER_KWH = 3.6e6
WEIGHT_SUM_TOLERANCE = 1e-9
PRIOR_SUM_TOLERANCE = 1e-9


class MetricKind(Enum):
    CU = "CU"
    EU = "EU"
    CO2 = "CO2"
    USD = "USD"

    @classmethod
    def parse(cls, name: str) -> "MetricKind":
        key = name.strip().upper().replace("$", "USD")
        try:
            return cls(key)
        except ValueError:
            raise InvalidArgumentError(
                f"unknown metric {name!r}; expected one of CU, EU, CO2, USD"
            ) from None


METRICS: tuple[MetricKind, ...] = tuple(MetricKind)

GROUPS = ("arith", "logic", "memory", "branch", "control", "simd")


class InstructionClass(Enum):
    ARITH_ADD = "arith_add"
    ARITH_SUB = "arith_sub"
    ARITH_MUL = "arith_mul"
    ARITH_DIV = "arith_div"
    LOGIC_AND = "logic_and"
    LOGIC_OR = "logic_or"
    LOGIC_XOR = "logic_xor"
    LOGIC_SHIFT = "logic_shift"
    CMP = "cmp"
    MEM_MOVE = "mem_move"
    MEM_LOAD = "mem_load"
    MEM_STORE = "mem_store"
    VEC_LOAD = "vec_load"
    VEC_STORE = "vec_store"
    BRANCH_JUMP = "branch_jump"
    BRANCH_COND = "branch_cond"
    CONTROL_CALL = "control_call"
    SIMD_ADD = "simd_add"
    SIMD_MUL = "simd_mul"
    SIMD_FMA = "simd_fma"
    # 256-bit float multiply (VMULPS) and packed integer add (VPADDQ).
    SIMD_MUL_WIDE = "simd_mul_wide"
    SIMD_ADD_INT = "simd_add_int"
    OTHER = "other"

    @property
    def group(self) -> str:
        return _GROUP_OF[self]

    @property
    def tierable(self) -> bool:
        return self in TIERABLE_CLASSES

    @classmethod
    def parse(cls, class_id: str) -> "InstructionClass":
        try:
            return cls(class_id)
        except ValueError:
            raise ValidationError(f"unknown instruction class {class_id!r}") from None


IC = InstructionClass

_GROUP_OF: dict[InstructionClass, str] = {
    IC.ARITH_ADD: "arith",
    IC.ARITH_SUB: "arith",
    IC.ARITH_MUL: "arith",
    IC.ARITH_DIV: "arith",
    IC.LOGIC_AND: "logic",
    IC.LOGIC_OR: "logic",
    IC.LOGIC_XOR: "logic",
    IC.LOGIC_SHIFT: "logic",
    IC.CMP: "logic",
    IC.MEM_MOVE: "memory",
    IC.MEM_LOAD: "memory",
    IC.MEM_STORE: "memory",
    IC.VEC_LOAD: "memory",
    IC.VEC_STORE: "memory",
    IC.BRANCH_JUMP: "branch",
    IC.BRANCH_COND: "branch",
    IC.CONTROL_CALL: "control",
    IC.OTHER: "control",
    IC.SIMD_ADD: "simd",
    IC.SIMD_MUL: "simd",
    IC.SIMD_FMA: "simd",
    IC.SIMD_MUL_WIDE: "simd",
    IC.SIMD_ADD_INT: "simd",
}

TIERABLE_CLASSES = frozenset({IC.MEM_LOAD, IC.MEM_STORE, IC.VEC_LOAD, IC.VEC_STORE})


def classes_in_group(group: str) -> tuple[InstructionClass, ...]:
    if group not in GROUPS:
        raise InvalidArgumentError(f"unknown group {group!r}")
    return tuple(k for k in InstructionClass if k.group == group)


class MemoryTier(Enum):
    L1 = "L1"
    L2 = "L2"
    L3 = "L3"
    DRAM = "DRAM"

    @classmethod
    def parse(cls, name: str) -> "MemoryTier":
        """Accept a tier name or the coarse ``hit``/``miss`` view."""
        key = name.strip()
        if key.lower() in _COARSE_TIERS:
            return _COARSE_TIERS[key.lower()]
        try:
            return cls(key.upper())
        except ValueError:
            raise ValidationError(
                f"unknown memory tier {name!r}; expected L1, L2, L3, DRAM, hit or miss"
            ) from None


TIERS: tuple[MemoryTier, ...] = tuple(MemoryTier)
_COARSE_TIERS = {"hit": MemoryTier.L1, "miss": MemoryTier.DRAM}


def _check_nonneg(value: Any, what: str, exc: type[Exception] = InvalidArgumentError) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise exc(f"{what} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value) or value < 0:
        raise exc(f"{what} must be finite and non-negative, got {value!r}")
    return value


@dataclass(frozen=True)
class CostVector:
    """Cost of one instruction: compute units, joules, kg CO2e and USD."""

    cu: float
    eu: float
    co2: float
    usd: float

    def __post_init__(self) -> None:
        for name in ("cu", "eu", "co2", "usd"):
            object.__setattr__(
                self, name, _check_nonneg(getattr(self, name), f"cost component {name}", ValidationError)
            )

    def __getitem__(self, metric: MetricKind) -> float:
        return getattr(self, _FIELD_OF[metric])

    def __iter__(self) -> Iterator[float]:
        return iter((self.cu, self.eu, self.co2, self.usd))

    def __add__(self, other: "CostVector") -> "CostVector":
        return CostVector(self.cu + other.cu, self.eu + other.eu, self.co2 + other.co2, self.usd + other.usd)

    def scaled(self, factor: float) -> "CostVector":
        return CostVector(self.cu * factor, self.eu * factor, self.co2 * factor, self.usd * factor)

    def as_dict(self) -> dict[str, float]:
        return {"cu": self.cu, "eu": self.eu, "co2": self.co2, "usd": self.usd}


ZERO_COST = CostVector(0.0, 0.0, 0.0, 0.0)
_FIELD_OF = {MetricKind.CU: "cu", MetricKind.EU: "eu", MetricKind.CO2: "co2", MetricKind.USD: "usd"}


@dataclass(frozen=True)
class TierPrior:
    """Probability that a load/store resolves to each memory tier."""

    probabilities: Mapping[MemoryTier, float]

    def __post_init__(self) -> None:
        probs = {t: 0.0 for t in TIERS}
        for tier, p in self.probabilities.items():
            p = _check_nonneg(p, f"prior probability for {tier.value}", ValidationError)
            if p > 1.0:
                raise ValidationError(f"prior probability for {tier.value} exceeds 1: {p}")
            probs[tier] += p
        total = math.fsum(probs.values())
        if abs(total - 1.0) > PRIOR_SUM_TOLERANCE:
            raise ValidationError(f"tier prior sums to {total!r}, expected 1")
        object.__setattr__(self, "probabilities", MappingProxyType(probs))

    @classmethod
    def from_mapping(cls, mapping: Mapping[str | MemoryTier, float]) -> "TierPrior":
        probs: dict[MemoryTier, float] = {}
        for key, p in mapping.items():
            tier = key if isinstance(key, MemoryTier) else MemoryTier.parse(key)
            probs[tier] = probs.get(tier, 0.0) + _check_nonneg(p, f"prior probability for {key}", ValidationError)
        return cls(probs)

    @classmethod
    def point(cls, tier: MemoryTier) -> "TierPrior":
        return cls({tier: 1.0})

    def __getitem__(self, tier: MemoryTier) -> float:
        return self.probabilities[tier]

    def as_dict(self) -> dict[str, float]:
        return {t.value: self.probabilities[t] for t in TIERS}


DEFAULT_TIER_PRIOR = TierPrior({MemoryTier.L1: 0.90, MemoryTier.L2: 0.06, MemoryTier.L3: 0.03, MemoryTier.DRAM: 0.01})


@dataclass(frozen=True)
class EnvironmentParams:
    carbon_intensity: float  # kg CO2 per kWh
    price_per_kwh: float  # USD per kWh

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "carbon_intensity", _check_nonneg(self.carbon_intensity, "carbon_intensity", ValidationError)
        )
        object.__setattr__(self, "price_per_kwh", _check_nonneg(self.price_per_kwh, "price_per_kwh", ValidationError))


def derive_co2(eu_joules: float, carbon_intensity: float) -> float:
    """Carbon in kg for ``eu_joules`` of energy at ``carbon_intensity`` kg/kWh."""
    eu_joules = _check_nonneg(eu_joules, "eu_joules")
    carbon_intensity = _check_nonneg(carbon_intensity, "carbon_intensity")
    return eu_joules * carbon_intensity / JOULES_PER_KWH


def derive_usd(eu_joules: float, price_per_kwh: float) -> float:
    """Electricity cost in USD for ``eu_joules`` at ``price_per_kwh``."""
    eu_joules = _check_nonneg(eu_joules, "eu_joules")
    price_per_kwh = _check_nonneg(price_per_kwh, "price_per_kwh")
    return eu_joules / JOULES_PER_KWH * price_per_kwh


_SEMVER = re.compile(r"^(0|[1-9]\d*)\.(0|[1-9]\d*)\.(0|[1-9]\d*)$")


@dataclass(frozen=True)
class CostTable:
    architecture: str
    version: str
    provenance: Mapping[str, Any]
    base_costs: Mapping[InstructionClass, CostVector]
    tier_costs: Mapping[InstructionClass, Mapping[MemoryTier, CostVector]] = field(default_factory=dict)
    default_tier_prior: TierPrior = DEFAULT_TIER_PRIOR
    environment: EnvironmentParams | None = None

    def __post_init__(self) -> None:
        if not self.architecture or not isinstance(self.architecture, str):
            raise ValidationError("architecture must be a non-empty string")
        if not isinstance(self.version, str) or not _SEMVER.match(self.version):
            raise ValidationError(f"version must be MAJOR.MINOR.PATCH, got {self.version!r}")
        if IC.OTHER not in self.base_costs:
            raise ValidationError("cost table must define the 'other' class")
        for cls, tiers in self.tier_costs.items():
            if not cls.tierable:
                raise ValidationError(f"tier costs given for non-tierable class {cls.value}")
            missing = [t.value for t in TIERS if t not in tiers]
            if missing:
                raise ValidationError(f"tier costs for {cls.value} missing tiers {missing}")
        ordered_base = {k: self.base_costs[k] for k in InstructionClass if k in self.base_costs}
        ordered_tiers = {
            k: MappingProxyType({t: self.tier_costs[k][t] for t in TIERS})
            for k in InstructionClass
            if k in self.tier_costs
        }
        object.__setattr__(self, "base_costs", MappingProxyType(ordered_base))
        object.__setattr__(self, "tier_costs", MappingProxyType(ordered_tiers))
        object.__setattr__(self, "provenance", MappingProxyType(dict(self.provenance)))

    def base_cost(self, cls: InstructionClass) -> CostVector:
        """Base cost of ``cls``; classes the table omits fall back to ``other``."""
        return self.base_costs.get(cls, self.base_costs[IC.OTHER])

    def has_tiers(self, cls: InstructionClass) -> bool:
        return cls in self.tier_costs


def lookup_cost(table: CostTable, cls: InstructionClass, prior: TierPrior | None = None) -> CostVector:
    """Effective per-instruction cost of ``cls``.

    Tierable classes with tier costs return the prior-weighted expectation
    over tiers; the table's default prior is used when ``prior`` is None.
    """
    if prior is not None and not cls.tierable:
        raise InvalidArgumentError(f"a tier prior was given for non-tierable class {cls.value}")
    if cls.tierable and cls in table.tier_costs:
        prior = prior or table.default_tier_prior
        tiers = table.tier_costs[cls]
        parts = [tiers[t].scaled(prior[t]) for t in TIERS if prior[t] > 0.0]
        total = parts[0]
        for p in parts[1:]:
            total = total + p
        return total
    return table.base_cost(cls)


def scale_table(table: CostTable, eu_scale: float, price_scale: float) -> CostTable:
    """Copy of ``table`` with energy scaled by ``eu_scale`` and prices by ``price_scale``.

    CU is untouched and CO2 follows energy.  Without environment parameters
    every USD entry is multiplied by ``price_scale``.  With them, a USD entry
    is split into its electricity part (``eu * price / 3.6e6``, capped at the
    entry) and a fixed remainder; only the electricity part moves, by
    ``eu_scale * price_scale``, and the environment's tariff is rescaled.
    """
    for name, s in (("eu_scale", eu_scale), ("price_scale", price_scale)):
        if isinstance(s, bool) or not isinstance(s, (int, float)) or not math.isfinite(s) or s <= 0:
            raise InvalidArgumentError(f"{name} must be finite and positive, got {s!r}")
    env = table.environment

    def scale(v: CostVector) -> CostVector:
        if env is None:
            usd = v.usd * price_scale
        elif eu_scale * price_scale == 1.0:
            usd = v.usd
        else:
            energy_part = min(v.usd, v.eu * env.price_per_kwh / JOULES_PER_KWH)
            usd = (v.usd - energy_part) + energy_part * eu_scale * price_scale
        return CostVector(v.cu, v.eu * eu_scale, v.co2 * eu_scale, usd)

    new_env = None
    if env is not None:
        new_env = EnvironmentParams(env.carbon_intensity, env.price_per_kwh * price_scale)
    return replace(
        table,
        base_costs={k: scale(v) for k, v in table.base_costs.items()},
        tier_costs={k: {t: scale(v) for t, v in tiers.items()} for k, tiers in table.tier_costs.items()},
        environment=new_env,
    )


# -- external document format ------------------------------------------------

_COST_FIELDS = ("cu", "eu", "co2", "usd")


def _resolve_entry(
    cls: InstructionClass,
    entry: Any,
    env: EnvironmentParams | None,
    where: str,
    base: CostVector | None = None,
    base_explicit: frozenset[str] = frozenset(_COST_FIELDS),
) -> tuple[CostVector, frozenset[str]]:
    if not isinstance(entry, Mapping):
        raise ValidationError(f"{where}: cost entry for {cls.value} must be an object")
    unknown = set(entry) - set(_COST_FIELDS)
    if unknown:
        raise ValidationError(f"{where}: unknown cost fields {sorted(unknown)} for {cls.value}")
    values: dict[str, float] = {}
    for name in _COST_FIELDS:
        if name in entry:
            v = entry[name]
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ValidationError(f"{where}: {cls.value}.{name} must be a finite number, got {v!r}")
            if v < 0:
                raise ValidationError(f"{where}: negative cost for {cls.value}.{name}: {v!r}")
            values[name] = float(v)
    explicit = frozenset(values)
    if base is not None:
        for name in ("cu", "eu"):
            values.setdefault(name, getattr(base, name))
    for name in ("cu", "eu"):
        if name not in values:
            raise ValidationError(f"{where}: {cls.value} is missing required field {name}")
    for name, derive, param in (("co2", derive_co2, "carbon_intensity"), ("usd", derive_usd, "price_per_kwh")):
        if name in values:
            continue
        # Inherit an explicit base value unless this entry changes energy.
        if base is not None and name in base_explicit and "eu" not in explicit:
            values[name] = getattr(base, name)
        elif env is not None:
            values[name] = derive(values["eu"], getattr(env, param))
        elif base is not None and name in base_explicit:
            values[name] = getattr(base, name)
        else:
            raise ValidationError(
                f"{where}: {cls.value}.{name} missing and no environment parameters to derive it"
            )
    own_explicit = explicit | (base_explicit if base is not None else frozenset())
    return CostVector(**values), own_explicit


def load_cost_table(document: str | bytes | Mapping[str, Any], source: str | None = None) -> CostTable:
    """Parse and validate a JSON cost-table document."""
    where = source or "<cost table>"
    if isinstance(document, (str, bytes)):
        try:
            data = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed cost table: {exc.msg} (column {exc.colno})", source, exc.lineno) from None
        except UnicodeDecodeError as exc:
            raise ParseError(f"cost table is not valid UTF-8: {exc}", source) from None
    else:
        data = document
    if not isinstance(data, Mapping):
        raise ParseError("cost table document must be a JSON object", source, 1)

    allowed = {"architecture", "version", "provenance", "environment", "costs", "tier_costs", "tier_prior"}
    unknown = set(data) - allowed
    if unknown:
        raise ValidationError(f"{where}: unknown top-level fields {sorted(unknown)}")
    for required in ("architecture", "version", "costs"):
        if required not in data:
            raise ValidationError(f"{where}: missing required field {required!r}")

    env = None
    if data.get("environment") is not None:
        e = data["environment"]
        if not isinstance(e, Mapping):
            raise ValidationError(f"{where}: environment must be an object")
        try:
            env = EnvironmentParams(e["carbon_intensity_kg_per_kwh"], e["price_per_kwh_usd"])
        except KeyError as exc:
            raise ValidationError(f"{where}: environment is missing {exc.args[0]!r}") from None

    costs = data["costs"]
    if not isinstance(costs, Mapping):
        raise ValidationError(f"{where}: costs must be an object")
    base: dict[InstructionClass, CostVector] = {}
    explicit: dict[InstructionClass, frozenset[str]] = {}
    for class_id, entry in costs.items():
        cls = InstructionClass.parse(class_id)
        base[cls], explicit[cls] = _resolve_entry(cls, entry, env, where)
    if IC.OTHER not in base:
        raise ValidationError(f"{where}: cost table must define the 'other' class")

    tiers: dict[InstructionClass, dict[MemoryTier, CostVector]] = {}
    for class_id, per_tier in (data.get("tier_costs") or {}).items():
        cls = InstructionClass.parse(class_id)
        if not cls.tierable:
            raise ValidationError(f"{where}: tier costs given for non-tierable class {cls.value}")
        if not isinstance(per_tier, Mapping):
            raise ValidationError(f"{where}: tier_costs.{class_id} must be an object")
        anchor = base.get(cls, base[IC.OTHER])
        anchor_explicit = explicit.get(cls, explicit[IC.OTHER])
        resolved: dict[MemoryTier, CostVector] = {}
        for tier_name, override in per_tier.items():
            tier = MemoryTier.parse(tier_name)
            if tier in resolved:
                raise ValidationError(f"{where}: tier {tier.value} given twice for {cls.value}")
            resolved[tier], _ = _resolve_entry(cls, override, env, where, anchor, anchor_explicit)
        for tier in TIERS:
            resolved.setdefault(tier, anchor)
        tiers[cls] = resolved

    prior = DEFAULT_TIER_PRIOR
    if data.get("tier_prior") is not None:
        if not isinstance(data["tier_prior"], Mapping):
            raise ValidationError(f"{where}: tier_prior must be an object")
        prior = TierPrior.from_mapping(data["tier_prior"])

    provenance = data.get("provenance") or {}
    if not isinstance(provenance, Mapping):
        raise ValidationError(f"{where}: provenance must be an object")
    return CostTable(
        architecture=data["architecture"],
        version=data["version"],
        provenance=provenance,
        base_costs=base,
        tier_costs=tiers,
        default_tier_prior=prior,
        environment=env,
    )


def _plain(value: Any) -> Any:
    if isinstance(value, Mapping):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def cost_table_to_dict(table: CostTable) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "architecture": table.architecture,
        "version": table.version,
        "provenance": _plain(table.provenance),
    }
    if table.environment is not None:
        doc["environment"] = {
            "carbon_intensity_kg_per_kwh": table.environment.carbon_intensity,
            "price_per_kwh_usd": table.environment.price_per_kwh,
        }
    doc["costs"] = {k.value: v.as_dict() for k, v in table.base_costs.items()}
    if table.tier_costs:
        doc["tier_costs"] = {
            k.value: {t.value: v.as_dict() for t, v in tiers.items()} for k, tiers in table.tier_costs.items()
        }
    doc["tier_prior"] = table.default_tier_prior.as_dict()
    return doc


def dump_cost_table(table: CostTable) -> str:
    return json.dumps(cost_table_to_dict(table), indent=2) + "\n"


def load_cost_table_file(path: str) -> CostTable:
    with open(path, "rb") as fh:
        raw = fh.read()
    return load_cost_table(raw, source=str(path))


def available_architectures() -> list[str]:
    files = resources.files("opcost.data")
    return sorted(p.name[: -len(".json")] for p in files.iterdir() if p.name.endswith(".json"))


def load_bundled_table(architecture: str = "x86_64") -> CostTable:
    names = available_architectures()
    if architecture not in names:
        raise InvalidArgumentError(
            f"no bundled cost table for architecture {architecture!r}; available: {', '.join(names)}"
        )
    raw = resources.files("opcost.data").joinpath(f"{architecture}.json").read_bytes()
    return load_cost_table(raw, source=f"{architecture}.json")


# -- profiles -------------------------------------------------------------------


@dataclass(frozen=True)
class Profile:
    """Named weight vector over (CU, EU, CO2, USD) on the unit simplex."""

    name: str
    weights: tuple[float, float, float, float]

    def __post_init__(self) -> None:
        w = tuple(float(x) for x in self.weights)
        if len(w) != 4:
            raise InvalidArgumentError(f"profile {self.name!r} needs exactly 4 weights, got {len(w)}")
        for metric, x in zip(METRICS, w):
            if not math.isfinite(x) or x <= 0:
                raise InvalidArgumentError(f"profile {self.name!r}: weight for {metric.value} must be > 0, got {x!r}")
        total = math.fsum(w)
        if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise InvalidArgumentError(f"profile {self.name!r}: weights sum to {total!r}, expected 1")
        object.__setattr__(self, "weights", w)

    def __getitem__(self, metric: MetricKind) -> float:
        return self.weights[METRICS.index(metric)]

    def as_dict(self) -> dict[str, float]:
        return {m.value: w for m, w in zip(METRICS, self.weights)}


_BUILTIN_PROFILES = (
    Profile("RESEARCH", (0.4, 0.3, 0.25, 0.05)),
    Profile("COMMERCIAL", (0.3, 0.2, 0.2, 0.3)),
    Profile("MOBILE", (0.25, 0.5, 0.15, 0.1)),
    Profile("HPC", (0.5, 0.3, 0.15, 0.05)),
)

PROFILE_NAMES = tuple(p.name for p in _BUILTIN_PROFILES)


def builtin_profiles() -> list[Profile]:
    return list(_BUILTIN_PROFILES)


def get_profile(name: str) -> Profile:
    for p in _BUILTIN_PROFILES:
        if p.name == name.upper():
            return p
    raise InvalidArgumentError(f"unknown profile {name!r}; built-in profiles are {', '.join(PROFILE_NAMES)}")


def profile_from_weights(weights: Iterable[float], name: str = "CUSTOM") -> Profile:
    return Profile(name, tuple(weights))

"""Hierarchical reports, rankings, recommendations and their text/JSON rendering."""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from opcost.cost_model import (
    METRICS,
    CostTable,
    InstructionClass,
    MetricKind,
    Profile,
    TierPrior,
    classes_in_group,
)
from opcost.errors import InvalidArgumentError, ParseError
from opcost.parsers.base import CountVector, ParsedFile, sum_counts
from opcost.scoring import (
    DEFAULT_GRADES,
    ZERO_TOTALS,
    CompositeResult,
    GradeScale,
    RawTotals,
    aggregate_breakdown,
    score_totals,
)

SCHEMA_VERSION = "1"
LEVELS = ("function", "file", "module", "repository")


@dataclass(frozen=True)
class Recommendation:
    rule_id: str
    severity: str
    message: str
    evidence: Mapping[str, Any]


@dataclass
class ReportNode:
    level: str
    name: str
    counts: CountVector
    raw: RawTotals
    breakdown: dict[InstructionClass, RawTotals] = field(default_factory=dict)
    result: CompositeResult | None = None
    children: list["ReportNode"] = field(default_factory=list)
    recommendations: list[Recommendation] = field(default_factory=list)

    def walk(self) -> Iterable["ReportNode"]:
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass(frozen=True)
class RecommendationRules:
    div_cu_share: float = 0.20
    memory_eu_share: float = 0.40
    branch_count_share: float = 0.30
    simd_min_arith: int = 16

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "RecommendationRules":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise InvalidArgumentError(f"unknown recommendation thresholds: {sorted(unknown)}")
        return cls(**data)


DEFAULT_RULES = RecommendationRules()
_MEMORY = classes_in_group("memory")
_BRANCH = classes_in_group("branch")
_ARITH = classes_in_group("arith")
_SIMD = classes_in_group("simd")


def recommend(node: ReportNode, rules: RecommendationRules = DEFAULT_RULES) -> list[Recommendation]:
    """Evaluate the fixed rule set, in order, against a node's counts and costs."""
    out: list[Recommendation] = []
    total = node.counts.total()
    if total == 0:
        return out
    parts = node.breakdown

    if node.raw.cu > 0:
        div_cu = parts.get(InstructionClass.ARITH_DIV, ZERO_TOTALS).cu
        share = div_cu / node.raw.cu
        if share > rules.div_cu_share:
            out.append(Recommendation(
                "DIV_HEAVY", "warn",
                f"division accounts for {share:.0%} of compute units; consider strength reduction "
                "(multiply by reciprocal, shifts for powers of two, hoisting invariant divisors)",
                {"metric": "CU", "classes": ["arith_div"], "share": share, "threshold": rules.div_cu_share},
            ))
    if node.raw.eu > 0:
        mem_eu = sum(parts[k].eu for k in _MEMORY if k in parts)
        share = mem_eu / node.raw.eu
        if share > rules.memory_eu_share:
            out.append(Recommendation(
                "MEM_BOUND", "warn",
                f"memory operations account for {share:.0%} of energy; improve locality "
                "(blocking, contiguous access, reuse of loaded values)",
                {"metric": "EU", "classes": [k.value for k in _MEMORY], "share": share,
                 "threshold": rules.memory_eu_share},
            ))
    branches = sum(node.counts[k] for k in _BRANCH)
    share = branches / total
    if share > rules.branch_count_share:
        out.append(Recommendation(
            "BRANCH_HEAVY", "info",
            f"branches are {share:.0%} of instructions; consider branch-free formulations or loop unswitching",
            {"metric": "count", "classes": [k.value for k in _BRANCH], "share": share,
             "threshold": rules.branch_count_share},
        ))
    arith = sum(node.counts[k] for k in _ARITH)
    simd = sum(node.counts[k] for k in _SIMD)
    if arith >= rules.simd_min_arith and simd == 0:
        out.append(Recommendation(
            "SIMD_OPPORTUNITY", "info",
            f"{arith} scalar arithmetic operations and no SIMD; consider vectorization",
            {"metric": "count", "arith_count": arith, "simd_count": simd,
             "threshold": rules.simd_min_arith},
        ))
    return out


def rank(results: Iterable[CompositeResult]) -> list[CompositeResult]:
    """Best first: descending score, then ascending CU, then artifact id."""
    return sorted(results, key=lambda r: (-r.efficiency_score, r.raw.cu, r.artifact_id))


def _sum_raw(values: Iterable[RawTotals]) -> RawTotals:
    total = ZERO_TOTALS
    for v in values:
        total = total + v
    return total


def _sum_breakdowns(nodes: Sequence[ReportNode], extra: Mapping[InstructionClass, RawTotals] = {}):
    out: dict[InstructionClass, RawTotals] = {}
    for part in [n.breakdown for n in nodes] + [extra]:
        for k, v in part.items():
            out[k] = out[k] + v if k in out else v
    return {k: out[k] for k in InstructionClass if k in out}


def module_of(path: str) -> str:
    """First path component; files at the analysis root belong to module ``.``."""
    parts = [p for p in path.replace("\\", "/").split("/") if p not in ("", ".")]
    return parts[0] if len(parts) > 1 else "."


def build_tree(
    files: Sequence[ParsedFile],
    table: CostTable,
    profile: Profile,
    cohort_scope: str = "files",
    priors: Mapping[InstructionClass, TierPrior] | None = None,
    grades: GradeScale = DEFAULT_GRADES,
    rules: RecommendationRules = DEFAULT_RULES,
    root_name: str = "repository",
    bands: bool = True,
) -> ReportNode:
    """Repository -> module -> file -> function tree, scored over one cohort.

    ``cohort_scope`` picks which level forms the normalization cohort
    (``functions`` or ``files``); nodes at other levels carry no score.
    """
    if not files:
        raise InvalidArgumentError("build_tree needs at least one parsed file")
    if cohort_scope not in ("functions", "files"):
        raise InvalidArgumentError(f"cohort scope must be 'functions' or 'files', got {cohort_scope!r}")

    file_nodes: list[tuple[str, ReportNode]] = []
    for pf in sorted(files, key=lambda f: f.path):
        fn_nodes = []
        for fn in pf.functions:
            parts = aggregate_breakdown(fn.counts, table, priors)
            fn_nodes.append(ReportNode("function", fn.name, fn.counts, _sum_raw(parts.values()), parts))
        top = aggregate_breakdown(pf.toplevel_counts, table, priors)
        node = ReportNode(
            "file",
            pf.path,
            pf.toplevel_counts + sum_counts(n.counts for n in fn_nodes),
            _sum_raw([n.raw for n in fn_nodes] + [_sum_raw(top.values())]),
            _sum_breakdowns(fn_nodes, top),
            children=fn_nodes,
        )
        file_nodes.append((module_of(pf.path), node))

    modules: dict[str, list[ReportNode]] = {}
    for mod, node in file_nodes:
        modules.setdefault(mod, []).append(node)
    module_nodes = []
    for mod in sorted(modules):
        kids = modules[mod]
        module_nodes.append(ReportNode(
            "module", mod, sum_counts(k.counts for k in kids), _sum_raw(k.raw for k in kids),
            _sum_breakdowns(kids), children=kids,
        ))
    root = ReportNode(
        "repository", root_name, sum_counts(m.counts for m in module_nodes),
        _sum_raw(m.raw for m in module_nodes), _sum_breakdowns(module_nodes), children=module_nodes,
    )

    members: list[tuple[str, ReportNode]] = []
    seen: dict[str, int] = {}
    for _, fnode in file_nodes:
        if cohort_scope == "files":
            members.append((fnode.name, fnode))
            continue
        for child in fnode.children:
            aid = f"{fnode.name}::{child.name}"
            seen[aid] = seen.get(aid, 0) + 1
            if seen[aid] > 1:
                aid = f"{aid}#{seen[aid]}"
            members.append((aid, child))
    if members:
        by_id = {aid: node for aid, node in members}
        with_bands = bands and bool(table.tier_costs)
        results = score_totals(
            [(aid, node.raw) for aid, node in members], profile, grades,
            table=table if with_bands else None,
            counts={aid: node.counts for aid, node in members} if with_bands else None,
            priors=priors,
        )
        for res in results:
            by_id[res.artifact_id].result = res

    for node in root.walk():
        node.recommendations = recommend(node, rules)
    return root


# -- rendering ------------------------------------------------------------------


def _raw_dict(raw: RawTotals) -> dict[str, float]:
    return {"cu": raw.cu, "eu_j": raw.eu, "co2_kg": raw.co2, "usd": raw.usd}


def _raw_from(d: Mapping[str, float]) -> RawTotals:
    return RawTotals(d["cu"], d["eu_j"], d["co2_kg"], d["usd"])


def node_to_dict(node: ReportNode) -> dict[str, Any]:
    res = node.result
    return {
        "level": node.level,
        "name": node.name,
        "counts": node.counts.to_dict(),
        "space_hints": node.counts.spaces_to_dict(),
        "raw": _raw_dict(node.raw),
        "breakdown": {k.value: _raw_dict(v) for k, v in node.breakdown.items()},
        "artifact_id": res.artifact_id if res else None,
        "normalized": {m.value: res.normalized[m] for m in METRICS} if res else None,
        "csc": res.csc if res else None,
        "score": res.efficiency_score if res else None,
        "grade": res.grade if res else None,
        "rating": res.rating if res else None,
        "band": list(res.band) if res and res.band is not None else None,
        "recommendations": [
            {"rule_id": r.rule_id, "severity": r.severity, "message": r.message, "evidence": dict(r.evidence)}
            for r in node.recommendations
        ],
        "children": [node_to_dict(c) for c in node.children],
    }


def node_from_dict(d: Mapping[str, Any]) -> ReportNode:
    result = None
    raw = _raw_from(d["raw"])
    if d.get("score") is not None:
        result = CompositeResult(
            d["artifact_id"], raw, {MetricKind(k): v for k, v in d["normalized"].items()},
            d["csc"], d["score"], d["grade"], d["rating"],
            tuple(d["band"]) if d.get("band") is not None else None,
        )
    return ReportNode(
        level=d["level"],
        name=d["name"],
        counts=CountVector.from_dict(d["counts"], d.get("space_hints")),
        raw=raw,
        breakdown={InstructionClass(k): _raw_from(v) for k, v in d.get("breakdown", {}).items()},
        result=result,
        children=[node_from_dict(c) for c in d["children"]],
        recommendations=[
            Recommendation(r["rule_id"], r["severity"], r["message"], r["evidence"]) for r in d["recommendations"]
        ],
    )


def report_to_dict(root: ReportNode, meta: Mapping[str, Any] | None = None) -> dict[str, Any]:
    doc: dict[str, Any] = {"schema_version": SCHEMA_VERSION}
    doc.update(meta or {})
    doc["root"] = node_to_dict(root)
    return doc


def report_from_json(data: str | bytes) -> tuple[ReportNode, dict[str, Any]]:
    """Re-ingest a JSON report; returns the tree and the remaining metadata."""
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed report: {exc.msg}", line=exc.lineno) from None
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ParseError(f"unsupported report schema_version {doc.get('schema_version')!r}")
    root = node_from_dict(doc.pop("root"))
    return root, doc


def _top_classes(node: ReportNode, k: int = 3) -> str:
    ranked = sorted(node.breakdown.items(), key=lambda kv: (-kv[1].cu, kv[0].value))[:k]
    if not ranked or node.raw.cu <= 0:
        return "-"
    return ", ".join(f"{cls.value} {part.cu / node.raw.cu:.0%}" for cls, part in ranked)


def _render_text(root: ReportNode, meta: Mapping[str, Any]) -> str:
    out = io.StringIO()
    if meta:
        profile = meta.get("profile", {})
        out.write(f"opcost report  arch={meta.get('architecture')} table={meta.get('table_version')} "
                  f"profile={profile.get('name')} cohort={meta.get('cohort_scope')}\n\n")
    header = ("Level", "Name", "Score", "Grade", "Rating", "CU", "EU (J)", "CO2 (kg)", "USD", "Top cost classes")
    rows = []
    depth_of = {}

    def visit(node: ReportNode, depth: int) -> None:
        depth_of[id(node)] = depth
        res = node.result
        rows.append((
            node.level,
            "  " * depth + node.name,
            f"{res.efficiency_score:.2f}" if res else "-",
            res.grade if res else "-",
            res.rating if res else "-",
            f"{node.raw.cu:.6g}",
            f"{node.raw.eu:.6g}",
            f"{node.raw.co2:.6g}",
            f"{node.raw.usd:.6g}",
            _top_classes(node),
        ))
        for child in node.children:
            visit(child, depth + 1)

    visit(root, 0)
    widths = [max(len(str(r[i])) for r in rows + [header]) for i in range(len(header))]
    numeric = {2, 5, 6, 7, 8}

    def fmt(row) -> str:
        cells = [str(c).rjust(w) if i in numeric else str(c).ljust(w) for i, (c, w) in enumerate(zip(row, widths))]
        return "  ".join(cells).rstrip() + "\n"

    out.write(fmt(header))
    out.write("  ".join("-" * w for w in widths) + "\n")
    for row in rows:
        out.write(fmt(row))

    recs = [(n, r) for n in root.walk() for r in n.recommendations]
    if recs:
        out.write("\nRecommendations\n")
        for node, r in recs:
            out.write(f"  [{r.severity}] {r.rule_id:<16} {node.level} {node.name}: {r.message}\n")
    return out.getvalue()


def render(root: ReportNode, format: str = "text", meta: Mapping[str, Any] | None = None) -> bytes:
    """Serialize a report tree; identical input yields identical bytes."""
    if format == "json":
        return (json.dumps(report_to_dict(root, meta), indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    if format == "text":
        return _render_text(root, meta or {}).encode("utf-8")
    raise InvalidArgumentError(f"unknown report format {format!r}; expected text or json")


def report_meta(table: CostTable, profile: Profile, cohort_scope: str) -> dict[str, Any]:
    return {
        "tool": "opcost",
        "architecture": table.architecture,
        "table_version": table.version,
        "profile": {"name": profile.name, "weights": profile.as_dict()},
        "cohort_scope": cohort_scope,
    }

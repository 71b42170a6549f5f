"""Command-line entry point: ``opcost analyze|batch|validate|sweep|grid``.

Settings resolve with precedence command-line flag > ``OPCOST_*`` environment
variable > JSON configuration file > built-in default.  Exit codes: 0 success,
1 usage error, 2 parse or validation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping, Sequence

from opcost import __version__
from opcost.cost_model import (
    PROFILE_NAMES,
    CostTable,
    MetricKind,
    Profile,
    available_architectures,
    get_profile,
    load_bundled_table,
    load_cost_table_file,
    profile_from_weights,
)
from opcost.errors import OpcostError, ParseError
from opcost.parsers import ParsedFile, SourceKind, discover, parse_path, source_kind
from opcost.reporting import RecommendationRules, ReportNode, build_tree, render, report_meta
from opcost.scoring import GradeScale

log = logging.getLogger("opcost")

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_IO = 0, 1, 2, 3
COMMANDS = ("analyze", "batch", "validate", "sweep", "grid")
ENV_PREFIX = "OPCOST_"


class UsageError(OpcostError):
    """Bad flags, settings or configuration; maps to exit code 1."""


# -- setting converters ---------------------------------------------------------


def _pair(text: Any, what: str, conv: Callable[[str], Any] = float) -> tuple:
    items = text if isinstance(text, (list, tuple)) else str(text).split(",")
    if len(items) != 2:
        raise UsageError(f"{what}: expected two comma-separated values, got {text!r}")
    try:
        return tuple(conv(str(x).strip()) for x in items)
    except ValueError:
        raise UsageError(f"{what}: cannot parse {text!r}") from None


def _weights(text: Any, what: str) -> tuple[float, ...]:
    items = text if isinstance(text, (list, tuple)) else str(text).split(",")
    try:
        values = tuple(float(x) for x in items)
    except (TypeError, ValueError):
        raise UsageError(f"{what}: weights must be four numbers, got {text!r}") from None
    if len(values) != 4:
        raise UsageError(f"{what}: expected four weights (CU, EU, CO2, USD), got {len(values)}")
    return values


def _int(text: Any, what: str, minimum: int | None = None) -> int:
    try:
        value = int(text)
    except (TypeError, ValueError):
        raise UsageError(f"{what}: expected an integer, got {text!r}") from None
    if minimum is not None and value < minimum:
        raise UsageError(f"{what}: must be at least {minimum}, got {value}")
    return value


def _choice(options: Sequence[str]) -> Callable[[Any, str], str]:
    def conv(text: Any, what: str) -> str:
        if text not in options:
            raise UsageError(f"{what}: expected one of {', '.join(options)}, got {text!r}")
        return text
    return conv


def _globs(text: Any, what: str) -> tuple[str, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(str(t) for t in text)
    return tuple(t for t in str(text).split(",") if t)


def _grid(text: Any, what: str) -> tuple[int, int]:
    if isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = str(text).lower().replace(",", "x").split("x")
    if len(parts) != 2:
        raise UsageError(f"{what}: expected ROWSxCOLS, got {text!r}")
    return _int(parts[0], what, 1), _int(parts[1], what, 1)


def _metric(text: Any, what: str) -> MetricKind:
    try:
        return MetricKind.parse(str(text))
    except ValueError:
        raise UsageError(f"{what}: unknown metric {text!r}; expected cu, eu, co2 or usd") from None


def _text(text: Any, what: str) -> str:
    return str(text)


# name -> converter; the flag is --name-with-dashes, the env var OPCOST_NAME.
_SETTINGS: dict[str, Callable[[Any, str], Any]] = {
    "arch": _text,
    "profile": _text,
    "weights": _weights,
    "cost_table": _text,
    "format": _choice(("text", "json")),
    "output": _text,
    "seed": lambda v, w: _int(v, w),
    "cohort": _choice(("functions", "files")),
    "include": _globs,
    "exclude": _globs,
    "jobs": lambda v, w: _int(v, w, 1),
    "plot_dir": _text,
    "csv": _text,
    "metric": _metric,
    "steps": lambda v, w: _int(v, w, 2),
    "w_range": lambda v, w: _pair(v, w),
    "pair": lambda v, w: _pair(v, w, str),
    "eu_range": lambda v, w: _pair(v, w),
    "price_range": lambda v, w: _pair(v, w),
    "grid": _grid,
}
_CONFIG_ONLY = ("thresholds",)

_DEFAULTS: dict[str, Any] = {
    "arch": "x86_64",
    "profile": "RESEARCH",
    "format": "text",
    "seed": 42,
    "include": (),
    "exclude": (),
    "jobs": os.cpu_count() or 1,
    "metric": MetricKind.CU,
    "steps": 121,
    "w_range": (0.1, 0.7),
    "eu_range": (0.8, 1.2),
    "price_range": (0.7, 1.3),
    "grid": (5, 7),
}


@dataclass
class RunConfig:
    command: str
    inputs: tuple[str, ...] = ()
    architecture: str = "x86_64"
    profile: Profile = field(default_factory=lambda: get_profile("RESEARCH"))
    cost_table_path: str | None = None
    format: str = "text"
    output_path: str | None = None
    seed: int = 42
    cohort_scope: str | None = None  # None: per-command default
    include: tuple[str, ...] = ()
    exclude: tuple[str, ...] = ()
    jobs: int = 1
    threshold_overrides: Mapping[str, Any] = field(default_factory=dict)
    plot_dir: str | None = None
    csv_path: str | None = None
    metric: MetricKind = MetricKind.CU
    steps: int = 121
    w_range: tuple[float, float] = (0.1, 0.7)
    pair: tuple[str, str] | None = None
    eu_range: tuple[float, float] = (0.8, 1.2)
    price_range: tuple[float, float] = (0.7, 1.3)
    grid: tuple[int, int] = (5, 7)

    @property
    def grades(self) -> GradeScale:
        return GradeScale.from_mapping(self.threshold_overrides)

    @property
    def rules(self) -> RecommendationRules:
        return RecommendationRules.from_mapping(self.threshold_overrides.get("recommendations", {}))


# -- argument parsing -----------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D401 - argparse hook
        raise UsageError(f"{self.prog}: {message}")


def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    s = argparse.SUPPRESS
    common.add_argument("--arch", default=s, help="bundled cost table (default x86_64)")
    common.add_argument("--profile", default=s, help=f"weight profile: {', '.join(PROFILE_NAMES)}")
    common.add_argument("--weights", default=s, metavar="CU,EU,CO2,USD", help="explicit weights summing to 1")
    common.add_argument("--cost-table", dest="cost_table", default=s, metavar="PATH", help="cost table JSON file")
    common.add_argument("--format", default=s, help="text or json")
    common.add_argument("--output", default=s, metavar="PATH", help="write the result here instead of stdout")
    common.add_argument("--seed", default=s, help="random seed (default 42)")
    common.add_argument("--cohort", default=s, help="normalization cohort: functions or files")
    common.add_argument("--include", action="append", default=s, metavar="GLOB")
    common.add_argument("--exclude", action="append", default=s, metavar="GLOB")
    common.add_argument("--jobs", default=s, help="parallel parse workers (default: CPU count)")
    common.add_argument("--config", default=s, metavar="PATH", help="JSON configuration file")
    common.add_argument("--plot-dir", dest="plot_dir", default=s, metavar="DIR", help="also write PNG figures here")

    parser = _Parser(prog="opcost", description="Static multi-metric instruction cost profiler.", allow_abbrev=False)
    parser.add_argument("--version", action="version", version=f"opcost {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("analyze", parents=[common], allow_abbrev=False, help="score the functions of one file")
    p.add_argument("inputs", nargs=1, metavar="FILE")
    p = sub.add_parser("batch", parents=[common], allow_abbrev=False, help="hierarchical report for a directory")
    p.add_argument("inputs", nargs=1, metavar="ROOT")
    sub.add_parser("validate", parents=[common], allow_abbrev=False, help="seeded baseline comparison study")

    for name, what in (("sweep", "weight sweep between two artifacts"), ("grid", "EU/price robustness grid")):
        p = sub.add_parser(name, parents=[common], allow_abbrev=False, help=what)
        p.add_argument("inputs", nargs="+", metavar="PATH")
        p.add_argument("--csv", default=s, metavar="PATH", help="also write the data as CSV")
    sweep = sub.choices["sweep"]
    sweep.add_argument("--metric", default=s, help="metric whose weight is swept (default cu)")
    sweep.add_argument("--steps", default=s, help="grid points (default 121)")
    sweep.add_argument("--w-range", dest="w_range", default=s, metavar="LO,HI", help="default 0.1,0.7")
    sweep.add_argument("--pair", default=s, metavar="A,B", help="artifact ids to compare")
    grid = sub.choices["grid"]
    grid.add_argument("--eu-range", dest="eu_range", default=s, metavar="LO,HI", help="default 0.8,1.2")
    grid.add_argument("--price-range", dest="price_range", default=s, metavar="LO,HI", help="default 0.7,1.3")
    grid.add_argument("--grid", default=s, metavar="ROWSxCOLS", help="default 5x7")
    return parser


def _read_config(file: str | bytes | Mapping | None, source: str) -> dict[str, Any]:
    if file is None:
        return {}
    if isinstance(file, Mapping):
        data = dict(file)
    else:
        try:
            data = json.loads(file)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON in configuration: {exc.msg}", source, exc.lineno) from None
        except UnicodeDecodeError as exc:
            raise ParseError(f"configuration is not UTF-8: {exc.reason}", source) from None
    if not isinstance(data, dict):
        raise UsageError(f"{source}: configuration must be a JSON object")
    unknown = sorted(set(data) - set(_SETTINGS) - set(_CONFIG_ONLY))
    if unknown:
        raise UsageError(f"{source}: unknown configuration keys: {', '.join(unknown)}")
    return data


def _label(source: str, name: str) -> str:
    if source == "command line":
        return f"--{name.replace('_', '-')}"
    if source == "environment":
        return ENV_PREFIX + name.upper()
    return f"{source}: {name}"


def _resolve_profile(layers: Sequence[tuple[str, Mapping[str, Any]]]) -> Profile:
    # The highest-precedence layer that sets a profile or weights decides.
    for source, layer in layers:
        has_profile, has_weights = "profile" in layer, "weights" in layer
        if has_profile and has_weights:
            raise UsageError(
                f"{_label(source, 'profile')} and {_label(source, 'weights')} are mutually exclusive"
            )
        if has_weights:
            label = _label(source, "weights")
            try:
                return profile_from_weights(_weights(layer["weights"], label))
            except ValueError as exc:
                raise UsageError(f"{label}: {exc}") from None
        if has_profile:
            try:
                return get_profile(str(layer["profile"]))
            except ValueError as exc:
                raise UsageError(f"{_label(source, 'profile')}: {exc}") from None
    return get_profile(_DEFAULTS["profile"])


def load_run_config(
    args: Sequence[str],
    env: Mapping[str, str] | None = None,
    file: str | bytes | Mapping | None = None,
) -> RunConfig:
    """Resolve a RunConfig from argv tokens, environment and a config document.

    When ``file`` is None the configuration is read from ``--config`` or
    ``OPCOST_CONFIG`` if either names a path.
    """
    env = dict(os.environ if env is None else env)
    ns = vars(_build_parser().parse_args(list(args)))
    command = ns.pop("command")
    inputs = tuple(ns.pop("inputs", ()))
    config_path = ns.pop("config", None) or env.get(ENV_PREFIX + "CONFIG")
    source = "configuration"
    if file is None and config_path:
        source = str(config_path)
        try:
            file = Path(config_path).read_bytes()
        except OSError as exc:
            raise OSError(f"{config_path}: cannot read configuration: {exc.strerror}") from None
    config = _read_config(file, source)

    flags = {k: v for k, v in ns.items()}
    env_layer = {k: env[ENV_PREFIX + k.upper()] for k in _SETTINGS if ENV_PREFIX + k.upper() in env}
    layers = [("command line", flags), ("environment", env_layer), (source, config)]
    profile = _resolve_profile(layers)

    values: dict[str, Any] = {}
    for name, conv in _SETTINGS.items():
        if name in ("profile", "weights"):
            continue
        for src, layer in layers:
            if name in layer:
                raw = layer[name]
                if name in ("include", "exclude") and src == "command line":
                    raw = [g for item in raw for g in _globs(item, name)]
                values[name] = conv(raw, _label(src, name))
                break
        else:
            values[name] = _DEFAULTS.get(name)

    thresholds = config.get("thresholds", {})
    if not isinstance(thresholds, Mapping):
        raise UsageError(f"{source}: thresholds must be an object")
    unknown = sorted(set(thresholds) - {"grades", "ratings", "recommendations"})
    if unknown:
        raise UsageError(f"{source}: unknown threshold groups: {', '.join(unknown)}")

    if not values["cost_table"] and values["arch"] not in available_architectures():
        raise UsageError(
            f"--arch: no bundled cost table for {values['arch']!r}; available: {', '.join(available_architectures())}"
        )
    for name in ("w_range", "eu_range", "price_range"):
        lo, hi = values[name]
        if not 0 < lo <= hi:
            raise UsageError(f"--{name.replace('_', '-')}: expected 0 < LO <= HI, got {lo},{hi}")

    cfg = RunConfig(
        command=command,
        inputs=inputs,
        architecture=values["arch"],
        profile=profile,
        cost_table_path=values["cost_table"],
        format=values["format"],
        output_path=values["output"],
        seed=values["seed"],
        cohort_scope=values["cohort"],
        include=values["include"],
        exclude=values["exclude"],
        jobs=values["jobs"],
        threshold_overrides=thresholds,
        plot_dir=values["plot_dir"],
        csv_path=values["csv"],
        metric=values["metric"],
        steps=values["steps"],
        w_range=values["w_range"],
        pair=values["pair"],
        eu_range=values["eu_range"],
        price_range=values["price_range"],
        grid=values["grid"],
    )
    try:
        cfg.grades, cfg.rules  # validate overrides before any work
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{source} thresholds: {exc}") from None
    return cfg


# -- running --------------------------------------------------------------------


@dataclass(frozen=True)
class _Input:
    path: Path
    kind: SourceKind
    display: str


def _load_table(cfg: RunConfig) -> CostTable:
    if cfg.cost_table_path:
        try:
            return load_cost_table_file(cfg.cost_table_path)
        except OSError as exc:
            raise OSError(f"{cfg.cost_table_path}: cannot read cost table: {exc.strerror}") from None
    return load_bundled_table(cfg.architecture)


def _collect(cfg: RunConfig) -> list[_Input]:
    items: list[_Input] = []
    multi = len(cfg.inputs) > 1
    for given in cfg.inputs:
        path = Path(given)
        if not path.exists():
            raise FileNotFoundError(f"{given}: no such file or directory")
        if path.is_file():
            kind = source_kind(path)
            if kind is None:
                raise UsageError(f"{given}: unsupported file extension (expected .ll, .ptx or .py)")
            items.append(_Input(path, kind, path.as_posix() if multi else path.name))
            continue
        for full, kind in discover(path, cfg.include, cfg.exclude):
            rel = full.relative_to(path).as_posix()
            items.append(_Input(full, kind, f"{path.as_posix()}/{rel}" if multi else rel))
    return items


def _parse_all(items: Sequence[_Input], jobs: int) -> list[ParsedFile]:
    def work(item: _Input) -> ParsedFile:
        try:
            return parse_path(item.path, item.kind, item.display)
        except OSError as exc:
            raise OSError(f"{item.display}: cannot read: {exc.strerror}") from None

    if jobs <= 1 or len(items) <= 1:
        return [work(i) for i in items]
    # map() yields in submission order, so results do not depend on scheduling.
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(work, items))


def _scope(cfg: RunConfig, default: str) -> str:
    return cfg.cohort_scope or default


def _tree(cfg: RunConfig, table: CostTable, scope: str, root_name: str) -> ReportNode:
    items = _collect(cfg)
    if not items:
        raise UsageError(f"no .ll, .ptx or .py files found under {', '.join(cfg.inputs)}")
    files = _parse_all(items, cfg.jobs)
    return build_tree(files, table, cfg.profile, scope, grades=cfg.grades, rules=cfg.rules, root_name=root_name)


def _emit(cfg: RunConfig, data: bytes) -> None:
    if cfg.output_path:
        try:
            Path(cfg.output_path).write_bytes(data)
        except OSError as exc:
            raise OSError(f"{cfg.output_path}: cannot write output: {exc.strerror}") from None
        return
    buffer = getattr(sys.stdout, "buffer", None)
    if buffer is not None:
        sys.stdout.flush()
        buffer.write(data)
        buffer.flush()
    else:
        sys.stdout.write(data.decode("utf-8"))


def _write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"{path}: cannot write: {exc.strerror}") from None


def _plot_dir(cfg: RunConfig) -> Path | None:
    if not cfg.plot_dir:
        return None
    path = Path(cfg.plot_dir)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"{cfg.plot_dir}: cannot create plot directory: {exc.strerror}") from None
    return path


def _run_report(cfg: RunConfig, default_scope: str) -> None:
    table = _load_table(cfg)
    scope = _scope(cfg, default_scope)
    root_name = Path(cfg.inputs[0]).name or cfg.inputs[0]
    root = _tree(cfg, table, scope, root_name)
    _emit(cfg, render(root, cfg.format, report_meta(table, cfg.profile, scope)))
    plots = _plot_dir(cfg)
    if plots is not None:
        from opcost import plots as figures

        figures.plot_scores(root, plots / "scores.png")


def _run_analyze(cfg: RunConfig) -> None:
    if Path(cfg.inputs[0]).is_dir():
        raise UsageError(f"{cfg.inputs[0]}: analyze takes a single file; use batch for directories")
    _run_report(cfg, "functions")


def _run_batch(cfg: RunConfig) -> None:
    _run_report(cfg, "files")


def _run_validate(cfg: RunConfig) -> None:
    from opcost.validation.study import render_study_text, run_study, study_to_json

    study = run_study(cfg.seed, _load_table(cfg))
    _emit(cfg, study_to_json(study) if cfg.format == "json" else render_study_text(study).encode("utf-8"))
    plots = _plot_dir(cfg)
    if plots is not None:
        from opcost import plots as figures

        figures.plot_study(study, plots / "study.png")


def _scored(cfg: RunConfig, table: CostTable) -> tuple[ReportNode, dict[str, ReportNode]]:
    default = "functions" if len(cfg.inputs) == 1 and Path(cfg.inputs[0]).is_file() else "files"
    root = _tree(cfg, table, _scope(cfg, default), "inputs")
    nodes = {n.result.artifact_id: n for n in root.walk() if n.result is not None}
    if len(nodes) < 2:
        raise UsageError(f"need at least two artifacts in the cohort, found {len(nodes)}")
    return root, nodes


def _run_sweep(cfg: RunConfig) -> None:
    from opcost.validation.sensitivity import weight_sweep

    table = _load_table(cfg)
    _, nodes = _scored(cfg, table)
    if cfg.pair is None:
        if len(nodes) != 2:
            raise UsageError(f"--pair is required with {len(nodes)} artifacts; ids: {', '.join(sorted(nodes))}")
        pair = tuple(sorted(nodes))
    else:
        pair = cfg.pair
        missing = [p for p in pair if p not in nodes]
        if missing:
            raise UsageError(f"--pair: unknown artifact ids {missing}; ids: {', '.join(sorted(nodes))}")
    a, b = pair
    result = weight_sweep(
        nodes[a].result.normalized, nodes[b].result.normalized, cfg.metric, cfg.profile,
        cfg.w_range, cfg.steps, (a, b),
    )
    if cfg.format == "json":
        doc = {"schema_version": "1", "profile": cfg.profile.name, **result.to_dict()}
        data = (json.dumps(doc, indent=2) + "\n").encode("utf-8")
    else:
        lines = [f"weight sweep on {cfg.metric.value}  base profile {cfg.profile.name}  {a} vs {b}", ""]
        if result.crossovers:
            for c in result.crossovers:
                lines.append(f"crossover at w = {c.w:.4f}: {c.leader_before} -> {c.leader_after}")
        else:
            w0, sa, sb = result.points[0]
            lines.append(f"no crossover; {a if sa >= sb else b} leads throughout")
        lines += ["", f"{'w':>8}{a[:24]:>26}{b[:24]:>26}"]
        step = max(1, (len(result.points) - 1) // 12)
        for w, sa, sb in result.points[::step]:
            lines.append(f"{w:>8.3f}{sa:>26.3f}{sb:>26.3f}")
        data = ("\n".join(lines) + "\n").encode("utf-8")
    _emit(cfg, data)
    if cfg.csv_path:
        _write_text(cfg.csv_path, result.to_csv())
    plots = _plot_dir(cfg)
    if plots is not None:
        from opcost import plots as figures

        figures.plot_sweep(result, plots / "sweep.png")


def _run_grid(cfg: RunConfig) -> None:
    from opcost.validation.sensitivity import robustness_grid

    table = _load_table(cfg)
    _, nodes = _scored(cfg, table)
    artifacts = [(aid, nodes[aid].counts) for aid in sorted(nodes)]
    result = robustness_grid(artifacts, table, cfg.profile, cfg.eu_range, cfg.price_range, cfg.grid)
    if cfg.format == "json":
        doc = {"schema_version": "1", "profile": cfg.profile.name, **result.to_dict()}
        data = (json.dumps(doc, indent=2) + "\n").encode("utf-8")
    else:
        lines = []
        for title, leaders in (("cheapest by USD", result.usd_leader), ("best composite", result.composite_leader)):
            lines += [f"{title} (rows: EU scale, columns: price scale)",
                      " " * 8 + "".join(f"{p:>14g}" for p in result.price_scales)]
            for e, row in zip(result.eu_scales, leaders):
                lines.append(f"{e:>8g}" + "".join(f"{aid[-13:]:>14}" for aid in row))
            lines.append("")
        data = "\n".join(lines).encode("utf-8")
    _emit(cfg, data)
    if cfg.csv_path:
        _write_text(cfg.csv_path, result.to_csv())
    plots = _plot_dir(cfg)
    if plots is not None:
        from opcost import plots as figures

        figures.plot_grid(result, plots / "grid_usd.png", "usd")
        figures.plot_grid(result, plots / "grid_composite.png", "composite")


_RUNNERS = {
    "analyze": _run_analyze,
    "batch": _run_batch,
    "validate": _run_validate,
    "sweep": _run_sweep,
    "grid": _run_grid,
}


def run(config: RunConfig) -> int:
    """Execute a resolved configuration; errors propagate as exceptions."""
    _RUNNERS[config.command](config)
    return EXIT_OK


class _StderrHandler(logging.Handler):
    # Looks up sys.stderr at emit time so redirection and capture work.
    def emit(self, record: logging.LogRecord) -> None:
        sys.stderr.write(f"{record.levelname.lower()}: {self.format(record)}\n")


def _install_logging() -> None:
    if not any(isinstance(h, _StderrHandler) for h in log.handlers):
        log.addHandler(_StderrHandler())
    log.setLevel(logging.WARNING)
    log.propagate = False


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, UsageError):
        return EXIT_USAGE
    if isinstance(exc, OSError):
        return EXIT_IO
    return EXIT_INVALID


def main(argv: Sequence[str] | None = None, env: Mapping[str, str] | None = None) -> int:
    _install_logging()
    try:
        cfg = load_run_config(sys.argv[1:] if argv is None else argv, env)
        return run(cfg)
    except SystemExit as exc:  # --help / --version
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    except (OpcostError, OSError, ValueError, ArithmeticError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return _exit_code(exc)


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()

"""Command-line front end for the identity suites and the SL2 example.

Exit codes: 0 when every check passes, 1 when an identity fails, 2 on a
configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from .reports import Report

DEFAULT_TRIALS = {"aw": 100, "awes": 100, "tn": 3}
ROOT_ORDERS = (1, 2, 4)
SECTIONS = ("aw", "es", "awes", "tn")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    section: str | None = None
    seed: int = 0
    trials: int | None = None
    preset: str | None = None
    tower: dict | None = None
    kmax: int = 20
    bound: int = 24
    out: str | None = None
    format: str = "lines"

    def trials_for(self, section: str) -> int:
        return DEFAULT_TRIALS[section] if self.trials is None else self.trials


CONFIG_KEYS = {f.name for f in fields(RunConfig)} - {"command", "section"}


def _load_json(path: str, what: str) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {what} {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{what} {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{what} {path} must hold a JSON object")
    return data


def build_config(args: argparse.Namespace) -> RunConfig:
    """Merge a config file (if any) with the flags; flags win."""
    values = {}
    if args.config:
        data = _load_json(args.config, "config file")
        unknown = set(data) - CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        values.update(data)
    for key in CONFIG_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    cfg = RunConfig(command=args.command, section=getattr(args, "section", None))
    for key, v in values.items():
        setattr(cfg, key, v)
    for key in ("seed", "kmax", "bound"):
        if not isinstance(getattr(cfg, key), int) or getattr(cfg, key) < 0:
            raise ConfigError(f"{key} must be a non-negative integer")
    if cfg.trials is not None and (not isinstance(cfg.trials, int) or cfg.trials < 0):
        raise ConfigError("trials must be a non-negative integer")
    if cfg.format not in ("lines", "summary"):
        raise ConfigError(f"unknown format {cfg.format!r}")
    if isinstance(cfg.tower, str):
        cfg.tower = _load_json(cfg.tower, "tower file")
    if cfg.tower is not None and cfg.preset is not None:
        raise ConfigError("give either a preset or a tower file, not both")
    return cfg


def _towers(cfg: RunConfig):
    from .tower import PRESETS, TowerError, preset, tower_from_config

    try:
        if cfg.tower is not None:
            return [tower_from_config(cfg.tower, cfg.tower.get("name", "custom"))]
        names = [cfg.preset] if cfg.preset else sorted(PRESETS)
        return [preset(n) for n in names]
    except TowerError as exc:
        raise ConfigError(str(exc)) from exc


def _suite(section: str, cfg: RunConfig) -> list[tuple[str, Report]]:
    if section == "aw":
        from .transfer import AW_CASES, verify_aw

        n = cfg.trials_for("aw")
        return [(f"aw {name}", verify_aw(name, n, cfg.seed)) for name in AW_CASES]
    if section == "es":
        from .transfer import verify_es

        return [("es |G|<=12", verify_es(12, cfg.seed))]
    from .tower import (build_fundamental_family, build_root_family, verify_roots,
                        verify_sections, verify_tower)

    out = []
    for T in _towers(cfg):
        if section == "awes":
            out.append((f"awes {T.name}", verify_tower(T, cfg.seed, cfg.trials_for("awes"))))
            continue
        from .gerbe import verify_gerbe

        fam = build_fundamental_family(T, cfg.seed)
        roots = build_root_family(fam, ROOT_ORDERS, cfg.seed)
        rep = verify_sections(T, cfg.seed)
        rep.extend(verify_roots(roots))
        rep.extend(verify_gerbe(roots, seed=cfg.seed, trials=cfg.trials_for("tn")))
        out.append((f"tn {T.name}", rep))
    return out


def _render(parts: list[tuple[str, Report]], cfg: RunConfig) -> str:
    lines = [f"# command={cfg.command} section={cfg.section or '-'} seed={cfg.seed}"]
    for title, rep in parts:
        if cfg.format == "lines":
            lines.append(f"# {title}")
            lines.append(rep.lines())
        else:
            lines.append(f"{title}: {rep.summary()}")
    total = Report()
    for _, rep in parts:
        total.extend(rep)
    lines.append(f"# total: {total.summary()}")
    return "\n".join(line for line in lines if line) + "\n"


def _emit(text: str, cfg: RunConfig):
    sys.stdout.write(text)
    if cfg.out:
        try:
            Path(cfg.out).write_text(text)
        except OSError as exc:
            raise ConfigError(f"cannot write {cfg.out}: {exc.strerror}") from exc


def _finish(parts, cfg: RunConfig) -> int:
    total = Report()
    for _, rep in parts:
        total.extend(rep)
    if total.warnings:
        print(f"warning: {len(total.warnings)} checks ran no trials and pass vacuously "
              f"(first: {total.warnings[0]})", file=sys.stderr)
    _emit(_render(parts, cfg), cfg)
    bad = total.first_failure()
    if bad is not None:
        print(f"FAILED: {bad.label}", file=sys.stderr)
        return 1
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    sections = SECTIONS if cfg.section == "all" else (cfg.section,)
    parts = []
    for s in sections:
        parts += _suite(s, cfg)
    return _finish(parts, cfg)


def cmd_example_sl2(cfg: RunConfig) -> int:
    from .sl2 import (Setup, character_report, multiplicity_report, order_relations,
                      rigid_twist_class, unit_groups)

    S = Setup()
    parts = [("order relations", order_relations(S)), ("unit groups", unit_groups(S)),
             ("character table", character_report(cfg.bound)),
             ("multiplicity table", multiplicity_report(cfg.kmax)),
             ("twist class", rigid_twist_class(S))]
    return _finish(parts, cfg)


def cmd_table(cfg: RunConfig) -> int:
    from .sl2 import format_table, multiplicity_table

    _emit(format_table(multiplicity_table(cfg.kmax)) + "\n", cfg)
    return 0


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="also write the report to this file")
    common.add_argument("--format", choices=("lines", "summary"))
    common.add_argument("--config", help="JSON object with default values for the flags")

    p = argparse.ArgumentParser(prog="rigidcochains",
                                description="Exact identity checks for cochain transfer maps.")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run identity suites")
    v.add_argument("section", choices=SECTIONS + ("all",))
    v.add_argument("--trials", type=int)
    v.add_argument("--preset")
    v.add_argument("--tower", help="JSON tower description")
    e = sub.add_parser("example-sl2", parents=[common], help="the definite SL2 example")
    e.add_argument("--bound", type=int)
    e.add_argument("--kmax", type=int)
    t = sub.add_parser("table", parents=[common], help="print the multiplicity table")
    t.add_argument("--kmax", type=int)
    t.add_argument("--bound", type=int)
    return p


COMMANDS = {"verify": cmd_verify, "example-sl2": cmd_example_sl2, "table": cmd_table}


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        return COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

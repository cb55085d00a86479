"""Experiment configuration files (INI syntax).

    [experiment]
    n = 1
    m = 2
    ops = IFF,IMPLIES,AND,OR
    j = 2
    x = 3
    o = 4
    derived_prefixes = 4
    mode = classical
    engine = exact
    seed = 0
    workers = 1

    [budget]
    max_lines = 14
    max_depth =
    max_states = 200000
    time_limit =

Every key is optional; an empty value means the default.
"""

from __future__ import annotations

import configparser
from dataclasses import replace

from .enumeration import GenerationParams
from .experiment import ExperimentConfig, parse_ops
from .provers.proof import DeductionMode, ProverBudget


class ConfigError(ValueError):
    pass


_EXPERIMENT_KEYS = ("n", "m", "ops", "j", "x", "o", "derived_prefixes", "mode", "engine", "seed", "workers")
_BUDGET_KEYS = ("max_lines", "max_depth", "max_states", "time_limit")


def parse_config(text: str) -> ExperimentConfig:
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    for section in cp.sections():
        if section not in ("experiment", "budget"):
            raise ConfigError(f"unknown section [{section}]")
    exp = cp["experiment"] if cp.has_section("experiment") else {}
    bud = cp["budget"] if cp.has_section("budget") else {}
    for key in exp:
        if key not in _EXPERIMENT_KEYS:
            raise ConfigError(f"unknown key {key!r} in [experiment]")
    for key in bud:
        if key not in _BUDGET_KEYS:
            raise ConfigError(f"unknown key {key!r} in [budget]")
    d = ExperimentConfig()
    db = d.budget

    def get(sec, key, conv, default):
        raw = sec.get(key, "") if sec else ""
        raw = raw.strip()
        if raw == "":
            return default
        try:
            return conv(raw)
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"bad value for {key}: {raw!r}") from exc

    try:
        params = GenerationParams(
            get(exp, "n", int, d.params.n),
            get(exp, "m", int, d.params.m),
            get(exp, "ops", parse_ops, d.params.ops),
        )
        budget = ProverBudget(
            get(bud, "max_lines", int, db.max_lines),
            get(bud, "max_depth", int, db.max_depth),
            get(bud, "max_states", int, db.max_states),
            get(bud, "time_limit", float, db.time_limit),
        )
        return ExperimentConfig(
            params=params,
            j=get(exp, "j", int, d.j),
            x=get(exp, "x", int, d.x),
            o=get(exp, "o", int, d.o),
            derived_prefixes=get(exp, "derived_prefixes", int, d.derived_prefixes),
            mode=get(exp, "mode", DeductionMode, d.mode),
            engine=get(exp, "engine", str, d.engine),
            budget=budget,
            seed=get(exp, "seed", int, d.seed),
            workers=get(exp, "workers", int, d.workers),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def dump_config(cfg: ExperimentConfig) -> str:
    def opt(v):
        return "" if v is None else str(v)

    b = cfg.budget
    lines = [
        "[experiment]",
        f"n = {cfg.params.n}",
        f"m = {cfg.params.m}",
        f"ops = {','.join(op.name for op in cfg.params.ops)}",
        f"j = {cfg.j}",
        f"x = {cfg.x}",
        f"o = {cfg.o}",
        f"derived_prefixes = {cfg.prefixes}",
        f"mode = {cfg.mode.value}",
        f"engine = {cfg.engine}",
        f"seed = {cfg.seed}",
        f"workers = {cfg.workers}",
        "",
        "[budget]",
        f"max_lines = {b.max_lines}",
        f"max_depth = {opt(b.max_depth)}",
        f"max_states = {b.max_states}",
        f"time_limit = {opt(b.time_limit)}",
    ]
    return "\n".join(lines) + "\n"


def with_seed(cfg: ExperimentConfig, seed: int | None) -> ExperimentConfig:
    return cfg if seed is None else replace(cfg, seed=seed)

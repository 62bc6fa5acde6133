"""Turn a RunConfig into reports."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from ..dsl import parse_presentation
from ..exotic import (
    DeformationParams, build_representation, evaluate_presentation, evaluate_preset, make_params,
    preset_info,
)
from ..exotic.evaluation import modes_for
from ..fock import StructureFunctionSpec
from .config import ConfigError, RunConfig

__all__ = ["run_point", "run_grid", "resolve_lambda", "load_dsl"]


def resolve_lambda(cfg: RunConfig) -> int:
    if cfg.lam is not None:
        return cfg.lam
    if cfg.alphas is not None:
        return len(cfg.alphas)
    if cfg.preset is not None:
        return preset_info(cfg.preset).default_lam or 2
    return 2


def _spec(cfg: RunConfig, lam: int) -> StructureFunctionSpec:
    if cfg.alphas is None:
        return StructureFunctionSpec.undeformed(lam)
    if len(cfg.alphas) != lam:
        raise ConfigError(f"{len(cfg.alphas)} alphas given for lambda={lam}")
    return StructureFunctionSpec(cfg.alphas)


def load_dsl(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_presentation(data)


def run_point(cfg: RunConfig, nu: float, presentation=None) -> tuple[DeformationParams, object]:
    lam = resolve_lambda(cfg)
    params = make_params(nu, cfg.sign, cfg.mu_omega, lam, cfg.f_choice)
    spec = _spec(cfg, lam)
    measure = cfg.measure_patterns()
    if cfg.preset is not None:
        defaults = preset_info(cfg.preset).measured
        report = evaluate_preset(
            cfg.preset, params, cfg.dim, spec, cfg.tolerance, cfg.mask_policy, defaults + measure,
            cfg.measure_only, cfg.phase_space, cfg.anchor,
        )
    else:
        p = presentation if presentation is not None else load_dsl(cfg.dsl)
        rep = build_representation(cfg.dim, params, spec, modes_for(p), cfg.phase_space)
        report = evaluate_presentation(p, rep, cfg.tolerance, cfg.mask_policy, measure, cfg.measure_only)
    return params, report


def run_grid(cfg: RunConfig):
    """[(nu, params, report)] in increasing nu."""
    presentation = load_dsl(cfg.dsl) if cfg.dsl is not None else None
    nus = sorted(cfg.grid())

    def one(nu):
        params, report = run_point(cfg, nu, presentation)
        return nu, params, report

    if cfg.workers > 1 and len(nus) > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            return list(pool.map(one, nus))
    return [one(nu) for nu in nus]

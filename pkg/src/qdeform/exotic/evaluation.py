"""Bind presets to the exotic representation, limit deviations and nu sweeps."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..dsl import (
    AlgebraPresentation, BindingError, BoundAlgebra, ResidualReport, bind_representation, check_relations,
)
from ..dsl.evaluate import DEFAULT_TOLERANCE, EvaluationError, _measured, residual_record, resolve_mask
from ..fock import OperatorMatrix, StructureFunctionSpec, make_fock_space
from .modes import MomentumUndefined, assemble_two_mode, build_mode
from .params import DeformationParams, make_params
from .presets import LIMIT_FAMILIES, PresetInfo, load_preset, preset_info

__all__ = [
    "Representation", "build_representation", "bind_run", "evaluate_presentation",
    "limit_deviation", "evaluate_preset", "nu_sweep", "ANCHOR_TOL", "SINGLE_MODE_NAMES",
]

# a limit family is judged only when nu is within this distance of its anchor
ANCHOR_TOL = 1e-12

SINGLE_MODE_NAMES = ("a", "bm", "bp", "N", "K", "xi", "xiinv", "x", "p")


@dataclass(frozen=True)
class Representation:
    """Generator matrices and run-bound parameter values for one (nu, D, lambda) point."""

    bindings: dict[str, OperatorMatrix]
    excluded: dict[str, np.ndarray]
    values: dict[str, complex]
    params: DeformationParams
    modes: int
    summary: dict = field(default_factory=dict)


def _run_values(params: DeformationParams, spec: StructureFunctionSpec) -> dict[str, complex]:
    values = params.dsl_values()
    values["kappa"] = complex(spec.alphas[0])
    values.update({f"alpha{k}": complex(a) for k, a in enumerate(spec.alphas)})
    return values


def build_representation(dim: int, params: DeformationParams, spec: StructureFunctionSpec | None = None,
                         modes: int = 1, phase_space: str = "inversion") -> Representation:
    """Single mode on D levels, or two modes on the D*D tensor-product space."""
    basis = make_fock_space(dim, params.lam)
    spec = StructureFunctionSpec.undeformed(params.lam) if spec is None else spec
    if spec.lam != params.lam:
        raise ValueError(f"{spec.lam} alphas given for lambda={params.lam}")
    mode = build_mode(basis, params, spec)
    x, p, singular = mode.phase_space(phase_space)
    summary = {
        "modes": modes, "dim_per_mode": dim, "dim": dim ** modes, "lambda": params.lam,
        "phase_space": phase_space, "alphas": list(spec.alphas),
        "singular_levels": sorted(singular),
    }
    if isinstance(p, MomentumUndefined):
        summary["momentum"] = p.reason
    if modes == 1:
        bindings, excluded = mode.bindings(phase_space)
    elif modes == 2:
        two = assemble_two_mode(mode, mode, phase_space)
        bindings, excluded = dict(two.ops), dict(two.excluded)
        summary["construction"] = two.construction
    else:
        raise ValueError(f"modes must be 1 or 2, got {modes}")
    return Representation(bindings, excluded, _run_values(params, spec), params, modes, summary)


def modes_for(p: AlgebraPresentation) -> int:
    return 1 if all(g in SINGLE_MODE_NAMES or (g[0] == "P" and g[1:].isdigit()) for g in p.generators) else 2


def bind_run(p: AlgebraPresentation, rep: Representation, run_params: bool = True) -> BoundAlgebra:
    """Bind generators by name; reserved parameter names take the run values when ``run_params``."""
    missing = [g for g in p.generators if g not in rep.bindings]
    if missing and "momentum" in rep.summary and any(g.startswith("p") for g in missing):
        raise BindingError(f"cannot bind {', '.join(missing)}: {rep.summary['momentum']}")
    values = rep.values if run_params else {}
    return bind_representation(p, rep.bindings, values, rep.excluded)


def _report_extras(report: ResidualReport, rep: Representation, **meta) -> ResidualReport:
    report.warnings = rep.params.warnings()
    report.metadata = {"binding": dict(rep.summary), **meta}
    return report


def evaluate_presentation(p: AlgebraPresentation, rep: Representation, tolerance: float = DEFAULT_TOLERANCE,
                          mask_policy="auto", measure=(), measure_only: bool = False) -> ResidualReport:
    bound = bind_run(p, rep)
    report = check_relations(bound, tolerance, mask_policy, tuple(measure), measure_only)
    return _report_extras(report, rep, kind="direct")


def limit_deviation(limit: AlgebraPresentation, general: AlgebraPresentation, rep: Representation,
                    tolerance: float = DEFAULT_TOLERANCE, mask_policy="auto", measure=(),
                    measure_only: bool = False) -> ResidualReport:
    """Per label: (lhs - rhs of ``general`` at the run nu) - (lhs - rhs of the fixed ``limit``).

    Both sides act on the same matrices, so at the anchor nu this compares
    the two right-hand sides (the brackets coincide once chi takes its limit value).
    """
    bg = bind_run(general, rep)
    bl = bind_run(limit, rep, run_params=False)
    cache_g: dict = {}
    cache_l: dict = {}
    bands_g: dict = {}
    bands_l: dict = {}
    records = []
    with np.errstate(all="ignore"):
        for rel in limit.relations:
            try:
                rg = general.relation(rel.label)
            except KeyError:
                raise EvaluationError(rel.label, f"no relation with this label in {general.name}") from None
            try:
                dev_g = bg.evaluate_matrix(rg.lhs, cache_g) - bg.evaluate_matrix(rg.rhs, cache_g)
                lhs_l = bl.evaluate_matrix(rel.lhs, cache_l)
                dev_l = lhs_l - bl.evaluate_matrix(rel.rhs, cache_l)
            except (ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
                raise EvaluationError(rel.label, str(exc)) from exc
            mask = max(resolve_mask(bg, rg, mask_policy, bands_g), resolve_mask(bl, rel, mask_policy, bands_l))
            exc_g, exc_l = bg.excluded_for(rg), bl.excluded_for(rel)
            exclude = exc_g if exc_l is None else (exc_l if exc_g is None else exc_g | exc_l)
            records.append(residual_record(
                rel.label, dev_g - dev_l, lhs_l, bl.basis, mask, tolerance, exclude=exclude,
                measured=measure_only or _measured(rel.label, measure),
            ))
    report = ResidualReport(limit.name, records, bl.basis.dim, bl.basis.lam, dict(bg.params))
    return _report_extras(report, rep, kind="limit", general=general.name)


def evaluate_preset(name: str, params: DeformationParams, dim: int, spec: StructureFunctionSpec | None = None,
                    tolerance: float = DEFAULT_TOLERANCE, mask_policy="auto", measure=None,
                    measure_only: bool = False, phase_space: str = "inversion",
                    general: str | None = None) -> ResidualReport:
    """Check one shipped preset at one parameter point.

    ``measure=None`` uses the preset's default measured labels. Limit presets
    are compared with their general preset (``general`` overrides which) and
    carry a verdict only at their anchor nu.
    """
    info: PresetInfo = preset_info(name)
    p = load_preset(name, params.lam)
    measure = info.measured if measure is None else tuple(measure)
    rep = build_representation(dim, params, spec, info.modes, phase_space)
    if info.kind == "limit":
        g_name = general or info.general
        at_anchor = abs(params.nu - info.anchor_nu) <= ANCHOR_TOL
        report = limit_deviation(p, load_preset(g_name), rep, tolerance, mask_policy, measure,
                                 measure_only or not at_anchor)
        report.metadata["anchor_nu"] = info.anchor_nu
        return report
    return evaluate_presentation(p, rep, tolerance, mask_policy, measure, measure_only)


def nu_sweep(grid, family: str, dim: int, lam: int = 4, spec: StructureFunctionSpec | None = None,
             sign: int = 1, mu_omega: float = 1.0, f_choice: str = "default", workers: int = 1,
             **kwargs) -> list[tuple[float, ResidualReport]]:
    """One report per nu, ordered by nu. ``family`` is a preset name or a limit-family alias."""
    name = LIMIT_FAMILIES.get(family, family)
    preset_info(name)
    nus = sorted(float(v) for v in grid)
    if not all(np.isfinite(nus)):
        raise ValueError("sweep grid must be finite")

    def one(nu):
        return nu, evaluate_preset(name, make_params(nu, sign, mu_omega, lam, f_choice), dim, spec, **kwargs)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(one, nus))
    return [one(nu) for nu in nus]

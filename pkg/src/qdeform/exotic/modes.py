"""Single- and two-mode representations of the exotic ladder and phase-space operators."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..fock import (
    FockBasis, OperatorMatrix, ProductBasis, StructureFunctionSpec, klein_operator,
    ladder_operators, lift, number_operator, projector,
)
from .params import DeformationParams

__all__ = [
    "ModeRep", "TwoModeRep", "MomentumUndefined", "build_mode", "position_momentum_action",
    "momentum_singular_levels", "inverted_phase_space", "assemble_two_mode", "PHASE_SPACE_CHOICES",
]

PHASE_SPACE_CHOICES = ("inversion", "literal")

# |xi + xi^{-1}| below this makes the inverted momentum undefined at that level
INVERSION_SINGULAR_TOL = 1e-10


@dataclass(frozen=True)
class MomentumUndefined:
    """Returned in place of p when every level has a vanishing denominator."""

    reason: str
    singular_levels: frozenset[int]

    def __bool__(self):
        return False


def momentum_singular_levels(basis: FockBasis) -> frozenset[int]:
    """Levels n with exp(2 pi i n/lam) - exp(-2 pi i n/lam) = 0, i.e. 2n = 0 (mod lam)."""
    return frozenset(n for n in range(basis.dim) if (2 * n) % basis.lam == 0)


def position_momentum_action(basis: FockBasis, params: DeformationParams, spec: StructureFunctionSpec):
    """x and p acting on |n> with the ladder elements sqrt(F(n)).

    x|n> = (b-|n> + b+|n>) / sqrt(2 mu omega)
    p|n> = i sqrt(2 mu omega) / (e^{2 pi i n/lam} - e^{-2 pi i n/lam}) (b+|n> - b-|n>)

    Columns of p at singular levels are left zero; they are reported, never used.
    Returns ``(x, p)`` where ``p`` is a :class:`MomentumUndefined` if no level survives.
    """
    lowering, raising = ladder_operators(basis, spec)
    mw = params.mu_omega
    x = (lowering + raising) * (1 / math.sqrt(2 * mw))
    singular = momentum_singular_levels(basis)
    if len(singular) == basis.dim:
        return x, MomentumUndefined(
            f"momentum denominator vanishes on every level for lambda={basis.lam}", singular)
    n = np.arange(basis.dim)
    denom = 2j * np.sin(2 * np.pi * n / basis.lam)
    scale = np.zeros(basis.dim, dtype=complex)
    ok = np.array([k not in singular for k in n])
    scale[ok] = 1j * math.sqrt(2 * mw) / denom[ok]
    p = (raising - lowering).data * scale[None, :]
    return x, OperatorMatrix(basis, p)


def inverted_phase_space(lowering: OperatorMatrix, raising: OperatorMatrix, xi: OperatorMatrix,
                         xi_inv: OperatorMatrix, mu_omega: float):
    """Solve b- = c(x + i xi p / mw), b+ = c(x - i xi^{-1} p / mw), c = sqrt(mw/2), for x and p.

    p = -i sqrt(2 mw) (xi + xi^{-1})^{-1} (b- - b+),  x = sqrt(2/mw) b- - (i/mw) xi p.
    Rows where xi + xi^{-1} is singular are zeroed and returned as singular levels.
    """
    s = np.diag(xi.data + xi_inv.data)
    singular = np.abs(s) < INVERSION_SINGULAR_TOL
    inv = np.zeros_like(s)
    inv[~singular] = 1 / s[~singular]
    basis = lowering.basis
    p = -1j * math.sqrt(2 * mu_omega) * inv[:, None] * (lowering.data - raising.data)
    x = math.sqrt(2 / mu_omega) * lowering.data - (1j / mu_omega) * np.diag(xi.data)[:, None] * p
    x[singular, :] = 0
    return OperatorMatrix(basis, x), OperatorMatrix(basis, p), frozenset(np.flatnonzero(singular).tolist())


@dataclass(frozen=True)
class ModeRep:
    basis: FockBasis
    params: DeformationParams
    spec: StructureFunctionSpec
    lowering: OperatorMatrix
    raising: OperatorMatrix
    number: OperatorMatrix
    klein: OperatorMatrix
    xi: OperatorMatrix
    xi_inv: OperatorMatrix
    x: OperatorMatrix                       # literal Fock action
    p: OperatorMatrix | MomentumUndefined   # literal Fock action
    singular_levels: frozenset[int]
    x_inv: OperatorMatrix                   # from inverting the ladder definitions
    p_inv: OperatorMatrix
    inversion_singular_levels: frozenset[int]

    def phase_space(self, choice: str = "inversion"):
        """(x, p, singular levels) for the chosen phase-space pair."""
        if choice == "inversion":
            return self.x_inv, self.p_inv, self.inversion_singular_levels
        if choice == "literal":
            return self.x, self.p, self.singular_levels
        raise ValueError(f"unknown phase-space choice {choice!r}; choose from {PHASE_SPACE_CHOICES}")

    def phase_space_disagreement(self) -> dict[str, float]:
        """Frobenius distance between the literal and inverted x, p on commonly regular columns."""
        bad = self.singular_levels | self.inversion_singular_levels
        cols = [n for n in range(self.basis.dim) if n not in bad]
        out = {"x": float(np.linalg.norm((self.x.data - self.x_inv.data)[:, cols]))}
        if isinstance(self.p, OperatorMatrix):
            out["p"] = float(np.linalg.norm((self.p.data - self.p_inv.data)[:, cols]))
        else:
            out["p"] = math.nan
        return out

    def bindings(self, phase_space: str = "inversion") -> tuple[dict[str, OperatorMatrix], dict[str, np.ndarray]]:
        """Generator matrices under their preset names plus per-generator excluded levels."""
        x, p, singular = self.phase_space(phase_space)
        ops = {
            "a": self.lowering, "bm": self.lowering, "bp": self.raising, "N": self.number,
            "K": self.klein, "xi": self.xi, "xiinv": self.xi_inv, "x": x,
        }
        for mu in range(self.basis.lam):
            ops[f"P{mu}"] = projector(self.basis, mu)
        excluded = {}
        if isinstance(p, OperatorMatrix):
            ops["p"] = p
        if singular:
            mask = np.zeros(self.basis.dim, dtype=bool)
            mask[list(singular)] = True
            excluded = {"x": mask, "p": mask}
        return ops, excluded


def _spectral_xi(klein: OperatorMatrix, nu: float, sign: float = 1.0) -> OperatorMatrix:
    """exp(sign i nu pi K) from the eigenvalues of the diagonal K."""
    return OperatorMatrix(klein.basis, np.diag(np.exp(sign * 1j * nu * np.pi * klein.diagonal())))


def build_mode(basis: FockBasis, params: DeformationParams, spec: StructureFunctionSpec | None = None) -> ModeRep:
    """One mode: ladder from the structure function, K = e^{2 pi i N/lam}, xi = e^{i nu pi K}."""
    if params.lam != basis.lam:
        raise ValueError(f"params lambda={params.lam} does not match basis lambda={basis.lam}")
    spec = StructureFunctionSpec.undeformed(basis.lam) if spec is None else spec
    lowering, raising = ladder_operators(basis, spec)
    klein = klein_operator(basis)
    xi = _spectral_xi(klein, params.nu)
    xi_inv = _spectral_xi(klein, params.nu, -1.0)
    x, p = position_momentum_action(basis, params, spec)
    x_inv, p_inv, inv_singular = inverted_phase_space(lowering, raising, xi, xi_inv, params.mu_omega)
    return ModeRep(
        basis=basis, params=params, spec=spec, lowering=lowering, raising=raising,
        number=number_operator(basis), klein=klein, xi=xi, xi_inv=xi_inv,
        x=x, p=p, singular_levels=momentum_singular_levels(basis),
        x_inv=x_inv, p_inv=p_inv, inversion_singular_levels=inv_singular,
    )


@dataclass(frozen=True)
class TwoModeRep:
    """Two modes on the tensor-product space; operator names carry a 1/2 suffix."""

    modes: tuple[ModeRep, ModeRep]
    basis: ProductBasis
    ops: dict[str, OperatorMatrix]
    excluded: dict[str, np.ndarray] = field(default_factory=dict)
    phase_space: str = "inversion"
    construction: str = "tensor_product"

    @property
    def mode_dims(self) -> tuple[int, int]:
        return (self.modes[0].basis.dim, self.modes[1].basis.dim)

    def __getitem__(self, name: str) -> OperatorMatrix:
        return self.ops[name]


def assemble_two_mode(m1: ModeRep, m2: ModeRep, phase_space: str = "inversion") -> TwoModeRep:
    """Extend each mode by the identity on the other factor: O1 = O x I, O2 = I x O."""
    if m1.basis.lam != m2.basis.lam:
        raise ValueError(f"lambda mismatch: {m1.basis.lam} vs {m2.basis.lam}")
    if m1.params != m2.params:
        raise ValueError("both modes must share deformation parameters")
    basis = ProductBasis((m1.basis, m2.basis))
    ops: dict[str, OperatorMatrix] = {}
    excluded: dict[str, np.ndarray] = {}
    for k, m in enumerate((m1, m2)):
        single, exc = m.bindings(phase_space)
        for name, op in single.items():
            if name.startswith("P"):
                continue
            ops[f"{name}{k + 1}"] = lift(op, basis, k)
        for name, mask in exc.items():
            excluded[f"{name}{k + 1}"] = mask[basis.levels[:, k]]
    return TwoModeRep((m1, m2), basis, ops, excluded, phase_space)

"""Truncated Fock spaces and the C_lambda-extended oscillator building blocks.

Every operator is a dense complex matrix on a finite set of Fock levels.
Relations that move population above the top retained level are only
correct on a leading block; :func:`masked_residual` measures a residual on
that block separately from the full matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "FockBasis",
    "ProductBasis",
    "OperatorMatrix",
    "StructureFunctionSpec",
    "MaskedResidual",
    "RepresentationError",
    "unit_phase",
    "make_fock_space",
    "number_operator",
    "projector",
    "projector_sum",
    "klein_operator",
    "structure_function_operator",
    "ladder_operators",
    "q_bracket",
    "masked_residual",
    "frobenius",
]

# Agreement required between the two projector constructions.
PROJECTOR_CROSSCHECK_TOL = 1e-13


class RepresentationError(ValueError):
    """A matrix representation cannot be built for the requested data."""


def unit_phase(turns: float) -> complex:
    """Return exp(2*pi*i*turns), exact at multiples of a quarter turn.

    Exactness matters at the extremes (chi = -1 at nu = 1, K = diag(1, i, -1, -i)),
    where ordinary floating evaluation leaves ~1e-16 imaginary debris.
    """
    frac = turns - math.floor(turns)
    quarter = frac * 4.0
    if quarter == int(quarter):
        return (1.0 + 0j, 1j, -1.0 + 0j, -1j)[int(quarter) % 4]
    return complex(math.cos(2 * math.pi * frac), math.sin(2 * math.pi * frac))


def _root_of_unity_powers(levels: np.ndarray, lam: int) -> np.ndarray:
    """exp(2*pi*i*n/lam) for integer n, reduced mod lam before evaluation."""
    table = np.array([unit_phase(Fraction(k, lam)) for k in range(lam)], dtype=complex)
    return table[np.mod(levels, lam)]


@dataclass(frozen=True)
class FockBasis:
    """Orthonormal levels |0>, ..., |dim-1> graded mod ``lam``."""

    dim: int
    lam: int

    def __post_init__(self):
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 2:
            raise ValueError(f"dim >= 2 violated: dim={self.dim!r}")
        if not isinstance(self.lam, (int, np.integer)) or self.lam < 1:
            raise ValueError(f"lambda >= 1 violated: lambda={self.lam!r}")
        if self.lam > self.dim:
            raise ValueError(f"lambda <= dim violated: lambda={self.lam}, dim={self.dim}")

    @property
    def modes(self) -> tuple["FockBasis", ...]:
        return (self,)

    @property
    def cutoffs(self) -> tuple[int, ...]:
        return (self.dim,)

    @cached_property
    def levels(self) -> np.ndarray:
        """Occupation of every basis index, shape (dim, 1)."""
        return np.arange(self.dim).reshape(-1, 1)

    def keep(self, mask_levels: int = 0) -> np.ndarray:
        """Boolean selector of indices whose occupations avoid the top ``mask_levels``."""
        return _keep(self, mask_levels)

    def identity(self) -> "OperatorMatrix":
        return OperatorMatrix(self, np.eye(self.dim, dtype=complex))


@dataclass(frozen=True)
class ProductBasis:
    """Tensor product of single-mode bases; index order is row-major (mode 1 slowest)."""

    modes: tuple[FockBasis, ...]

    def __post_init__(self):
        if len(self.modes) < 1:
            raise ValueError("a product basis needs at least one mode")
        lams = {m.lam for m in self.modes}
        if len(lams) != 1:
            raise ValueError(f"all modes must share lambda, got {sorted(lams)}")

    @property
    def lam(self) -> int:
        return self.modes[0].lam

    @property
    def dim(self) -> int:
        return math.prod(m.dim for m in self.modes)

    @property
    def cutoffs(self) -> tuple[int, ...]:
        return tuple(m.dim for m in self.modes)

    @cached_property
    def levels(self) -> np.ndarray:
        grids = np.meshgrid(*[np.arange(m.dim) for m in self.modes], indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)

    def keep(self, mask_levels: int = 0) -> np.ndarray:
        return _keep(self, mask_levels)

    def identity(self) -> "OperatorMatrix":
        return OperatorMatrix(self, np.eye(self.dim, dtype=complex))


Basis = FockBasis | ProductBasis


def _keep(basis, mask_levels: int) -> np.ndarray:
    if mask_levels < 0:
        raise ValueError(f"mask_levels must be nonnegative, got {mask_levels}")
    limits = np.array(basis.cutoffs) - mask_levels
    return np.all(basis.levels < limits, axis=1)


class OperatorMatrix:
    """A dense complex matrix tied to the basis it acts on. Immutable."""

    __slots__ = ("basis", "data")

    def __init__(self, basis: Basis, data):
        arr = np.array(data, dtype=complex)
        if arr.shape != (basis.dim, basis.dim):
            raise ValueError(f"matrix shape {arr.shape} does not match basis dimension {basis.dim}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("operator matrix has non-finite entries")
        arr.setflags(write=False)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("OperatorMatrix is immutable")

    def _check(self, other: "OperatorMatrix"):
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        if other.basis != self.basis:
            raise ValueError(f"basis mismatch: {self.basis} vs {other.basis}")
        return None

    def __matmul__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return OperatorMatrix(self.basis, self.data @ other.data)

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return OperatorMatrix(self.basis, self.data + other.data)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return OperatorMatrix(self.basis, self.data - other.data)

    def __neg__(self):
        return OperatorMatrix(self.basis, -self.data)

    def __mul__(self, scalar):
        if isinstance(scalar, OperatorMatrix):
            return NotImplemented
        return OperatorMatrix(self.basis, complex(scalar) * self.data)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return OperatorMatrix(self.basis, np.linalg.matrix_power(self.data, k))

    @property
    def dag(self) -> "OperatorMatrix":
        return OperatorMatrix(self.basis, self.data.conj().T)

    @property
    def dim(self) -> int:
        return self.basis.dim

    def diagonal(self) -> np.ndarray:
        return np.diag(self.data).copy()

    def is_diagonal(self) -> bool:
        return not np.any(self.data - np.diag(np.diag(self.data)))

    def norm(self) -> float:
        return frobenius(self.data)

    def __repr__(self):
        return f"OperatorMatrix({self.basis}, dim={self.dim})"


def frobenius(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


@dataclass(frozen=True)
class StructureFunctionSpec:
    """Deformation parameters alpha_0..alpha_{lam-1} of a GDOA.

    ``betas[mu]`` is the partial sum alpha_0 + ... + alpha_{mu-1}; the structure
    function is F(n) = n + betas[n mod lam].
    """

    alphas: tuple[float, ...]
    betas: tuple[float, ...] = field(init=False)

    def __post_init__(self):
        alphas = tuple(float(a) for a in self.alphas)
        if not alphas:
            raise ValueError("alphas must have lambda >= 1 entries")
        if not all(math.isfinite(a) for a in alphas):
            raise ValueError("alphas must be finite")
        total = math.fsum(alphas)
        scale = max(1.0, math.fsum(abs(a) for a in alphas))
        failed = []
        if abs(total) > 1e-12 * scale:
            failed.append(f"sum of alphas = 0 violated (sum={total!r})")
        betas = [0.0]
        for a in alphas[:-1]:
            betas.append(betas[-1] + a)
        for mu in range(1, len(alphas)):
            if not betas[mu] > -1.0:
                failed.append(f"partial sum beta_{mu} > -1 violated (beta_{mu}={betas[mu]!r})")
        if failed:
            raise ValueError("invalid structure function: " + "; ".join(failed))
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "betas", tuple(betas))

    @classmethod
    def undeformed(cls, lam: int) -> "StructureFunctionSpec":
        return cls((0.0,) * lam)

    @classmethod
    def calogero_vasiliev(cls, kappa: float) -> "StructureFunctionSpec":
        return cls((kappa, -kappa))

    @property
    def lam(self) -> int:
        return len(self.alphas)

    def values(self, n: np.ndarray | Sequence[int]) -> np.ndarray:
        n = np.asarray(n)
        return n + np.asarray(self.betas)[np.mod(n, self.lam)]


@dataclass(frozen=True)
class MaskedResidual:
    raw_norm: float
    masked_norm: float
    mask_levels: int
    excluded: int = 0
    norm_kind: str = "frobenius"


def make_fock_space(dim: int, lam: int) -> FockBasis:
    return FockBasis(dim, lam)


def number_operator(basis: FockBasis) -> OperatorMatrix:
    return OperatorMatrix(basis, np.diag(np.arange(basis.dim, dtype=complex)))


def projector_sum(basis: FockBasis, mu: int) -> np.ndarray:
    """Diagonal of P_mu from the exponential sum (1/lam) sum_k exp(2 pi i k (n - mu) / lam)."""
    lam = basis.lam
    n = np.arange(basis.dim)
    k = np.arange(lam)
    phases = _root_of_unity_powers(np.outer(k, n - mu), lam)
    return phases.sum(axis=0) / lam


def projector(basis: FockBasis, mu: int) -> OperatorMatrix:
    """Projector onto levels n = mu (mod lam).

    Built twice, from the exponential sum and from the congruence indicator;
    the two must agree to ``PROJECTOR_CROSSCHECK_TOL``.
    """
    if not 0 <= mu < basis.lam:
        raise ValueError(f"projector index must satisfy 0 <= mu < {basis.lam}, got {mu}")
    n = np.arange(basis.dim)
    indicator = (np.mod(n, basis.lam) == mu).astype(complex)
    summed = projector_sum(basis, mu)
    gap = np.max(np.abs(summed - indicator))
    if gap > PROJECTOR_CROSSCHECK_TOL:
        raise RepresentationError(f"projector constructions disagree by {gap:.3e} (mu={mu})")
    return OperatorMatrix(basis, np.diag(indicator))


def klein_operator(basis: FockBasis) -> OperatorMatrix:
    """K = exp(2 pi i N / lam); (-1)^N for lam = 2."""
    return OperatorMatrix(basis, np.diag(_root_of_unity_powers(np.arange(basis.dim), basis.lam)))


def _check_spec(basis: FockBasis, spec: StructureFunctionSpec):
    if spec.lam != basis.lam:
        raise ValueError(f"structure function has {spec.lam} alphas but lambda={basis.lam}")


def structure_function_operator(basis: FockBasis, spec: StructureFunctionSpec) -> OperatorMatrix:
    """F(N) = N + sum_mu beta_mu P_mu as a diagonal matrix."""
    _check_spec(basis, spec)
    return OperatorMatrix(basis, np.diag(spec.values(np.arange(basis.dim)).astype(complex)))


def ladder_operators(basis: FockBasis, spec: StructureFunctionSpec) -> tuple[OperatorMatrix, OperatorMatrix]:
    """(lowering, raising) with a^dag|n> = sqrt(F(n+1))|n+1>, a|n> = sqrt(F(n))|n-1>."""
    _check_spec(basis, spec)
    f = spec.values(np.arange(1, basis.dim)).astype(float)
    bad = np.flatnonzero(f < 0)
    if bad.size:
        n = int(bad[0]) + 1
        raise RepresentationError(f"structure function negative at level {n}: F({n})={f[bad[0]]!r}")
    raising = np.diag(np.sqrt(f), -1).astype(complex)
    return OperatorMatrix(basis, raising.T.copy()), OperatorMatrix(basis, raising)


def q_bracket(a: OperatorMatrix, b: OperatorMatrix, q: complex) -> OperatorMatrix:
    """[a, b]_q = ab - q ba."""
    if a.basis != b.basis:
        raise ValueError(f"basis mismatch: {a.basis} vs {b.basis}")
    return OperatorMatrix(a.basis, a.data @ b.data - complex(q) * (b.data @ a.data))


def masked_residual(
    a: OperatorMatrix | np.ndarray,
    mask_levels: int,
    basis: Basis | None = None,
    exclude: np.ndarray | None = None,
) -> MaskedResidual:
    """Frobenius norm of ``a`` and of its block avoiding the top ``mask_levels`` levels.

    ``exclude`` optionally drops further basis indices (singular levels) from the block.
    """
    if isinstance(a, OperatorMatrix):
        basis = a.basis
        data = a.data
    else:
        if basis is None:
            raise ValueError("a raw array needs an explicit basis")
        data = np.asarray(a)
    if not 0 <= mask_levels < min(basis.cutoffs):
        raise ValueError(f"mask_levels must satisfy 0 <= mask < {min(basis.cutoffs)}, got {mask_levels}")
    keep = basis.keep(mask_levels)
    n_excluded = 0
    if exclude is not None:
        exclude = np.asarray(exclude, dtype=bool)
        n_excluded = int(np.count_nonzero(keep & exclude))
        keep = keep & ~exclude
    idx = np.flatnonzero(keep)
    return MaskedResidual(
        raw_norm=frobenius(data),
        masked_norm=frobenius(data[np.ix_(idx, idx)]),
        mask_levels=mask_levels,
        excluded=n_excluded,
    )


def lift(op: OperatorMatrix, target: ProductBasis, mode: int) -> OperatorMatrix:
    """Embed a single-mode operator into ``target`` acting on factor ``mode``."""
    mats: Iterable[np.ndarray] = (
        op.data if k == mode else np.eye(m.dim, dtype=complex) for k, m in enumerate(target.modes)
    )
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return OperatorMatrix(target, out)

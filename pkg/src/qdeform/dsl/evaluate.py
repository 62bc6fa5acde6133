"""Numerical evaluation of presentations against matrix representations."""
from __future__ import annotations

import cmath
import fnmatch
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
import scipy.linalg
import scipy.sparse

from ..fock import MaskedResidual, OperatorMatrix, masked_residual, frobenius
from .nodes import (
    AlgebraPresentation, BinOp, Call, Const, Identity, Node, Num, Power, Product,
    Relation, Sum, Sym, symbols,
)

__all__ = [
    "BindingError", "EvaluationError", "BoundAlgebra", "RelationRecord", "ResidualReport",
    "bind_representation", "check_relations", "eval_scalar", "ladder_depth",
    "MEASURED", "DEFAULT_TOLERANCE",
]

DEFAULT_TOLERANCE = 1e-10
MEASURED = "measured — no representation claim"


class BindingError(ValueError):
    pass


class EvaluationError(ArithmeticError):
    def __init__(self, label: str, message: str):
        self.label = label
        super().__init__(f"relation {label!r}: {message}")


_SCALAR_FUNCS = {"exp": cmath.exp, "cos": cmath.cos, "sin": cmath.sin, "sqrt": cmath.sqrt}
_CONSTS = {"pi": complex(math.pi), "i": 1j}


def eval_scalar(node: Node, params: Mapping[str, complex]) -> complex:
    """Evaluate a scalar-typed tree."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Const):
        return _CONSTS[node.name]
    if isinstance(node, Sym):
        if node.kind != "param":
            raise TypeError(f"generator {node.name!r} in scalar context")
        return complex(params[node.name])
    if isinstance(node, Sum):
        return sum((s * eval_scalar(t, params) for s, t in node.terms), 0j)
    if isinstance(node, Product):
        out = 1 + 0j
        for f in node.factors:
            out *= eval_scalar(f, params)
        return out
    if isinstance(node, BinOp):
        a, b = eval_scalar(node.left, params), eval_scalar(node.right, params)
        return a * b if node.op == "*" else a / b
    if isinstance(node, Power):
        return eval_scalar(node.base, params) ** node.exponent
    if isinstance(node, Call):
        if node.func == "bracket":
            x, y, q = (eval_scalar(a, params) for a in node.args)
            return x * y - q * y * x
        if node.func == "antibracket":
            x, y = (eval_scalar(a, params) for a in node.args)
            return 2 * x * y
        if node.func == "dagger":
            return eval_scalar(node.args[0], params).conjugate()
        return complex(_SCALAR_FUNCS[node.func](eval_scalar(node.args[0], params)))
    raise TypeError(f"{type(node).__name__} is not scalar")


def _is_diag(a: np.ndarray) -> bool:
    return np.count_nonzero(a) == np.count_nonzero(np.diagonal(a))


# dense operands at least this large with at most this fill go through a sparse product
SPARSE_MIN_DIM = 64
SPARSE_MAX_FILL = 0.1


def _sparse(a: np.ndarray) -> bool:
    return a.shape[0] >= SPARSE_MIN_DIM and np.count_nonzero(a) <= SPARSE_MAX_FILL * a.size


def _matfunc(name: str, a: np.ndarray) -> np.ndarray:
    if _is_diag(a):
        return np.diag(getattr(np, name)(np.diag(a)))
    if name == "exp":
        return scipy.linalg.expm(a)
    if name == "cos":
        return scipy.linalg.cosm(a)
    return scipy.linalg.sinm(a)


def _mul(a, b):
    """Product of scalars/matrices; diagonal factors scale rows or columns."""
    if not isinstance(a, np.ndarray) or not isinstance(b, np.ndarray):
        return a * b
    if _is_diag(a):
        return np.diag(a)[:, None] * b
    if _is_diag(b):
        return a * np.diag(b)[None, :]
    if _sparse(a):
        return np.asarray(scipy.sparse.csr_array(a) @ b)
    if _sparse(b):
        return np.asarray(a @ scipy.sparse.csc_array(b))
    return a @ b


@dataclass
class BoundAlgebra:
    """A presentation with every generator bound to a matrix on one basis."""

    presentation: AlgebraPresentation
    basis: object
    matrices: dict[str, np.ndarray]
    params: dict[str, complex]
    # per-generator boolean masks of basis indices where the binding is not defined
    excluded: dict[str, np.ndarray] = field(default_factory=dict)

    def evaluate(self, node: Node, cache: dict | None = None):
        """Value of ``node``: a complex scalar or a dim x dim array."""
        cache = {} if cache is None else cache
        return self._eval(node, cache)

    def evaluate_matrix(self, node: Node, cache: dict | None = None) -> np.ndarray:
        return self._as_matrix(self.evaluate(node, cache))

    def _as_matrix(self, v) -> np.ndarray:
        if isinstance(v, np.ndarray):
            return v
        return complex(v) * np.eye(self.basis.dim, dtype=complex)

    def _eval(self, node: Node, cache: dict):
        hit = cache.get(node)
        if hit is not None:
            return hit
        out = self._compute(node, cache)
        cache[node] = out
        return out

    def _compute(self, node: Node, cache: dict):
        if isinstance(node, (Num, Const)):
            return eval_scalar(node, self.params)
        if isinstance(node, Identity):
            return np.eye(self.basis.dim, dtype=complex)
        if isinstance(node, Sym):
            return self.matrices[node.name] if node.kind == "gen" else complex(self.params[node.name])
        if isinstance(node, Sum):
            vals = [(s, self._eval(t, cache)) for s, t in node.terms]
            if any(isinstance(v, np.ndarray) for _, v in vals):
                out = np.zeros((self.basis.dim, self.basis.dim), dtype=complex)
                for s, v in vals:
                    if isinstance(v, np.ndarray):
                        out = out + v if s > 0 else out - v
                    else:
                        out = out + np.diag(np.full(self.basis.dim, s * v))
                return out
            return sum((s * v for s, v in vals), 0j)
        if isinstance(node, Product):
            out = self._eval(node.factors[0], cache)
            for f in node.factors[1:]:
                out = _mul(out, self._eval(f, cache))
            return out
        if isinstance(node, BinOp):
            a, b = self._eval(node.left, cache), self._eval(node.right, cache)
            return a * b if node.op == "*" else a / b
        if isinstance(node, Power):
            base = self._eval(node.base, cache)
            if isinstance(base, np.ndarray):
                if _is_diag(base):
                    return np.diag(np.diag(base) ** node.exponent)
                return np.linalg.matrix_power(base, node.exponent)
            return base ** node.exponent
        if isinstance(node, Call):
            args = [self._eval(a, cache) for a in node.args]
            if node.func == "bracket":
                x, y, q = args
                return _mul(x, y) - q * _mul(y, x)
            if node.func == "antibracket":
                x, y = args
                return _mul(x, y) + _mul(y, x)
            if node.func == "dagger":
                x = args[0]
                return x.conj().T if isinstance(x, np.ndarray) else x.conjugate()
            x = args[0]
            if isinstance(x, np.ndarray):
                return _matfunc(node.func, x)
            return complex(_SCALAR_FUNCS[node.func](x))
        raise TypeError(f"not an expression node: {node!r}")

    def excluded_for(self, relation: Relation) -> np.ndarray | None:
        names = (symbols(relation.lhs) | symbols(relation.rhs)) & set(self.excluded)
        if not names:
            return None
        out = np.zeros(self.basis.dim, dtype=bool)
        for n in names:
            out |= self.excluded[n]
        return out


def bind_representation(
    p: AlgebraPresentation,
    bindings: Mapping[str, OperatorMatrix],
    params: Mapping[str, complex] | None = None,
    excluded: Mapping[str, np.ndarray] | None = None,
) -> BoundAlgebra:
    """Attach matrices to generators and values to parameters.

    Parameters without a supplied value take their declared defaults; extra
    entries in ``bindings``/``params`` are ignored.
    """
    missing = [g for g in p.generators if g not in bindings]
    if missing:
        raise BindingError(f"missing binding for generator(s): {', '.join(missing)}")
    bases = {bindings[g].basis for g in p.generators}
    if len(bases) > 1:
        raise BindingError(f"generators bound on different bases: {sorted(map(str, bases))}")
    if not bases:
        raise BindingError("a presentation without generators needs a basis; bind at least one generator")
    basis = bases.pop()
    values = dict(p.parameters)
    for name, v in (params or {}).items():
        if name in values:
            values[name] = complex(v)
    matrices = {g: np.asarray(bindings[g].data) for g in p.generators}
    exc = {g: np.asarray(m, dtype=bool) for g, m in (excluded or {}).items() if g in matrices}
    return BoundAlgebra(p, basis, matrices, values, exc)


# --- truncation analysis ---------------------------------------------------

@dataclass(frozen=True)
class _Band:
    up: int      # largest rise in any mode's occupation (row level - column level)
    down: int    # largest fall
    mask: int    # top levels on which the computed value may differ from the untruncated one


_SCALAR_BAND = _Band(0, 0, 0)


def _binding_band(basis, a: np.ndarray) -> _Band:
    rows, cols = np.nonzero(a)
    if rows.size == 0:
        # a vanishing binding says nothing about the operator it stands for
        return _Band(1, 1, 0)
    diff = basis.levels[rows] - basis.levels[cols]
    return _Band(int(max(diff.max(), 0)), int(max((-diff).max(), 0)), 0)


def _band_product(a: _Band, b: _Band) -> _Band:
    # entry (r, c) of AB sums over intermediate levels k <= c + b.up and k <= r + a.down
    return _Band(a.up + b.up, a.down + b.down, max(a.mask, b.mask) + min(b.up, a.down))


def _band_sum(bands) -> _Band:
    bands = list(bands)
    return _Band(max(b.up for b in bands), max(b.down for b in bands), max(b.mask for b in bands))


def ladder_depth(bound: BoundAlgebra, node: Node, _memo: dict | None = None) -> int:
    """Number of top levels on which truncation can corrupt the value of ``node``.

    Each generator's level shift is read from its binding; a product needs as many
    extra levels as its right factor can raise and its left factor can lower.
    """
    memo = {} if _memo is None else _memo
    cap = min(bound.basis.cutoffs) - 1
    return min(_band(bound, node, memo, cap).mask, cap)


def _band(bound: BoundAlgebra, node: Node, memo: dict, cap: int) -> _Band:
    hit = memo.get(node)
    if hit is not None:
        return hit
    if isinstance(node, (Num, Const, Identity)):
        out = _SCALAR_BAND
    elif isinstance(node, Sym):
        out = _binding_band(bound.basis, bound.matrices[node.name]) if node.kind == "gen" else _SCALAR_BAND
    elif isinstance(node, Sum):
        out = _band_sum(_band(bound, t, memo, cap) for _, t in node.terms)
    elif isinstance(node, Product):
        out = _band(bound, node.factors[0], memo, cap)
        for f in node.factors[1:]:
            out = _band_product(out, _band(bound, f, memo, cap))
    elif isinstance(node, BinOp):
        out = _band_product(_band(bound, node.left, memo, cap), _band(bound, node.right, memo, cap))
    elif isinstance(node, Power):
        base = _band(bound, node.base, memo, cap)
        out = _SCALAR_BAND
        for _ in range(node.exponent):
            out = _band_product(out, base)
            if out.mask >= cap:
                break
    elif isinstance(node, Call):
        args = [_band(bound, a, memo, cap) for a in node.args]
        if node.func == "bracket":
            out = _band_sum([_band_product(args[0], args[1]), _band_product(args[1], args[0])])
        elif node.func == "antibracket":
            out = _band_sum([_band_product(args[0], args[1]), _band_product(args[1], args[0])])
        elif node.func == "dagger":
            a = args[0]
            out = _Band(a.down, a.up, a.mask)
        else:
            a = args[0]
            # a function of a non-diagonal matrix mixes every level
            out = a if (a.up == 0 and a.down == 0) else _Band(cap, cap, cap)
    else:
        raise TypeError(f"not an expression node: {node!r}")
    out = _Band(min(out.up, cap), min(out.down, cap), min(out.mask, cap))
    memo[node] = out
    return out


# --- reports ------------------------------------------------------------------

@dataclass(frozen=True)
class RelationRecord:
    label: str
    raw_norm: float
    masked_norm: float
    mask_levels: int
    tolerance: float
    scale: float            # max(1, masked Frobenius norm of the left-hand side)
    passed: bool | None     # None when the relation is only measured
    excluded_levels: int = 0

    @property
    def status(self) -> str:
        if self.passed is None:
            return MEASURED
        return "pass" if self.passed else "fail"

    @property
    def relative_norm(self) -> float:
        return self.masked_norm / self.scale


@dataclass
class ResidualReport:
    presentation: str
    records: list[RelationRecord]
    dim: int
    lam: int
    params: dict[str, complex] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def overall_pass(self) -> bool:
        return all(r.passed is not False for r in self.records)

    def record(self, label: str) -> RelationRecord:
        for r in self.records:
            if r.label == label:
                return r
        raise KeyError(label)

    def __iter__(self):
        return iter(self.records)


def _measured(label: str, patterns) -> bool:
    return any(fnmatch.fnmatchcase(label, pat) for pat in patterns)


def residual_record(
    label: str,
    residual: np.ndarray,
    lhs: np.ndarray,
    basis,
    mask: int,
    tolerance: float,
    exclude: np.ndarray | None = None,
    measured: bool = False,
) -> RelationRecord:
    if not np.all(np.isfinite(residual)):
        raise EvaluationError(label, "non-finite values in residual")
    m: MaskedResidual = masked_residual(residual, mask, basis=basis, exclude=exclude)
    keep = basis.keep(mask)
    if exclude is not None:
        keep &= ~exclude
    idx = np.flatnonzero(keep)
    scale = max(1.0, frobenius(lhs[np.ix_(idx, idx)]))
    passed = None if measured else bool(m.masked_norm <= tolerance * scale)
    return RelationRecord(label, m.raw_norm, m.masked_norm, mask, tolerance, scale, passed, m.excluded)


def resolve_mask(bound: BoundAlgebra, relation: Relation, mask_policy, memo: dict | None = None) -> int:
    if mask_policy == "auto":
        memo = {} if memo is None else memo
        return max(ladder_depth(bound, relation.lhs, memo), ladder_depth(bound, relation.rhs, memo))
    k = int(mask_policy)
    if k < 0:
        raise ValueError(f"fixed mask must be nonnegative, got {k}")
    return k


def check_relations(
    b: BoundAlgebra,
    tolerance: float = DEFAULT_TOLERANCE,
    mask_policy: str | int = "auto",
    measure: tuple[str, ...] = (),
    measure_only: bool = False,
) -> ResidualReport:
    """Evaluate every relation as lhs - rhs and measure it on the masked block.

    A relation passes when its masked residual is at most ``tolerance`` times
    max(1, masked norm of its left-hand side). Labels matching a ``measure``
    glob (or all labels when ``measure_only``) are reported without a verdict.
    """
    if not tolerance > 0:
        raise ValueError(f"tolerance must be positive, got {tolerance}")
    records = []
    cache: dict = {}
    bands: dict = {}
    with np.errstate(all="ignore"):
        for rel in b.presentation.relations:
            try:
                lhs = b.evaluate_matrix(rel.lhs, cache)
                rhs = b.evaluate_matrix(rel.rhs, cache)
            except (ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
                raise EvaluationError(rel.label, str(exc)) from exc
            records.append(residual_record(
                rel.label, lhs - rhs, lhs, b.basis, resolve_mask(b, rel, mask_policy, bands), tolerance,
                exclude=b.excluded_for(rel),
                measured=measure_only or _measured(rel.label, measure),
            ))
    return ResidualReport(
        presentation=b.presentation.name,
        records=records,
        dim=b.basis.dim,
        lam=b.basis.lam,
        params=dict(b.params),
    )

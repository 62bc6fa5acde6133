"""Truncated Taylor-block form of the first deformed ladder relation.

With xi = exp(i nu pi K) and K^lam = I, the exponentials are cut after order
lam - 1. The blocks R, A and Q below are compared with the closed form that
uses the exact spectral xi, and the gap is checked against remainder bounds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..dsl import ResidualReport
from ..dsl.evaluate import RelationRecord
from ..fock import FockBasis, OperatorMatrix, StructureFunctionSpec, masked_residual
from .modes import build_mode
from .params import DeformationParams

__all__ = [
    "TaylorBlocks", "taylor_blocks", "remainder_bound", "xi_polynomial", "closed_form_rhs",
    "check_taylor_consistency", "truncation_indices", "KLEIN_POWER_TOL",
]

KLEIN_POWER_TOL = 1e-12
# C and D are quadratic in the ladder operators, so two top levels are unreliable
CD_MASK = 2


def truncation_indices(lam: int) -> tuple[int, int]:
    """(n, m): the largest odd and the largest even integer <= lam - 1 (n = -1 when none)."""
    top = lam - 1
    n = top if top % 2 else top - 1
    m = top if top % 2 == 0 else top - 1
    return n, m


def remainder_bound(nu: float, lam: int) -> float:
    """(nu pi)^lam / lam! * e^{nu pi}: bound on each eigenvalue's exponential tail."""
    x = abs(nu) * math.pi
    return x ** lam / math.factorial(lam) * math.exp(x)


def _coef(nu: float, p: int, sign: int = 1) -> complex:
    return (sign * 1j * nu * math.pi) ** p / math.factorial(p)


def _powers(k: np.ndarray, top: int) -> list[np.ndarray]:
    out = [np.eye(k.shape[0], dtype=complex)]
    for _ in range(top):
        out.append(out[-1] @ k)
    return out


def xi_polynomial(klein: OperatorMatrix, nu: float, lam: int, sign: int = 1) -> OperatorMatrix:
    """sum_{p < lam} (sign i nu pi K)^p / p!."""
    pw = _powers(klein.data, lam - 1)
    return OperatorMatrix(klein.basis, sum(_coef(nu, p, sign) * pw[p] for p in range(lam)))


@dataclass(frozen=True)
class TaylorBlocks:
    R: OperatorMatrix
    Q: OperatorMatrix
    A: OperatorMatrix
    kappa_odd: tuple[complex, ...]
    kappa_even: tuple[complex, ...]
    order: int
    n_odd: int
    m_even: int
    remainder: float

    def rhs(self, delta: int, eps: int) -> OperatorMatrix:
        """(I + R) delta + A eps + Q."""
        eye = np.eye(self.R.basis.dim, dtype=complex)
        return OperatorMatrix(self.R.basis, (eye + self.R.data) * delta + self.A.data * eps + self.Q.data)


def _check_klein(k: OperatorMatrix, lam: int, name: str):
    pw = np.linalg.matrix_power(k.data, lam)
    err = np.linalg.norm(pw - np.eye(k.basis.dim))
    if err > KLEIN_POWER_TOL * max(1.0, math.sqrt(k.basis.dim)):
        raise ValueError(f"{name}^lambda differs from I by {err:.3e}")


def taylor_blocks(params: DeformationParams, K_i: OperatorMatrix, K_j: OperatorMatrix,
                  C_ji: OperatorMatrix, D_ji: OperatorMatrix) -> TaylorBlocks:
    lam, nu = params.lam, params.nu
    _check_klein(K_i, lam, "K_i")
    _check_klein(K_j, lam, "K_j")
    n, m = truncation_indices(lam)
    ki, kj = _powers(K_i.data, lam - 1), _powers(K_j.data, lam - 1)
    mkj = _powers(-K_j.data, lam - 1)
    kappa_odd = tuple(_coef(nu, 2 * ell - 1) for ell in range(1, (n + 1) // 2 + 1))
    kappa_even = tuple(_coef(nu, 2 * k) for k in range(1, m // 2 + 1))
    R = sum(c * (ki[2 * ell - 1] - kj[2 * ell - 1]) / 2 for ell, c in enumerate(kappa_odd, 1))
    R = R + sum(c * (ki[2 * k] + kj[2 * k]) / 2 for k, c in enumerate(kappa_even, 1))
    diff = _powers(K_i.data - K_j.data, lam - 1)
    eye = np.eye(K_i.basis.dim, dtype=complex)
    A = 0.5j * params.theta * params.mu_omega * (eye + sum(_coef(nu, a) * diff[a] for a in range(lam)))
    Q = -0.5j * sum(_coef(nu, p) * (mkj[p] @ C_ji.data - ki[p] @ D_ji.data) for p in range(lam))
    basis = K_i.basis
    R = R if isinstance(R, np.ndarray) else np.zeros_like(eye)
    return TaylorBlocks(
        R=OperatorMatrix(basis, R), Q=OperatorMatrix(basis, Q), A=OperatorMatrix(basis, A),
        kappa_odd=kappa_odd, kappa_even=kappa_even, order=lam - 1, n_odd=n, m_even=m,
        remainder=remainder_bound(nu, lam),
    )


def closed_form_rhs(params: DeformationParams, xi_i, xi_inv_j, C_ji, D_ji, delta: int, eps: int) -> np.ndarray:
    """Exact-xi right-hand side of [b-_i, b+_j]_chi in the undeformed-[p, x] construction."""
    eye = np.eye(C_ji.shape[0], dtype=complex)
    out = 0.5 * (xi_i + xi_inv_j) * delta
    out = out + 0.5j * params.mu_omega * params.theta * (eye + xi_i @ xi_inv_j) * eps
    return out - 0.5j * (xi_inv_j @ C_ji - xi_i @ D_ji)


def _closed_second(params, xi, xi_inv, C, D):
    """Exact-xi [b+, b+]_chi and [b-, b-]_chi right-hand sides for one mode."""
    bpbp = 0.5 * (xi_inv - xi_inv) - 0.5j * (xi_inv @ C + xi_inv @ D)
    bmbm = 0.5 * (xi - xi) + 0.5j * (xi @ C + xi @ D)
    return bpbp, bmbm


def _printed_second(params, k, C, D):
    """The two remaining Taylor forms, term by term as printed (delta part vanishes for i = j)."""
    lam, nu = params.lam, params.nu
    kp = _powers(k, lam - 1)
    bpbp = -0.5j * sum(_coef(nu, p, -1) * (kp[p] @ C - kp[p] @ D) for p in range(lam))
    bmbm = 0.5j * sum(_coef(nu, p) * (kp[p] @ C - kp[p] @ D) for p in range(lam))
    return bpbp, bmbm


def _record(label, residual, basis, mask, bound, measured=False) -> RelationRecord:
    m = masked_residual(residual, mask, basis=basis)
    passed = None if measured else bool(m.masked_norm <= bound)
    return RelationRecord(label, m.raw_norm, m.masked_norm, mask, bound, 1.0, passed)


def check_taylor_consistency(basis: FockBasis, params: DeformationParams,
                             spec: StructureFunctionSpec | None = None,
                             phase_space: str = "inversion") -> ResidualReport:
    """Single-mode (i = j) comparison of the truncated block form with exact-xi expressions.

    Records, each with its own absolute bound as tolerance:
      xi_poly            |xi - truncated xi|, against sqrt(D) * remainder
      block_form         closed form vs (I + R) + Q, against sqrt(D) * remainder
      block_form_propagated  same residual, against remainder * (sqrt(D) + (|C| + |D|)/2)
      direct_lhs         [b-, b+]_chi vs the block form (measured)
      bpbp_printed, bmbm_printed  the two further printed forms vs their exact-xi versions (measured)
    """
    mode = build_mode(basis, params, spec)
    x, p, _ = mode.phase_space(phase_space)
    chi = params.chi
    C = (1 - chi) * (p.data @ x.data)
    D = (1 - chi) * (x.data @ p.data)
    Cm, Dm = OperatorMatrix(basis, C), OperatorMatrix(basis, D)
    blocks = taylor_blocks(params, mode.klein, mode.klein, Cm, Dm)
    rem = blocks.remainder
    root_d = math.sqrt(basis.dim)
    stated_bound = root_d * rem
    propagated = rem * (root_d + 0.5 * (np.linalg.norm(C) + np.linalg.norm(D)))
    xi, xi_inv = mode.xi.data, mode.xi_inv.data
    block = blocks.rhs(1, 0).data
    closed = closed_form_rhs(params, xi, xi_inv, C, D, 1, 0)
    bm, bp = mode.lowering.data, mode.raising.data
    direct = bm @ bp - chi * (bp @ bm)
    poly = xi_polynomial(mode.klein, params.nu, params.lam).data
    cd_mask = CD_MASK if basis.dim > CD_MASK else 0
    records = [
        _record("xi_poly", xi - poly, basis, 0, stated_bound),
        _record("block_form", closed - block, basis, cd_mask, stated_bound),
        _record("block_form_propagated", closed - block, basis, cd_mask, propagated),
        _record("direct_lhs", direct - block, basis, max(cd_mask, 1), math.inf, measured=True),
    ]
    exact2 = _closed_second(params, xi, xi_inv, C, D)
    printed2 = _printed_second(params, mode.klein.data, C, D)
    for label, e, t in zip(("bpbp_printed", "bmbm_printed"), exact2, printed2):
        records.append(_record(label, e - t, basis, cd_mask, math.inf, measured=True))
    report = ResidualReport("taylor_blocks", records, basis.dim, basis.lam,
                            {"nu": complex(params.nu), "chi": chi, "theta": params.theta})
    report.warnings = params.warnings()
    report.metadata = {
        "remainder": rem, "stated_bound": stated_bound, "propagated_bound": propagated,
        "order": blocks.order, "n_odd": blocks.n_odd, "m_even": blocks.m_even,
        "phase_space": phase_space,
    }
    return report

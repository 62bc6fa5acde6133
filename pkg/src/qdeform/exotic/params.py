"""Deformation scalars chi, theta, eta and the scalar function f(nu)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..fock import unit_phase

__all__ = ["DeformationParams", "make_params", "default_f", "F_CHOICES", "SCALAR_TOL"]

F_CHOICES = ("default", "real")

# identities of the derived scalars are asserted to this precision at construction
SCALAR_TOL = 1e-14


def _cos_turns(turns: float) -> float:
    return unit_phase(turns).real


def default_f(nu: float, sign: int = 1) -> complex:
    """f(nu) = (1 + chi)/2 with chi = exp(sign*i*pi*nu); (1+chi)/f is identically 2."""
    return (1 + unit_phase(sign * nu / 2)) / 2


def real_f(nu: float) -> float:
    """cos^2(pi nu / 2): real and f(0) = 1, but (1+chi)/f diverges as nu -> 1."""
    return math.cos(math.pi * nu / 2) ** 2


def _f_ratio(nu: float, sign: int, f_choice: str) -> complex:
    """(1 + chi) / f(nu), evaluated in closed form so the extremes stay exact."""
    if f_choice == "default":
        return 2 + 0j
    if f_choice == "real":
        # (1 + e^{i s pi nu}) / cos^2(pi nu/2) = 2 e^{i s pi nu/2} / cos(pi nu/2)
        c = _cos_turns(nu / 4)
        if c == 0:
            raise ValueError(f"(1+chi)/f is undefined at nu={nu} for f_choice='real'")
        return 2 * unit_phase(sign * nu / 4) / c
    raise ValueError(f"unknown f_choice {f_choice!r}; choose from {F_CHOICES}")


@dataclass(frozen=True)
class DeformationParams:
    nu: float
    sign: int = 1
    mu_omega: float = 1.0
    lam: int = 2
    f_choice: str = "default"
    chi: complex = field(init=False)
    theta: complex = field(init=False)
    eta: complex = field(init=False)
    f_value: complex = field(init=False)

    def __post_init__(self):
        if not math.isfinite(self.nu):
            raise ValueError(f"nu must be finite, got {self.nu!r}")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign!r}")
        if not self.mu_omega > 0:
            raise ValueError(f"mu_omega must be positive, got {self.mu_omega!r}")
        if not (isinstance(self.lam, int) and self.lam >= 1):
            raise ValueError(f"lambda must be an integer >= 1, got {self.lam!r}")
        chi = unit_phase(self.sign * self.nu / 2)
        theta = self.nu * (1 + chi)
        eta = 0.5 * _f_ratio(self.nu, self.sign, self.f_choice) * _cos_turns(self.nu)
        f_value = default_f(self.nu, self.sign) if self.f_choice == "default" else complex(real_f(self.nu))
        object.__setattr__(self, "chi", chi)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "f_value", f_value)
        if abs(abs(chi) - 1) > SCALAR_TOL:
            raise AssertionError(f"|chi| = {abs(chi)!r} != 1")
        if abs(theta.conjugate() - theta / chi) > SCALAR_TOL * max(1.0, abs(theta)):
            raise AssertionError("conj(theta) != theta / chi")

    @property
    def chi_inv(self) -> complex:
        return 1 / self.chi

    def theta_condition_residual(self) -> float:
        """|theta + theta^{-1}/(mu omega)^2|; zero when theta = -(1/mu omega)^2 theta^{-1}."""
        if self.theta == 0:
            return math.inf
        return abs(self.theta + 1 / (self.theta * self.mu_omega ** 2))

    def warnings(self) -> list[str]:
        out = []
        if self.f_choice == "default" and self.nu != 0:
            out.append("f_hermiticity_violated")
        if abs(self.eta.conjugate() - self.eta / self.chi) > SCALAR_TOL:
            out.append("eta_hermiticity_violated")
        if not self.theta_condition_residual() <= 1e-12:
            out.append("theta_condition_violated")
        return out

    def dsl_values(self) -> dict[str, complex]:
        """Values for the parameter names used by the shipped presets."""
        return {
            "nu": complex(self.nu),
            "chi": self.chi,
            "theta": self.theta,
            "eta": self.eta,
            "muw": complex(self.mu_omega),
        }


def make_params(nu: float, sign: int = 1, mu_omega: float = 1.0, lam: int = 2,
                f_choice: str = "default") -> DeformationParams:
    return DeformationParams(nu=float(nu), sign=sign, mu_omega=float(mu_omega), lam=lam, f_choice=f_choice)

"""Coefficient descriptors for the particle system.

The drift, main-jump and rate coefficients come from small closed
families so that boundedness, Lipschitz constants and the strictly
positive rate floor are known by construction.  Every descriptor
evaluates vectorized over particle positions; measure arguments are
passed as the atom vector of the empirical measure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["Drift", "MainJump", "Rate", "InitialLaw", "ModelSpec"]

_DRIFT_KINDS = ("zero", "constant", "mean_tanh", "convolution")
_CONV_KERNELS = ("tanh", "gauss")
_JUMP_KINDS = ("zero", "constant", "tanh")
_RATE_KINDS = ("constant", "tanh")
_INIT_KINDS = ("point", "uniform", "gauss")


@dataclass(frozen=True)
class Drift:
    """Drift b(x, mu).

    kinds:
      zero        b = 0
      constant    b = c
      mean_tanh   b = beta * tanh(mean(tanh(atoms)) - x), O(N) per eval
      convolution b = mean(B(x - atoms)) with B a scaled tanh or a
                  Gaussian bump, O(N^2) per integrator substep
    """

    kind: str = "zero"
    c: float = 0.0
    beta: float = 0.0
    kernel: str = "tanh"
    kernel_amp: float = 1.0
    kernel_width: float = 1.0

    def __post_init__(self):
        if self.kind not in _DRIFT_KINDS:
            raise ValueError(f"unknown drift kind {self.kind!r}")
        if self.kind == "convolution" and self.kernel not in _CONV_KERNELS:
            raise ValueError(f"unknown convolution kernel {self.kernel!r}")
        if self.kind == "convolution" and self.kernel_width <= 0.0:
            raise ValueError("kernel_width must be positive")

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero" or (self.kind == "constant" and self.c == 0.0)

    @property
    def bound(self) -> float:
        if self.kind == "zero":
            return 0.0
        if self.kind == "constant":
            return abs(self.c)
        if self.kind == "mean_tanh":
            return abs(self.beta)
        return abs(self.kernel_amp)

    @property
    def lipschitz(self) -> float:
        # crude but valid constants for the closed family
        if self.kind in ("zero", "constant"):
            return 0.0
        if self.kind == "mean_tanh":
            return 2.0 * abs(self.beta)
        if self.kernel == "tanh":
            return 2.0 * abs(self.kernel_amp) * self.kernel_width
        return abs(self.kernel_amp) / (self.kernel_width * np.sqrt(np.e))

    def __call__(self, x: np.ndarray, atoms: np.ndarray) -> np.ndarray:
        if self.kind == "zero":
            return np.zeros_like(x)
        if self.kind == "constant":
            return np.full_like(x, self.c)
        if self.kind == "mean_tanh":
            return self.beta * np.tanh(np.tanh(atoms).mean() - x)
        diff = x[:, None] - atoms[None, :]
        if self.kernel == "tanh":
            vals = self.kernel_amp * np.tanh(self.kernel_width * diff)
        else:
            vals = self.kernel_amp * np.exp(-(diff**2) / (2.0 * self.kernel_width**2))
        return vals.mean(axis=1)


@dataclass(frozen=True)
class MainJump:
    """Main jump psi(x, mu): zero, a constant delta, or -kappa*tanh(x)."""

    kind: str = "zero"
    delta: float = 0.0
    kappa: float = 0.0

    def __post_init__(self):
        if self.kind not in _JUMP_KINDS:
            raise ValueError(f"unknown main-jump kind {self.kind!r}")

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero" or (self.kind == "constant" and self.delta == 0.0)

    @property
    def bound(self) -> float:
        if self.kind == "zero":
            return 0.0
        if self.kind == "constant":
            return abs(self.delta)
        return abs(self.kappa)

    def __call__(self, x, atoms):
        if self.kind == "zero":
            return np.zeros_like(np.asarray(x, dtype=float))
        if self.kind == "constant":
            return np.full_like(np.asarray(x, dtype=float), self.delta)
        return -self.kappa * np.tanh(x)


@dataclass(frozen=True)
class Rate:
    """Jump rate f(x): constant c, or c0 + c1*(1 + tanh(x))/2.

    The floor and ceiling are exact for both kinds, so thinning with the
    global bound f_upper is exact in law.
    """

    kind: str = "constant"
    c: float = 1.0
    c0: float = 1.0
    c1: float = 0.0

    def __post_init__(self):
        if self.kind not in _RATE_KINDS:
            raise ValueError(f"unknown rate kind {self.kind!r}")
        if self.f_lower <= 0.0:
            raise ValueError("rate must be bounded below by a positive constant")

    @property
    def f_lower(self) -> float:
        return self.c if self.kind == "constant" else self.c0

    @property
    def f_upper(self) -> float:
        return self.c if self.kind == "constant" else self.c0 + self.c1

    @property
    def is_constant(self) -> bool:
        return self.kind == "constant" or self.c1 == 0.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "constant":
            return np.full_like(x, self.c)
        return self.c0 + self.c1 * (1.0 + np.tanh(x)) / 2.0


@dataclass(frozen=True)
class InitialLaw:
    """Initial position law: point mass, uniform interval, or a bounded
    Gaussian-like surrogate (Irwin-Hall sum of 12 uniforms, support
    loc +- 6*scale)."""

    kind: str = "point"
    loc: float = 0.0
    scale: float = 1.0
    lo: float = 0.0
    hi: float = 1.0

    def __post_init__(self):
        if self.kind not in _INIT_KINDS:
            raise ValueError(f"unknown initial-law kind {self.kind!r}")
        if self.kind == "uniform" and self.hi < self.lo:
            raise ValueError("uniform initial law needs lo <= hi")

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        if self.kind == "point":
            return np.full(n, self.loc)
        if self.kind == "uniform":
            return rng.uniform(self.lo, self.hi, n)
        return self.loc + self.scale * (rng.random((n, 12)).sum(axis=1) - 6.0)


@dataclass(frozen=True)
class ModelSpec:
    """The coefficient triple (drift, main jump, rate) plus the initial law."""

    alpha: float
    drift: Drift = field(default_factory=Drift)
    main_jump: MainJump = field(default_factory=MainJump)
    rate: Rate = field(default_factory=Rate)
    initial_law: InitialLaw = field(default_factory=InitialLaw)

    def __post_init__(self):
        if not (0.0 < self.alpha < 2.0) or self.alpha == 1.0:
            raise ValueError(f"alpha must lie in (0,1) or (1,2), got {self.alpha}")
        if self.alpha > 1.0 and not self.main_jump.is_zero:
            raise ValueError("main jumps must vanish when alpha > 1")

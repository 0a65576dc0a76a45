"""
Pydantic models for chain parameters, spectra, fluctuation data and observables.
All quantities are dimensionless: lengths in units of the lattice constant a,
frequencies in units of the single-spring frequency, energies in units of hbar*omega_s.
"""

from enum import Enum
from typing import Any, Dict, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class Dispersion(str, Enum):
    """Phonon dispersion used for the mode frequencies."""
    EXACT = "exact"
    LINEARIZED = "linearized"


class ChainParams(BaseModel):
    """Dimensionless description of a pinned harmonic chain."""
    n_atoms: int = Field(..., ge=1, description="Number of atoms N")
    alpha: float = Field(0.0, ge=0.0, allow_inf_nan=False, description="Quantum ratio hbar/(m a c)")
    eta: float = Field(0.0, ge=0.0, allow_inf_nan=False, description="Temperature k_B T/(hbar omega_s)")
    pin_ratio: float = Field(0.0, ge=0.0, allow_inf_nan=False, description="Local pinning lambda_loc/lambda")
    dispersion: Dispersion = Field(Dispersion.EXACT, description="Exact or linearized dispersion")

    model_config = ConfigDict(frozen=True)

    @property
    def eta_cl(self) -> float:
        """Classical temperature k_B T/(m c^2) = alpha * eta."""
        return self.alpha * self.eta


class ModeSet(BaseModel):
    """The N analytic normal modes of the chain."""
    k_tilde: np.ndarray = Field(..., description="Dimensionless wavenumbers, ascending in (0, pi)")
    omega_ratio: np.ndarray = Field(..., description="Mode frequencies omega_j/omega_s")
    norm: float = Field(..., gt=0.0, description="Eigenvector normalization A_N")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @model_validator(mode="after")
    def _check_shapes(self):
        if self.k_tilde.ndim != 1 or self.k_tilde.shape != self.omega_ratio.shape:
            raise ValueError("k_tilde and omega_ratio must be 1-D arrays of equal length")
        if np.any(self.omega_ratio <= 0.0):
            raise ValueError("all mode frequencies must be positive")
        self.k_tilde.setflags(write=False)
        self.omega_ratio.setflags(write=False)
        return self

    @property
    def size(self) -> int:
        return int(self.k_tilde.size)

    @property
    def eigenvalues(self) -> np.ndarray:
        """Squared frequencies (omega_j/omega_s)^2."""
        return self.omega_ratio ** 2


class CouplingMatrix(BaseModel):
    """Real symmetric coupling matrix C of the potential energy (plus pinning shift)."""
    size: int = Field(..., ge=1)
    entries: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @model_validator(mode="after")
    def _check_square(self):
        if self.entries.shape != (self.size, self.size):
            raise ValueError(f"entries must be {self.size}x{self.size}, got {self.entries.shape}")
        self.entries.setflags(write=False)
        return self


class RegimeKind(str, Enum):
    """Statistical regime of the mode occupations."""
    QUANTUM_ZERO_T = "quantum"
    FINITE_T = "finite-t"
    CLASSICAL = "classical"


class Regime(BaseModel):
    """Regime selecting the per-mode weight of the variance sums."""
    kind: RegimeKind
    eta: float = Field(0.0, ge=0.0, allow_inf_nan=False, description="Quantum-scale temperature")
    eta_cl: float = Field(0.0, ge=0.0, allow_inf_nan=False, description="Classical temperature")

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_temperatures(self):
        if self.kind == RegimeKind.QUANTUM_ZERO_T and self.eta != 0.0:
            raise ValueError("zero-temperature regime cannot carry eta")
        if self.kind != RegimeKind.CLASSICAL and self.eta_cl != 0.0:
            raise ValueError("eta_cl is only meaningful for the classical regime")
        return self

    @classmethod
    def quantum_zero_t(cls) -> "Regime":
        return cls(kind=RegimeKind.QUANTUM_ZERO_T)

    @classmethod
    def finite_t(cls, eta: float) -> "Regime":
        return cls(kind=RegimeKind.FINITE_T, eta=eta)

    @classmethod
    def classical(cls, eta_cl: float) -> "Regime":
        return cls(kind=RegimeKind.CLASSICAL, eta_cl=eta_cl)

    @classmethod
    def from_params(cls, params: ChainParams, classical: bool = False) -> "Regime":
        """Default regime: eta = 0 is the ground state, eta > 0 finite temperature."""
        if classical:
            return cls.classical(params.eta_cl)
        if params.eta == 0.0:
            return cls.quantum_zero_t()
        return cls.finite_t(params.eta)

    @property
    def effective_eta(self) -> float:
        """Quantum-scale temperature (zero for the ground state)."""
        return self.eta if self.kind == RegimeKind.FINITE_T else 0.0


class FluctuationProfile(BaseModel):
    """Per-site scaled variances <u_n^2>/a^2."""
    params: ChainParams
    regime: Regime
    sites: np.ndarray = Field(..., description="1-based site indices, ascending")
    values: np.ndarray = Field(..., description="<u_n^2>/a^2 for each listed site")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @model_validator(mode="after")
    def _check_values(self):
        if self.sites.shape != self.values.shape:
            raise ValueError("sites and values must have equal length")
        self.sites.setflags(write=False)
        self.values.setflags(write=False)
        return self

    def value(self, n: int) -> float:
        """Variance at site n (must be one of the listed sites)."""
        index = int(np.searchsorted(self.sites, n))
        if index >= self.sites.size or self.sites[index] != n:
            raise KeyError(f"site {n} not in profile")
        return float(self.values[index])

    def to_curve(self) -> "Curve":
        return Curve(
            x_label="n",
            y_label="u2_over_a2",
            xs=self.sites.astype(float),
            ys=self.values,
            meta={"regime": self.regime.model_dump(mode="json"), "params": self.params.model_dump(mode="json")},
        )


class PairMethod(str, Enum):
    """How pair variances D_nl are obtained."""
    EXACT_MODE = "exact-pair"
    BULK_APPROX = "bulk"


class PairVarianceMatrix(BaseModel):
    """D_nl = <(u_n - u_l)^2>/a^2, symmetric with zero diagonal."""
    size: int = Field(..., ge=1)
    method: PairMethod
    entries: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @model_validator(mode="after")
    def _check_square(self):
        if self.entries.shape != (self.size, self.size):
            raise ValueError(f"entries must be {self.size}x{self.size}")
        self.entries.setflags(write=False)
        return self


class Curve(BaseModel):
    """Sampled observable with its generating metadata."""
    x_label: str
    y_label: str
    xs: np.ndarray
    ys: np.ndarray
    meta: Dict[str, Any] = Field(default_factory=dict)

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @model_validator(mode="after")
    def _check_grid(self):
        if self.xs.ndim != 1 or self.xs.shape != self.ys.shape:
            raise ValueError("xs and ys must be 1-D arrays of equal length")
        if self.xs.size > 1 and np.any(np.diff(self.xs) <= 0.0):
            raise ValueError("xs must be strictly increasing")
        if not np.all(np.isfinite(self.ys)):
            raise ValueError("ys must be finite")
        self.xs.setflags(write=False)
        self.ys.setflags(write=False)
        return self

    def window(self, lo: float, hi: float) -> "Curve":
        """Sub-curve with lo <= x <= hi."""
        mask = (self.xs >= lo) & (self.xs <= hi)
        return Curve(x_label=self.x_label, y_label=self.y_label,
                     xs=self.xs[mask], ys=self.ys[mask], meta=dict(self.meta))


class BraggAnalysis(BaseModel):
    """Power-law exponents of the Bragg peak Q_nu = 2 pi nu / a."""
    nu: int
    alpha: float = Field(..., gt=0.0)
    beta: float = Field(..., description="beta(Q_nu) = 2 pi alpha nu^2")
    divergent: bool = Field(..., description="True when beta <= 1")
    n_scaling_exponent: Optional[float] = Field(None, description="S_N(Q_nu) ~ N^(1 - beta)")
    shape_exponent: Optional[float] = Field(None, description="S(Q_nu + q) ~ |q a|^(beta - 1)")

    model_config = ConfigDict(frozen=True)


class FluctuationKind(str, Enum):
    """Origin of the fluctuations in the dimensional classifier."""
    THERMAL_CLASSICAL = "thermal"
    QUANTUM_ZERO_T = "quantum"


class OrderClass(str, Enum):
    """Small-k behaviour of the mean square displacement integral."""
    LONG_RANGE_ORDER = "LongRangeOrder"
    LOG_DIVERGENCE = "LogDivergence"
    LINEAR_DIVERGENCE = "LinearDivergence"


class LogFit(BaseModel):
    """Least squares fit y = intercept + slope * log(x)."""
    slope: float
    intercept: float
    rms_residual: float
    n_points: int


class PowerLawFit(BaseModel):
    """Least squares fit log y = log(prefactor) + exponent * log(x)."""
    exponent: float
    prefactor: float
    rms_residual: float
    n_points: int


class LorentzianFit(BaseModel):
    """Fit y = amplitude * w^2 / ((x - center)^2 + w^2)."""
    center: float
    amplitude: float
    half_width: float
    rms_residual: float


class MonteCarloEstimate(BaseModel):
    """Sample means of u_n^2/a^2 and their standard errors."""
    n_samples: int
    mean: np.ndarray
    standard_error: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


class RunConfig(BaseModel):
    """Validated command line request."""
    subcommand: str
    params: Optional[ChainParams] = None
    regime: Optional[Regime] = None
    method: Optional[PairMethod] = None
    output: Optional[str] = Field(None, description="Output path, stdout when omitted")
    format: str = Field("csv", pattern="^(csv|json)$")
    grid: Dict[str, Any] = Field(default_factory=dict, description="Resolved grid specification")

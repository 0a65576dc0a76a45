"""
Least squares fits used to read exponents and slopes off sampled curves.
"""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy import stats
from scipy.optimize import curve_fit

from ..errors import FitError
from ..models import Curve, LogFit, LorentzianFit, PowerLawFit

logger = logging.getLogger(__name__)

MIN_POINTS = 4


def _select(curve: Curve, x_range: Optional[Tuple[float, float]]) -> Tuple[np.ndarray, np.ndarray]:
    xs, ys = curve.xs, curve.ys
    if x_range is not None:
        lo, hi = x_range
        mask = (xs >= lo) & (xs <= hi)
        xs, ys = xs[mask], ys[mask]

    if xs.size < MIN_POINTS:
        raise FitError(f"need at least {MIN_POINTS} points in range, got {xs.size}")
    if np.any(xs <= 0.0):
        raise FitError("logarithmic fits need positive x values")
    return xs, ys


def fit_log_slope(curve: Curve, x_range: Optional[Tuple[float, float]] = None) -> LogFit:
    """
    Ordinary least squares of y against log(x).

    Raises:
        FitError: If fewer than four points fall in range or x <= 0
    """
    xs, ys = _select(curve, x_range)
    log_x = np.log(xs)

    result = stats.linregress(log_x, ys)
    residual = ys - (result.intercept + result.slope * log_x)

    return LogFit(
        slope=float(result.slope),
        intercept=float(result.intercept),
        rms_residual=float(np.sqrt(np.mean(residual ** 2))),
        n_points=int(xs.size),
    )


def fit_power_law(curve: Curve, x_range: Optional[Tuple[float, float]] = None) -> PowerLawFit:
    """
    Ordinary least squares of log(y) against log(x); residuals are in log(y).

    Raises:
        FitError: If fewer than four points fall in range or any value is not positive
    """
    xs, ys = _select(curve, x_range)
    if np.any(ys <= 0.0):
        raise FitError("power law fits need positive y values")

    log_x, log_y = np.log(xs), np.log(ys)
    result = stats.linregress(log_x, log_y)
    residual = log_y - (result.intercept + result.slope * log_x)

    return PowerLawFit(
        exponent=float(result.slope),
        prefactor=float(np.exp(result.intercept)),
        rms_residual=float(np.sqrt(np.mean(residual ** 2))),
        n_points=int(xs.size),
    )


def _lorentzian(x, amplitude, half_width, center):
    return amplitude * half_width ** 2 / ((x - center) ** 2 + half_width ** 2)


def fit_lorentzian(curve: Curve, center: float, half_width_guess: Optional[float] = None) -> LorentzianFit:
    """
    Fit amplitude and half width of a Lorentzian with a fixed center.

    Raises:
        FitError: If fewer than four points are given or the fit does not converge
    """
    xs, ys = curve.xs, curve.ys
    if xs.size < MIN_POINTS:
        raise FitError(f"need at least {MIN_POINTS} points, got {xs.size}")

    amplitude_guess = float(np.max(ys))
    if half_width_guess is None:
        half_width_guess = float(np.ptp(xs)) or 1.0

    def model(x, amplitude, half_width):
        return _lorentzian(x, amplitude, half_width, center)

    try:
        popt, _ = curve_fit(model, xs, ys, p0=(amplitude_guess, half_width_guess), maxfev=20000)
    except (RuntimeError, ValueError) as e:
        raise FitError(f"Lorentzian fit failed: {str(e)}") from e

    amplitude, half_width = popt
    residual = ys - model(xs, amplitude, half_width)
    logger.debug("Lorentzian fit: amplitude=%g half_width=%g", amplitude, half_width)

    return LorentzianFit(
        center=center,
        amplitude=float(amplitude),
        half_width=float(abs(half_width)),
        rms_residual=float(np.sqrt(np.mean(residual ** 2))),
    )

"""
Shared argument groups and parameter resolution for the subcommands.
"""

import argparse
from typing import Tuple

import numpy as np

from ..config import EXACT_PAIR_MAX_N
from ..errors import CostGuardError, ParameterError
from ..models import ChainParams, Dispersion, PairMethod, Regime, RunConfig


def output_parent() -> argparse.ArgumentParser:
    """Flags every subcommand accepts."""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--output", "-o", default=None, help="Output file (stdout when omitted)")
    parent.add_argument("--format", choices=["csv", "json"], default="csv", help="Output format")
    parent.add_argument("--verbose", "-v", action="store_true", help="Debug logging on stderr")
    return parent


def chain_parent() -> argparse.ArgumentParser:
    """Flags describing the chain and its regime."""
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("chain")
    group.add_argument("--n", type=int, required=True, help="Number of atoms N")
    group.add_argument("--alpha", type=float, default=0.0, help="Quantum ratio hbar/(m a c)")
    group.add_argument("--eta", type=float, default=None, help="Temperature k_B T/(hbar omega_s)")
    group.add_argument("--eta-cl", type=float, default=None, help="Classical temperature k_B T/(m c^2)")
    group.add_argument("--pin-ratio", type=float, default=0.0, help="Local pinning lambda_loc/lambda")
    group.add_argument("--dispersion", choices=[d.value for d in Dispersion], default=Dispersion.EXACT.value)
    group.add_argument("--classical", action="store_true", help="Use the strict classical mode weights")
    return parent


def method_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--method", choices=[m.value for m in PairMethod], default=PairMethod.EXACT_MODE.value,
                        help="Exact pair matrix or bulk approximation")


def resolve_chain(args: argparse.Namespace) -> Tuple[ChainParams, Regime]:
    """
    Turn chain flags into parameters and a regime.

    eta is the canonical temperature; --eta-cl is divided by alpha. In the
    classical regime eta_cl may be given directly, even for alpha = 0.

    Raises:
        ParameterError: For contradictory or incomplete temperature flags
    """
    if args.eta is not None and args.eta_cl is not None:
        raise ParameterError("give either --eta or --eta-cl, not both")

    eta = args.eta if args.eta is not None else 0.0
    eta_cl = None
    if args.eta_cl is not None:
        if args.eta_cl < 0.0:
            raise ParameterError("--eta-cl must be non-negative")
        eta_cl = args.eta_cl
        if args.alpha > 0.0:
            eta = args.eta_cl / args.alpha
        elif args.eta_cl != 0.0 and not args.classical:
            raise ParameterError("--eta-cl needs --alpha > 0 unless --classical is set")

    params = ChainParams(
        n_atoms=args.n,
        alpha=args.alpha,
        eta=eta,
        pin_ratio=args.pin_ratio,
        dispersion=Dispersion(args.dispersion),
    )

    if args.classical:
        regime = Regime.classical(eta_cl if eta_cl is not None else params.eta_cl)
    else:
        regime = Regime.from_params(params)
    return params, regime


def check_method(params: ChainParams, method: PairMethod) -> None:
    if method == PairMethod.EXACT_MODE and params.n_atoms > EXACT_PAIR_MAX_N:
        raise CostGuardError(f"--method exact-pair requires N <= {EXACT_PAIR_MAX_N}; use --method bulk")


def linear_grid(lo: float, hi: float, steps: int, name: str) -> np.ndarray:
    """Uniform grid of `steps` points from lo to hi inclusive."""
    if steps < 1:
        raise ParameterError(f"--{name}-steps must be >= 1")
    if steps > 1 and hi <= lo:
        raise ParameterError(f"--{name}-max must exceed --{name}-min")
    return np.linspace(lo, hi, steps)


def site_window(args: argparse.Namespace, n_atoms: int, prefix: str = "n") -> range:
    """Inclusive site window from --{prefix}-min/--{prefix}-max, defaulting to the whole chain."""
    lo = getattr(args, f"{prefix}_min")
    hi = getattr(args, f"{prefix}_max")
    lo = 1 if lo is None else lo
    hi = n_atoms if hi is None else hi
    if not 1 <= lo <= hi <= n_atoms:
        raise ParameterError(f"site window [{lo}, {hi}] must lie within 1..{n_atoms}")
    return range(lo, hi + 1)


def run_meta(args: argparse.Namespace, params: ChainParams = None, regime: Regime = None,
             method: PairMethod = None, **grid) -> dict:
    """Resolved request, recorded in the JSON meta block."""
    config = RunConfig(
        subcommand=args.subcommand,
        params=params,
        regime=regime,
        method=method,
        output=args.output,
        format=args.format,
        grid=grid,
    )
    return config.model_dump(mode="json", exclude_none=True)

"""
Subcommands for the chain itself: normal modes, site and pair fluctuations,
and the single-oscillator quantum-to-classical crossover.
"""

import argparse

import numpy as np

from ..config import PAIR_WINDOW_MAX_SITES
from ..errors import CostGuardError
from ..models import PairMethod
from ..utils.export import Table
from ..utils.fluctuations import fluctuation_profile, oscillator_variance, pair_variance_window
from ..utils.spectrum import mode_set
from .common import (
    chain_parent, check_method, linear_grid, method_argument, output_parent,
    resolve_chain, run_meta, site_window
)


def register(subparsers) -> None:
    """Attach this group's subcommands."""
    output = output_parent()
    chain = chain_parent()

    modes = subparsers.add_parser("modes", parents=[output, chain], help="Normal mode wavenumbers and frequencies")
    modes.set_defaults(handler=modes_command)

    fluct = subparsers.add_parser("fluct", parents=[output, chain], help="Mean square displacement per site")
    fluct.add_argument("--n-min", type=int, default=None)
    fluct.add_argument("--n-max", type=int, default=None)
    fluct.set_defaults(handler=fluct_command)

    pair = subparsers.add_parser("pairfluct", parents=[output, chain], help="Pair variances D_nl")
    pair.add_argument("--n-min", type=int, default=None)
    pair.add_argument("--n-max", type=int, default=None)
    method_argument(pair)
    pair.set_defaults(handler=pairfluct_command)

    crossover = subparsers.add_parser("crossover", parents=[output],
                                      help="Single oscillator variance from ground state to equipartition")
    crossover.add_argument("--eta-min", type=float, default=0.0)
    crossover.add_argument("--eta-max", type=float, default=2.0)
    crossover.add_argument("--eta-steps", type=int, default=201)
    crossover.set_defaults(handler=crossover_command)


def modes_command(args: argparse.Namespace) -> Table:
    params, regime = resolve_chain(args)
    modes = mode_set(params)
    return Table.from_columns(
        {
            "j": np.arange(1, params.n_atoms + 1),
            "k_tilde": modes.k_tilde,
            "omega_ratio": modes.omega_ratio,
            "omega_ratio_squared": modes.eigenvalues,
        },
        meta=run_meta(args, params, regime, norm=modes.norm),
    )


def fluct_command(args: argparse.Namespace) -> Table:
    params, regime = resolve_chain(args)
    sites = site_window(args, params.n_atoms)
    profile = fluctuation_profile(params, regime, sites)
    return Table.from_columns(
        {"n": profile.sites, "u2_over_a2": profile.values},
        meta=run_meta(args, params, regime, n_min=sites.start, n_max=sites.stop - 1),
    )


def pairfluct_command(args: argparse.Namespace) -> Table:
    params, regime = resolve_chain(args)
    method = PairMethod(args.method)
    check_method(params, method)
    sites = site_window(args, params.n_atoms)
    if len(sites) > PAIR_WINDOW_MAX_SITES:
        raise CostGuardError(
            f"pair window of {len(sites)} sites exceeds {PAIR_WINDOW_MAX_SITES}; narrow it with --n-min/--n-max"
        )

    values = pair_variance_window(params, regime, sites, method)
    window = np.arange(sites.start, sites.stop)
    n_index, l_index = np.meshgrid(window, window, indexing="ij")

    return Table.from_columns(
        {"n": n_index.ravel(), "l": l_index.ravel(), "d_over_a2": values.ravel()},
        meta=run_meta(args, params, regime, method, n_min=sites.start, n_max=sites.stop - 1),
    )


def crossover_command(args: argparse.Namespace) -> Table:
    etas = linear_grid(args.eta_min, args.eta_max, args.eta_steps, "eta")
    variances = np.array([oscillator_variance(eta) for eta in etas])
    return Table.from_columns(
        {"eta": etas, "x2_over_sigma2": variances, "equipartition": 2.0 * etas},
        meta=run_meta(args, eta_min=args.eta_min, eta_max=args.eta_max, eta_steps=args.eta_steps),
    )


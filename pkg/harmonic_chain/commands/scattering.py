"""
Subcommands for the experimental probes: density, structure factor, Bragg
exponents, recoilless emission, the dimensional classifier and the SI helper.
"""

import argparse

import numpy as np
from scipy import constants

from ..errors import ParameterError
from ..models import FluctuationKind, PairMethod
from ..utils.export import Table
from ..utils.observables import (
    bragg_analysis, bragg_grid, density_profile, moessbauer_profile,
    order_classification, peak_to_valley_contrast, structure_factor
)
from .common import (
    chain_parent, check_method, linear_grid, method_argument, output_parent,
    resolve_chain, run_meta, site_window
)


def register(subparsers) -> None:
    """Attach this group's subcommands."""
    output = output_parent()
    chain = chain_parent()

    density = subparsers.add_parser("density", parents=[output, chain], help="Average density near a window")
    density.add_argument("--x-min", type=float, default=None, help="Default: N - 20")
    density.add_argument("--x-max", type=float, default=None, help="Default: N + 2")
    density.add_argument("--x-steps", type=int, default=2201)
    density.set_defaults(handler=density_command)

    sq = subparsers.add_parser("sq", parents=[output, chain], help="Static structure factor S_N(q)")
    sq.add_argument("--q-min", type=float, default=0.05)
    sq.add_argument("--q-max", type=float, default=3.0 * np.pi)
    sq.add_argument("--q-steps", type=int, default=500)
    sq.add_argument("--no-bragg-points", action="store_true",
                    help="Do not insert the exact Bragg points 2 pi nu into the grid")
    sq.add_argument("--refine-points", type=int, default=0,
                    help="Geometric refinement points on each side of every Bragg peak")
    method_argument(sq)
    sq.set_defaults(handler=sq_command)

    bragg = subparsers.add_parser("bragg", parents=[output], help="Bragg peak exponents")
    bragg.add_argument("--alpha", type=float, required=True)
    bragg.add_argument("--nu", type=int, nargs="+", default=[1])
    bragg.set_defaults(handler=bragg_command)

    moessbauer = subparsers.add_parser("moessbauer", parents=[output, chain],
                                       help="Zero-phonon emission probability per site")
    moessbauer.add_argument("--qa", type=float, default=2.0 * np.pi)
    moessbauer.add_argument("--l-min", type=int, default=None)
    moessbauer.add_argument("--l-max", type=int, default=None)
    moessbauer.set_defaults(handler=moessbauer_command)

    classify = subparsers.add_parser("classify", parents=[output], help="Long range order in d dimensions")
    classify.add_argument("--d", type=int, required=True, choices=[1, 2, 3])
    classify.add_argument("--regime", choices=[k.value for k in FluctuationKind], required=True)
    classify.set_defaults(handler=classify_command)

    si = subparsers.add_parser("alpha-from-si", parents=[output], help="Quantum ratio from SI material data")
    si.add_argument("--c", type=float, required=True, help="Sound velocity in m/s")
    si.add_argument("--a", type=float, required=True, help="Lattice constant in m")
    mass = si.add_mutually_exclusive_group(required=True)
    mass.add_argument("--A", type=float, help="Nucleon number (mass A proton masses)")
    mass.add_argument("--mass-kg", type=float, help="Atomic mass in kg")
    si.set_defaults(handler=alpha_from_si_command)


def density_command(args: argparse.Namespace) -> Table:
    params, regime = resolve_chain(args)
    x_min = args.x_min if args.x_min is not None else max(0.0, params.n_atoms - 20.0)
    x_max = args.x_max if args.x_max is not None else params.n_atoms + 2.0
    xs = linear_grid(x_min, x_max, args.x_steps, "x")

    curve = density_profile(params, regime, xs)
    meta = run_meta(args, params, regime, x_min=x_min, x_max=x_max, x_steps=args.x_steps)
    meta["contrast"] = peak_to_valley_contrast(curve)
    return Table.from_curve(curve, meta=meta)


def _q_grid(args: argparse.Namespace, n_atoms: int) -> np.ndarray:
    qs = linear_grid(args.q_min, args.q_max, args.q_steps, "q")
    lo, hi = qs[0], qs[-1]

    extra = []
    first = int(np.ceil(lo / (2.0 * np.pi)))
    last = int(np.floor(hi / (2.0 * np.pi)))
    for nu in range(first, last + 1):
        if nu == 0:
            continue
        if not args.no_bragg_points:
            extra.append([2.0 * np.pi * nu])
        if args.refine_points > 0 and 4.0 * np.pi / n_atoms < 0.1:
            for side in (-1, 1):
                extra.append(bragg_grid(n_atoms, nu, points=args.refine_points, side=side))

    if extra:
        qs = np.concatenate([qs] + extra)
        qs = np.unique(qs[(qs >= lo) & (qs <= hi)])
    return qs


def sq_command(args: argparse.Namespace) -> Table:
    params, regime = resolve_chain(args)
    method = PairMethod(args.method)
    check_method(params, method)

    qs = _q_grid(args, params.n_atoms)
    curve = structure_factor(params, regime, qs, method)
    return Table.from_curve(
        curve,
        meta=run_meta(args, params, regime, method, q_min=args.q_min, q_max=args.q_max, q_steps=args.q_steps,
                      bragg_points=not args.no_bragg_points, refine_points=args.refine_points),
    )


def bragg_command(args: argparse.Namespace) -> Table:
    analyses = [bragg_analysis(args.alpha, nu) for nu in args.nu]
    return Table.from_columns(
        {
            "nu": [a.nu for a in analyses],
            "beta": [a.beta for a in analyses],
            "divergent": [a.divergent for a in analyses],
            "n_scaling_exponent": [a.n_scaling_exponent for a in analyses],
            "shape_exponent": [a.shape_exponent for a in analyses],
        },
        meta=run_meta(args, alpha=args.alpha, nu=list(args.nu)),
    )


def moessbauer_command(args: argparse.Namespace) -> Table:
    params, regime = resolve_chain(args)
    sites = site_window(args, params.n_atoms, prefix="l")
    curve = moessbauer_profile(params, args.qa, sites)
    meta = run_meta(args, params, regime, qa=args.qa, l_min=sites.start, l_max=sites.stop - 1)
    if params.alpha > 0.0:
        meta["beta"] = params.alpha / (2.0 * np.pi) * args.qa ** 2
    return Table.from_columns({"l": curve.xs.astype(int), "p0": curve.ys}, meta=meta)


def classify_command(args: argparse.Namespace) -> Table:
    kind = FluctuationKind(args.regime)
    order = order_classification(args.d, kind)
    return Table.from_columns(
        {"d": [args.d], "regime": [kind.value], "order": [order.value]},
        meta=run_meta(args, d=args.d, fluctuations=kind.value),
    )


def alpha_from_si_command(args: argparse.Namespace) -> Table:
    mass = args.mass_kg if args.mass_kg is not None else args.A * constants.proton_mass
    if mass <= 0.0 or args.a <= 0.0 or args.c <= 0.0:
        raise ParameterError("mass, lattice constant and sound velocity must be positive")

    alpha = constants.hbar / (mass * args.a * args.c)
    return Table.from_columns(
        {"alpha": [alpha], "mass_kg": [mass], "a_m": [args.a], "c_m_per_s": [args.c]},
        meta=run_meta(args, c=args.c, a=args.a, mass_kg=mass),
    )

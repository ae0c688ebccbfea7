"""Command line interface.

Exit codes: 0 success, 1 demo verification failure, 2 usage error,
3 numeric or enumeration failure.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import codec, experiments, fields, rates
from .lattices import EnumerationError


def _parse_grid(text):
    """Parse an SNR grid: either 'start:step:stop' or a comma list of dB."""
    if ":" in text:
        start, step, stop = (float(x) for x in text.split(":"))
        if step <= 0 or stop < start:
            raise ValueError("bad grid %r" % text)
        out = []
        v = start
        while v <= stop + 1e-9:
            out.append(round(v, 9))
            v += step
        return out
    return [float(x) for x in text.split(",")]


def _load_field(name_or_path):
    if name_or_path in fields.catalog_names():
        return fields.catalog_field(name_or_path)
    with open(name_or_path) as fh:
        return fields.field_from_json(json.load(fh))


def _load_channel(path, snr_db=None):
    with open(path) as fh:
        doc = json.load(fh)
    if snr_db is not None:
        doc = dict(doc, snr_db=snr_db)
    return rates.ChannelRealization.from_json(doc)


def _emit(args, payload):
    if args.format == "json":
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        raise SystemExit("csv output is only available for sweep commands")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_fields(args):
    out = []
    for name in fields.catalog_names():
        f = fields.catalog_field(name)
        out.append({"name": name, "degree": f.degree,
                    "discriminant": f.discriminant,
                    "min_poly": list(f.min_poly)})
    _emit(args, out)
    return 0


def cmd_rate(args):
    f = _load_field(args.field)
    if args.channel and args.channel != "random":
        ch = _load_channel(args.channel, args.snr_db)
    else:
        rng = np.random.default_rng(args.seed)
        h = rng.normal(size=(f.degree, args.users))
        ch = rates.ChannelRealization(h=h, snr=10.0 ** (args.snr_db / 10.0))
    rep = rates.best_coefficients(f, ch, k=args.k)
    payload = rep.to_json()
    payload["mac_capacity"] = rates.mac_capacity(ch)
    payload["seed"] = args.seed
    _emit(args, payload)
    return 0


def _sweep_common(args, runner, default_metrics):
    metrics = tuple(args.metrics.split(",")) if args.metrics else default_metrics
    cfg = experiments.SweepConfig(
        fields=args.fields.split(","), users=args.users,
        snr_db_grid=_parse_grid(args.snr_grid_db), trials=args.trials,
        seed=args.seed, metrics=metrics)
    points = runner(cfg, workers=args.workers)
    if args.format == "csv":
        text = experiments.csv_string(points)
    else:
        text = json.dumps([vars(p) for p in points], indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_sweep(args):
    return _sweep_common(args, experiments.run_sweep, experiments.RATE_METRICS)


def cmd_if_sweep(args):
    return _sweep_common(args, experiments.run_if_sweep, experiments.IF_METRICS)


def cmd_dof(args):
    f = _load_field(args.field)
    if args.channel and args.channel != "random":
        with open(args.channel) as fh:
            h = np.array(json.load(fh)["h"], dtype=float)
    else:
        rng = np.random.default_rng(args.seed)
        h = rng.normal(size=(f.degree, args.users))
    top = args.snr_top_db
    grid = [top - 40.0 + 5.0 * i for i in range(9)]
    slope, rs = rates.dof_estimate(f, h, grid, z_baseline=args.z_baseline)
    _emit(args, {"field": f.name, "users": args.users, "seed": args.seed,
                 "z_baseline": args.z_baseline, "snr_grid_db": grid,
                 "rates": rs, "slope": slope,
                 "predicted": (f.degree / args.users if not args.z_baseline else 0.0)})
    return 0


def _demo_pair():
    f = fields.catalog_field("quad-5")
    ideal = codec.prime_ideal(f, 5, 3)
    pair = codec.build_nested_pair(f, ideal, G_coarse=np.zeros((1, 0), dtype=int),
                                   G_fine=[[1]], T=1, gamma=1.0)
    return f, ideal, pair


def cmd_codec_demo(args):
    """Two-user, two-relay demonstration over the golden-ratio field mod 5."""
    f, ideal, pair = _demo_pair()
    messages = [int(x) for x in args.messages.split(",")]
    if len(messages) != 2:
        raise SystemExit("expected two message symbols")
    cw = [codec.encode(pair, [m]) for m in messages]
    relay_coeffs = [
        [f.element([-15, 34]), f.element([12, 2])],
        [f.element([3, 9]), f.element([-15, 34])],
    ]
    relays = [0, 1] if args.relay == "both" else [int(args.relay) - 1]
    trace = {
        "field": f.name, "p": ideal.p,
        "messages": messages,
        "codewords": [[list(a.coords) for a in c.ring_coords] for c in cw],
        "relays": [],
    }
    rho_matrix = [[ideal.rho(a) for a in row] for row in relay_coeffs]
    equations = []
    for r in relays:
        Y = sum(codec.scale_by_ring(pair, relay_coeffs[r][l], cw[l])[0]
                for l in range(2))
        eq = codec.decode_equation(pair, Y, [1.0, 1.0], relay_coeffs[r])
        u = codec.extract_ff_equation(pair, eq)
        equations.append(u)
        trace["relays"].append({
            "index": r + 1,
            "coeffs": [list(a.coords) for a in relay_coeffs[r]],
            "coeff_residues": eq.coeff_residues,
            "equation": [list(a.coords) for a in eq.ring_coords],
            "ff_equation": u,
        })
    ok = True
    if args.relay == "both":
        decoded = codec.destination_solve(rho_matrix, equations, ideal.p)
        recovered = [row[0] for row in decoded]
        trace["coeff_matrix"] = rho_matrix
        trace["decoded_messages"] = recovered
        ok = recovered == [m % ideal.p for m in messages]
    trace["verified"] = ok
    _emit(args, trace)
    return 0 if ok else 1


def build_parser():
    ap = argparse.ArgumentParser(
        prog="ringcf",
        description="Computation rates and nested lattice codes for "
                    "compute-and-forward over block-fading channels.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fmt_default="json"):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="write output to a file")
        p.add_argument("--format", choices=["json", "csv"], default=fmt_default)

    p = sub.add_parser("fields", help="list the built-in field catalog")
    common(p)
    p.set_defaults(fn=cmd_fields)

    p = sub.add_parser("rate", help="best coefficient vectors for one channel")
    p.add_argument("--field", required=True)
    p.add_argument("--users", type=int, default=2)
    p.add_argument("--snr-db", type=float, default=20.0)
    p.add_argument("--channel", help='JSON file with {h, snr_db}, or "random"')
    p.add_argument("--k", type=int, default=None,
                   help="number of coefficient vectors (default: users)")
    common(p)
    p.set_defaults(fn=cmd_rate)

    for name, fn in (("sweep", cmd_sweep), ("if-sweep", cmd_if_sweep)):
        p = sub.add_parser(name, help="Monte Carlo %s over an SNR grid"
                           % ("rate sweep" if name == "sweep" else "integer-forcing sweep"))
        p.add_argument("--fields", required=True, help="comma-separated catalog names")
        p.add_argument("--users", type=int, default=2)
        p.add_argument("--trials", type=int, default=2000)
        p.add_argument("--snr-grid-db", default="0:5:50")
        p.add_argument("--metrics", default=None)
        p.add_argument("--workers", type=int, default=None)
        common(p, fmt_default="csv")
        p.set_defaults(fn=fn)

    p = sub.add_parser("dof", help="degrees-of-freedom slope on a fixed channel")
    p.add_argument("--field", required=True)
    p.add_argument("--users", type=int, default=2)
    p.add_argument("--channel", help='JSON file with {h}, or "random"')
    p.add_argument("--snr-top-db", type=float, default=80.0,
                   help="top of the 40 dB fitting window")
    p.add_argument("--z-baseline", action="store_true")
    common(p)
    p.set_defaults(fn=cmd_dof)

    p = sub.add_parser("codec-demo", help="two-relay nested-lattice demonstration")
    p.add_argument("--relay", choices=["1", "2", "both"], default="both")
    p.add_argument("--messages", default="2,3")
    common(p)
    p.set_defaults(fn=cmd_codec_demo)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (EnumerationError, np.linalg.LinAlgError, FloatingPointError,
            rates.PathologicalChannelError, codec.CodecError, ValueError,
            AssertionError, RuntimeError, KeyError, OSError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

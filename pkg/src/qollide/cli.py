"""Command-line front end.

Subcommands: ``coeffs``, ``evolve``, ``sweep``, ``classify``, ``prepare`` and
``figures``.  Every option can also be supplied through a flat key-value
config file (``--config``); command-line flags win over config entries.
Output files are UTF-8 with LF line endings and all floats carry 17
significant digits, so identical inputs produce byte-identical files.

Exit codes: 0 success, 2 configuration error, 3 numeric invariant violation.
``QOLLIDE_THREADS`` caps the sweep worker pool.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .baths import BATH_KINDS, BathSpec, bath_to_csv, classify_coherences, load_bath_csv, validate_bath
from .collective import build_collective_ops, dicke_ladder_transform
from .dynamics import (
    TRAJECTORY_CSV_HEADER,
    analytic_trajectory,
    collision_chain,
    integrate_master,
    ladder_history,
    qubit_state,
    scaling_sweep,
)
from .errors import NumericError, ValidationError
from .master_equation import CollisionParams, coefficients_for
from .utils import fmt_float

DEFAULT_PARAMS = {"g": 0.1, "tau": 1.0, "p": 100.0, "omega0": 1.0}

ENGINES = ("analytic", "ode", "collisions")
MODES = ("exact", "second-order")
SCHEMES = ("deterministic", "stochastic")
FAMILIES = ("product", "thermal-hec", "dicke")
K_RULES = ("quarter", "half-minus-one")


def load_config(path):
    """Parse a flat ``key = value`` config file ('#' starts a comment)."""
    config = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValidationError(
                        f"config: line {lineno} is not 'key = value': {raw.rstrip()!r}"
                    )
                key, value = line.split("=", 1)
                config[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise ValidationError(f"config: cannot read {path}: {exc}") from exc
    return config


def _get(args, config, name, conv=str, default=None, required=False, choices=None):
    value = getattr(args, name, None)
    if value is None and name in config:
        raw = config[name]
        try:
            value = conv(raw)
        except (TypeError, ValueError) as exc:
            raise ValidationError(
                f"{name}: cannot parse config value {raw!r}"
            ) from exc
    if value is None:
        if required:
            raise ValidationError(f"{name}: missing required value")
        value = default
    if choices is not None and value is not None and value not in choices:
        raise ValidationError(f"{name}: must be one of {choices}, got {value!r}")
    return value


def _write(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _json(obj):
    return json.dumps(obj, indent=2) + "\n"


def parse_n_range(text):
    """Parse an N list: ``4:64:4`` (inclusive, default step 1), ``4,8,12``
    or a single integer."""
    s = str(text).strip()
    try:
        if ":" in s:
            parts = [int(p) for p in s.split(":")]
            if len(parts) == 2:
                start, stop, step = parts[0], parts[1], 1
            elif len(parts) == 3:
                start, stop, step = parts
            else:
                raise ValueError
            if step < 1 or stop < start:
                raise ValueError
            return list(range(start, stop + 1, step))
        if "," in s:
            return [int(p) for p in s.split(",")]
        return [int(s)]
    except ValueError:
        raise ValidationError(
            f"N: cannot parse range {text!r} (use start:stop[:step] or a comma list)"
        ) from None


def _params_from(args, config):
    return CollisionParams(
        g=_get(args, config, "g", float, DEFAULT_PARAMS["g"]),
        tau=_get(args, config, "tau", float, DEFAULT_PARAMS["tau"]),
        p=_get(args, config, "p", float, DEFAULT_PARAMS["p"]),
        omega0=_get(args, config, "omega0", float, DEFAULT_PARAMS["omega0"]),
    )


def _bath_from(args, config):
    kind = _get(args, config, "bath", str, required=True, choices=BATH_KINDS)
    if kind == "explicit":
        path = _get(args, config, "file", str, required=True)
        try:
            n_csv, rho = load_bath_csv(path)
        except OSError as exc:
            raise ValidationError(f"file: cannot read {path}: {exc}") from exc
        n_flag = _get(args, config, "N", int)
        if n_flag is not None and n_flag != n_csv:
            raise ValidationError(
                f"N: flag value {n_flag} conflicts with csv header N={n_csv}"
            )
        return BathSpec.explicit(rho)
    N = _get(args, config, "N", int, required=True)
    if kind == "product":
        return BathSpec.product_mixed(N, _get(args, config, "pe", float, required=True))
    if kind == "thermal-hec":
        return BathSpec.thermal_hec(N, _get(args, config, "nbar", float, required=True))
    return BathSpec.dicke(N, _get(args, config, "k", int, required=True))


def _threads():
    env = os.environ.get("QOLLIDE_THREADS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValidationError(
                f"QOLLIDE_THREADS: cannot parse {env!r}"
            ) from None
    return min(4, os.cpu_count() or 1)


# ---------------------------------------------------------------------------
# subcommands


def cmd_coeffs(args, config):
    spec = _bath_from(args, config)
    params = _params_from(args, config)
    out_path = _get(args, config, "out", str)
    coeffs = coefficients_for(spec, params)
    payload = {
        "bath": spec.describe(),
        "params": {
            "g": params.g,
            "tau": params.tau,
            "p": params.p,
            "omega0": params.omega0,
        },
        "coefficients": coeffs.to_json_dict(),
    }
    _write(out_path, _json(payload))
    return 0


def cmd_evolve(args, config):
    engine = _get(args, config, "engine", str, "analytic", choices=ENGINES)
    spec = _bath_from(args, config)
    params = _params_from(args, config)
    t_end = _get(args, config, "t_end", float, required=True)
    if t_end < 0.0:
        raise ValidationError(f"t_end: must be >= 0, got {t_end}")
    dt = _get(args, config, "dt", float)
    n_points = _get(args, config, "n_points", int, 101 if engine == "analytic" else None)
    mode = _get(args, config, "mode", str, "exact", choices=MODES)
    scheme = _get(args, config, "scheme", str, "deterministic", choices=SCHEMES)
    seed = _get(args, config, "seed", int, 0)
    n_traj = _get(args, config, "trajectories", int, 1000)
    out_path = _get(args, config, "out", str)
    rho0 = qubit_state(
        _get(args, config, "init_ee", float, 0.0),
        complex(
            _get(args, config, "init_eg_re", float, 0.0),
            _get(args, config, "init_eg_im", float, 0.0),
        ),
    )
    if engine in ("ode", "collisions") and dt is None:
        raise ValidationError(f"dt: required for the {engine} engine")

    if n_points is not None and n_points <= 0:
        _write(out_path, TRAJECTORY_CSV_HEADER + "\n")
        return 0

    if engine == "analytic":
        coeffs = coefficients_for(spec, params)
        times = np.linspace(0.0, t_end, n_points)
        traj = analytic_trajectory(rho0, coeffs, times)
    elif engine == "ode":
        coeffs = coefficients_for(spec, params)
        traj = integrate_master(rho0, coeffs, t_end, dt, n_records=n_points)
    else:
        traj = collision_chain(
            rho0,
            spec,
            params,
            t_end,
            dt,
            mode=mode,
            scheme=scheme,
            seed=seed,
            n_trajectories=n_traj,
            n_records=n_points,
        )
    _write(out_path, traj.to_csv())
    return 0


def cmd_sweep(args, config):
    family = _get(args, config, "family", str, required=True, choices=FAMILIES)
    n_list = parse_n_range(_get(args, config, "N", str, required=True))
    params = _params_from(args, config)
    p_e = _get(args, config, "pe", float)
    n_bar = _get(args, config, "nbar", float)
    k_rule = _get(args, config, "krule", str, choices=K_RULES)
    out_path = _get(args, config, "out", str)
    slopes_path = _get(args, config, "slopes_out", str)
    result = scaling_sweep(
        family,
        n_list,
        params,
        p_e=p_e,
        n_bar=n_bar,
        k_rule=k_rule,
        threads=_threads(),
    )
    _write(out_path, result.to_csv())
    _write(slopes_path, _json(result.slopes_dict()))
    return 0


def cmd_classify(args, config):
    spec = _bath_from(args, config)
    out_path = _get(args, config, "out", str)
    rho = validate_bath(spec)
    ops = build_collective_ops(spec.N)
    cmap = classify_coherences(rho, ops)
    _write(out_path, _json(cmap.to_json_dict(basis=ops.basis)))
    return 0


def cmd_prepare(args, config):
    N = _get(args, config, "N", int, required=True)
    n_bar = _get(args, config, "nbar", float, required=True)
    gamma0 = _get(args, config, "gamma0", float, required=True)
    t_end = _get(args, config, "t_end", float, required=True)
    dt = _get(args, config, "dt", float, required=True)
    n_points = _get(args, config, "n_points", int)
    out_ladder = _get(args, config, "out_ladder", str)
    out_state = _get(args, config, "out_state", str)

    # a zero-length grid still produces the final state; only the recorded
    # ladder rows are suppressed
    emit_rows = n_points is None or n_points > 0
    times, history = ladder_history(
        N, n_bar, gamma0, t_end, dt, n_records=n_points if emit_rows else None
    )
    header = "t," + ",".join(f"rho_{k}" for k in range(N + 1))
    lines = [header]
    if emit_rows:
        for t, row in zip(times, history):
            lines.append(",".join(fmt_float(x) for x in (t, *row)))
    ladder_csv = "\n".join(lines) + "\n"

    transform = dicke_ladder_transform(N)
    rho = (transform * history[-1]) @ transform.conj().T
    _write(out_ladder, ladder_csv)
    _write(out_state, bath_to_csv(rho, N))
    return 0


# Decay-curve datasets: the plotted factor exp(-t/t_q) is independent of
# p_e for the mixed baths, so a representative value is fixed here.
DECAY_CURVES = (
    ("decay_mixed_N4.csv", BathSpec.product_mixed(4, 0.2)),
    ("decay_mixed_N8.csv", BathSpec.product_mixed(8, 0.2)),
    ("decay_dicke_N4_k1.csv", BathSpec.dicke(4, 1)),
    ("decay_dicke_N8_k2.csv", BathSpec.dicke(8, 2)),
    ("decay_dicke_N8_k3.csv", BathSpec.dicke(8, 3)),
)


def _temperature_curves():
    curves = []
    for N in (4, 8, 12):
        k = N // 2 - 1
        r_e = k * (N - k + 1)
        r_d = (k + 1) * (N - k)
        curves.append((f"temperature_dicke_N{N}_k{k}.csv", BathSpec.dicke(N, k)))
        # incoherent bath tuned to the same steady temperature
        curves.append(
            (f"temperature_mixed_N{N}.csv", BathSpec.product_mixed(N, r_e / (r_e + r_d)))
        )
    return tuple(curves)


def cmd_figures(args, config):
    out_dir = _get(args, config, "out_dir", str, required=True)
    os.makedirs(out_dir, exist_ok=True)
    params = CollisionParams(**DEFAULT_PARAMS)  # mu = 1
    rho0 = qubit_state(0.0)
    jobs = [(name, spec, np.linspace(0.0, 0.5, 201)) for name, spec in DECAY_CURVES]
    jobs += [
        (name, spec, np.linspace(0.0, 1.5, 301))
        for name, spec in _temperature_curves()
    ]
    for name, spec, times in jobs:
        coeffs = coefficients_for(spec, params)
        traj = analytic_trajectory(rho0, coeffs, times)
        path = os.path.join(out_dir, name)
        _write(path, traj.to_csv())
        print(path)
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_bath_args(sub):
    sub.add_argument("--bath", help=f"bath kind: {', '.join(BATH_KINDS)}")
    sub.add_argument("--N", dest="N", type=int, help="number of bath qubits")
    sub.add_argument("--pe", type=float, help="excited probability (product bath)")
    sub.add_argument("--nbar", type=float, help="mean photon number (thermal-hec bath)")
    sub.add_argument("--k", type=int, help="excitation count (dicke bath)")
    sub.add_argument("--file", help="explicit bath matrix CSV")


def _add_params_args(sub):
    sub.add_argument("--g", type=float, help="coupling rate")
    sub.add_argument("--tau", type=float, help="collision duration")
    sub.add_argument("--p", type=float, help="collision rate")
    sub.add_argument("--omega0", type=float, help="qubit frequency")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qollide",
        description="Collision-model thermalization of a target qubit by "
        "N-qubit bath clusters",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("coeffs", help="master-equation coefficients as JSON")
    sub.add_argument("--config", help="flat key=value config file")
    _add_bath_args(sub)
    _add_params_args(sub)
    sub.add_argument("--out", help="output path (default stdout)")
    sub.set_defaults(func=cmd_coeffs)

    sub = subs.add_parser("evolve", help="target-qubit trajectory as CSV")
    sub.add_argument("--config")
    _add_bath_args(sub)
    _add_params_args(sub)
    sub.add_argument("--engine", help=f"one of {', '.join(ENGINES)}")
    sub.add_argument("--t-end", dest="t_end", type=float, help="final time")
    sub.add_argument("--dt", type=float, help="time step (ode/collisions)")
    sub.add_argument("--n-points", dest="n_points", type=int, help="records on the grid")
    sub.add_argument("--init-ee", dest="init_ee", type=float, help="initial excited population")
    sub.add_argument("--init-eg-re", dest="init_eg_re", type=float)
    sub.add_argument("--init-eg-im", dest="init_eg_im", type=float)
    sub.add_argument("--mode", help="collision propagator: exact or second-order")
    sub.add_argument("--scheme", help="deterministic or stochastic")
    sub.add_argument("--seed", type=int, help="stochastic stream seed")
    sub.add_argument("--trajectories", type=int, help="stochastic averages")
    sub.add_argument("--out")
    sub.set_defaults(func=cmd_evolve)

    sub = subs.add_parser("sweep", help="scaling sweep CSV plus fitted slopes JSON")
    sub.add_argument("--config")
    sub.add_argument("--family", help=f"one of {', '.join(FAMILIES)}")
    sub.add_argument("--N", dest="N", help="N list, e.g. 4:64:4 or 4,8,12")
    sub.add_argument("--pe", type=float)
    sub.add_argument("--nbar", type=float)
    sub.add_argument("--krule", help="quarter or half-minus-one")
    _add_params_args(sub)
    sub.add_argument("--out", help="sweep CSV path (default stdout)")
    sub.add_argument("--slopes-out", dest="slopes_out", help="slopes JSON path")
    sub.set_defaults(func=cmd_sweep)

    sub = subs.add_parser("classify", help="coherence block map as JSON")
    sub.add_argument("--config")
    _add_bath_args(sub)
    sub.add_argument("--out")
    sub.set_defaults(func=cmd_classify)

    sub = subs.add_parser("prepare", help="thermal ladder preparation CSVs")
    sub.add_argument("--config")
    sub.add_argument("--N", dest="N", type=int)
    sub.add_argument("--nbar", type=float)
    sub.add_argument("--gamma0", type=float, help="single-qubit emission rate")
    sub.add_argument("--t-end", dest="t_end", type=float)
    sub.add_argument("--dt", type=float)
    sub.add_argument("--n-points", dest="n_points", type=int)
    sub.add_argument("--out-ladder", dest="out_ladder")
    sub.add_argument("--out-state", dest="out_state")
    sub.set_defaults(func=cmd_prepare)

    sub = subs.add_parser("figures", help="regenerate decay and temperature datasets")
    sub.add_argument("--config")
    sub.add_argument("--out-dir", dest="out_dir")
    sub.set_defaults(func=cmd_figures)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config) if getattr(args, "config", None) else {}
        return args.func(args, config)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3


def console_main():
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())

"""Command-line front end.

Subcommands: elliptic, identity, landen, feasibility, solve, profile,
residual, simulate, figure.  Numeric output is CSV with one header row and
17 significant digits ('.' decimal), so binary64 values round-trip
losslessly, or flat key=value text for scalar summaries.  Exit codes:
0 success, 2 usage, 3 I/O failure, 4 infeasible parameters.

All figure data is recomputed from the constraint chain at emit time;
nothing numerical is hard-coded.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import errors as err
from .config import get_precision
from .elliptic import complete_K, jacobi, jacobi_arrays
from .profiles import (
    build_profile,
    default_grid,
    ode_residual,
    probability_deviation,
    write_profile_csv,
)
from .solvers import (
    MediumSpec,
    Scheme,
    SolutionCoefficients,
    Variant,
    check_impossibility,
    feasibility_window,
    fraction_x_of_m,
    group_velocity,
    solve_lambda_p1,
    solve_lambda_superposed,
    solve_n_pure_cnoidal,
    solve_n_superposed,
)
from .simulate import (
    SimGrid,
    default_sim_grid,
    measured_velocity,
    shape_preservation_error,
    simulate,
)
from .superposition import SuperposedWave, WaveKind, superposed_eval

_FIGURE_IDS = ("fig1", "fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b")

_POSITIVE_KEYS = ("gamma", "mu_e", "mu_f", "mu_v", "zeta_max")
_MINIMUMS = {"points": 2, "grid_ntau": 256, "grid_nzeta": 16}


@dataclass(frozen=True)
class RunConfig:
    """Validated command plus its parameter map."""

    command: str
    params: dict


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # raise instead of sys.exit for testability
        raise err.UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="cnoidal-lab",
                     description="Superposed cnoidal pulse-train toolbox")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_family_flags(p):
        p.add_argument("--scheme", choices=[s.value for s in Scheme])
        p.add_argument("--m", type=float)
        p.add_argument("--p", type=int)
        p.add_argument("--gamma", type=float)
        p.add_argument("--mu-e", dest="mu_e", type=float)
        p.add_argument("--mu-f", dest="mu_f", type=float)
        p.add_argument("--mu-v", dest="mu_v", type=float)
        p.add_argument("--b-i", dest="b_i", type=float)
        p.add_argument("--variant", choices=[v.value for v in Variant])
        p.add_argument("--config", type=str)
        p.add_argument("--out", type=str)

    p = sub.add_parser("elliptic", help="evaluate sn, cn, dn at one point")
    p.add_argument("--m", type=float)
    p.add_argument("--x", type=float)
    p.add_argument("--config", type=str)
    p.add_argument("--out", type=str)

    for name in ("identity", "landen"):
        p = sub.add_parser(name)
        p.add_argument("--m", type=float)
        p.add_argument("--p", type=int)
        p.add_argument("--points", type=int)
        p.add_argument("--config", type=str)
        p.add_argument("--out", type=str)

    p = sub.add_parser("feasibility", help="print the fraction window")
    p.add_argument("--config", type=str)
    p.add_argument("--out", type=str)

    for name in ("solve", "profile", "residual"):
        p = sub.add_parser(name)
        add_family_flags(p)
        if name == "profile":
            p.add_argument("--points", type=int)

    p = sub.add_parser("simulate")
    add_family_flags(p)
    p.add_argument("--grid-ntau", dest="grid_ntau", type=int)
    p.add_argument("--grid-nzeta", dest="grid_nzeta", type=int)
    p.add_argument("--zeta-max", dest="zeta_max", type=float)

    p = sub.add_parser("figure")
    p.add_argument("--id", dest="figure_id", choices=_FIGURE_IDS)
    p.add_argument("--config", type=str)
    p.add_argument("--out", type=str)
    return parser


_CONVERTERS = {
    "m": float, "x": float, "p": int, "gamma": float, "mu_e": float,
    "mu_f": float, "mu_v": float, "b_i": float, "variant": str,
    "scheme": str, "points": int, "grid_ntau": int, "grid_nzeta": int,
    "zeta_max": float, "out": str, "figure_id": str,
}


def _read_config_file(path: str, known: set[str]) -> dict:
    values = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise err.UsageError(f"cannot read config file {path}: {exc}")
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise err.UsageError(
                f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in known:
            raise err.UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _CONVERTERS[key](value.strip())
        except ValueError:
            raise err.UsageError(
                f"{path}:{lineno}: bad value for {key}: {value.strip()!r}")
    return values


def _range_check(params: dict) -> None:
    def given(key):
        return params.get(key) is not None

    for key in _POSITIVE_KEYS:
        if given(key) and not params[key] > 0.0:
            raise err.UsageError(f"--{key.replace('_', '-')} must be positive")
    for key, floor in _MINIMUMS.items():
        if given(key) and params[key] < floor:
            raise err.UsageError(
                f"--{key.replace('_', '-')} must be at least {floor}")
    if given("m") and not 0.0 <= params["m"] <= 1.0:
        raise err.UsageError("--m must lie in [0, 1]")
    if given("b_i") and not 0.0 < params["b_i"] <= 1.0:
        raise err.UsageError("--b-i must lie in (0, 1]")
    if given("p") and params["p"] not in (1, 3, 5, 7, 9):
        raise err.UsageError("--p must be odd and at most 9")


def parse_args(argv: list[str]) -> RunConfig:
    """Validate the command line (and optional config file) into a RunConfig."""
    ns = _build_parser().parse_args(argv)
    params = {k: v for k, v in vars(ns).items() if k != "command"}
    config_path = params.pop("config", None)
    if config_path:
        known = set(params)
        for key, value in _read_config_file(config_path, known).items():
            if params.get(key) is None:  # explicit flags win
                params[key] = value
    _range_check(params)
    return RunConfig(command=ns.command, params=params)


def _fmt(v) -> str:
    return format(float(v), ".17g")


def _write_rows(out, header, rows) -> None:
    """CSV to a path or stdout; I/O failures surface as OSError (exit 3)."""
    if out is None:
        writer = csv.writer(sys.stdout)
        writer.writerow(header)
        writer.writerows(rows)
        return
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _print_kv(pairs, out=None) -> None:
    text = "".join(f"{k}={v}\n" for k, v in pairs)
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _require(params: dict, *keys: str) -> None:
    for key in keys:
        if params.get(key) is None:
            raise err.UsageError(f"missing required --{key.replace('_', '-')}")


def _medium_from(params: dict) -> MediumSpec:
    scheme = Scheme(params["scheme"])
    if scheme is Scheme.TWO_LEVEL:
        _require(params, "mu_e")
        return MediumSpec.two_level(params["mu_e"])
    if scheme is Scheme.V:
        _require(params, "mu_e", "mu_f")
        return MediumSpec.v_scheme(params["mu_e"], params["mu_f"])
    if scheme is Scheme.LAMBDA:
        _require(params, "mu_e", "mu_f")
        return MediumSpec.lambda_scheme(params["mu_e"], params["mu_f"],
                                        params.get("mu_v"))
    _require(params, "mu_e", "mu_f", "mu_v")
    return MediumSpec.n_scheme(params["mu_e"], params["mu_f"], params["mu_v"])


def _mu_ratio_from_b_i(b_i: float, m: float, variant: Variant) -> float:
    """Invert the occupancy relations to the coupling ratio for p = 1."""
    b_sq = b_i * b_i
    if variant is Variant.STANDARD:
        if b_sq < m:
            raise err.InvalidRatio(
                f"standard p=1 family needs |b_i|^2 >= m, got "
                f"{b_sq:.6f} < {m}")
        return (1.0 / b_sq - 1.0) * m / (1.0 - m)
    ratio = 1.0 - m / b_sq
    if ratio <= 0.0:
        raise err.InvalidRatio(
            f"exchanged p=1 family needs |b_i|^2 > m, got {b_sq:.6f}")
    return ratio


def _solve_from(params: dict) -> SolutionCoefficients:
    _require(params, "scheme")
    scheme = Scheme(params["scheme"])
    variant = Variant(params.get("variant") or "standard")
    gamma = params.get("gamma") if params.get("gamma") is not None else 1.0
    p = params.get("p") if params.get("p") is not None else 3
    medium = _medium_from(params)
    if scheme is Scheme.LAMBDA:
        if p == 1:
            _require(params, "m", "b_i")
            ratio = _mu_ratio_from_b_i(params["b_i"], params["m"], variant)
            return solve_lambda_p1(params["m"], gamma, ratio, medium, variant)
        _require(params, "m")
        return solve_lambda_superposed(params["m"], gamma, medium, p, variant)
    if scheme is Scheme.N:
        if p == 1:
            _require(params, "b_i")
            return solve_n_pure_cnoidal(gamma, medium, params["b_i"], variant)
        return solve_n_superposed(gamma, medium, p, variant)
    # two-level and V: only the single-wave family exists
    if p != 1:
        report = check_impossibility(medium)
        raise err.DegenerateScheme(
            f"no superposed trains for the {scheme.value} scheme: "
            f"minimum violation margin {report.min_margin:.6f} > 0")
    _require(params, "b_i")
    return solve_n_pure_cnoidal(gamma, medium, params["b_i"], variant,
                                m=params.get("m"))


def _coeff_pairs(coeffs: SolutionCoefficients):
    pairs = [
        ("family", coeffs.family.value),
        ("p", coeffs.p),
        ("m", _fmt(coeffs.m)),
        ("gamma", _fmt(coeffs.gamma)),
        ("q", _fmt(coeffs.q)),
        ("x", _fmt(coeffs.x)),
        ("mu", _fmt(coeffs.mu) if coeffs.mu is not None else ""),
        ("group_velocity", _fmt(group_velocity(coeffs))),
    ]
    for name in ("a_e", "a_f", "a_v", "b_i", "b_e", "b_f", "b_v"):
        val = getattr(coeffs, name)
        if val is None:
            pairs.append((f"{name}_re", ""))
            pairs.append((f"{name}_im", ""))
        else:
            pairs.append((f"{name}_re", _fmt(complex(val).real)))
            pairs.append((f"{name}_im", _fmt(complex(val).imag)))
    return pairs


def _cmd_elliptic(cfg: RunConfig) -> int:
    _require(cfg.params, "m", "x")
    triple = jacobi(cfg.params["x"], cfg.params["m"])
    header = ["x", "m", "sn", "cn", "dn", "K"]
    row = [_fmt(triple.x), _fmt(triple.m), _fmt(triple.sn), _fmt(triple.cn),
           _fmt(triple.dn), _fmt(triple.big_k)]
    _write_rows(cfg.params.get("out"), header, [row])
    return 0


def _identity_points(m: float, p: int, n: int) -> np.ndarray:
    period = 4.0 * complete_K(m) / p
    return np.linspace(-1.5 * period, 1.5 * period, n)


def _cmd_identity(cfg: RunConfig) -> int:
    from .superposition import identity_residuals
    _require(cfg.params, "m")
    m = cfg.params["m"]
    p = cfg.params.get("p") or 3
    n = cfg.params.get("points") or 1000
    r_sd, r_cs, r_cd = identity_residuals(m, p, _identity_points(m, p, n))
    rows = [["sn_dn", _fmt(r_sd)], ["cn_sn", _fmt(r_cs)], ["cn_dn", _fmt(r_cd)]]
    _write_rows(cfg.params.get("out"), ["pairing", "max_abs_residual"], rows)
    return 0


def _cmd_landen(cfg: RunConfig) -> int:
    from .superposition import landen_params, landen_residual
    _require(cfg.params, "m")
    m = cfg.params["m"]
    p = cfg.params.get("p") or 3
    n = cfg.params.get("points") or 1000
    lp = landen_params(m, p)
    r_dn, r_cn, r_sn = landen_residual(m, p, _identity_points(m, p, n))
    header = ["alpha", "beta", "m_tilde", "q_tilde", "amp_identity",
              "res_dn", "res_cn", "res_sn"]
    row = [_fmt(lp.alpha), _fmt(lp.beta), _fmt(lp.m_tilde), _fmt(lp.q_tilde),
           _fmt(m * lp.beta ** 2 - lp.alpha ** 2 * lp.m_tilde),
           _fmt(r_dn), _fmt(r_cn), _fmt(r_sn)]
    _write_rows(cfg.params.get("out"), header, [row])
    return 0


def _cmd_feasibility(cfg: RunConfig) -> int:
    window = feasibility_window()
    _print_kv([("x_min", _fmt(window.x_min)),
               ("x_max", _fmt(window.x_max)),
               ("monotone", str(window.monotone).lower())],
              cfg.params.get("out"))
    return 0


def _cmd_solve(cfg: RunConfig) -> int:
    coeffs = _solve_from(cfg.params)
    pairs = _coeff_pairs(coeffs)
    _print_kv(pairs)
    out = cfg.params.get("out")
    if out:
        _write_rows(out, [k for k, _ in pairs], [[v for _, v in pairs]])
    return 0


def _cmd_profile(cfg: RunConfig) -> int:
    _require(cfg.params, "out")
    coeffs = _solve_from(cfg.params)
    n = cfg.params.get("points") or 4096
    profile = build_profile(coeffs, n=n)
    write_profile_csv(profile, cfg.params["out"])
    return 0


def _cmd_residual(cfg: RunConfig) -> int:
    coeffs = _solve_from(cfg.params)
    report = ode_residual(coeffs)
    prof = build_profile(coeffs)
    pairs = [("relative_scale", _fmt(report.relative_scale)),
             ("grid_spacing", _fmt(report.grid_spacing)),
             ("probability_deviation", _fmt(probability_deviation(prof)))]
    for name, value in report.per_equation.items():
        pairs.append((f"raw_{name}", _fmt(value)))
    for name, value in report.relative.items():
        pairs.append((f"relative_{name}", _fmt(value)))
    _print_kv(pairs, cfg.params.get("out"))
    return 0


def _cmd_simulate(cfg: RunConfig) -> int:
    import os

    _require(cfg.params, "out")
    coeffs = _solve_from(cfg.params)
    base = default_sim_grid(coeffs)
    grid = SimGrid(
        tau_min=base.tau_min, tau_max=base.tau_max,
        n_tau=cfg.params.get("grid_ntau") or base.n_tau,
        zeta_max=cfg.params.get("zeta_max") or base.zeta_max,
        n_zeta=cfg.params.get("grid_nzeta") or base.n_zeta,
        n_snapshots=base.n_snapshots)
    history = simulate(coeffs, grid)
    out_dir = cfg.params["out"]
    os.makedirs(out_dir, exist_ok=True)
    names = list(history.c_hist) + list(history.omega_hist)
    for k, zeta in enumerate(history.zetas):
        header = ["tau"]
        for name in names:
            header += [f"{name}_re", f"{name}_im"]
        header.append("sum_sq")
        sums = sum(np.abs(history.c_hist[n][k]) ** 2 for n in history.c_hist)
        rows = []
        for j, tau in enumerate(history.taus):
            row = [_fmt(tau)]
            for name in names:
                src = history.c_hist.get(name, history.omega_hist.get(name))
                row += [_fmt(src[k][j].real), _fmt(src[k][j].imag)]
            row.append(_fmt(sums[j]))
            rows.append(row)
        _write_rows(os.path.join(out_dir, f"snapshot_{k:03d}.csv"),
                    header, rows)
    summary = [
        ("norm_drift", _fmt(history.norm_drift)),
        ("shape_error", _fmt(shape_preservation_error(history, coeffs))),
        ("measured_velocity", _fmt(measured_velocity(history))),
        ("group_velocity", _fmt(group_velocity(coeffs))),
        ("zeta_max", _fmt(grid.zeta_max)),
    ]
    _print_kv(summary, os.path.join(out_dir, "summary.txt"))
    _print_kv(summary)
    return 0


def caption_occupancy(m: float) -> float:
    """Ground-state occupancy of the single-wave companion at this modulus.

    Chains the conservation fraction into the p = 1 occupancy relation:
    u = 1 - x(m), then 1/b^2 = 1 + u(1/m - 1).
    """
    u = 1.0 - fraction_x_of_m(m)
    return 1.0 / math.sqrt(1.0 + u * (1.0 / m - 1.0))


def _figure_rows(figure_id: str):
    if figure_id == "fig1":
        ms = np.linspace(1.0 / 501.0, 1.0 - 1.0 / 501.0, 500)
        rows = [[_fmt(fraction_x_of_m(m)), _fmt(m)] for m in ms]
        rows.sort(key=lambda r: float(r[0]))
        return ["x", "m"], rows
    m = 0.7 if figure_id in ("fig2a", "fig2b", "fig3a", "fig3b") else 0.3
    big_k = complete_K(m)
    if figure_id in ("fig2a", "fig2b"):
        kind = WaveKind.DN if figure_id == "fig2a" else WaveKind.SN
        xs = np.linspace(-2.0 * big_k, 2.0 * big_k, 600)
        wave = superposed_eval(SuperposedWave(kind, 3, m), xs)
        idx = {"sn": 0, "cn": 1, "dn": 2}[kind.value]
        shifts = [4.0 * i * big_k / 3.0 for i in range(3)]
        parts = [jacobi_arrays(xs + s, m)[idx] for s in shifts]
        header = ["X", "superposed", "c1", "c2", "c3"]
        rows = [[_fmt(x), _fmt(w)] + [_fmt(p[j]) for p in parts]
                for j, (x, w) in enumerate(zip(xs, wave))]
        return header, rows
    xs = np.linspace(-4.0 * big_k, 4.0 * big_k, 800)
    if figure_id in ("fig3a", "fig4a"):
        wave = superposed_eval(SuperposedWave(WaveKind.DN, 3, m), xs)
        single = jacobi_arrays(xs, m)[2]
        header = ["X", "superposed_dn", "single_dn"]
        rows = [[_fmt(x), _fmt(w), _fmt(s)]
                for x, w, s in zip(xs, wave, single)]
        return header, rows
    wave = superposed_eval(SuperposedWave(WaveKind.SN, 3, m), xs)
    b_i = caption_occupancy(m)
    single = b_i * jacobi_arrays(xs, m)[0]
    header = ["X", "superposed_sn", "bi_sn"]
    rows = [[_fmt(x), _fmt(w), _fmt(s)] for x, w, s in zip(xs, wave, single)]
    return header, rows


def emit_figure(figure_id: str, out=None) -> None:
    """Write one figure's curve data as CSV (stdout when out is None)."""
    if figure_id not in _FIGURE_IDS:
        raise err.UsageError(f"unknown figure id {figure_id!r}")
    header, rows = _figure_rows(figure_id)
    _write_rows(out, header, rows)


def _cmd_figure(cfg: RunConfig) -> int:
    _require(cfg.params, "figure_id")
    emit_figure(cfg.params["figure_id"], cfg.params.get("out"))
    return 0


_HANDLERS = {
    "elliptic": _cmd_elliptic,
    "identity": _cmd_identity,
    "landen": _cmd_landen,
    "feasibility": _cmd_feasibility,
    "solve": _cmd_solve,
    "profile": _cmd_profile,
    "residual": _cmd_residual,
    "simulate": _cmd_simulate,
    "figure": _cmd_figure,
}

_INFEASIBLE = (
    err.InfeasibleFraction, err.OrderingViolation, err.SchemeMismatch,
    err.InvalidRatio, err.UnitOccupancy, err.DegenerateScheme,
    err.DegenerateModulus, err.PulseLimit, err.ModulusError,
    err.DivergentPeriod, err.UnstableRun, err.CertificationError,
    err.NoBracket, ValueError,
)


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    try:
        get_precision()
        cfg = parse_args(list(argv))
        return _HANDLERS[cfg.command](cfg)
    except err.UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except _INFEASIBLE as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())

"""
Command-line front end: channel inspection and exact walk diagnostics.

Subcommands
-----------
channel show | check-cp | fixpoint | analyze
    Inspect a channel: affine form, complete positivity, stationary state,
    full analysis (v, covariance, spectral radius, convergence verdict).
dist, clt, ldp, lambda, moments
    Exact finite-n tables for the collective walk observables.

Channels are given with --channel as either a path to a JSON file or an
inline JSON object, in any of the four record forms (kraus, affine, krsw,
named).  Every command emits one table, CSV by default (header row,
RFC-4180 quoting, shortest round-trip floats) or JSON with --format json;
``channel show --format json`` emits the channel record itself so output
can be fed back to --channel.  Tables go to stdout or to --out PATH;
diagnostics go to stderr.

Exit codes: 0 success (including a negative check-cp verdict), 2 malformed
channel spec or configuration (bad flags, windows, out-of-range points),
3 non-unique fixed point without --initial-state, 4 degenerate direction,
5 word degree overflow.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

import click
import numpy as np

from . import walks
from .channels import (
    Channel,
    KRSWChannel,
    analyze,
    as_affine,
    channel_to_record,
    choi,
    is_cp_choi,
    krsw_cp_conditions,
    parse_channel_spec,
)
from .errors import (
    ChannelFormatError,
    DegenerateDirectionError,
    DegreeOverflowError,
    NonUniqueFixedPointError,
    PauliwalkError,
)
from .qubit import DensityMatrix, bloch_to_density, herm_eigen4

__all__ = [
    "RunConfig",
    "cmd_channel",
    "cmd_dist",
    "cmd_clt",
    "cmd_ldp",
    "cmd_lambda",
    "cmd_moments",
    "main",
]

# Letter -> Bloch axis, and the cyclic structure constants eps_abc used in
# the ordered degree-2 limit: (a, b) -> (c, sign) with eps_abc = sign.
_AXIS_BY_LETTER = {"X": 0, "Y": 1, "Z": 2}
_EPS = {
    (0, 1): (2, 1.0),
    (1, 2): (0, 1.0),
    (2, 0): (1, 1.0),
    (1, 0): (2, -1.0),
    (2, 1): (0, -1.0),
    (0, 2): (1, -1.0),
}

Table = Tuple[Tuple[str, ...], List[tuple], Optional[object]]


@dataclass(frozen=True)
class RunConfig:
    """One CLI invocation: command tag, channel record, and table knobs."""

    command: str
    channel_spec: dict
    nu: Optional[Tuple[float, float, float]] = None
    n: Tuple[int, ...] = ()
    t_grid: Optional[Tuple[float, ...]] = None
    x_grid: Optional[Tuple[float, ...]] = None
    words: Tuple[str, ...] = ()
    initial_state: Optional[Tuple[float, float, float]] = None
    symmetrized: bool = False
    output_path: Optional[str] = None
    format: str = "csv"

    def __post_init__(self) -> None:
        for k in self.n:
            if int(k) < 1:
                raise ValueError(f"n must be >= 1, got {k}")
        for name, grid in (("t-grid", self.t_grid), ("x-grid", self.x_grid)):
            if grid is None:
                continue
            if len(grid) == 0:
                raise ValueError(f"{name} must be nonempty")
            if not all(math.isfinite(g) for g in grid):
                raise ValueError(f"{name} must be finite")
            if any(b <= a for a, b in zip(grid, grid[1:])):
                raise ValueError(f"{name} must be strictly increasing")
        if self.format not in ("csv", "json"):
            raise ValueError(f"unknown format: {self.format!r}")


def _load_record(text: str) -> dict:
    """Channel record from inline JSON (leading '{') or a file path."""
    if not text.lstrip().startswith("{"):
        text = Path(text).read_text(encoding="utf-8")
    try:
        record = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChannelFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(record, dict):
        raise ChannelFormatError("channel spec must be a JSON object")
    return record


def _initial_density(config: RunConfig) -> Optional[DensityMatrix]:
    if config.initial_state is None:
        return None
    return bloch_to_density(np.array(config.initial_state, dtype=float))


def _prepare(config: RunConfig):
    """Channel, analysis, and the walk initial state for a run config."""
    channel = parse_channel_spec(config.channel_spec)
    rho0 = _initial_density(config)
    analysis = analyze(channel, rho0)
    return channel, analysis, (rho0 if rho0 is not None else analysis.rho_inf)


def _single_n(config: RunConfig) -> int:
    if len(config.n) != 1:
        raise ValueError("this command takes a single --n value")
    return int(config.n[0])


def cmd_channel(subcommand: str, config: RunConfig) -> Table:
    """
    Report for one channel subcommand: (columns, rows, json payload).

    show emits the affine form as a table and the channel record as JSON
    (the record re-parses to the same channel); check-cp emits the Choi
    eigenvalues, the PSD verdict and, for krsw records, the closed-form
    condition verdicts; fixpoint emits the stationary state; analyze emits
    v, the covariance, the spectral radius and the convergence verdict.
    """
    channel = parse_channel_spec(config.channel_spec)
    if subcommand == "show":
        aff = as_affine(channel)
        rows = [
            (i + 1, *(float(e) for e in aff.T_lin[i]), float(aff.t_vec[i]))
            for i in range(3)
        ]
        return ("row", "T1", "T2", "T3", "t"), rows, channel_to_record(channel)
    if subcommand == "check-cp":
        evals = [float(e) for e in herm_eigen4(choi(channel))]
        cp = is_cp_choi(channel)
        payload: dict = {"choi_eigenvalues": evals, "cp": cp}
        rows = [(f"choi_eig_{i + 1}", evals[i]) for i in range(4)]
        rows.append(("cp", cp))
        if isinstance(channel, KRSWChannel):
            rep = krsw_cp_conditions(channel)
            payload["krsw_conditions"] = {
                "applicable": rep.applicable,
                "cond1": rep.cond1,
                "cond2": rep.cond2,
                "cond3": rep.cond3,
                "verdict": rep.verdict,
            }
            rows.append(("applicable", rep.applicable))
            if rep.applicable:
                rows += [
                    ("cond1", rep.cond1),
                    ("cond2", rep.cond2),
                    ("cond3", rep.cond3),
                    ("verdict", rep.verdict),
                ]
        return ("key", "value"), rows, payload
    analysis = analyze(channel, _initial_density(config))
    v = [float(e) for e in analysis.v.as_array()]
    if subcommand == "fixpoint":
        rho = analysis.rho_inf.to_matrix()
        payload = {
            "v": v,
            "rho_inf": [
                [[float(e.real), float(e.imag)] for e in row] for row in rho
            ],
        }
        rows = [(f"v_{i + 1}", v[i]) for i in range(3)]
        for i in range(2):
            for j in range(2):
                rows.append((f"rho_{i}{j}_re", float(rho[i, j].real)))
                rows.append((f"rho_{i}{j}_im", float(rho[i, j].imag)))
        return ("key", "value"), rows, payload
    if subcommand == "analyze":
        cov = analysis.covariance
        payload = {
            "v": v,
            "covariance": [[float(e) for e in row] for row in cov],
            "spectral_radius": float(analysis.spectral_radius),
            "assumption_a": analysis.assumption_a.value,
        }
        rows = [(f"v_{i + 1}", v[i]) for i in range(3)]
        rows += [
            (f"C_{i + 1}{j + 1}", float(cov[i, j]))
            for i in range(3)
            for j in range(3)
        ]
        rows.append(("spectral_radius", float(analysis.spectral_radius)))
        rows.append(("assumption_a", analysis.assumption_a.value))
        return ("key", "value"), rows, payload
    raise ValueError(f"unknown channel subcommand: {subcommand!r}")


def cmd_dist(config: RunConfig) -> Table:
    """(value, probability) rows of the exact law of the windowed sum."""
    channel, _, rho0 = _prepare(config)
    spec = walks.WalkSpec(channel, rho0, _single_n(config))
    law = walks.site_laws(
        spec, walks.Direction(config.nu), walks.Window(0.0, config.t_grid[0])
    )
    dist = walks.exact_distribution(law)
    rows = [(float(v), float(p)) for v, p in zip(dist.values(), dist.weights)]
    return ("value", "probability"), rows, None


def cmd_clt(config: RunConfig) -> Table:
    """(n, ks_distance, target_variance) rows over the n values."""
    channel, _, rho0 = _prepare(config)
    t = config.t_grid[0]
    rows = []
    for n in config.n:
        spec = walks.WalkSpec(channel, rho0, int(n))
        rep = walks.clt_diagnostic(spec, walks.Direction(config.nu), t)
        if rep.degenerate:
            click.echo(
                f"warning: degenerate direction at n={n}, ks_distance is NaN",
                err=True,
            )
        rows.append((int(n), float(rep.ks_distance), float(rep.target_variance)))
    return ("n", "ks_distance", "target_variance"), rows, None


def cmd_ldp(config: RunConfig) -> Table:
    """(x, empirical_rate, limit_rate) rows over the x grid."""
    channel, _, rho0 = _prepare(config)
    spec = walks.WalkSpec(channel, rho0, _single_n(config))
    rows = []
    for x in config.x_grid:
        rep = walks.ldp_diagnostic(spec, walks.Direction(config.nu), float(x))
        rows.append((float(x), float(rep.empirical_rate), float(rep.limit_rate)))
    return ("x", "empirical_rate", "limit_rate"), rows, None


def cmd_lambda(config: RunConfig) -> Table:
    """(t, lambda_n, lambda_limit) rows over the t grid."""
    channel, _, rho0 = _prepare(config)
    spec = walks.WalkSpec(channel, rho0, _single_n(config))
    rf = walks.rate_function_for(channel, config.nu, rho0=_initial_density(config))
    direction = walks.Direction(config.nu)
    rows = []
    for t in config.t_grid:
        rows.append(
            (
                float(t),
                float(walks.lambda_n(spec, direction, float(t))),
                float(walks.lambda_limit(rf, float(t))),
            )
        )
    return ("t", "lambda_n", "lambda_limit"), rows, None


def _parse_word(text: str, default_t: float) -> List[Tuple[int, Tuple[float, float]]]:
    """
    Letters with windows from a word string.

    Plain letters share the default window (0, t]: "XY".  Per-letter
    windows use comma-separated tokens "X@0:0.5,Y@0.5:1".
    """
    if "," in text or "@" in text:
        tokens = [tok.strip() for tok in text.split(",")]
    else:
        tokens = list(text)
    if not tokens or any(not tok for tok in tokens):
        raise ValueError(f"empty letter in word {text!r}")
    letters = []
    for tok in tokens:
        name, sep, span = tok.partition("@")
        if sep:
            lo_text, colon, hi_text = span.partition(":")
            if not colon:
                raise ValueError(f"letter window must be T0:T1, got {tok!r}")
            window = (float(lo_text), float(hi_text))
        else:
            window = (0.0, default_t)
        if name not in _AXIS_BY_LETTER:
            raise ValueError(f"word letters must be X, Y or Z, got {name!r}")
        letters.append((_AXIS_BY_LETTER[name], window))
    return letters


def _word_limit(
    letters: Sequence[Tuple[int, Tuple[float, float]]],
    covariance: np.ndarray,
    v: np.ndarray,
    symmetrized: bool,
) -> complex:
    """
    Limiting moment of a word as n grows.

    Symmetrized words converge to the Gaussian pairing sum with the window
    overlap as pairing weight.  Ordered words: degree 1 vanishes; degree 2
    adds the same-window commutator term i * overlap * eps_abc * v_c to the
    pairing; degree >= 3 ordered limits have no pairing expression and are
    reported as NaN.
    """
    if symmetrized:
        wick_letters = [(axis + 1, lo, hi) for axis, (lo, hi) in letters]
        return complex(walks.wick_window_moment(covariance, wick_letters), 0.0)
    if len(letters) == 1:
        return 0j
    if len(letters) == 2:
        (a, (a0, a1)), (b, (b0, b1)) = letters
        overlap = max(0.0, min(a1, b1) - max(a0, b0))
        imag = 0.0
        if a != b:
            c, sign = _EPS[(a, b)]
            imag = overlap * sign * float(v[c])
        return complex(float(covariance[a, b]) * overlap, imag)
    return complex(math.nan, math.nan)


def cmd_moments(config: RunConfig) -> Table:
    """(word, n, re, im, limit_re, limit_im) rows, one per word."""
    channel, analysis, rho0 = _prepare(config)
    n = _single_n(config)
    spec = walks.WalkSpec(channel, rho0, n)
    v = analysis.v.as_array()
    default_t = config.t_grid[0]
    rows = []
    for text in config.words:
        letters = _parse_word(text, default_t)
        word = walks.WordSpec(
            tuple(
                (
                    walks.Direction(np.eye(3)[axis], center=float(v[axis])),
                    walks.Window(lo, hi),
                )
                for axis, (lo, hi) in letters
            )
        )
        if config.symmetrized:
            value = complex(walks.symmetrized_expectation(spec, word), 0.0)
        else:
            value = walks.word_expectation(spec, word)
        limit = _word_limit(letters, analysis.covariance, v, config.symmetrized)
        rows.append(
            (
                text,
                int(n),
                float(value.real),
                float(value.imag),
                float(limit.real),
                float(limit.imag),
            )
        )
    return ("word", "n", "re", "im", "limit_re", "limit_im"), rows, None


def _cell(value) -> str:
    # repr of a float is its shortest round-trip decimal form.
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _render(columns, rows, payload, fmt: str) -> str:
    if fmt == "json":
        obj = payload if payload is not None else [dict(zip(columns, row)) for row in rows]
        return json.dumps(obj, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(columns)
    writer.writerows([[_cell(x) for x in row] for row in rows])
    return buf.getvalue()


def _emit(table: Table, config: RunConfig) -> None:
    columns, rows, payload = table
    text = _render(columns, rows, payload, config.format)
    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, DegreeOverflowError):
        return 5
    if isinstance(exc, DegenerateDirectionError):
        return 4
    if isinstance(exc, NonUniqueFixedPointError):
        return 3
    return 2


def _execute(body: Callable[[], Tuple[Table, RunConfig]]) -> None:
    try:
        table, config = body()
    except (PauliwalkError, ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(_exit_code(exc)) from exc
    _emit(table, config)


def _vec3_callback(ctx, param, value):
    if value is None:
        return None
    try:
        parts = tuple(float(p) for p in value.split(","))
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got {value!r}")
    if len(parts) != 3:
        raise click.BadParameter(f"expected three components, got {len(parts)}")
    return parts


def _ints_callback(ctx, param, value):
    if value is None:
        return ()
    try:
        return tuple(int(p) for p in value.split(","))
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}")


def _grid_callback(ctx, param, value):
    """Grid syntax: "a,b,c" explicit points or "start:stop:step" inclusive."""
    if value is None:
        return None
    try:
        if ":" in value:
            parts = value.split(":")
            if len(parts) != 3:
                raise ValueError(value)
            start, stop, step = (float(p) for p in parts)
            if not (step > 0.0 and stop >= start):
                raise ValueError(value)
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return tuple(start + i * step for i in range(count))
        return tuple(float(p) for p in value.split(","))
    except ValueError:
        raise click.BadParameter(
            f"expected T1,T2,... or START:STOP:STEP with positive step, got {value!r}"
        )


_channel_opt = click.option(
    "--channel",
    "channel_text",
    metavar="PATH|JSON",
    required=True,
    help="Channel spec: path to a JSON file, or an inline JSON object.",
)
_nu_opt = click.option(
    "--nu",
    callback=_vec3_callback,
    metavar="A,B,C",
    required=True,
    help="Direction of the site observable nu.sigma.",
)
_state_opt = click.option(
    "--initial-state",
    "initial_state",
    callback=_vec3_callback,
    metavar="X,Y,Z",
    default=None,
    help="Initial Bloch vector; defaults to the stationary state.",
)
_out_opt = click.option(
    "--out",
    "output_path",
    type=click.Path(dir_okay=False, writable=True),
    default=None,
    help="Write the table to this file instead of stdout.",
)
_format_opt = click.option(
    "--format",
    "format_",
    type=click.Choice(["csv", "json"]),
    default="csv",
    show_default=True,
    help="Table format.",
)


def _output_options(f):
    return _out_opt(_format_opt(f))


@click.group()
def main() -> None:
    """Exact statistics of a qubit walked through a noisy channel."""


@main.group("channel")
def channel_group() -> None:
    """Inspect a channel specification."""


def _channel_subcommand(name: str, channel_text: str, initial_state, output_path, format_) -> None:
    def body():
        config = RunConfig(
            command=f"channel.{name}",
            channel_spec=_load_record(channel_text),
            initial_state=initial_state,
            output_path=output_path,
            format=format_,
        )
        return cmd_channel(name, config), config

    _execute(body)


@channel_group.command("show")
@_channel_opt
@_output_options
def channel_show(channel_text, output_path, format_):
    """Affine form T, t of the channel (JSON: the channel record)."""
    _channel_subcommand("show", channel_text, None, output_path, format_)


@channel_group.command("check-cp")
@_channel_opt
@_output_options
def channel_check_cp(channel_text, output_path, format_):
    """Choi eigenvalues and the complete-positivity verdict."""
    _channel_subcommand("check-cp", channel_text, None, output_path, format_)


@channel_group.command("fixpoint")
@_channel_opt
@_state_opt
@_output_options
def channel_fixpoint(channel_text, initial_state, output_path, format_):
    """Stationary state and its Bloch vector."""
    _channel_subcommand("fixpoint", channel_text, initial_state, output_path, format_)


@channel_group.command("analyze")
@_channel_opt
@_state_opt
@_output_options
def channel_analyze(channel_text, initial_state, output_path, format_):
    """Stationary vector, covariance, spectral radius, verdict."""
    _channel_subcommand("analyze", channel_text, initial_state, output_path, format_)


@main.command("dist")
@_channel_opt
@_nu_opt
@click.option("--n", "n_values", callback=_ints_callback, metavar="N", required=True, help="Number of sites.")
@click.option("--t", "t_value", type=float, default=1.0, show_default=True, help="Window end: sites 1..floor(n*t).")
@_state_opt
@_output_options
def dist_command(channel_text, nu, n_values, t_value, initial_state, output_path, format_):
    """Exact law of the collective sum over the window (0, t]."""

    def body():
        config = RunConfig(
            command="dist",
            channel_spec=_load_record(channel_text),
            nu=nu,
            n=n_values,
            t_grid=(t_value,),
            initial_state=initial_state,
            output_path=output_path,
            format=format_,
        )
        return cmd_dist(config), config

    _execute(body)


@main.command("clt")
@_channel_opt
@_nu_opt
@click.option("--n", "n_values", callback=_ints_callback, metavar="N1,N2,...", required=True, help="Site counts, one table row each.")
@click.option("--t", "t_value", type=float, default=1.0, show_default=True, help="Window end: sites 1..floor(n*t).")
@_state_opt
@_output_options
def clt_command(channel_text, nu, n_values, t_value, initial_state, output_path, format_):
    """Gaussian-limit diagnostic: exact KS distance per site count."""

    def body():
        config = RunConfig(
            command="clt",
            channel_spec=_load_record(channel_text),
            nu=nu,
            n=n_values,
            t_grid=(t_value,),
            initial_state=initial_state,
            output_path=output_path,
            format=format_,
        )
        return cmd_clt(config), config

    _execute(body)


@main.command("ldp")
@_channel_opt
@_nu_opt
@click.option("--n", "n_values", callback=_ints_callback, metavar="N", required=True, help="Number of sites.")
@click.option("--x-grid", "x_grid", callback=_grid_callback, metavar="X1,X2,...|START:STOP:STEP", required=True, help="Tail thresholds, strictly above the mean.")
@_state_opt
@_output_options
def ldp_command(channel_text, nu, n_values, x_grid, initial_state, output_path, format_):
    """Tail-decay diagnostic: exact upper-tail rate vs the limit rate."""

    def body():
        config = RunConfig(
            command="ldp",
            channel_spec=_load_record(channel_text),
            nu=nu,
            n=n_values,
            x_grid=x_grid,
            initial_state=initial_state,
            output_path=output_path,
            format=format_,
        )
        return cmd_ldp(config), config

    _execute(body)


@main.command("lambda")
@_channel_opt
@_nu_opt
@click.option("--n", "n_values", callback=_ints_callback, metavar="N", required=True, help="Number of sites.")
@click.option("--t", "t_value", type=float, default=None, help="Single evaluation point.")
@click.option("--t-grid", "t_grid", callback=_grid_callback, metavar="T1,T2,...|START:STOP:STEP", default=None, help="Evaluation points.")
@_state_opt
@_output_options
def lambda_command(channel_text, nu, n_values, t_value, t_grid, initial_state, output_path, format_):
    """Scaled cumulant generating function: finite n vs the limit."""
    if (t_value is None) == (t_grid is None):
        raise click.UsageError("provide exactly one of --t or --t-grid")

    def body():
        config = RunConfig(
            command="lambda",
            channel_spec=_load_record(channel_text),
            nu=nu,
            n=n_values,
            t_grid=t_grid if t_grid is not None else (t_value,),
            initial_state=initial_state,
            output_path=output_path,
            format=format_,
        )
        return cmd_lambda(config), config

    _execute(body)


@main.command("moments")
@_channel_opt
@click.option("--word", "words", metavar="WORD", multiple=True, required=True, help='Letters X|Y|Z, e.g. "XY", or comma-separated with windows "X@0:0.5,Y@0.5:1".')
@click.option("--n", "n_values", callback=_ints_callback, metavar="N", required=True, help="Number of sites.")
@click.option("--t", "t_value", type=float, default=1.0, show_default=True, help="Default letter window end.")
@click.option("--symmetrized", is_flag=True, help="Totally symmetrized product instead of the ordered one.")
@_state_opt
@_output_options
def moments_command(channel_text, words, n_values, t_value, symmetrized, initial_state, output_path, format_):
    """Moments of collective-observable words, with their n limits."""

    def body():
        config = RunConfig(
            command="moments",
            channel_spec=_load_record(channel_text),
            n=n_values,
            t_grid=(t_value,),
            words=tuple(words),
            symmetrized=symmetrized,
            initial_state=initial_state,
            output_path=output_path,
            format=format_,
        )
        return cmd_moments(config), config

    _execute(body)


if __name__ == "__main__":
    main()

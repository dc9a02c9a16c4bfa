"""Command-line front end.

Subcommands: ``kernels``, ``evolve``, ``two-time``, ``exact-cf``,
``figure``, ``compare``.  A run is described by a JSON config document;
every config field can be overridden on the command line with a flag named
after its JSON path (e.g. ``--params.gamma 0.2``).

Trajectory CSV schema (bit-exact): header ``t1,t2,method,pair,re,im``,
floats with 17 significant digits and unpadded exponents, method one of
{exact, nm-full, nm-qrt, markovian}, pair like ``sx.sy`` (single-time
series use the identity slot, e.g. ``sx.id``).

Exit codes: 0 success, 2 config error, 3 numerical failure, 4 I/O error.
Set ``DEPHASR_THREADS`` to cap the worker pool used for independent
(t2, mode) jobs; output order does not depend on scheduling.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .evolution import Mode, evolve_single, two_time_trajectory
from .kernels import KernelCache, NumericsError, build_cache
from .model import DensityMatrix, ModelParams, SpinOperator, TimeGrid, OPERATORS

__all__ = ["main", "ConfigError", "ScenarioConfig", "parse_operator",
           "run_figure", "compare", "dump_kernels"]

class ConfigError(Exception):
    """Invalid configuration or command line."""


def _fmt(x: float) -> str:
    """17-significant-digit float representation without exponent padding."""
    s = f"{x:.17g}"
    if "e" in s:
        mantissa, exp = s.split("e")
        s = f"{mantissa}e{int(exp)}"
    return s


def _parse_complex(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", ""))
        except ValueError as exc:
            raise ConfigError(f"cannot parse complex number {value!r}") from exc
    raise ConfigError(f"cannot parse complex number {value!r}")


_TERM_RE = re.compile(
    r"^(?:\(?(?P<coeff>[^*()]+)\)?\s*\*\s*)?(?P<name>sx|sy|sz|sp|sm|id)$")


def _split_terms(expr: str) -> list[str]:
    """Split on '+' at parenthesis depth zero."""
    terms, depth, start = [], 0, 0
    for i, ch in enumerate(expr):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "+" and depth == 0:
            terms.append(expr[start:i])
            start = i + 1
    terms.append(expr[start:])
    return terms


def parse_operator(expr: str) -> SpinOperator:
    """Operator from a name or a linear combination.

    Accepts ``sx``, ``sy``, ``sz``, ``sp``, ``sm``, ``id`` and sums of
    ``coeff*name`` terms joined by ``+``; a term may carry a leading ``-``
    and a parenthesized complex coefficient, e.g. ``(0.5+0.5j)*sx+sz``.
    """
    total = SpinOperator()
    for raw in _split_terms(expr.replace(" ", "")):
        if not raw:
            raise ConfigError(f"empty term in operator expression {expr!r}")
        sign = 1.0
        if raw.startswith("-"):
            sign, raw = -1.0, raw[1:]
        m = _TERM_RE.match(raw)
        if m is None:
            raise ConfigError(
                f"bad operator term {raw!r}; expected [coeff*]name with name "
                f"in {sorted(OPERATORS)}")
        coeff = _parse_complex(m.group("coeff")) if m.group("coeff") else 1.0
        total = total + (sign * coeff) * OPERATORS[m.group("name")]
    return total


@dataclass(frozen=True)
class ScenarioConfig:
    """One CLI run: model parameters, initial state, operators, grids, modes."""

    params: ModelParams = ModelParams(1.0, 0.1, 5.0, 0.1)
    initial_state: DensityMatrix = None  # type: ignore[assignment]
    pair_a: str = "sx"
    pair_b: str = "sy"
    t2: tuple[float, ...] = (0.2,)
    t_max: float = 10.0
    step: float = 1e-3
    grid_step: float | None = None
    modes: tuple[Mode, ...] = (Mode.NM_FULL,)
    output: str = "dephasr.csv"
    markov_seed: str = "markov"
    cache_method: str = "auto"

    def __post_init__(self):
        if self.initial_state is None:
            object.__setattr__(self, "initial_state", _default_state())
        if self.markov_seed not in ("markov", "exact"):
            raise ConfigError("markov_seed must be 'markov' or 'exact'")
        if self.cache_method not in ("auto", "quadrature"):
            raise ConfigError("cache_method must be 'auto' or 'quadrature'")
        if not self.t2 or any(t < 0 for t in self.t2):
            raise ConfigError("t2 list must be nonempty and nonnegative")
        if not self.step > 0 or not self.t_max > 0:
            raise ConfigError("step and t_max must be positive")
        if any(t > self.t_max for t in self.t2):
            raise ConfigError("every t2 must be <= t_max")

    @property
    def pair_label(self) -> str:
        return f"{self.pair_a}.{self.pair_b}"

    @property
    def cache_step(self) -> float:
        return self.grid_step if self.grid_step is not None else self.step / 2.0

    def operator_a(self) -> SpinOperator:
        return parse_operator(self.pair_a)

    def operator_b(self) -> SpinOperator:
        return parse_operator(self.pair_b)

    def build_cache(self, t_max: float | None = None) -> KernelCache:
        return build_cache(self.params, t_max if t_max is not None else self.t_max,
                           self.cache_step, method=self.cache_method)


def _default_state() -> DensityMatrix:
    r01 = math.sqrt(3) / 4
    return DensityMatrix(0.75, r01, r01, 0.25)


def _state_from_dict(d: dict) -> DensityMatrix:
    try:
        if "amp_excited" in d or "amp_ground" in d:
            return DensityMatrix.from_pure(_parse_complex(d.get("amp_excited", 0.0)),
                                           _parse_complex(d.get("amp_ground", 0.0)))
        rho00 = float(d["rho00"])
        rho01 = _parse_complex(d.get("rho01", 0.0))
        return DensityMatrix(rho00, rho01, rho01.conjugate(), 1.0 - rho00)
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"invalid initial_state: {exc}") from exc


_SCALAR_FIELDS = {
    "params.omega_s": float, "params.gamma": float, "params.cutoff": float,
    "params.temperature": float,
    "initial_state.rho00": float, "initial_state.rho01": str,
    "initial_state.amp_excited": str, "initial_state.amp_ground": str,
    "pair.a": str, "pair.b": str, "pair": str,
    "t2": str, "t_max": float, "step": float, "grid_step": float,
    "modes": str, "output": str, "markov_seed": str, "cache_method": str,
}


def load_config(path: str | None, overrides: dict) -> ScenarioConfig:
    """Merge defaults, an optional JSON document and dotted CLI overrides."""
    doc: dict = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError:
            raise
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError("config document must be a JSON object")

    known_top = {"params", "initial_state", "pair", "t2", "t_max", "step",
                 "grid_step", "modes", "output", "markov_seed", "cache_method"}
    unknown = set(doc) - known_top
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    # flatten the JSON document into dotted paths, then apply CLI overrides
    flat: dict = {}
    for key, val in doc.items():
        if key in ("params", "initial_state") and isinstance(val, dict):
            for sub, v in val.items():
                flat[f"{key}.{sub}"] = v
        elif key == "pair" and isinstance(val, dict):
            for sub, v in val.items():
                flat[f"pair.{sub}"] = v
        else:
            flat[key] = val
    for key, val in overrides.items():
        if val is not None:
            flat[key] = val

    try:
        params = ModelParams(
            omega_s=float(flat.get("params.omega_s", 1.0)),
            gamma=float(flat.get("params.gamma", 0.1)),
            cutoff=float(flat.get("params.cutoff", 5.0)),
            temperature=float(flat.get("params.temperature", 0.1)),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid params: {exc}") from exc

    state_keys = [k for k in flat if k.startswith("initial_state.")]
    if state_keys:
        state = _state_from_dict({k.split(".", 1)[1]: flat[k] for k in state_keys})
    else:
        state = _default_state()

    pair_a, pair_b = "sx", "sy"
    if "pair" in flat:
        label = str(flat["pair"])
        if label.count(".") != 1:
            raise ConfigError(f"pair {label!r} must look like 'sx.sy'; use "
                              "pair.a / pair.b for operator expressions")
        pair_a, pair_b = label.split(".")
    pair_a = str(flat.get("pair.a", pair_a))
    pair_b = str(flat.get("pair.b", pair_b))
    for expr in (pair_a, pair_b):
        parse_operator(expr)  # fail early with a config error

    t2_raw = flat.get("t2", (0.2,))
    if isinstance(t2_raw, str):
        t2_raw = [v for v in t2_raw.split(",") if v]
    try:
        t2 = tuple(float(v) for v in t2_raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid t2 list: {exc}") from exc

    modes_raw = flat.get("modes", ("nm-full",))
    if isinstance(modes_raw, str):
        modes_raw = [v for v in modes_raw.split(",") if v]
    try:
        modes = tuple(Mode.from_label(str(v)) for v in modes_raw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    try:
        return ScenarioConfig(
            params=params, initial_state=state, pair_a=pair_a, pair_b=pair_b,
            t2=t2, t_max=float(flat.get("t_max", 10.0)),
            step=float(flat.get("step", 1e-3)),
            grid_step=(float(flat["grid_step"]) if flat.get("grid_step")
                       is not None else None),
            modes=modes, output=str(flat.get("output", "dephasr.csv")),
            markov_seed=str(flat.get("markov_seed", "markov")),
            cache_method=str(flat.get("cache_method", "auto")),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------

_HEADER = "t1,t2,method,pair,re,im"


def _write_rows(path: str, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_HEADER + "\n")
        for t1, t2, method, pair, val in rows:
            if not (math.isfinite(t1) and math.isfinite(val.real)
                    and math.isfinite(val.imag)):
                raise NumericsError(f"non-finite value for {pair} at t1={t1}")
            fh.write(f"{_fmt(t1)},{_fmt(t2)},{method},{pair},"
                     f"{_fmt(val.real)},{_fmt(val.imag)}\n")


def _trajectory_rows(traj, pair: str):
    method = traj.mode.label
    for t1, val in zip(traj.times, traj.values):
        yield float(t1), traj.t2, method, pair, complex(val)


def _worker_count(n_jobs: int) -> int:
    default = min(n_jobs, os.cpu_count() or 1)
    cap = os.environ.get("DEPHASR_THREADS")
    if cap is None or cap == "":
        return max(1, default)
    try:
        cap_val = int(cap)
        if cap_val < 1:
            raise ValueError
    except ValueError:
        raise ConfigError("DEPHASR_THREADS must be a positive integer")
    return max(1, min(default, cap_val))


def _run_jobs(fn, jobs):
    workers = _worker_count(len(jobs))
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *job) for job in jobs]
        return [f.result() for f in futures]  # deterministic: submission order


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------

def _two_time_grid(cfg: ScenarioConfig, t2: float) -> TimeGrid:
    span = cfg.t_max - t2
    n = round(span / cfg.step)
    if n < 1 or abs(n * cfg.step - span) > 1e-9 * max(1.0, span):
        raise ConfigError(
            f"t1 span {span} from t2={t2} is not a multiple of step {cfg.step}")
    return TimeGrid(t2, cfg.t_max, cfg.step)


def run_two_time(cfg: ScenarioConfig) -> list:
    """Trajectories for every (t2, mode) pair of the config, in config order."""
    cache = cfg.build_cache()
    A, B = cfg.operator_a(), cfg.operator_b()

    def job(t2: float, mode: Mode):
        return two_time_trajectory(A, B, t2, _two_time_grid(cfg, t2), mode,
                                   cfg.initial_state, cache,
                                   markov_seed=cfg.markov_seed,
                                   label_a=cfg.pair_a, label_b=cfg.pair_b)

    jobs = [(t2, mode) for t2 in cfg.t2 for mode in cfg.modes]
    return _run_jobs(job, jobs)


def cmd_two_time(cfg: ScenarioConfig) -> None:
    rows = []
    for traj in run_two_time(cfg):
        rows.extend(_trajectory_rows(traj, cfg.pair_label))
    _write_rows(cfg.output, rows)


def cmd_exact_cf(cfg: ScenarioConfig) -> None:
    cfg = replace(cfg, modes=(Mode.EXACT,))
    cmd_two_time(cfg)


def cmd_evolve(cfg: ScenarioConfig) -> None:
    """Single-time <sx>, <sy>, <sz> over [0, t_max] for every mode."""
    cache = cfg.build_cache()
    grid = TimeGrid(0.0, cfg.t_max, cfg.step)
    rows = []
    for mode in cfg.modes:
        traj = evolve_single(cfg.initial_state, grid, mode, cache)
        for name, series in (("sx", traj.sx), ("sy", traj.sy), ("sz", traj.sz)):
            for t, val in zip(traj.times, series):
                rows.append((float(t), 0.0, mode.label, f"{name}.id", complex(val)))
    _write_rows(cfg.output, rows)


def dump_kernels(cfg: ScenarioConfig) -> None:
    """Write t, D, Gamma, Re G, Im G and the cross kernel per configured t2.

    The cross-kernel columns clamp their second argument to min(t, t2) so
    the dump is defined on the whole grid; rows with t >= t2 carry the true
    Dtilde(t, t2).
    """
    cache = cfg.build_cache()
    ts = TimeGrid(0.0, cfg.t_max, cfg.step).times()
    d = np.asarray(cache.rate(ts), dtype=float)
    gam = np.asarray(cache.exponent(ts), dtype=float)
    gv = np.asarray(cache.antiderivative(ts), dtype=complex)
    cross = []
    for t2 in cfg.t2:
        shifted = cache.antiderivative_signed(ts - np.minimum(ts, t2))
        cross.append(4.0 * (gv - np.asarray(shifted, dtype=complex)))

    header = "t,d,gamma,re_g,im_g"
    for t2 in cfg.t2:
        header += f",re_dtilde_{_fmt(t2)},im_dtilde_{_fmt(t2)}"
    with open(cfg.output, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for i, t in enumerate(ts):
            cells = [_fmt(float(t)), _fmt(d[i]), _fmt(gam[i]),
                     _fmt(gv[i].real), _fmt(gv[i].imag)]
            for col in cross:
                cells.extend((_fmt(col[i].real), _fmt(col[i].imag)))
            if not all(math.isfinite(float(c)) for c in cells):
                raise NumericsError(f"non-finite kernel value at t={t}")
            fh.write(",".join(cells) + "\n")


def compare(cfg: ScenarioConfig, report_path: str | None = None) -> list[dict]:
    """Pairwise max/RMS deviations between modes; CSV plus stdout summary."""
    if len(cfg.modes) < 2:
        raise ConfigError("compare needs at least two modes")
    trajectories = run_two_time(cfg)
    by_key = {(traj.t2, traj.mode): traj for traj in trajectories}
    results = []
    for t2 in cfg.t2:
        for i, ma in enumerate(cfg.modes):
            for mb in cfg.modes[i + 1:]:
                ta, tb = by_key[(t2, ma)], by_key[(t2, mb)]
                if ta.times.shape != tb.times.shape:
                    raise ConfigError("mismatched grids in compare")
                diff = ta.values - tb.values
                results.append({
                    "method_a": ma.label, "method_b": mb.label,
                    "pair": cfg.pair_label, "t2": t2,
                    "max_re": float(np.max(np.abs(diff.real))),
                    "rms_re": float(np.sqrt(np.mean(diff.real ** 2))),
                    "max_im": float(np.max(np.abs(diff.imag))),
                    "rms_im": float(np.sqrt(np.mean(diff.imag ** 2))),
                })
    path = report_path if report_path is not None else cfg.output
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("method_a,method_b,pair,t2,max_re,rms_re,max_im,rms_im\n")
        for r in results:
            fh.write(f"{r['method_a']},{r['method_b']},{r['pair']},"
                     f"{_fmt(r['t2'])},{_fmt(r['max_re'])},{_fmt(r['rms_re'])},"
                     f"{_fmt(r['max_im'])},{_fmt(r['rms_im'])}\n")
    for r in results:
        print(f"{r['method_a']} vs {r['method_b']} ({r['pair']}, "
              f"t2={r['t2']:g}): max|dRe|={r['max_re']:.3e} "
              f"rms Re={r['rms_re']:.3e} max|dIm|={r['max_im']:.3e} "
              f"rms Im={r['rms_im']:.3e}")
    return results


_FIG_T2 = {1: (0.2,), 2: (0.2, 0.5, 1.0, 2.0, 5.0, 10.0), 3: (10.0,)}
_FIG_SPAN = {1: 9.8, 2: 5.0, 3: 10.0}
_FIG_MODES = {
    1: (Mode.MARKOVIAN, Mode.NM_QRT, Mode.NM_FULL, Mode.EXACT),
    2: (Mode.NM_FULL,),
    3: (Mode.MARKOVIAN, Mode.NM_QRT, Mode.NM_FULL, Mode.EXACT),
}
_FIG_INSET_SPAN = 10.0


def run_figure(figure_id: int, cfg: ScenarioConfig, span: float | None = None) -> str:
    """Produce the CSV dataset behind one of the three preset figures.

    Figure 1: four methods at t2 = 0.2.  Figure 2: one full-kernel curve per
    t2 (re-plotted against t1 - t2 downstream) plus <sx(t)>, <sy(t)> inset
    series tagged sx.id / sy.id.  Figure 3: as figure 1 at t2 = 10.
    """
    if figure_id not in (1, 2, 3):
        raise ConfigError("figure id must be 1, 2 or 3")
    t2s = _FIG_T2[figure_id]
    span = span if span is not None else _FIG_SPAN[figure_id]
    if span <= 0:
        raise ConfigError("figure span must be positive")
    t_end = max(t2s) + span
    cache = cfg.build_cache(t_end)
    rows = []

    def job(t2: float, mode: Mode):
        grid = TimeGrid(t2, t2 + span, cfg.step)
        return two_time_trajectory(cfg.operator_a(), cfg.operator_b(), t2,
                                   grid, mode, cfg.initial_state, cache,
                                   markov_seed=cfg.markov_seed,
                                   label_a=cfg.pair_a, label_b=cfg.pair_b)

    jobs = [(t2, mode) for t2 in t2s for mode in _FIG_MODES[figure_id]]
    for traj in _run_jobs(job, jobs):
        rows.extend(_trajectory_rows(traj, cfg.pair_label))

    if figure_id == 2:
        inset_end = min(_FIG_INSET_SPAN, t_end)
        grid = TimeGrid(0.0, inset_end, cfg.step)
        traj = evolve_single(cfg.initial_state, grid, Mode.NM_FULL, cache)
        for name, series in (("sx", traj.sx), ("sy", traj.sy)):
            for t, val in zip(traj.times, series):
                rows.append((float(t), 0.0, Mode.NM_FULL.label,
                             f"{name}.id", complex(val)))
    _write_rows(cfg.output, rows)
    return cfg.output


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config document")
    for flag, kind in _SCALAR_FIELDS.items():
        parser.add_argument(f"--{flag}", dest=flag, metavar="V",
                            type=str if kind is str else kind, default=None)


def _overrides(args: argparse.Namespace) -> dict:
    return {k: getattr(args, k) for k in _SCALAR_FIELDS
            if getattr(args, k, None) is not None}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dephasr",
        description="Dephasing dynamics and two-time correlation functions "
                    "of a two-level system in a thermal bosonic bath.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
            ("kernels", "dump D, Gamma, G and the cross kernel as CSV"),
            ("evolve", "single-time <sx>,<sy>,<sz> trajectories"),
            ("two-time", "two-time correlation trajectories per (t2, mode)"),
            ("exact-cf", "closed-form correlation values (method exact)"),
            ("compare", "pairwise deviation report between modes")):
        p = sub.add_parser(name, help=help_text)
        _add_config_flags(p)
        if name == "compare":
            p.add_argument("--report", help="deviation CSV path "
                                            "(defaults to the config output)")

    p = sub.add_parser("figure", help="reproduce a preset figure dataset")
    p.add_argument("--id", type=int, required=True, choices=(1, 2, 3))
    p.add_argument("--span", type=float, default=None,
                   help="length of each t1 window (preset-specific default)")
    _add_config_flags(p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config, _overrides(args))
        if args.command == "kernels":
            dump_kernels(cfg)
        elif args.command == "evolve":
            cmd_evolve(cfg)
        elif args.command == "two-time":
            cmd_two_time(cfg)
        elif args.command == "exact-cf":
            cmd_exact_cf(cfg)
        elif args.command == "compare":
            compare(cfg, args.report)
        elif args.command == "figure":
            out = cfg.output
            if out == "dephasr.csv":  # default name tracks the figure id
                cfg = replace(cfg, output=f"fig{args.id}.csv")
            run_figure(args.id, cfg, span=args.span)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 success, 2 flag validation failure, 3 numerical failure
(singular matrix / invalid Schur scalar), 4 oracle mismatch in `check`.
Diagnostics go to stderr; data output is never mixed with them.
"""

from __future__ import annotations

import functools
import json
import os
import sys
import tempfile

import click
import numpy as np

from . import closed_form, info_matrix, plotting
from . import sweep as sweep_mod
from .errors import ConsistencyError, RejectedInput, SingularMatrixError
from .fisher import DEFAULT_N_SAMPLES, fisher_da, fisher_nda_mc
from .model import (DA, NDA, SUPPORTED_LABELS, PhaseModel,
                    build_constellation, noise_variance)

SCHEMA_VERSION = 1
CSV_HEADER = "x,y,label,jd,jd_stderr,seed"
ORACLE_TOL = 1e-8

_BOUND_CHOICES = ["bcrb-offline", "hcrb-offline", "bcrb-online", "hcrb-online"]


def _fmt(v) -> str:
    return repr(float(v))


def _atomic_write(text: str, output: str):
    if output == "-":
        sys.stdout.write(text)
        return
    d = os.path.dirname(os.path.abspath(output))
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, output)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _to_csv(series_list, seed: int) -> str:
    lines = [CSV_HEADER]
    for s in series_list:
        for i in range(len(s.x)):
            est = s.jd_used[i]
            lines.append(",".join([
                _fmt(s.x[i]), _fmt(s.y[i]), s.label,
                _fmt(est.jd), _fmt(est.std_error), str(seed)]))
    return "\n".join(lines) + "\n"


def _to_json(series_list, meta: dict) -> str:
    series = []
    for s in series_list:
        est = s.jd_used[0]
        entry = {"label": s.label, "x": list(map(float, s.x)),
                 "y": list(map(float, s.y)),
                 "jd": est.jd, "jd_stderr": est.std_error}
        if len(set(s.jd_used)) > 1:
            entry["jd_per_point"] = [e.jd for e in s.jd_used]
            entry["jd_stderr_per_point"] = [e.std_error for e in s.jd_used]
        series.append(entry)
    return json.dumps({"meta": meta, "series": series}, indent=2) + "\n"


def _emit(series_list, meta: dict, fmt: str, output: str):
    if fmt == "csv":
        _atomic_write(_to_csv(series_list, meta["seed"]), output)
    else:
        _atomic_write(_to_json(series_list, meta), output)


def _note_xi(xi: float):
    if xi:
        click.echo("note: bound values do not depend on the drift xi; "
                   "it is recorded in metadata only", err=True)


def _dispatch(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except RejectedInput as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        except (SingularMatrixError, ConsistencyError) as exc:
            click.echo(f"numerical failure: {exc}", err=True)
            sys.exit(3)
    return wrapper


def _common_opts(fn):
    for opt in reversed([
        click.option("--snr-db", type=float, default=sweep_mod.DEFAULT_SNR_DB,
                     show_default=True, help="Signal-to-noise ratio in dB."),
        click.option("--sigma-w2", type=float,
                     default=sweep_mod.DEFAULT_SIGMA_W2, show_default=True,
                     help="Phase-noise increment variance (rad^2)."),
        click.option("--xi", type=float, default=0.0, show_default=True,
                     help="Linear drift (rad/symbol); metadata only."),
        click.option("--scenario", type=click.Choice([DA, NDA]), default=DA,
                     show_default=True),
        click.option("--modulation", "modulations", multiple=True,
                     type=click.Choice(list(SUPPORTED_LABELS)),
                     default=("qam4",), show_default=True),
        click.option("--samples", type=int, default=DEFAULT_N_SAMPLES,
                     show_default=True, help="NDA Monte-Carlo sample count."),
        click.option("--seed", type=int, default=0, show_default=True,
                     envvar="PHASEBOUNDS_SEED",
                     help="RNG seed (env PHASEBOUNDS_SEED)."),
        click.option("--workers", type=int, default=1, show_default=True),
        click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
                     default="csv", show_default=True),
        click.option("--output", default="-", show_default=True,
                     help="Output path, or - for stdout."),
    ]):
        fn = opt(fn)
    return fn


def _meta(**kwargs) -> dict:
    meta = {"schema": SCHEMA_VERSION}
    meta.update(kwargs)
    return meta


def _resolve_jd(scenario, modulation, snr_db, sigma_w2, samples, seed,
                workers, block_len=1):
    pm = PhaseModel(snr_db=snr_db, sigma_w2=sigma_w2, block_len=block_len,
                    scenario=scenario)
    if scenario == DA:
        return fisher_da(pm)
    return sweep_mod.resolve_jd(modulation, pm, samples, seed, workers)


@click.group()
def main():
    """Bayesian and hybrid Cramer-Rao bounds for QAM dynamical phase
    estimation under Wiener phase noise."""


@main.command("jd")
@_common_opts
@_dispatch
def jd_cmd(snr_db, sigma_w2, xi, scenario, modulations, samples, seed,
           workers, fmt, output):
    """Per-symbol Fisher information about the carrier phase."""
    _note_xi(xi)
    series = []
    for mod in modulations:
        est = _resolve_jd(scenario, mod, snr_db, sigma_w2, samples, seed,
                          workers)
        series.append(sweep_mod.BoundSeries(
            label=f"{mod}/{scenario}/jd", x=np.array([snr_db]),
            y=np.array([est.jd]), jd_used=(est,)))
    meta = _meta(command="jd", snr_db=snr_db, sigma_w2=sigma_w2, xi=xi,
                 scenario=scenario, modulations=list(modulations),
                 samples=samples, seed=seed)
    _emit(series, meta, fmt, output)


@main.command("bound")
@_common_opts
@click.option("--kind", type=click.Choice(["bcrb", "hcrb"]), default="hcrb",
              show_default=True)
@click.option("--mode", type=click.Choice(["offline", "online"]),
              default="offline", show_default=True)
@click.option("--length", type=int, default=sweep_mod.DEFAULT_BLOCK_LEN,
              show_default=True, help="Observation block length L.")
@click.option("--position", type=int, default=sweep_mod.DEFAULT_POSITION,
              show_default=True, help="Block position l of the phase.")
@click.option("--oracle", is_flag=True,
              help="Also emit the dense-inversion oracle value.")
@_dispatch
def bound_cmd(snr_db, sigma_w2, xi, scenario, modulations, samples, seed,
              workers, fmt, output, kind, mode, length, position, oracle):
    """A single bound value at one operating point."""
    _note_xi(xi)
    mod = modulations[0]
    est = _resolve_jd(scenario, mod, snr_db, sigma_w2, samples, seed, workers,
                      block_len=length)
    cf = closed_form.coefs(est.jd, sigma_w2)
    if mode == "online":
        bv = (closed_form.bcrb_online(cf, position) if kind == "bcrb"
              else closed_form.hcrb_online(cf, position))
    else:
        bv = (closed_form.bcrb_offline(cf, length, position) if kind == "bcrb"
              else closed_form.hcrb_offline(cf, length, position))
    label = f"{mod}/{scenario}/{kind}/{mode}"
    series = [sweep_mod.BoundSeries(label=label, x=np.array([float(position)]),
                                    y=np.array([bv.value]), jd_used=(est,))]
    meta = _meta(command="bound", kind=kind, mode=mode, length=length,
                 position=position, snr_db=snr_db, sigma_w2=sigma_w2, xi=xi,
                 scenario=scenario, modulation=mod, samples=samples, seed=seed)
    if oracle:
        eff_len = bv.block_len
        if kind == "hcrb":
            ref = info_matrix.oracle_hcrb_diag(
                info_matrix.build_him(est.jd, sigma_w2, eff_len))[bv.position - 1]
        else:
            ref = info_matrix.oracle_bcrb_diag(
                info_matrix.build_bim(est.jd, sigma_w2, eff_len))[bv.position - 1]
        rel = abs(bv.value - ref) / abs(ref)
        series.append(sweep_mod.BoundSeries(
            label=label + "/oracle", x=np.array([float(position)]),
            y=np.array([ref]), jd_used=(est,)))
        meta["oracle"] = {"value": float(ref), "relative_error": float(rel)}
        click.echo(f"oracle value {float(ref)!r}, relative error {rel:.3e}",
                   err=True)
    _emit(series, meta, fmt, output)


def _sweep_common(fn):
    for opt in reversed([
        click.option("--bound", "bound_specs", multiple=True,
                     type=click.Choice(_BOUND_CHOICES),
                     default=("hcrb-offline",), show_default=True),
        click.option("--length", type=int,
                     default=sweep_mod.DEFAULT_BLOCK_LEN, show_default=True),
        click.option("--oracle", is_flag=True,
                     help="Cross-check sampled points against the oracle."),
        click.option("--figure", default=None,
                     help="Also render the curves to this image file."),
    ]):
        fn = opt(fn)
    return fn


def _run_sweep(spec, meta, fmt, output, oracle, figure):
    series = sweep_mod.run_sweep(spec)
    if oracle:
        worst = max(sweep_mod.crosscheck_series(spec, s) for s in series)
        meta["oracle_crosscheck_max_rel_error"] = worst
        click.echo(f"oracle cross-check max relative error {worst:.3e}",
                   err=True)
    if figure:
        plotting.save_figure(series, spec.axis, figure)
    _emit(series, meta, fmt, output)


@main.command("sweep-position")
@_common_opts
@_sweep_common
@_dispatch
def sweep_position_cmd(snr_db, sigma_w2, xi, scenario, modulations, samples,
                       seed, workers, fmt, output, bound_specs, length,
                       oracle, figure):
    """Bound versus block position (fixed SNR)."""
    _note_xi(xi)
    pm = PhaseModel(snr_db=snr_db, sigma_w2=sigma_w2, xi=xi,
                    block_len=length, scenario=scenario)
    spec = sweep_mod.SweepSpec(
        axis="position", pm=pm, constellations=tuple(modulations),
        bounds=tuple(tuple(b.split("-")) for b in bound_specs),
        n_samples=samples, seed=seed, n_workers=workers)
    meta = _meta(command="sweep-position", snr_db=snr_db, sigma_w2=sigma_w2,
                 xi=xi, scenario=scenario, modulations=list(modulations),
                 bounds=list(bound_specs), length=length, samples=samples,
                 seed=seed)
    _run_sweep(spec, meta, fmt, output, oracle, figure)


@main.command("sweep-snr")
@_common_opts
@_sweep_common
@click.option("--position", type=int, default=sweep_mod.DEFAULT_POSITION,
              show_default=True)
@click.option("--snr-start", type=float, default=0.0, show_default=True)
@click.option("--snr-stop", type=float, default=40.0, show_default=True)
@click.option("--snr-step", type=float, default=2.0, show_default=True)
@_dispatch
def sweep_snr_cmd(snr_db, sigma_w2, xi, scenario, modulations, samples, seed,
                  workers, fmt, output, bound_specs, length, oracle, figure,
                  position, snr_start, snr_stop, snr_step):
    """Bound at a fixed block position versus SNR."""
    _note_xi(xi)
    if snr_step <= 0 or snr_stop < snr_start:
        raise RejectedInput("invalid SNR grid")
    grid = tuple(np.arange(snr_start, snr_stop + snr_step / 2, snr_step))
    pm = PhaseModel(snr_db=snr_start, sigma_w2=sigma_w2, xi=xi,
                    block_len=length, scenario=scenario)
    spec = sweep_mod.SweepSpec(
        axis="snr_db", pm=pm, constellations=tuple(modulations),
        bounds=tuple(tuple(b.split("-")) for b in bound_specs),
        snr_grid=grid, position=position, n_samples=samples, seed=seed,
        n_workers=workers)
    meta = _meta(command="sweep-snr", sigma_w2=sigma_w2, xi=xi,
                 scenario=scenario, modulations=list(modulations),
                 bounds=list(bound_specs), length=length, position=position,
                 snr_grid=[float(s) for s in grid], samples=samples,
                 seed=seed)
    _run_sweep(spec, meta, fmt, output, oracle, figure)


@main.command("check")
@click.option("--tolerance", type=float, default=ORACLE_TOL, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="json", show_default=True)
@click.option("--output", default="-", show_default=True)
@_dispatch
def check_cmd(tolerance, fmt, output):
    """Run the full closed-form vs oracle equivalence grid."""
    worst = 0.0
    worst_case = None
    for jd in (0.5, 2.0, 20.0):
        for sw2 in (0.005, 0.1):
            cf = closed_form.coefs(jd, sw2)
            for L in (2, 3, 5, 10, 30, 60):
                ref_b = info_matrix.oracle_bcrb_diag(
                    info_matrix.build_bim(jd, sw2, L))
                ref_h = info_matrix.oracle_hcrb_diag(
                    info_matrix.build_him(jd, sw2, L))
                for l in range(1, L + 1):
                    for kind, val, ref in (
                            ("bcrb", closed_form.bcrb_offline(cf, L, l).value,
                             ref_b[l - 1]),
                            ("hcrb", closed_form.hcrb_offline(cf, L, l).value,
                             ref_h[l - 1])):
                        rel = float(abs(val - ref) / abs(ref))
                        if rel > worst:
                            worst, worst_case = rel, (kind, jd, sw2, L, l)
    report = {"meta": _meta(command="check", tolerance=tolerance),
              "max_relative_error": worst,
              "worst_case": list(worst_case),
              "passed": worst <= tolerance}
    if fmt == "json":
        _atomic_write(json.dumps(report, indent=2) + "\n", output)
    else:
        _atomic_write("max_relative_error,passed\n"
                      f"{worst!r},{report['passed']}\n", output)
    if worst > tolerance:
        click.echo(f"oracle mismatch: max relative error {worst:.3e} "
                   f"exceeds {tolerance:.1e}", err=True)
        sys.exit(4)


if __name__ == "__main__":
    main()

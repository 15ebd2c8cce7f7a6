"""Command-line interface.

Subcommands: ``jc`` (decoherence curves), ``budget`` (feasibility
report), ``swap`` (scenario files), ``exchange`` (telephone-exchange
scenarios) and ``ree`` (relative entropy of entanglement).

Exit codes: 0 success, 2 usage error, 3 input error, 4 verification
mismatch.  Numeric output uses 12 significant digits and is
locale-independent; identical inputs and seeds give byte-identical
output.  Files are written atomically.
"""
from __future__ import annotations

import json
import math
import os
import sys
import tempfile
from pathlib import Path

import click
import numpy as np

from . import catswap, feasibility
from .core import DensityOperator
from .entanglement import HarnessConfig, REEConfig, axiom_harness, relative_entropy_of_entanglement
from .jc import (
    CouplingModel,
    DecoherenceParams,
    VibrationalDistribution,
    oracle_population_lower,
    population_lower,
)

EXIT_INPUT_ERROR = 3
EXIT_VERIFY_MISMATCH = 4


class InputError(click.ClickException):
    """Bad input file or value; exits with code 3."""

    exit_code = EXIT_INPUT_ERROR


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def _round12(obj):
    """Clamp floats to 12 significant digits for stable JSON output."""
    if isinstance(obj, float):
        return float(_fmt(obj)) if math.isfinite(obj) else obj
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round12(v) for v in obj]
    return obj


def _write_output(text: str, out: str | None):
    if out is None or out == "-":
        click.echo(text, nl=not text.endswith("\n"))
        return
    path = Path(out)
    try:
        handle = tempfile.NamedTemporaryFile(
            "w", dir=path.parent or Path("."), prefix=f".{path.name}.", delete=False
        )
    except OSError as exc:
        raise InputError(f"cannot write {out!r}: {exc}") from exc
    try:
        with handle as fh:
            fh.write(text)
        os.replace(handle.name, path)
    except BaseException:
        os.unlink(handle.name)
        raise


def _dump_json(data, out):
    _write_output(json.dumps(_round12(data), indent=2, sort_keys=True) + "\n", out)


seed_option = click.option(
    "--seed",
    type=int,
    default=0,
    envvar="QLIMITS_SEED",
    show_default=True,
    help="Seed for randomized steps (QLIMITS_SEED is the fallback).",
)


@click.group()
@click.version_option(package_name="qlimits")
def main():
    """Trapped-ion decoherence, emission budgets, cat-state swapping and
    entanglement measures."""


# ---------------------------------------------------------------------------
# jc
# ---------------------------------------------------------------------------


@main.command("jc")
@click.option("--dist", default="coherent:3.0", show_default=True,
              help="Initial vibrational distribution: fock:N, coherent:X or thermal:X.")
@click.option("--model", type=click.Choice(["di", "vi"]), default="di", show_default=True,
              help="Reservoir coupling: imperfect dipole (di) or trap fluctuation (vi).")
@click.option("--gamma0", type=float, default=0.127, show_default=True,
              help="Normalized base decoherence rate.")
@click.option("--d", "exponent_d", type=float, default=0.4, show_default=True,
              help="Reservoir spectral exponent.")
@click.option("--tmax", type=float, default=25.0, show_default=True,
              help="End of the dimensionless g*t grid.")
@click.option("--points", type=int, default=501, show_default=True, help="Grid points.")
@click.option("--g", "g_rad_s", type=float, default=None,
              help="Rabi scale in rad/s; adds a seconds column t_s.")
@click.option("--oracle", is_flag=True,
              help="Add a column from the numerical dephasing integrator.")
@click.option("--out", default="-", show_default=True, help="CSV destination ('-' = stdout).")
def cmd_jc(dist, model, gamma0, exponent_d, tmax, points, g_rad_s, oracle, out):
    """Write the damped Rabi curve P_down(gt) as CSV."""
    try:
        distribution = VibrationalDistribution.parse(dist)
        params = DecoherenceParams(gamma0_tilde=gamma0, d=exponent_d, g=g_rad_s)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if tmax <= 0 or points < 2:
        raise click.UsageError("need tmax > 0 and at least 2 grid points")
    coupling = CouplingModel(model)
    grid = np.linspace(0.0, tmax, points)
    p_down = population_lower(grid, distribution, params, coupling)
    columns = {"gt": grid}
    if g_rad_s is not None:
        columns["t_s"] = grid / g_rad_s
    columns["p_down"] = p_down
    if oracle:
        columns["p_down_oracle"] = oracle_population_lower(grid, distribution, params, coupling)
    header = ",".join(columns)
    rows = [header]
    for i in range(points):
        rows.append(",".join(_fmt(col[i]) for col in columns.values()))
    _write_output("\n".join(rows) + "\n", out)


# ---------------------------------------------------------------------------
# budget
# ---------------------------------------------------------------------------


@main.command("budget")
@click.option("--L", "l_list", default="4,40", show_default=True,
              help="Comma-separated input sizes in bits.")
@click.option("--epsilon", type=float, default=feasibility.EPSILON_WORKED, show_default=True,
              help="Elementary-step count constant.")
@click.option("--eta", type=float, default=1.0, show_default=True, help="Lamb-Dicke parameter.")
@click.option("--ratio", type=float, default=1e-16, show_default=True,
              help="Gamma_22/Omega_12^2 in seconds.")
@click.option("--ions", "ions_path", type=click.Path(), default=None,
              help="JSON file with ion spectroscopic constants.")
@click.option("--N", "n_ops", type=float, default=None,
              help="Operation count for emission probabilities.")
@click.option("--out", default=None, help="Also write the report as JSON to this path.")
def cmd_budget(l_list, epsilon, eta, ratio, ions_path, n_ops, out):
    """Print the spontaneous-emission budget table."""
    try:
        l_values = [int(part) for part in l_list.split(",") if part.strip()]
    except ValueError as exc:
        raise click.UsageError(f"bad --L list: {exc}") from exc
    if not l_values:
        raise click.UsageError("--L needs at least one value")
    ions = ()
    if ions_path is not None:
        try:
            ions = feasibility.load_ion_config(ions_path)
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            raise InputError(f"bad ion config: {exc}") from exc
    try:
        report = feasibility.feasibility_report(
            l_values, epsilon=epsilon, eta=eta, ratio=ratio, ions=ions, n_ops=n_ops
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    click.echo(report.to_text_table())
    if out is not None:
        _dump_json(report.to_json_dict(), out)


# ---------------------------------------------------------------------------
# swap / exchange
# ---------------------------------------------------------------------------


def _verify_or_die(coll, spec):
    ok, message = catswap.verify_against_oracle(coll, spec)
    if not ok:
        click.echo(f"verification mismatch: {message}", err=True)
        sys.exit(EXIT_VERIFY_MISMATCH)


@main.command("swap")
@click.argument("scenario", type=click.Path())
@click.option("--verify", is_flag=True, help="Cross-check against the dense oracle.")
@click.option("--out", default="-", show_default=True, help="JSON destination.")
def cmd_swap(scenario, verify, out):
    """Enumerate cat-basis outcomes for a scenario file.

    The file either lists cat states and a measurement ("cats" and
    "measure") or describes an exchange scenario ("users" and
    "request").
    """
    try:
        with open(scenario, encoding="utf-8") as fh:
            data = json.load(fh)
        if isinstance(data, dict) and "users" in data:
            result = catswap.telephone_exchange(data["users"], data.get("request", []))
            coll = result.collection
            spec = catswap.MeasurementSpec.of(result.measured)
            outcomes = result.outcomes
        else:
            coll, spec = catswap.scenario_from_dict(data)
            outcomes = catswap.enumerate_outcomes(coll, spec)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        raise InputError(f"bad scenario: {exc}") from exc
    if verify:
        _verify_or_die(coll, spec)
    _dump_json(catswap.outcomes_to_jsonable(coll, spec, outcomes), out)


@main.command("exchange")
@click.option("--users", required=True, help="Comma-separated user names.")
@click.option("--request", "request_", required=True,
              help="Comma-separated subset of users to entangle.")
@click.option("--verify", is_flag=True, help="Cross-check against the dense oracle.")
@click.option("--out", default="-", show_default=True, help="JSON destination.")
def cmd_exchange(users, request_, verify, out):
    """Entangle a requested user subset via one hub measurement."""
    user_list = [u.strip() for u in users.split(",") if u.strip()]
    request_list = [u.strip() for u in request_.split(",") if u.strip()]
    try:
        result = catswap.telephone_exchange(user_list, request_list)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    spec = catswap.MeasurementSpec.of(result.measured)
    if verify:
        _verify_or_die(result.collection, spec)
    blob = catswap.outcomes_to_jsonable(result.collection, spec, result.outcomes)
    blob["users"] = list(result.users)
    blob["request"] = list(result.request)
    blob["user_particles"] = dict(result.user_particles)
    blob["hub_particles"] = dict(result.hub_particles)
    _dump_json(blob, out)


# ---------------------------------------------------------------------------
# ree
# ---------------------------------------------------------------------------


def _load_density(path) -> DensityOperator:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict) or "matrix" not in data or "dims" not in data:
        raise ValueError("input needs 'matrix' ([[re, im] pairs]) and 'dims'")
    raw = data["matrix"]
    try:
        mat = np.array([[complex(cell[0], cell[1]) for cell in row] for row in raw])
    except (TypeError, IndexError) as exc:
        raise ValueError(f"matrix entries must be [re, im] pairs: {exc}") from exc
    return DensityOperator(mat, tuple(int(d) for d in data["dims"]))


@main.command("ree")
@click.argument("state_file", type=click.Path(), required=False)
@click.option("--axioms", is_flag=True, help="Run the E1-E6 axiom harness instead.")
@click.option("--restarts", type=int, default=16, show_default=True, help="Optimizer restarts.")
@seed_option
@click.option("--out", default="-", show_default=True, help="JSON destination.")
def cmd_ree(state_file, axioms, restarts, seed, out):
    """Relative entropy of entanglement of a density operator."""
    if axioms:
        config = HarnessConfig(seed=seed, ree_config=REEConfig(restarts=restarts, seed=seed))
        report = axiom_harness(config=config)
        _dump_json(report.to_json_dict(), out)
        if not report.passed:
            sys.exit(EXIT_VERIFY_MISMATCH)
        return
    if state_file is None:
        raise click.UsageError("provide a state file or --axioms")
    try:
        sigma = _load_density(state_file)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        raise InputError(f"bad state file: {exc}") from exc
    try:
        result = relative_entropy_of_entanglement(sigma, REEConfig(restarts=restarts, seed=seed))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _dump_json(
        {
            "value_nats": result.value,
            "value_bits": result.value_bits,
            "converged": result.converged,
            "restarts": result.restarts_used,
        },
        out,
    )


if __name__ == "__main__":
    main()

"""Command-line front end: generate data, inspect sensitivities, run releases."""
from __future__ import annotations

import dataclasses
import json
import sys

import click

from .generators import (
    PaTransmissionParams,
    SirParams,
    generate_pa_transmission,
    generate_sir_transmission,
)
from .graph_core import DegreeBounds, dumps_edge_list, loads_edge_list
from .harness import (
    ExperimentConfig,
    derive_bounds,
    derive_tau,
    rows_to_csv,
    rows_to_json,
    run_experiment,
)
from .mechanisms import MECHANISMS, MechanismConfig, release as run_release
from .projection import ProjectionThresholds
from .sensitivity import (
    diff_sequence_sensitivity,
    per_release_sensitivity,
    projected_sensitivity,
)
from .statistics import StatisticQuery


def _parse_statistic(spec: str, tau) -> StatisticQuery:
    """Parse 'high_degree', 'degree_histogram', or a pattern like 'k_star:2'."""
    if spec == "high_degree":
        return StatisticQuery.high_degree(tau if tau is not None else 1)
    if spec == "degree_histogram":
        return StatisticQuery.degree_histogram()
    pattern, _, k = spec.partition(":")
    return StatisticQuery.subgraph(pattern, int(k) if k else None)


def _parse_pair(value: str):
    parts = [int(p) for p in value.split(",")]
    if len(parts) == 1:
        return parts
    if len(parts) == 2:
        return parts
    raise click.BadParameter("expected D or Din,Dout")


def _parse_bounds(value: str) -> DegreeBounds:
    parts = _parse_pair(value)
    if len(parts) == 1:
        return DegreeBounds.undirected(parts[0])
    return DegreeBounds.directed(*parts)


def _parse_thresholds(value: str) -> ProjectionThresholds:
    parts = _parse_pair(value)
    if len(parts) == 1:
        return ProjectionThresholds.undirected(parts[0])
    return ProjectionThresholds.directed(*parts)


def _read_sequence(path: str):
    with click.open_file(path) as fh:
        return loads_edge_list(fh.read())


def _emit(text: str, output):
    if output:
        with click.open_file(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


@click.group()
def main():
    """Differentially private continual release over graph sequences."""


@main.command()
@click.option("--model", type=click.Choice(["pa", "sir"]), required=True)
@click.option("--m0", default=500, show_default=True)
@click.option("--arrivals", default=70, show_default=True)
@click.option("--years", default=20, show_default=True)
@click.option("--k", default=1, show_default=True)
@click.option("--p-isolated", default=0.5, show_default=True)
@click.option("--decay", default=1.0, show_default=True)
@click.option("--population", default=10000, show_default=True)
@click.option("--contacts", default=2, show_default=True)
@click.option("--p-recover", default=0.1, show_default=True)
@click.option("--p-infect", default=0.18, show_default=True)
@click.option("--initial-infected", default=1, show_default=True)
@click.option("--max-steps", default=200, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--output", type=click.Path(), default=None)
def generate(model, m0, arrivals, years, k, p_isolated, decay, population,
             contacts, p_recover, p_infect, initial_infected, max_steps,
             seed, output):
    """Generate a synthetic transmission sequence as an edge list."""
    if model == "pa":
        params = PaTransmissionParams(
            m0=m0, arrivals=arrivals, years=years, k=k,
            p_isolated=p_isolated, decay=decay,
        )
        seq = generate_pa_transmission(params, seed=seed)
    else:
        params = SirParams(
            population=population, contacts=contacts, p_recover=p_recover,
            p_infect=p_infect, initial_infected=initial_infected,
            max_steps=max_steps,
        )
        seq = generate_sir_transmission(params, seed=seed)
    _emit(dumps_edge_list(seq), output)


@main.command()
@click.option("--statistic", required=True)
@click.option("--tau", type=int, default=None)
@click.option("--degree-bound", default=None, help="D or Din,Dout")
@click.option("--projection-thresholds", default=None, help="D or Din,Dout")
@click.option(
    "--regime",
    type=click.Choice(["diff_sequence", "per_release", "projected"]),
    default="diff_sequence",
    show_default=True,
)
def sensitivity(statistic, tau, degree_bound, projection_thresholds, regime):
    """Print the closed-form sensitivity for a query as JSON."""
    query = _parse_statistic(statistic, tau)
    if regime == "projected":
        if projection_thresholds is None:
            raise click.BadParameter("projected regime needs --projection-thresholds")
        report = projected_sensitivity(query, _parse_thresholds(projection_thresholds))
    else:
        if degree_bound is None:
            raise click.BadParameter(f"{regime} regime needs --degree-bound")
        bounds = _parse_bounds(degree_bound)
        fn = diff_sequence_sensitivity if regime == "diff_sequence" else per_release_sensitivity
        report = fn(query, bounds)
    click.echo(
        json.dumps(
            {
                "value": report.value,
                "formula_id": report.formula_id,
                "regime": report.regime,
                "query": query.label(),
                "bounds": dataclasses.asdict(report.bounds),
            }
        )
    )


@main.command("release")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--mechanism", type=click.Choice(MECHANISMS), default="sensdiff",
              show_default=True)
@click.option("--statistic", required=True)
@click.option("--epsilon", type=float, required=True)
@click.option("--tau", type=int, default=None)
@click.option("--tau-percentile", type=float, default=None)
@click.option("--degree-bound", default=None)
@click.option("--bound-granularity", type=int, default=5, show_default=True)
@click.option("--projection-thresholds", default=None)
@click.option("--seed", default=0, show_default=True)
@click.option("--trial", default=0, show_default=True)
@click.option("--zero-noise", is_flag=True)
@click.option("--output", type=click.Path(), default=None)
def release_cmd(input_path, mechanism, statistic, epsilon, tau, tau_percentile,
                degree_bound, bound_granularity, projection_thresholds, seed,
                trial, zero_noise, output):
    """One private release run; prints per-step estimates as JSON."""
    seq = _read_sequence(input_path)
    if tau is None and tau_percentile is not None:
        tau = derive_tau(seq, tau_percentile)
    query = _parse_statistic(statistic, tau)
    bounds = (
        _parse_bounds(degree_bound)
        if degree_bound
        else derive_bounds(seq, bound_granularity)
    )
    thresholds = (
        _parse_thresholds(projection_thresholds) if projection_thresholds else None
    )
    candidates = ()
    if mechanism == "compose_projection" and thresholds is None:
        from .harness import default_projection_grid

        candidates = tuple(default_projection_grid(seq, bound_granularity))
    config = MechanismConfig(
        epsilon=epsilon, seed=seed, trial_id=trial, zero_noise=zero_noise
    )
    series = run_release(
        mechanism, seq, query, config,
        bounds=bounds, thresholds=thresholds, candidates=candidates,
    )
    estimates = [
        est.tolist() if hasattr(est, "tolist") else est for est in series.estimates
    ]
    _emit(
        json.dumps(
            {
                "mechanism": mechanism,
                "query": query.label(),
                "epsilon": epsilon,
                "noise_scale": series.noise_scale,
                "estimates": estimates,
            },
            indent=2,
        )
        + "\n",
        output,
    )


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--dataset", default=None, help="label in output rows")
@click.option("--statistic", required=True)
@click.option("--epsilon", "epsilons", type=float, multiple=True, required=True)
@click.option("--mechanism", "mechanisms", type=click.Choice(MECHANISMS),
              multiple=True, default=MECHANISMS, show_default=True)
@click.option("--releases", type=int, default=None,
              help="merge batches into this many release windows")
@click.option("--trials", default=100, show_default=True)
@click.option("--tau", type=int, default=None)
@click.option("--tau-percentile", type=float, default=90.0, show_default=True)
@click.option("--degree-bound", default=None)
@click.option("--bound-granularity", type=int, default=5, show_default=True)
@click.option("--projection-thresholds", default=None)
@click.option("--seed", default=0, show_default=True)
@click.option("--zero-noise", is_flag=True)
@click.option("--output", type=click.Path(), default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
def experiment(input_path, dataset, statistic, epsilons, mechanisms, releases,
               trials, tau, tau_percentile, degree_bound, bound_granularity,
               projection_thresholds, seed, zero_noise, output, fmt):
    """Error sweep over budgets and mechanisms; emits one row per trial."""
    seq = _read_sequence(input_path)
    query = _parse_statistic(statistic, tau if tau is not None else 1)
    cfg = ExperimentConfig(
        dataset=dataset or input_path,
        seq=seq,
        query=query,
        epsilons=tuple(epsilons),
        mechanisms=tuple(mechanisms),
        trials=trials,
        seed=seed,
        zero_noise=zero_noise,
        releases=releases,
        tau=tau,
        tau_percentile=tau_percentile,
        bounds=_parse_bounds(degree_bound) if degree_bound else None,
        bound_granularity=bound_granularity,
        thresholds=(
            _parse_thresholds(projection_thresholds)
            if projection_thresholds
            else None
        ),
    )
    rows, _ = run_experiment(cfg)
    text = rows_to_csv(rows) if fmt == "csv" else rows_to_json(rows)
    _emit(text, output)


if __name__ == "__main__":
    main()

import math
from typing import Tuple

from respoles.cli import options
from respoles.cli.output import emit, params_header, render_csv, render_json, series_frame
from respoles.cli.runner import handles, launch
from respoles.core.config import settings
from respoles.core.exceptions import require
from respoles.schemas.evolution import InitialData, QuadratureRule
from respoles.schemas.run import Command, OutputFormat, RunConfig
from respoles.services.evolution_service import evolution_service


def simulation_setup(config: RunConfig) -> Tuple[QuadratureRule, InitialData, float, float]:
    """Rule, initial data (x = 1, phi = 1), step and snapped end time."""
    p, sim = config.params, config.sim
    rule = evolution_service.hermite_rule(sim.nodes, p)
    dt = p.tau / sim.dt_divisor
    end = sim.T
    if end is None:
        end = min(settings.DEFAULT_T, settings.RECURRENCE_FRACTION * evolution_service.recurrence_time(rule))
    steps = int(math.floor(end / dt + 1e-9))
    require(steps * dt >= p.tau, "end time must reach at least one delay", T=end, tau=p.tau)
    return rule, InitialData.constant(sim.dt_divisor), dt, steps * dt


@handles(Command.SIMULATE)
def run_simulate(config: RunConfig) -> None:
    rule, init, dt, end = simulation_setup(config)
    series = evolution_service.simulate_dde(config.params, rule, init, dt, end)
    if config.io.format == OutputFormat.JSON:
        emit(render_json(series), config.io.path)
        return
    header = params_header(config)
    header.update(nodes=rule.size, dt=dt, T=end)
    emit(render_csv(series_frame(series), header), config.io.path)


def simulate(
    k: options.K = None,
    tau: options.Tau = None,
    omega0: options.Omega0 = None,
    h: options.H = None,
    nodes: options.Nodes = None,
    dt_divisor: options.DtDivisor = None,
    T: options.EndTime = None,
    out: options.Out = None,
    format: options.Format = None,
    config: options.ConfigFile = None,
):
    """Integrate the delayed equation and write r(t)."""
    launch(
        Command.SIMULATE,
        dict(k=k, tau=tau, omega0=omega0, h=h, nodes=nodes, dt_divisor=dt_divisor, T=T,
             out=out, format=format, config=config),
    )

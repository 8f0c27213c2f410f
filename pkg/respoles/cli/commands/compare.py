import logging

import pandas as pd

from respoles.cli import options
from respoles.cli.commands.simulate import simulation_setup
from respoles.cli.output import emit, params_header, render_csv, render_json
from respoles.cli.runner import handles, launch
from respoles.core.config import settings
from respoles.schemas.evolution import CompareSummary
from respoles.schemas.run import Command, OutputFormat, RunConfig
from respoles.services.evolution_service import evolution_service
from respoles.services.pole_service import pole_service

logger = logging.getLogger(__name__)


@handles(Command.COMPARE)
def run_compare(config: RunConfig) -> None:
    p, sim = config.params, config.sim
    rule, init, dt, end = simulation_setup(config)
    simulated = evolution_service.simulate_dde(p, rule, init, dt, end)
    found = pole_service.find_poles(p, config.region, config.branches)
    rebuilt = evolution_service.expansion_reconstruct(found, init, p, simulated.grid, terms=sim.terms)

    t_lo = sim.window_start if sim.window_start is not None else 2.0 * p.tau
    t_hi = min(end, settings.RECURRENCE_FRACTION * evolution_service.recurrence_time(rule))
    fit = evolution_service.fit_decay_rate(simulated, (t_lo, t_hi), envelope=True)

    summary = CompareSummary(
        fitted_rate=fit.rate,
        fit_r2=fit.r2,
        window_lo=t_lo,
        window_hi=t_hi,
        poles=len(found),
        terms=min(len(found), sim.terms),
    )
    if found:
        leading = found[0].lam.real
        mask = simulated.window_mask(t_lo, t_hi)
        summary.leading_pole_re = leading
        summary.relative_gap = abs(fit.rate - leading) / abs(leading) if leading != 0 else None
        summary.l2_mismatch = evolution_service.relative_l2(rebuilt.values[mask], simulated.values[mask])
    logger.info("compare: fitted %.6g against leading pole %s", fit.rate, summary.leading_pole_re)

    summary_text = render_json(summary)
    if config.io.format == OutputFormat.JSON or config.io.path is None:
        emit(summary_text, config.io.path)
        return
    frame = pd.DataFrame(
        {
            "t": simulated.times,
            "sim_re": simulated.values.real,
            "sim_im": simulated.values.imag,
            "sim_abs": abs(simulated.values),
            "exp_re": rebuilt.values.real,
            "exp_im": rebuilt.values.imag,
            "exp_abs": abs(rebuilt.values),
        }
    )
    header = params_header(config)
    header.update(nodes=rule.size, dt=dt, T=end)
    emit(render_csv(frame, header), config.io.path)
    emit(summary_text, config.io.path.with_suffix(".summary.json"))
    emit(summary_text, None)


def compare(
    k: options.K = None,
    tau: options.Tau = None,
    omega0: options.Omega0 = None,
    h: options.H = None,
    region: options.Region = None,
    branches: options.Branches = None,
    nodes: options.Nodes = None,
    dt_divisor: options.DtDivisor = None,
    T: options.EndTime = None,
    terms: options.Terms = None,
    window_start: options.WindowStart = None,
    out: options.Out = None,
    format: options.Format = None,
    config: options.ConfigFile = None,
):
    """Simulate, reconstruct from poles and summarize the agreement."""
    launch(
        Command.COMPARE,
        dict(k=k, tau=tau, omega0=omega0, h=h, region=region, branches=branches, nodes=nodes,
             dt_divisor=dt_divisor, T=T, terms=terms, window_start=window_start,
             out=out, format=format, config=config),
    )

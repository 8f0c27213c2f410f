
from respoles.cli import options
from respoles.cli.commands.simulate import simulation_setup
from respoles.cli.output import emit, params_header, render_csv, render_json, series_frame
from respoles.cli.runner import handles, launch
from respoles.schemas.evolution import TimeGrid
from respoles.schemas.run import Command, OutputFormat, RunConfig
from respoles.services.evolution_service import evolution_service
from respoles.services.pole_service import pole_service


@handles(Command.EXPANSION)
def run_expansion(config: RunConfig) -> None:
    p = config.params
    _, init, dt, end = simulation_setup(config)
    found = pole_service.find_poles(p, config.region, config.branches)
    grid = TimeGrid(t0=0.0, dt=dt, n=int(round(end / dt)) + 1)
    series = evolution_service.expansion_reconstruct(found, init, p, grid, terms=config.sim.terms)
    if config.io.format == OutputFormat.JSON:
        emit(render_json(series), config.io.path)
        return
    header = params_header(config)
    header.update(poles=len(found), terms=min(len(found), config.sim.terms), dt=dt, T=end)
    emit(render_csv(series_frame(series), header), config.io.path)


def expansion(
    k: options.K = None,
    tau: options.Tau = None,
    omega0: options.Omega0 = None,
    h: options.H = None,
    region: options.Region = None,
    branches: options.Branches = None,
    dt_divisor: options.DtDivisor = None,
    T: options.EndTime = None,
    terms: options.Terms = None,
    out: options.Out = None,
    format: options.Format = None,
    config: options.ConfigFile = None,
):
    """Reconstruct r(t) from the leading poles."""
    launch(
        Command.EXPANSION,
        dict(k=k, tau=tau, omega0=omega0, h=h, region=region, branches=branches,
             dt_divisor=dt_divisor, T=T, terms=terms, out=out, format=format, config=config),
    )

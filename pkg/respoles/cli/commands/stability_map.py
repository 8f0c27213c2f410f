import numpy as np
import pandas as pd

from respoles.cli import options
from respoles.cli.output import emit, render_csv, render_json
from respoles.cli.runner import handles, launch
from respoles.schemas.run import Command, OutputFormat, RunConfig
from respoles.services.stability_service import stability_service


@handles(Command.STABILITY_MAP)
def run_stability_map(config: RunConfig) -> None:
    grid = config.grid
    taus = np.linspace(grid.tau_min, grid.tau_max, grid.tau_count)
    ks = np.linspace(grid.k_min, grid.k_max, grid.k_count)
    result = stability_service.stability_map(taus, ks, config.params.omega0, grid.mode, jobs=config.jobs)
    if config.io.format == OutputFormat.JSON:
        emit(render_json(result), config.io.path)
        return
    cells = result.cells()
    frame = pd.DataFrame(
        {
            "tau": [cell.tau for cell in cells],
            "k": [cell.k for cell in cells],
            "stable": [str(cell.verdict.stable).lower() for cell in cells],
            "rule": [cell.verdict.rule.value for cell in cells],
            "margin": [cell.verdict.margin for cell in cells],
        }
    )
    header = {"omega0": config.params.omega0, "mode": grid.mode.value}
    emit(render_csv(frame, header), config.io.path)


def stability_map(
    omega0: options.Omega0 = None,
    tau_grid: options.TauGrid = None,
    k_grid: options.KGrid = None,
    mode: options.Mode = None,
    jobs: options.Jobs = None,
    out: options.Out = None,
    format: options.Format = None,
    config: options.ConfigFile = None,
):
    """Stable/unstable verdict on a (tau, k) grid."""
    launch(
        Command.STABILITY_MAP,
        dict(omega0=omega0, tau_grid=tau_grid, k_grid=k_grid, mode=mode, jobs=jobs,
             out=out, format=format, config=config),
    )

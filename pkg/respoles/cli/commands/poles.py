import pandas as pd

from respoles.cli import options
from respoles.cli.output import emit, params_header, render_csv, render_json
from respoles.cli.runner import handles, launch
from respoles.schemas.poles import PoleTable
from respoles.schemas.run import Command, OutputFormat, RunConfig
from respoles.services.pole_service import pole_service


def pole_frame(table: PoleTable) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "lambda_re": [q.lam.real for q in table.poles],
            "lambda_im": [q.lam.imag for q in table.poles],
            "residue_re": [q.residue.real for q in table.poles],
            "residue_im": [q.residue.imag for q in table.poles],
            "seed_branch": pd.array([q.seed_branch for q in table.poles], dtype="Int64"),
            "residual": [q.final_residual for q in table.poles],
        }
    )


@handles(Command.POLES)
def run_poles(config: RunConfig) -> None:
    found = pole_service.find_poles(config.params, config.region, config.branches)
    table = PoleTable(params=config.params, region=config.region, count=len(found), poles=found)
    if config.io.format == OutputFormat.JSON:
        emit(render_json(table), config.io.path)
        return
    box = config.region
    header = params_header(config)
    header["region"] = f"{box.re_min:.17g}:{box.re_max:.17g}:{box.im_min:.17g}:{box.im_max:.17g}"
    header["count"] = table.count
    emit(render_csv(pole_frame(table), header), config.io.path)


def poles(
    k: options.K = None,
    tau: options.Tau = None,
    omega0: options.Omega0 = None,
    h: options.H = None,
    region: options.Region = None,
    branches: options.Branches = None,
    out: options.Out = None,
    format: options.Format = None,
    config: options.ConfigFile = None,
):
    """Locate resonance poles and their residues in a region."""
    launch(
        Command.POLES,
        dict(k=k, tau=tau, omega0=omega0, h=h, region=region, branches=branches,
             out=out, format=format, config=config),
    )

from respoles.cli import options
from respoles.cli.output import emit, render_json
from respoles.cli.runner import handles, launch
from respoles.schemas.run import Command, OutputFormat, RunConfig
from respoles.schemas.stability import CriticalCoupling
from respoles.services.stability_service import stability_service


@handles(Command.KC)
def run_kc(config: RunConfig) -> None:
    p = config.params
    k_c = stability_service.critical_coupling(p.tau, p.omega0)
    if config.io.format == OutputFormat.JSON:
        k_minus, k_plus = stability_service.critical_coupling_pair(p.tau, p.omega0)
        result = CriticalCoupling(tau=p.tau, omega0=p.omega0, k_c=k_c, k_minus=k_minus, k_plus=k_plus)
        emit(render_json(result), config.io.path)
    else:
        emit(f"{k_c:.17g}\n", config.io.path)


def kc(
    tau: options.Tau = None,
    omega0: options.Omega0 = None,
    out: options.Out = None,
    format: options.Format = None,
    config: options.ConfigFile = None,
):
    """Print the critical coupling k_c(tau, omega0)."""
    launch(Command.KC, dict(tau=tau, omega0=omega0, out=out, format=format, config=config))

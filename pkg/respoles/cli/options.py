from pathlib import Path
from typing import Annotated, Optional

import typer

from respoles.schemas.run import OutputFormat
from respoles.schemas.stability import StabilityMode

K = Annotated[Optional[str], typer.Option("--k", help="Coupling; absolute or relative such as 0.8kc")]
Tau = Annotated[Optional[str], typer.Option("--tau", help="Delay")]
Omega0 = Annotated[Optional[str], typer.Option("--omega0", help="Mean frequency; accepts forms like pi/2")]
H = Annotated[Optional[float], typer.Option("--h", help="Gaussian concentration")]
Region = Annotated[Optional[str], typer.Option("--region", help="re_min:re_max:im_min:im_max")]
Branches = Annotated[Optional[str], typer.Option("--branches", help="Lambert branch range n_lo:n_hi")]
Nodes = Annotated[Optional[int], typer.Option("--nodes", help="Gauss-Hermite node count")]
DtDivisor = Annotated[Optional[int], typer.Option("--dt-divisor", help="Steps per delay interval")]
EndTime = Annotated[Optional[float], typer.Option("--T", help="End time of the simulation")]
Terms = Annotated[Optional[int], typer.Option("--terms", help="Poles kept in the reconstruction")]
WindowStart = Annotated[Optional[float], typer.Option("--window-start", help="Comparison window start (default 2 tau)")]
Out = Annotated[Optional[Path], typer.Option("--out", help="Output path; standard output when absent")]
Format = Annotated[Optional[OutputFormat], typer.Option("--format", help="csv or json")]
Jobs = Annotated[Optional[int], typer.Option("--jobs", help="Worker processes; -1 uses every processor")]
TauGrid = Annotated[Optional[str], typer.Option("--tau-grid", help="start:stop:count")]
KGrid = Annotated[Optional[str], typer.Option("--k-grid", help="start:stop:count")]
Mode = Annotated[Optional[StabilityMode], typer.Option("--mode", help="closed_form, nishi or lambert")]
ConfigFile = Annotated[Optional[Path], typer.Option("--config", help="JSON file mirroring the flags")]

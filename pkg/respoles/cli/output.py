import io
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd
import typer
from pydantic import BaseModel

from respoles.schemas.evolution import TimeSeries
from respoles.schemas.run import RunConfig

FLOAT_FORMAT = "%.17g"


def _format(value: Any) -> str:
    if isinstance(value, float):
        return FLOAT_FORMAT % value
    return str(value)


def render_csv(frame: pd.DataFrame, header: Optional[Dict[str, Any]] = None) -> str:
    """CSV text with ``# key = value`` header lines and 17 significant digits."""
    buffer = io.StringIO()
    for key, value in (header or {}).items():
        if value is not None:
            buffer.write(f"# {key} = {_format(value)}\n")
    frame.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return buffer.getvalue()


def render_json(model: BaseModel) -> str:
    return model.model_dump_json(by_alias=True, indent=2) + "\n"


def emit(text: str, path: Optional[Path]) -> None:
    if path is None:
        typer.echo(text, nl=False)
        return
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def params_header(config: RunConfig) -> Dict[str, Any]:
    p = config.params
    return {
        "k": p.k,
        "k_over_kc": config.k_relative,
        "tau": p.tau,
        "omega0": p.omega0,
        "h": p.h,
    }


def series_frame(series: TimeSeries) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "t": series.times,
            "re_r": series.values.real,
            "im_r": series.values.imag,
            "abs_r": np.abs(series.values),
        }
    )

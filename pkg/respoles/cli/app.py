import typer

from respoles.cli.commands import compare, expansion, kc, poles, simulate, stability_map

app = typer.Typer(
    name="respoles",
    help="Resonance poles, stability charts and order-parameter decay for the delayed Kuramoto model.",
    add_completion=False,
    no_args_is_help=True,
)
app.command("poles")(poles.poles)
app.command("kc")(kc.kc)
app.command("stability-map")(stability_map.stability_map)
app.command("simulate")(simulate.simulate)
app.command("compare")(compare.compare)
app.command("expansion")(expansion.expansion)

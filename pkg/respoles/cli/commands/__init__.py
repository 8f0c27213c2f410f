from respoles.cli.commands import compare, expansion, kc, poles, simulate, stability_map

__all__ = ["compare", "expansion", "kc", "poles", "simulate", "stability_map"]

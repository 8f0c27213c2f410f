import logging
from typing import Any, Callable, Dict

import typer
from pydantic import ValidationError
from rich.console import Console

from respoles.core.config import settings
from respoles.core.exceptions import RespolesError
from respoles.core.logging import configure_logging
from respoles.schemas.run import Command, RunConfig

logger = logging.getLogger(__name__)
err_console = Console(stderr=True)

Handler = Callable[[RunConfig], None]
HANDLERS: Dict[Command, Handler] = {}


def handles(command: Command) -> Callable[[Handler], Handler]:
    def register(func: Handler) -> Handler:
        HANDLERS[command] = func
        return func

    return register


def _report(name: str, message: str) -> None:
    err_console.print(f"[bold red]{name}[/bold red]: {message}", highlight=False)


def run(config: RunConfig) -> int:
    """Execute one validated command; returns the process exit status."""
    import respoles.cli.commands  # noqa: F401  registers the handlers

    handler = HANDLERS[config.command]
    try:
        handler(config)
    except RespolesError as exc:
        logger.debug("command %s failed", config.command.value, exc_info=True)
        _report(exc.name, str(exc))
        return exc.exit_code
    return 0


def launch(command: Command, options: Dict[str, Any]) -> None:
    """Validate merged options, run the command and exit with its status."""
    from respoles.cli.dependencies import build_run_config, merge_options

    configure_logging(settings.LOG)
    try:
        config = build_run_config(command, merge_options(options.pop("config", None), **options))
    except RespolesError as exc:
        _report(exc.name, str(exc))
        raise typer.Exit(code=exc.exit_code)
    except ValidationError as exc:
        _report("InvalidParameter", str(exc))
        raise typer.Exit(code=2)
    raise typer.Exit(code=run(config))

from typing import Any, Dict, Sequence, Tuple
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table
import logging

# Logs and tables go to stderr so stdout stays machine readable
console: Console = Console(stderr=True)

# name -> (stdlib level, markup template)
MESSAGE_STYLES: Dict[str, Tuple[int, str]] = {
    "debug": (logging.DEBUG, "[dim]{}[/dim]"),
    "info": (logging.INFO, "[blue]{}[/blue]"),
    "step": (logging.INFO, "[cyan]→[/cyan] {}"),
    "success": (logging.INFO, "[green]✓[/green] {}"),
    "warning": (logging.WARNING, "[yellow]⚠[/yellow] {}"),
    "error": (logging.ERROR, "[red]✗[/red] {}"),
    "critical": (logging.CRITICAL, "[bold red]💥 {}[/bold red]"),
}


class ChaosCompLogger:
    """
    Rich-backed logger for ChaosComp.

    Every level has its own markup so a run reads as a sequence of steps,
    results and problems. Numeric reports are printed as Rich tables.
    """

    LEVELS: Dict[str, int] = {
        "DEBUG": logging.DEBUG,
        "INFO": logging.INFO,
        "WARNING": logging.WARNING,
        "ERROR": logging.ERROR,
        "CRITICAL": logging.CRITICAL,
    }

    def __init__(self, name: str = "chaoscomp") -> None:
        self.name: str = name
        self.console: Console = console
        self._level: int = logging.INFO
        self._logger: logging.Logger = logging.getLogger(name)
        self._configure()

    def _configure(self) -> None:
        """Attach a single RichHandler to the named logger."""
        self._logger.setLevel(self._level)
        self._logger.propagate = False
        self._logger.handlers.clear()

        handler: RichHandler = RichHandler(
            console=self.console,
            show_time=True,
            show_path=False,
            markup=True,
            rich_tracebacks=True,
            tracebacks_show_locals=False,
        )
        handler.setFormatter(logging.Formatter(fmt="%(message)s", datefmt="[%X]"))
        self._logger.addHandler(handler)

    @property
    def level(self) -> int:
        return self._level

    def setLevel(self, level: str) -> None:
        """Set the logging level by name; unknown names are ignored."""
        if level.upper() in self.LEVELS:
            self._level = self.LEVELS[level.upper()]
            self._logger.setLevel(self._level)

    def _emit(self, style: str, message: str, **kwargs: Any) -> None:
        level, template = MESSAGE_STYLES[style]
        # Attribute records to the caller of debug()/info()/..., not to this module
        kwargs["stacklevel"] = kwargs.get("stacklevel", 1) + 2
        self._logger.log(level, template.format(message), **kwargs)

    def debug(self, message: str, **kwargs: Any) -> None:
        self._emit("debug", message, **kwargs)

    def info(self, message: str, **kwargs: Any) -> None:
        self._emit("info", message, **kwargs)

    def step(self, message: str, **kwargs: Any) -> None:
        self._emit("step", message, **kwargs)

    def success(self, message: str, **kwargs: Any) -> None:
        self._emit("success", message, **kwargs)

    def warning(self, message: str, **kwargs: Any) -> None:
        self._emit("warning", message, **kwargs)

    def error(self, message: str, **kwargs: Any) -> None:
        self._emit("error", message, **kwargs)

    def critical(self, message: str, **kwargs: Any) -> None:
        self._emit("critical", message, **kwargs)

    def print(self, *args: Any, **kwargs: Any) -> None:
        """Print renderables straight to the log console."""
        self.console.print(*args, **kwargs)

    def print_table(
        self,
        title: str,
        columns: Sequence[str],
        rows: Sequence[Sequence[Any]],
        **kwargs: Any,
    ) -> None:
        """Render rows as a Rich table; floats are shown with four decimals."""
        table = Table(title=title, header_style="bold blue", **kwargs)
        for column in columns:
            table.add_column(column)
        for row in rows:
            table.add_row(*(f"{cell:.4f}" if isinstance(cell, float) else str(cell) for cell in row))
        self.console.print(table)


# Initialize the global logger instance
logger: ChaosCompLogger = ChaosCompLogger()

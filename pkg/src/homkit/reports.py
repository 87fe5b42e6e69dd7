"""
Reports and the Rich rendering layer for homkit.

Every executed command yields one Report. Reports render either as Rich
panels on the terminal or as one JSON envelope with sorted keys, so runs
with the same seed produce byte-identical output.
"""

import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from rich.console import Console
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from config import SCHEMA_VERSION, Config
from polynomials import NEG_INF

console = Console()
err_console = Console(stderr=True)


def jsonable(value):
    """Plain JSON data: NEG_INF becomes '-inf', rationals 'a/b', tuples lists."""
    if value is NEG_INF:
        return "-inf"
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return str(value)


@dataclass
class Report:
    """The outcome of one command."""

    command: str
    line: int
    column: int
    result: dict = field(default_factory=dict)
    text: str = ""
    error: Optional[str] = None
    error_type: Optional[str] = None
    elapsed: float = 0.0
    engine: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_json(self, include_timing: bool = False) -> dict:
        out = {
            "command": self.command,
            "position": [self.line, self.column],
            "ok": self.ok,
            "engine": self.engine,
        }
        if self.ok:
            out["result"] = jsonable(self.result)
        else:
            out["error"] = {"type": self.error_type, "message": self.error}
        if include_timing:
            out["elapsed_seconds"] = round(self.elapsed, 6)
        return out


def reports_to_json(reports: list[Report], config: Config) -> str:
    """The versioned JSON envelope."""
    envelope = {
        "schema_version": SCHEMA_VERSION,
        "reports": [r.to_json(config.include_timing) for r in reports],
    }
    return json.dumps(envelope, sort_keys=True, indent=2)


class ReportUI:
    """Rich terminal output for reports, help and configuration."""

    def __init__(self, config: Config):
        self.config = config

    # ── Reports ─────────────────────────────────────────────────

    def show_report(self, report: Report):
        if not report.ok:
            self.show_error(f"{escape(report.command)}: {escape(report.error)}")
            return
        if report.text:
            body = Text(report.text)
        else:
            body = Table(show_header=False, box=None, padding=(0, 1))
            body.add_column("Key", style="dim")
            body.add_column("Value", style="bold")
            for key, val in sorted(jsonable(report.result).items()):
                body.add_row(key, escape(json.dumps(val) if isinstance(val, (list, dict)) else str(val)))
        subtitle = f"[dim]{report.elapsed:.3f}s[/dim]" if self.config.include_timing else None
        console.print(
            Panel(
                body,
                title=f"[bold bright_cyan]{escape(report.command)}[/bold bright_cyan]",
                subtitle=subtitle,
                border_style="bright_cyan",
            )
        )

    def show_reports(self, reports: list[Report]):
        if self.config.json_output:
            # raw write: no Rich markup or line wrapping in JSON
            sys.stdout.write(reports_to_json(reports, self.config) + "\n")
            return
        for report in reports:
            self.show_report(report)

    # ── Messages ────────────────────────────────────────────────

    def show_error(self, message: str):
        """Display an error message."""
        err_console.print(f"[bold red]✗ Error:[/bold red] {message}")

    def show_success(self, message: str):
        console.print(f"[bold green]✓ {message}[/bold green]")

    def show_help(self, commands: dict[str, str]):
        """Display the command table."""
        table = Table(
            title="Script commands",
            show_header=True,
            header_style="bold bright_cyan",
            border_style="dim",
        )
        table.add_column("Command", style="bold")
        table.add_column("Description")
        for usage, desc in commands.items():
            table.add_row(escape(usage), desc)
        console.print(table)

    def show_info(self, config: Config):
        """Display the resolved configuration."""
        info_table = Table(show_header=False, box=None, padding=(0, 1))
        info_table.add_column("Key", style="dim")
        info_table.add_column("Value", style="bold")
        for key, val in config.to_dict().items():
            if key == "profile_name":
                continue
            info_table.add_row(key, str(val))

        panel = Panel(
            info_table,
            title=f"[bold]Profile: {config.profile_name}[/bold]",
            border_style="bright_cyan",
        )
        console.print(panel)

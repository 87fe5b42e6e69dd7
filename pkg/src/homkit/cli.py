#!/usr/bin/env python3
"""
homkit: graded commutative algebra from the command line.

Runs scripts of ring, ideal and module declarations followed by commands,
and prints one report per command as Rich panels or as JSON.
"""

import logging
import sys
from pathlib import Path
from typing import Optional

import typer
from rich.logging import RichHandler

from commands import COMMAND_HELP, run
from config import CONFIG_FILE, Config, create_default_config, list_profiles, load_config, parse_window
from errors import ScriptError
from reports import ReportUI, err_console
from script import parse_script

app = typer.Typer(
    name="homkit",
    help="∂ homkit — graded commutative algebra and sheaf cohomology scripts.",
    add_completion=False,
    no_args_is_help=True,
)

EXIT_OK = 0
EXIT_ENGINE = 1
EXIT_SCRIPT = 2


def _setup_logging(level: str):
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


def _read_source(path: Optional[Path]) -> str:
    if path is None or str(path) == "-":
        return sys.stdin.read()
    return path.read_text()


def _load(profile: Optional[str], overrides: dict) -> Config:
    create_default_config()
    config = load_config(profile=profile, cli_overrides=overrides)
    _setup_logging(config.log_level)
    return config


# ── Run Command ────────────────────────────────────────────────


@app.command("run")
def run_script(
    script: Optional[Path] = typer.Argument(
        None,
        help="Script file ('-' or omitted reads stdin)",
    ),
    json_output: Optional[bool] = typer.Option(
        None, "--json/--no-json",
        help="Print one JSON envelope instead of panels",
    ),
    seed: Optional[int] = typer.Option(
        None, "--seed",
        help="Seed for randomized certificates and generic points",
    ),
    power_cap: Optional[int] = typer.Option(
        None, "--power-cap",
        help="Largest power tried by Ext-limits",
    ),
    window: Optional[str] = typer.Option(
        None, "--window",
        help="Default degree window, lo:hi",
    ),
    continue_on_error: Optional[bool] = typer.Option(
        None, "--continue-on-error/--stop-on-error",
        help="Keep running after a failing command",
    ),
    timing: Optional[bool] = typer.Option(
        None, "--timing/--no-timing",
        help="Include elapsed seconds in reports",
    ),
    workers: Optional[int] = typer.Option(
        None, "--workers",
        help="Threads for par blocks and fiber sampling",
    ),
    log_level: Optional[str] = typer.Option(
        None, "--log-level",
        help="DEBUG, INFO, WARNING or ERROR (stderr)",
    ),
    profile: Optional[str] = typer.Option(
        None, "--profile", "-p",
        help="Named profile from config file",
    ),
):
    """Execute a script and print its reports."""
    overrides = {
        "json_output": json_output,
        "seed": seed,
        "power_cap": power_cap,
        "continue_on_error": continue_on_error,
        "include_timing": timing,
        "workers": workers,
        "log_level": log_level.upper() if log_level else None,
    }
    if window is not None:
        try:
            overrides["window"] = parse_window(window)
        except ValueError as e:
            raise typer.BadParameter(str(e), param_hint="--window")

    config = _load(profile, overrides)
    ui = ReportUI(config)

    try:
        parsed = parse_script(_read_source(script))
    except ScriptError as e:
        ui.show_error(str(e))
        raise typer.Exit(code=EXIT_SCRIPT)
    except OSError as e:
        ui.show_error(f"cannot read {script}: {e}")
        raise typer.Exit(code=EXIT_SCRIPT)

    reports = run(parsed, config)
    ui.show_reports(reports)
    if any(not r.ok for r in reports):
        raise typer.Exit(code=EXIT_ENGINE)


# ── Check Command ──────────────────────────────────────────────


@app.command("check")
def check_script(
    script: Optional[Path] = typer.Argument(None, help="Script file ('-' or omitted reads stdin)"),
):
    """Parse and resolve a script without running it; print the canonical form."""
    ui = ReportUI(Config())
    try:
        parsed = parse_script(_read_source(script))
    except ScriptError as e:
        ui.show_error(str(e))
        raise typer.Exit(code=EXIT_SCRIPT)
    typer.echo(parsed.format(), nl=False)


# ── Help Command ───────────────────────────────────────────────


@app.command("commands")
def show_commands():
    """List the script commands."""
    ReportUI(Config()).show_help(COMMAND_HELP)


# ── Config Management Command ──────────────────────────────────


@app.command("config")
def show_config(
    profile: Optional[str] = typer.Option(
        None, "--profile", "-p",
        help="Show a specific profile",
    ),
    init: bool = typer.Option(
        False, "--init",
        help="Create default config file",
    ),
):
    """Show or initialize configuration."""
    if init:
        path = create_default_config()
        ReportUI(Config()).show_success(f"Config file: {path}")
        return

    config = load_config(profile=profile)
    ReportUI(config).show_info(config)

    typer.echo(f"\nConfig file: {CONFIG_FILE}")

    profiles = list_profiles()
    if profiles:
        typer.echo(f"Available profiles: {', '.join(profiles.keys())}")


# ── Entry Point ────────────────────────────────────────────────

if __name__ == "__main__":
    app()

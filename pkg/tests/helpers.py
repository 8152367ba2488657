"""Helper functions for qetale tests."""

from __future__ import annotations

import subprocess
import sys
from pathlib import Path
from typing import Dict


def run_cli(
    *args: str,
    cwd: Path,
    env: Dict[str, str],
    timeout_s: int = 300,
) -> subprocess.CompletedProcess[str]:
    """Run ``python -m qetale`` with ``args`` as a subprocess.

    Args:
        args: Command line arguments after the program name
        cwd: Working directory for execution
        env: Environment variables
        timeout_s: Timeout in seconds (default 5 minutes)

    Returns:
        CompletedProcess with captured stdout/stderr

    Raises:
        subprocess.TimeoutExpired: If execution exceeds timeout
    """
    return subprocess.run(
        [sys.executable, "-m", "qetale", *args],
        cwd=cwd,
        env=env,
        capture_output=True,
        text=True,
        timeout=timeout_s,
    )


def describe(result: subprocess.CompletedProcess[str]) -> str:
    """Failure text with both output streams."""
    return (
        f"Command: {' '.join(map(str, result.args))}\n"
        f"Exit code: {result.returncode}\n"
        f"\n--- STDOUT ---\n{result.stdout}\n"
        f"\n--- STDERR ---\n{result.stderr}\n"
    )

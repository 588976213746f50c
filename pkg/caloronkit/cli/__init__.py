"""Command-line package for CaloronKit."""

from .commands import cmd_generate, cmd_compute, cmd_verify

__all__ = ["cmd_generate", "cmd_compute", "cmd_verify"]

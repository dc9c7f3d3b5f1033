"""
Batch command-line front-end
"""

from kgraph_toolkit.cli.main import cli, main

__all__ = ["cli", "main"]

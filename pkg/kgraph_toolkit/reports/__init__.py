"""
Solution files, CSV tables and key = value reports
"""

from kgraph_toolkit.reports.writers import (
    CONVERGENCE_COLUMNS,
    HOMOTOPY_COLUMNS,
    PROFILE_COLUMNS,
    SolutionHeader,
    coefficient_entries,
    format_value,
    hypothesis_entries,
    profile_table,
    read_solution,
    solution_header,
    write_convergence_csv,
    write_homotopy_csv,
    write_profile_csv,
    write_report,
    write_solution,
)

__all__ = [
    "CONVERGENCE_COLUMNS",
    "HOMOTOPY_COLUMNS",
    "PROFILE_COLUMNS",
    "SolutionHeader",
    "coefficient_entries",
    "format_value",
    "hypothesis_entries",
    "profile_table",
    "read_solution",
    "solution_header",
    "write_convergence_csv",
    "write_homotopy_csv",
    "write_profile_csv",
    "write_report",
    "write_solution",
]

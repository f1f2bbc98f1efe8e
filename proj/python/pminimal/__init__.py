"""Cell decomposition, preparation and p-adic integration in one variable.

Rationals are passed and returned as strings such as "3/4". Cells are dicts
with keys center, lo, hi, lambda, n, matching the pmin JSON format.
"""

from ._pminimal import (
    Error,
    SyntaxError,
    ac,
    cell_measure,
    coset_reps,
    decompose,
    hensel_lift,
    igusa_zeta,
    integrate,
    is_nth_power,
    power_index,
    prepare,
    refine_by_coset,
    residue,
    run_cli,
    valuation,
)

__all__ = [
    "Error",
    "SyntaxError",
    "ac",
    "cell_measure",
    "coset_reps",
    "decompose",
    "hensel_lift",
    "igusa_zeta",
    "integrate",
    "is_nth_power",
    "power_index",
    "prepare",
    "refine_by_coset",
    "residue",
    "run_cli",
    "valuation",
]

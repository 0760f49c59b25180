"""Figure rendering for frequency-bin design results.

Reads the design CLI's JSON results, report bundles, and wavefunction/Fock
CSVs and lays them out as publication-style figures. No physics is
recomputed here.
"""

from .figures import save_figure, state_figure, sweep_figure
from .io import (
    FockSeries,
    InputError,
    StateRecord,
    SweepRecord,
    WavefunctionSeries,
    load_bundle,
    load_fock_csv,
    load_state,
    load_wavefunction_csv,
)

__version__ = "0.1.0"

__all__ = [
    "FockSeries",
    "InputError",
    "StateRecord",
    "SweepRecord",
    "WavefunctionSeries",
    "load_bundle",
    "load_fock_csv",
    "load_state",
    "load_wavefunction_csv",
    "save_figure",
    "state_figure",
    "sweep_figure",
    "__version__",
]

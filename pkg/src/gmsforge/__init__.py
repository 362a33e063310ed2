"""Synthesis and verification of circuits over global Molmer-Sorensen pulses."""

__version__ = "0.1.0"

from .circuit import (Circuit, CostReport, Exponential, Gate, PerPair,
                      PowerLawSum, SchemaError, Uniform, cnot, cp, deserialize,
                      empty, gms, global_phase, h, rx, ry, rz, serialize, xx)

__all__ = [
    "Circuit", "CostReport", "Exponential", "Gate", "PerPair", "PowerLawSum",
    "SchemaError", "Uniform", "cnot", "cp", "deserialize", "empty", "gms",
    "global_phase", "h", "rx", "ry", "rz", "serialize", "xx", "__version__",
]

"""Dot-product spectra of point sets over prime fields.

Exact counting kernels (pair histograms, matching quadruples, paths,
triangle spectra, incidences) with brute-force oracles, and checks that
set each count against its bound from the finite-field literature.
"""
from .errors import BspecError
from .field import Field, char_eval, field_new
from .geometry import (
    BilinearForm,
    DirectionPartition,
    PointSet,
    Subspace2,
    bilinear_eval,
    direction_of,
    enumerate_2subspaces,
    is_nondegenerate,
    line_set,
    partition_by_directions,
    read_pointset,
    write_pointset,
)
from .engine import SpectrumTensor, WeightFunction, spectrum, tensor_stats

__version__ = "0.1.0"

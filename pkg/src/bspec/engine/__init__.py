from .backend import active as active_backend, default_threads, set_backend
from .counting import (
    DEFAULT_TABLE_BUDGET,
    IndependenceResult,
    Pruned,
    charsum_quadruple,
    dot_table,
    incidence_count,
    independence_search,
    pair_histogram,
    path_bruteforce,
    path_count,
    prune_heavy_zero,
    quadruple_bruteforce,
    quadruple_count,
    six_tuple_bruteforce,
    spectrum,
    spectrum_bruteforce,
    weighted_quadruple,
    weighted_quadruple_bruteforce,
    zero_degree_function,
)
from .tensor import SpectrumTensor, WeightFunction, tensor_stats

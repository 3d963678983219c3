"""Post-selected multi-qudit states from scattered bosons and fermions.

The compiled core works with flat coefficient vectors (d^N amplitudes,
row-major, first party most significant). The helpers here move between
that layout and numpy arrays of shape (d,) * N.
"""

import numpy as np

from ._core import (  # noqa: F401
    FockState,
    JacobianReport,
    MinorDecomposition,
    SetupSpec,
    SizeLimitError,
    Species,
    analytic_jacobian,
    boson_bound,
    combinatorial_bound,
    decompose,
    determinant,
    embed_unitary,
    evolve,
    fermion_bound,
    is_post_selected,
    kronecker,
    lossless_parameter_count,
    manifold_rank,
    minor_map_rank,
    named_device,
    permanent,
    principal_minors,
    reconstruct,
    reverse,
    setup_from_json,
    spanning_minors,
)
from . import _core


def _flat(tensor):
    arr = np.ascontiguousarray(tensor, dtype=np.complex128)
    return arr.reshape(-1), arr.shape


def _shaped(flat, d, N):
    return np.asarray(flat, dtype=np.complex128).reshape((d,) * N)


def coefficient_tensor(matrix, species, d, N, source_rows=()):
    """Post-selected coefficient tensor as an ndarray of shape (d,) * N."""
    flat = _core.coefficient_tensor(np.asarray(matrix, dtype=np.complex128), species, d, N,
                                    list(source_rows))
    return _shaped(flat, d, N)


def post_select(state, d, N):
    """(tensor ndarray, success probability) for the one-per-group outcomes."""
    flat, probability = _core.post_select(state, d, N)
    return _shaped(flat, d, N), probability


def tensor_to_fock(tensor):
    flat, shape = _flat(tensor)
    return _core.tensor_to_fock(flat, shape[0], len(shape))


def fock_to_tensor(state, d, N):
    return _shaped(_core.fock_to_tensor(state, d, N), d, N)


def conditional_state(tensor, fixed):
    """Project parties onto outcomes ({party: outcome}, 1-based) and renormalize."""
    flat, shape = _flat(tensor)
    out, probability = _core.conditional_state(flat, shape[0], len(shape), dict(fixed))
    return _shaped(out, shape[0], len(shape) - len(fixed)), probability


def canonical_phase(tensor):
    flat, shape = _flat(tensor)
    return _shaped(_core.canonical_phase(flat, shape[0], len(shape)), *_dims(shape))


def fidelity(a, b):
    fa, shape_a = _flat(a)
    fb, shape_b = _flat(b)
    if shape_a != shape_b:
        raise ValueError("tensor shapes differ")
    return _core.fidelity(fa, fb, *_dims(shape_a))


def detection_overlap(signal, matrix, target, species):
    fs, shape = _flat(signal)
    ft, _ = _flat(target)
    return _core.detection_overlap(fs, np.asarray(matrix, dtype=np.complex128), ft, species,
                                   *_dims(shape))


def bipartite_rank(tensor, partition, tolerance=1e-8):
    flat, shape = _flat(tensor)
    return _core.bipartite_rank(flat, *_dims(shape), list(partition), tolerance)


def max_bipartite_rank(tensor, tolerance=1e-8):
    flat, shape = _flat(tensor)
    rank, partition = _core.max_bipartite_rank(flat, *_dims(shape), tolerance)
    return rank, list(partition)


def permutation_representation(matrix, internal_states, species):
    perms, coefficients, flat = _core.permutation_representation(
        np.asarray(matrix, dtype=np.complex128),
        [np.asarray(s, dtype=np.complex128) for s in internal_states], species)
    d = len(internal_states[0])
    return perms, coefficients, _shaped(flat, d, len(internal_states))


def _dims(shape):
    return shape[0], len(shape)


__all__ = [name for name in dir() if not name.startswith("_")]

"""Pure-NumPy amplitude kernels (fallback backend).

State layout: 1-D complex128 array of length 2**n where bit q of the index
is qubit q. Viewed as shape (2,)*n, qubit q lives on axis n-1-q. Controlled
kernels slice out the matching stratum, so work scales with the number of
amplitudes actually touched.
"""
from __future__ import annotations

import math

import numpy as np

NAME = "python"

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def _nbits(state: np.ndarray) -> int:
    return int(state.size).bit_length() - 1


def _bit_positions(mask: int) -> list[int]:
    pos = []
    q = 0
    while mask:
        if mask & 1:
            pos.append(q)
        mask >>= 1
        q += 1
    return pos


def apply_h(state: np.ndarray, qubit: int, swapped: bool) -> None:
    """Hadamard on one qubit; ``swapped`` exchanges the basis roles
    (the X-conjugated form used under a flipped index frame)."""
    n = _nbits(state)
    view = state.reshape((2,) * n)
    ax = n - 1 - qubit
    idx0 = [slice(None)] * n
    idx1 = [slice(None)] * n
    idx0[ax], idx1[ax] = 0, 1
    i0, i1 = tuple(idx0), tuple(idx1)
    a = view[i0]
    b = view[i1]
    s = (a + b) * _INV_SQRT2
    d = (a - b) * _INV_SQRT2
    if swapped:
        view[i0] = -d
        view[i1] = s
    else:
        view[i0] = s
        view[i1] = d


def apply_mcx(state: np.ndarray, target_mask: int, ctrl_mask: int, ctrl_val: int) -> None:
    """NOT on every bit of ``target_mask`` within the stratum where the
    masked index bits equal ``ctrl_val``.

    Joint action pairs index s with s ^ target_mask; the lowest target bit
    anchors the pairing and the remaining target axes are reversed.
    """
    if target_mask == 0:
        return
    n = _nbits(state)
    view = state.reshape((2,) * n)
    targets = _bit_positions(target_mask)
    anchor, rest = targets[0], targets[1:]
    idx0 = [slice(None)] * n
    for q in _bit_positions(ctrl_mask):
        idx0[n - 1 - q] = (ctrl_val >> q) & 1
    idx1 = list(idx0)
    a_ax = n - 1 - anchor
    idx0[a_ax], idx1[a_ax] = 0, 1
    i0, i1 = tuple(idx0), tuple(idx1)
    if rest:
        kept = [ax for ax in range(n) if isinstance(idx0[ax], slice)]
        flip = tuple(kept.index(n - 1 - q) for q in rest)
        tmp = view[i0].copy()
        view[i0] = np.flip(view[i1], axis=flip)
        view[i1] = np.flip(tmp, axis=flip)
    else:
        tmp = view[i0].copy()
        view[i0] = view[i1]
        view[i1] = tmp


def apply_phase(state: np.ndarray, mask: int, val: int) -> None:
    """Negate amplitudes whose masked index bits equal ``val``."""
    n = _nbits(state)
    view = state.reshape((2,) * n)
    idx = [slice(None)] * n
    for q in _bit_positions(mask):
        idx[n - 1 - q] = (val >> q) & 1
    view[tuple(idx)] *= -1.0

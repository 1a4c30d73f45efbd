"""Hydrostatic reconstruction at cell interfaces.

The reconstructed interface values make the pressure part of the numerical
flux and the discretised source cancel exactly at rest (lake at rest for
shallow water, man at eternal rest for blood flow).
"""

from __future__ import annotations

import numpy as np

from .models import velocity


def reconstruct_sw(h_left, z_left, h_right, z_right):
    """Interface heights ``(h-, h+, z_face)`` with ``z_face = max(z_left, z_right)``.

    ``h + (z - z_face)`` is evaluated with the bottom difference first so that a
    flat bottom reproduces the cell heights bit for bit.
    """
    z_face = np.maximum(z_left, z_right)
    h_minus = np.maximum(0.0, h_left + (z_left - z_face))
    h_plus = np.maximum(0.0, h_right + (z_right - z_face))
    return h_minus, h_plus, z_face


def reconstruct_bf(a_left, a0_left, a_right, a0_right):
    """Interface sections ``(a-, a+, a0_face)`` preserving ``sqrt(a) - sqrt(a0)``.

    The face reference section is ``min(a0_left, a0_right)``. Where the
    reference is uniform the cell values are returned unchanged.
    """
    a_left = np.asarray(a_left, dtype=float)
    a_right = np.asarray(a_right, dtype=float)
    a0_left = np.broadcast_to(np.asarray(a0_left, dtype=float), a_left.shape)
    a0_right = np.broadcast_to(np.asarray(a0_right, dtype=float), a_right.shape)
    jump = np.sqrt(a0_right) - np.sqrt(a0_left)
    sa_minus = np.maximum(np.sqrt(a_left) + np.minimum(jump, 0.0), 0.0)
    sa_plus = np.maximum(np.sqrt(a_right) - np.maximum(jump, 0.0), 0.0)
    flat = jump == 0.0
    a_minus = np.where(flat, a_left, sa_minus * sa_minus)
    a_plus = np.where(flat, a_right, sa_plus * sa_plus)
    a0_face = np.where(flat, a0_left, np.minimum(a0_left, a0_right))
    return a_minus, a_plus, a0_face


def reconstruct(model, u1_left, u2_left, ref_left, u1_right, u2_right, ref_right):
    """Reconstructed left/right interface states and the face reference datum.

    Discharges are rebuilt from the interior velocities and the reconstructed
    heights (sections).
    """
    if model.kind == "shallow_water":
        m, p, ref_face = reconstruct_sw(u1_left, ref_left, u1_right, ref_right)
    else:
        m, p, ref_face = reconstruct_bf(u1_left, ref_left, u1_right, ref_right)
    # keep the original discharge where the height is untouched
    q_minus = np.where(m == u1_left, u2_left, m * velocity(u1_left, u2_left))
    q_plus = np.where(p == u1_right, u2_right, p * velocity(u1_right, u2_right))
    return m, q_minus, p, q_plus, ref_face


def source_contribution(model, u1_minus_right_face, ref_right_face, u1_plus_left_face, ref_left_face):
    """Cell source ``(0, P(u-_{i+1/2}) - P(u+_{i-1/2}))``.

    ``P`` is the pressure part of the momentum flux: ``g h^2/2`` for shallow
    water, ``pi(a)/rho`` for blood flow, evaluated with the face reference.
    The update uses ``dt/dx`` times this vector.
    """
    s = (model.pressure_flux(u1_minus_right_face, ref_right_face)
         - model.pressure_flux(u1_plus_left_face, ref_left_face))
    return np.zeros_like(s), s

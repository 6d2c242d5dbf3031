"""Semiclassical momentum-space eigenstates.

The classical weight, the two-branch interference ("primitive") form,
its forbidden-region tails and the turning-point-regular uniform
approximation, all sampled on the discrete momentum grid
p = -N, -N+2, ..., N and renormalized to unit sum there.
"""

from __future__ import annotations

import numpy as np

from . import actions as act
from .model import ModelParams
from .quad import turning_point_integral
from .quantum import MomentumWavefunction, momentum_grid
from .quantize import quantize_single


def _orbit_interval(params: ModelParams, E):
    """The single orbit's momentum range [(p-, branch), (p+, branch)]."""
    geo = act.turning_points(params, E)
    if geo.orbit_class == "double_well_pair":
        raise act.GeometryError(
            "two disconnected orbits at this energy; wavefunction forms "
            "are defined per single orbit"
        )
    tps = geo.turning_points
    if len(tps) < 2:
        raise act.GeometryError("no classical orbit at this energy")
    return tps[0], tps[-1], geo


def _bracket(params: ModelParams, E, p):
    """v^2 (Ns^2 - u^2) - (E - eps u - g (Ns^2 + u^2)/2)^2; positive on
    classically allowed momenta, where |dH/dq| = 2 sqrt(bracket)."""
    u = np.asarray(p, dtype=float) / params.hbar
    ns = params.Ns
    return params.v**2 * (ns**2 - u**2) - (
        E - params.eps * u - 0.5 * params.g * (ns**2 + u**2)
    ) ** 2


def _weight_norm(params: ModelParams, E):
    """Normalization integral of bracket^(-1/2) over the allowed range:
    exactly the orbit period."""
    return act.period_direct(params, E, lobe="auto")


def classical_density(params: ModelParams, E, p):
    """Classical momentum distribution w(p) = C / sqrt(bracket), with C
    fixed by unit integral over the classically allowed range.

    Diverges at the turning points; that divergence integrates away and
    is cured pointwise by the uniform approximation.
    """
    lo, hi, _ = _orbit_interval(params, E)
    p = np.asarray(p, dtype=float)
    if np.any((p <= lo.p) | (p >= hi.p)):
        raise ValueError("momentum outside the classically allowed interval")
    val = 1.0 / (np.sqrt(_bracket(params, E, p)) * _weight_norm(params, E))
    return float(val) if val.ndim == 0 else val


def action_phase(params: ModelParams, E, p):
    """Half-phase S(p) accumulated from the lower turning point.

    With the lower turning point on the lower potential curve the local
    wavenumber is pi/2 - q, otherwise q; either way S grows from zero at
    p- and reaches the half-cycle phase at p+.
    """
    lo, hi, _ = _orbit_interval(params, E)
    p = float(p)
    if not lo.p <= p <= hi.p:
        raise ValueError("momentum outside the classically allowed interval")
    if p == lo.p:
        return 0.0
    if lo.branch == "U-":
        f = lambda pp: 0.5 * np.pi - act._angle_allowed(params, E, pp)
    else:
        f = lambda pp: act._angle_allowed(params, E, pp)
    return float(turning_point_integral(f, lo.p, p, rtol=1e-11))


def _forbidden_action(params: ModelParams, E, p):
    """One-sided decay integral of |Im q| from the nearest turning point."""
    lo, hi, _ = _orbit_interval(params, E)
    p = float(p)
    if p < lo.p:
        a, b = p, lo.p
    elif p > hi.p:
        a, b = hi.p, p
    else:
        return 0.0
    return float(turning_point_integral(
        lambda pp: act._imag_angle(params, E, pp), a, b, rtol=1e-11))


def forbidden_tail(params: ModelParams, n, E, p):
    """|Psi|^2 in the classically forbidden region: half the (modulus of
    the) classical weight damped by twice the imaginary action."""
    w_norm = _weight_norm(params, E)
    p = float(p)
    br = _bracket(params, E, p)
    amp = 0.5 / (np.sqrt(abs(br)) * w_norm) if br != 0 else np.inf
    return float(amp * np.exp(-2.0 * _forbidden_action(params, E, p) / params.hbar))


def primitive_wavefunction(params: ModelParams, n, E=None) -> MomentumWavefunction:
    """Two-branch interference form 2 w(p) cos^2(S(p)/hbar - pi/4) on the
    allowed grid points, with decaying tails outside, renormalized to
    unit sum on the discrete grid."""
    if E is None:
        E = quantize_single(params, n)
    lo, hi, _ = _orbit_interval(params, E)
    grid = momentum_grid(params)
    vals = np.empty_like(grid)
    w_norm = _weight_norm(params, E)
    for i, lab in enumerate(grid):
        p = lab * params.hbar
        if lo.p < p < hi.p:
            w = 1.0 / (np.sqrt(_bracket(params, E, p)) * w_norm)
            s = action_phase(params, E, p)
            vals[i] = 2.0 * w * np.cos(s / params.hbar - 0.25 * np.pi) ** 2
        else:
            vals[i] = forbidden_tail(params, n, E, p)
    return MomentumWavefunction(grid=grid, values=vals / vals.sum(),
                                kind="primitive", state_index=int(n),
                                energy=float(E))


def hermite(n, x):
    """Physicists' Hermite polynomial by the three-term recurrence."""
    if n < 0 or int(n) != n:
        raise ValueError("order must be a nonnegative integer")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for k in range(1, int(n)):
        h, h_prev = 2.0 * x * h - 2.0 * k * h_prev, h
    return h if h.ndim else float(h)


def _ho_phase(xi, xi0):
    """Harmonic-oscillator phase integral from -xi0 to xi (allowed side)."""
    return 0.5 * xi * np.sqrt(max(xi0**2 - xi**2, 0.0)) + \
        0.5 * xi0**2 * (0.5 * np.pi + np.arcsin(np.clip(xi / xi0, -1.0, 1.0)))


def _ho_decay(xi, xi0):
    """Forbidden-side phase integral from xi0 to xi > xi0."""
    return 0.5 * xi * np.sqrt(max(xi**2 - xi0**2, 0.0)) - \
        0.5 * xi0**2 * np.arccosh(max(xi / xi0, 1.0))


def oscillator_coordinate(params: ModelParams, n, E, p):
    """Map a momentum to the harmonic-oscillator coordinate xi by
    matching accumulated phase; |xi| <= xi0 = sqrt(2n+1) on the allowed
    interval, continued through the decay integral outside it."""
    xi0 = np.sqrt(2.0 * n + 1.0)
    lo, hi, _ = _orbit_interval(params, E)
    p = float(p)
    if lo.p <= p <= hi.p:
        target = action_phase(params, E, p) / params.hbar
        if target < 0 or target > np.pi * xi0**2 / 2.0 + 1e-9:
            raise ValueError("phase outside the oscillator mapping range")
        a, b = -xi0, xi0
        for _ in range(100):
            mid = 0.5 * (a + b)
            if _ho_phase(mid, xi0) < target:
                a = mid
            else:
                b = mid
            if b - a < 1e-12:
                break
        return 0.5 * (a + b)
    # Forbidden side: match the decay integral, growing |xi| beyond xi0.
    target = _forbidden_action(params, E, p) / params.hbar
    sign = -1.0 if p < lo.p else 1.0
    a, b = xi0, xi0 + 1.0
    while _ho_decay(b, xi0) < target:
        b += 1.0
        if b > xi0 + 1e3:
            break
    for _ in range(100):
        mid = 0.5 * (a + b)
        if _ho_decay(mid, xi0) < target:
            a = mid
        else:
            b = mid
        if b - a < 1e-12:
            break
    return sign * 0.5 * (a + b)


def uniform_wavefunction(params: ModelParams, n, E=None) -> MomentumWavefunction:
    """Turning-point-regular form |w(p) sqrt(2n+1-xi^2)| H_n(xi)^2 e^(-xi^2),
    for orbits whose turning points both lie on the lower potential curve.

    Other turning-point geometries are not supported here; callers fall
    back to the primitive form with tails.
    """
    if E is None:
        E = quantize_single(params, n)
    lo, hi, geo = _orbit_interval(params, E)
    if not (lo.branch == "U-" and hi.branch == "U-"):
        raise act.GeometryError(
            "uniform approximation implemented only for orbits with both "
            "turning points on the lower potential curve"
        )
    xi0sq = 2.0 * n + 1.0
    grid = momentum_grid(params)
    vals = np.empty_like(grid)
    w_norm = _weight_norm(params, E)
    pscale = params.p_max
    for i, lab in enumerate(grid):
        p = lab * params.hbar
        # Nudge off a turning point, where weight and envelope separately
        # blow up / vanish; the product stays finite either side.
        if min(abs(p - lo.p), abs(p - hi.p)) < 1e-9 * pscale:
            p += 1e-6 * pscale * (1.0 if abs(p - lo.p) < abs(p - hi.p) else -1.0)
        xi = oscillator_coordinate(params, n, E, p)
        w = 1.0 / (np.sqrt(abs(_bracket(params, E, p))) * w_norm)
        envelope = abs(w * np.sqrt(abs(xi0sq - xi * xi)))
        vals[i] = envelope * hermite(n, xi) ** 2 * np.exp(-xi * xi)
    return MomentumWavefunction(grid=grid, values=vals / vals.sum(),
                                kind="uniform", state_index=int(n),
                                energy=float(E))

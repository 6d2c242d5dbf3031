"""Classical action machinery: turning points, orbit areas, periods and
the barrier integrals entering the double-well quantization condition.

Everything is built on one primitive: the width in the angle coordinate
of the sublevel set {H(p,q) <= E} at fixed momentum, which is
pi - 2*q(p,E) on classically allowed momenta, pi where E exceeds the
upper momentum potential and zero in forbidden strips.  The action S(E)
is the area of the sublevel set; orbit-type case formulas are just this
integral split at the turning points.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .meanfield import fixed_points
from .model import ModelParams
from .quad import turning_point_integral
from .roots import quartic_roots
from .special import arg_gamma_half_line


class GeometryError(ValueError):
    """Raised when an operation is applied to an unsupported orbit shape."""


class SeparatrixError(ValueError):
    """Raised for energies inside the guard band around the barrier top."""


# ---------------------------------------------------------------------------
# angle coordinate


def _cos2q(params: ModelParams, E, p):
    """X = cos(2q) along the energy contour, complex-safe."""
    u = np.asarray(p) / params.hbar
    ns = params.Ns
    root = np.sqrt((ns**2 - u**2).astype(complex)) if np.iscomplexobj(u) else \
        np.sqrt(np.maximum(ns**2 - u**2, 0.0))
    num = E - params.eps * u - 0.5 * params.g * (ns**2 + u**2)
    with np.errstate(divide="ignore", invalid="ignore"):
        return num / (params.v * root)


def orbit_angle(params: ModelParams, E, p):
    """Angle q(p, E) solving H(p, q) = E, with q in [0, pi/2] on allowed
    momenta and the decaying complex continuation (Im q >= 0) on
    forbidden ones."""
    u = np.asarray(p, dtype=complex) / params.hbar
    if np.any(np.abs(u.real) >= params.Ns) and not np.iscomplexobj(np.asarray(p)):
        raise ValueError("momentum on or outside the phase-space rim")
    x = _cos2q(params, E, np.asarray(p, dtype=complex))
    q = 0.5 * np.arccos(x)
    q = np.where(q.imag < 0, np.conj(q), q)
    if q.ndim == 0:
        q = complex(q)
        return q.real if q.imag == 0 else q
    return q


def _angle_allowed(params, E, p):
    """Real q on allowed momenta; clips roundoff excursions of |X|."""
    x = np.clip(np.real(_cos2q(params, E, p)), -1.0, 1.0)
    return 0.5 * np.arccos(x)


def _imag_angle(params, E, p):
    """|Im q| on forbidden momenta (zero on allowed ones)."""
    x = np.real(_cos2q(params, E, p))
    ax = np.maximum(np.abs(x), 1.0)
    return 0.5 * np.arccosh(ax)


# ---------------------------------------------------------------------------
# turning points and segment decomposition


@dataclass(frozen=True)
class TurningPoint:
    p: float
    branch: str  # "U-" or "U+"


@dataclass(frozen=True)
class OrbitGeometry:
    energy: float
    turning_points: tuple
    orbit_class: str | None   # min_encircling | max_encircling | rotor | double_well_pair
    region: str                # I | II | III | single
    diagnostic: str | None = None


@lru_cache(maxsize=128)
def _context(params: ModelParams):
    """Fixed-point derived energy landmarks, cached per parameter set."""
    fps = fixed_points(params)
    minima = [f for f in fps if f.kind == "minimum"]
    maxima = [f for f in fps if f.kind == "maximum"]
    saddles = [f for f in fps if f.kind == "saddle"]
    if not minima or not maxima:
        raise GeometryError("phase space lacks a minimum/maximum pair")
    return {
        "fps": fps,
        "e_min": min(f.energy for f in minima),
        "e_max": max(f.energy for f in maxima),
        "e_upper_min": max(f.energy for f in minima),
        "saddle": saddles[0] if saddles else None,
    }


def classical_range(params: ModelParams):
    ctx = _context(params)
    return ctx["e_min"], ctx["e_max"]


def _turning_quartic(params: ModelParams, E):
    """Coefficients (quartic, highest first) whose roots in s = p/(hbar*Ns)
    solve [A - eps*s - (G/2) s^2]^2 = v^2 (1 - s^2)."""
    ns = params.Ns
    G = params.g * ns
    A = E / ns - 0.5 * G
    eps, v = params.eps, params.v
    return (
        0.25 * G * G,
        eps * G,
        eps * eps - A * G + v * v,
        -2.0 * A * eps,
        A * A - v * v,
    )


def _speed_bracket(params: ModelParams, E):
    """Factored evaluator of B(p) = v^2 (Ns^2 - u^2) - (E - eps u - g(Ns^2+u^2)/2)^2.

    B is minus the turning-point quartic, so evaluating it as a product
    over the quartic's roots avoids the catastrophic cancellation of the
    closed form near turning points (|dH/dq| = 2 sqrt(B) there), which
    matters for large particle numbers.
    """
    coeffs = np.array(_turning_quartic(params, E), dtype=float)
    scale = np.max(np.abs(coeffs))
    nz = np.flatnonzero(np.abs(coeffs) > 1e-14 * scale)
    lead = coeffs[nz[0]]
    roots = quartic_roots(*coeffs)
    ns2 = params.Ns ** 2

    def bracket(p):
        s = np.asarray(p) / (params.hbar * params.Ns)
        q = np.full_like(s, lead, dtype=complex)
        for r in roots:
            q = q * (s - r)
        return -ns2 * q.real

    return bracket


def _turning_momenta(params: ModelParams, E):
    """Real turning points as (p, branch) pairs, sorted in p.

    Every real root of the turning quartic with |s| <= 1 is a genuine
    turning point, and the sign of the unsquared bracket selects the
    branch.
    """
    ns = params.Ns
    G = params.g * ns
    A = E / ns - 0.5 * G
    eps, v = params.eps, params.v
    roots = quartic_roots(*_turning_quartic(params, E))
    out = []
    for r in roots:
        if abs(r.imag) > 1e-9 * (1.0 + abs(r)):
            continue
        s = min(1.0, max(-1.0, r.real))
        if abs(r.real) > 1.0 + 1e-10:
            continue
        bracket = A - eps * s - 0.5 * G * s * s
        branch = "U+" if bracket > 0 else "U-"
        out.append((s * ns * params.hbar, branch))
    out.sort(key=lambda t: t[0])
    return out


def turning_points(params: ModelParams, E) -> OrbitGeometry:
    """Turning points with branch labels plus orbit classification."""
    ctx = _context(params)
    tps = tuple(TurningPoint(p, b) for p, b in _turning_momenta(params, E))
    if E < ctx["e_min"] - 1e-12 * params.energy_scale() or \
       E > ctx["e_max"] + 1e-12 * params.energy_scale():
        return OrbitGeometry(E, (), None, "single",
                             diagnostic="energy outside the classical range")
    saddle = ctx["saddle"]
    if saddle is None:
        region = "single"
    elif E <= ctx["e_upper_min"]:
        region = "I"
    elif E < saddle.energy:
        region = "II"
    else:
        region = "III"
    interior = [t for t in tps if abs(abs(t.p) - params.p_max) > 1e-9 * params.p_max]
    if region == "II" and len(interior) >= 4:
        klass = "double_well_pair"
    else:
        branches = {t.branch for t in interior} if interior else {t.branch for t in tps}
        if branches == {"U-"}:
            klass = "min_encircling"
        elif branches == {"U+"}:
            klass = "max_encircling"
        else:
            klass = "rotor"
    return OrbitGeometry(E, tps, klass, region)


def _segments(params: ModelParams, E):
    """Partition [-p_max, p_max] at the turning points and classify each
    interval as allowed / open (E above the upper potential) / forbidden."""
    pmax = params.p_max
    pts = [-pmax] + [p for p, _ in _turning_momenta(params, E)] + [pmax]
    segs = []
    for a, b in zip(pts[:-1], pts[1:]):
        if b - a <= 1e-13 * pmax:
            continue
        xm = float(np.real(_cos2q(params, E, 0.5 * (a + b))))
        kind = "allowed" if abs(xm) <= 1.0 else ("open" if xm > 1.0 else "forbidden")
        segs.append((a, b, kind))
    return segs


def _components(segs):
    """Maximal runs of non-forbidden segments (the connected pieces of the
    sublevel set's momentum projection)."""
    comps, cur = [], []
    for seg in segs:
        if seg[2] == "forbidden":
            if cur:
                comps.append(cur)
                cur = []
        else:
            cur.append(seg)
    if cur:
        comps.append(cur)
    return comps


def _area_of(params, E, segs, rtol=1e-12):
    """Area of the sublevel set over the given segments."""
    area = 0.0
    for a, b, kind in segs:
        if kind == "open":
            area += np.pi * (b - a)
        elif kind == "allowed":
            area += turning_point_integral(
                lambda p: np.pi - 2.0 * _angle_allowed(params, E, p), a, b, rtol=rtol
            )
    return area


# ---------------------------------------------------------------------------
# the action S(E) and the period


def action(params: ModelParams, E, lobe="auto", rtol=1e-12) -> float:
    """Phase-space area enclosed below the energy contour.

    For double-well energies the contour has two components and the
    caller picks ``lobe`` in {"left", "right"}; otherwise the single
    component ("total") is returned.  Grows from 0 at the bottom of the
    spectrum to 2*pi*Ns*hbar at the top.
    """
    ctx = _context(params)
    scale = params.energy_scale()
    if E <= ctx["e_min"] + 1e-14 * scale:
        return 0.0
    if E >= ctx["e_max"] - 1e-14 * scale:
        return 2.0 * np.pi * params.Ns * params.hbar if lobe in ("auto", "total") else 0.0
    segs = _segments(params, E)
    comps = _components(segs)
    if lobe in ("auto", "total"):
        if len(comps) > 1 and lobe == "auto":
            raise GeometryError(
                "two disconnected orbits at this energy; pick lobe='left' or 'right'"
            )
        return _area_of(params, E, [s for c in comps for s in c], rtol=rtol)
    if lobe not in ("left", "right"):
        raise ValueError(f"lobe must be auto/total/left/right, got {lobe!r}")
    if len(comps) == 1:
        # Single component: treat it as whichever side of the barrier
        # momentum it lies on (useful in region I where one well is empty).
        saddle = ctx["saddle"]
        if saddle is None:
            raise GeometryError("no barrier; lobe selection is meaningless")
        mid = 0.5 * (comps[0][0][0] + comps[0][-1][1])
        side = "left" if mid < saddle.p else "right"
        if side != lobe:
            return 0.0
        return _area_of(params, E, comps[0], rtol=rtol)
    if len(comps) != 2:
        raise GeometryError(f"expected at most two orbit components, found {len(comps)}")
    return _area_of(params, E, comps[0] if lobe == "left" else comps[1], rtol=rtol)


def period_direct(params: ModelParams, E, lobe="auto", rtol=1e-12) -> float:
    """Orbit period from the time integral T = hbar * \\int du / sqrt(B)
    with B = v^2 (Ns^2 - u^2) - (E - eps u - g(Ns^2 + u^2)/2)^2 over the
    orbit's allowed momentum range."""
    ctx = _context(params)
    _guard_separatrix(params, E, ctx)
    segs = _segments(params, E)
    comps = _components(segs)
    comp = _pick_component(comps, lobe, ctx)
    allowed = [s for s in comp if s[2] == "allowed"]
    if not allowed:
        raise GeometryError("no classically allowed momenta at this energy")
    bracket = _speed_bracket(params, E)

    def inv_speed(p):
        return 1.0 / np.sqrt(np.maximum(bracket(p), 1e-300))

    return float(sum(
        turning_point_integral(inv_speed, a, b, rtol=max(rtol, 1e-11))
        for a, b, _ in allowed
    ))


def _pick_component(comps, lobe, ctx):
    if lobe in ("auto", "total"):
        if len(comps) != 1:
            raise GeometryError("two orbits at this energy; pick lobe='left' or 'right'")
        return comps[0]
    if len(comps) == 1:
        return comps[0]
    return comps[0] if lobe == "left" else comps[-1]


def _guard_separatrix(params, E, ctx):
    saddle = ctx["saddle"]
    if saddle is not None and abs(E - saddle.energy) < 1e-9 * params.energy_scale():
        raise SeparatrixError("period diverges on the separatrix")


def period(params: ModelParams, E, lobe="auto") -> float:
    """T = dS/dE by central differences with one Richardson step.

    The stencil is shrunk when the energy sits close to the barrier or to
    the edges of the classical range so that no evaluation crosses them.
    """
    ctx = _context(params)
    _guard_separatrix(params, E, ctx)
    scale = params.energy_scale()
    h = 1e-5 * scale
    limits = [abs(E - ctx["e_min"]), abs(ctx["e_max"] - E)]
    saddle = ctx["saddle"]
    if saddle is not None:
        limits.append(abs(E - saddle.energy))
    if saddle is not None and ctx["e_upper_min"] != ctx["e_min"]:
        limits.append(abs(E - ctx["e_upper_min"]))
    h = min(h, 0.25 * min(limits))
    if h <= 0:
        raise SeparatrixError("energy too close to an orbit-type boundary")

    def d(hh):
        return (action(params, E + hh, lobe=lobe) - action(params, E - hh, lobe=lobe)) / (2.0 * hh)

    return float((4.0 * d(0.5 * h) - d(h)) / 3.0)


# ---------------------------------------------------------------------------
# barrier bookkeeping and tunneling integrals


@dataclass(frozen=True)
class BarrierInfo:
    e_barr: float
    p_barr: float
    e_min_lower: float
    e_min_upper: float


def barrier(params: ModelParams) -> BarrierInfo:
    """Saddle energy/momentum and the two well depths.

    Requires an actual double-well landscape at these parameters; the
    interaction being supercritical is necessary but, at large bias, not
    sufficient.
    """
    ctx = _context(params)
    saddle = ctx["saddle"]
    if saddle is None:
        raise GeometryError("no saddle point: single-well landscape")
    return BarrierInfo(
        e_barr=saddle.energy,
        p_barr=saddle.p,
        e_min_lower=ctx["e_min"],
        e_min_upper=ctx["e_upper_min"],
    )


def tunneling_below(params: ModelParams, E):
    """Barrier-penetration integral and tunneling factor below the top.

    tunnel_action = (1/(pi*hbar)) * integral of |Im q| over the forbidden
    gap between the inner turning points; tunnel_factor = exp(-pi * that).
    """
    info = barrier(params)
    if E >= info.e_barr:
        raise GeometryError("energy above the barrier; use tunneling_above")
    if E <= info.e_min_lower:
        raise GeometryError("no tunneling geometry below the well bottoms")
    segs = _segments(params, E)
    gaps = [
        (a, b) for a, b, kind in segs
        if kind == "forbidden" and a > -params.p_max + 1e-9 * params.p_max
        and b < params.p_max - 1e-9 * params.p_max
    ]
    if gaps:
        a, b = gaps[0]
    else:
        # Newborn shallow lobe below turning-point resolution: integrate
        # from the deep lobe's inner edge to the shallow minimum, where
        # |Im q| is vanishingly small anyway.
        ctx = _context(params)
        minima = [f for f in ctx["fps"] if f.kind == "minimum"]
        shallow = max(minima, key=lambda f: f.energy)
        interior = [
            (a, b) for a, b, kind in segs
            if kind == "forbidden" and (min(abs(a), abs(b)) < params.p_max * (1 - 1e-9))
        ]
        if not interior:
            raise GeometryError("no interior forbidden gap at this energy")
        a, b = interior[0]
        if shallow.p > a:
            b = min(b, shallow.p)
        else:
            a = max(a, shallow.p)
    integral = turning_point_integral(lambda p: _imag_angle(params, E, p), a, b)
    s_eps = integral / (np.pi * params.hbar)
    return s_eps, float(np.exp(-np.pi * s_eps))


def phase_correction(tunnel_action) -> float:
    """Connection phase arg Gamma(1/2 + i x) - x log|x| + x at
    x = tunnel_action; vanishes at x = 0 and for |x| -> infinity."""
    x = float(tunnel_action)
    if x == 0.0:
        return 0.0
    return arg_gamma_half_line(x) - x * np.log(abs(x)) + x


def _complex_turning_pair(params: ModelParams, E):
    """The complex-conjugate inner turning points above the barrier."""
    ns = params.Ns
    G = params.g * ns
    A = E / ns - 0.5 * G
    eps, v = params.eps, params.v
    roots = quartic_roots(
        0.25 * G * G, eps * G, eps * eps - A * G + v * v, -2.0 * A * eps, A * A - v * v
    )
    cplx = [r for r in roots if r.imag > 1e-9 * (1.0 + abs(r))]
    if not cplx:
        raise GeometryError("no complex turning-point pair at this energy")
    # The pair continuing the inner turning points lies near the barrier.
    pc = min(cplx, key=lambda r: abs(r.imag)) * ns * params.hbar
    return complex(pc)


def tunneling_above(params: ModelParams, E):
    """Continuation of the tunneling integral above the barrier.

    Returns (tunnel_action, overbarrier_phase): the former is real and
    <= 0 (so the tunneling factor exceeds one), the latter the real phase
    accumulated between the complex pair and the barrier momentum; both
    vanish as E approaches the barrier top.
    """
    info = barrier(params)
    s_eps = tunneling_above_action(params, E)
    pc = _complex_turning_pair(params, E)
    qfun = lambda p: 0.5 * np.arccos(_cos2q(params, E, p))
    half = turning_point_integral(qfun, pc, complex(info.p_barr))
    s_theta = 2.0 * complex(half).real / params.hbar
    return s_eps, float(s_theta)


def tunneling_above_action(params: ModelParams, E) -> float:
    """Just the continued tunneling integral, skipping the barrier-phase
    contour (the quantizer only needs this part)."""
    info = barrier(params)
    if E <= info.e_barr:
        raise GeometryError("energy below the barrier; use tunneling_below")
    pc = _complex_turning_pair(params, E)
    pcc = pc.conjugate()
    qfun = lambda p: 0.5 * np.arccos(_cos2q(params, E, p))
    # Split the contour between the conjugate pair where it crosses the
    # real axis: near the top of the spectrum the outer turning points
    # pinch it there, and the endpoint substitution absorbs the resulting
    # half-power feature only at a segment end.
    mid = complex(pc.real, 0.0)
    seg = turning_point_integral(qfun, pcc, mid) + turning_point_integral(qfun, mid, pc)
    s_eps = ((0.5j * (pc - pcc)) + (-1j / np.pi) * seg) / params.hbar
    return float(np.real(s_eps))


def tunnel_factor_above(params: ModelParams, E):
    return float(np.exp(-np.pi * tunneling_above_action(params, E)))


# ---------------------------------------------------------------------------
# dimensionless lobe phases for the quantization condition


def lobe_phases(params: ModelParams, E):
    """Half-action phases (area / 2 hbar) of the left and right regions.

    Below the barrier these are the areas of the two disconnected orbit
    components; above it the single component is split at the barrier
    momentum.  Either way their sum is the total sublevel area / 2 hbar.
    """
    info = barrier(params)
    segs = _segments(params, E)
    if E < info.e_barr:
        comps = _components(segs)
        if len(comps) == 2:
            left = _area_of(params, E, comps[0])
            right = _area_of(params, E, comps[1])
        elif len(comps) == 1:
            # Just above the upper minimum the newborn lobe can fall below
            # turning-point resolution; its area is then zero.
            mid = 0.5 * (comps[0][0][0] + comps[0][-1][1])
            area = _area_of(params, E, comps[0])
            left, right = (area, 0.0) if mid < info.p_barr else (0.0, area)
        else:
            raise GeometryError(
                f"expected two orbit components below the barrier, found {len(comps)}"
            )
    else:
        pb = info.p_barr
        lsegs, rsegs = [], []
        for a, b, kind in segs:
            if kind == "forbidden":
                continue
            if b <= pb:
                lsegs.append((a, b, kind))
            elif a >= pb:
                rsegs.append((a, b, kind))
            else:
                lsegs.append((a, pb, kind))
                rsegs.append((pb, b, kind))
        left = _area_of(params, E, lsegs)
        right = _area_of(params, E, rsegs)
    h2 = 2.0 * params.hbar
    return left / h2, right / h2


# ---------------------------------------------------------------------------
# bundled record


@dataclass(frozen=True)
class ActionData:
    energy: float
    action: float                  # total enclosed area
    period: float | None
    left_phase: float | None       # lobe area / 2 hbar
    right_phase: float | None
    tunnel_action: float | None
    tunnel_factor: float | None
    connection_phase: float | None
    overbarrier_phase: float | None
    geometry: OrbitGeometry


def action_data(params: ModelParams, E) -> ActionData:
    """Gather everything the quantizer needs at one energy."""
    geo = turning_points(params, E)
    ctx = _context(params)
    saddle = ctx["saddle"]
    left = right = s_eps = kappa = s_phi = s_theta = None
    if saddle is not None and E > ctx["e_upper_min"]:
        left, right = lobe_phases(params, E)
        if E < saddle.energy:
            s_eps, kappa = tunneling_below(params, E)
            s_theta = 0.0
        else:
            s_eps, s_theta = tunneling_above(params, E)
            kappa = float(np.exp(-np.pi * s_eps)) if np.pi * abs(s_eps) < 700 else np.inf
        s_phi = phase_correction(s_eps)
    total = action(params, E, lobe="total") if len(_components(_segments(params, E))) == 1 \
        else 2.0 * params.hbar * (left + right)
    try:
        T = period(params, E, lobe="auto" if geo.orbit_class != "double_well_pair" else "left")
    except (SeparatrixError, GeometryError):
        T = None
    return ActionData(
        energy=E, action=total, period=T, left_phase=left, right_phase=right,
        tunnel_action=s_eps, tunnel_factor=kappa, connection_phase=s_phi,
        overbarrier_phase=s_theta, geometry=geo,
    )

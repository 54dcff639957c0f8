"""Zeros of entire functions in rectangles by argument-principle subdivision.

Winding numbers are computed from accumulated phase increments along the
cell boundary, refined until consecutive samples differ in argument by
less than ``MAX_PHASE_STEP``. Cells with nonzero winding are quadrisected until a
single zero can be polished by Newton's method (or the cell shrinks below
the clustering radius, which reports a cluster with its total
multiplicity).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import AmbiguousMatchError, BoundaryZeroError, WindingError

__all__ = [
    "Strip",
    "ZeroSet",
    "winding_number",
    "find_zeros",
    "match_zero_sets",
    "multiplicity_periodicity_check",
    "reflection_identity_check",
]

MAX_PHASE_STEP = math.pi / 4
_EDGE_POINTS = 16
_MAX_EDGE_LEVEL = 24
# split fraction kept off the midpoint so symmetric fixtures do not put zeros on cuts
_SPLIT = 0.4917


@dataclass(frozen=True)
class Strip:
    """Rectangle ``[real_low, real_high] x (imag_low, imag_high]``."""

    imag_low: float
    imag_high: float
    real_low: float
    real_high: float

    def __post_init__(self):
        if not self.imag_low < self.imag_high:
            raise ValueError("need imag_low < imag_high")
        if not self.real_low < self.real_high:
            raise ValueError("need real_low < real_high")

    def contains(self, z: complex) -> bool:
        return (self.real_low <= z.real <= self.real_high
                and self.imag_low < z.imag <= self.imag_high)

    def shifted(self, dy: float) -> "Strip":
        return Strip(self.imag_low + dy, self.imag_high + dy, self.real_low, self.real_high)


@dataclass(frozen=True)
class ZeroSet:
    entries: tuple = ()
    residual: float = 0.0
    winding: int = 0
    strip: Strip | None = field(default=None, compare=False)

    @property
    def locations(self) -> np.ndarray:
        return np.array([z for z, _ in self.entries], dtype=complex)

    @property
    def multiplicities(self) -> np.ndarray:
        return np.array([m for _, m in self.entries], dtype=int)

    @property
    def total(self) -> int:
        return int(sum(m for _, m in self.entries))

    def multiplicity_at(self, z: complex, radius: float) -> int:
        """``m_F(z)``: multiplicity of the unique zero within ``radius`` (0 if none)."""
        near = [m for w, m in self.entries if abs(w - z) <= radius]
        if len(near) > 1:
            raise AmbiguousMatchError(f"{len(near)} zeros within {radius:g} of {z}")
        return near[0] if near else 0

    def to_csv(self) -> str:
        lines = ["re,im,multiplicity"]
        lines += [f"{float(z.real)!r},{float(z.imag)!r},{int(m)}" for z, m in self.entries]
        return "\n".join(lines) + "\n"


def _edge_phase(F, dF, a, b, floor):
    """Total argument change of F along the segment a -> b."""
    t = np.linspace(0.0, 1.0, _EDGE_POINTS + 1)
    pts = a + (b - a) * t
    return _refine_phase(F, dF, pts, *_sample(F, dF, pts, floor), floor, 0)


def _sample(F, dF, pts, floor):
    vals = np.asarray(F(pts), dtype=complex)
    if np.any(np.abs(vals) <= floor) or not np.all(np.isfinite(vals)):
        bad = pts[np.argmin(np.abs(vals))]
        raise BoundaryZeroError(f"|F| below {floor:.3g} on contour near {bad:.6g}")
    with np.errstate(divide="ignore"):
        reach = np.abs(vals) / np.abs(np.asarray(dF(pts), dtype=complex))
    return vals, reach


def _refine_phase(F, dF, pts, vals, reach, floor, level):
    steps = np.angle(vals[1:] / vals[:-1])
    # |F/F'| underestimates the distance to the nearest zero (exact for a simple one)
    spacing = np.abs(np.diff(pts))
    coarse = (np.abs(steps) > MAX_PHASE_STEP) | (spacing > np.minimum(reach[1:], reach[:-1]))
    if not np.any(coarse):
        return float(steps.sum())
    if level >= _MAX_EDGE_LEVEL:
        raise BoundaryZeroError("phase does not resolve along contour (zero on or near the edge)")
    total = float(steps[~coarse].sum())
    for i in np.nonzero(coarse)[0]:
        sub = pts[i] + (pts[i + 1] - pts[i]) * np.linspace(0.0, 1.0, 9)
        sv, sr = _sample(F, dF, sub[1:-1], floor)
        sv = np.concatenate([[vals[i]], sv, [vals[i + 1]]])
        sr = np.concatenate([[reach[i]], sr, [reach[i + 1]]])
        total += _refine_phase(F, dF, sub, sv, sr, floor, level + 1)
    return total


def winding_number(F, x0, x1, y0, y1, floor=0.0, derivative=None) -> int:
    """Number of zeros (with multiplicity) of ``F`` inside the rectangle."""
    dF = derivative if derivative is not None else _numeric_derivative(F)
    corners = [complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)]
    total = 0.0
    for a, b in zip(corners, corners[1:] + corners[:1]):
        total += _edge_phase(F, dF, a, b, floor)
    w = total / (2 * math.pi)
    n = round(w)
    if abs(w - n) > 1e-3:
        raise WindingError(f"non-integer winding {w:.6f}")
    return int(n)


def _newton(F, dF, z, mult, tol, maxiter=60):
    for _ in range(maxiter):
        fz = complex(F(np.array([z]))[0])
        dfz = complex(dF(np.array([z]))[0])
        if dfz == 0:
            return z
        step = mult * fz / dfz
        z -= step
        if abs(step) <= tol * max(1.0, abs(z)):
            break
    return z


def _numeric_derivative(F, h=1e-6):
    def dF(z):
        z = np.asarray(z, dtype=complex)
        return (np.asarray(F(z + h)) - np.asarray(F(z - h)) + 1j * (np.asarray(F(z - 1j * h)) - np.asarray(F(z + 1j * h)))) / (4 * h)
    return dF


def find_zeros(F, strip: Strip, tolerance: float = 1e-12, derivative=None,
               cluster_radius: float = 1e-8, max_depth: int = 40,
               boundary_floor: float | None = None) -> ZeroSet:
    """Zeros with multiplicities of an entire ``F`` in the closed window of ``strip``.

    ``F`` must accept complex arrays. ``derivative`` (same calling
    convention) is used for Newton refinement; without it a 4-point
    difference quotient is used. Raises :class:`BoundaryZeroError` when a
    zero sits on the window boundary and :class:`WindingError` when cell
    counts stop adding up.
    """
    dF = derivative if derivative is not None else _numeric_derivative(F)
    x0, x1, y0, y1 = strip.real_low, strip.real_high, strip.imag_low, strip.imag_high
    if boundary_floor is None:
        probe = np.abs(np.asarray(F(np.array([complex(x0, y0), complex(x1, y1), complex((x0 + x1) / 2, (y0 + y1) / 2)]))))
        boundary_floor = 1e-13 * max(float(probe.max()), 1e-300)
    outer = winding_number(F, x0, x1, y0, y1, boundary_floor, dF)
    found = []

    def cell(xa, xb, ya, yb, w, depth):
        if w == 0:
            return
        diam = math.hypot(xb - xa, yb - ya)
        center = complex((xa + xb) / 2, (ya + yb) / 2)
        if w == 1 or diam <= cluster_radius:
            z = _newton(F, dF, center, w, tolerance)
            inside = (xa - diam <= z.real <= xb + diam) and (ya - diam <= z.imag <= yb + diam)
            if diam <= cluster_radius or (inside and w == 1 and diam < 1e-2):
                found.append((z if inside else center, w))
                return
        if depth >= max_depth:
            raise WindingError(f"{w} zeros unresolved near {center:.6g} after {depth} subdivisions")
        # quadrisect; retry alternative cuts if a zero sits on one
        for frac in (_SPLIT, 0.5 + (0.5 - _SPLIT) / 3, 0.37, 0.61):
            xm = xa + frac * (xb - xa)
            ym = ya + (1.0 - frac) * (yb - ya)
            parts = [(xa, xm, ya, ym), (xm, xb, ya, ym), (xa, xm, ym, yb), (xm, xb, ym, yb)]
            try:
                counts = [winding_number(F, *p, boundary_floor * 1e-6, dF) for p in parts]
                break
            except BoundaryZeroError:
                continue
        else:
            if w >= 2:
                # |F| is below resolution on every cut: a cluster we cannot separate
                z = _newton(F, dF, center, w, tolerance)
                inside = abs(z - center) <= diam
                found.append((z if inside else center, w))
                return
            raise BoundaryZeroError(f"could not place a cut avoiding zeros near {center:.6g}")
        if sum(counts) != w:
            raise WindingError(f"cell count {w} split into {counts}")
        for p, c in zip(parts, counts):
            cell(*p, c, depth + 1)

    cell(x0, x1, y0, y1, outer, 0)
    found.sort(key=lambda e: (e[0].real, e[0].imag))
    # merge near-duplicates
    merged = []
    for z, m in found:
        if merged and abs(merged[-1][0] - z) <= cluster_radius:
            merged[-1] = (merged[-1][0], merged[-1][1] + m)
        else:
            merged.append((z, m))
    total = sum(m for _, m in merged)
    if total != outer:
        raise WindingError(f"found {total} zeros, outer winding {outer}")
    locs = np.array([z for z, _ in merged], dtype=complex)
    residual = float(np.max(np.abs(F(locs)))) if locs.size else 0.0
    entries = tuple((complex(z), int(m)) for z, m in merged)
    return ZeroSet(entries=entries, residual=residual, winding=outer, strip=strip)


def match_zero_sets(sets, radius: float):
    """Group locations from several zero sets that lie within ``radius``.

    Returns a list of representative points; raises
    :class:`AmbiguousMatchError` if a point has two distinct candidates in
    another set.
    """
    points = []
    for zs in sets:
        for z, _ in zs.entries:
            near = [p for p in points if abs(p - z) <= radius]
            if len(near) > 1:
                raise AmbiguousMatchError(f"{z} matches {len(near)} locations within {radius:g}")
            if not near:
                points.append(z)
    return points


@dataclass(frozen=True)
class PeriodicityVerdict:
    holds: bool
    violations: tuple = ()
    checked: int = 0

    def __bool__(self):
        return self.holds


def multiplicity_periodicity_check(ZF: ZeroSet, ZG: ZeroSet, tau: float, strip: Strip,
                                   match_radius: float = 1e-6) -> PeriodicityVerdict:
    """Check ``m_F(z + 2i tau) - m_G(z + 2i tau) = m_F(z) - m_G(z)``.

    Every zero location in ``strip`` is compared with its ``2i tau``
    translate and every location in the translated strip with its
    preimage. Both zero sets must cover ``strip`` and ``strip + 2i tau``.
    Violations are ``(z, d(z), d(z + 2i tau))`` triples.
    """
    if not tau > 0:
        raise ValueError("tau must be positive")
    shift = 2j * tau
    upper = strip.shifted(2 * tau)
    d = lambda z: ZF.multiplicity_at(z, match_radius) - ZG.multiplicity_at(z, match_radius)
    base = []
    for p in match_zero_sets([ZF, ZG], match_radius):
        if strip.contains(p):
            base.append(p)
        elif upper.contains(p):
            base.append(p - shift)
    # collapse base points that coincide after translation
    uniq = []
    for p in base:
        if not any(abs(p - q) <= match_radius for q in uniq):
            uniq.append(p)
    violations = []
    for p in uniq:
        lo, hi = d(p), d(p + shift)
        if lo != hi:
            violations.append((p, lo, hi))
    return PeriodicityVerdict(not violations, tuple(violations), len(uniq))


def reflection_identity_check(ZF: ZeroSet, ZG: ZeroSet, match_radius: float = 1e-6):
    """Check ``m_F(z) + m_F(conj z) = m_G(z) + m_G(conj z)`` at every zero.

    This holds whenever ``|F| = |G|`` on the real line. Returns the list of
    violating points (empty when the identity holds).
    """
    bad = []
    for p in match_zero_sets([ZF, ZG], match_radius):
        q = p.conjugate()
        lhs = ZF.multiplicity_at(p, match_radius) + ZF.multiplicity_at(q, match_radius)
        rhs = ZG.multiplicity_at(p, match_radius) + ZG.multiplicity_at(q, match_radius)
        if lhs != rhs:
            bad.append((p, lhs, rhs))
    return bad

"""Deterministic SVG frames.

Tunnel style: rear view of the corridor cross-section (walls, aircraft symbol
with wings/tail, filled red exhaust dot, unfilled red radius circle) plus a
bird's-eye progress strip.  Mission style: top-down scene with brown terrain,
red true zones, blue unfilled perceived circles, green sensor footprint and a
white goal circle.  Identical inputs produce identical bytes.
"""

from __future__ import annotations

import math

from .world import TunnelWorld
from .mission import MissionWorld


def _f(v: float) -> str:
    return f"{v:.2f}"


def _svg(width: int, height: int, body: list) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
            f'height="{height}" viewBox="0 0 {width} {height}">')
    return "\n".join([head, *body, "</svg>"]) + "\n"


def render_tunnel_frame(state, world: TunnelWorld) -> str:
    """Rear view (left) and bird's-eye strip (right)."""
    view = 300.0
    margin = 30.0
    strip_w = 60.0
    width = int(margin * 3 + view + strip_w)
    height = int(margin * 2 + view)
    sx = view / (2.0 * world.half_width)
    sy = view / (2.0 * world.half_height)

    def rear(pe, dh):
        return margin + (pe + world.half_width) * sx, \
            margin + (world.half_height - dh) * sy

    body = [f'<rect width="{width}" height="{height}" fill="#111111"/>']
    body.append(f'<rect x="{_f(margin)}" y="{_f(margin)}" width="{_f(view)}" '
                f'height="{_f(view)}" fill="none" stroke="#3050ff" stroke-width="2"/>')

    cx, cy = rear(state.pe, state.h - world.center_altitude)
    half_span = 16.4 * sx
    wing = (math.cos(state.phi), math.sin(state.phi))
    x1, y1 = cx - half_span * wing[0], cy + half_span * wing[1]
    x2, y2 = cx + half_span * wing[0], cy - half_span * wing[1]
    body.append(f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
                f'stroke="#aaaaaa" stroke-width="2"/>')
    tail = 10.0
    tx = cx + tail * math.sin(state.phi)
    ty = cy - tail * math.cos(state.phi)
    body.append(f'<line x1="{_f(cx)}" y1="{_f(cy)}" x2="{_f(tx)}" y2="{_f(ty)}" '
                f'stroke="#aaaaaa" stroke-width="2"/>')
    body.append(f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="4.00" fill="#ff2020"/>')
    body.append(f'<circle cx="{_f(cx)}" cy="{_f(cy)}" '
                f'r="{_f(world.aircraft_radius * sx)}" fill="none" '
                f'stroke="#ff2020" stroke-width="1.5"/>')

    strip_x = margin * 2 + view
    body.append(f'<rect x="{_f(strip_x)}" y="{_f(margin)}" width="{_f(strip_w)}" '
                f'height="{_f(view)}" fill="none" stroke="#3050ff" stroke-width="1.5"/>')
    frac = min(max(state.pn / world.length, 0.0), 1.0)
    mx = strip_x + strip_w / 2.0 + state.pe / world.half_width * (strip_w / 2.0 - 4.0)
    my = margin + (1.0 - frac) * view
    body.append(f'<circle cx="{_f(mx)}" cy="{_f(my)}" r="3.00" fill="#ff2020"/>')
    return _svg(width, height, body)


def render_mission_frame(state, world: MissionWorld, footprint=None,
                         path=None) -> str:
    """Top-down scene, north up."""
    n_min, n_max, e_min, e_max = world.bounds
    height_px = 600.0
    scale = height_px / (n_max - n_min)
    width = int((e_max - e_min) * scale) + 20
    height = int(height_px) + 20

    def xy(pn, pe):
        return 10.0 + (pe - e_min) * scale, 10.0 + (n_max - pn) * scale

    body = [f'<rect width="{width}" height="{height}" fill="#c9b28a"/>']
    for poly in world.terrain:
        pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in
                       (xy(pn, pe) for pn, pe in poly.vertices))
        body.append(f'<polygon points="{pts}" fill="#7a5230" stroke="#5a3c20" '
                    f'stroke-width="1"/>')
    if footprint is not None:
        pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in
                       (xy(pn, pe) for pn, pe in footprint))
        body.append(f'<polygon points="{pts}" fill="#30c05040" stroke="#20a040" '
                    f'stroke-width="1.5"/>')
    if path is not None:
        pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in
                       (xy(pn, pe) for pn, pe in path))
        body.append(f'<polyline points="{pts}" fill="none" stroke="#f0e040" '
                    f'stroke-width="1.5" stroke-dasharray="4 3"/>')
    gx, gy = xy(*world.goal_center)
    body.append(f'<circle cx="{_f(gx)}" cy="{_f(gy)}" '
                f'r="{_f(world.goal_radius * scale)}" fill="#ffffff" '
                f'stroke="#888888" stroke-width="1"/>')
    for zone in world.true_eob:
        zx, zy = xy(*zone.center)
        dash = "" if zone.active else ' stroke-dasharray="5 4"'
        body.append(f'<circle cx="{_f(zx)}" cy="{_f(zy)}" '
                    f'r="{_f(zone.radius * scale)}" fill="#ff303030" '
                    f'stroke="#e02020" stroke-width="2"{dash}/>')
    for zone in world.perceived_eob:
        zx, zy = xy(*zone.center)
        body.append(f'<circle cx="{_f(zx)}" cy="{_f(zy)}" '
                    f'r="{_f(zone.radius * scale)}" fill="none" '
                    f'stroke="#3050ff" stroke-width="2"/>')
    ax, ay = xy(state.pn, state.pe)
    nose = 9.0
    c, s = math.cos(state.psi), math.sin(state.psi)
    tip = (ax + nose * s, ay - nose * c)
    left = (ax - 4.0 * c - 5.0 * s, ay - 4.0 * s + 5.0 * c)
    right = (ax + 4.0 * c - 5.0 * s, ay + 4.0 * s + 5.0 * c)
    pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in (tip, left, right))
    body.append(f'<polygon points="{pts}" fill="#202020" stroke="#000000" '
                f'stroke-width="1"/>')
    return _svg(width, height, body)


def render_frame(state, world, style: str = "auto") -> str:
    """Dispatch on style (tunnel | mission | auto on the world type)."""
    if style == "tunnel" or (style == "auto" and isinstance(world, TunnelWorld)):
        return render_tunnel_frame(state, world)
    if style == "mission" or (style == "auto" and isinstance(world, MissionWorld)):
        return render_mission_frame(state, world)
    raise ValueError(f"unknown render style '{style}'")

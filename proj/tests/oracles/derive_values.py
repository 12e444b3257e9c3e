"""Independent numpy oracles for values frozen into the C++ tests.

Run: python3 tests/oracles/derive_values.py
"""
import json
import math

import numpy as np


def resample(points, k):
    pts = np.asarray(points, dtype=float)
    keep = np.concatenate([[True], np.any(np.diff(pts, axis=0) != 0, axis=1)])
    pts = pts[keep]
    cum = np.concatenate([[0.0], np.cumsum(np.hypot(*np.diff(pts, axis=0).T))])
    s = np.linspace(0.0, cum[-1], k)
    return np.column_stack([np.interp(s, cum, pts[:, 0]), np.interp(s, cum, pts[:, 1])]), s


def complexity(points, k=100):
    p, s = resample(points, k)
    dx = np.gradient(p[:, 0], s, edge_order=2)
    dy = np.gradient(p[:, 1], s, edge_order=2)
    ddx = np.gradient(dx, s, edge_order=2)
    ddy = np.gradient(dy, s, edge_order=2)
    kappa = (dx * ddy - dy * ddx) / (dx * dx + dy * dy) ** 1.5
    kdot = np.gradient(kappa, s, edge_order=2)
    return float(np.mean(np.abs(kappa)) + np.mean(np.abs(kdot))), kappa, kdot, p


def circle(r, n):
    th = 2 * np.pi * np.arange(n) / n
    return np.column_stack([r * np.cos(th), r * np.sin(th)])


def clothoid(length=50.0, rate=0.004, steps=5000):
    h = length / steps
    pts = [(0.0, 0.0)]
    x = y = 0.0
    for i in range(steps):
        sm = (i + 0.5) * h
        th = 0.5 * rate * sm * sm
        x += h * math.cos(th)
        y += h * math.sin(th)
        pts.append((x, y))
    return np.array(pts)


def turn(r, frames):
    phi = 0.5 * np.pi * np.arange(frames) / (frames - 1)
    return np.column_stack([r * np.sin(phi), r * (1 - np.cos(phi))])


out = {}
c, kappa, kdot, p = complexity(circle(10.0, 360))
out["circle_r10_complexity"] = c
out["circle_r10_max_radial_error"] = float(np.max(np.abs(np.hypot(p[:, 0], p[:, 1]) - 10.0)))
out["circle_r10_max_interior_kappa_error"] = float(np.max(np.abs(np.abs(kappa[1:-1]) - 0.1)))
c, kappa, kdot, _ = complexity(clothoid())
out["clothoid_complexity"] = c
out["clothoid_median_interior_kdot"] = float(np.median(kdot[2:-2]))
out["turn_r20_complexity"] = complexity(turn(20.0, 250))[0]
arc20 = circle(20.0, 200)
out["straight_plus_circle20_mean"] = (0.0 + complexity(arc20)[0]) / 2
out["straight_plus_circle20_max"] = complexity(arc20)[0]
n = 249
v = 10.0 * np.arange(n) / (n - 1)
out["ramp_speed_variance"] = float(np.var(v))
out["entropy_identity"] = math.log(2 * math.pi * math.e)
out["entropy_diag41"] = math.log(2 * math.pi * math.e) + 0.5 * math.log(4.0)
out["height_var_01"] = float(np.var([0.0, 1.0, 0.0, 1.0]))
out["distance_var_5_15"] = float(np.var([5.0, 15.0]))
out["speed_var_024"] = float(np.var([0.0, 2.0, 4.0]))
print(json.dumps(out, indent=2))

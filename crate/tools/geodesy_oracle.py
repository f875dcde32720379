"""Vector-algebra geodesy oracle; shares no formulas with the Rust haversine code.

Writes crates/core/tests/data/geodesy_oracle.json.
"""
import json
import math
import random

import numpy as np

R = 3958.8


def unit(lat, lon):
    la, lo = math.radians(lat), math.radians(lon)
    return np.array([math.cos(la) * math.cos(lo), math.cos(la) * math.sin(lo), math.sin(la)])


def distance(a, b):
    u, v = unit(*a), unit(*b)
    return R * math.atan2(np.linalg.norm(np.cross(u, v)), float(np.dot(u, v)))


def bearing(a, b):
    u, v = unit(*a), unit(*b)
    z = np.array([0.0, 0.0, 1.0])
    east = np.cross(z, u)
    east /= np.linalg.norm(east)
    north = np.cross(u, east)
    # tangent direction of the great circle through u toward v
    n = np.cross(u, v)
    t = np.cross(n, u)
    return math.degrees(math.atan2(float(np.dot(t, east)), float(np.dot(t, north)))) % 360.0


def midpoint(a, b):
    m = unit(*a) + unit(*b)
    m /= np.linalg.norm(m)
    return [math.degrees(math.asin(m[2])), math.degrees(math.atan2(m[1], m[0]))]


rng = random.Random(20250301)
pairs = []
while len(pairs) < 50:
    a = (rng.uniform(-80, 80), rng.uniform(-179, 180))
    b = (rng.uniform(-80, 80), rng.uniform(-179, 180))
    if distance(a, b) < 1.0 or distance(a, b) > 12000:
        continue
    pairs.append({
        "a": list(a), "b": list(b),
        "distance_mi": distance(a, b),
        "bearing_deg": bearing(a, b),
        "midpoint": midpoint(a, b),
    })

atl, mia = (33.749, -84.388), (25.7617, -80.1918)
fixed = {
    "atlanta_miami_distance_mi": distance(atl, mia),
    "atlanta_miami_bearing_deg": bearing(atl, mia),
    "atlanta_miami_midpoint": midpoint(atl, mia),
    "half_circumference_mi": distance((0, 0), (0, 180)),
}
out = {"earth_radius_mi": R, "fixed": fixed, "pairs": pairs}
with open("crates/core/tests/data/geodesy_oracle.json", "w") as f:
    json.dump(out, f, indent=1)
print(json.dumps(fixed, indent=1))

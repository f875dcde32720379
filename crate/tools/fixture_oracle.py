"""Authors the 5-hub fixture and prints oracle values for it (vector geodesy)."""
import json, math, itertools
import numpy as np
import importlib.util
spec = importlib.util.spec_from_file_location("g", "tools/geodesy_oracle.py")

R = 3958.8
def unit(lat, lon):
    la, lo = math.radians(lat), math.radians(lon)
    return np.array([math.cos(la)*math.cos(lo), math.cos(la)*math.sin(lo), math.sin(la)])
def distance(a, b):
    u, v = unit(*a), unit(*b)
    return R*math.atan2(np.linalg.norm(np.cross(u, v)), float(np.dot(u, v)))
def bearing(a, b):
    u, v = unit(*a), unit(*b)
    east = np.cross([0, 0, 1.0], u); east /= np.linalg.norm(east)
    north = np.cross(u, east)
    t = np.cross(np.cross(u, v), u)
    return math.degrees(math.atan2(float(np.dot(t, east)), float(np.dot(t, north)))) % 360
def midpoint(a, b):
    m = unit(*a) + unit(*b); m /= np.linalg.norm(m)
    return (math.degrees(math.asin(m[2])), math.degrees(math.atan2(m[1], m[0])))

hubs = {"H1": (33.0, -84.0), "H2": (31.0, -83.0), "H3": (30.8, -84.6),
        "H4": (34.0, -82.0), "H5": (28.0, -82.0)}
edges = [("H1","H2"),("H1","H3"),("H1","H4"),("H2","H5"),("H3","H5"),("H4","H2")]
doc = {"hubs": [{"id": k, "name": f"Fixture {k}", "lat": v[0], "lon": v[1], "terminal": k == "H5"} for k, v in hubs.items()],
       "edges": []}
w = {}
for a, b in edges:
    d = round(distance(hubs[a], hubs[b]), 1)
    t = round(d / 50, 2)
    doc["edges"].append({"from": a, "to": b, "travel_time_h": t, "distance_mi": d})
    w[(a, b)] = w[(b, a)] = t
json.dump(doc, open("crates/core/tests/data/five_hubs.json", "w"), indent=2)
for e in doc["edges"]: print(e)
# brute-force shortest path H1->H5
def paths(u, d, seen):
    if u == d: yield [u]; return
    for (a, b) in w:
        if a == u and b not in seen:
            for p in paths(b, d, seen | {b}): yield [u] + p
best = min(paths("H1", "H5", {"H1"}), key=lambda p: sum(w[(p[i], p[i+1])] for i in range(len(p)-1)))
print("sp", best, sum(w[(best[i], best[i+1])] for i in range(len(best)-1)))
f = best[1]
anchor = bearing(hubs["H1"], midpoint(hubs[f], hubs["H5"]))
print("anchor", anchor)
for n in ["H2", "H3", "H4"]:
    b = bearing(hubs["H1"], hubs[n]); dev = min(abs(b-anchor), 360-abs(b-anchor))
    print(n, "bearing", b, "dev", dev)

"""Writes tests/data/synthetic_levels.csv: a cointegration-free pair of
integrated series with three interior gaps in x, on a monthly index."""
import pathlib

import numpy as np

OUT = pathlib.Path(__file__).resolve().parents[1] / "data" / "synthetic_levels.csv"

rng = np.random.default_rng(3)
n = 229
x = np.cumsum(rng.normal(size=n)) + 20
e = np.zeros(n)
eta = rng.normal(size=n)
for t in range(1, n):
    e[t] = 0.6 * e[t - 1] + eta[t] + 0.3 * eta[t - 1]
y = np.cumsum(e) * 0.5 + 40 - 0.2 * x

with open(OUT, "w") as f:
    f.write("date,y,x\n")
    for t in range(n):
        year, month = 1996 + t // 12, t % 12 + 1
        xs = "" if t in (30, 31, 100) else repr(float(x[t]))
        f.write(f"{year}-{month:02d},{float(y[t])!r},{xs}\n")

"""Prototype: rotation complexity profile, exact cell-mode greedy cover.

Checks whether C(E_n, 0.1) for n in {16,32,64,128,256,512} has its last
three entries equal, with theta = F_30/F_31 (golden convergent) and the
two-arc partition {[0,1/2),[1/2,1)}.
"""
from fractions import Fraction
import numpy as np

THETA = Fraction(832040, 1346269)
EPS = Fraction(1, 10)


def cells_for_window(n):
    # cut points of the join over i<n of pullbacks of {0, 1/2} by rotation:
    # (T^i)^{-1} arc boundaries are at -i*theta mod 1 and 1/2 - i*theta mod 1
    cuts = set()
    for i in range(n):
        cuts.add((-i * THETA) % 1)
        cuts.add((Fraction(1, 2) - i * THETA) % 1)
    cuts = sorted(cuts)
    cells = []  # (lo, hi)
    for j in range(len(cuts)):
        lo = cuts[j]
        hi = cuts[j + 1] if j + 1 < len(cuts) else cuts[0] + 1
        cells.append((lo, hi))
    return cells


def names_for_cells(cells, n):
    # name coordinate i of a cell = atom index of T^{-i}alpha containing it
    # = 0 if (mid + i*theta) mod 1 in [0,1/2) else 1
    names = np.zeros((len(cells), n), dtype=np.uint8)
    for ci, (lo, hi) in enumerate(cells):
        mid = (lo + hi) / 2
        for i in range(n):
            v = (mid + i * THETA) % 1
            names[ci, i] = 0 if v < Fraction(1, 2) else 1
    return names


def greedy_cover(names, weights, n, eps):
    m = len(weights)
    # pairwise hamming counts
    diffs = (names[:, None, :] != names[None, :, :]).sum(axis=2)
    thr = eps * n  # strict: hamming/n < eps  <=> diffs < eps*n
    inball = diffs < float(thr)  # float compare ok: thr = 0.1*n exact in binary? 0.1 not exact!
    # redo exactly: diffs < n/10  <=> 10*diffs < n
    inball = (10 * diffs) < n
    covered = np.zeros(m, dtype=bool)
    total = Fraction(0)
    target = 1 - eps
    count = 0
    while total <= target:
        best_gain, best_c = Fraction(-1), -1
        for c in range(m):
            gain = sum((weights[j] for j in range(m) if inball[c, j] and not covered[j]), Fraction(0))
            if gain > best_gain:
                best_gain, best_c = gain, c
        newly = [j for j in range(m) if inball[best_c, j] and not covered[j]]
        for j in newly:
            covered[j] = True
        total += best_gain
        count += 1
        if count > m:
            raise RuntimeError("no progress")
    return count, total


for n in (16, 32, 64, 128, 256, 512):
    cells = cells_for_window(n)
    w = [hi - lo for lo, hi in cells]
    assert sum(w) == 1
    names = names_for_cells(cells, n)
    k, mass = greedy_cover(names, w, n, EPS)
    print(f"n={n:4d}  cells={len(cells):5d}  C_greedy={k}  covered={float(mass):.4f}", flush=True)

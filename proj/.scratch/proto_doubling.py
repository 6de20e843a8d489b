"""Doubling map cell-mode greedy cover, n in {4,8,12,16}, eps=0.1.

Cells of the join over i<n are the 2^n dyadic intervals; name of cell k is
the bit pattern of k (coordinate i = bit i, MSB-first). Equal weights 2^-n.
Ball radius: hamming/n < 1/10  <=>  10*diffs < n.
"""
import heapq


def greedy(n):
    m = 1 << n
    kmax = (n - 1) // 10  # max diffs with 10*d < n
    # neighbors: all cells within hamming distance <= kmax (here kmax in {0,1})
    def ball(u):
        out = [u]
        if kmax >= 1:
            out += [u ^ (1 << b) for b in range(n)]
        return out

    covered = [False] * m
    ncov = 0
    target = 9 * m  # covered*10 > 9*m  <=> covered/m > 0.9
    # lazy greedy: key = (-gain, u)
    heap = [(-len(ball(u)), u) for u in range(m)]
    heapq.heapify(heap)
    picks = 0
    while 10 * ncov <= target:
        while True:
            negg, u = heapq.heappop(heap)
            gain = sum(1 for v in ball(u) if not covered[v])
            if -negg == gain:
                break
            heapq.heappush(heap, (-gain, u))
        for v in ball(u):
            if not covered[v]:
                covered[v] = True
                ncov += 1
        picks += 1
    return picks, ncov / m


prev = 0
vals = {}
for n in (4, 8, 12, 16):
    k, mass = greedy(n)
    vals[n] = k
    print(f"n={n:3d} C_greedy={k:5d} covered={mass:.5f} strict_increase={k > prev}", flush=True)
    prev = k
print("C16 >= 4*C8:", vals[16] >= 4 * vals[8])

"""Pure-Python reduction kernel (reference implementation and rational fallback).

Polynomials are pairs of lists ``(monos, coeffs)`` with packed monomials in
strictly descending order.  Over F_p coefficients are ints in [0, p); over Q
(``p == 0``) they are Fractions.
"""

from heapq import heapify, heappop, heappush

BACKEND = "python"


class KPoly:
    __slots__ = ("monos", "coeffs")

    def __init__(self, monos, coeffs):
        self.monos = monos
        self.coeffs = coeffs

    @property
    def lead(self):
        return self.monos[0]

    def __len__(self):
        return len(self.monos)

    def to_lists(self):
        return list(self.monos), list(self.coeffs)


class Basis:
    """A growing list of monic polynomials used as reducers."""

    def __init__(self, guard, cmask, p):
        self.guard = guard
        self.cmask = cmask
        self.p = p
        self.polys = []
        self.leads = []
        self.active = []

    def __len__(self):
        return len(self.polys)

    def make(self, monos, coeffs):
        return KPoly(list(monos), list(coeffs))

    def add(self, f):
        """Append f made monic; returns its index."""
        p = self.p
        c0 = f.coeffs[0]
        if p:
            if c0 != 1:
                inv = pow(c0, -1, p)
                coeffs = [c * inv % p for c in f.coeffs]
            else:
                coeffs = list(f.coeffs)
        else:
            coeffs = [c / c0 for c in f.coeffs] if c0 != 1 else list(f.coeffs)
        self.polys.append((list(f.monos), coeffs))
        self.leads.append(f.monos[0])
        self.active.append(True)
        return len(self.polys) - 1

    def replace(self, i, f):
        """Swap in a reduced form of element i with the same lead term."""
        assert f.monos[0] == self.leads[i]
        self.polys[i] = (list(f.monos), list(f.coeffs))

    def deactivate(self, i):
        self.active[i] = False

    def get(self, i):
        m, c = self.polys[i]
        return KPoly(list(m), list(c))

    def _reducers(self, exclude):
        return [(self.leads[k], k) for k in range(len(self.polys))
                if self.active[k] and k != exclude]

    def reduce(self, f, full=True, exclude=-1):
        acc = dict(zip(f.monos, f.coeffs))
        return self._run(acc, full, exclude)

    def spair(self, i, j, lcm, full=True):
        """Reduced S-polynomial of elements i and j (lcm of their leads given)."""
        mi, ci = self.polys[i]
        mj, cj = self.polys[j]
        si = lcm - mi[0]
        sj = lcm - mj[0]
        acc = {}
        p = self.p
        for k in range(1, len(mi)):
            acc[mi[k] + si] = ci[k]
        get = acc.get
        for k in range(1, len(mj)):
            t = mj[k] + sj
            acc[t] = get(t, 0) - cj[k]
        if p:
            for t in acc:
                acc[t] %= p
        return self._run(acc, full, -1)

    def _run(self, acc, full, exclude):
        p = self.p
        guard = self.guard
        cmask = self.cmask
        reducers = self._reducers(exclude)
        polys = self.polys
        heap = [-m for m in acc]
        heapify(heap)
        out_m = []
        out_c = []
        while heap:
            m = -heappop(heap)
            c = acc.pop(m, 0)
            if not c:
                continue
            if not full and out_m:
                out_m.append(m)
                out_c.append(c)
                continue
            mg = m | guard
            for lm, k in reducers:
                if (mg - lm) & guard == guard and not (lm ^ m) & cmask:
                    gm, gc = polys[k]
                    q = m - lm
                    get = acc.get
                    if p:
                        for t in range(1, len(gm)):
                            mono = gm[t] + q
                            old = get(mono)
                            if old is None:
                                acc[mono] = (-c * gc[t]) % p
                                heappush(heap, -mono)
                            else:
                                acc[mono] = (old - c * gc[t]) % p
                    else:
                        for t in range(1, len(gm)):
                            mono = gm[t] + q
                            old = get(mono)
                            if old is None:
                                acc[mono] = -c * gc[t]
                                heappush(heap, -mono)
                            else:
                                acc[mono] = old - c * gc[t]
                    break
            else:
                out_m.append(m)
                out_c.append(c)
        if not out_m:
            return None
        return KPoly(out_m, out_c)

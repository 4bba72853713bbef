# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled reduction kernel for prime fields.

Same interface as ``_kernels_py.Basis``.  Packed monomials are held as
fixed-width little-endian arrays of 64-bit limbs; add, subtract and compare
are done limb-wise with carries, so every bit trick on the Python ints
(the guard-bit divisibility test in particular) carries over unchanged.
Reduction is a sorted merge of the remaining tail with the scaled reducer.
"""

import sys

from libc.stdint cimport uint64_t
from libc.string cimport memcpy
from libcpp.vector cimport vector
from cpython.bytes cimport PyBytes_FromStringAndSize

from ._kernels_py import KPoly

if sys.byteorder != "little":  # pragma: no cover
    raise ImportError("compiled kernel assumes a little-endian host")

BACKEND = "compiled"
MAX_PRIME = 1 << 32


cdef inline int mcmp(const uint64_t* a, const uint64_t* b, int L) noexcept nogil:
    cdef int w
    for w in range(L - 1, -1, -1):
        if a[w] != b[w]:
            return 1 if a[w] > b[w] else -1
    return 0


cdef inline void madd(uint64_t* out, const uint64_t* a, const uint64_t* b, int L) noexcept nogil:
    cdef uint64_t carry = 0, s, t
    cdef int w
    for w in range(L):
        s = a[w] + carry
        carry = 1 if s < carry else 0
        t = s + b[w]
        if t < s:
            carry = 1
        out[w] = t


cdef inline void msub(uint64_t* out, const uint64_t* a, const uint64_t* b, int L) noexcept nogil:
    cdef uint64_t borrow = 0, s, t
    cdef int w
    for w in range(L):
        s = a[w] - borrow
        borrow = 1 if a[w] < borrow else 0
        t = s - b[w]
        if s < b[w]:
            borrow = 1
        out[w] = t


cdef inline bint mdivides(const uint64_t* lm, const uint64_t* m, const uint64_t* g,
                          const uint64_t* cm, int L) noexcept nogil:
    # ((m | g) - lm) & g == g, with the borrow running across limbs
    cdef uint64_t borrow = 0, a, s, t
    cdef int w
    for w in range(L):
        if (lm[w] ^ m[w]) & cm[w]:
            return False
    for w in range(L):
        a = m[w] | g[w]
        s = a - borrow
        borrow = 1 if a < borrow else 0
        t = s - lm[w]
        if s < lm[w]:
            borrow = 1
        if (t & g[w]) != g[w]:
            return False
    return True


cdef class Basis:
    """Monic reducers over F_p with limb-packed monomials."""

    cdef int L
    cdef uint64_t p
    cdef vector[uint64_t] g
    cdef vector[uint64_t] cm
    cdef vector[vector[uint64_t]] pm
    cdef vector[vector[uint64_t]] pc
    cdef vector[char] act
    cdef public list leads
    cdef readonly object guard, cmask

    def __init__(self, guard, cmask, p, nfields):
        if not 1 < p < MAX_PRIME:
            raise ValueError("compiled kernel needs a prime below 2^32")
        self.p = p
        # one spare limb so priority offsets above the top field still fit
        self.L = (16 * nfields + 63) // 64 + 1
        self.guard = guard
        self.cmask = cmask
        self.g.resize(self.L)
        self.cm.resize(self.L)
        self._load(guard, self.g.data())
        self._load(cmask, self.cm.data())
        self.leads = []

    def __len__(self):
        return self.pm.size()

    @property
    def active(self):
        return [bool(a) for a in self.act]

    @property
    def polys(self):
        return [self.get(i).to_lists() for i in range(self.pm.size())]

    cdef void _load(self, object m, uint64_t* dst) except *:
        cdef bytes b = m.to_bytes(8 * self.L, "little")
        memcpy(dst, <const char*>b, 8 * self.L)

    cdef object _unload(self, const uint64_t* src):
        return int.from_bytes(PyBytes_FromStringAndSize(<const char*>src, 8 * self.L), "little")

    cdef void _import(self, f, vector[uint64_t]& mon, vector[uint64_t]& co) except *:
        cdef Py_ssize_t n = len(f.monos), k
        cdef int L = self.L
        cdef uint64_t c
        mon.resize(n * L)
        co.resize(n)
        for k in range(n):
            self._load(f.monos[k], mon.data() + k * L)
            co[k] = f.coeffs[k] % self.p
        # the caller promises descending monomials; zero coefficients are dropped
        k = 0
        cdef Py_ssize_t j = 0
        for k in range(n):
            if co[k]:
                if j != k:
                    memcpy(mon.data() + j * L, mon.data() + k * L, 8 * L)
                    co[j] = co[k]
                j += 1
        mon.resize(j * L)
        co.resize(j)

    cdef object _export(self, vector[uint64_t]& mon, vector[uint64_t]& co):
        cdef Py_ssize_t n = co.size(), k
        if n == 0:
            return None
        monos = [self._unload(mon.data() + k * self.L) for k in range(n)]
        return KPoly(monos, [int(co[k]) for k in range(n)])

    def make(self, monos, coeffs):
        return KPoly(list(monos), list(coeffs))

    def add(self, f):
        """Append f made monic; returns its index."""
        cdef vector[uint64_t] mon, co
        cdef uint64_t inv
        cdef Py_ssize_t k
        self._import(f, mon, co)
        if co.size() == 0:
            raise ValueError("cannot add the zero polynomial")
        if co[0] != 1:
            inv = pow(int(co[0]), -1, int(self.p))
            for k in range(co.size()):
                co[k] = co[k] * inv % self.p
        self.pm.push_back(mon)
        self.pc.push_back(co)
        self.act.push_back(1)
        self.leads.append(self._unload(mon.data()))
        return self.pm.size() - 1

    def replace(self, Py_ssize_t i, f):
        """Swap in a reduced form of element i with the same lead term."""
        cdef vector[uint64_t] mon, co
        self._import(f, mon, co)
        if co.size() == 0 or mcmp(mon.data(), self.pm[i].data(), self.L) != 0:
            raise AssertionError("replacement changes the lead term")
        self.pm[i] = mon
        self.pc[i] = co

    def deactivate(self, Py_ssize_t i):
        self.act[i] = 0

    def get(self, Py_ssize_t i):
        return self._export(self.pm[i], self.pc[i])

    def reduce(self, f, full=True, Py_ssize_t exclude=-1):
        cdef vector[uint64_t] mon, co
        self._import(f, mon, co)
        self._run(mon, co, full, exclude)
        return self._export(mon, co)

    def spair(self, Py_ssize_t i, Py_ssize_t j, lcm, full=True):
        """Reduced S-polynomial of elements i and j (lcm of their leads given)."""
        cdef int L = self.L
        cdef vector[uint64_t] lc, si, sj, mon, co, out_m, out_c
        lc.resize(L)
        si.resize(L)
        sj.resize(L)
        self._load(lcm, lc.data())
        msub(si.data(), lc.data(), self.pm[i].data(), L)
        msub(sj.data(), lc.data(), self.pm[j].data(), L)
        cdef Py_ssize_t n = self.pc[i].size(), k
        mon.resize((n - 1) * L)
        co.resize(n - 1)
        for k in range(1, n):
            madd(mon.data() + (k - 1) * L, self.pm[i].data() + k * L, si.data(), L)
            co[k - 1] = self.pc[i][k]
        self._axpy(mon, co, 0, j, sj.data(), 1, out_m, out_c)
        self._run(out_m, out_c, full, -1)
        return self._export(out_m, out_c)

    cdef void _axpy(self, vector[uint64_t]& am, vector[uint64_t]& ac, Py_ssize_t start,
                    Py_ssize_t k, const uint64_t* q, uint64_t c,
                    vector[uint64_t]& om, vector[uint64_t]& oc) noexcept nogil:
        # om, oc := a[start:] - c * q * (poly k)[1:], merged in descending order
        cdef int L = self.L
        cdef uint64_t p = self.p
        cdef Py_ssize_t na = ac.size(), nb = self.pc[k].size()
        cdef const uint64_t* bm = self.pm[k].data()
        cdef const uint64_t* bc = self.pc[k].data()
        cdef vector[uint64_t] s
        cdef Py_ssize_t x = start, y = 1, w
        cdef int r
        cdef uint64_t v
        s.resize(L)
        om.clear()
        oc.clear()
        om.reserve((na - start + nb) * L)
        oc.reserve(na - start + nb)
        if y < nb:
            madd(s.data(), bm + y * L, q, L)
        while x < na and y < nb:
            r = mcmp(am.data() + x * L, s.data(), L)
            if r > 0:
                for w in range(L):
                    om.push_back(am[x * L + w])
                oc.push_back(ac[x])
                x += 1
            else:
                v = (p - c * bc[y] % p) % p
                if r == 0:
                    v = (ac[x] + v) % p
                    x += 1
                if v:
                    for w in range(L):
                        om.push_back(s[w])
                    oc.push_back(v)
                y += 1
                if y < nb:
                    madd(s.data(), bm + y * L, q, L)
        while x < na:
            for w in range(L):
                om.push_back(am[x * L + w])
            oc.push_back(ac[x])
            x += 1
        while y < nb:
            v = (p - c * bc[y] % p) % p
            if v:
                for w in range(L):
                    om.push_back(s[w])
                oc.push_back(v)
            y += 1
            if y < nb:
                madd(s.data(), bm + y * L, q, L)

    cdef void _run(self, vector[uint64_t]& mon, vector[uint64_t]& co, bint full,
                   Py_ssize_t exclude) noexcept nogil:
        cdef int L = self.L
        cdef vector[Py_ssize_t] red
        cdef vector[uint64_t] out_m, out_c, tm, tc, q
        cdef Py_ssize_t k, i = 0, found, w
        cdef const uint64_t* m
        q.resize(L)
        for k in range(<Py_ssize_t>self.pm.size()):
            if self.act[k] and k != exclude:
                red.push_back(k)
        while i < <Py_ssize_t>co.size():
            m = mon.data() + i * L
            if not full and out_c.size():
                for w in range(i * L, <Py_ssize_t>mon.size()):
                    out_m.push_back(mon[w])
                for w in range(i, <Py_ssize_t>co.size()):
                    out_c.push_back(co[w])
                break
            found = -1
            for k in range(<Py_ssize_t>red.size()):
                if mdivides(self.pm[red[k]].data(), m, self.g.data(), self.cm.data(), L):
                    found = red[k]
                    break
            if found < 0:
                for w in range(L):
                    out_m.push_back(m[w])
                out_c.push_back(co[i])
                i += 1
                continue
            msub(q.data(), m, self.pm[found].data(), L)
            self._axpy(mon, co, i + 1, found, q.data(), co[i], tm, tc)
            mon.swap(tm)
            co.swap(tc)
            i = 0
        mon.swap(out_m)
        co.swap(out_c)

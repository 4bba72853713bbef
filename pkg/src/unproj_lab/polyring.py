"""Exact coefficient fields, monomial orders and sparse graded polynomials.

Monomials are packed into a single Python integer made of 16-bit fields::

    [prio][order rows ...][component][exponents ...][degree]

Every field is a linear function of the exponent vector (plus a per-component
offset for module elements), so monomial multiplication is integer addition
and comparison under the monomial order is integer comparison.  The top bit of
each exponent field is kept clear, which makes divisibility a single
subtract-and-mask (see :meth:`Layout.divides`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

DEFAULT_PRIME = 32003

FIELD_BITS = 16
FIELD_MASK = (1 << FIELD_BITS) - 1
FIELD_HALF = 1 << (FIELD_BITS - 1)
MAX_EXPONENT = FIELD_HALF - 1

LT, EQ, GT = -1, 0, 1


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """The rationals (characteristic 0) or the prime field F_p."""

    __slots__ = ("p",)

    def __init__(self, characteristic: int = DEFAULT_PRIME):
        p = int(characteristic)
        if p != 0 and (p == 2 or p >= 2**31 or not _is_prime(p)):
            raise ValueError(f"characteristic must be 0 or an odd prime < 2^31, got {p}")
        self.p = p

    @property
    def characteristic(self) -> int:
        return self.p

    def __call__(self, x):
        p = self.p
        if p:
            if isinstance(x, Fraction):
                den = x.denominator % p
                if den == 0:
                    raise ZeroDivisionError(f"{x} is not invertible mod {p}")
                return x.numerator * pow(den, -1, p) % p
            return int(x) % p
        if isinstance(x, Fraction):
            return x
        return Fraction(x)

    def inv(self, x):
        if self.p:
            if x % self.p == 0:
                raise ZeroDivisionError("inverse of zero")
            return pow(x, -1, self.p)
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)

    def to_str(self, c) -> str:
        if self.p:
            c = c if c <= self.p // 2 else c - self.p
            return str(c)
        return str(c)

    def signed(self, c):
        """Representative used for printing: symmetric residue or the rational itself."""
        if self.p and c > self.p // 2:
            return c - self.p
        return c

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p == 0 else f"GF({self.p})"


class MonomialOrder:
    """A global monomial order, realised as a nonnegative integer weight matrix.

    ``kind`` is one of ``grevlex``, ``lex``, ``wgrevlex`` (``weights`` first,
    grevlex tie-break) or ``block`` (the first ``block`` variables are compared
    by total degree and ``inner`` order before the rest; this eliminates them).
    ``perm`` lists variable indices in the sequence the order sees them.
    """

    KINDS = ("grevlex", "lex", "wgrevlex", "block")

    def __init__(self, kind="grevlex", block=None, weights=None, inner="grevlex", perm=None):
        if kind not in self.KINDS:
            raise ValueError(f"unknown monomial order {kind!r}")
        if kind == "block" and (block is None or block < 1):
            raise ValueError("block order needs a positive block size")
        if kind == "wgrevlex" and (not weights or any(w <= 0 for w in weights)):
            raise ValueError("wgrevlex needs positive weights")
        if inner not in ("grevlex", "lex"):
            raise ValueError(f"unknown inner order {inner!r}")
        self.kind = kind
        self.block = block
        self.weights = tuple(weights) if weights else None
        self.inner = inner
        self.perm = tuple(perm) if perm is not None else None

    def _ident(self):
        return (self.kind, self.block, self.weights, self.inner, self.perm)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self._ident() == other._ident()

    def __hash__(self):
        return hash(self._ident())

    def __repr__(self):
        if self.kind == "block":
            s = f"block({self.block},{self.inner})"
        elif self.kind == "wgrevlex":
            s = f"wgrevlex{self.weights}"
        else:
            s = self.kind
        return s if self.perm is None else f"{s}@{list(self.perm)}"

    def rows(self, n: int) -> list[tuple[int, ...]]:
        perm = self.perm if self.perm is not None else tuple(range(n))
        if sorted(perm) != list(range(n)):
            raise ValueError("order permutation does not match the variable count")

        def grev(idx):
            # rows over the positions idx: total degree, then drop trailing vars
            out = []
            for cut in range(len(idx), 0, -1):
                out.append(idx[:cut])
            return out

        def lex(idx):
            return [idx[k:k + 1] for k in range(len(idx))]

        inner = grev if self.inner == "grevlex" else lex
        supports: list[tuple] = []
        if self.kind == "grevlex":
            supports = grev(perm)
        elif self.kind == "lex":
            supports = lex(perm)
        elif self.kind == "wgrevlex":
            if len(self.weights) != n:
                raise ValueError("weight vector length does not match the variable count")
            w = [0] * n
            for pos, v in enumerate(perm):
                w[v] = self.weights[pos]
            result = [tuple(w)]
            for sup in grev(perm):
                result.append(tuple(1 if v in sup else 0 for v in range(n)))
            return result
        else:
            k = min(self.block, n)
            front, back = perm[:k], perm[k:]
            supports.append(front)
            supports.extend(inner(front)[1:] if self.inner == "grevlex" else inner(front))
            if back:
                supports.append(back)
                supports.extend(inner(back)[1:] if self.inner == "grevlex" else inner(back))
        return [tuple(1 if v in sup else 0 for v in range(n)) for sup in supports]

    def key(self, exps: Sequence[int]) -> tuple:
        return tuple(sum(r[v] * e for v, e in enumerate(exps)) for r in self.rows(len(exps)))


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def block_order(k: int, inner: str = "grevlex", perm=None) -> MonomialOrder:
    return MonomialOrder("block", block=k, inner=inner, perm=perm)


@dataclass(frozen=True)
class Monomial:
    exps: tuple

    @property
    def degree(self) -> int:
        return sum(self.exps)

    def multidegree(self, grading) -> tuple:
        dim = len(grading[0]) if grading else 0
        out = [0] * dim
        for e, g in zip(self.exps, grading):
            for k in range(dim):
                out[k] += e * g[k]
        return tuple(out)

    def __mul__(self, other):
        return Monomial(tuple(a + b for a, b in zip(self.exps, other.exps)))


def monomial_compare(order: MonomialOrder, m1, m2) -> int:
    """Return LT, EQ or GT comparing two monomials (exponent tuples or Monomial)."""
    e1 = m1.exps if isinstance(m1, Monomial) else tuple(m1)
    e2 = m2.exps if isinstance(m2, Monomial) else tuple(m2)
    if len(e1) != len(e2):
        raise ValueError("monomials live in different rings")
    k1, k2 = order.key(e1), order.key(e2)
    return (k1 > k2) - (k1 < k2)


class Layout:
    """Bit layout of packed monomials for one variable count and order."""

    def __init__(self, nvars: int, rows: list, deg_weights=None):
        n = nvars
        self.n = n
        self.rows = [tuple(r) for r in rows]
        nr = len(self.rows)
        self.nrows = nr
        W = FIELD_BITS
        self.deg_weights = tuple(deg_weights) if deg_weights is not None else (1,) * n
        self.exp_shift = [W * (1 + (n - 1 - v)) for v in range(n)]
        self.comp_shift = W * (1 + n)
        self.row_shift = [W * (2 + n + (nr - 1 - r)) for r in range(nr)]
        self.prio_shift = W * (2 + n + nr)
        self.nfields = 3 + n + nr
        units = []
        for v in range(n):
            u = self.deg_weights[v] + (1 << self.exp_shift[v])
            for r in range(nr):
                if self.rows[r][v]:
                    u += self.rows[r][v] << self.row_shift[r]
            units.append(u)
        self.units = units
        self.guard = sum(FIELD_HALF << s for s in self.exp_shift)
        self.expmask = sum(FIELD_MASK << s for s in self.exp_shift)
        self.low_exp_shift = self.exp_shift[-1] if n else W
        self.cmask = FIELD_MASK << self.comp_shift
        # everything below the component field except the degree
        self.ringmask = (1 << self.comp_shift) - 1

    def encode(self, exps, base: int = 0) -> int:
        m = base
        units = self.units
        for v, e in enumerate(exps):
            if e:
                if e > MAX_EXPONENT or e < 0:
                    raise OverflowError(f"exponent {e} out of range")
                m += e * units[v]
        return m

    def decode(self, m: int) -> tuple:
        return tuple((m >> s) & FIELD_MASK for s in self.exp_shift)

    @staticmethod
    def degree(m: int) -> int:
        return m & FIELD_MASK

    def comp(self, m: int) -> int:
        return (m >> self.comp_shift) & FIELD_MASK

    def divides(self, a: int, b: int) -> bool:
        """True iff monomial a divides b (and they sit in the same component)."""
        g = self.guard
        return ((b | g) - a) & g == g and (a ^ b) & self.cmask == 0

    def lcm(self, a: int, b: int) -> int:
        """lcm of two monomials of the same component; keeps a's non-exponent offset."""
        ea, eb = self.decode(a), self.decode(b)
        units = self.units
        m = a
        for v in range(self.n):
            if eb[v] > ea[v]:
                m += (eb[v] - ea[v]) * units[v]
        return m

    def is_coprime(self, a: int, b: int) -> bool:
        ea, eb = self.decode(a), self.decode(b)
        return not any(x and y for x, y in zip(ea, eb))

    def base_offset(self, m: int) -> int:
        """The non-monomial part of a packed term: m minus its exponent contribution."""
        return m - self.encode(self.decode(m))


class PolyRing:
    """Polynomial ring k[x_1..x_n] with a fixed active monomial order."""

    def __init__(self, names, characteristic: int = DEFAULT_PRIME, order: MonomialOrder = GREVLEX,
                 degrees=None):
        if isinstance(names, str):
            names = names.replace(",", " ").split()
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        for nm in names:
            if not _is_identifier(nm):
                raise ValueError(f"bad variable name {nm!r}")
        self.names = names
        self.field = characteristic if isinstance(characteristic, Field) else Field(characteristic)
        self.order = order
        self.degrees = tuple(degrees) if degrees is not None else (1,) * len(names)
        self.layout = Layout(len(names), order.rows(len(names)), self.degrees)
        self.index = {nm: i for i, nm in enumerate(names)}
        self._variants = {}

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def characteristic(self) -> int:
        return self.field.p

    def _ident(self):
        return (self.names, self.field.p, self.order, self.degrees)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self._ident() == other._ident()

    def __hash__(self):
        return hash(self._ident())

    def __repr__(self):
        return f"PolyRing({' '.join(self.names)} over {self.field}, {self.order!r})"

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        if order == self.order:
            return self
        r = self._variants.get(order)
        if r is None:
            r = PolyRing(self.names, self.field, order, self.degrees)
            self._variants[order] = r
        return r

    def with_field(self, characteristic: int) -> "PolyRing":
        return PolyRing(self.names, characteristic, self.order, self.degrees)

    def zero(self) -> "Polynomial":
        return Polynomial(self, (), ())

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        c = self.field(c)
        if not c:
            return self.zero()
        return Polynomial(self, (0,), (c,))

    def var(self, name) -> "Polynomial":
        i = self.index[name] if isinstance(name, str) else int(name)
        return Polynomial(self, (self.layout.units[i],), (self.field(1),))

    def gens(self) -> list:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps, coeff=1) -> "Polynomial":
        c = self.field(coeff)
        if not c:
            return self.zero()
        return Polynomial(self, (self.layout.encode(exps),), (c,))

    def from_dict(self, d: dict) -> "Polynomial":
        """Build from {exponent tuple: coefficient}."""
        lay = self.layout
        acc = {}
        F = self.field
        for e, c in d.items():
            m = lay.encode(e)
            acc[m] = acc.get(m, 0) + F(c)
        return Polynomial._from_acc(self, acc)

    def from_terms(self, monos, coeffs) -> "Polynomial":
        """Wrap packed data that is already sorted and nonzero (kernel output)."""
        return Polynomial(self, tuple(monos), tuple(coeffs))

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(text, self)

    def __call__(self, x) -> "Polynomial":
        if isinstance(x, Polynomial):
            return x.to_ring(self)
        if isinstance(x, str):
            return self.parse(x)
        return self.constant(x)


def _is_identifier(s: str) -> bool:
    if not s or not (s[0].isalpha() or s[0] == "_") or not s.isascii():
        return False
    return all(ch.isalnum() or ch == "_" for ch in s)


class Polynomial:
    """Immutable polynomial: packed monomials strictly descending in the ring order."""

    __slots__ = ("ring", "monos", "coeffs", "_hash")

    def __init__(self, ring: PolyRing, monos: tuple, coeffs: tuple):
        self.ring = ring
        self.monos = monos
        self.coeffs = coeffs
        self._hash = None

    @classmethod
    def _from_acc(cls, ring, acc: dict) -> "Polynomial":
        p = ring.field.p
        if p:
            items = [(m, c % p) for m, c in acc.items() if c % p]
        else:
            items = [(m, c) for m, c in acc.items() if c]
        items.sort(reverse=True)
        return cls(ring, tuple(m for m, _ in items), tuple(c for _, c in items))

    # -- basic queries -------------------------------------------------
    def is_zero(self) -> bool:
        return not self.monos

    def __bool__(self):
        return bool(self.monos)

    def __len__(self):
        return len(self.monos)

    def terms(self):
        dec = self.ring.layout.decode
        return [(dec(m), c) for m, c in zip(self.monos, self.coeffs)]

    def as_dict(self) -> dict:
        return dict(self.terms())

    def lead_exps(self) -> tuple:
        return self.ring.layout.decode(self.monos[0])

    def lead_monomial(self) -> Monomial:
        return Monomial(self.lead_exps())

    def lead_coeff(self):
        return self.coeffs[0]

    def degree(self) -> int:
        if not self.monos:
            return -1
        return max(m & FIELD_MASK for m in self.monos)

    def is_homogeneous(self) -> bool:
        if not self.monos:
            return True
        d = self.monos[0] & FIELD_MASK
        return all((m & FIELD_MASK) == d for m in self.monos)

    def is_constant(self) -> bool:
        return not self.monos or (len(self.monos) == 1 and self.monos[0] == 0)

    def degree_in(self, var) -> int:
        i = self.ring.index[var] if isinstance(var, str) else int(var)
        s = self.ring.layout.exp_shift[i]
        if not self.monos:
            return -1
        return max((m >> s) & FIELD_MASK for m in self.monos)

    def variables(self) -> set:
        out = set()
        for e, _ in self.terms():
            out.update(i for i, x in enumerate(e) if x)
        return out

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError("ring mismatch")
            return other
        return self.ring.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        acc = dict(zip(self.monos, self.coeffs))
        for m, c in zip(other.monos, other.coeffs):
            acc[m] = acc.get(m, 0) + c
        return Polynomial._from_acc(self.ring, acc)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.field.p
        if p:
            return Polynomial(self.ring, self.monos, tuple(p - c for c in self.coeffs))
        return Polynomial(self.ring, self.monos, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(self.ring.field(other))
        other = self._coerce(other)
        if len(other.monos) > len(self.monos):
            a, b = other, self
        else:
            a, b = self, other
        acc = {}
        get = acc.get
        for mb, cb in zip(b.monos, b.coeffs):
            for ma, ca in zip(a.monos, a.coeffs):
                k = ma + mb
                acc[k] = get(k, 0) + ca * cb
        return Polynomial._from_acc(self.ring, acc)

    __rmul__ = __mul__

    def scale(self, c) -> "Polynomial":
        p = self.ring.field.p
        if p:
            c %= p
            if not c:
                return self.ring.zero()
            return Polynomial(self.ring, self.monos, tuple(x * c % p for x in self.coeffs))
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, self.monos, tuple(x * c for x in self.coeffs))

    def mul_monomial(self, exps, c=1) -> "Polynomial":
        s = self.ring.layout.encode(exps)
        out = Polynomial(self.ring, tuple(m + s for m in self.monos), self.coeffs)
        return out if c == 1 else out.scale(self.ring.field(c))

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def monic(self) -> "Polynomial":
        if not self.monos:
            return self
        return self.scale(self.ring.field.inv(self.coeffs[0]))

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.monos == other.monos and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == self.ring.constant(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.monos, self.coeffs))
        return self._hash

    # -- structure -----------------------------------------------------
    def coefficient_of_power(self, var, i: int) -> "Polynomial":
        """Coefficient of var^i, as a polynomial (same ring) free of var."""
        v = self.ring.index[var] if isinstance(var, str) else int(var)
        lay = self.ring.layout
        s = lay.exp_shift[v]
        shift = i * lay.units[v]
        acc = {}
        for m, c in zip(self.monos, self.coeffs):
            if (m >> s) & FIELD_MASK == i:
                acc[m - shift] = c
        return Polynomial._from_acc(self.ring, acc)

    def evaluate(self, point):
        """Value at a point given as field elements (or ints), one per variable."""
        F = self.ring.field
        total = F(0)
        for e, c in self.terms():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = term * F(x) ** k
            total = total + term
        return F(total)

    def homogeneous_part(self, d: int) -> "Polynomial":
        keep = [(m, c) for m, c in zip(self.monos, self.coeffs) if m & FIELD_MASK == d]
        return Polynomial(self.ring, tuple(m for m, _ in keep), tuple(c for _, c in keep))

    def to_ring(self, ring: PolyRing, name_map: dict | None = None) -> "Polynomial":
        """Move to another ring by variable name (re-encodes under its order)."""
        if ring == self.ring:
            return self if ring is self.ring else Polynomial(ring, self.monos, self.coeffs)
        idx = []
        for nm in self.ring.names:
            target = name_map.get(nm, nm) if name_map else nm
            idx.append(ring.index.get(target))
        n = ring.nvars
        acc = {}
        lay = ring.layout
        F = ring.field
        src_p = self.ring.field.p
        for e, c in self.terms():
            out = [0] * n
            for v, x in enumerate(e):
                if x:
                    if idx[v] is None:
                        raise ValueError(f"variable {self.ring.names[v]} missing from target ring")
                    out[idx[v]] += x
            if src_p and not F.p:
                c = F(c if c <= src_p // 2 else c - src_p)
            m = lay.encode(out)
            acc[m] = acc.get(m, 0) + F(c)
        return Polynomial._from_acc(ring, acc)

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def format_polynomial(f: Polynomial) -> str:
    if not f.monos:
        return "0"
    names = f.ring.names
    F = f.ring.field
    parts = []
    for k, (e, c) in enumerate(f.terms()):
        c = F.signed(c)
        neg = c < 0
        a = -c if neg else c
        mono = "*".join(nm if x == 1 else f"{nm}^{x}" for nm, x in zip(names, e) if x)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if k == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


# ---------------------------------------------------------------------------
# parsing

class ParseError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class UnknownVariableError(ParseError):
    pass


def _tokenize(text: str):
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("int", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_") and text[j].isascii():
                j += 1
            toks.append(("id", text[i:j], i))
            i = j
        elif ch in "+-*^()/":
            toks.append((ch, ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text, ring):
        self.toks = _tokenize(text)
        self.k = 0
        self.ring = ring

    def peek(self):
        return self.toks[self.k]

    def take(self, kind=None):
        t = self.toks[self.k]
        if kind is not None and t[0] != kind:
            what = "end of input" if t[0] == "end" else repr(t[1])
            raise ParseError(f"expected {kind!r}, found {what}", t[2])
        self.k += 1
        return t

    def expr(self):
        left = self.term()
        while self.peek()[0] in "+-" and self.peek()[0] != "end":
            op = self.take()[0]
            right = self.term()
            left = left + right if op == "+" else left - right
        return left

    def term(self):
        left = self.unary()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.take()
            right = self.unary()
            if op == "*":
                left = left * right
            else:
                if not right.is_constant() or right.is_zero():
                    raise ParseError("division only by nonzero constants", pos)
                try:
                    left = left * self.ring.field.inv(right.coeffs[0])
                except ZeroDivisionError:
                    raise ParseError("coefficient not invertible mod p", pos) from None
        return left

    def unary(self):
        t = self.peek()
        if t[0] == "-":
            self.take()
            return -self.unary()
        if t[0] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            e = self.take("int")
            base = base ** int(e[1])
        return base

    def atom(self):
        t = self.peek()
        if t[0] == "int":
            self.take()
            return self.ring.constant(int(t[1]))
        if t[0] == "id":
            self.take()
            if t[1] not in self.ring.index:
                raise UnknownVariableError(f"unknown variable {t[1]!r}", t[2])
            return self.ring.var(t[1])
        if t[0] == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        what = "end of input" if t[0] == "end" else repr(t[1])
        raise ParseError(f"unexpected {what}", t[2])


def parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    """Parse ``text`` (integers, ring variables, + - * ^, parentheses) into ``ring``."""
    p = _Parser(text, ring)
    if p.peek()[0] == "end":
        raise ParseError("empty polynomial", 0)
    f = p.expr()
    t = p.peek()
    if t[0] != "end":
        raise ParseError(f"unexpected {t[1]!r}", t[2])
    return f


# ---------------------------------------------------------------------------
# ring maps

class RingMap:
    """Substitution homomorphism source -> target given by images of the variables."""

    def __init__(self, source: PolyRing, target: PolyRing, images, degree: int | None = None):
        if isinstance(images, dict):
            images = [images.get(nm, target.var(nm) if nm in target.index else None)
                      for nm in source.names]
        images = [target(x) if not isinstance(x, Polynomial) else x for x in images]
        if len(images) != source.nvars:
            raise ValueError("one image per source variable is required")
        for im in images:
            if im is None:
                raise ValueError("missing image")
            if im.ring != target:
                raise ValueError("image outside the target ring")
        if degree is not None:
            for nm, im in zip(source.names, images):
                if im and (not im.is_homogeneous() or im.degree() != degree):
                    raise ValueError(f"image of {nm} is not homogeneous of degree {degree}")
        self.source = source
        self.target = target
        self.images = tuple(images)
        self.degree = degree

    def __call__(self, f: Polynomial) -> Polynomial:
        return apply_map(self, f)


def apply_map(phi: RingMap, f: Polynomial) -> Polynomial:
    if f.ring != phi.source:
        raise ValueError("ring mismatch: polynomial is not in the source ring")
    tgt = phi.target
    powers: dict = {}

    def pw(v, e):
        key = (v, e)
        r = powers.get(key)
        if r is None:
            r = phi.images[v] ** e
            powers[key] = r
        return r

    acc: dict = {}
    F = tgt.field
    src_p = f.ring.field.p
    for e, c in f.terms():
        if src_p and not F.p:
            c = c if c <= src_p // 2 else c - src_p
        term = tgt.constant(c)
        for v, x in enumerate(e):
            if x:
                term = term * pw(v, x)
                if not term:
                    break
        for m, cc in zip(term.monos, term.coeffs):
            acc[m] = acc.get(m, 0) + cc
    return Polynomial._from_acc(tgt, acc)


def coefficient_of_power(poly: Polynomial, var, i: int) -> Polynomial:
    if i < 0:
        raise ValueError("power must be nonnegative")
    return poly.coefficient_of_power(var, i)


def multigrade_select(polys: Iterable, grading, target) -> list:
    """Keep the inputs whose every term has multidegree exactly ``target``.

    ``grading`` gives one vector per ring variable (list, or dict keyed by name).
    """
    polys = list(polys)
    if not polys:
        return []
    ring = polys[0].ring
    vecs = _grading_vectors(ring, grading)
    target = tuple(target)
    if any(len(v) != len(target) for v in vecs):
        raise ValueError("dimension mismatch between grading vectors and target")
    out = []
    for f in polys:
        if not f:
            continue
        if all(Monomial(e).multidegree(vecs) == target for e, _ in f.terms()):
            out.append(f)
    return out


def _grading_vectors(ring: PolyRing, grading):
    if isinstance(grading, dict):
        vecs = [tuple(grading[nm]) for nm in ring.names]
    else:
        vecs = [tuple(g) for g in grading]
    if len(vecs) != ring.nvars:
        raise ValueError("need one grading vector per variable")
    dims = {len(v) for v in vecs}
    if len(dims) > 1:
        raise ValueError("dimension mismatch between grading vectors")
    return vecs


def monomials_of_multidegree(ring: PolyRing, grading, target) -> list:
    """All monomials of ``ring`` with multidegree ``target`` (finite gradings only)."""
    vecs = _grading_vectors(ring, grading)
    target = tuple(target)
    if any(len(v) != len(target) for v in vecs):
        raise ValueError("dimension mismatch between grading vectors and target")
    if any(min(v) < 0 or not any(v) for v in vecs):
        raise ValueError("enumeration needs nonzero nonnegative grading vectors")
    n = ring.nvars
    out = []

    def rec(v, rest, exps):
        if v == n:
            if not any(rest):
                out.append(ring.monomial(exps))
            return
        vec = vecs[v]
        e = 0
        cur = list(rest)
        while all(x >= 0 for x in cur):
            rec(v + 1, cur, exps + [e])
            e += 1
            cur = [x - y for x, y in zip(cur, vec)]

    rec(0, list(target), [])
    out.sort(key=lambda f: f.monos[0], reverse=True)
    return out

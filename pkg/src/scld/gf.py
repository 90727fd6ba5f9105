"""Finite-field arithmetic over GF(p^k).

Elements are plain integers ``0 <= a < p**k``: the base-p digits of ``a``
are the polynomial-basis coefficients (digit ``i`` multiplies ``x**i``).
For ``p = 2`` this is the usual bit-vector representation, so an element of
GF(2^l) *is* its length-l binary string.

``FieldElement`` wraps an integer together with its field for operator
syntax; the hot paths (constructions, decoding) call the ``Field`` methods
on bare integers.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import FieldError

MAX_ORDER = 1 << 20
TABLE_LIMIT = 1 << 16

# Primitive polynomials over GF(2): exponents of the non-leading terms.
BINARY_MODULI = {
    1: (0,),
    2: (1, 0),
    3: (1, 0),
    4: (1, 0),
    5: (2, 0),
    6: (1, 0),
    7: (1, 0),
    8: (4, 3, 2, 0),
    9: (4, 0),
    10: (3, 0),
    11: (2, 0),
    12: (6, 4, 1, 0),
    13: (4, 3, 1, 0),
    14: (10, 6, 1, 0),
    15: (1, 0),
    16: (12, 3, 1, 0),
    17: (3, 0),
    18: (7, 0),
    19: (5, 2, 1, 0),
    20: (3, 0),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``q == p**k`` or ``None``."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if q % p == 0:
            if not is_prime(p):
                return None
            k = 0
            while q % p == 0:
                q //= p
                k += 1
            return (p, k) if q == 1 else None
    return None


# -- polynomial helpers over GF(p), coefficient lists low -> high -----------

def _poly_mulmod(a: Sequence[int], b: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    k = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # mod is monic
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for j in range(k + 1):
                prod[d - k + j] = (prod[d - k + j] - c * mod[j]) % p
    out = prod[:k]
    return out + [0] * (k - len(out))


def _poly_powmod_x(e: int, mod: Sequence[int], p: int) -> list[int]:
    k = len(mod) - 1
    result = [1] + [0] * (k - 1)
    base = _poly_mulmod([0, 1], [1], mod, p) if k > 1 else [(-mod[0]) % p]
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def is_primitive_polynomial(mod: Sequence[int], p: int) -> bool:
    """True iff the monic ``mod`` has a root generating GF(p^k)^*.

    A reducible polynomial cannot pass: its quotient ring has fewer than
    ``p**k - 1`` units, so ``x`` cannot have that order.
    """
    k = len(mod) - 1
    if mod[-1] != 1 or mod[0] % p == 0:
        return False
    n = p**k - 1
    one = [1] + [0] * (k - 1)
    if _poly_powmod_x(n, mod, p) != one:
        return False
    return all(_poly_powmod_x(n // r, mod, p) != one for r in prime_factors(n))


def is_irreducible_polynomial(mod: Sequence[int], p: int) -> bool:
    """Exhaustive check: no monic factor of degree 1..k/2 divides ``mod``."""
    k = len(mod) - 1
    if k <= 1:
        return True
    for d in range(1, k // 2 + 1):
        for idx in range(p**d):
            cand = [(idx // p**i) % p for i in range(d)] + [1]
            if _poly_divides(cand, mod, p):
                return False
    return True


def _poly_divides(f: Sequence[int], g: Sequence[int], p: int) -> bool:
    r = list(g)
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    for d in range(len(r) - 1, df - 1, -1):
        c = r[d] * inv_lead % p
        if c:
            for j in range(df + 1):
                r[d - df + j] = (r[d - df + j] - c * f[j]) % p
    return not any(r[:df])


def _search_modulus(p: int, k: int) -> tuple[int, ...]:
    """Least primitive monic polynomial of degree k (base-p order of c_0..c_{k-1})."""
    for idx in range(p**k):
        low = [(idx // p**i) % p for i in range(k)]
        mod = low + [1]
        if mod[0] == 0:
            continue
        if is_primitive_polynomial(mod, p):
            return tuple(mod)
    raise FieldError("field unsupported")


def _binary_modulus(k: int) -> tuple[int, ...]:
    coeffs = [0] * (k + 1)
    coeffs[k] = 1
    for e in BINARY_MODULI[k]:
        coeffs[e] = 1
    return tuple(coeffs)


class Field:
    """GF(p^k) with a fixed modulus; immutable after construction."""

    def __init__(self, p: int, k: int, modulus: Sequence[int]):
        self.p = p
        self.k = k
        self.modulus = tuple(modulus)
        self.order = p**k
        if k == 1:
            self.generator = (-self.modulus[0]) % p
        else:
            self.generator = p
        if p == 2:
            self._modmask = sum(c << i for i, c in enumerate(self.modulus))
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        if self.order <= TABLE_LIMIT:
            self._build_tables()

    def __repr__(self) -> str:
        return f"Field(p={self.p}, k={self.k}, modulus={self.modulus})"

    # -- representation --------------------------------------------------
    def coeffs(self, a: int) -> tuple[int, ...]:
        p = self.p
        return tuple((a // p**i) % p for i in range(self.k))

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) != self.k or any(not 0 <= c < self.p for c in coeffs):
            raise FieldError("bad coefficient vector")
        return sum(c * self.p**i for i, c in enumerate(coeffs))

    def elements(self) -> range:
        return range(self.order)

    def element(self, value: int) -> FieldElement:
        if not 0 <= value < self.order:
            raise FieldError("element out of range")
        return FieldElement(self, value)

    # -- arithmetic ------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.k == 1:
            return (a + b) % self.p
        p = self.p
        out, scale = 0, 1
        for _ in range(self.k):
            out += ((a % p + b % p) % p) * scale
            a //= p
            b //= p
            scale *= p
        return out

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return self.from_coeffs([(-c) % self.p for c in self.coeffs(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._log is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._slow_mul(a, b)

    def _slow_mul(self, a: int, b: int) -> int:
        if self.p == 2:
            r = 0
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
                if a >> self.k:
                    a ^= self._modmask
            return r
        if self.k == 1:
            return a * b % self.p
        prod = _poly_mulmod(self.coeffs(a), self.coeffs(b), self.modulus, self.p)
        return self.from_coeffs(prod)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        if self._log is not None:
            return self._exp[(self._log[a] * e) % (self.order - 1)]
        e %= self.order - 1
        r = 1
        while e:
            if e & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return r

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldError("zero divisor")
        if self._log is not None:
            return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def square(self, a: int) -> int:
        return self.mul(a, a)

    def multiplicative_order(self, a: int) -> int:
        if a == 0:
            raise FieldError("zero has no multiplicative order")
        n = self.order - 1
        for r in prime_factors(n):
            while n % r == 0 and self.pow(a, n // r) == 1:
                n //= r
        return n

    def is_primitive(self, a: int) -> bool:
        return a != 0 and self.multiplicative_order(a) == self.order - 1

    def _build_tables(self) -> None:
        n = self.order - 1
        exp = [0] * (2 * n + 1)
        log = [0] * self.order
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, self.generator)
        if x != 1 or (n > 1 and len(set(exp[:n])) != n):
            raise FieldError("modulus is not primitive")
        for i in range(n, 2 * n + 1):
            exp[i] = exp[i - n]
        self._exp, self._log = exp, log


@dataclass(frozen=True)
class FieldElement:
    field: Field
    value: int

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldError("elements of different fields")
            return other.value
        if isinstance(other, int) and 0 <= other < self.field.order:
            return other
        return NotImplemented

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._other(other)))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._other(other)))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.value))

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.value)

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"GF({self.field.order})[{self.value}]"


@lru_cache(maxsize=None)
def field_create(p: int, k: int = 1) -> Field:
    """Return GF(p^k) with the package's fixed modulus for ``(p, k)``.

    Binary moduli come from a table of low-weight primitive polynomials;
    odd characteristics use the least primitive polynomial, so the same
    ``(p, k)`` always yields the same field.
    """
    if not is_prime(p):
        raise FieldError("p not prime")
    if k < 1 or p**k > MAX_ORDER:
        raise FieldError("field unsupported")
    if p == 2:
        modulus = _binary_modulus(k)
    elif k == 1:
        g = next(g for g in range(1, p) if p == 2 or all(pow(g, (p - 1) // r, p) != 1 for r in prime_factors(p - 1)))
        modulus = ((-g) % p, 1)
    else:
        modulus = _search_modulus(p, k)
    return Field(p, k, modulus)


def field_of_order(q: int) -> Field:
    pk = prime_power(q)
    if pk is None:
        raise FieldError(f"{q} is not a prime power")
    return field_create(*pk)


# -- characteristic-2 operations -------------------------------------------

def _require_binary(field: Field) -> None:
    if field.p != 2:
        raise FieldError("characteristic 2 required")


def trace(field: Field, a: int) -> int:
    """Absolute trace ``sum_{i<l} a^(2^i)``; always 0 or 1."""
    _require_binary(field)
    s, x = 0, a
    for _ in range(field.k):
        s ^= x
        x = field.mul(x, x)
    if s not in (0, 1):
        raise FieldError("trace outside GF(2)")
    return s


def find_primitive_trace_one(field: Field) -> int:
    """Least primitive element (integer order) whose trace is 1."""
    _require_binary(field)
    if field.k < 2:
        raise FieldError("degree >= 2 required")
    return _primitive_trace_one(field)


@lru_cache(maxsize=None)
def _primitive_trace_one(field: Field) -> int:
    for a in range(2, field.order):
        if trace(field, a) == 1 and field.is_primitive(a):
            return a
    raise FieldError("no primitive element of trace 1 found")


def _frob_sum(field: Field, a: int, exponents: Sequence[int]) -> int:
    s = 0
    for e in exponents:
        s ^= field.pow(a, e)
    return s


def _split_sum(field: Field, a: int, l: int) -> int:
    """The double sum S from the l = 0 (mod 4) cases."""
    m = l // 4
    h = l // 2
    s = 0
    for j in range(1, m):
        for i in range(j, m):
            s ^= field.pow(a, 2 ** (2 * i - 1 + h) + 2 ** (2 * j - 2))
    return s


def _tail(field: Field, a: int, l: int) -> int:
    m = l // 4
    h = l // 2
    inner = 1 ^ _frob_sum(field, a, [2 ** (2 * i + h) for i in range(m)])
    return field.mul(field.pow(a, 2 ** (l - 1)), inner)


def solve_quadratic_z(field: Field, k: int) -> int:
    """Return ``z`` with ``z^2 + z + k = 0``; the other root is ``z + 1``.

    Follows the five-case closed form keyed on ``l mod 4`` and the partial
    trace ``T(k)``. The result is checked before returning.
    """
    _require_binary(field)
    l = field.k
    if trace(field, k) == 1:
        raise FieldError("no root in field")
    if l % 2 == 1:
        z = _frob_sum(field, k, [2 ** (2 * i) for i in range((l - 1) // 2 + 1)])
    else:
        T = _frob_sum(field, k, [2 ** (2 * i) for i in range((l - 2) // 2 + 1)])
        if T not in (0, 1):
            raise FieldError("formula mismatch")
        if l % 4 == 2:
            kk = k ^ field.mul(k, k)
            z = _frob_sum(field, kk, [2 ** (2 + 4 * i) for i in range((l - 6) // 4 + 1)])
            if T == 1:
                omega = find_primitive_trace_one(field)
                z ^= field.pow(omega, (2**l - 1) // 3)
        elif T == 1:
            S = _split_sum(field, k, l)
            z = S ^ field.mul(S, S) ^ _tail(field, k, l)
        else:
            omega = find_primitive_trace_one(field)
            kk = omega ^ field.mul(omega, omega) ^ k
            S1 = _split_sum(field, kk, l)
            z = omega ^ S1 ^ field.mul(S1, S1) ^ _tail(field, kk, l)
    if field.mul(z, z) ^ z ^ k:
        raise FieldError("formula mismatch")
    return z


def half_trace(field: Field, a: int) -> int:
    """``sum_{i=0}^{(l-1)/2} a^(4^i)`` for odd l."""
    _require_binary(field)
    if field.k % 2 == 0:
        raise FieldError("half-trace needs odd degree")
    return _frob_sum(field, a, [4**i for i in range((field.k - 1) // 2 + 1)])


def iter_nonzero(field: Field) -> Iterator[int]:
    return iter(range(1, field.order))

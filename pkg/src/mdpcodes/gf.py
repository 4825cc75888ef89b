"""Finite fields GF(p^m) and dense exact linear algebra over them.

Elements are stored as plain integers in ``range(q)``: the integer
``c_0 + c_1 p + ... + c_{m-1} p^{m-1}`` stands for the residue class of
``c_0 + c_1 x + ... + c_{m-1} x^{m-1}`` modulo the field's defining
polynomial.  :class:`FieldElement` is the user-facing wrapper exposing the
coefficient vector; matrices keep raw integers in numpy arrays.

Matrix index arguments of :func:`submatrix` are 1-based; everything else
follows ordinary Python indexing.
"""

from __future__ import annotations

import functools
import itertools
from collections.abc import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    FieldMismatch,
    IndexOutOfRange,
    NonPrimeCharacteristic,
    NotSquare,
    NotStrictlyIncreasing,
    ReducibleModulus,
)

__all__ = [
    "Field",
    "FieldElement",
    "FieldMatrix",
    "GF",
    "field_create",
    "mat_arith",
    "determinant",
    "rank",
    "right_kernel_basis",
    "submatrix",
    "solve",
    "solve_lexmin",
    "is_prime",
]

# add table is materialized as nested lists below this order
_ADD_TABLE_MAX = 1024


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
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


# -- polynomials over GF(p), coefficient lists low-to-high -------------------


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, mod, p):
    a = _trim(a)
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(mod):
            a[shift + i] = (a[shift + i] - c * mc) % p
        a = _trim(a)
    return a


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _monic_polys(p, d):
    """All monic polynomials of degree d over GF(p) in increasing integer order."""
    for low in itertools.product(range(p), repeat=d):
        yield list(reversed(low)) + [1]


def _is_irreducible(mod, p):
    m = len(mod) - 1
    if m < 1:
        return False
    for d in range(1, m // 2 + 1):
        for g in _monic_polys(p, d):
            if not _poly_mod(mod, g, p):
                return False
    return True


def _default_modulus(p, m):
    # monic polys enumerated by integer value of their coefficient vector
    for low in range(p**m):
        coeffs = [(low // p**i) % p for i in range(m)] + [1]
        if _is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class Field:
    """The finite field GF(p^m).

    >>> F = Field(2, 2)
    >>> F.modulus
    (1, 1, 1)
    >>> F.mul(2, 2)   # x * x = x + 1
    3
    """

    def __init__(self, p: int, m: int = 1, modulus: Sequence[int] | None = None):
        if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
            raise NonPrimeCharacteristic(f"characteristic {p!r} is not prime")
        if m < 1:
            raise ValueError(f"extension degree must be >= 1, got {m}")
        p, m = int(p), int(m)
        self.p = p
        self.m = m
        self.q = p**m
        if m == 1:
            # identity placeholder; arithmetic is plain integer arithmetic mod p
            self.modulus = (0, 1)
        else:
            if modulus is None:
                modulus = _default_modulus(p, m)
            modulus = tuple(int(c) for c in modulus)
            if len(modulus) != m + 1 or modulus[-1] != 1:
                raise ReducibleModulus(f"modulus must be monic of degree {m}: {modulus}")
            if any(not 0 <= c < p for c in modulus):
                raise ReducibleModulus(f"modulus coefficients must lie in [0, {p})")
            if not _is_irreducible(list(modulus), p):
                raise ReducibleModulus(f"modulus {modulus} is reducible over GF({p})")
            self.modulus = modulus
            self._build_tables()

    # -- construction helpers --------------------------------------------

    def _poly_to_int(self, coeffs):
        return sum(int(c) * self.p**i for i, c in enumerate(coeffs))

    def _build_tables(self):
        p, q = self.p, self.q
        mod = list(self.modulus)

        def mulpoly(a, b):
            return self._poly_to_int(_poly_mod(_poly_mul(self.coeffs(a), self.coeffs(b), p), mod, p))

        def power(a, e):
            r, base = 1, a
            while e:
                if e & 1:
                    r = mulpoly(r, base)
                base = mulpoly(base, base)
                e >>= 1
            return r

        factors = _prime_factors(q - 1)
        for g in range(2, q):
            if all(power(g, (q - 1) // f) != 1 for f in factors):
                break
        else:  # pragma: no cover - GF(p^m)* is cyclic
            raise AssertionError("no primitive element")
        exp = [0] * (q - 1)
        log = [0] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = mulpoly(x, g)
        self.primitive = g
        self._exp = exp
        self._log = log
        self._exp_np = np.array(exp + exp, dtype=np.int64)
        self._log_np = np.array(log, dtype=np.int64)
        if q <= _ADD_TABLE_MAX:
            a = np.arange(q)
            self._add_table = self._vadd_digits(a[:, None], a[None, :]).tolist()
        else:
            self._add_table = None

    # -- identity ----------------------------------------------------------

    @property
    def order(self) -> int:
        return self.q

    @property
    def is_prime_field(self) -> bool:
        return self.m == 1

    def __eq__(self, other):
        return (
            isinstance(other, Field)
            and self.p == other.p
            and self.m == other.m
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m}, modulus={list(self.modulus)})"

    def __reduce__(self):
        return (Field, (self.p, self.m, None if self.m == 1 else self.modulus))

    # -- elements ----------------------------------------------------------

    def __call__(self, value) -> FieldElement:
        return FieldElement(self, value)

    def elements(self):
        return [FieldElement(self, v) for v in range(self.q)]

    def coeffs(self, a: int) -> list[int]:
        """Coefficient vector (length m, low-to-high) of the element with representative ``a``."""
        p = self.p
        return [(a // p**i) % p for i in range(self.m)]

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) != self.m or any(not 0 <= int(c) < self.p for c in coeffs):
            raise ValueError(f"expected {self.m} coefficients in [0, {self.p})")
        return self._poly_to_int(coeffs)

    def check(self, a) -> int:
        a = int(a)
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not a representative of an element of {self}")
        return a

    # -- scalar arithmetic on representatives -------------------------------

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a][b]
        return int(self._vadd_digits(np.int64(a), np.int64(b)))

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return int(self._vneg_digits(np.int64(a)))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if self.m == 1:
            return pow(a, e, self.p)
        if a == 0:
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    # -- vectorized arithmetic on integer arrays ------------------------------

    def _vadd_digits(self, a, b):
        p = self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        pw = 1
        for _ in range(self.m):
            out += ((a // pw + b // pw) % p) * pw
            pw *= p
        return out

    def _vneg_digits(self, a):
        p = self.p
        out = np.zeros(np.shape(a), dtype=np.int64)
        pw = 1
        for _ in range(self.m):
            out += ((-(a // pw)) % p) * pw
            pw *= p
        return out

    def vadd(self, a, b):
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self._vadd_digits(a, b)

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.m == 1:
            return (-a) % self.p
        if self.p == 2:
            return a.copy()
        return self._vneg_digits(a)

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return (a * b) % self.p
        a, b = np.broadcast_arrays(a, b)
        prod = self._exp_np[self._log_np[a] + self._log_np[b]]
        return np.where((a == 0) | (b == 0), 0, prod)

    def vnonzero_count(self, a, axis=-1):
        return np.count_nonzero(np.asarray(a), axis=axis)

    def matmul(self, a, b):
        """Matrix product of two integer arrays over the field (batched over leading axes of ``a``)."""
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        inner = a.shape[-1]
        if self.m == 1:
            if inner == 0:
                return np.zeros(a.shape[:-1] + b.shape[-1:], dtype=np.int64)
            if inner * (self.p - 1) ** 2 < 2**62:
                return (a @ b) % self.p
            return ((a.astype(object) @ b.astype(object)) % self.p).astype(np.int64)
        out = np.zeros(a.shape[:-1] + b.shape[-1:], dtype=np.int64)
        for i in range(inner):
            out = self.vadd(out, self.vmul(a[..., i, None], b[i]))
        return out

    def random(self, rng: np.random.Generator, shape) -> np.ndarray:
        return rng.integers(0, self.q, size=shape, dtype=np.int64)


@functools.lru_cache(maxsize=None)
def _cached_field(p, m, modulus):
    return Field(p, m, modulus)


def field_create(p: int, m: int = 1, modulus: Sequence[int] | None = None) -> Field:
    """Create GF(p^m); with no modulus the smallest monic irreducible is used."""
    return _cached_field(p, m, None if modulus is None else tuple(modulus))


def GF(q: int) -> Field:
    """Field of prime-power order ``q`` with the default modulus."""
    for p in range(2, q + 1):
        if q % p == 0:
            break
    m, r = 0, q
    while r % p == 0:
        r //= p
        m += 1
    if q < 2 or r != 1:
        raise NonPrimeCharacteristic(f"{q} is not a prime power")
    return field_create(p, m)


@functools.total_ordering
class FieldElement:
    """An element of a :class:`Field`, wrapping its integer representative."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value):
        if isinstance(value, FieldElement):
            if value.field != field:
                raise FieldMismatch(f"element of {value.field} used in {field}")
            value = value.value
        elif field.m == 1 and isinstance(value, (int, np.integer)):
            value = int(value) % field.p
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", field.check(value))

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def coeffs(self) -> list[int]:
        return self.field.coeffs(self.value)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return FieldElement(self.field, other).value
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub(b, self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        if isinstance(other, FieldMatrix):
            return NotImplemented
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.div(self.value, b))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.value))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other)
        return NotImplemented

    def __lt__(self, other):
        return self.value < int(other)

    def __hash__(self):
        return hash((self.field, self.value))

    def __repr__(self):
        return f"{self.field}({self.value})"


class FieldMatrix:
    """Dense immutable matrix over a finite field.

    ``data`` is a read-only ``int64`` numpy array of representatives.
    """

    __slots__ = ("field", "data")

    def __init__(self, field: Field, entries, shape: tuple[int, int] | None = None):
        if isinstance(entries, FieldMatrix):
            if entries.field != field:
                raise FieldMismatch(f"{entries.field} vs {field}")
            arr = entries.data
        else:
            arr = _to_int_array(field, entries)
        if arr.ndim == 1 and arr.size == 0 and shape is not None:
            arr = arr.reshape(shape)
        if arr.ndim != 2:
            if shape is None or arr.size != shape[0] * shape[1]:
                raise DimensionMismatch(f"expected a 2-d array, got shape {arr.shape}")
            arr = arr.reshape(shape)
        if shape is not None and arr.shape != tuple(shape):
            raise DimensionMismatch(f"expected shape {tuple(shape)}, got {arr.shape}")
        if field.m == 1:
            arr = arr % field.p
        if arr.size and (arr.min() < 0 or arr.max() >= field.q):
            raise ValueError(f"entries must lie in [0, {field.q})")
        arr = np.array(arr, dtype=np.int64)
        arr.flags.writeable = False
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("FieldMatrix is immutable")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def _wrap(cls, field, arr):
        # trusted fast path: arr already reduced
        self = object.__new__(cls)
        arr = np.asarray(arr, dtype=np.int64)
        arr.flags.writeable = False
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "data", arr)
        return self

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> FieldMatrix:
        return cls._wrap(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: Field, n: int) -> FieldMatrix:
        return cls._wrap(field, np.eye(n, dtype=np.int64))

    @classmethod
    def random(cls, field: Field, rows: int, cols: int, rng: np.random.Generator) -> FieldMatrix:
        return cls._wrap(field, field.random(rng, (rows, cols)))

    # -- shape --------------------------------------------------------------

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def T(self) -> FieldMatrix:
        return FieldMatrix._wrap(self.field, self.data.T.copy())

    def tolist(self) -> list[list[int]]:
        return self.data.tolist()

    def __getitem__(self, key):
        res = self.data[key]
        if np.ndim(res) == 0:
            return FieldElement(self.field, int(res))
        if np.ndim(res) == 1:
            column = isinstance(key, tuple) and len(key) == 2 and isinstance(key[1], (int, np.integer))
            res = res[:, None] if column else res[None, :]
        return FieldMatrix._wrap(self.field, res.copy())

    def is_zero(self) -> bool:
        return not self.data.any()

    # -- arithmetic -----------------------------------------------------------

    def _check_same(self, other):
        if not isinstance(other, FieldMatrix):
            raise TypeError(f"expected FieldMatrix, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        self._check_same(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return FieldMatrix._wrap(self.field, self.field.vadd(self.data, other.data))

    def __sub__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        self._check_same(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot subtract {self.shape} and {other.shape}")
        return FieldMatrix._wrap(self.field, self.field.vsub(self.data, other.data))

    def __neg__(self):
        return FieldMatrix._wrap(self.field, self.field.vneg(self.data))

    def __matmul__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        self._check_same(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        return FieldMatrix._wrap(self.field, self.field.matmul(self.data, other.data))

    def __mul__(self, scalar):
        if isinstance(scalar, FieldMatrix):
            return NotImplemented
        if isinstance(scalar, FieldElement):
            if scalar.field != self.field:
                raise FieldMismatch(f"{scalar.field} vs {self.field}")
            s = scalar.value
        elif isinstance(scalar, (int, np.integer)):
            s = FieldElement(self.field, int(scalar) % self.field.q if self.field.m == 1 else scalar).value
        else:
            return NotImplemented
        return FieldMatrix._wrap(self.field, self.field.vmul(self.data, s))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> FieldMatrix:
        if self.rows != self.cols:
            raise NotSquare(f"power of non-square {self.shape} matrix")
        result = FieldMatrix.identity(self.field, self.rows)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.field, self.shape, self.data.tobytes()))

    def __repr__(self):
        return f"FieldMatrix({self.field}, {self.tolist()})"

    # -- linear algebra shortcuts ----------------------------------------------

    def det(self) -> FieldElement:
        return determinant(self)

    def rank(self) -> int:
        return rank(self)

    def right_kernel(self) -> FieldMatrix:
        return right_kernel_basis(self)

    @staticmethod
    def hstack(mats: Sequence[FieldMatrix]) -> FieldMatrix:
        field = _common_field(mats)
        return FieldMatrix._wrap(field, np.hstack([m.data for m in mats]))

    @staticmethod
    def vstack(mats: Sequence[FieldMatrix]) -> FieldMatrix:
        field = _common_field(mats)
        return FieldMatrix._wrap(field, np.vstack([m.data for m in mats]))

    @staticmethod
    def block(grid: Sequence[Sequence[FieldMatrix]]) -> FieldMatrix:
        return FieldMatrix.vstack([FieldMatrix.hstack(row) for row in grid])


def _common_field(mats):
    if not mats:
        raise ValueError("need at least one matrix")
    field = mats[0].field
    for m in mats[1:]:
        if m.field != field:
            raise FieldMismatch(f"{field} vs {m.field}")
    return field


def _to_int_array(field, entries):
    if isinstance(entries, np.ndarray) and entries.dtype != object:
        return entries.astype(np.int64)
    if isinstance(entries, FieldElement):
        entries = [[entries]]

    def conv(x):
        if isinstance(x, FieldElement):
            if x.field != field:
                raise FieldMismatch(f"element of {x.field} in matrix over {field}")
            return x.value
        return int(x)

    def rec(x):
        if isinstance(x, (list, tuple, np.ndarray)):
            return [rec(y) for y in x]
        return conv(x)

    return np.array(rec(entries), dtype=np.int64)


# -- operations -----------------------------------------------------------------


def mat_arith(op: str, lhs: FieldMatrix, rhs) -> FieldMatrix:
    """Dispatch ``op`` in {'add', 'sub', 'mul', 'scalar_mul'}."""
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs @ rhs
    if op == "scalar_mul":
        return lhs * rhs
    raise ValueError(f"unknown matrix operation {op!r}")


def _det_rows(rows: list[list[int]], field: Field) -> int:
    """Determinant of a square matrix given as a list of row lists (destroyed)."""
    n = len(rows)
    det = 1
    if field.m == 1:
        p = field.p
        for c in range(n):
            piv = next((r for r in range(c, n) if rows[r][c]), None)
            if piv is None:
                return 0
            if piv != c:
                rows[c], rows[piv] = rows[piv], rows[c]
                det = -det
            pr = rows[c]
            pv = pr[c]
            det = (det * pv) % p
            inv = pow(pv, p - 2, p)
            for r in range(c + 1, n):
                row = rows[r]
                f = row[c]
                if f:
                    f = (f * inv) % p
                    for cc in range(c + 1, n):
                        row[cc] = (row[cc] - f * pr[cc]) % p
        return det % p
    add, mul, neg, inv = field.add, field.mul, field.neg, field.inv
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = neg(det)
        pr = rows[c]
        det = mul(det, pr[c])
        ipv = inv(pr[c])
        for r in range(c + 1, n):
            row = rows[r]
            if row[c]:
                f = neg(mul(row[c], ipv))
                for cc in range(c + 1, n):
                    row[cc] = add(row[cc], mul(f, pr[cc]))
    return det


def determinant(M: FieldMatrix) -> FieldElement:
    """Exact determinant by Gaussian elimination; the 0x0 determinant is 1."""
    if M.rows != M.cols:
        raise NotSquare(f"determinant of non-square {M.shape} matrix")
    return FieldElement(M.field, _det_rows(M.data.tolist(), M.field))


def _rref(rows: list[list[int]], field: Field, ncols: int):
    """Reduced row echelon form in place; returns the pivot columns."""
    add, mul, neg, inv = field.add, field.mul, field.neg, field.inv
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        ipv = inv(pr[c])
        if pr[c] != 1:
            pr[:] = [mul(x, ipv) for x in pr]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = neg(rows[i][c])
                row = rows[i]
                for cc in range(c, len(row)):
                    if pr[cc]:
                        row[cc] = add(row[cc], mul(f, pr[cc]))
        pivots.append(c)
        r += 1
    return pivots


def rank(M: FieldMatrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    return len(_rref(M.data.tolist(), M.field, M.cols))


def right_kernel_basis(M: FieldMatrix) -> FieldMatrix:
    """Columns form a basis of ``{v : M v = 0}``, one per non-pivot column."""
    field = M.field
    rows = M.data.tolist()
    pivots = _rref(rows, field, M.cols)
    free = [c for c in range(M.cols) if c not in set(pivots)]
    basis = np.zeros((M.cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = field.neg(rows[i][f])
    return FieldMatrix._wrap(field, basis)


def solve(M: FieldMatrix, b: FieldMatrix) -> FieldMatrix | None:
    """One solution X of ``M X = b`` (free variables zero), or None if inconsistent."""
    if M.field != b.field:
        raise FieldMismatch(f"{M.field} vs {b.field}")
    if M.rows != b.rows:
        raise DimensionMismatch(f"{M.shape} system with right-hand side {b.shape}")
    field = M.field
    aug = np.hstack([M.data, b.data]).tolist()
    pivots = _rref(aug, field, M.cols)
    for row in aug[len(pivots):]:
        if any(row[M.cols:]):
            return None
    x = np.zeros((M.cols, b.cols), dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = aug[i][M.cols:]
    return FieldMatrix._wrap(field, x)


def solve_lexmin(M: FieldMatrix, b: FieldMatrix) -> FieldMatrix | None:
    """Lexicographically smallest solution column of ``M x = b`` (b a single column).

    A coordinate is either pinned by the system or free; free coordinates are
    fixed to 0 in order, which yields the lexicographic minimum under the
    representative order.
    """
    if b.cols != 1:
        raise DimensionMismatch("solve_lexmin expects a single right-hand side column")
    if solve(M, b) is None:
        return None
    n = M.cols
    cur_M, cur_b = M, b
    for i in range(n):
        e = np.zeros((1, n), dtype=np.int64)
        e[0, i] = 1
        trial_M = FieldMatrix.vstack([cur_M, FieldMatrix._wrap(M.field, e)])
        trial_b = FieldMatrix.vstack([cur_b, FieldMatrix.zeros(M.field, 1, 1)])
        if solve(trial_M, trial_b) is not None:
            cur_M, cur_b = trial_M, trial_b
    return solve(cur_M, cur_b)


def _check_indices(idx: Iterable[int], bound: int, what: str) -> list[int]:
    idx = [int(i) for i in idx]
    for a, b in zip(idx, idx[1:]):
        if b <= a:
            raise NotStrictlyIncreasing(f"{what} indices must be strictly increasing: {idx}")
    for i in idx:
        if not 1 <= i <= bound:
            raise IndexOutOfRange(f"{what} index {i} outside 1..{bound}")
    return idx


def submatrix(M: FieldMatrix, row_idx: Sequence[int], col_idx: Sequence[int]) -> FieldMatrix:
    """Select rows and columns by strictly increasing 1-based indices."""
    r = _check_indices(row_idx, M.rows, "row")
    c = _check_indices(col_idx, M.cols, "column")
    sub = M.data[np.ix_([i - 1 for i in r], [j - 1 for j in c])]
    return FieldMatrix._wrap(M.field, sub)

"""Exact dense linear algebra over Q and prime fields.

Matrices are plain numpy arrays. Over a prime field F_p they have dtype
int64 and hold canonical residues in [0, p). Over Q they have dtype object
and hold ``gmpy2.mpq`` values, which are always in lowest terms.
"""

from __future__ import annotations

import flint
import numpy as np
from gmpy2 import mpq, is_prime

_FLOAT_EXACT = 2**53
# sizes above which flint takes over elimination / rational products
_FLINT_RREF_MIN = 4000
_FLINT_MUL_MIN = 200000


_FMPQ_ZERO = flint.fmpq(0)
_MPQ_ZERO = mpq(0)


def _to_fmpq_mat(a):
    r, c = a.shape
    z, fq = _FMPQ_ZERO, flint.fmpq
    return flint.fmpq_mat(r, c, [fq(int(x.numerator), int(x.denominator)) if x else z for x in a.flat])


def _from_flint_q(m, r, c):
    z = _MPQ_ZERO
    out = np.empty(r * c, dtype=object)
    out[:] = [mpq(int(x.p), int(x.q)) if x else z for x in m.entries()]
    return out.reshape(r, c)


def _pivots_of(rr):
    piv = []
    for row in rr:
        nz = np.flatnonzero(row != 0)
        if nz.size == 0:
            break
        piv.append(int(nz[0]))
    return piv


class LinalgError(ValueError):
    pass


class Field:
    """The rationals (``p == 0``) or the prime field F_p."""

    __slots__ = ("p",)

    def __init__(self, p: int = 0):
        p = int(p)
        if p != 0 and (p < 2 or not is_prime(p)):
            raise LinalgError(f"characteristic {p} is not prime")
        if p >= 2**31:
            raise LinalgError("primes >= 2^31 are not supported")
        self.p = p

    # -- identity -------------------------------------------------------
    @classmethod
    def parse(cls, spec: str) -> "Field":
        s = spec.strip()
        if s in ("Q", "QQ"):
            return cls(0)
        if s.startswith("Fp:") or s.startswith("F:"):
            return cls(int(s.split(":", 1)[1]))
        if s.startswith("GF(") and s.endswith(")"):
            return cls(int(s[3:-1]))
        raise LinalgError(f"unknown field spec {spec!r}")

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    @property
    def characteristic(self) -> int:
        return self.p

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "Q" if self.p == 0 else f"Fp:{self.p}"

    __str__ = __repr__

    @property
    def dtype(self):
        return object if self.p == 0 else np.int64

    # -- scalars --------------------------------------------------------
    def __call__(self, x):
        """Coerce an int, Fraction, mpq or string to a field scalar."""
        if self.p == 0:
            if isinstance(x, str):
                return mpq(x.strip())
            return mpq(x)
        if isinstance(x, str):
            x = mpq(x.strip())
        if isinstance(x, (int, np.integer)):
            return int(x) % self.p
        q = mpq(x)
        num, den = int(q.numerator), int(q.denominator)
        if den % self.p == 0:
            raise LinalgError(f"{x} has no image in F_{self.p}")
        return num * pow(den, -1, self.p) % self.p

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p == 0:
            return 1 / mpq(x)
        return pow(int(x), -1, self.p)

    def neg(self, x):
        return -x if self.p == 0 else (-int(x)) % self.p

    def fmt(self, x) -> str:
        return str(mpq(x)) if self.p == 0 else str(int(x))

    def elements(self):
        if self.p == 0:
            raise LinalgError("Q is infinite")
        return range(self.p)

    # -- matrix construction -------------------------------------------
    def array(self, data, shape=None) -> np.ndarray:
        if isinstance(data, np.ndarray) and data.dtype != object and self.p:
            a = np.mod(data.astype(np.int64, copy=False), self.p)
        else:
            raw = np.array(data, dtype=object)
            if self.p == 0:
                a = np.empty(raw.shape, dtype=object)
                flat_in, flat_out = raw.reshape(-1), a.reshape(-1)
                for k, v in enumerate(flat_in):
                    flat_out[k] = self(v)
            else:
                a = np.array([self(v) for v in raw.reshape(-1)], dtype=np.int64).reshape(raw.shape)
        if shape is not None:
            a = a.reshape(shape)
        return a

    def matrix(self, rows, nrows=None, ncols=None) -> np.ndarray:
        """Build a 2-d matrix; an empty ``rows`` needs explicit shape."""
        if nrows is not None and ncols is not None and (nrows == 0 or ncols == 0):
            return self.zeros(nrows, ncols)
        a = self.array(rows)
        if a.ndim == 1:
            a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
        if nrows is not None and ncols is not None:
            a = a.reshape(nrows, ncols)
        return a

    def zeros(self, r: int, c: int) -> np.ndarray:
        if self.p == 0:
            a = np.empty((r, c), dtype=object)
            a.fill(mpq(0))
            return a
        return np.zeros((r, c), dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        a = self.zeros(n, n)
        for i in range(n):
            a[i, i] = self.one
        return a

    def unit(self, n: int, i: int) -> np.ndarray:
        v = self.zeros(n, 1)
        v[i, 0] = self.one
        return v

    def elementary(self, r: int, c: int, i: int, j: int) -> np.ndarray:
        a = self.zeros(r, c)
        a[i, j] = self.one
        return a

    def random(self, r: int, c: int, rng: np.random.Generator, lo: int = -2, hi: int = 2) -> np.ndarray:
        """Uniform over F_p; integer entries in [lo, hi] over Q."""
        if self.p:
            return rng.integers(0, self.p, size=(r, c), dtype=np.int64)
        return self.array(rng.integers(lo, hi + 1, size=(r, c)))

    def coerce(self, a) -> np.ndarray:
        """Ensure ``a`` is a canonical matrix of this field."""
        if isinstance(a, np.ndarray):
            if self.p and a.dtype == np.int64:
                return a % self.p
            if not self.p and a.dtype == object and (a.size == 0 or isinstance(a.flat[0], type(mpq(0)))):
                return a
        return self.array(a)

    # -- arithmetic -----------------------------------------------------
    def add(self, a, b):
        return a + b if self.p == 0 else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p == 0 else (a - b) % self.p

    def negm(self, a):
        return -a if self.p == 0 else (-a) % self.p

    def scale(self, s, a):
        if self.p == 0:
            return a * mpq(s)
        return (a * (int(s) % self.p)) % self.p

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Matrix product."""
        r, k = a.shape
        k2, c = b.shape
        if k != k2:
            raise LinalgError(f"shape mismatch {a.shape} @ {b.shape}")
        if r == 0 or c == 0 or k == 0:
            return self.zeros(r, c)
        if self.p == 0:
            return self._mul_rational(a, b)
        p = self.p
        sq = (p - 1) ** 2
        if sq * k < _FLOAT_EXACT:
            return np.mod(a.astype(np.float64) @ b.astype(np.float64), p).astype(np.int64)
        step = _FLOAT_EXACT // sq
        if step >= 1:
            af, bf = a.astype(np.float64), b.astype(np.float64)
            out = np.zeros((r, c), dtype=np.int64)
            for s in range(0, k, step):
                out += np.mod(af[:, s:s + step] @ bf[s:s + step, :], p).astype(np.int64)
                out %= p
            return out
        return np.mod(a.astype(object).dot(b.astype(object)), p).astype(np.int64)

    def _mul_rational(self, a, b):
        r, k = a.shape
        c = b.shape[1]
        work = r * c * k
        if work < 20000:
            return a.dot(b)
        nza = a != 0
        nzb = b != 0
        cost_a = int(np.count_nonzero(nza)) * c
        cost_b = int(np.count_nonzero(nzb)) * r
        if min(cost_a, cost_b) * 4 < work:
            out = self.zeros(r, c)
            if cost_a <= cost_b:
                for t in range(k):
                    rows = np.flatnonzero(nza[:, t])
                    if rows.size:
                        out[rows, :] += np.outer(a[rows, t], b[t, :])
            else:
                for t in range(k):
                    cols = np.flatnonzero(nzb[t, :])
                    if cols.size:
                        out[:, cols] += np.outer(a[:, t], b[t, cols])
            return out
        if work > _FLINT_MUL_MIN and work > 20 * (r * k + k * c + r * c):
            return _from_flint_q(_to_fmpq_mat(a) * _to_fmpq_mat(b), r, c)
        return a.dot(b)

    def mul_chain(self, *ms):
        out = ms[0]
        for m in ms[1:]:
            out = self.mul(out, m)
        return out

    def power(self, a: np.ndarray, e: int) -> np.ndarray:
        out = self.eye(a.shape[0])
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return out

    def is_zero(self, a) -> bool:
        return a.size == 0 or not np.any(a != 0)

    def equal(self, a, b) -> bool:
        return a.shape == b.shape and (a.size == 0 or bool(np.all(a == b)))

    def kron(self, a, b):
        if a.size == 0 or b.size == 0:
            return self.zeros(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])
        out = np.kron(a, b)
        return out if self.p == 0 else out % self.p

    def block_diag(self, blocks) -> np.ndarray:
        r = sum(b.shape[0] for b in blocks)
        c = sum(b.shape[1] for b in blocks)
        out = self.zeros(r, c)
        i = j = 0
        for b in blocks:
            out[i:i + b.shape[0], j:j + b.shape[1]] = b
            i += b.shape[0]
            j += b.shape[1]
        return out

    def hstack(self, blocks, rows: int) -> np.ndarray:
        blocks = [b for b in blocks if b.shape[1]]
        if not blocks:
            return self.zeros(rows, 0)
        return np.hstack(blocks)

    def vstack(self, blocks, cols: int) -> np.ndarray:
        blocks = [b for b in blocks if b.shape[0]]
        if not blocks:
            return self.zeros(0, cols)
        return np.vstack(blocks)

    # -- elimination ----------------------------------------------------
    def rref(self, m: np.ndarray):
        """Reduced row-echelon form with first-nonzero pivoting.

        Returns ``(R, pivots)``; the rank is ``len(pivots)``.
        """
        if m.size < _FLINT_RREF_MIN:
            return self.rref_reference(m)
        if self.p:
            return self._rref_blocked(m)
        rows, cols = m.shape
        rr, _ = _to_fmpq_mat(m).rref()
        a = _from_flint_q(rr, rows, cols)
        return a, _pivots_of(a)

    def _panel_pivots(self, panel: np.ndarray):
        """Forward elimination on a thin panel: (pivot columns, chosen rows)."""
        p = self.p
        a = panel.copy()
        free = np.ones(a.shape[0], dtype=bool)
        cols, rows = [], []
        for c in range(a.shape[1]):
            cand = np.flatnonzero(free & (a[:, c] != 0))
            if cand.size == 0:
                continue
            r = int(cand[0])
            free[r] = False
            cols.append(c)
            rows.append(r)
            rest = np.flatnonzero(free & (a[:, c] != 0))
            if rest.size:
                f = (a[rest, c] * pow(int(a[r, c]), -1, p)) % p
                a[np.ix_(rest, range(c, a.shape[1]))] = (a[np.ix_(rest, range(c, a.shape[1]))]
                                                       - np.outer(f, a[r, c:])) % p
        return cols, rows

    def _rref_blocked(self, m: np.ndarray, block: int = 64):
        """Gauss-Jordan over F_p, one column panel at a time with matrix-product updates.

        Rows at index >= r are zero on all columns already processed, so the
        pivot rows chosen inside a panel can be normalised by the inverse of
        their pivot minor and subtracted from every other row in one product.
        """
        p = self.p
        a = np.array(m, dtype=np.int64, copy=True)
        n, ncols = a.shape
        r = 0
        piv = []
        for c0 in range(0, ncols, block):
            if r == n:
                break
            c1 = min(c0 + block, ncols)
            pc, pr = self._panel_pivots(a[r:, c0:c1])
            if not pc:
                continue
            pr = [r + i for i in pr]
            pcols = [c0 + c for c in pc]
            k = len(pr)
            minor, _ = self.rref_reference(np.hstack([a[np.ix_(pr, pcols)], self.eye(k)]))
            top = self.mul(minor[:, k:], a[pr, c0:])
            chosen = set(pr)
            others = np.array([i for i in range(n) if i not in chosen], dtype=np.int64)
            if others.size:
                a[others, c0:] = (a[others, c0:] - self.mul(a[np.ix_(others, pcols)], top)) % p
            a[pr, c0:] = top
            rest = [i for i in range(r, n) if i not in chosen]
            a[r:] = a[pr + rest]
            piv.extend(pcols)
            r += len(pr)
        return a, piv

    def rref_reference(self, m: np.ndarray):
        """Plain numpy elimination; the reduced form is unique, so any backend must agree."""
        a = np.array(m, dtype=self.dtype, copy=True)
        rows, cols = a.shape
        piv = []
        r = 0
        p = self.p
        for c in range(cols):
            if r == rows:
                break
            nz = np.flatnonzero(a[r:, c] != 0)
            if nz.size == 0:
                continue
            k = r + int(nz[0])
            if k != r:
                a[[r, k]] = a[[k, r]]
            inv = self.inv(a[r, c])
            if p:
                a[r, c:] = (a[r, c:] * inv) % p
            else:
                a[r, c:] = a[r, c:] * inv
            col = a[:, c].copy()
            col[r] = 0
            others = np.flatnonzero(col != 0)
            if others.size:
                upd = np.outer(col[others], a[r, c:])
                if p:
                    a[others, c:] = (a[others, c:] - upd) % p
                else:
                    a[others, c:] = a[others, c:] - upd
            piv.append(c)
            r += 1
        return a, piv

    def rank(self, m: np.ndarray) -> int:
        if m.size == 0:
            return 0
        if m.shape[0] > m.shape[1]:
            m = m.T
        return len(self.rref(m)[1])

    def kernel(self, m: np.ndarray) -> np.ndarray:
        """Columns form a basis of the right null space of ``m``."""
        rows, cols = m.shape
        if rows == 0:
            return self.eye(cols)
        if self.p and rows > 2 * cols + 16 and m.size >= _FLINT_RREF_MIN:
            k = self._kernel_compressed(m)
            if k is not None:
                return k
        return self._kernel_from_rref(m)

    def _kernel_from_rref(self, m):
        cols = m.shape[1]
        r, piv = self.rref(m)
        pset = set(piv)
        free = [c for c in range(cols) if c not in pset]
        k = self.zeros(cols, len(free))
        if free:
            k[free, range(len(free))] = self.one
            if piv:
                k[np.ix_(piv, range(len(free)))] = self.negm(r[:len(piv)][:, free])
        return k

    def _kernel_compressed(self, m):
        """ker(S m) contains ker(m) for any S; when m kills it, the two agree."""
        rows, cols = m.shape
        rng = np.random.default_rng(rows * 1000003 + cols)
        s = self.random(cols + 8, rows, rng)
        k = self._kernel_from_rref(self.mul(s, m))
        if self.is_zero(self.mul(m, k)):
            return k
        return None

    def kernel_basis(self, m: np.ndarray) -> list:
        k = self.kernel(m)
        return [k[:, j:j + 1] for j in range(k.shape[1])]

    def left_kernel(self, m: np.ndarray) -> np.ndarray:
        """Rows form a basis of {v : v m = 0}."""
        return self.kernel(m.T).T

    def column_basis(self, m: np.ndarray) -> np.ndarray:
        """A subset of the columns of ``m`` forming a basis of its span."""
        if m.shape[1] == 0:
            return m
        _, piv = self.rref(m)
        return m[:, piv]

    def complement(self, span: np.ndarray, n: int) -> np.ndarray:
        """Standard unit vectors completing the columns of ``span`` to a basis of k^n."""
        if span.shape[1] == 0:
            return self.eye(n)
        _, piv = self.rref(np.hstack([span, self.eye(n)]))
        idx = [c - span.shape[1] for c in piv if c >= span.shape[1]]
        return self.eye(n)[:, idx]

    def solve(self, a: np.ndarray, b: np.ndarray):
        """Some x with a x = b, or None. ``b`` may have several columns."""
        vec = b.ndim == 1
        if vec:
            b = b.reshape(-1, 1)
        if a.shape[0] != b.shape[0]:
            raise LinalgError(f"solve: {a.shape} vs rhs {b.shape}")
        n, k = a.shape[1], b.shape[1]
        if a.shape[0] == 0:
            x = self.zeros(n, k)
            return x.reshape(-1) if vec else x
        aug = np.hstack([a, b]) if a.shape[1] else np.array(b, dtype=self.dtype)
        r, piv = self.rref(aug)
        if piv and piv[-1] >= n:
            return None
        x = self.zeros(n, k)
        for i, pc in enumerate(piv):
            x[pc, :] = r[i, n:]
        return x.reshape(-1) if vec else x

    def inverse(self, m: np.ndarray):
        """Inverse of a square matrix, or None if singular."""
        n = m.shape[0]
        if m.shape != (n, n):
            return None
        if n == 0:
            return self.zeros(0, 0)
        r, piv = self.rref(np.hstack([m, self.eye(n)]))
        if len(piv) < n or piv[n - 1] != n - 1:
            return None
        return r[:, n:]

    def is_invertible(self, m: np.ndarray):
        """(flag, inverse-or-None)."""
        inv = self.inverse(m)
        return inv is not None, inv

    # -- polynomials ----------------------------------------------------
    def charpoly(self, m: np.ndarray) -> list:
        """Coefficients c_0..c_n (low degree first) of det(tI - m)."""
        n = m.shape[0]
        h = np.array(m, dtype=self.dtype, copy=True)
        p = self.p
        red = (lambda v: v % p) if p else (lambda v: v)
        # similarity reduction to upper Hessenberg form
        for j in range(n - 2):
            nz = np.flatnonzero(h[j + 1:, j] != 0)
            if nz.size == 0:
                continue
            k = j + 1 + int(nz[0])
            if k != j + 1:
                h[[j + 1, k]] = h[[k, j + 1]]
                h[:, [j + 1, k]] = h[:, [k, j + 1]]
            inv = self.inv(h[j + 1, j])
            for i in range(j + 2, n):
                if h[i, j] == 0:
                    continue
                f = red(h[i, j] * inv)
                h[i, :] = red(h[i, :] - f * h[j + 1, :])
                h[:, j + 1] = red(h[:, j + 1] + f * h[:, i])
        # recurrence on leading principal submatrices
        polys = [[self.one]]
        for k in range(1, n + 1):
            a = h[k - 1, k - 1]
            prev = polys[-1]
            nxt = [self.zero] + list(prev)
            for i, c in enumerate(prev):
                nxt[i] = red(nxt[i] - a * c)
            prod = self.one
            for i in range(1, k):
                prod = red(prod * h[k - i, k - i - 1])
                coef = red(prod * h[k - i - 1, k - 1])
                if coef == 0:
                    continue
                for t, c in enumerate(polys[k - i - 1]):
                    nxt[t] = red(nxt[t] - coef * c)
            polys.append(nxt)
        return [self(c) for c in polys[n]]

    def poly_eval(self, coeffs, m: np.ndarray) -> np.ndarray:
        """Evaluate a polynomial (low degree first) at a square matrix."""
        n = m.shape[0]
        out = self.zeros(n, n)
        for c in reversed(coeffs):
            out = self.mul(out, m)
            for i in range(n):
                out[i, i] = self(out[i, i] + c)
        return out

    def factor(self, coeffs):
        """Irreducible monic factors with multiplicities, via sympy."""
        import sympy
        t = sympy.Symbol("t")
        if self.p:
            poly = sympy.Poly([int(c) for c in reversed(coeffs)], t, modulus=self.p)
        else:
            poly = sympy.Poly([sympy.Rational(int(mpq(c).numerator), int(mpq(c).denominator))
                               for c in reversed(coeffs)], t, domain="QQ")
        _, facs = poly.factor_list()
        out = []
        for f, mult in facs:
            f = f.monic()
            if self.p:
                cs = [self(int(c)) for c in reversed(f.all_coeffs())]
            else:
                cs = [mpq(str(sympy.Rational(c))) for c in reversed(f.all_coeffs())]
            out.append((cs, mult))
        return out


QQ = Field(0)

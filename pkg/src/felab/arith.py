"""Integer kernel: prime sieve, factorization, divisor closures, antichains, CRT.

Everything here works on plain Python ints (so 64-bit-plus values are fine) and
is deterministic: the same inputs always produce the same outputs.
"""

from __future__ import annotations

import bisect
import hashlib
import math
import os
import struct
from array import array

from .errors import InputError, ResourceError

DEFAULT_SIEVE_CAP = 20_000_000

# Witness bases making Miller-Rabin exact below 3.3e24; covers every 64-bit value.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_CACHE_MAGIC = b"FELABSPF"
_CACHE_VERSION = 1


class Sieve:
    """Smallest-prime-factor table for [2, limit]."""

    def __init__(self, limit: int, table: array | None = None):
        if limit < 2:
            raise InputError(f"sieve limit must be >= 2, got {limit}")
        self.limit = limit
        self.table = table if table is not None else self._build(limit)

    @staticmethod
    def _build(limit: int) -> array:
        spf = array("I", bytes(4 * (limit + 1)))
        for i in range(2, limit + 1):
            if spf[i] == 0:
                spf[i] = i
                if i * i <= limit:
                    for j in range(i * i, limit + 1, i):
                        if spf[j] == 0:
                            spf[j] = i
        return spf

    def spf(self, n: int) -> int:
        if n < 2 or n > self.limit:
            raise InputError(f"spf query {n} outside sieve range [2, {self.limit}]")
        return self.table[n]

    def is_prime(self, n: int) -> bool:
        return n >= 2 and n <= self.limit and self.table[n] == n

    def primes(self) -> list[int]:
        t = self.table
        return [i for i in range(2, self.limit + 1) if t[i] == i]

    def save(self, path: str) -> None:
        """Persist the table with an integrity digest so stale caches are detected."""
        payload = self.table.tobytes()
        digest = hashlib.sha256(payload).digest()
        header = _CACHE_MAGIC + struct.pack("<IQ", _CACHE_VERSION, self.limit) + digest
        tmp = path + ".tmp"
        with open(tmp, "wb") as fh:
            fh.write(header)
            fh.write(payload)
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: str) -> "Sieve | None":
        try:
            with open(path, "rb") as fh:
                header = fh.read(len(_CACHE_MAGIC) + 12 + 32)
                if not header.startswith(_CACHE_MAGIC):
                    return None
                version, limit = struct.unpack_from("<IQ", header, len(_CACHE_MAGIC))
                digest = header[len(_CACHE_MAGIC) + 12:]
                if version != _CACHE_VERSION:
                    return None
                payload = fh.read()
        except OSError:
            return None
        if hashlib.sha256(payload).digest() != digest:
            return None
        table = array("I")
        table.frombytes(payload)
        if len(table) != limit + 1:
            return None
        return cls(limit, table=table)


_sieve: Sieve | None = None
_sieve_cap = DEFAULT_SIEVE_CAP
_cache_dir: str | None = None


def set_sieve_cap(cap: int) -> None:
    global _sieve_cap
    _sieve_cap = cap


def set_cache_dir(path: str | None) -> None:
    """Enable (or disable with None) on-disk persistence of sieve tables."""
    global _cache_dir
    _cache_dir = path


def ensure_sieve(limit: int) -> Sieve:
    """Return the shared sieve, growing it (and caching to disk if enabled) as needed."""
    global _sieve
    limit = max(limit, 2)
    if limit > _sieve_cap:
        raise ResourceError(
            f"sieve limit {limit} exceeds cap {_sieve_cap}; raise the cap or lower the horizon")
    if _sieve is None or _sieve.limit < limit:
        # grow geometrically so ascending requests amortize to one build
        have = _sieve.limit if _sieve is not None else 0
        target = min(_sieve_cap, max(limit, 2 * have, 1 << 16))
        loaded = None
        cache_path = None
        if _cache_dir is not None:
            cache_path = os.path.join(_cache_dir, f"spf-{target}.bin")
            loaded = Sieve.load(cache_path)
        if loaded is None:
            loaded = Sieve(target)
            if cache_path is not None:
                os.makedirs(_cache_dir, exist_ok=True)
                loaded.save(cache_path)
        if _sieve is None or loaded.limit > _sieve.limit:
            _sieve = loaded
    return _sieve


def _mr_is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
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


def is_prime(n: int) -> bool:
    if _sieve is not None and n <= _sieve.limit:
        return _sieve.is_prime(n)
    if n <= 10_000:
        return ensure_sieve(10_000).is_prime(n)
    if n >= _MR_EXACT_BELOW:
        raise ResourceError(f"{n} lies beyond the deterministic primality range")
    return _mr_is_prime(n)


def _brent_rho(n: int) -> int:
    """Deterministic Brent cycle-finding; returns a nontrivial factor of composite odd n."""
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        c += 1  # rare: retry with the next polynomial


def _factor_large(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if _mr_is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _brent_rho(n)
    _factor_large(d, out)
    _factor_large(n // d, out)


# Miller-Rabin with the fixed base set is proven exact below this bound.
_MR_EXACT_BELOW = 3_317_044_064_679_887_385_961_981

# Stripping these before Brent-rho keeps the common smooth cases cheap.
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
                 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization as sorted (prime, exponent) pairs; factorize(1) == []."""
    if n < 1:
        raise InputError(f"factorize expects n >= 1, got {n}")
    if n >= _MR_EXACT_BELOW:
        raise ResourceError(f"{n} lies beyond the deterministic primality range")
    if n == 1:
        return []
    out: dict[int, int] = {}
    sieve = ensure_sieve(min(max(n, 2), 100_000))
    if n <= sieve.limit:
        t = sieve.table
        while n > 1:
            p = t[n]
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
        return sorted(out.items())
    for p in _SMALL_PRIMES:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n > 1:
        _factor_large(n, out)
    return sorted(out.items())


def omega(n: int) -> int:
    """Number of prime factors counted with multiplicity; omega(1) == 0."""
    return sum(e for _, e in factorize(n))


def omega_upto(limit: int) -> array:
    """Bulk table of omega(n) for n <= limit via one sieve pass."""
    s = ensure_sieve(limit)
    t = s.table
    om = array("I", bytes(4 * (limit + 1)))
    for n in range(2, limit + 1):
        om[n] = om[n // t[n]] + 1
    return om


def primes_upto(limit: int) -> list[int]:
    """Primes <= limit (the shared sieve may reach further; cut to the request)."""
    ps = ensure_sieve(limit).primes()
    return ps[:bisect.bisect_right(ps, limit)]


def first_primes(count: int) -> list[int]:
    """The first `count` primes, p_1 = 2 onward."""
    if count < 1:
        raise InputError(f"prime count must be >= 1, got {count}")
    bound = max(30, count * 20)
    while True:
        ps = primes_upto(bound)
        if len(ps) >= count:
            return ps[:count]
        bound *= 4


def nth_prime(i: int) -> int:
    """The i-th prime with p_1 = 2."""
    if i < 1:
        raise InputError(f"prime index must be >= 1, got {i}")
    return first_primes(i)[-1]


def divisors(n: int) -> list[int]:
    if n < 1:
        raise InputError(f"divisors expects n >= 1, got {n}")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def up_closure(S, H: int) -> list[int]:
    """All n <= H divisible by some element of S (the upward closure cut at H)."""
    elems = _check_set(S)
    if H < 1:
        raise InputError(f"horizon must be >= 1, got {H}")
    mark = bytearray(H + 1)
    for s in elems:
        if s <= H:
            mark[s::s] = b"\x01" * (H // s)
    return [n for n in range(1, H + 1) if mark[n]]


def down_closure(S, H: int) -> list[int]:
    """All n <= H dividing some element of S (the downward closure cut at H)."""
    elems = _check_set(S)
    if H < 1:
        raise InputError(f"horizon must be >= 1, got {H}")
    out: set[int] = set()
    for s in elems:
        for d in divisors(s):
            if d <= H:
                out.add(d)
    return sorted(out)


def _check_set(S) -> list[int]:
    elems = sorted(set(S))
    if not elems:
        raise InputError("expected a nonempty set of naturals")
    if elems[0] < 1:
        raise InputError(f"set elements must be >= 1, got {elems[0]}")
    return elems


def is_strong_antichain(S) -> bool:
    """Pairwise coprime check; 1 is rejected because it divides everything."""
    elems = _check_set(S)
    if elems[0] == 1:
        raise InputError("1 cannot belong to a strong antichain")
    for i, a in enumerate(elems):
        for b in elems[i + 1:]:
            if math.gcd(a, b) != 1:
                return False
    return True


def extract_strong_antichain(A, s: int, H: int) -> list[int] | None:
    """Lexicographically least size-s pairwise-coprime subset of A within [2, H], or None."""
    if s < 1:
        raise InputError(f"antichain size must be >= 1, got {s}")
    pool = sorted(x for x in set(A) if 2 <= x <= H)
    chosen: list[int] = []

    def rec(start: int) -> bool:
        if len(chosen) == s:
            return True
        for idx in range(start, len(pool)):
            if len(pool) - idx < s - len(chosen):
                return False
            c = pool[idx]
            if all(math.gcd(c, x) == 1 for x in chosen):
                chosen.append(c)
                if rec(idx + 1):
                    return True
                chosen.pop()
        return False

    return chosen if rec(0) else None


def crt_solve(congruences) -> int | None:
    """Smallest positive x with x = a_i (mod m_i) for all i; None if inconsistent.

    Moduli need not be pairwise coprime; pairs are merged via gcd compatibility.
    """
    congs = list(congruences)
    if not congs:
        raise InputError("crt_solve needs at least one congruence")
    r, m = 0, 1
    for a, n in congs:
        if n < 1:
            raise InputError(f"modulus must be >= 1, got {n}")
        a %= n
        g = math.gcd(m, n)
        if (a - r) % g != 0:
            return None
        lcm = m // g * n
        # shift r by a multiple of m landing in a's class mod n
        t = ((a - r) // g * pow(m // g, -1, n // g)) % (n // g)
        r = r + m * t
        m = lcm
        r %= m
    return r if r > 0 else m


def nth_power_completion(d: int, n: int) -> int:
    """Least l with d*l a perfect n-th power: raise each exponent to the next multiple of n."""
    if d < 1:
        raise InputError(f"expected d >= 1, got {d}")
    if n < 2:
        raise InputError(f"power index must be >= 2, got {n}")
    l = 1
    for p, e in factorize(d):
        l *= p ** ((n - e % n) % n)
    return l


def integer_nth_root(x: int, n: int) -> int:
    """Floor of the n-th root, exact integer arithmetic."""
    if x < 0 or n < 1:
        raise InputError("integer_nth_root needs x >= 0, n >= 1")
    if x == 0:
        return 0
    r = int(round(x ** (1.0 / n)))
    while r ** n > x:
        r -= 1
    while (r + 1) ** n <= x:
        r += 1
    return r

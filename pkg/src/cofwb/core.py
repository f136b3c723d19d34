"""Finite maps, evaluable permutations, window semantics, and pairing.

Everything downstream builds on three ideas: a finite injective partial map
on the naturals, a permutation given by a finitely described rule that can be
applied forwards and backwards, and a window (W, threshold) that stands in
for "all of N" / "all but finitely many".
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import isqrt


@dataclass(frozen=True)
class Window:
    """Universe bound W plus the cutoff used by 'finite/eventual' predicates."""

    bound: int
    threshold: int = 0

    def __post_init__(self):
        if not 0 <= self.threshold < self.bound:
            raise ValueError(f"need 0 <= threshold < bound, got {self}")

    def points(self):
        return range(self.bound)


class PartialInjection:
    """Finite injective partial map N -> N.

    Immutable: `extend` returns a new map.  Construction rejects pairs that
    repeat a domain point or a value.
    """

    __slots__ = ("_fwd", "_inv")

    def __init__(self, pairs=()):
        fwd, inv = {}, {}
        for a, b in pairs:
            if a in fwd and fwd[a] != b:
                raise ValueError(f"domain point {a} mapped twice")
            if b in inv and inv[b] != a:
                raise ValueError(f"value {b} hit twice")
            fwd[a] = b
            inv[b] = a
        self._fwd = fwd
        self._inv = inv

    @classmethod
    def _raw(cls, fwd, inv):
        self = object.__new__(cls)
        self._fwd = fwd
        self._inv = inv
        return self

    def apply(self, n):
        return self._fwd.get(n)

    def inv_apply(self, n):
        return self._inv.get(n)

    def extend(self, a, b):
        if a in self._fwd:
            raise ValueError(f"{a} already in domain")
        if b in self._inv:
            raise ValueError(f"{b} already in range")
        fwd = dict(self._fwd)
        inv = dict(self._inv)
        fwd[a] = b
        inv[b] = a
        return PartialInjection._raw(fwd, inv)

    def invert(self):
        return PartialInjection._raw(dict(self._inv), dict(self._fwd))

    def pairs(self):
        return sorted(self._fwd.items())

    def domain(self):
        return self._fwd.keys()

    def range_(self):
        return self._inv.keys()

    def __len__(self):
        return len(self._fwd)

    def __contains__(self, pair):
        a, b = pair
        return self._fwd.get(a) == b

    def __eq__(self, other):
        return isinstance(other, PartialInjection) and self._fwd == other._fwd

    def __hash__(self):
        return hash(frozenset(self._fwd.items()))

    def __repr__(self):
        return f"PartialInjection({self.pairs()})"


def least_missing(taken, forbidden=frozenset()):
    """Least natural not in `taken` and not in `forbidden`."""
    n = 0
    while n in taken or n in forbidden:
        n += 1
    return n


def base_h(n: int) -> int:
    """The fixed transitive base permutation: 0 -> 1, odd up by 2, even down by 2."""
    if n == 0:
        return 1
    if n % 2 == 0:
        return n - 2
    return n + 2


def base_h_inv(n: int) -> int:
    if n == 1:
        return 0
    if n % 2 == 0:
        return n + 2
    return n - 2


@dataclass(frozen=True)
class EvaluablePermutation:
    """Permutation (or partial injection) given by a finite description.

    kind is one of:
      table   -- explicit entries, partial outside them
      patch   -- finite set of disjoint swaps over the identity
      rule    -- residue-class affine clauses plus an optional finite patch
      base_h  -- the fixed base permutation above

    Applications may be clipped to a window: values landing at or beyond the
    bound come back as None, matching the partial-map semantics of word
    evaluation.  Without a window the map acts on all of N.
    """

    kind: str
    table: tuple = ()
    swaps: tuple = ()
    clauses: tuple = ()

    @classmethod
    def from_table(cls, entries):
        return cls(kind="table", table=tuple(sorted(entries)))

    @classmethod
    def from_patch(cls, swaps):
        return cls(kind="patch", swaps=tuple(sorted(tuple(s) for s in swaps)))

    @classmethod
    def from_rule(cls, clauses, patch=()):
        # clause: (mod, residue, mul, add) meaning n -> mul*n + add on its class
        return cls(
            kind="rule",
            clauses=tuple(tuple(c) for c in clauses),
            table=tuple(sorted(patch)),
        )

    @classmethod
    def base(cls):
        return cls(kind="base_h")

    def _fwd_dict(self):
        return dict(self.table)

    def _apply_raw(self, n):
        if n < 0:
            return None
        if self.kind == "table":
            return self._fwd_dict().get(n)
        if self.kind == "patch":
            for a, b in self.swaps:
                if n == a:
                    return b
                if n == b:
                    return a
            return n
        if self.kind == "rule":
            patch = self._fwd_dict()
            if n in patch:
                return patch[n]
            for mod, residue, mul, add in self.clauses:
                if n % mod == residue:
                    v = mul * n + add
                    return v if v >= 0 else None
            return None
        if self.kind == "base_h":
            return base_h(n)
        raise ValueError(f"unknown kind {self.kind}")

    def _inv_raw(self, m):
        if m < 0:
            return None
        if self.kind == "table":
            for a, b in self.table:
                if b == m:
                    return a
            return None
        if self.kind == "patch":
            return self._apply_raw(m)
        if self.kind == "rule":
            patch = self._fwd_dict()
            for a, b in patch.items():
                if b == m:
                    return a
            for mod, residue, mul, add in self.clauses:
                if mul == 0:
                    continue
                num = m - add
                if num % mul != 0:
                    continue
                n = num // mul
                if n >= 0 and n % mod == residue and self._apply_raw(n) == m:
                    return n
            return None
        if self.kind == "base_h":
            return base_h_inv(m)
        raise ValueError(f"unknown kind {self.kind}")

    def apply(self, n, window: Window | None = None):
        v = self._apply_raw(n)
        if v is None:
            return None
        if window is not None and not 0 <= v < window.bound:
            return None
        return v

    def inv_apply(self, n, window: Window | None = None):
        v = self._inv_raw(n)
        if v is None:
            return None
        if window is not None and not 0 <= v < window.bound:
            return None
        return v

    def __call__(self, n):
        return self._apply_raw(n)

    def to_spec(self):
        if self.kind == "table":
            return {"kind": "table", "entries": [list(p) for p in self.table]}
        if self.kind == "patch":
            return {"kind": "patch", "swaps": [list(s) for s in self.swaps]}
        if self.kind == "rule":
            spec = {"kind": "rule", "clauses": [list(c) for c in self.clauses]}
            if self.table:
                spec["patch"] = [list(p) for p in self.table]
            return spec
        return {"kind": "base_h"}


def perm_from_spec(spec: dict) -> EvaluablePermutation:
    """Build a permutation from the function-spec JSON shape."""
    kind = spec.get("kind")
    if kind == "table":
        return EvaluablePermutation.from_table(tuple(map(tuple, spec["entries"])))
    if kind == "patch":
        return EvaluablePermutation.from_patch(spec["swaps"])
    if kind == "rule":
        return EvaluablePermutation.from_rule(
            spec["clauses"], tuple(map(tuple, spec.get("patch", ())))
        )
    if kind == "base_h":
        return EvaluablePermutation.base()
    raise ValueError(f"unknown function-spec kind: {kind!r}")


def load_function_specs(path):
    """Read one function spec, or a list of them, from a JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict) and "functions" in data:
        data = data["functions"]
    if isinstance(data, dict):
        data = [data]
    return [perm_from_spec(spec) for spec in data]


def as_fn(f):
    """Normalise the many function shapes to `n -> value-or-None`."""
    if isinstance(f, PartialInjection):
        return f.apply
    if isinstance(f, EvaluablePermutation):
        return f._apply_raw
    if isinstance(f, dict):
        return f.get
    if callable(f):
        return f
    raise TypeError(f"not usable as a function on N: {f!r}")


def pair(a: int, b: int) -> int:
    """Cantor pairing: a bijection N x N -> N."""
    s = a + b
    return s * (s + 1) // 2 + b


def unpair(c: int) -> tuple[int, int]:
    """Inverse of `pair`, total on N."""
    w = (isqrt(8 * c + 1) - 1) // 2
    t = w * (w + 1) // 2
    b = c - t
    return w - b, b


def fixed_points(f, window: Window) -> set[int]:
    """{n < W : f(n) = n} for any of the supported function shapes."""
    fn = as_fn(f)
    return {n for n in window.points() if fn(n) == n}

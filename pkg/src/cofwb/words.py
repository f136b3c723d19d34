"""Free-product words over a group and variables.

A word is a flat sequence of letters; x^2 is two letters.  Letters are
written left to right but applied right to left, so the rightmost letter is
letter 0 and the evaluation path of n lists the intermediate values.

Group letters are handles: freely reduced words in the context's named
generators.  Handle identity and equality checks beyond free reduction are
window based (equal on [0, W)), which is sound at fixed W but heuristic in
general; that is the documented trade-off for rule-based generators.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .core import EvaluablePermutation, PartialInjection, Window


@dataclass(frozen=True)
class Var:
    index: int
    sign: int  # +1 or -1

    def inverse(self):
        return Var(self.index, -self.sign)

    def render(self):
        base = f"x{self.index}"
        return base if self.sign > 0 else base + "^-1"


@dataclass(frozen=True)
class GroupElem:
    """Handle: freely reduced generator word, e.g. (("g0", 1), ("g1", -1))."""

    letters: tuple

    def inverse(self):
        return GroupElem(tuple((n, -s) for n, s in reversed(self.letters)))

    def is_trivial_syntactically(self):
        return not self.letters

    def render(self):
        if not self.letters:
            return "1"
        parts = [n if s > 0 else f"{n}^-1" for n, s in self.letters]
        text = " ".join(parts)
        return text if len(parts) == 1 else f"({text})"


def _reduce_handle_letters(letters):
    out = []
    for name, sign in letters:
        if out and out[-1][0] == name and out[-1][1] == -sign:
            out.pop()
        else:
            out.append((name, sign))
    return tuple(out)


def compose_handles(left: GroupElem, right: GroupElem) -> GroupElem:
    """Handle of 'apply right, then left'."""
    return GroupElem(_reduce_handle_letters(left.letters + right.letters))


class GroupContext:
    """Named generators with a window for identity and equality heuristics."""

    def __init__(self, generators: dict, window: Window):
        self.generators = dict(generators)
        self.window = window
        self._eq_cache = {}

    def handle(self, name: str, sign: int = 1) -> GroupElem:
        if name not in self.generators:
            raise KeyError(f"unknown generator {name!r}")
        return GroupElem(((name, sign),))

    def apply_handle(self, h: GroupElem, n, window: Window | None = None):
        win = window or self.window
        v = n
        for name, sign in reversed(h.letters):
            if v is None:
                return None
            gen = self.generators[name]
            v = gen.apply(v, win) if sign > 0 else gen.inv_apply(v, win)
        return v

    def handle_is_identity(self, h: GroupElem) -> bool:
        if not h.letters:
            return True
        key = ("id", h.letters)
        hit = self._eq_cache.get(key)
        if hit is None:
            hit = all(
                self.apply_handle(h, n) == n for n in self.window.points()
            )
            self._eq_cache[key] = hit
        return hit

    def handles_equal(self, h1: GroupElem, h2: GroupElem) -> bool:
        if h1.letters == h2.letters:
            return True
        return self.handle_is_identity(compose_handles(h1, h2.inverse()))


@dataclass(frozen=True)
class Word:
    """Reduced free-product word; empty tuple is the identity."""

    letters: tuple = ()

    def __len__(self):
        return len(self.letters)

    def is_empty(self):
        return not self.letters

    def render(self):
        if not self.letters:
            return "1"
        parts = []
        i = 0
        L = self.letters
        while i < len(L):
            let = L[i]
            if isinstance(let, Var):
                j = i
                while j < len(L) and L[j] == let:
                    j += 1
                k = (j - i) * let.sign
                base = f"x{let.index}"
                parts.append(base if k == 1 else f"{base}^{k}")
                i = j
            else:
                parts.append(let.render())
                i += 1
        return " ".join(parts)

    def __repr__(self):
        return f"Word({self.render()})"

    def max_var_index(self):
        idxs = [l.index for l in self.letters if isinstance(l, Var)]
        return max(idxs) if idxs else -1

    def var_occurrences(self, index=None):
        return sum(
            1
            for l in self.letters
            if isinstance(l, Var) and (index is None or l.index == index)
        )


def _letters_cancel(a, b, ctx: GroupContext) -> bool:
    if isinstance(a, Var) and isinstance(b, Var):
        return a.index == b.index and a.sign == -b.sign
    return False


def reduce_letters(seq, ctx: GroupContext, window: Window | None = None) -> Word:
    """Reduce a raw letter sequence to the canonical reduced word.

    Adjacent group letters compose; identity group letters (on the window)
    drop; adjacent inverse variable letters cancel.
    """
    stack = []
    for let in seq:
        cur = let
        while True:
            if isinstance(cur, GroupElem):
                if stack and isinstance(stack[-1], GroupElem):
                    cur = compose_handles(stack.pop(), cur)
                    continue
                if ctx.handle_is_identity(cur):
                    cur = None
                break
            if stack and _letters_cancel(stack[-1], cur, ctx):
                stack.pop()
                cur = None
            break
        if cur is not None:
            stack.append(cur)
    return Word(tuple(stack))


def word_length(w: Word) -> int:
    """Letter count: group letters plus the sum of |k_i|."""
    return len(w.letters)


def letter_at(w: Word, i: int):
    """Letter i counted from the right; letter 0 acts first."""
    if not 0 <= i < len(w.letters):
        raise IndexError(f"letter index {i} out of range for {w!r}")
    return w.letters[len(w.letters) - 1 - i]


def initial_segment(w: Word, i: int) -> Word:
    """The i rightmost letters as a word (the part applied first)."""
    if not 0 <= i <= len(w.letters):
        raise IndexError(f"segment length {i} out of range for {w!r}")
    return Word(w.letters[len(w.letters) - i :]) if i else Word()


def invert_word(w: Word) -> Word:
    return Word(tuple(l.inverse() for l in reversed(w.letters)))


def _letter_inverse_of(a, b, ctx: GroupContext) -> bool:
    """Is letter a the inverse of letter b?"""
    if isinstance(a, Var) and isinstance(b, Var):
        return a.index == b.index and a.sign == -b.sign
    if isinstance(a, GroupElem) and isinstance(b, GroupElem):
        return ctx.handles_equal(a, b.inverse())
    return False


def conjugate_decompositions(w: Word, ctx: GroupContext):
    """All (u, z) with w = u^-1 z u without cancellation, (empty, w) first.

    Decompositions are nested: peeling k letters works only if peeling k-1
    did, so the list is ordered by increasing |u| and the last z is the
    shortest conjugate subword.
    """
    if w.is_empty():
        raise ValueError("conjugate decompositions of the empty word")
    L = w.letters
    n = len(L)
    out = [(Word(), w)]
    k = 0
    while 2 * (k + 1) < n:  # z must stay nonempty
        if not _letter_inverse_of(L[k], L[n - 1 - k], ctx):
            break
        k += 1
        out.append((Word(L[n - k :]), Word(L[k : n - k])))
    return out


def shortest_conjugate_subword(w: Word, ctx: GroupContext) -> Word:
    return conjugate_decompositions(w, ctx)[-1][1]


def subwords(w: Word):
    """All nonempty contiguous subwords (each reduced because w is)."""
    L = w.letters
    seen = set()
    out = []
    for i in range(len(L)):
        for j in range(i + 1, len(L) + 1):
            sub = L[i:j]
            if sub not in seen:
                seen.add(sub)
                out.append(Word(sub))
    return out


def _apply_letter(let, assign, ctx, v, window, overlay=None):
    """Apply one letter to value v; overlay is an extra (var, a, b) pair."""
    if isinstance(let, GroupElem):
        return ctx.apply_handle(let, v, window)
    p = assign.get(let.index) if isinstance(assign, dict) else assign[let.index]
    if let.sign > 0:
        out = p.apply(v)
        if out is None and overlay is not None and overlay[0] == let.index:
            if v == overlay[1]:
                out = overlay[2]
    else:
        out = p.inv_apply(v)
        if out is None and overlay is not None and overlay[0] == let.index:
            if v == overlay[2]:
                out = overlay[1]
    if out is not None and window is not None and not 0 <= out < window.bound:
        return None
    return out


def _unapply_letter(let, assign, ctx, v, window, overlay=None):
    """Invert one letter at value v (walks evaluation paths backwards)."""
    if isinstance(let, GroupElem):
        return ctx.apply_handle(let.inverse(), v, window)
    p = assign.get(let.index) if isinstance(assign, dict) else assign[let.index]
    if let.sign > 0:
        out = p.inv_apply(v)
        if out is None and overlay is not None and overlay[0] == let.index:
            if v == overlay[2]:
                out = overlay[1]
    else:
        out = p.apply(v)
        if out is None and overlay is not None and overlay[0] == let.index:
            if v == overlay[1]:
                out = overlay[2]
    if out is not None and window is not None and not 0 <= out < window.bound:
        return None
    return out


def evaluation_path(w: Word, assign, ctx: GroupContext, n: int, window: Window,
                    overlay=None):
    """Longest computable prefix of the letter-by-letter evaluation of n.

    Returns (path, used) where path[0] = n and used collects the assignment
    pairs consumed, tagged (variable, (a, b)) in map orientation.
    """
    path = [n]
    used = set()
    v = n
    for i in range(len(w.letters)):
        let = letter_at(w, i)
        nxt = _apply_letter(let, assign, ctx, v, window, overlay)
        if nxt is None:
            break
        if isinstance(let, Var):
            if let.sign > 0:
                used.add((let.index, (v, nxt)))
            else:
                used.add((let.index, (nxt, v)))
        path.append(nxt)
        v = nxt
    return path, used


def evaluate(w: Word, assign, ctx: GroupContext, n: int, window: Window,
             overlay=None):
    """w(assign)(n), or None when the evaluation path is incomplete."""
    v = n
    for i in range(len(w.letters)):
        v = _apply_letter(letter_at(w, i), assign, ctx, v, window, overlay)
        if v is None:
            return None
    return v


_TOKEN = re.compile(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(-?\d+))?$")


def parse_word(text: str, ctx: GroupContext, window: Window | None = None) -> Word:
    """Parse the CLI word syntax: `g0 x^2 g1`, `g0^-1 x g0`, vars x, x0..xn."""
    letters = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad word token {tok!r}")
        name, exp = m.group(1), int(m.group(2) or 1)
        if exp == 0:
            raise ValueError(f"zero exponent in {tok!r}")
        sign = 1 if exp > 0 else -1
        if re.fullmatch(r"x\d*", name):
            idx = int(name[1:]) if len(name) > 1 else 0
            unit = Var(idx, sign)
        else:
            unit = ctx.handle(name, sign)
        letters.extend([unit] * abs(exp))
    return reduce_letters(letters, ctx, window)


class WordPermutation:
    """A generator-word over a context, usable wherever a permutation is.

    This is the lazily evaluated 'element handle' form of group members.
    """

    def __init__(self, ctx: GroupContext, handle: GroupElem):
        self.ctx = ctx
        self.handle = handle

    def apply(self, n, window: Window | None = None):
        return self.ctx.apply_handle(self.handle, n, window or self.ctx.window)

    def inv_apply(self, n, window: Window | None = None):
        return self.ctx.apply_handle(
            self.handle.inverse(), n, window or self.ctx.window
        )

    def __call__(self, n):
        return self.apply(n)

"""Good-extension predicates, extension-lemma searches, and the stage builder.

A good extension may only create word fixed points that are conjugation
transports of fixed points the smaller map already had.  The finders search
for the least value admitting a good extension with respect to an active
word list closed under subwords; the builder iterates the three-step stage
loop (extend domain, extend range, hit each active target).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .core import PartialInjection, Window, as_fn, least_missing
from .errors import SearchExhausted
from .words import (
    GroupContext,
    Var,
    Word,
    _unapply_letter,
    conjugate_decompositions,
    evaluate,
    invert_word,
    letter_at,
    shortest_conjugate_subword,
    subwords,
)


def close_under_subwords(words):
    """The given words plus all their contiguous subwords, deduplicated."""
    seen = set()
    out = []
    for w in words:
        for cand in [w] + subwords(w):
            if cand.letters and cand.letters not in seen:
                seen.add(cand.letters)
                out.append(cand)
    return out


def _check_arity(words, arity):
    for w in words:
        if w.max_var_index() >= arity:
            raise ValueError(
                f"word {w!r} uses variable x{w.max_var_index()} "
                f"but only {arity} maps were given"
            )


def _new_fixed_points(w, assign, ctx, window, overlay):
    """Fixed points of w(assign + overlay pair) whose path uses the new pair.

    Every genuinely new fixed point routes through the overlay pair at some
    variable occurrence, so walking backwards from that occurrence finds
    them all without scanning the window.
    """
    var, a, b = overlay
    found = []
    L = w.letters
    n = len(L)
    for i in range(n):
        let = letter_at(w, i)
        if not isinstance(let, Var) or let.index != var:
            continue
        v = a if let.sign > 0 else b
        # invert the first i letters to find the path start
        for j in range(i - 1, -1, -1):
            v = _unapply_letter(letter_at(w, j), assign, ctx, v, window, overlay)
            if v is None:
                break
        if v is None:
            continue
        l = v
        if evaluate(w, assign, ctx, l, window, overlay) != l:
            continue
        if evaluate(w, assign, ctx, l, window) == l:
            continue  # not new: already fixed without the overlay
        if l not in found:
            found.append(l)
    return found


def _witnessed(w, p_assign, q_assign, ctx, window, l, q_overlay=None):
    """Does some decomposition w = u^-1 z u transport l from a z(p) fixed point?"""
    for u, z in conjugate_decompositions(w, ctx)[1:]:
        k = evaluate(u, q_assign, ctx, l, window, q_overlay)
        if k is None:
            continue
        if evaluate(z, p_assign, ctx, k, window) == k:
            return True
    return False


def _good_one_pair(p_assign, var, a, b, words, ctx, window):
    """Goodness of adding the single pair (a, b) to component `var`."""
    overlay = (var, a, b)
    for w in words:
        for l in _new_fixed_points(w, p_assign, ctx, window, overlay):
            if not _witnessed(w, p_assign, p_assign, ctx, window, l, overlay):
                return False
    return True


def is_good_extension(p, q, w, ctx: GroupContext, window: Window) -> bool:
    """Is q a good extension of p with respect to w?

    Accepts single maps or equal-length tuples of maps; tuple arity must
    cover every variable index appearing in w.
    """
    p_assign = (p,) if isinstance(p, PartialInjection) else tuple(p)
    q_assign = (q,) if isinstance(q, PartialInjection) else tuple(q)
    if len(p_assign) != len(q_assign):
        raise ValueError("component count mismatch between p and q")
    _check_arity([w], len(p_assign))
    for pi, qi in zip(p_assign, q_assign):
        for a, b in pi.pairs():
            if (a, b) not in qi:
                raise ValueError("q does not extend p componentwise")
    for l in window.points():
        if evaluate(w, q_assign, ctx, l, window) != l:
            continue
        if evaluate(w, p_assign, ctx, l, window) is not None:
            continue
        if not _witnessed(w, p_assign, q_assign, ctx, window, l):
            return False
    return True


def is_very_good_extension(p, q, w, ctx: GroupContext, window: Window) -> bool:
    """No new fixed points at all: fix(w(q)) within fix(w(p)) on the window."""
    p_assign = (p,) if isinstance(p, PartialInjection) else tuple(p)
    q_assign = (q,) if isinstance(q, PartialInjection) else tuple(q)
    for l in window.points():
        if evaluate(w, q_assign, ctx, l, window) == l:
            if evaluate(w, p_assign, ctx, l, window) != l:
                return False
    return True


def find_domain_extension(p, var, a, words, ctx, window, forbidden=frozenset(),
                          search_bound=None, reject_log=None):
    """Least b making p[var] + (a, b) a good extension for all listed words.

    The word list is closed under subwords before checking.  `reject_log`,
    when given, collects (b, word) pairs for rejections caused by goodness.
    """
    p_assign = (p,) if isinstance(p, PartialInjection) else tuple(p)
    bound = window.bound if search_bound is None else search_bound
    active = close_under_subwords(words)
    _check_arity(active, len(p_assign))
    comp = p_assign[var]
    if comp.apply(a) is not None:
        raise ValueError(f"{a} already in the domain of component {var}")
    if a in forbidden:
        raise ValueError(f"domain point {a} is forbidden")
    for b in range(bound + 1):
        if b in forbidden or comp.inv_apply(b) is not None:
            continue
        ok = True
        for w in active:
            if not _good_one_pair(p_assign, var, a, b, [w], ctx, window):
                if reject_log is not None:
                    reject_log.append((b, w))
                ok = False
                break
        if ok:
            return b
    raise SearchExhausted(bound, f"domain extension at {a}")


def find_range_extension(p, var, b, words, ctx, window, forbidden=frozenset(),
                         search_bound=None, reject_log=None):
    """Mirror search: least a with (a, b) good; runs through the inverses."""
    p_assign = (p,) if isinstance(p, PartialInjection) else tuple(p)
    inv_assign = tuple(c.invert() for c in p_assign)
    inv_words = [_invert(w) for w in words]
    if reject_log is None:
        return find_domain_extension(
            inv_assign, var, b, inv_words, ctx, window, forbidden, search_bound
        )
    inv_log = []
    try:
        return find_domain_extension(
            inv_assign, var, b, inv_words, ctx, window, forbidden,
            search_bound, inv_log
        )
    finally:
        reject_log.extend((a, _invert(w)) for a, w in inv_log)


def _invert(w):
    return invert_word(w)


def find_hitting_extension(p: PartialInjection, f, words, ctx, window,
                           forbidden=frozenset(), search_bound=None,
                           reject_log=None):
    """Least n with p + (n, f(n)) a good extension for all listed words.

    f may be partial on the searched points; undefined f(n) skips n.
    """
    bound = window.bound if search_bound is None else search_bound
    active = close_under_subwords(words)
    _check_arity(active, 1)
    fn = as_fn(f)
    for n in range(bound + 1):
        if n in forbidden or p.apply(n) is not None:
            continue
        v = fn(n)
        if v is None or v in forbidden or p.inv_apply(v) is not None:
            continue
        ok = True
        for w in active:
            if not _good_one_pair((p,), 0, n, v, [w], ctx, window):
                if reject_log is not None:
                    reject_log.append((n, w))
                ok = False
                break
        if ok:
            return n
    raise SearchExhausted(bound, "hitting extension")


@dataclass
class BuildSchedule:
    """Stage plan for the single-generator builder.

    Word i and all its subwords become active at stage i; target j is hit
    once per stage from stage j on.  `forbidden` reserves points for the
    coding module.
    """

    words: list
    targets: list = field(default_factory=list)
    stages: int = 10
    window: Window = None
    forbidden: frozenset = frozenset()
    search_bound: int = None

    def active_words(self, stage):
        return close_under_subwords(self.words[: stage + 1])


@dataclass
class TraceStep:
    stage: int
    step: str  # domain | range | hit | code
    var: int
    pair: tuple
    fp: dict  # word id -> fixed point count after this step

    def to_json(self):
        return {
            "stage": self.stage,
            "step": self.step,
            "var": self.var,
            "pair": list(self.pair),
            "fp": dict(self.fp),
        }


@dataclass
class Trace:
    """Replayable per-step construction log."""

    steps: list = field(default_factory=list)
    word_ids: list = field(default_factory=list)

    def add(self, stage, step, var, pair, fp):
        self.steps.append(TraceStep(stage, step, var, pair, dict(fp)))

    def replay(self, arity=1):
        maps = [PartialInjection() for _ in range(arity)]
        for s in self.steps:
            maps[s.var] = maps[s.var].extend(*s.pair)
        return tuple(maps)

    def pairs_by_stage(self):
        out = {}
        for s in self.steps:
            out.setdefault(s.stage, []).append((s.step, s.pair))
        return out

    def to_json(self):
        return {
            "schema_version": 1,
            "words": list(self.word_ids),
            "steps": [s.to_json() for s in self.steps],
        }

    def dump(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=2, sort_keys=True)


class _FixedPointLedger:
    """Incrementally tracked fixed-point sets for the scheduled words."""

    def __init__(self, words, ctx, window):
        self.words = words
        self.ctx = ctx
        self.window = window
        self.sets = {w.render(): set() for w in words}

    def absorb(self, assign, var, a, b):
        overlay = (var, a, b)
        for w in self.words:
            fresh = _new_fixed_points(w, assign, self.ctx, self.window, overlay)
            self.sets[w.render()].update(fresh)

    def counts(self):
        return {wid: len(s) for wid, s in self.sets.items()}


def build_cofinitary_generator(ctx: GroupContext, schedule: BuildSchedule):
    """Run the three-step stage loop; returns the generator and its trace.

    Raises SearchExhausted with stage context if any step finds no value
    below the bound.
    """
    window = schedule.window or ctx.window
    g = PartialInjection()
    trace = Trace(word_ids=[w.render() for w in schedule.words])
    ledger = _FixedPointLedger(schedule.words, ctx, window)
    forbidden = frozenset(schedule.forbidden)

    def record(stage, step, a, b):
        nonlocal g
        ledger.absorb((g,), 0, a, b)
        g = g.extend(a, b)
        trace.add(stage, step, 0, (a, b), ledger.counts())

    for s in range(schedule.stages):
        active = schedule.active_words(s)
        try:
            n = least_missing(g.domain(), forbidden)
            b = find_domain_extension(
                (g,), 0, n, active, ctx, window, forbidden,
                schedule.search_bound,
            )
            record(s, "domain", n, b)

            k = least_missing(g.range_(), forbidden)
            a = find_range_extension(
                (g,), 0, k, active, ctx, window, forbidden,
                schedule.search_bound,
            )
            record(s, "range", a, k)

            for j, f in enumerate(schedule.targets):
                if j > s:
                    break
                n = find_hitting_extension(
                    g, f, active, ctx, window, forbidden,
                    schedule.search_bound,
                )
                record(s, "hit", n, as_fn(f)(n))
        except SearchExhausted as exc:
            raise SearchExhausted(exc.bound, f"stage {s}: {exc.context}") from exc
    return g, trace


@dataclass
class FixedPointProfile:
    word: str
    entry_stage: int
    shortest_subword: str
    entry_subword_count: int
    stage_counts: list
    final_count: int


def fixed_point_profile(w: Word, trace: Trace, ctx: GroupContext,
                        window: Window, schedule: BuildSchedule = None):
    """Per-stage fixed-point counts of w along a replayed trace.

    Also reports the stage at which w entered the schedule and the fixed
    points of its shortest conjugate subword over the approximation at that
    entry, which is what the count must settle at.
    """
    entry = 0
    if schedule is not None:
        for i, sw in enumerate(schedule.words):
            if sw.letters == w.letters:
                entry = i
                break
    z = shortest_conjugate_subword(w, ctx)
    g = PartialInjection()
    stage_counts = []
    entry_count = None
    cur_stage = 0

    def count_now(word):
        return sum(
            1 for l in window.points()
            if evaluate(word, (g,), ctx, l, window) == l
        )

    if entry == 0:
        entry_count = count_now(z)
    for step in trace.steps:
        while step.stage > cur_stage:
            stage_counts.append(count_now(w))
            cur_stage += 1
            if cur_stage == entry and entry_count is None:
                entry_count = count_now(z)
        g = g.extend(*step.pair)
    stage_counts.append(count_now(w))
    if entry_count is None:
        entry_count = count_now(z)
    return FixedPointProfile(
        word=w.render(),
        entry_stage=entry,
        shortest_subword=z.render(),
        entry_subword_count=entry_count,
        stage_counts=stage_counts,
        final_count=stage_counts[-1],
    )

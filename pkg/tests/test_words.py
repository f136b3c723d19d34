import random

import pytest

from cofwb.core import EvaluablePermutation, PartialInjection, Window
from cofwb.words import (
    GroupContext,
    GroupElem,
    Var,
    Word,
    conjugate_decompositions,
    evaluate,
    evaluation_path,
    initial_segment,
    invert_word,
    letter_at,
    parse_word,
    reduce_letters,
    shortest_conjugate_subword,
    subwords,
    word_length,
)

WIN = Window(32)


def make_ctx(win=WIN):
    gens = {
        "g0": EvaluablePermutation.from_rule([(2, 0, 1, 1), (2, 1, 1, -1)]),
        "g1": EvaluablePermutation.base(),
    }
    return GroupContext(gens, win)


def naive_eval(seq, assign, ctx, n, win):
    """Oracle: apply an unreduced letter sequence right to left, no tricks."""
    v = n
    for let in reversed(list(seq)):
        if v is None:
            return None
        if isinstance(let, GroupElem):
            v = ctx.apply_handle(let, v, win)
        elif let.sign > 0:
            v = assign[let.index].apply(v)
        else:
            v = assign[let.index].inv_apply(v)
        if v is not None and not 0 <= v < win.bound:
            return None
    return v


def x(i=0, s=1):
    return Var(i, s)


def test_reduce_free_cancellation():
    ctx = make_ctx()
    assert reduce_letters([x(), x(0, -1)], ctx).is_empty()


def test_reduce_group_letters_compose_to_identity():
    ctx = make_ctx()
    g = ctx.handle("g0")
    ginv = ctx.handle("g0", -1)
    w = reduce_letters([g, ginv, x()], ctx)
    assert w.letters == (x(),)


def test_reduce_already_reduced():
    ctx = make_ctx()
    w = reduce_letters([ctx.handle("g0"), x(), x(), ctx.handle("g1")], ctx)
    assert len(w) == 4


def test_reduce_involution_square_drops():
    ctx = make_ctx()  # g0 is an involution
    g = ctx.handle("g0")
    assert reduce_letters([g, g], ctx).is_empty()
    w = reduce_letters([g, x(), g, g, x()], ctx)
    assert w.render() == "g0 x0^2"


def test_length():
    ctx = make_ctx()
    w = reduce_letters([ctx.handle("g0"), x(), x(), ctx.handle("g1")], ctx)
    assert word_length(w) == 4
    assert word_length(Word()) == 0
    w = reduce_letters([x(0, -1)] * 3, ctx)
    assert word_length(w) == 3


def test_letter_at_counts_from_the_right():
    ctx = make_ctx()
    g0, g1 = ctx.handle("g0"), ctx.handle("g1")
    w = reduce_letters([g0, x(), x(), g1], ctx)
    assert letter_at(w, 0) == g1
    assert letter_at(w, 1) == x()
    assert letter_at(w, 2) == x()
    assert letter_at(w, 3) == g0
    with pytest.raises(IndexError):
        letter_at(w, 4)


def test_initial_segment():
    ctx = make_ctx()
    g0, g1 = ctx.handle("g0"), ctx.handle("g1")
    w = reduce_letters([g0, x(), x(), g1], ctx)
    assert initial_segment(w, 2).letters == (x(), g1)
    assert initial_segment(w, 0).is_empty()
    assert initial_segment(w, 4) == w


def test_conjugate_decompositions_spec_examples():
    ctx = make_ctx()
    g1 = ctx.handle("g1")

    w = Word((x(),))
    assert conjugate_decompositions(w, ctx) == [(Word(), w)]

    w = reduce_letters([ctx.handle("g1", -1), x(), g1], ctx)
    decs = conjugate_decompositions(w, ctx)
    assert len(decs) == 2
    assert decs[0] == (Word(), w)
    assert decs[1][0].letters == (g1,)
    assert decs[1][1].letters == (x(),)

    w = Word((x(), x()))
    assert conjugate_decompositions(w, ctx) == [(Word(), w)]


def test_conjugate_decomposition_sees_involutions():
    # g0 g0 is the identity on the window, so g0 x g0 peels to x
    ctx = make_ctx()
    g0 = ctx.handle("g0")
    w = Word((g0, x(), g0))
    z = shortest_conjugate_subword(w, ctx)
    assert z.letters == (x(),)


def test_subword_closure_lengths():
    ctx = make_ctx()
    w = reduce_letters(
        [ctx.handle("g1", -1), x(0, -1), ctx.handle("g1"), x()], ctx
    )
    for u, z in conjugate_decompositions(w, ctx):
        assert 2 * len(u) + len(z) == len(w)
    for s in subwords(w):
        assert 1 <= len(s) <= len(w)


def test_shortest_subword_is_a_fixed_point():
    ctx = make_ctx()
    rng = random.Random(5)
    alphabet = [x(), x(0, -1), ctx.handle("g0"), ctx.handle("g1"),
                ctx.handle("g1", -1)]
    for _ in range(60):
        seq = [rng.choice(alphabet) for _ in range(rng.randrange(1, 7))]
        w = reduce_letters(seq, ctx)
        if w.is_empty():
            continue
        z = shortest_conjugate_subword(w, ctx)
        assert shortest_conjugate_subword(z, ctx) == z


def test_evaluation_path_spec_examples():
    ctx = make_ctx()
    p = PartialInjection([(0, 1)])

    path, used = evaluation_path(Word((x(), x())), {0: p}, ctx, 0, WIN)
    assert path == [0, 1]
    assert used == {(0, (0, 1))}

    path, used = evaluation_path(Word(), {}, ctx, 7, WIN)
    assert path == [7] and used == set()

    g = ctx.handle("g0")
    path, used = evaluation_path(Word((g,)), {}, ctx, 4, WIN)
    assert path == [4, 5] and used == set()


def test_evaluate_spec_examples():
    ctx = make_ctx()
    p = PartialInjection([(0, 1)])
    assert evaluate(Word((x(),)), {0: p}, ctx, 0, WIN) == 1
    assert evaluate(Word((x(), x())), {0: p}, ctx, 0, WIN) is None
    w = reduce_letters([ctx.handle("g1", -1), ctx.handle("g1")], ctx)
    assert w.is_empty()
    assert evaluate(w, {}, ctx, 5, WIN) == 5


def test_reduce_idempotent_and_commutes_with_evaluation():
    ctx = make_ctx()
    rng = random.Random(11)
    alphabet = [x(), x(0, -1), x(1), x(1, -1),
                ctx.handle("g0"), ctx.handle("g1"), ctx.handle("g1", -1)]
    for _ in range(250):
        seq = [rng.choice(alphabet) for _ in range(rng.randrange(0, 7))]
        w = reduce_letters(seq, ctx)
        assert reduce_letters(w.letters, ctx) == w
        assign = {
            0: PartialInjection(
                {(rng.randrange(32), rng.randrange(32)) for _ in range(5)}
                if rng.random() < 0.8 else []
            )
            if True else None,
            1: PartialInjection([]),
        }
        # build two random small injections, retrying collisions
        for idx in (0, 1):
            pairs = []
            dom, ran = set(), set()
            for _ in range(rng.randrange(0, 6)):
                a, b = rng.randrange(32), rng.randrange(32)
                if a in dom or b in ran:
                    continue
                dom.add(a)
                ran.add(b)
                pairs.append((a, b))
            assign[idx] = PartialInjection(pairs)
        for n in range(0, 32, 3):
            direct = naive_eval(seq, assign, ctx, n, WIN)
            reduced = evaluate(w, assign, ctx, n, WIN)
            if direct is not None and reduced is not None:
                assert direct == reduced


def test_initial_segment_matches_path_elements():
    ctx = make_ctx()
    p = PartialInjection([(0, 1), (1, 4), (4, 2)])
    w = reduce_letters([ctx.handle("g0"), x(), x(), ctx.handle("g1")], ctx)
    path, _ = evaluation_path(w, {0: p}, ctx, 3, WIN)
    for i in range(len(w) + 1):
        seg_val = evaluate(initial_segment(w, i), {0: p}, ctx, 3, WIN)
        if i < len(path):
            assert seg_val == path[i]


def test_parse_word_syntax():
    ctx = make_ctx()
    w = parse_word("g0 x^2 g1", ctx)
    assert w.render() == "g0 x0^2 g1"
    w = parse_word("g0^-1 x g0", ctx)
    assert len(w) == 3
    w = parse_word("x0 x1^-1", ctx)
    assert w.letters == (x(0), x(1, -1))
    w = parse_word("x^-3", ctx)
    assert word_length(w) == 3
    with pytest.raises(ValueError):
        parse_word("x^0", ctx)
    with pytest.raises(KeyError):
        parse_word("nope", ctx)


def test_invert_word_involution():
    ctx = make_ctx()
    w = parse_word("g1 x^2 g0", ctx)
    assert invert_word(invert_word(w)) == w
    assert invert_word(w).render() == "g0^-1 x0^-2 g1^-1"

"""Seeded random generators for identity suites and property tests.

Everything takes an explicit ``random.Random`` so runs are reproducible;
coefficients are kept small to keep exact arithmetic fast.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .cyclotomic import Cyc, degree
from .forms import Form
from .manifold import ModelManifold


def random_cyc(rng: random.Random, order: int, zero_ok: bool = True) -> Cyc:
    d = degree(order)
    while True:
        coeffs = [
            Fraction(rng.randint(-2, 2), rng.choice((1, 1, 2, 3))) for _ in range(d)
        ]
        val = Cyc(order, coeffs)
        if zero_ok or not val.is_zero():
            return val


def random_freq(rng: random.Random, dim: int, span: int = 2) -> tuple:
    return tuple(rng.randint(-span, span) for _ in range(dim))


def random_texp(rng: random.Random, level: int, max_exp: int = 2) -> tuple:
    return tuple(rng.randint(0, max_exp) for _ in range(level))


def random_subset(rng: random.Random, n: int, size: int) -> tuple:
    return tuple(sorted(rng.sample(range(n), size)))


def random_form(
    rng: random.Random,
    manifold: ModelManifold,
    level: int,
    r: int | None = None,
    s: int | None = None,
    nterms: int = 2,
    span: int = 2,
) -> Form:
    """A small random form; fix (r, s) for a homogeneous bidegree."""
    out = Form(manifold, level)
    for _ in range(nterms):
        ri = rng.randint(0, manifold.dim) if r is None else r
        si = rng.randint(0, level) if s is None else s
        key = (
            random_freq(rng, manifold.dim, span),
            random_texp(rng, level),
            random_subset(rng, manifold.dim, ri),
            random_subset(rng, level, si),
        )
        out._add_term(key, random_cyc(rng, manifold.order))
    return out


def random_function(rng: random.Random, manifold: ModelManifold, level: int = 0) -> Form:
    return random_form(rng, manifold, level, r=0, s=0)


def random_invariant_form(
    rng: random.Random,
    manifold: ModelManifold,
    group,
    level: int,
    r: int | None = None,
    s: int | None = None,
    nterms: int = 2,
) -> Form:
    """Group average of a random form (invariant under every pullback)."""
    raw = random_form(rng, manifold, level, r=r, s=s, nterms=nterms)
    total = Form(manifold, level)
    for g in group.elements():
        total = total + raw.act_group(group, g)
    return total.scale(Fraction(1, group.size))


def random_end(
    rng: random.Random,
    datum,
    level: int,
    entries: int = 2,
    r: int | None = None,
    s: int | None = None,
    nterms: int = 1,
    span: int = 1,
):
    """A sparse random endomorphism matrix with Form entries."""
    from .endo import EndMatrix

    out = EndMatrix(datum, level)
    size = datum.group.size
    for _ in range(entries):
        g, h = rng.randrange(size), rng.randrange(size)
        form = random_form(rng, datum.manifold, level, r=r, s=s, nterms=nterms, span=span)
        out._add_entry((g, h), form)
    return out


def random_end_section(rng: random.Random, datum, level: int = 0, entries: int = 2):
    """A random section (function entries, no differentials)."""
    out = random_end(rng, datum, level, entries=entries, r=0, s=0)
    # strip accidental t-dependence so arguments are genuine sections
    for key, form in list(out.entries.items()):
        cleaned = {}
        for (freq, texp, dxs, dts), coeff in form.terms.items():
            flat = (freq, (0,) * level, dxs, dts)
            cleaned[flat] = cleaned.get(flat, 0) + coeff
        form.terms = {k: c for k, c in cleaned.items() if c}
    return out


# -- cochain-layer samplers ----------------------------------------------------------


def random_ulaurent(rng: random.Random, order: int, span: int = 1):
    from .homology import ULaurent

    return ULaurent(
        order, {p: random_cyc(rng, order) for p in range(-span, span + 1)}
    )


def random_conv_section(rng: random.Random, datum, parts: int = 2):
    """A random finitely supported convolution section."""
    from .homology import ConvSection

    out = ConvSection(datum)
    for _ in range(parts):
        g = rng.randrange(datum.group.size)
        out._add_part(g, random_function(rng, datum.manifold))
    return out


def random_end_args(rng: random.Random, datum, n: int, scalar: bool = True):
    """(a0~, a1, .., an): a random unitized section and n plain sections."""
    from .homology import Unitized

    s = random_cyc(rng, datum.manifold.order) if scalar else 0
    head = Unitized(random_end_section(rng, datum), s)
    return (head,) + tuple(random_end_section(rng, datum) for _ in range(n))


def random_conv_args(rng: random.Random, datum, n: int, scalar: bool = True):
    """Convolution-algebra arguments with a unitized zeroth slot."""
    from .homology import Unitized

    s = random_cyc(rng, datum.manifold.order) if scalar else 0
    head = Unitized(random_conv_section(rng, datum), s)
    return (head,) + tuple(random_conv_section(rng, datum) for _ in range(n))


def random_matched_args(rng: random.Random, datum, n: int, scalar: bool = False):
    """A cyclically matched elementary chain E_{r0,r1} .. E_{rn,r0}."""
    from .endo import EndMatrix
    from .homology import Unitized

    size = datum.group.size
    rows = [rng.randrange(size) for _ in range(n + 1)]
    mats = []
    for i in range(n + 1):
        fn = random_function(rng, datum.manifold)
        if fn.is_zero():
            fn = Form.one(datum.manifold, 0)
        mats.append(EndMatrix.single(datum, 0, rows[i], rows[(i + 1) % (n + 1)], fn))
    s = random_cyc(rng, datum.manifold.order) if scalar else 0
    return (Unitized(mats[0], s),) + tuple(mats[1:])


def random_trace_cochain(
    rng: random.Random, datum, normalized: bool = True, diagonal: bool = True
):
    """A random trace-word cochain evaluator over endomorphism sections.

    The arity-n value is u^{w_n} times the mean trace of the word
    X_0 a0 X_1 q(a1) .. X_n q(an) with fixed random interleavers X_i
    (diagonal by default, so values live on matched chains) and q the
    entrywise projection killing the unit (so interior unit slots die
    and the cyclic boundary identities close on the nose).  Interleavers
    and the per-arity weights w_n derive from one draw of ``rng``, so
    the evaluator is a fixed multilinear cochain.
    """
    from .endo import EndMatrix
    from .homology import Cochain, EndAlgebra, ULaurent, mean_coefficient, normalize_section

    base = rng.randrange(2**30)
    manifold = datum.manifold

    def interleaver(i: int):
        sub = random.Random(base + 7919 * (i + 1))
        if diagonal:
            diag = []
            for _ in datum.group.elements():
                fn = random_function(sub, manifold)
                diag.append(fn if not fn.is_zero() else Form.one(manifold, 0))
            return EndMatrix.diagonal(datum, 0, diag)
        return random_end_section(sub, datum, entries=3)

    def weight(n: int) -> int:
        return random.Random(base + 104729 * (n + 1)).choice((-1, 0, 1))

    def fn(args):
        unit = EndMatrix.identity(datum, 0)
        word = interleaver(0) * args[0].internal(unit)
        for i, a in enumerate(args[1:], start=1):
            word = word * interleaver(i)
            word = word * (normalize_section(a) if normalized else a)
        val = mean_coefficient(word.trace())
        return ULaurent.of(manifold.order, val, weight(len(args) - 1))

    return Cochain(EndAlgebra(datum), fn)


def random_group_cochain(
    rng: random.Random,
    datum,
    garity: int,
    homogeneous: bool = True,
    normalized: bool = True,
    diagonal: bool = True,
):
    """A random group cochain with independent trace-word values per tuple.

    Each group tuple gets its own deterministic sub-seed, so the cochain
    is a fixed function of tuples even though values are built lazily.
    """
    from .homology import EndAlgebra, GroupCochain

    base = rng.randrange(2**30)
    size = datum.group.size

    def fn(gtuple):
        idx = 0
        for g in gtuple:
            idx = idx * (size + 1) + (g + 1)
        sub = random.Random(base + 524287 * idx)
        return random_trace_cochain(sub, datum, normalized=normalized, diagonal=diagonal)

    return GroupCochain(EndAlgebra(datum), garity, fn, homogeneous=homogeneous)

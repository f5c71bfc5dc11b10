"""Independent brute-force constructions for the cochain layer.

Everything here recomputes a quantity from first principles with a
different algorithm than the package uses: the twisted convolution by a
dense double loop over coefficient tables, the cyclic boundary by
explicitly composed rotation/insertion steps, the homogeneous
coboundary via index combinations, and the matched-chain decomposition
by filtering the full cartesian product of entry choices.
"""

import itertools


def dense_conv(size, mult, lam_coeff, a, b):
    """Twisted convolution of {g: Cyc} tables over a point base.

    mult(g1, g2) is the group law, lam_coeff(g1, g2) the multiplier
    coefficient; the base being a point, parts are plain coefficients
    and the translation action is trivial.
    """
    out = {}
    for g1 in range(size):
        for g2 in range(size):
            if g1 not in a or g2 not in b:
                continue
            g = mult(g1, g2)
            term = lam_coeff(g1, g2) * a[g1] * b[g2]
            if g in out:
                term = out[g] + term
            if term.is_zero():
                out.pop(g, None)
            else:
                out[g] = term
    return out


def hochschild_b(evaluate, multiply, args):
    """Alternating face sum, with faces produced by an explicit surgery list."""
    n = len(args) - 1
    faces = []
    for i in range(n):
        faces.append(args[:i] + (multiply(args[i], args[i + 1]),) + args[i + 2:])
    faces.append((multiply(args[-1], args[0]),) + args[1:-1])
    total = None
    for i, face in enumerate(faces):
        term = evaluate(face)
        if i % 2:
            term = -term
        total = term if total is None else total + term
    return total


def rotation_B(evaluate, internalize, formal_unit, args):
    """Cyclic boundary assembled from single-step rotations.

    The ring (a0 internalized, a1, .., an) is rotated one slot at a
    time; after i steps the formal unit is prepended and the value
    weighted by (-1)^(n i).  Composing single steps, rather than
    slicing, exercises the same operator along a different path.
    """
    n = len(args) - 1
    ring = [internalize(args[0])] + list(args[1:])
    total = None
    for i in range(n + 1):
        term = evaluate((formal_unit,) + tuple(ring))
        if (n * i) % 2:
            term = -term
        total = term if total is None else total + term
        ring = ring[1:] + ring[:1]
    return total


def drop_coboundary(value, gtuple):
    """Homogeneous coboundary via kept-index combinations.

    Each size-(len-1) combination of indices in increasing order is one
    face; its sign is read off from the unique dropped position.
    """
    indices = range(len(gtuple))
    total = None
    for kept in itertools.combinations(indices, len(gtuple) - 1):
        dropped = (set(indices) - set(kept)).pop()
        term = value(tuple(gtuple[i] for i in kept))
        if dropped % 2:
            term = -term
        total = term if total is None else total + term
    return total


def chain_components(entry_tables):
    """All cyclically matched entry choices, by full enumeration.

    entry_tables is a list of {(g, h): form} dicts; returns the sorted
    list of pick tuples ((g0, h0), .., (gn, hn)) with h_i = g_{i+1}
    cyclically.  This is the filter-everything counterpart of the
    package's depth-first walk.
    """
    out = []
    for picks in itertools.product(*[sorted(t) for t in entry_tables]):
        if all(picks[i][1] == picks[(i + 1) % len(picks)][0] for i in range(len(picks))):
            out.append(picks)
    return sorted(out)

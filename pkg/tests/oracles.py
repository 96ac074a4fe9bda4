"""Independent reference computations used only by the tests."""

from collections import defaultdict


def composable_sequences(basis, length):
    """All written tuples (a_l, ..., a_1) of basis morphisms that compose."""
    by_source = defaultdict(list)
    for b in basis:
        by_source[b.source].append(b)
    seqs = [(b,) for b in basis]
    for _ in range(length - 1):
        # prepend a_{r+1}, which must start where the current leftmost ends
        seqs = [(b,) + s for s in seqs for b in by_source[s[0].target]]
    return seqs


def ainf_lhs(ops, seq):
    """The double sum of the A-infinity relation on one written sequence."""
    l = len(seq)
    a = {r: seq[l - r] for r in range(1, l + 1)}
    total = defaultdict(int)
    for i in range(0, l):
        for j in range(i + 1, l + 1):
            inner = tuple(a[r] for r in range(j, i, -1))
            inner_out = ops.get(inner, {})
            if not inner_out:
                continue
            sign = (-1) ** ((sum(a[r].degree for r in range(1, i + 1)) - i) % 2)
            left = tuple(a[r] for r in range(l, j, -1))
            right = tuple(a[r] for r in range(i, 0, -1))
            for y, cy in inner_out.items():
                for z, cz in ops.get(left + (y,) + right, {}).items():
                    total[z] += sign * cy * cz
    return {z: c for z, c in total.items() if c}


def brute_force_residuals(C, max_length):
    out = {}
    for l in range(1, max_length + 1):
        for seq in composable_sequences(C.basis, l):
            r = ainf_lhs(C.operations, seq)
            if r:
                out[seq] = r
    return out

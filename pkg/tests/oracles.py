"""Independent reference computations used only by the tests."""

from fractions import Fraction


def sylvester_resultant(p, q):
    """Resultant of two polynomials (ascending integer coefficients) via the
    Sylvester matrix; independent of the library's norm-based route."""
    p = [Fraction(c) for c in p]
    q = [Fraction(c) for c in q]
    while p and p[-1] == 0:
        p.pop()
    while q and q[-1] == 0:
        q.pop()
    n, m = len(p) - 1, len(q) - 1
    size = n + m
    rows = []
    pr = list(reversed(p))
    qr = list(reversed(q))
    for i in range(m):
        rows.append([Fraction(0)] * i + pr + [Fraction(0)] * (size - i - len(pr)))
    for i in range(n):
        rows.append([Fraction(0)] * i + qr + [Fraction(0)] * (size - i - len(qr)))
    return _det(rows)


def _det(rows):
    n = len(rows)
    a = [row[:] for row in rows]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] * inv
            if f:
                for cc in range(c, n):
                    a[r][cc] -= f * a[c][cc]
    return det


def naive_admissible(word, d_pre, d_per):
    """Admissibility straight from the definition: every suffix of the
    zero-extended word lexicographically below the quasi-greedy sequence."""

    def d_at(i):
        if i <= len(d_pre):
            return d_pre[i - 1]
        return d_per[(i - len(d_pre) - 1) % len(d_per)]

    n = len(word)
    window = n + len(d_pre) + len(d_per) + 2
    for start in range(n):
        for j in range(1, window + 1):
            w = word[start + j - 1] if start + j - 1 < n else 0
            d = d_at(j)
            if w < d:
                break
            if w > d:
                return False
        else:
            return False  # suffix never fell strictly below
    return True


def languages_agree(automaton, tracker, max_len=None):
    """Exact language equality between the automaton (from state 0) and the
    definitional subset tracker, by product-graph exploration.

    Covers all word lengths, not just a finite cutoff; returns the first
    disagreeing word, or None."""
    start = (0, tracker.start)
    seen = {start}
    todo = [(start, ())]
    while todo:
        (sa, sb), word = todo.pop()
        if max_len is not None and len(word) >= max_len:
            continue
        for e in tracker.alphabet:
            ta = automaton.transitions[sa][e]
            tb = tracker.step(sb, e)
            if (ta is None) != (tb is None):
                return word + (e,)
            if ta is None:
                continue
            nxt = (ta, tb)
            if nxt not in seen:
                seen.add(nxt)
                todo.append((nxt, word + (e,)))
    return None

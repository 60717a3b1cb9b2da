import itertools
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))


def run_nfa(aut, letters):
    """Independent membership check: plain subset simulation, no package code."""
    current = {aut.initial}
    trans = {}
    for (q, letter, r) in aut.transitions:
        trans.setdefault((q, letter), set()).add(r)
    for letter in letters:
        nxt = set()
        for q in current:
            nxt |= trans.get((q, tuple(letter)), set())
        current = nxt
        if not current:
            return False
    return bool(current & aut.accepting)


def conv(*words):
    """Independent convolution for the oracle side."""
    ws = [tuple(w) for w in words]
    n = max((len(w) for w in ws), default=0)
    return [tuple(w[i] if i < len(w) else "#" for w in ws) for i in range(n)]


def words_upto(alphabet, max_len):
    for n in range(max_len + 1):
        for tup in itertools.product(alphabet, repeat=n):
            yield tup


def tuples_upto(alphabet, arity, max_len):
    pool = list(words_upto(alphabet, max_len))
    return itertools.product(pool, repeat=arity)


def language(aut, max_len):
    """All accepted word tuples with every component of length <= max_len."""
    out = set()
    for tup in tuples_upto(aut.alphabet, aut.arity, max_len):
        letters = conv(*tup)
        if not letters:
            if aut.initial in aut.accepting:
                out.add(tup)
            continue
        if run_nfa(aut, letters):
            out.add(tup)
    return out

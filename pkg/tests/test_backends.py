import random

import pytest

from colorrange.backends import BACKENDS, BitTrieLocator, SortedArrayLocator
from colorrange.core import DuplicateX, NotFound


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_basic_protocol(name):
    loc = BACKENDS[name]([5, 1, 9])
    assert loc.succ(1) == 1
    assert loc.succ(2) == 5
    assert loc.succ(10) is None
    assert loc.pred(9) == 9
    assert loc.pred(8) == 5
    assert loc.pred(0) is None
    assert loc.any_in(2, 4) is None
    assert loc.any_in(2, 5) == 5
    assert list(loc.iter_range(1, 9)) == [1, 5, 9]
    with pytest.raises(DuplicateX):
        loc.insert(5)
    loc.delete(5)
    with pytest.raises(NotFound):
        loc.delete(5)
    assert loc.succ(2) == 9


def test_backends_agree_on_random_ops():
    rng = random.Random(2024)
    ref = SortedArrayLocator()
    trie = BitTrieLocator(bits=20)
    keys = set()
    for _ in range(4000):
        op = rng.random()
        if op < 0.45 or not keys:
            x = rng.randrange(1, 1 << 18)
            if x not in keys:
                keys.add(x)
                ref.insert(x)
                trie.insert(x)
        elif op < 0.7:
            x = rng.choice(sorted(keys))
            keys.discard(x)
            ref.delete(x)
            trie.delete(x)
        else:
            x = rng.randrange(0, 1 << 18)
            assert ref.succ(x) == trie.succ(x)
            assert ref.pred(x) == trie.pred(x)
            a = rng.randrange(1, 1 << 18)
            b = rng.randrange(a, 1 << 18)
            assert ref.any_in(a, b) == trie.any_in(a, b)
    assert len(ref) == len(trie) == len(keys)

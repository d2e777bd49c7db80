"""String-level word algebra.

Words are plain strings over signed letters; the inverse of a letter is its
swapped case. Everything here works on `str` so the hot loops of ball
construction and intersection counting avoid object overhead.
"""

from collections.abc import Iterator, Sequence

import numpy as np


def inverse(word: str) -> str:
    return word[::-1].swapcase()


def free_reduce(word: str) -> str:
    stack: list[str] = []
    for ch in word:
        if stack and stack[-1] == ch.swapcase():
            stack.pop()
        else:
            stack.append(ch)
    return "".join(stack)


def cyclic_reduce(word: str) -> str:
    """Freely and cyclically reduce."""
    w = free_reduce(word)
    i, j = 0, len(w) - 1
    while i < j and w[i] == w[j].swapcase():
        i += 1
        j -= 1
    return w[i : j + 1]


def cyclic_reduce_with_conjugator(word: str) -> tuple[str, str]:
    """Return (core, x) with core = x . word . x^-1 freely."""
    w = free_reduce(word)
    i, j = 0, len(w) - 1
    while i < j and w[i] == w[j].swapcase():
        i += 1
        j -= 1
    return w[i : j + 1], inverse(w[:i])


def rotations(word: str) -> list[str]:
    return [word[i:] + word[:i] for i in range(len(word))] or [""]


def least_rotation(word: str) -> str:
    return min(rotations(word))


def is_cyclically_reduced(word: str) -> bool:
    return free_reduce(word) == word and (
        len(word) < 2 or word[0] != word[-1].swapcase()
    )


def is_freely_reduced(word: str) -> bool:
    return all(a != b.swapcase() for a, b in zip(word, word[1:]))


def conjugate(word: str, by: str) -> str:
    """by . word . by^-1, freely reduced."""
    return free_reduce(by + word + inverse(by))


def cyclic_subword(word: str, start: int, length: int) -> str:
    """Subword read around the cycle."""
    n = len(word)
    return "".join(word[(start + k) % n] for k in range(length))


def primitive_root(word: str) -> tuple[str, int]:
    """Return (root, k) with word == root * k and k maximal."""
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d], n // d
    return word, 1


def abelianization(word: str, names: Sequence[str]) -> tuple[int, ...]:
    counts = dict.fromkeys(names, 0)
    for ch in word:
        if ch.islower():
            counts[ch] += 1
        else:
            counts[ch.lower()] -= 1
    return tuple(counts[n] for n in names)


def substitute(word: str, images: dict[str, str]) -> str:
    """Apply a letter substitution given on lowercase letters, then reduce."""
    out = []
    for ch in word:
        if ch.islower():
            out.append(images[ch])
        else:
            out.append(inverse(images[ch.lower()]))
    return free_reduce("".join(out))


def random_reduced_word(rng: np.random.Generator, letters: Sequence[str], length: int) -> str:
    """Uniform freely reduced word of exactly the given length."""
    out: list[str] = []
    while len(out) < length:
        ch = letters[int(rng.integers(len(letters)))]
        if out and out[-1] == ch.swapcase():
            continue
        out.append(ch)
    return "".join(out)


def random_cyclic_word(rng: np.random.Generator, letters: Sequence[str], length: int) -> str:
    """Cyclically reduced word of exactly the given length."""
    while True:
        w = random_reduced_word(rng, letters, length)
        if is_cyclically_reduced(w):
            return w


def shortlex_words(letters: Sequence[str], max_length: int) -> Iterator[str]:
    """All freely reduced words up to max_length in shortlex order."""
    layer = [""]
    yield ""
    for _ in range(max_length):
        nxt = []
        for w in layer:
            for ch in letters:
                if w and w[-1] == ch.swapcase():
                    continue
                nxt.append(w + ch)
        yield from nxt
        layer = nxt

"""Independent re-implementations of the four domain simulators.

These are deliberately written in a different style from the package
(restart-from-scratch per query, different data structures) so that
agreement between the two is meaningful evidence of correctness rather
than a tautology.
"""

from __future__ import annotations

from collections import deque

VOWELS = "aeiou"


def modrec_restart(
    modulus: int,
    coeff_a: int,
    coeff_b: int,
    coeff_c: int,
    x0: int,
    x1: int,
    steps: int,
) -> int:
    """Run the modular recurrence from scratch and return the final value."""
    seq = [x0 % modulus, x1 % modulus]
    for t in range(1, steps + 1):
        if t % 2 == 1:
            raw = (
                coeff_a * seq[-1]
                + coeff_b * seq[-2]
                + coeff_c * (seq[-1] + 1) ** 2
            )
        else:
            raw = (
                coeff_a * seq[-1]
                - coeff_b * seq[-2]
                + coeff_c * (seq[-2] + 1) ** 2
            )
        seq.append(raw % modulus)
    return seq[-1]


def reactor_restart(
    substrate: int, product: int, cofactor: int, regen_every: int, ticks: int
) -> int:
    """Run the batch reactor from scratch and return the product count."""
    state = (substrate, product, cofactor)
    for t in range(1, ticks + 1):
        a, b, c = state
        if a > 0 and c > 0:
            a, b, c = a - 1, b + 1, c - 1
        if t % regen_every == 0:
            c += 1
        state = (a, b, c)
    return state[1]


def reactor_state_restart(
    substrate: int, product: int, cofactor: int, regen_every: int, ticks: int
) -> tuple[int, int, int]:
    """Full (substrate, product, cofactor) state after the given ticks."""
    state = (substrate, product, cofactor)
    for t in range(1, ticks + 1):
        a, b, c = state
        if a > 0 and c > 0:
            a, b, c = a - 1, b + 1, c - 1
        if t % regen_every == 0:
            c += 1
        state = (a, b, c)
    return state


def maze_restart(
    rows: list[str],
    start_row: int,
    start_col: int,
    moves: int,
    suffix_len: int,
) -> str:
    """Walk the self-mutating maze from scratch; return the visited suffix.

    The grid is kept as a coordinate dict rather than nested lists so the
    rotation bookkeeping is independent of the package implementation.
    """
    height, width = len(rows), len(rows[0])
    grid = {(r, c): rows[r][c] for r in range(height) for c in range(width)}
    r, c = start_row, start_col
    visited = [grid[(r, c)]]
    for _ in range(moves):
        ch = grid[(r, c)]
        if ch in VOWELS:
            c = (c + 1) % width
        else:
            r = (r + 1) % height
        visited.append(grid[(r, c)])
        if ch in VOWELS:
            column = [grid[(i, c)] for i in range(height)]
            shifted = column[1:] + column[:1]
            for i in range(height):
                grid[(i, c)] = shifted[i]
        else:
            row = [grid[(r, j)] for j in range(width)]
            shifted = row[1:] + row[:1]
            for j in range(width):
                grid[(r, j)] = shifted[j]
    return "".join(visited[-suffix_len:])


def strprog_restart(init_state: str, iterations: int) -> str:
    """Interpret the rotate-then-shift string program from scratch."""
    s = init_state
    for i in range(iterations):
        d = deque(s)
        d.rotate(-(i % len(s)))
        s = "".join(
            VOWELS[(VOWELS.index(ch) + 1) % 5] if ch in VOWELS else ch
            for ch in d
        )
    return s

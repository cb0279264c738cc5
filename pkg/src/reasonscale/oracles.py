"""Step-simulation oracles for the four question domains.

Each oracle has two entry points: a single-shot form that returns the
answer after exactly ``steps`` updates, and a ``*_series`` form that
runs one simulation and returns the answers after 1..max_steps updates.
The series form is what family generation uses; the single-shot form
restarts from scratch on every call, which keeps it trivially correct
and makes it a natural cross-check for the series form.

Answers are returned in canonical form: integers as plain ints,
strings lowercase.
"""

from __future__ import annotations

from .errors import ParameterError

VOWELS = frozenset("aeiou")

# Vowel successor along the cycle a -> e -> i -> o -> u -> a.
_VOWEL_NEXT = {"a": "e", "e": "i", "i": "o", "o": "u", "u": "a"}
_VOWEL_TABLE = str.maketrans(_VOWEL_NEXT)


def _check_steps(steps: int) -> None:
    if steps < 0:
        raise ParameterError(f"steps must be >= 0, got {steps}")


# ---------------------------------------------------------------------------
# math: coupled modular recurrence


def _phi(z: int) -> int:
    return (z + 1) * (z + 1)


def _validate_modrec(modulus: int) -> None:
    if modulus < 2:
        raise ParameterError(f"modulus must be >= 2, got {modulus}")


def modular_recurrence_series(
    modulus: int,
    coeff_a: int,
    coeff_b: int,
    coeff_c: int,
    x0: int,
    x1: int,
    max_steps: int,
) -> list[int]:
    """Residues after 1..max_steps updates of the two-term recurrence.

    Update t (1-based) produces the next term from the current pair
    (prev, cur). Odd t:  A*cur + B*prev + C*(cur+1)^2  (mod M).
    Even t:              A*cur - B*prev + C*(prev+1)^2 (mod M).
    Python's % already yields non-negative remainders for positive M.
    """
    _validate_modrec(modulus)
    _check_steps(max_steps)
    prev = x0 % modulus
    cur = x1 % modulus
    out = []
    for t in range(1, max_steps + 1):
        if t % 2 == 1:
            nxt = (coeff_a * cur + coeff_b * prev + coeff_c * _phi(cur)) % modulus
        else:
            nxt = (coeff_a * cur - coeff_b * prev + coeff_c * _phi(prev)) % modulus
        prev, cur = cur, nxt
        out.append(cur)
    return out


def modular_recurrence(
    modulus: int,
    coeff_a: int,
    coeff_b: int,
    coeff_c: int,
    x0: int,
    x1: int,
    steps: int,
) -> int:
    """Residue after exactly ``steps`` updates; steps=0 returns x1 mod M."""
    if steps == 0:
        _validate_modrec(modulus)
        return x1 % modulus
    return modular_recurrence_series(modulus, coeff_a, coeff_b, coeff_c, x0, x1, steps)[-1]


# ---------------------------------------------------------------------------
# science: batch reactor with periodic cofactor regeneration


def bioreactor_series(
    substrate: int,
    product: int,
    cofactor: int,
    regen_every: int,
    max_steps: int,
) -> list[int]:
    """Product counts after 1..max_steps ticks.

    Each tick first reacts (if both substrate and cofactor are positive:
    substrate-1, product+1, cofactor-1), then regenerates one cofactor
    unit when the tick index is a multiple of regen_every.
    """
    if regen_every < 1:
        raise ParameterError(f"regen_every must be >= 1, got {regen_every}")
    if min(substrate, product, cofactor) < 0:
        raise ParameterError("initial species counts must be non-negative")
    _check_steps(max_steps)
    a, b, c = substrate, product, cofactor
    out = []
    for t in range(1, max_steps + 1):
        if a > 0 and c > 0:
            a -= 1
            b += 1
            c -= 1
        if t % regen_every == 0:
            c += 1
        out.append(b)
    return out


def bioreactor(
    substrate: int,
    product: int,
    cofactor: int,
    regen_every: int,
    steps: int,
) -> int:
    if steps == 0:
        if regen_every < 1:
            raise ParameterError(f"regen_every must be >= 1, got {regen_every}")
        return product
    return bioreactor_series(substrate, product, cofactor, regen_every, steps)[-1]


# ---------------------------------------------------------------------------
# language: letter walk on a self-modifying grid


def _validate_grid(grid: list[str]) -> tuple[int, int]:
    if not grid or not grid[0]:
        raise ParameterError("grid must be non-empty")
    height = len(grid)
    width = len(grid[0])
    for row in grid:
        if len(row) != width:
            raise ParameterError("grid rows must all have the same width")
        if not row.islower() or not row.isalpha():
            raise ParameterError("grid cells must be lowercase letters")
    return height, width


def maze_walk_series(
    grid: list[str],
    start_row: int,
    start_col: int,
    max_moves: int,
    suffix_len: int,
) -> list[str]:
    """Recorded-path suffixes after 1..max_moves moves.

    The walker starts at (start_row, start_col) and records that cell's
    letter. Each move looks at the current letter ch: vowels step right,
    consonants step down, both wrapping around the edges. The destination
    letter is recorded, then the grid mutates: a vowel ch rotates the
    destination's column up by one, a consonant ch rotates the
    destination's row left by one. The answer after n moves is the last
    min(suffix_len, n+1) recorded letters.
    """
    height, width = _validate_grid(grid)
    if not (0 <= start_row < height and 0 <= start_col < width):
        raise ParameterError(
            f"start ({start_row}, {start_col}) out of bounds for {height}x{width} grid"
        )
    if suffix_len < 1:
        raise ParameterError(f"suffix_len must be >= 1, got {suffix_len}")
    _check_steps(max_moves)
    cells = [list(row) for row in grid]
    r, c = start_row, start_col
    path = [cells[r][c]]
    out = []
    for _ in range(max_moves):
        ch = cells[r][c]
        if ch in VOWELS:
            c = (c + 1) % width
        else:
            r = (r + 1) % height
        path.append(cells[r][c])
        if ch in VOWELS:
            col = [cells[i][c] for i in range(height)]
            for i in range(height):
                cells[i][c] = col[(i + 1) % height]
        else:
            row = cells[r]
            cells[r] = row[1:] + row[:1]
        out.append("".join(path[-suffix_len:]))
    return out


def maze_walk(
    grid: list[str],
    start_row: int,
    start_col: int,
    moves: int,
    suffix_len: int,
) -> str:
    if moves == 0:
        height, width = _validate_grid(grid)
        if not (0 <= start_row < height and 0 <= start_col < width):
            raise ParameterError(
                f"start ({start_row}, {start_col}) out of bounds for {height}x{width} grid"
            )
        if suffix_len < 1:
            raise ParameterError(f"suffix_len must be >= 1, got {suffix_len}")
        return grid[start_row][start_col]
    return maze_walk_series(grid, start_row, start_col, moves, suffix_len)[-1]


# ---------------------------------------------------------------------------
# code: rotate-and-shift string rewriting


def string_rewrite_series(init_state: str, max_iterations: int) -> list[str]:
    """States after 1..max_iterations rewrite passes.

    Pass i (0-based) rotates the string left by i mod len(s), then maps
    every vowel one step along a -> e -> i -> o -> u -> a.
    """
    if not init_state:
        raise ParameterError("init_state must be non-empty")
    if not (init_state.islower() and init_state.isalpha()):
        raise ParameterError("init_state must be lowercase letters")
    _check_steps(max_iterations)
    s = init_state
    out = []
    for i in range(max_iterations):
        r = i % len(s)
        s = (s[r:] + s[:r]).translate(_VOWEL_TABLE)
        out.append(s)
    return out


def string_rewrite(init_state: str, iterations: int) -> str:
    if iterations == 0:
        if not init_state:
            raise ParameterError("init_state must be non-empty")
        if not (init_state.islower() and init_state.isalpha()):
            raise ParameterError("init_state must be lowercase letters")
        return init_state
    return string_rewrite_series(init_state, iterations)[-1]

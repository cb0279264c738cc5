"""Seed specifications and catalogs for question families.

A seed fixes a domain, a parameter set for that domain's oracle, and a
text template. A family is the seed rendered at variant indices
1..max_variant, where the variant index scales the number of simulation
steps the solver must perform. Catalogs are JSON files keyed by seed_id
so benchmark definitions can be versioned alongside results.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .errors import ConfigError, ParameterError, TemplateError

DOMAINS = ("math", "science", "language", "code")

ANSWER_INSTRUCTION = "Give only the final answer, inside \\boxed{}."

MATH_TEMPLATE = (
    "Consider a sequence of residues modulo {modulus}. The first two terms are "
    "x_0 = {x0} and x_1 = {x1}. Update t (for t = 1, 2, 3, ...) produces the "
    "next term from the two most recent ones. When t is odd:\n"
    "    x_(t+1) = ({coeff_a} * x_t + {coeff_b} * x_(t-1) + {coeff_c} * (x_t + 1)^2) mod {modulus}\n"
    "When t is even:\n"
    "    x_(t+1) = ({coeff_a} * x_t - {coeff_b} * x_(t-1) + {coeff_c} * (x_(t-1) + 1)^2) mod {modulus}\n"
    "Every term is reduced to the range 0..{modulus_minus_1}. Apply exactly "
    "{updates} updates, one after another, and report the value of x_{target}. "
) + ANSWER_INSTRUCTION

SCIENCE_TEMPLATE = (
    "A batch reactor is loaded with {substrate} units of substrate S, {product} "
    "units of product P, and {cofactor} units of cofactor C. Time advances in "
    "ticks t = 1, 2, 3, .... Each tick has two stages. First the conversion "
    "stage: if at least one unit of S and at least one unit of C are present, "
    "exactly one unit of S and one unit of C are consumed and one unit of P is "
    "produced; otherwise nothing is converted that tick. Then the regeneration "
    "stage: if t is a multiple of {regen_every}, one unit of C is added. "
    "How many units of P are present after tick {steps}? "
) + ANSWER_INSTRUCTION

LANGUAGE_TEMPLATE = (
    "The grid below has {height} rows and {width} columns of lowercase letters. "
    "Rows are numbered from 0 at the top, columns from 0 at the left:\n"
    "{grid_block}\n"
    "A walker starts on the cell at row {start_row}, column {start_col} and "
    "writes down the letter there. The walker then makes {moves} moves. For "
    "each move, let ch be the letter on the walker's current cell. If ch is a "
    "vowel (a, e, i, o, u) the walker moves one column to the right; otherwise "
    "it moves one row down. Both moves wrap around the grid edges. The walker "
    "writes down the letter of the cell it lands on. The grid then mutates: if "
    "ch was a vowel, the column the walker now occupies rotates up by one cell; "
    "if ch was a consonant, the row the walker now occupies rotates left by one "
    "cell. Rotations also wrap around. After all {moves} moves, report the last "
    "{suffix_len} letters the walker wrote down, joined into one string (report "
    "all of them if fewer than {suffix_len} were written). "
) + ANSWER_INSTRUCTION

CODE_TEMPLATE = (
    "Trace the following procedure by hand and report the final value of s.\n"
    "\n"
    "    s <- \"{init_state}\"\n"
    "    for i from 0 to {last_iteration}:\n"
    "        r <- i mod length(s)\n"
    "        s <- rotate_left(s, r)\n"
    "        s <- shift_vowels(s)\n"
    "\n"
    "rotate_left(s, r) moves the first r characters of s to its end, so "
    "rotate_left(\"abcde\", 2) = \"cdeab\". shift_vowels(s) replaces every "
    "vowel by its successor along the cycle a -> e -> i -> o -> u -> a and "
    "leaves consonants unchanged. The loop body runs {iterations} times. "
) + ANSWER_INSTRUCTION

DEFAULT_TEMPLATES = {
    "math": MATH_TEMPLATE,
    "science": SCIENCE_TEMPLATE,
    "language": LANGUAGE_TEMPLATE,
    "code": CODE_TEMPLATE,
}

REQUIRED_PARAMS = {
    "math": ("modulus", "coeff_a", "coeff_b", "coeff_c", "x0", "x1"),
    "science": ("substrate", "product", "cofactor", "regen_every"),
    "language": ("grid", "start_row", "start_col", "suffix_len"),
    "code": ("init_state",),
}


@dataclass(frozen=True)
class StepRule:
    """Affine map from variant index to oracle step count.

    scale >= 1 keeps the map strictly increasing, which is what makes the
    variant index a usable complexity proxy.
    """

    scale: int = 1
    offset: int = 0

    def __post_init__(self):
        if self.scale < 1:
            raise ParameterError(f"step scale must be >= 1, got {self.scale}")
        if self.offset < 0:
            raise ParameterError(f"step offset must be >= 0, got {self.offset}")

    def __call__(self, variant_index: int) -> int:
        return self.scale * variant_index + self.offset


@dataclass(frozen=True)
class SeedSpec:
    seed_id: str
    domain: str
    subject: str
    params: Mapping[str, Any]
    template: str | None = None
    steps: StepRule = field(default_factory=StepRule)

    def __post_init__(self):
        if self.domain not in DOMAINS:
            raise ParameterError(
                f"seed {self.seed_id!r}: unknown domain {self.domain!r}; "
                f"expected one of {', '.join(DOMAINS)}"
            )
        missing = [k for k in REQUIRED_PARAMS[self.domain] if k not in self.params]
        if missing:
            raise ParameterError(
                f"seed {self.seed_id!r}: missing params for domain "
                f"{self.domain}: {', '.join(missing)}"
            )

    def template_text(self) -> str:
        return self.template if self.template is not None else DEFAULT_TEMPLATES[self.domain]


def render_template(template: str, values: Mapping[str, Any]) -> str:
    """Fill {name} placeholders by literal replacement.

    Replacement (rather than str.format) lets templates contain free
    braces such as the boxed-answer instruction. Every provided key must
    appear at least once so a template cannot silently drop a parameter.
    """
    out = template
    for key, value in values.items():
        slot = "{" + key + "}"
        if slot not in out:
            raise TemplateError(f"template is missing required placeholder {slot}")
        out = out.replace(slot, str(value))
    return out


def default_catalog() -> list[SeedSpec]:
    """The four built-in reference seeds, one per domain.

    Parameter values were screened so that each family's answer sequence
    stays aperiodic over 30 variants (see check_no_shortcut).
    """
    return [
        SeedSpec(
            seed_id="mod-chain-01",
            domain="math",
            subject="modular-arithmetic",
            params={
                "modulus": 10,
                "coeff_a": 3,
                "coeff_b": 1,
                "coeff_c": 2,
                "x0": 1,
                "x1": 4,
            },
        ),
        SeedSpec(
            seed_id="batch-reactor-01",
            domain="science",
            subject="reaction-kinetics",
            params={
                "substrate": 45,
                "product": 4,
                "cofactor": 22,
                "regen_every": 3,
            },
        ),
        SeedSpec(
            seed_id="letter-maze-01",
            domain="language",
            subject="grid-navigation",
            params={
                "grid": ["plume", "orbit", "cadet", "surge"],
                "start_row": 0,
                "start_col": 0,
                "suffix_len": 5,
            },
        ),
        SeedSpec(
            seed_id="vowel-rotor-01",
            domain="code",
            subject="string-rewriting",
            params={"init_state": "waveform"},
        ),
    ]


def load_catalog(path: str | Path) -> list[SeedSpec]:
    """Load a seed catalog from a JSON file.

    Expected shape: {"seeds": [{"seed_id", "domain", "subject", "params",
    "template"?, "steps"? {"scale", "offset"}}, ...]}. seed_ids must be
    unique within a catalog.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read catalog {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"catalog {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict) or not isinstance(raw.get("seeds"), list):
        raise ConfigError(f"catalog {path} must be an object with a 'seeds' list")
    seeds = []
    seen = set()
    for idx, entry in enumerate(raw["seeds"]):
        if not isinstance(entry, dict):
            raise ConfigError(f"catalog {path}: seeds[{idx}] must be an object")
        try:
            seed_id = entry["seed_id"]
            domain = entry["domain"]
            subject = entry["subject"]
            params = entry["params"]
        except KeyError as exc:
            raise ConfigError(
                f"catalog {path}: seeds[{idx}] is missing field {exc.args[0]!r}"
            ) from exc
        if not isinstance(params, dict):
            raise ConfigError(f"catalog {path}: seeds[{idx}].params must be an object")
        if seed_id in seen:
            raise ConfigError(f"catalog {path}: duplicate seed_id {seed_id!r}")
        seen.add(seed_id)
        steps_raw = entry.get("steps") or {}
        try:
            step_rule = StepRule(
                scale=int(steps_raw.get("scale", 1)),
                offset=int(steps_raw.get("offset", 0)),
            )
            seeds.append(
                SeedSpec(
                    seed_id=seed_id,
                    domain=domain,
                    subject=subject,
                    params=params,
                    template=entry.get("template"),
                    steps=step_rule,
                )
            )
        except ParameterError as exc:
            raise ConfigError(f"catalog {path}: seeds[{idx}]: {exc}") from exc
    if not seeds:
        raise ConfigError(f"catalog {path} contains no seeds")
    return seeds
